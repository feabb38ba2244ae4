"""Entry point; lives outside the models folder on purpose."""

from models.movie import Movie
from models.rental import RentalLedger


def main():
    ledger = RentalLedger()
    ledger.rent_movie(Movie("Arrival", 2016), "m-1")
    print(ledger.active_count())


if __name__ == "__main__":
    main()
