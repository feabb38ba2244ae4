"""Rental ledger for the sample cinema workspace."""


class RentalLedger:
    def __init__(self):
        self.entries = []

    def rent_movie(self, movie, member):
        movie.rent()
        self.entries.append((movie.title, member))

    def active_count(self):
        return len(self.entries)
