"""Movie inventory model for the sample cinema workspace."""


class Movie:
    def __init__(self, title, year):
        self.title = title
        self.year = year
        self.rented = False

    def rent(self):
        if self.rented:
            raise RuntimeError("already rented")
        self.rented = True

    def hand_back(self):
        self.rented = False
