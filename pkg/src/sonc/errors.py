class SoncError(Exception):
    """Base class for domain errors; the CLI maps these to exit code 1."""


class AmbientDimTooLarge(SoncError):
    pass


class TooLarge(SoncError):
    pass


class NotSimplicial(SoncError):
    pass


class NotInteriorPoint(SoncError):
    pass


class NegativeScale(SoncError):
    pass


class ZeroScale(SoncError):
    pass


class InvalidSubdivision(SoncError):
    pass


class CircuitNotInCell(SoncError):
    pass


class RelationViolated(SoncError):
    def __init__(self, pair, u):
        self.pair = pair
        self.u = u
        super().__init__(f"gluing relation z^u equal fails for cells {pair}, u={list(u)}")
