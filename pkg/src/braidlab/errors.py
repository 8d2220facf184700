"""Exception types raised by braidlab."""


class BraidlabError(Exception):
    """Base class for all braidlab errors."""


class MalformedToken(BraidlabError, ValueError):
    pass


class GeneratorOutOfRange(BraidlabError, ValueError):
    pass


class StrandMismatch(BraidlabError, ValueError):
    pass


class DimensionMismatch(BraidlabError, ValueError):
    pass


class InvalidParameter(BraidlabError, ValueError):
    pass


class InadmissibleTheta(InvalidParameter):
    pass


class EighthRootRequired(InvalidParameter):
    pass


class DegenerateQ(InvalidParameter):
    pass


class OddStrandCount(InvalidParameter):
    pass


class RelationCheckFailed(BraidlabError):
    """A builder produced matrices that violate the braid relations."""

    def __init__(self, label, residual):
        super().__init__(f"{label}: relation residual {residual:.3e} exceeds tolerance")
        self.residual = residual


class NoProperInvariantSubspace(BraidlabError):
    pass


class NotUnitarizable(BraidlabError):
    pass


class NotAQubitLayout(BraidlabError, ValueError):
    pass


class AbelianForced(BraidlabError, ValueError):
    pass


class BallTooLarge(BraidlabError):
    pass
