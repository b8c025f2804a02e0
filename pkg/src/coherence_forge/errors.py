"""Exception types raised by coherence_forge."""


class CoherenceForgeError(ValueError):
    """Base class for all library errors."""


class NotHermitian(CoherenceForgeError):
    pass


class NotPSD(CoherenceForgeError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NotComplete(CoherenceForgeError):
    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation


class DimensionMismatch(CoherenceForgeError):
    pass


class WrongDimension(CoherenceForgeError):
    pass


class OutsideBlochBall(CoherenceForgeError):
    pass


class InvalidParams(CoherenceForgeError):
    pass


class DegenerateDirection(CoherenceForgeError):
    pass


class ZeroProbabilityOutcome(CoherenceForgeError):
    pass


class SupportMismatch(CoherenceForgeError):
    pass


class SingularNormalizer(CoherenceForgeError):
    pass


class NonPositiveValue(CoherenceForgeError):
    pass


class ConfigError(CoherenceForgeError):
    pass
