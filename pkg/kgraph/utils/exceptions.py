class KGraphError(Exception):
    pass


class FormatError(KGraphError):
    pass


class ConfigError(KGraphError):
    pass


class BadParameter(KGraphError):
    pass


class NonComposable(KGraphError):
    pass


class DegreeOutOfRange(KGraphError):
    pass


class UnknownVertex(KGraphError):
    pass


class MissingFactorization(KGraphError):
    pass


class SkeletonMismatch(KGraphError):
    pass


class RangeMismatch(KGraphError):
    pass


class InvalidAction(KGraphError):
    pass


class InvalidCocycle(KGraphError):
    pass


class NonSingletonDegree(KGraphError):
    pass


class NoSources(KGraphError):
    pass


class NoSinks(KGraphError):
    pass


class WindowTruncated(KGraphError):
    pass


class Inapplicable(KGraphError):
    pass


class InternalError(KGraphError):
    pass
