"""Exception hierarchy. Every error raised by the package derives from ``SchwarzPickError``."""


class SchwarzPickError(Exception):
    pass


class NotHermitian(SchwarzPickError, ValueError):
    pass


class NotPSD(SchwarzPickError, ValueError):
    pass


class Singular(SchwarzPickError, ArithmeticError):
    pass


class DimMismatch(SchwarzPickError, ValueError):
    pass


class AnnulusOrigin(SchwarzPickError, ValueError):
    pass


class Unsupported(SchwarzPickError, ValueError):
    pass


class Exhausted(SchwarzPickError, RuntimeError):
    pass


class ParseError(SchwarzPickError, ValueError):
    pass


class ValidationError(SchwarzPickError, ValueError):
    pass


class OutsideDisk(SchwarzPickError, ValueError):
    pass


class OutOfRange(SchwarzPickError, ValueError):
    pass


class NotStrictContraction(SchwarzPickError, ValueError):
    pass


class OutsideDomain(SchwarzPickError, ValueError):
    pass


class DependentVectors(SchwarzPickError, ValueError):
    pass


class NotCommuting(SchwarzPickError, ValueError):
    pass


class ShapeMismatch(SchwarzPickError, ValueError):
    pass


class DimPolicyError(SchwarzPickError, ValueError):
    pass


class RankDeficient(SchwarzPickError, ValueError):
    pass


class ModulusViolation(SchwarzPickError, ValueError):
    pass


class BisectionFailed(SchwarzPickError, RuntimeError):
    pass


class ConfigError(SchwarzPickError, ValueError):
    pass
