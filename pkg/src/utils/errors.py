"""
Exception hierarchy for the vacmod engine

Verification failures are reported as data (see src.verification.suite);
these exceptions signal that a computation could not be carried out at all.
"""


class VacmodError(Exception):
    """Base class for all engine errors"""


class ConfigError(VacmodError):
    """Bad command line or configuration input"""


class UnsupportedTypeError(VacmodError):
    """Cartan type label not supported"""


class ConventionError(VacmodError):
    """Inconsistent linear system or forbidden constant term (sign-convention bug)"""


class DenominatorError(VacmodError):
    """Coefficient denominator outside the allowed localization"""


class TruncationError(VacmodError):
    """Request falls outside the supported truncation window"""


class NonConformalFieldError(VacmodError):
    """Field term without exactly one current factor"""


class InvarianceError(VacmodError):
    """Vector expected to be annihilated by the level subalgebra is not"""


class NormalFormError(VacmodError):
    """Leading term not regular, or gauge block singular or unsupported"""


class MonodromyError(VacmodError):
    """Loop too close to a hyperplane or integrator step collapse"""


class RepresentationError(VacmodError):
    """Matrices of a finite-dimensional module fail the bracket relations"""
