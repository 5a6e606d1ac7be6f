"""Exceptions raised by povmforge."""


class PovmForgeError(Exception):
    """Base class for every povmforge error."""


class DimensionError(PovmForgeError, ValueError):
    """Operand shapes are incompatible."""


class NonHermitianError(PovmForgeError, ValueError):
    """A matrix expected to be Hermitian is not."""


class IndefiniteError(PovmForgeError, ValueError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""


class NotOrthonormalError(PovmForgeError, ValueError):
    """Columns expected to be orthonormal are not."""


class NotUnitaryError(PovmForgeError, ValueError):
    """A matrix expected to be unitary is not."""


class ParameterError(PovmForgeError, ValueError):
    """
    The POVM parameters violate one of their constraints.

    `constraint` names the first violated constraint and `failed_checks`
    every constraint found violated, in the order they were checked.
    """

    constraint = 'parameters'

    def __init__(self, message, constraint=None, failed_checks=None):
        """Attach the violated constraints to the error."""
        super().__init__(message)
        if constraint is not None:
            self.constraint = constraint
        self.failed_checks = tuple(failed_checks) if failed_checks else (self.constraint,)


class NormalizationError(ParameterError):
    """The reciprocal squares of alpha..delta do not sum to one."""

    constraint = 'normalization'


class PositivityError(ParameterError):
    """4q^2 exceeds the smallest squared parameter, P5 would be indefinite."""

    constraint = 'positivity'


class RangeError(ParameterError):
    """1/q^2 lies outside [1, 4]."""

    constraint = 'q-range'


class UnnormalizedStateError(PovmForgeError, ValueError):
    """A state vector does not have unit norm."""


class ProbabilityError(PovmForgeError, ArithmeticError):
    """A Born probability fell outside [0, 1] by more than rounding."""


class ParamsMismatchError(PovmForgeError, ValueError):
    """Two dilations built from different parameters were compared."""


class InvalidTwoLevelOpError(PovmForgeError, ValueError):
    """A two-level operation has bad indices or a non-unitary block."""


class GrayPathError(PovmForgeError, ValueError):
    """A Gray path was requested between equal or out-of-range indices."""


class InvalidGateError(PovmForgeError, ValueError):
    """A gate does not fit the circuit it is used with."""


class TooManyQubitsError(PovmForgeError, ValueError):
    """Dense simulation was requested for too many qubits."""


class UnreachableOutcome(PovmForgeError, RuntimeError):
    """Ancilla bits outside 000..100 carry non-negligible probability."""


class ShotsError(PovmForgeError, ValueError):
    """The number of shots is not a positive integer."""
