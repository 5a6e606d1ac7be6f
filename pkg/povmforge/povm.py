"""
The five-element POVM for unambiguous discrimination of four two-qubit states.

Four non-orthogonal states |Psi_1>..|Psi_4> share the amplitudes
1/alpha, 1/beta, 1/gamma, 1/delta on |00>, |01>, |10>, |11> and differ only in
sign pattern. The POVM has elements P_i = q^2 |Psi_i><Psi_i| for i = 1..4 and
the inconclusive element P_5 = I - sum_i P_i.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from povmforge import matkernel
from povmforge.exceptions import (
    NormalizationError,
    ParameterError,
    PositivityError,
    ProbabilityError,
    RangeError,
    UnnormalizedStateError,
)
from povmforge.reports import AuditReport

logger = logging.getLogger(__name__)

PARAMETER_TOLERANCE = 1e-12
# Squared residuals and eigenvalues below this are rounding noise around zero.
ROUNDING_FLOOR = 1e-14
PROBABILITY_SLACK = 1e-12

# Rows follow |Psi_1>..|Psi_4>, columns the basis order |00>, |01>, |10>, |11>.
SIGN_PATTERNS = np.array([
    [1, 1, 1, 1],
    [1, 1, -1, -1],
    [1, -1, 1, -1],
    [1, -1, -1, 1],
], dtype=float)

BASIS_LABELS = ('00', '01', '10', '11')


@dataclass(frozen=True)
class PovmParams:
    """
    Validated POVM parameters.

    Build instances with `validate_params` or `params_from_inverse_squares`;
    the derived quantities below assume the constraints already hold.
    """

    alpha: float
    beta: float
    gamma: float
    delta: float
    q: float

    @property
    def amplitudes(self):
        """Magnitudes 1/|alpha|..1/|delta| with the signs of alpha..delta."""
        return np.array([1 / self.alpha, 1 / self.beta, 1 / self.gamma, 1 / self.delta])

    @property
    def inverse_squares(self):
        """The reciprocal squares 1/alpha^2..1/delta^2."""
        return self.amplitudes ** 2

    @property
    def mu_squared(self):
        """The smallest of alpha^2..delta^2."""
        return min(self.alpha ** 2, self.beta ** 2, self.gamma ** 2, self.delta ** 2)

    def _residual(self, x):
        # rounding at the optimal q leaves 1 - 4q^2/x^2 a few ulps either side of zero
        squared = 1.0 - 4 * self.q ** 2 / x ** 2
        return math.sqrt(squared) if squared > ROUNDING_FLOOR else 0.0

    @property
    def u(self):
        return self._residual(self.alpha)

    @property
    def v(self):
        return self._residual(self.beta)

    @property
    def w(self):
        return self._residual(self.gamma)

    @property
    def p(self):
        return self._residual(self.delta)

    @property
    def s(self):
        return math.sqrt(self.alpha ** 2 + self.beta ** 2)

    @property
    def y(self):
        return math.sqrt(self.alpha ** 2 + self.delta ** 2)

    @property
    def z(self):
        return math.sqrt(self.beta ** 2 + self.gamma ** 2)

    @property
    def t(self):
        return math.sqrt(self.gamma ** 2 + self.delta ** 2)

    def symbols(self):
        """Every named quantity, keyed by its ASCII name."""
        return {
            'alpha': self.alpha, 'beta': self.beta, 'gamma': self.gamma, 'delta': self.delta,
            'q': self.q, 'u': self.u, 'v': self.v, 'w': self.w, 'p': self.p,
            's': self.s, 'y': self.y, 'z': self.z, 't': self.t,
        }

    def as_dict(self):
        """The five free parameters."""
        return {'alpha': self.alpha, 'beta': self.beta, 'gamma': self.gamma, 'delta': self.delta, 'q': self.q}


@dataclass(frozen=True)
class PovmSet:
    """The five POVM elements together with the parameters that built them."""

    elements: Tuple[np.ndarray, ...]
    params: PovmParams


@dataclass(frozen=True)
class OutcomeDistribution:
    """Born probabilities of the five outcomes."""

    probs: Tuple[float, ...]

    @property
    def conclusive(self):
        """Probability of outcomes 1..4."""
        return float(sum(self.probs[:4]))


def _check_normalization(alpha, beta, gamma, delta):
    for name, value in (('alpha', alpha), ('beta', beta), ('gamma', gamma), ('delta', delta)):
        if not math.isfinite(value):
            raise ParameterError('{} must be finite, got {!r}'.format(name, value), constraint='finite')
        if value == 0:
            raise ParameterError('{} must be nonzero'.format(name), constraint='nonzero')
    total = 1 / alpha ** 2 + 1 / beta ** 2 + 1 / gamma ** 2 + 1 / delta ** 2
    if abs(total - 1) > PARAMETER_TOLERANCE:
        raise NormalizationError(
            '1/alpha^2 + 1/beta^2 + 1/gamma^2 + 1/delta^2 = {:.15g}, expected 1'.format(total)
        )


def validate_params(alpha, beta, gamma, delta, q):
    """
    Validate the POVM parameters.

    Raises:
        NormalizationError: the reciprocal squares do not sum to one.
        RangeError: 1/q^2 lies outside [1, 4].
        PositivityError: 4q^2 exceeds min(alpha^2..delta^2), P5 would be indefinite.

    When both q checks fail the error is a `RangeError` whose `failed_checks`
    names both.
    """
    alpha, beta, gamma, delta = (float(x) for x in (alpha, beta, gamma, delta))
    q = float(q)
    _check_normalization(alpha, beta, gamma, delta)
    if not math.isfinite(q) or q <= 0:
        raise RangeError('q must be a positive finite number, got {!r}'.format(q))

    mu_squared = min(alpha ** 2, beta ** 2, gamma ** 2, delta ** 2)
    inverse_q_squared = 1 / q ** 2
    failures = []
    if not 1 - PARAMETER_TOLERANCE <= inverse_q_squared <= 4 + PARAMETER_TOLERANCE:
        failures.append((RangeError, '1/q^2 = {:.15g} lies outside [1, 4]'.format(inverse_q_squared)))
    if 4 * q ** 2 > mu_squared + PARAMETER_TOLERANCE:
        failures.append((PositivityError, '4q^2 = {:.15g} exceeds mu^2 = {:.15g}, P5 would be indefinite'.format(
            4 * q ** 2, mu_squared
        )))
    if failures:
        error_class = failures[0][0]
        raise error_class('; '.join(message for _, message in failures),
                          failed_checks=[error.constraint for error, _ in failures])
    return PovmParams(alpha=alpha, beta=beta, gamma=gamma, delta=delta, q=q)


def optimal_q(alpha, beta, gamma, delta):
    """The q maximising the conclusive probability, q^2 = mu^2 / 4."""
    alpha, beta, gamma, delta = (float(x) for x in (alpha, beta, gamma, delta))
    _check_normalization(alpha, beta, gamma, delta)
    return math.sqrt(min(alpha ** 2, beta ** 2, gamma ** 2, delta ** 2)) / 2


def params_from_inverse_squares(values, q=None):
    """
    Build parameters from reciprocal squares 1/alpha^2..1/delta^2.

    Args:
        values (sequence of float): Four positive numbers summing to one.
        q (float): Optional, an explicit q. Defaults to the optimal q.
    """
    values = [float(x) for x in values]
    if len(values) != 4:
        raise ParameterError('expected 4 reciprocal squares, got {}'.format(len(values)), constraint='arity')
    for value in values:
        if not math.isfinite(value) or value <= 0:
            raise ParameterError('reciprocal squares must be positive, got {!r}'.format(value),
                                 constraint='nonzero')
    alpha, beta, gamma, delta = (1 / math.sqrt(x) for x in values)
    if q is None:
        q = optimal_q(alpha, beta, gamma, delta)
    return validate_params(alpha, beta, gamma, delta, q)


def build_states(params):
    """The four states |Psi_1>..|Psi_4>, each a length-4 complex vector."""
    amplitudes = params.amplitudes
    return tuple((SIGN_PATTERNS[i] * amplitudes).astype(np.complex128) for i in range(4))


def build_povm(params):
    """Build P_1..P_5."""
    q_squared = params.q ** 2
    elements = [q_squared * np.outer(state, state.conj()) for state in build_states(params)]
    elements.append(matkernel.identity(4) - sum(elements))
    povm = PovmSet(elements=tuple(elements), params=params)
    logger.debug('built povm params=%s', params.as_dict())
    return povm


def povm_checks(povm, tolerance=matkernel.DEFAULT_TOLERANCE):
    """Audit hermiticity, positivity and completeness of `povm`."""
    report = AuditReport()
    for index, element in enumerate(povm.elements, start=1):
        report.add('P{}_hermitian'.format(index), matkernel.hermiticity_defect(element), PARAMETER_TOLERANCE)
        eigenvalues, _ = matkernel.eig_hermitian(element, tolerance)
        report.add('P{}_positive'.format(index), max(0.0, -float(eigenvalues[0])), tolerance)
    completeness = matkernel.frobenius_distance(sum(povm.elements), matkernel.identity(4))
    report.add('completeness', completeness, PARAMETER_TOLERANCE)
    params = povm.params
    expected_p5 = np.diag([params.u ** 2, params.v ** 2, params.w ** 2, params.p ** 2])
    report.add('P5_diagonal', matkernel.frobenius_distance(povm.elements[4], expected_p5), PARAMETER_TOLERANCE)
    return report


def _as_state(state, tolerance):
    state = matkernel.as_vector(state)
    if state.size != 4:
        raise UnnormalizedStateError('expected a two-qubit state of dimension 4, got {}'.format(state.size))
    norm = np.linalg.norm(state)
    if abs(norm - 1) > tolerance:
        raise UnnormalizedStateError('state norm is {:.15g}, expected 1'.format(norm))
    return state


def clamp_probability(value):
    """Clamp rounding noise into [0, 1]; larger excursions are errors."""
    value = float(value)
    if value < -PROBABILITY_SLACK or value > 1 + PROBABILITY_SLACK:
        raise ProbabilityError('probability {:.15g} lies outside [0, 1]'.format(value))
    return min(1.0, max(0.0, value))


def outcome_probabilities(povm, state, tolerance=matkernel.DEFAULT_TOLERANCE):
    """Born probabilities <state|P_k|state> for k = 1..5."""
    state = _as_state(state, tolerance)
    probs = tuple(
        clamp_probability(np.vdot(state, element @ state).real) for element in povm.elements
    )
    return OutcomeDistribution(probs=probs)


def conclusive_probability(povm, state, tolerance=matkernel.DEFAULT_TOLERANCE):
    """Probability that the measurement identifies one of the |Psi_i>."""
    return outcome_probabilities(povm, state, tolerance).conclusive


def basis_state(label):
    """The two-qubit computational basis state for a label such as '01'."""
    if label not in BASIS_LABELS:
        raise UnnormalizedStateError('unknown basis label {!r}, expected one of {}'.format(
            label, ', '.join(BASIS_LABELS)
        ))
    state = np.zeros(4, dtype=np.complex128)
    state[BASIS_LABELS.index(label)] = 1.0
    return state
