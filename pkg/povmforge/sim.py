"""
Statevector simulation of the dilated measurement.

Randomness comes from numpy's PCG64 bit generator. Shot k of a sampling run
seeded with `seed` consumes the k-th double of ``Generator(PCG64(seed))``;
a chunk starting at shot k builds its own generator with
``PCG64(seed).advance(k)``, so chunked and sequential sampling produce the
same histogram.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.random import PCG64, Generator
from scipy.stats import chi2

from povmforge import matkernel
from povmforge.dilation import (
    ANCILLA_DIMENSION,
    OUTCOME_ANCILLAS,
    SOURCE_ORACLE,
    SYSTEM_DIMENSION,
    build_oracle_dilation,
    embed_input,
    kraus_operators,
)
from povmforge.exceptions import DimensionError, ShotsError, UnnormalizedStateError, UnreachableOutcome
from povmforge.povm import build_povm, clamp_probability
from povmforge.slicer import slice_shots
from povmforge.synth import DILATION_QUBITS, apply_gate_in_place, compile_dilation, validate_gate

logger = logging.getLogger(__name__)

ROUTE_MATRIX = 'matrix'
ROUTE_CIRCUIT = 'circuit'
ROUTES = (ROUTE_MATRIX, ROUTE_CIRCUIT)

NORM_TOLERANCE = 1e-10
UNREACHABLE_TOLERANCE = 1e-9
PROBABILITY_FLOOR = 1e-15
COLLAPSE_THRESHOLD = 1e-6
DEFAULT_CHUNK_SIZE = 10000
CHI_SQUARE_CONFIDENCE = 0.999
SYSTEM_QUBITS = 2


@dataclass(frozen=True)
class Statevector:
    """Amplitudes of an `nqubits`-qubit pure state, qubit 0 most significant."""

    nqubits: int
    amplitudes: np.ndarray

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class MeasurementRecord:
    """The result of measuring the ancilla qubits once."""

    outcome: int
    ancilla_bits: int
    post_state: Statevector
    probability: float


@dataclass(frozen=True)
class Histogram:
    """Outcome counts of a sampling run with the Born probabilities behind them."""

    shots: int
    seed: int
    counts: Tuple[int, ...]
    expected: Tuple[float, ...]
    route: Optional[str] = None


def statevector(amplitudes, nqubits=None, tolerance=NORM_TOLERANCE):
    """
    Build a validated `Statevector`.

    Args:
        nqubits (int): Optional, inferred from the amplitude count.
    """
    amplitudes = matkernel.as_vector(amplitudes).copy()
    size = amplitudes.size
    inferred = size.bit_length() - 1
    if size < 2 or 2 ** inferred != size:
        raise DimensionError('amplitude count {} is not a power of two'.format(size))
    if nqubits is not None and nqubits != inferred:
        raise DimensionError('{} amplitudes do not describe {} qubits'.format(size, nqubits))
    norm = np.linalg.norm(amplitudes)
    if abs(norm - 1) > tolerance:
        raise UnnormalizedStateError('state norm is {:.15g}, expected 1'.format(norm))
    return Statevector(nqubits=inferred, amplitudes=amplitudes)


def basis_statevector(index, nqubits):
    amplitudes = np.zeros(2 ** nqubits, dtype=np.complex128)
    amplitudes[index] = 1.0
    return Statevector(nqubits=nqubits, amplitudes=amplitudes)


def prepare_input(system):
    """|system> (x) |000> as a five-qubit state."""
    system = _system_state(system)
    return Statevector(nqubits=DILATION_QUBITS, amplitudes=embed_input(system.amplitudes))


def _system_state(state):
    if isinstance(state, Statevector):
        if state.nqubits != SYSTEM_QUBITS:
            raise DimensionError('expected a two-qubit input, got {} qubits'.format(state.nqubits))
        return state
    return statevector(state, nqubits=SYSTEM_QUBITS)


def _tensor(state):
    return state.amplitudes.copy().reshape((2,) * state.nqubits)


def apply_gate(state, gate):
    """Apply one gate, returning a new state."""
    validate_gate(gate, state.nqubits)
    tensor = _tensor(state)
    apply_gate_in_place(tensor, gate, state.nqubits)
    return Statevector(nqubits=state.nqubits, amplitudes=tensor.reshape(-1))


def run(circuit, state):
    """Apply every gate of `circuit` to `state` in time order."""
    if circuit.qubits != state.nqubits:
        raise DimensionError('circuit on {} qubits cannot run on a {}-qubit state'.format(
            circuit.qubits, state.nqubits
        ))
    tensor = _tensor(state)
    for gate in circuit.gates:
        validate_gate(gate, state.nqubits)
        apply_gate_in_place(tensor, gate, state.nqubits)
    return Statevector(nqubits=state.nqubits, amplitudes=tensor.reshape(-1))


def ancilla_probabilities(state):
    """Born probabilities of the eight ancilla patterns 000..111."""
    if state.nqubits != DILATION_QUBITS:
        raise DimensionError('expected a {}-qubit state, got {}'.format(DILATION_QUBITS, state.nqubits))
    blocks = state.amplitudes.reshape(SYSTEM_DIMENSION, ANCILLA_DIMENSION)
    probabilities = np.sum(np.abs(blocks) ** 2, axis=0)
    probabilities[probabilities < PROBABILITY_FLOOR] = 0.0
    return probabilities


def outcome_distribution(state):
    """
    Probabilities of outcomes 1..5 read off the ancilla register.

    Raises:
        UnreachableOutcome: the patterns 101, 110, 111 carry more than 1e-9.
    """
    probabilities = ancilla_probabilities(state)
    unreachable = float(np.sum(np.delete(probabilities, OUTCOME_ANCILLAS)))
    if unreachable > UNREACHABLE_TOLERANCE:
        raise UnreachableOutcome('ancilla patterns outside 000..100 carry probability {:.3e}'.format(unreachable))
    return np.array([clamp_probability(probabilities[ancilla]) for ancilla in OUTCOME_ANCILLAS])


def _cumulative(distribution):
    cumulative = np.cumsum(distribution)
    return cumulative / cumulative[-1]


def _outcomes_for(cumulative, draws):
    return np.searchsorted(cumulative, draws, side='right') + 1


def post_measurement_state(state, outcome):
    """The renormalised system state left behind by `outcome`."""
    ancilla = OUTCOME_ANCILLAS[outcome - 1]
    block = state.amplitudes.reshape(SYSTEM_DIMENSION, ANCILLA_DIMENSION)[:, ancilla]
    norm = np.linalg.norm(block)
    if norm == 0:
        raise UnnormalizedStateError('outcome {} has probability zero'.format(outcome))
    return Statevector(nqubits=SYSTEM_QUBITS, amplitudes=block / norm)


def measure_ancilla(state, seed):
    """Measure qubits 2, 3 and 4 once with a generator seeded by `seed`."""
    if abs(state.norm - 1) > NORM_TOLERANCE:
        raise UnnormalizedStateError('state norm is {:.15g}, expected 1'.format(state.norm))
    distribution = outcome_distribution(state)
    draw = Generator(PCG64(seed)).random()
    outcome = int(_outcomes_for(_cumulative(distribution), draw))
    return MeasurementRecord(
        outcome=outcome,
        ancilla_bits=OUTCOME_ANCILLAS[outcome - 1],
        post_state=post_measurement_state(state, outcome),
        probability=float(distribution[outcome - 1]),
    )


def dilated_state(params, system, route=ROUTE_MATRIX, circuit=None):
    """
    The five-qubit state after the dilation acts on |system>|000>.

    Args:
        circuit (Circuit): Optional, a circuit to run on the circuit route
            instead of compiling one from `params`.
    """
    prepared = prepare_input(system)
    if route == ROUTE_MATRIX:
        matrix = build_oracle_dilation(params).matrix
        return Statevector(nqubits=DILATION_QUBITS, amplitudes=matrix @ prepared.amplitudes)
    if route == ROUTE_CIRCUIT:
        if circuit is None:
            circuit = compile_dilation(params, SOURCE_ORACLE)
        return run(circuit, prepared)
    raise ValueError('unknown route {!r}, expected one of {}'.format(route, ', '.join(ROUTES)))


def sample_outcomes(distribution, shots, seed, chunk_size=DEFAULT_CHUNK_SIZE):
    """Counts of outcomes 1..5 over `shots` draws from `distribution`."""
    cumulative = _cumulative(distribution)
    counts = np.zeros(len(distribution), dtype=np.int64)
    for chunk in slice_shots(shots, chunk_size):
        generator = Generator(PCG64(seed).advance(chunk.start))
        outcomes = _outcomes_for(cumulative, generator.random(len(chunk)))
        counts += np.bincount(outcomes - 1, minlength=len(distribution))
    return tuple(int(count) for count in counts)


def sample_povm(params, system, shots, seed, route=ROUTE_MATRIX, chunk_size=DEFAULT_CHUNK_SIZE, circuit=None):
    """
    Sample the POVM on `system` by dilating and measuring the ancillas.

    The dilated state is the same for every shot, so it is computed once and
    only the measurement is repeated.
    """
    if isinstance(shots, bool) or not isinstance(shots, (int, np.integer)) or shots < 1:
        raise ShotsError('shots must be a positive integer, got {!r}'.format(shots))
    distribution = outcome_distribution(dilated_state(params, system, route, circuit))
    counts = sample_outcomes(distribution, int(shots), seed, chunk_size)
    logger.info('sampled route=%s shots=%d seed=%s counts=%s', route, shots, seed, counts)
    return Histogram(
        shots=int(shots),
        seed=seed,
        counts=counts,
        expected=tuple(float(p) for p in distribution),
        route=route,
    )


def collapse_states(params, system, threshold=COLLAPSE_THRESHOLD):
    """
    Expected post-measurement states, normalised sqrt(P_k)|system>.

    Returns:
        dict: outcome -> (Statevector, probability) for outcomes above `threshold`.
    """
    system = _system_state(system)
    collapsed = {}
    for outcome, operator in enumerate(kraus_operators(build_povm(params)), start=1):
        branch = operator @ system.amplitudes
        probability = float(np.vdot(branch, branch).real)
        if probability > threshold:
            collapsed[outcome] = (
                Statevector(nqubits=SYSTEM_QUBITS, amplitudes=branch / np.sqrt(probability)),
                probability,
            )
    return collapsed


def chi_square(histogram, confidence=CHI_SQUARE_CONFIDENCE):
    """
    Pearson statistic of `histogram` against its expected probabilities.

    Bins with zero expected probability are left out; a count landing in one
    makes the statistic infinite.

    Returns:
        tuple: (statistic, degrees of freedom, critical value at `confidence`)
    """
    counts = np.asarray(histogram.counts, dtype=float)
    expected = np.asarray(histogram.expected) * histogram.shots
    live = expected > 0
    if np.any(counts[~live] > 0):
        statistic = float('inf')
    else:
        statistic = float(np.sum((counts[live] - expected[live]) ** 2 / expected[live]))
    dof = max(int(np.count_nonzero(live)) - 1, 1)
    return statistic, dof, float(chi2.ppf(confidence, dof))
