"""
Circuit synthesis for two-level unitaries.

Qubit 0 is the most significant bit of a basis index, matching the dilation
basis convention. Compilation runs in two stages:

1. `synthesize_two_level` routes one state of the pair next to the other
   along a Gray path with multi-controlled X gates, applies the block as a
   multi-controlled single-qubit gate and routes back. This stage is exact.
2. `lower_multicontrolled` rewrites every multi-controlled gate into CNOTs
   and single-qubit gates with the recursive square-root construction.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import schur

from povmforge import matkernel
from povmforge.decompose import reconstruct, two_level_decompose, paper_factorization
from povmforge.dilation import SOURCE_ORACLE, SOURCE_PAPER_PRODUCT, build_oracle_dilation
from povmforge.exceptions import GrayPathError, InvalidGateError, InvalidTwoLevelOpError, TooManyQubitsError

logger = logging.getLogger(__name__)

KIND_SINGLE = 'single'
KIND_CNOT = 'cnot'
KIND_MCU = 'mcu'
KINDS = (KIND_SINGLE, KIND_CNOT, KIND_MCU)

DILATION_QUBITS = 5
MAX_SIMULATED_QUBITS = 6
GATE_TOLERANCE = 1e-12
IDENTITY_TOLERANCE = 1e-15
COMPILE_SOURCES = (SOURCE_ORACLE, SOURCE_PAPER_PRODUCT)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)


@dataclass(frozen=True)
class Gate:
    """
    One circuit gate.

    ``single`` uses `target` and `matrix`; ``cnot`` uses `control` and
    `target`; ``mcu`` uses `controls`, a tuple of (qubit, polarity) pairs
    where polarity 0 means the gate fires on |0>, plus `target` and `matrix`.
    """

    kind: str
    target: int
    matrix: Optional[np.ndarray] = None
    control: Optional[int] = None
    controls: Tuple[Tuple[int, int], ...] = ()

    @property
    def qubits(self):
        """Every qubit the gate touches, target last."""
        if self.kind == KIND_CNOT:
            return (self.control, self.target)
        return tuple(qubit for qubit, _ in self.controls) + (self.target,)

    def control_pattern(self):
        """(qubit, polarity) pairs that must match for the gate to act."""
        if self.kind == KIND_CNOT:
            return ((self.control, 1),)
        return self.controls

    def operator(self):
        """The 2x2 matrix applied to the target."""
        return PAULI_X if self.kind == KIND_CNOT else self.matrix


@dataclass(frozen=True)
class Circuit:
    """Gates over `qubits` qubits, applied in time order."""

    qubits: int
    gates: Tuple[Gate, ...] = ()

    def __len__(self):
        return len(self.gates)


def single(target, matrix):
    return Gate(kind=KIND_SINGLE, target=int(target), matrix=np.asarray(matrix, dtype=np.complex128))


def cnot(control, target):
    return Gate(kind=KIND_CNOT, target=int(target), control=int(control))


def mcu(controls, target, matrix):
    controls = tuple(sorted((int(qubit), int(polarity)) for qubit, polarity in controls))
    return Gate(kind=KIND_MCU, target=int(target), matrix=np.asarray(matrix, dtype=np.complex128),
                controls=controls)


def validate_gate(gate, nqubits):
    """Raise `InvalidGateError` unless `gate` is well formed for `nqubits` qubits."""
    if gate.kind not in KINDS:
        raise InvalidGateError('unknown gate kind {!r}'.format(gate.kind))
    qubits = gate.qubits
    if any(qubit is None or not 0 <= qubit < nqubits for qubit in qubits):
        raise InvalidGateError('{} gate uses qubits {} outside 0..{}'.format(gate.kind, qubits, nqubits - 1))
    if len(set(qubits)) != len(qubits):
        raise InvalidGateError('{} gate repeats a qubit: {}'.format(gate.kind, qubits))
    if gate.kind == KIND_MCU and any(polarity not in (0, 1) for _, polarity in gate.controls):
        raise InvalidGateError('control polarities must be 0 or 1, got {}'.format(gate.controls))
    if gate.kind != KIND_CNOT:
        if gate.matrix is None or gate.matrix.shape != (2, 2):
            raise InvalidGateError('{} gate needs a 2x2 matrix'.format(gate.kind))
        defect = matkernel.unitarity_defect(gate.matrix)
        if defect > GATE_TOLERANCE:
            raise InvalidGateError('{} gate matrix is not unitary (defect {:.3e})'.format(gate.kind, defect))


def validate_circuit(circuit):
    for gate in circuit.gates:
        validate_gate(gate, circuit.qubits)


def apply_gate_in_place(tensor, gate, nqubits):
    """
    Apply `gate` to `tensor`, shaped (2,) * nqubits + trailing batch axes.

    The tensor is updated in place.
    """
    index = [slice(None)] * nqubits
    pattern = gate.control_pattern()
    for qubit, polarity in pattern:
        index[qubit] = polarity
    block = tensor[tuple(index)]
    axis = gate.target - sum(1 for qubit, _ in pattern if qubit < gate.target)
    moved = np.moveaxis(block, axis, 0)
    moved[...] = np.tensordot(gate.operator(), moved, axes=([1], [0]))


def _check_size(nqubits):
    if nqubits > MAX_SIMULATED_QUBITS:
        raise TooManyQubitsError('dense simulation supports at most {} qubits, got {}'.format(
            MAX_SIMULATED_QUBITS, nqubits
        ))


def circuit_unitary(circuit):
    """The 2^n x 2^n matrix of `circuit`."""
    nqubits = circuit.qubits
    _check_size(nqubits)
    dim = 2 ** nqubits
    tensor = matkernel.identity(dim).reshape((2,) * nqubits + (dim,))
    for gate in circuit.gates:
        validate_gate(gate, nqubits)
        apply_gate_in_place(tensor, gate, nqubits)
    return tensor.reshape(dim, dim)


def gray_path(i, j, nbits):
    """
    Basis indices from `i` to `j`, consecutive entries one bit apart.

    Differing bits are flipped least significant first.
    """
    size = 2 ** nbits
    if i == j:
        raise GrayPathError('gray path endpoints must differ, got {} twice'.format(i))
    if not (0 <= i < size and 0 <= j < size):
        raise GrayPathError('endpoints ({}, {}) out of range for {} bits'.format(i, j, nbits))
    path = [i]
    current = i
    difference = i ^ j
    for bit in range(nbits):
        if difference >> bit & 1:
            current ^= 1 << bit
            path.append(current)
    return path


def _qubit_of_bit(bit, nqubits):
    return nqubits - 1 - bit


def _controls_except(index, skip_qubit, nqubits):
    return tuple(
        (qubit, index >> _qubit_of_bit(qubit, nqubits) & 1) for qubit in range(nqubits) if qubit != skip_qubit
    )


def _step_gate(source, destination, matrix, nqubits):
    bit = (source ^ destination).bit_length() - 1
    target = _qubit_of_bit(bit, nqubits)
    return mcu(_controls_except(source, target, nqubits), target, matrix)


def synthesize_two_level(op, nqubits):
    """
    Exact circuit for one two-level operation.

    Multi-controlled X gates walk state i along the Gray path until it sits
    one bit away from j, the block is applied there with every other qubit
    as a control, and the walk is undone.
    """
    dim = 2 ** nqubits
    if not 0 <= op.i < op.j < dim:
        raise InvalidTwoLevelOpError('indices ({}, {}) out of range for {} qubits'.format(op.i, op.j, nqubits))
    path = gray_path(op.i, op.j, nqubits)
    routing = [_step_gate(a, b, PAULI_X, nqubits) for a, b in zip(path[:-2], path[1:-1])]

    neighbour = path[-2]
    bit = (neighbour ^ op.j).bit_length() - 1
    block = op.block
    if neighbour >> bit & 1:
        # neighbour is the |1> branch of the target, so the block is mirrored
        block = block[::-1, ::-1]
    central = _step_gate(neighbour, op.j, block, nqubits)

    return Circuit(qubits=nqubits, gates=tuple(routing + [central] + routing[::-1]))


def _rz(theta):
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def _ry(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def zyz_angles(u):
    """Angles (alpha, beta, gamma, delta) with u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)."""
    alpha = np.angle(np.linalg.det(u)) / 2
    special = u * np.exp(-1j * alpha)
    a, b = special[0, 0], special[1, 0]
    gamma = 2 * np.arctan2(abs(b), abs(a))
    plus = -2 * np.angle(a) if abs(a) > IDENTITY_TOLERANCE else 0.0
    minus = 2 * np.angle(b) if abs(b) > IDENTITY_TOLERANCE else 0.0
    return alpha, (plus + minus) / 2, gamma, (plus - minus) / 2


def principal_sqrt(u):
    """Principal square root of a 2x2 unitary via its unitary eigenbasis."""
    triangular, basis = schur(np.asarray(u, dtype=np.complex128), output='complex')
    roots = np.sqrt(np.diag(triangular))
    return (basis * roots) @ basis.conj().T


def _is_identity(matrix):
    return np.max(np.abs(matrix - matkernel.identity(2))) <= IDENTITY_TOLERANCE


def _is_pauli_x(matrix):
    return np.max(np.abs(matrix - PAULI_X)) <= IDENTITY_TOLERANCE


def _singles(pairs):
    return [single(target, matrix) for target, matrix in pairs if not _is_identity(matrix)]


def _controlled_single(control, target, u):
    if _is_pauli_x(u):
        return [cnot(control, target)]
    alpha, beta, gamma, delta = zyz_angles(u)
    a = _rz(beta) @ _ry(gamma / 2)
    b = _ry(-gamma / 2) @ _rz(-(delta + beta) / 2)
    c = _rz((delta - beta) / 2)
    phase = np.diag([1.0, np.exp(1j * alpha)]).astype(np.complex128)
    return (_singles([(target, c)]) + [cnot(control, target)] + _singles([(target, b)])
            + [cnot(control, target)] + _singles([(target, a), (control, phase)]))


def _controlled(controls, target, u):
    if not controls:
        return _singles([(target, u)])
    if len(controls) == 1:
        return _controlled_single(controls[0], target, u)
    v = principal_sqrt(u)
    *rest, last = controls
    flip = _controlled(rest, last, PAULI_X)
    return (_controlled([last], target, v) + flip + _controlled([last], target, v.conj().T)
            + flip + _controlled(rest, target, v))


def lower_gate(gate):
    """CNOT and single-qubit gates equivalent to `gate`."""
    if gate.kind != KIND_MCU:
        return [gate]
    flips = [single(qubit, PAULI_X) for qubit, polarity in gate.controls if polarity == 0]
    body = _controlled([qubit for qubit, _ in gate.controls], gate.target, gate.matrix)
    return flips + body + flips


def lower_multicontrolled(circuit):
    """Rewrite every multi-controlled gate; other gates pass through unchanged."""
    if not any(gate.kind == KIND_MCU for gate in circuit.gates):
        return circuit
    gates = []
    for gate in circuit.gates:
        gates.extend(lower_gate(gate))
    return Circuit(qubits=circuit.qubits, gates=tuple(gates))


def synthesize_sequence(seq, nqubits):
    """
    Exact multi-controlled circuit for a two-level sequence.

    Factors are emitted in reverse so the time-ordered circuit equals the
    left-to-right matrix product.
    """
    gates = []
    for op in reversed(seq.ops):
        gates.extend(synthesize_two_level(op, nqubits).gates)
    return Circuit(qubits=nqubits, gates=tuple(gates))


def dilation_sequence(params, source):
    """The two-level sequence a compiled dilation starts from."""
    if source == SOURCE_ORACLE:
        return two_level_decompose(build_oracle_dilation(params).matrix)
    if source == SOURCE_PAPER_PRODUCT:
        return paper_factorization(params)
    raise ValueError('cannot compile source {!r}, expected one of {}'.format(source, ', '.join(COMPILE_SOURCES)))


def dilation_target(params, source):
    """The matrix a compiled dilation must reproduce."""
    if source == SOURCE_ORACLE:
        return build_oracle_dilation(params).matrix
    return reconstruct(dilation_sequence(params, source))


def compile_dilation(params, source=SOURCE_ORACLE):
    """Compile the dilation unitary into CNOT and single-qubit gates."""
    return _compile_dilation(params, source)


# One cache entry per (params, source), however `source` was passed.
@lru_cache(maxsize=8)
def _compile_dilation(params, source):
    seq = dilation_sequence(params, source)
    routed = synthesize_sequence(seq, DILATION_QUBITS)
    lowered = lower_multicontrolled(routed)
    logger.info('compiled %s dilation two_level_ops=%d mcu_gates=%d gates=%d cnots=%d',
                source, len(seq), len(routed), len(lowered), gate_counts(lowered)['cnot'])
    return lowered


def gate_counts(circuit):
    """Gate totals by kind plus the largest control count."""
    counts = {KIND_SINGLE: 0, KIND_CNOT: 0, KIND_MCU: 0}
    max_controls = 0
    for gate in circuit.gates:
        counts[gate.kind] += 1
        max_controls = max(max_controls, len(gate.control_pattern()))
    counts['total'] = len(circuit.gates)
    counts['max_controls'] = max_controls
    return counts


def _format_number(value):
    return format(float(value), '.17g')


def circuit_to_qasm(circuit):
    """
    Line-oriented text export of a lowered circuit.

    A ``qubits n`` header, then ``u(target) m00r m00i m01r m01i m10r m10i
    m11r m11i`` or ``cx control target`` per gate.
    """
    lines = ['qubits {}'.format(circuit.qubits)]
    for gate in circuit.gates:
        if gate.kind == KIND_CNOT:
            lines.append('cx {} {}'.format(gate.control, gate.target))
        elif gate.kind == KIND_SINGLE:
            numbers = []
            for entry in gate.matrix.reshape(-1):
                numbers.extend((_format_number(entry.real), _format_number(entry.imag)))
            lines.append('u({}) {}'.format(gate.target, ' '.join(numbers)))
        else:
            raise InvalidGateError('text export needs a lowered circuit, found an mcu gate')
    return '\n'.join(lines) + '\n'


def circuit_from_qasm(text):
    """Parse the text export back into a circuit."""
    lines = [line.split() for line in text.splitlines() if line.strip()]
    if not lines or lines[0][0] != 'qubits':
        raise InvalidGateError('text circuit must start with a "qubits n" header')
    nqubits = int(lines[0][1])
    gates = []
    for words in lines[1:]:
        if words[0] == 'cx':
            gates.append(cnot(int(words[1]), int(words[2])))
        elif words[0].startswith('u(') and words[0].endswith(')') and len(words) == 9:
            values = [float(word) for word in words[1:]]
            matrix = np.array(values[0::2]) + 1j * np.array(values[1::2])
            gates.append(single(int(words[0][2:-1]), matrix.reshape(2, 2)))
        else:
            raise InvalidGateError('cannot parse circuit line {!r}'.format(' '.join(words)))
    circuit = Circuit(qubits=nqubits, gates=tuple(gates))
    validate_circuit(circuit)
    return circuit
