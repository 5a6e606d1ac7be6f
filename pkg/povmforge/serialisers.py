"""Serialisers for povmforge objects -> JSON documents."""

import json
import math

import numpy as np
from serpy import Field, IntField, MethodField, Serializer, StrField

from povmforge.exceptions import InvalidGateError
from povmforge.synth import KIND_CNOT, KIND_MCU, KIND_SINGLE, Circuit, cnot, mcu, single, validate_circuit

REPORT_DIGITS = 12
CIRCUIT_VERSION = 1
CIRCUIT_CONVENTION = 'msb-first'


def round_significant(value, digits=REPORT_DIGITS):
    """Round to `digits` significant digits; non-finite values become None (JSON null)."""
    value = float(value)
    if not math.isfinite(value):
        return None
    return float(format(value, '.{}g'.format(digits)))


def complex_pair(value, digits=REPORT_DIGITS):
    value = complex(value)
    if digits is None:
        return [value.real, value.imag]
    return [round_significant(value.real, digits), round_significant(value.imag, digits)]


def complex_matrix(matrix, digits=REPORT_DIGITS):
    """A matrix as nested lists of [re, im] pairs."""
    return [[complex_pair(entry, digits) for entry in row] for row in np.asarray(matrix)]


def matrix_from_pairs(pairs):
    """Inverse of `complex_matrix`."""
    array = np.asarray(pairs, dtype=float)
    return array[..., 0] + 1j * array[..., 1]


def dumps(data):
    """Compact JSON with stable key order."""
    return json.dumps(data, separators=(',', ':'), allow_nan=False)


class PovmSetSerialiser(Serializer):
    """A `PovmSet` as ``{"params": {...}, "elements": [...]}``."""

    params = MethodField()
    elements = MethodField()

    def get_params(self, povm):
        return {name: round_significant(value) for name, value in povm.params.as_dict().items()}

    def get_elements(self, povm):
        return [complex_matrix(element) for element in povm.elements]


class CheckSerialiser(Serializer):
    name = StrField()
    residual = MethodField()
    passed = Field(label='pass')
    advisory = Field()

    def get_residual(self, check):
        return round_significant(check.residual)


class AuditReportSerialiser(Serializer):
    checks = CheckSerialiser(many=True)
    notes = Field()


class TwoLevelOpSerialiser(Serializer):
    i = IntField()
    j = IntField()
    block = MethodField()

    def get_block(self, op):
        return complex_matrix(op.block)


class TwoLevelSeqSerialiser(Serializer):
    dim = IntField()
    convention = StrField()
    ops = TwoLevelOpSerialiser(many=True)


class GateSerialiser(Serializer):
    """
    One gate. Keys that do not belong to the gate kind are dropped.

    Matrices keep full precision so a written circuit re-simulates exactly.
    """

    kind = StrField()
    control = MethodField()
    controls = MethodField()
    target = IntField()
    matrix = MethodField()

    def get_control(self, gate):
        return gate.control if gate.kind == KIND_CNOT else None

    def get_controls(self, gate):
        if gate.kind != KIND_MCU:
            return None
        return [{'qubit': qubit, 'polarity': polarity} for qubit, polarity in gate.controls]

    def get_matrix(self, gate):
        if gate.kind == KIND_CNOT:
            return None
        return complex_matrix(gate.matrix, digits=None)

    def to_value(self, instance):
        if self.many:
            return [self._drop_empty(self._serialize(gate, self._compiled_fields)) for gate in instance]
        return self._drop_empty(self._serialize(instance, self._compiled_fields))

    @staticmethod
    def _drop_empty(data):
        return {key: value for key, value in data.items() if value is not None}


class CircuitSerialiser(Serializer):
    version = MethodField()
    qubits = IntField()
    convention = MethodField()
    gates = GateSerialiser(many=True)

    def get_version(self, circuit):
        return CIRCUIT_VERSION

    def get_convention(self, circuit):
        return CIRCUIT_CONVENTION


class HistogramSerialiser(Serializer):
    shots = IntField()
    seed = Field()
    counts = MethodField()
    expected = MethodField()

    def get_counts(self, histogram):
        return [int(count) for count in histogram.counts]

    def get_expected(self, histogram):
        return [round_significant(p) for p in histogram.expected]


class DilationSerialiser(Serializer):
    """A dilation candidate with its unitarity defect and, if transcribed, its tags."""

    source = StrField()
    params = MethodField()
    unitarity_defect = MethodField()
    matrix = MethodField()
    tags = MethodField()

    def get_params(self, dilation):
        return {name: round_significant(value) for name, value in dilation.params.as_dict().items()}

    def get_unitarity_defect(self, dilation):
        return round_significant(dilation.unitarity_defect)

    def get_matrix(self, dilation):
        return complex_matrix(dilation.matrix)

    def get_tags(self, dilation):
        if dilation.tags is None:
            return None
        return [list(row) for row in dilation.tags]


def _gate_from_document(document):
    kind = document.get('kind')
    try:
        if kind == KIND_SINGLE:
            return single(document['target'], matrix_from_pairs(document['matrix']))
        if kind == KIND_CNOT:
            return cnot(document['control'], document['target'])
        if kind == KIND_MCU:
            controls = [(entry['qubit'], entry['polarity']) for entry in document['controls']]
            return mcu(controls, document['target'], matrix_from_pairs(document['matrix']))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidGateError('malformed {} gate document: {}'.format(kind, exc)) from exc
    raise InvalidGateError('unknown gate kind {!r}'.format(kind))


def circuit_from_document(document):
    """Load a circuit from its JSON document (a dict or a JSON string)."""
    if isinstance(document, (str, bytes)):
        document = json.loads(document)
    if document.get('version') != CIRCUIT_VERSION:
        raise InvalidGateError('unsupported circuit version {!r}'.format(document.get('version')))
    if document.get('convention') != CIRCUIT_CONVENTION:
        raise InvalidGateError('unsupported qubit convention {!r}'.format(document.get('convention')))
    try:
        qubits = int(document['qubits'])
    except (KeyError, TypeError, ValueError):
        raise InvalidGateError('circuit document needs an integer "qubits" entry') from None
    circuit = Circuit(
        qubits=qubits,
        gates=tuple(_gate_from_document(gate) for gate in document.get('gates', [])),
    )
    validate_circuit(circuit)
    return circuit
