"""
End-to-end audit of the POVM pipeline.

`verify` chains every stage for one parameter set and collects the results
in a single `AuditReport`:

    povm -> dilation -> formula cross-check -> two-level round trip
         -> compiled circuit -> sampling -> collapse

Checks on the published matrix and the published factor product are
appended as advisory unless `strict` is set.
"""

import logging

import numpy as np

from povmforge import matkernel
from povmforge.decompose import build_paper_product_dilation, reconstruct, two_level_decompose
from povmforge.dilation import (
    DEFAULT_AUDIT_SAMPLES,
    DEFAULT_AUDIT_SEED,
    DIMENSION,
    SOURCE_ORACLE,
    SYSTEM_DIMENSION,
    audit_dilation,
    build_oracle_dilation,
    constrained_columns,
    dilate_state,
    embed_input,
    formula_columns,
    kraus_operators,
    transcribe_paper_matrix,
)
from povmforge.exceptions import PovmForgeError
from povmforge.povm import BASIS_LABELS, PARAMETER_TOLERANCE, basis_state, build_povm, povm_checks
from povmforge.reports import AuditReport
from povmforge.sim import (
    COLLAPSE_THRESHOLD,
    DEFAULT_CHUNK_SIZE,
    ROUTE_CIRCUIT,
    ROUTE_MATRIX,
    chi_square,
    collapse_states,
    dilated_state,
    post_measurement_state,
    sample_povm,
)
from povmforge.synth import circuit_unitary, compile_dilation, gate_counts

logger = logging.getLogger(__name__)

DEFAULT_PHASE_TOLERANCE = 1e-8
ROUND_TRIP_TOLERANCE = 1e-9
CIRCUIT_CONTRACT_TOLERANCE = 1e-7
SIGMA_BOUND = 5.0
DEFAULT_SHOTS = 100000
SAMPLED_INPUTS = ('00', '01')


def _povm_stage(report, povm, tolerance):
    report.extend(povm_checks(povm, tolerance), prefix='povm.')
    p5 = povm.elements[4]
    if np.max(np.abs(p5)) <= PARAMETER_TOLERANCE:
        report.note('P5 = 0 branch: the measurement is projective and every outcome is conclusive')
    else:
        smallest = float(np.linalg.eigvalsh((p5 + p5.conj().T) / 2)[0])
        report.note('P5 != 0 branch: smallest P5 eigenvalue {:.12g}'.format(smallest))


def _dilation_stage(report, params, povm, oracle, tolerance, samples, seed):
    report.extend(audit_dilation(oracle, oracle, povm, samples=samples, seed=seed, tolerance=tolerance),
                  prefix='dilation.')
    cross = matkernel.max_deviation(constrained_columns(params, tolerance), formula_columns(params))
    report.add('dilation.formula_columns', cross, PARAMETER_TOLERANCE)


def _decompose_stage(report, oracle, tolerance):
    seq = two_level_decompose(oracle.matrix, tolerance)
    report.add('decompose.round_trip', matkernel.max_deviation(reconstruct(seq), oracle.matrix),
               ROUND_TRIP_TOLERANCE)
    report.add_flag('decompose.op_count_bound', len(seq) <= DIMENSION * (DIMENSION - 1) // 2)
    report.note('decompose: {} two-level ops'.format(len(seq)))


def _synth_stage(report, params, oracle, kraus, phase_tolerance, samples, seed):
    circuit = compile_dilation(params, SOURCE_ORACLE)
    counts = gate_counts(circuit)
    unitary = circuit_unitary(circuit)
    deviation, phase = matkernel.phase_aligned_deviation(unitary, oracle.matrix)
    report.add('synth.equivalence', deviation, phase_tolerance)
    report.add_flag('synth.lowered', counts['max_controls'] <= 1 and counts['mcu'] == 0)

    # one global phase for every input state
    aligned = np.exp(-1j * phase) * unitary
    rng = np.random.default_rng(seed)
    contract = 0.0
    for _ in range(samples):
        state = matkernel.random_state(SYSTEM_DIMENSION, rng)
        residual = np.linalg.norm(aligned @ embed_input(state) - dilate_state(kraus, state))
        contract = max(contract, float(residual))
    report.add('synth.circuit_contract', contract, CIRCUIT_CONTRACT_TOLERANCE)
    report.note('synth: {total} gates, {cnot} cnot, {single} single-qubit'.format(**counts))


def _max_z_score(histogram):
    worst = 0.0
    for count, p in zip(histogram.counts, histogram.expected):
        sigma = np.sqrt(histogram.shots * p * (1 - p))
        if sigma == 0:
            # certain or impossible outcomes must match exactly
            if count != round(histogram.shots * p):
                return float('inf')
            continue
        worst = max(worst, abs(count - histogram.shots * p) / sigma)
    return worst


def _sampling_stage(report, params, shots, seed, chunk_size):
    for label in SAMPLED_INPUTS:
        state = basis_state(label)
        matrix_histogram = sample_povm(params, state, shots, seed, route=ROUTE_MATRIX, chunk_size=chunk_size)
        circuit_histogram = sample_povm(params, state, shots, seed, route=ROUTE_CIRCUIT, chunk_size=chunk_size)
        report.add('sampling.max_sigma_{}'.format(label), _max_z_score(matrix_histogram), SIGMA_BOUND)
        statistic, dof, critical = chi_square(matrix_histogram)
        report.add('sampling.chi_square_{}'.format(label), statistic, critical)
        agree = np.max(np.abs(np.subtract(matrix_histogram.expected, circuit_histogram.expected))) <= 1e-9
        report.add_flag('sampling.routes_agree_{}'.format(label),
                        not agree or matrix_histogram.counts == circuit_histogram.counts)
        report.note('sampling {}: counts {} dof {}'.format(label, list(matrix_histogram.counts), dof))


def _collapse_stage(report, params, phase_tolerance):
    for label in BASIS_LABELS:
        state = basis_state(label)
        final = dilated_state(params, state, route=ROUTE_CIRCUIT)
        worst = 0.0
        for outcome, (expected, _) in collapse_states(params, state, COLLAPSE_THRESHOLD).items():
            actual = post_measurement_state(final, outcome)
            deviation, _ = matkernel.phase_aligned_deviation(actual.amplitudes, expected.amplitudes)
            worst = max(worst, deviation)
        report.add('collapse.{}'.format(label), worst, phase_tolerance)


def _paper_stage(report, params, povm, oracle, tolerance, samples, seed, strict):
    advisory = None if strict else True
    try:
        transcription = transcribe_paper_matrix(params)
        report.extend(audit_dilation(transcription, oracle, povm, samples=samples, seed=seed,
                                     tolerance=tolerance, enforce=strict),
                      prefix='paper_matrix.', advisory=advisory)
        product = build_paper_product_dilation(params)
        report.extend(audit_dilation(product, oracle, povm, samples=samples, seed=seed,
                                     tolerance=tolerance, enforce=strict),
                      prefix='paper_product.', advisory=advisory)
    except PovmForgeError as exc:
        report.add_flag('paper.audit_completed', False, advisory=not strict)
        report.note('paper audit stopped: {}'.format(exc))


def verify(params, tolerance=matkernel.DEFAULT_TOLERANCE, phase_tolerance=DEFAULT_PHASE_TOLERANCE,
           samples=DEFAULT_AUDIT_SAMPLES, seed=DEFAULT_AUDIT_SEED, shots=DEFAULT_SHOTS,
           chunk_size=DEFAULT_CHUNK_SIZE, sampling=True, strict=False):
    """
    Run every stage of the pipeline for `params`.

    Args:
        sampling (bool): Run the sampling stage. Collapse checks run regardless.
        strict (bool): Gate on the published matrix and factor product too.

    Returns:
        AuditReport: the combined report; its notes record the tolerances used.
    """
    report = AuditReport()
    report.note('tolerance={:.3g} phase_tolerance={:.3g} samples={} seed={} shots={}'.format(
        tolerance, phase_tolerance, samples, seed, shots if sampling else 0
    ))
    povm = build_povm(params)
    oracle = build_oracle_dilation(params, tolerance)
    kraus = kraus_operators(povm, tolerance)

    _povm_stage(report, povm, tolerance)
    _dilation_stage(report, params, povm, oracle, tolerance, samples, seed)
    _decompose_stage(report, oracle, tolerance)
    _synth_stage(report, params, oracle, kraus, phase_tolerance, samples, seed)
    if sampling:
        _sampling_stage(report, params, shots, seed, chunk_size)
    else:
        report.note('sampling disabled')
    _collapse_stage(report, params, phase_tolerance)
    _paper_stage(report, params, povm, oracle, tolerance, samples, seed, strict)

    logger.info('verified params=%s passed=%s failures=%s', params.as_dict(), report.passed, report.failures())
    return report

