"""
Dilation of the five-outcome POVM into a 32x32 unitary.

Basis convention: the global index of |q1 q2>|a1 a2 a3> is
16*q1 + 8*q2 + 4*a1 + 2*a2 + a3, system qubits most significant. Printed
1-based matrix positions are the global index plus one.

Three routes build the unitary:

* ``oracle``: the four columns U|j>|000> fixed by the POVM, completed to a
  unitary by Gram-Schmidt over the canonical basis;
* ``paper-matrix``: the hand-written 32x32 matrix, kept as tagged entries;
* ``paper-product``: the product of published two-level factors (built in
  `povmforge.decompose`).

Only the four constrained columns are determined by the POVM, so audits
gate on those columns and on unitarity; full-matrix comparisons between
routes are advisory.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from povmforge import matkernel
from povmforge.exceptions import IndefiniteError, NotUnitaryError, ParamsMismatchError
from povmforge.povm import ROUNDING_FLOOR, build_povm
from povmforge.reports import AuditReport
from povmforge.tags import evaluate_grid, evaluate_tag

logger = logging.getLogger(__name__)

DIMENSION = 32
SYSTEM_DIMENSION = 4
ANCILLA_DIMENSION = 8

SOURCE_ORACLE = 'oracle'
SOURCE_PAPER_MATRIX = 'paper-matrix'
SOURCE_PAPER_PRODUCT = 'paper-product'
SOURCES = (SOURCE_ORACLE, SOURCE_PAPER_MATRIX, SOURCE_PAPER_PRODUCT)

# Ancilla bits a1a2a3 flagging outcomes 1..5.
OUTCOME_ANCILLAS = (0b000, 0b001, 0b010, 0b011, 0b100)

# Positions of |j>|000> for j = 00, 01, 10, 11.
CONSTRAINED_INDICES = (0, 8, 16, 24)

DEFAULT_AUDIT_SAMPLES = 100
DEFAULT_AUDIT_SEED = 0


def global_index(system, ancilla):
    """Global basis index of |system>|ancilla>."""
    return ANCILLA_DIMENSION * system + ancilla


@dataclass(frozen=True)
class DilationUnitary:
    """
    A 32x32 dilation candidate.

    `tags` is only set for the transcribed matrix: a 32x32 nested tuple of
    the expression behind every entry.
    """

    matrix: np.ndarray
    source: str
    params: object
    tags: Optional[Tuple[Tuple[str, ...], ...]] = None

    @property
    def unitarity_defect(self):
        return matkernel.unitarity_defect(self.matrix)


def sqrt_povm_element(p, tolerance=matkernel.DEFAULT_TOLERANCE):
    """
    Positive square root of a PSD matrix.

    Eigenvalues in [-tolerance, ROUNDING_FLOOR] are treated as rounding and
    clamped to 0.
    """
    eigenvalues, eigenvectors = matkernel.eig_hermitian(p, tolerance)
    if eigenvalues[0] < -tolerance:
        raise IndefiniteError('matrix has eigenvalue {:.3e} < 0'.format(eigenvalues[0]))
    roots = np.sqrt(np.where(eigenvalues > ROUNDING_FLOOR, eigenvalues, 0.0))
    return (eigenvectors * roots) @ eigenvectors.conj().T


def kraus_operators(povm, tolerance=matkernel.DEFAULT_TOLERANCE):
    """Kraus operators sqrt(P_1)..sqrt(P_5)."""
    return tuple(sqrt_povm_element(element, tolerance) for element in povm.elements)


def dilate_state(kraus, state):
    """The 32-vector sum_k sqrt(P_k)|state> (x) |ancilla_k>."""
    state = matkernel.as_vector(state)
    result = np.zeros(DIMENSION, dtype=np.complex128)
    for operator, ancilla in zip(kraus, OUTCOME_ANCILLAS):
        result[ancilla::ANCILLA_DIMENSION] = operator @ state
    return result


def embed_input(state):
    """The 32-vector |state> (x) |000>."""
    state = matkernel.as_vector(state)
    result = np.zeros(DIMENSION, dtype=np.complex128)
    result[::ANCILLA_DIMENSION] = state
    return result


def constrained_columns(params, tolerance=matkernel.DEFAULT_TOLERANCE):
    """The 32x4 matrix whose column j is U|j>|000>, computed from sqrt(P_k)."""
    kraus = kraus_operators(build_povm(params), tolerance)
    columns = np.zeros((DIMENSION, SYSTEM_DIMENSION), dtype=np.complex128)
    for j in range(SYSTEM_DIMENSION):
        columns[:, j] = dilate_state(kraus, np.eye(SYSTEM_DIMENSION)[j])
    return columns


# Printed coefficient of |Psi_i>|ancilla_i> (i = 1..4) and of |j>|100> in U|j>|000>.
COLUMN_COEFFICIENT_TAGS = (
    ('q/alpha', 'q/alpha', 'q/alpha', 'q/alpha', 'u'),
    ('q/beta', 'q/beta', '-q/beta', '-q/beta', 'v'),
    ('q/gamma', '-q/gamma', 'q/gamma', '-q/gamma', 'w'),
    ('q/delta', '-q/delta', '-q/delta', 'q/delta', 'p'),
)

STATE_TAGS = (
    ('1/alpha', '1/beta', '1/gamma', '1/delta'),
    ('1/alpha', '1/beta', '-1/gamma', '-1/delta'),
    ('1/alpha', '-1/beta', '1/gamma', '-1/delta'),
    ('1/alpha', '-1/beta', '-1/gamma', '1/delta'),
)


def formula_columns(params):
    """
    The four constrained columns evaluated from the printed coefficient formulas.

    This route never forms a square root, so it cross-checks
    `constrained_columns`.
    """
    symbols = params.symbols()
    columns = np.zeros((DIMENSION, SYSTEM_DIMENSION), dtype=np.complex128)
    for j, coefficients in enumerate(COLUMN_COEFFICIENT_TAGS):
        for i in range(4):
            coefficient = evaluate_tag(coefficients[i], symbols)
            for system in range(SYSTEM_DIMENSION):
                amplitude = evaluate_tag(STATE_TAGS[i][system], symbols)
                columns[global_index(system, OUTCOME_ANCILLAS[i]), j] = coefficient * amplitude
        columns[global_index(j, OUTCOME_ANCILLAS[4]), j] = evaluate_tag(coefficients[4], symbols)
    return columns


def build_oracle_dilation(params, tolerance=matkernel.DEFAULT_TOLERANCE):
    """
    Complete the constrained columns to a unitary.

    The constrained columns sit at the |j>|000> positions; the completion
    columns fill the other 28 positions in ascending order.
    """
    columns = constrained_columns(params, tolerance)
    completed = matkernel.complete_columns(columns, tolerance)
    matrix = np.zeros((DIMENSION, DIMENSION), dtype=np.complex128)
    free_indices = [index for index in range(DIMENSION) if index not in CONSTRAINED_INDICES]
    matrix[:, list(CONSTRAINED_INDICES)] = columns
    matrix[:, free_indices] = completed[:, SYSTEM_DIMENSION:]
    defect = matkernel.unitarity_defect(matrix)
    if defect > tolerance:
        raise NotUnitaryError('oracle completion is not unitary (defect {:.3e})'.format(defect))
    logger.debug('built oracle dilation defect=%.3e', defect)
    return DilationUnitary(matrix=matrix, source=SOURCE_ORACLE, params=params)


def _zero_row():
    return ('0', '0', '0', '0', '0')


# The printed 5x5 blocks, keyed by (output system state, input system state).
# Row r and column c of block (R, C) sit at global row 8R + r and column 8C + c.
PAPER_BLOCKS = {
    (0, 0): (
        ('q/alpha**2', 'alpha/(2*y)', 'alpha/(2*s)', '-alpha/(2*y)', 'u/(2*alpha)'),
        ('q/alpha**2', 'alpha/(2*y)', '-alpha/(2*s)', 'alpha/(2*y)', 'u/(2*alpha)'),
        ('q/alpha**2', '-alpha/(2*y)', 'alpha/(2*s)', 'alpha/(2*y)', 'u/(2*alpha)'),
        ('q/alpha**2', '-alpha/(2*y)', '-alpha/(2*s)', '-alpha/(2*y)', 'u/(2*alpha)'),
        ('u', '0', '0', '0', '2*q/(-alpha)'),
    ),
    (0, 1): (
        ('q/(alpha*beta)', 'beta*t/(2*gamma*delta*s)', '0', '-beta*t/(2*gamma*delta*s)', 'v/(2*alpha)'),
        ('q/(alpha*beta)', 'beta*t/(2*gamma*delta*s)', '0', 'beta*t/(2*gamma*delta*s)', 'v/(2*alpha)'),
        ('-q/(alpha*beta)', 'beta*t/(2*gamma*delta*s)', '0', '-beta*t/(2*gamma*delta*s)', '-v/(2*alpha)'),
        ('-q/(alpha*beta)', 'beta*t/(2*gamma*delta*s)', '0', 'beta*t/(2*gamma*delta*s)', '-v/(2*alpha)'),
        _zero_row(),
    ),
    (0, 2): (
        ('q/(alpha*gamma)', 'delta*z/(2*beta*gamma*y)', '0', '-delta*z/(2*beta*gamma*y)', '0'),
        ('-q/(alpha*gamma)', '-delta*z/(2*beta*gamma*y)', '0', '-delta*z/(2*beta*gamma*y)', '0'),
        ('q/(alpha*gamma)', '-delta*z/(2*beta*gamma*y)', '0', 'delta*z/(2*beta*gamma*y)', '0'),
        ('-q/(alpha*gamma)', 'delta*z/(2*beta*gamma*y)', '0', 'delta*z/(2*beta*gamma*y)', '0'),
        _zero_row(),
    ),
    (0, 3): (
        ('q/(alpha*delta)', 'w/(2*alpha)', '0', 'alpha/(2*s)', 'p/(2*alpha)'),
        ('-q/(alpha*delta)', '-w/(2*alpha)', '0', 'alpha/(2*s)', '-p/(2*alpha)'),
        ('-q/(alpha*delta)', 'w/(2*alpha)', '0', 'alpha/(2*s)', '-p/(2*alpha)'),
        ('q/(alpha*delta)', '-w/(2*alpha)', '0', 'alpha/(2*s)', 'p/(2*alpha)'),
        _zero_row(),
    ),
    (1, 0): (
        ('q/(alpha*beta)', '0', '-beta/(2*s)', '0', 'u/(2*beta)'),
        ('q/(alpha*beta)', '0', 'beta/(2*s)', '0', 'u/(2*beta)'),
        ('-q/(alpha*beta)', '0', 'beta/(2*s)', '0', '-u/(2*beta)'),
        ('-q/(alpha*beta)', '0', '-beta/(2*s)', '0', '-u/(2*beta)'),
        _zero_row(),
    ),
    (1, 1): (
        ('q/beta**2', 'alpha*t/(2*gamma*delta*s)', 'beta/(2*z)', '-alpha*t/(2*gamma*delta*s)', 'v/(2*beta)'),
        ('q/beta**2', 'alpha*t/(2*gamma*delta*s)', '-beta/(2*z)', 'alpha*t/(2*gamma*delta*s)', 'v/(2*beta)'),
        ('q/beta**2', '-alpha*t/(2*gamma*delta*s)', 'beta/(2*z)', 'alpha*t/(2*gamma*delta*s)', 'v/(2*beta)'),
        ('q/beta**2', '-alpha*t/(2*gamma*delta*s)', '-beta/(2*z)', '-alpha*t/(2*gamma*delta*s)', 'v/(2*beta)'),
        ('v', '0', '0', '0', '2*q/(-beta)'),
    ),
    (1, 2): (
        ('q/(beta*gamma)', '-gamma*y/(2*alpha*delta*z)', '0', 'gamma*y/(2*alpha*delta*z)', '0'),
        ('-q/(beta*gamma)', 'gamma*y/(2*alpha*delta*z)', '0', 'gamma*y/(2*alpha*delta*z)', '0'),
        ('-q/(beta*gamma)', '-gamma*y/(2*alpha*delta*z)', '0', 'gamma*y/(2*alpha*delta*z)', '0'),
        ('q/(beta*gamma)', 'gamma*y/(2*alpha*delta*z)', '0', 'gamma*y/(2*alpha*delta*z)', '0'),
        _zero_row(),
    ),
    (1, 3): (
        ('q/(beta*delta)', 'w/(2*beta)', 'beta/(2*z)', '-beta/(2*s)', 'p/(2*beta)'),
        ('-q/(beta*delta)', '-w/(2*beta)', 'beta/(2*z)', '-beta/(2*s)', '-p/(2*beta)'),
        ('q/(beta*delta)', '-w/(2*beta)', 'beta/(2*z)', 'beta/(2*s)', 'p/(2*beta)'),
        ('-q/(beta*delta)', 'w/(2*beta)', 'beta/(2*z)', 'beta/(2*s)', '-p/(2*beta)'),
        _zero_row(),
    ),
    (2, 0): (
        ('q/(alpha*gamma)', '0', '0', '0', 'u/(2*gamma)'),
        ('-q/(alpha*gamma)', '0', '0', '0', '-u/(2*gamma)'),
        ('q/(alpha*gamma)', '0', '0', '0', 'u/(2*gamma)'),
        ('-q/(alpha*gamma)', '0', '0', '0', '-u/(2*gamma)'),
        _zero_row(),
    ),
    (2, 1): (
        ('q/(beta*gamma)', '-delta*s/(2*alpha*beta*t)', '-gamma/(2*z)', 'delta*s/(2*alpha*beta*t)', 'v/(2*gamma)'),
        ('-q/(beta*gamma)', 'delta*s/(2*alpha*beta*t)', '-gamma/(2*z)', 'delta*s/(2*alpha*beta*t)', '-v/(2*gamma)'),
        ('-q/(beta*gamma)', '-delta*s/(2*alpha*beta*t)', 'gamma/(2*z)', 'delta*s/(2*alpha*beta*t)', '-v/(2*gamma)'),
        ('q/(beta*gamma)', 'delta*s/(2*alpha*beta*t)', 'gamma/(2*z)', 'delta*s/(2*alpha*beta*t)', 'v/(2*gamma)'),
        _zero_row(),
    ),
    (2, 2): (
        ('q/gamma**2', '-beta*y/(2*alpha*delta*z)', 'gamma/(2*t)', 'beta*y/(2*alpha*delta*z)', 'gamma/(2*t)'),
        ('q/gamma**2', '-beta*y/(2*alpha*delta*z)', '-gamma/(2*t)', '-beta*y/(2*alpha*delta*z)', 'gamma/(2*t)'),
        ('q/gamma**2', 'beta*y/(2*alpha*delta*z)', 'gamma/(2*t)', '-beta*y/(2*alpha*delta*z)', 'gamma/(2*t)'),
        ('q/gamma**2', 'beta*y/(2*alpha*delta*z)', '-gamma/(2*t)', 'beta*y/(2*alpha*delta*z)', 'gamma/(2*t)'),
        ('w', '0', '0', '0', '0'),
    ),
    (2, 3): (
        ('q/(gamma*delta)', 'w/(2*gamma)', '-gamma/(2*z)', '0', 'p/(2*gamma)'),
        ('q/(gamma*delta)', 'w/(2*gamma)', 'gamma/(2*z)', '0', 'p/(2*gamma)'),
        ('-q/(gamma*delta)', 'w/(2*gamma)', 'gamma/(2*z)', '0', '-p/(2*gamma)'),
        ('-q/(gamma*delta)', 'w/(2*gamma)', '-gamma/(2*z)', '0', '-p/(2*gamma)'),
        ('0', '2*q/(-gamma)', '0', '0', '0'),
    ),
    (3, 0): (
        ('q/(alpha*delta)', '-delta/(2*y)', '0', 'delta/(2*y)', 'u/(2*delta)'),
        ('-q/(alpha*delta)', 'delta/(2*y)', '0', 'delta/(2*y)', '-u/(2*delta)'),
        ('-q/(alpha*delta)', '-delta/(2*y)', '0', 'delta/(2*y)', '-u/(2*delta)'),
        ('q/(alpha*delta)', 'delta/(2*y)', '0', 'delta/(2*y)', 'u/(2*delta)'),
        _zero_row(),
    ),
    (3, 1): (
        ('q/(beta*delta)', '-gamma*s/(2*alpha*beta*t)', '0', 'gamma*s/(2*alpha*beta*t)', 'v/(2*delta)'),
        ('-q/(beta*delta)', 'gamma*s/(2*alpha*beta*t)', '0', 'gamma*s/(2*alpha*beta*t)', '-v/(2*delta)'),
        ('q/(beta*delta)', 'gamma*s/(2*alpha*beta*t)', '0', '-gamma*s/(2*alpha*beta*t)', 'v/(2*delta)'),
        ('-q/(beta*delta)', '-gamma*s/(2*alpha*beta*t)', '0', '-gamma*s/(2*alpha*beta*t)', '-v/(2*delta)'),
        _zero_row(),
    ),
    (3, 2): (
        ('q/(gamma*delta)', 'alpha*z/(2*beta*gamma*y)', '-delta/(2*t)', '-alpha*z/(2*beta*gamma*y)', '-delta/(2*t)'),
        ('q/(gamma*delta)', 'alpha*z/(2*beta*gamma*y)', 'delta/(2*t)', 'alpha*z/(2*beta*gamma*y)', '-delta/(2*t)'),
        ('-q/(gamma*delta)', 'alpha*z/(2*beta*gamma*y)', 'delta/(2*t)', '-alpha*z/(2*beta*gamma*y)', 'delta/(2*t)'),
        ('-q/(gamma*delta)', 'alpha*z/(2*beta*gamma*y)', '-delta/(2*t)', 'alpha*z/(2*beta*gamma*y)', 'delta/(2*t)'),
        _zero_row(),
    ),
    (3, 3): (
        ('q/delta**2', 'w/(2*delta)', '0', '0', 'p/(2*delta)'),
        ('q/delta**2', 'w/(2*delta)', '0', '0', 'p/(2*delta)'),
        ('q/delta**2', '-w/(2*delta)', '0', '0', 'p/(2*delta)'),
        ('q/delta**2', '-w/(2*delta)', '0', '0', 'p/(2*delta)'),
        ('p', '0', '0', '0', '2*q/(-delta)'),
    ),
}


def paper_matrix_tags():
    """The 32x32 grid of entry tags, identity blocks on ancillas 101..111 included."""
    grid = [['0'] * DIMENSION for _ in range(DIMENSION)]
    for (row_block, column_block), block in PAPER_BLOCKS.items():
        for r, row in enumerate(block):
            for c, tag in enumerate(row):
                grid[global_index(row_block, r)][global_index(column_block, c)] = tag
    for system in range(SYSTEM_DIMENSION):
        for ancilla in range(len(OUTCOME_ANCILLAS), ANCILLA_DIMENSION):
            index = global_index(system, ancilla)
            grid[index][index] = '1'
    return tuple(tuple(row) for row in grid)


def transcribe_paper_matrix(params):
    """Evaluate the transcribed matrix; unitarity is measured, never enforced."""
    tags = paper_matrix_tags()
    matrix = evaluate_grid(tags, params.symbols())
    logger.debug('transcribed matrix defect=%.3e', matkernel.unitarity_defect(matrix))
    return DilationUnitary(matrix=matrix, source=SOURCE_PAPER_MATRIX, params=params, tags=tags)


def dilation_residual(matrix, kraus, state):
    """Norm of U(|state>|000>) - sum_k sqrt(P_k)|state>|ancilla_k>."""
    return float(np.linalg.norm(matrix @ embed_input(state) - dilate_state(kraus, state)))


def audit_dilation(candidate, reference, povm, samples=DEFAULT_AUDIT_SAMPLES, seed=DEFAULT_AUDIT_SEED,
                   tolerance=matkernel.DEFAULT_TOLERANCE, enforce=None):
    """
    Audit `candidate` against the POVM and against `reference`.

    Args:
        samples (int): Number of seeded random input states for the dilation contract.
        enforce (bool): Optional, gate on the candidate checks. Defaults to
            gating only oracle candidates; transcribed and published routes are reported.

    Returns:
        AuditReport: every check, passing or not.
    """
    if not (candidate.params == reference.params == povm.params):
        raise ParamsMismatchError('candidate, reference and povm were built from different parameters')
    if enforce is None:
        enforce = candidate.source == SOURCE_ORACLE
    advisory = not enforce

    report = AuditReport()
    matrix = candidate.matrix
    report.add('unitarity_defect', matkernel.unitarity_defect(matrix), tolerance, advisory=advisory)

    expected = constrained_columns(candidate.params, tolerance)
    constrained = matrix[:, list(CONSTRAINED_INDICES)]
    report.add('constrained_columns', matkernel.max_deviation(constrained, expected), tolerance,
               advisory=advisory)

    kraus = kraus_operators(povm, tolerance)
    rng = np.random.default_rng(seed)
    contract = max(
        dilation_residual(matrix, kraus, matkernel.random_state(SYSTEM_DIMENSION, rng)) for _ in range(samples)
    )
    report.add('dilation_contract', contract, tolerance, advisory=advisory)

    reference_constrained = reference.matrix[:, list(CONSTRAINED_INDICES)]
    report.add('reference_constrained_columns',
               matkernel.max_deviation(constrained, reference_constrained), tolerance, advisory=advisory)
    report.add('reference_full_matrix', matkernel.max_deviation(matrix, reference.matrix), tolerance,
               advisory=True)

    report.note('candidate={} reference={} samples={} seed={} tolerance={:.3g}'.format(
        candidate.source, reference.source, samples, seed, tolerance
    ))
    report.note('full-matrix comparison is advisory: completions outside the constrained columns are not unique')
    if candidate.tags is not None:
        findings = entry_findings(candidate, reference, tolerance)
        report.add('suspect_entries', len(findings), 0, advisory=True)
        report.notes.extend(findings)
    logger.info('audited %s against %s passed=%s', candidate.source, reference.source, report.passed)
    return report


def _tags_in(tags):
    return sorted({tag for tag in tags if tag not in ('0', '1')})


def entry_findings(candidate, reference, tolerance=matkernel.DEFAULT_TOLERANCE):
    """
    Name the tagged entries that break the dilation.

    Lists constrained-column entries that differ from `reference`, then rows
    and columns whose norm is not one, each with the tags it contains.
    Positions are 1-based.
    """
    tags = candidate.tags
    matrix = candidate.matrix
    findings = []
    for column in CONSTRAINED_INDICES:
        for row in range(DIMENSION):
            got = matrix[row, column]
            want = reference.matrix[row, column]
            if abs(got - want) > tolerance:
                findings.append('entry ({},{}) tag {!r} = {:.12g}, constrained value {:.12g}'.format(
                    row + 1, column + 1, tags[row][column], got.real, want.real
                ))
    row_norms = np.linalg.norm(matrix, axis=1)
    for row in np.flatnonzero(np.abs(row_norms - 1) > tolerance):
        findings.append('row {} norm {:.12g}; tags {}'.format(
            row + 1, row_norms[row], ', '.join(_tags_in(tags[row]))
        ))
    column_norms = np.linalg.norm(matrix, axis=0)
    for column in np.flatnonzero(np.abs(column_norms - 1) > tolerance):
        findings.append('column {} norm {:.12g}; tags {}'.format(
            column + 1, column_norms[column], ', '.join(_tags_in(row[column] for row in tags))
        ))
    return findings
