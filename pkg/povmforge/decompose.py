"""
Two-level unitary factorisations.

A two-level operation acts as a 2x2 unitary on the span of two basis states
i < j and as the identity elsewhere. Sequences multiply left to right as
written: the matrix of ``(op_1, ..., op_n)`` is op_1 @ op_2 @ ... @ op_n.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from povmforge import matkernel
from povmforge.dilation import DIMENSION, SOURCE_PAPER_PRODUCT, DilationUnitary
from povmforge.exceptions import DimensionError, InvalidTwoLevelOpError, NotUnitaryError
from povmforge.tags import evaluate_grid

logger = logging.getLogger(__name__)

BLOCK_TOLERANCE = 1e-12
# The published blocks are orthogonal only up to the normalization constraint.
PAPER_BLOCK_TOLERANCE = 1e-10
ZERO_TOLERANCE = 1e-14
CONVENTION = 'left-first'


@dataclass(frozen=True)
class TwoLevelOp:
    """
    A 2x2 unitary `block` on basis states `i` < `j` (0-based).

    The block is placed as [[a, b], [c, d]] at (i, i), (i, j), (j, i), (j, j).
    """

    i: int
    j: int
    block: np.ndarray
    label: Optional[str] = None


@dataclass(frozen=True)
class TwoLevelSeq:
    """An ordered product of two-level operations in dimension `dim`."""

    dim: int
    ops: Tuple[TwoLevelOp, ...]
    convention: str = CONVENTION

    def __len__(self):
        return len(self.ops)


def make_op(i, j, block, label=None, tolerance=BLOCK_TOLERANCE):
    """Build a validated `TwoLevelOp`."""
    block = np.asarray(block, dtype=np.complex128)
    if block.shape != (2, 2):
        raise InvalidTwoLevelOpError('two-level block must be 2x2, got {}'.format(block.shape))
    if not 0 <= i < j:
        raise InvalidTwoLevelOpError('two-level indices must satisfy 0 <= i < j, got ({}, {})'.format(i, j))
    defect = matkernel.unitarity_defect(block)
    if defect > tolerance:
        raise InvalidTwoLevelOpError('block on ({}, {}) is not unitary (defect {:.3e})'.format(i, j, defect))
    return TwoLevelOp(i=int(i), j=int(j), block=block, label=label)


def embed(op, dim):
    """The `dim` x `dim` matrix of `op`."""
    if not 0 <= op.i < op.j < dim:
        raise InvalidTwoLevelOpError('indices ({}, {}) out of range for dimension {}'.format(op.i, op.j, dim))
    matrix = matkernel.identity(dim)
    matrix[np.ix_((op.i, op.j), (op.i, op.j))] = op.block
    return matrix


def reconstruct(seq, reverse=False):
    """
    Multiply out `seq`.

    Args:
        reverse (bool): Multiply the factors in reverse order. Diagnostic only.
    """
    result = matkernel.identity(seq.dim)
    ops = reversed(seq.ops) if reverse else seq.ops
    for op in ops:
        if not 0 <= op.i < op.j < seq.dim:
            raise InvalidTwoLevelOpError('indices ({}, {}) out of range for dimension {}'.format(
                op.i, op.j, seq.dim
            ))
        pair = [op.i, op.j]
        result[:, pair] = result[:, pair] @ op.block
    return result


def _rotate_rows(work, i, j, g):
    pair = [i, j]
    work[pair, :] = g @ work[pair, :]


def two_level_decompose(u, tolerance=matkernel.DEFAULT_TOLERANCE):
    """
    Factor a unitary into at most d(d-1)/2 two-level operations.

    Columns are cleared left to right. In each column the entries below the
    diagonal are zeroed bottom-up by Givens rotations on (column, row), which
    also leave a real positive diagonal. A column needing no rotation but
    carrying a diagonal phase gets a single phase op on (column, column + 1).
    The last 2x2 block is emitted as one op, absorbing the final phase.
    """
    u = matkernel.as_matrix(u)
    dim = u.shape[0]
    if dim != u.shape[1] or dim < 2:
        raise DimensionError('expected a square matrix of dimension >= 2, got {}'.format(u.shape))
    defect = matkernel.unitarity_defect(u)
    if defect > tolerance:
        raise NotUnitaryError('matrix is not unitary (defect {:.3e})'.format(defect))

    work = u.copy()
    ops = []
    for column in range(dim - 2):
        for row in range(dim - 1, column, -1):
            b = work[row, column]
            if abs(b) <= ZERO_TOLERANCE:
                continue
            a = work[column, column]
            norm = np.hypot(abs(a), abs(b))
            g = np.array([[np.conj(a), np.conj(b)], [-b, a]]) / norm
            _rotate_rows(work, column, row, g)
            ops.append(TwoLevelOp(i=column, j=row, block=g.conj().T))
        diagonal = work[column, column]
        if abs(np.angle(diagonal)) > ZERO_TOLERANCE:
            phase = diagonal / abs(diagonal)
            g = np.diag([np.conj(phase), 1.0]).astype(np.complex128)
            _rotate_rows(work, column, column + 1, g)
            ops.append(TwoLevelOp(i=column, j=column + 1, block=g.conj().T))

    last = dim - 2
    block = work[np.ix_((last, last + 1), (last, last + 1))].copy()
    if np.max(np.abs(block - matkernel.identity(2))) > ZERO_TOLERANCE:
        ops.append(TwoLevelOp(i=last, j=last + 1, block=block))

    logger.debug('two-level decomposition dim=%d ops=%d', dim, len(ops))
    return TwoLevelSeq(dim=dim, ops=tuple(ops))


_H2 = (('1/sqrt(2)', '1/sqrt(2)'), ('1/sqrt(2)', '-1/sqrt(2)'))
_X = (('0', '1'), ('1', '0'))

# Six factors repeated on each quadruple b, b+1, b+2, b+3 (1-based offsets from b).
_M_TEMPLATE = (
    (0, 1, _H2),
    (0, 2, (('sqrt(2/3)', '1/sqrt(3)'), ('1/sqrt(3)', '-sqrt(2/3)'))),
    (0, 3, (('sqrt(3)/2', '1/2'), ('1/2', '-sqrt(3)/2'))),
    (1, 3, _X),
    (1, 2, (('sqrt(1/3)', 'sqrt(2)/sqrt(3)'), ('sqrt(2)/sqrt(3)', '-sqrt(1/3)'))),
    (2, 3, _H2),
)
_M_BASES = (1, 9, 17, 25)

# The remaining factors of the product, 1-based index pairs in printed order.
_PRODUCT_FACTORS = (
    (1, 10, (('alpha/s', '-beta/s'), ('-beta/s', '-alpha/s'))),
    (2, 27, (('alpha/y', '-delta/y'), ('-delta/y', '-alpha/y'))),
    (3, 12, (('alpha/s', 'beta/s'), ('beta/s', '-alpha/s'))),
    (4, 25, (('alpha/y', 'delta/y'), ('delta/y', '-alpha/y'))),
    (9, 20, (('beta/z', 'gamma/z'), ('gamma/z', '-beta/z'))),
    (11, 18, (('beta/z', '-gamma/z'), ('-gamma/z', '-beta/z'))),
    (17, 26, (('gamma/t', '-delta/t'), ('-delta/t', '-gamma/t'))),
    (19, 28, (('gamma/t', 'delta/t'), ('delta/t', '-gamma/t'))),
    (10, 28, (('-t/(gamma*delta)', '-s/(alpha*beta)'), ('-s/(alpha*beta)', 't/(gamma*delta)'))),
    (12, 26, (('-t/(gamma*delta)', '-s/(alpha*beta)'), ('-s/(alpha*beta)', 't/(gamma*delta)'))),
    (18, 25, (('y/(alpha*delta)', '-z/(beta*gamma)'), ('-z/(beta*gamma)', '-y/(alpha*delta)'))),
    (20, 27, (('y/(alpha*delta)', 'z/(beta*gamma)'), ('z/(beta*gamma)', '-y/(alpha*delta)'))),
    (5, 28, (('-2*q/alpha', 'u'), ('u', '2*q/alpha'))),
    (13, 27, (('-2*q/beta', 'v'), ('v', '2*q/beta'))),
    (21, 26, (('w', '-2*q/gamma'), ('-2*q/gamma', '-w'))),
    (25, 29, (('2*q/delta', 'p'), ('p', '-2*q/delta'))),
    (1, 28, _X),
    (9, 27, _X),
    (17, 21, _X),
)


def paper_factor_table():
    """
    The published factors as (i, j, tags) with 1-based pairs.

    M's 24 factors come first since M is the leftmost factor of the product.
    """
    table = []
    for base in _M_BASES:
        for offset_i, offset_j, tags in _M_TEMPLATE:
            table.append((base + offset_i, base + offset_j, tags))
    table.extend(_PRODUCT_FACTORS)
    return tuple(table)


def _label(i, j, tags):
    return '({},{}) [[{}, {}], [{}, {}]]'.format(i, j, tags[0][0], tags[0][1], tags[1][0], tags[1][1])


def paper_factorization(params):
    """The 43 published two-level factors, converted to 0-based pairs."""
    symbols = params.symbols()
    ops = []
    for i, j, tags in paper_factor_table():
        block = evaluate_grid(tags, symbols)
        ops.append(make_op(i - 1, j - 1, block, label=_label(i, j, tags), tolerance=PAPER_BLOCK_TOLERANCE))
    return TwoLevelSeq(dim=DIMENSION, ops=tuple(ops))


def block_defects(seq):
    """Unitarity defect of every block, in sequence order."""
    return [matkernel.unitarity_defect(op.block) for op in seq.ops]


def build_paper_product_dilation(params, reverse=False):
    """The dilation candidate obtained by multiplying out the published factors."""
    matrix = reconstruct(paper_factorization(params), reverse=reverse)
    logger.debug('published factor product reverse=%s defect=%.3e', reverse, matkernel.unitarity_defect(matrix))
    return DilationUnitary(matrix=matrix, source=SOURCE_PAPER_PRODUCT, params=params)
