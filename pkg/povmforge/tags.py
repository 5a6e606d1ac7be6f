"""
Tagged matrix entries.

Hand-transcribed matrices keep every entry as a small arithmetic expression
over the POVM symbols (``"q/(alpha*beta)"``, ``"2*q/(-alpha)"``). The tag is
parsed with sympy and evaluated on demand, so an audit can name the exact
expression behind a suspicious number.
"""

from functools import lru_cache
from tokenize import TokenError

import numpy as np
import sympy
from sympy.parsing.sympy_parser import parse_expr

from povmforge.exceptions import PovmForgeError

SYMBOL_NAMES = ('alpha', 'beta', 'gamma', 'delta', 'q', 'u', 'v', 'w', 'p', 's', 'y', 'z', 't')

# Bound explicitly so `beta` and `gamma` are not read as sympy's special functions.
SYMBOLS = {name: sympy.Symbol(name) for name in SYMBOL_NAMES}

_UNDEFINED = (sympy.zoo, sympy.oo, -sympy.oo, sympy.nan)


class TagError(PovmForgeError, ValueError):
    """A tag cannot be parsed, or is undefined for the given symbol values."""


def _symbol_name(symbol):
    return symbol.name


@lru_cache(maxsize=None)
def parse_tag(tag):
    """
    Parse a tag into a sympy expression.

    Only arithmetic and ``sqrt`` are accepted; any other function is a
    `TagError`.
    """
    try:
        expression = parse_expr(tag, local_dict=dict(SYMBOLS))
    except (SyntaxError, TokenError, TypeError, ValueError, sympy.SympifyError) as exc:
        raise TagError('cannot parse tag {!r}'.format(tag)) from exc
    if not isinstance(expression, sympy.Expr):
        raise TagError('tag {!r} is not an arithmetic expression'.format(tag))
    if expression.atoms(sympy.Function):
        raise TagError('tag {!r} uses a function other than sqrt'.format(tag))
    if expression.has(*_UNDEFINED):
        raise TagError('tag {!r} is undefined'.format(tag))
    return expression


@lru_cache(maxsize=None)
def _compile(tag):
    expression = parse_tag(tag)
    arguments = sorted(expression.free_symbols, key=_symbol_name)
    return tuple(symbol.name for symbol in arguments), sympy.lambdify(arguments, expression, modules='math')


def evaluate_tag(tag, symbols):
    """
    Evaluate one tag against a mapping of symbol values.

    Raises:
        TagError: the tag does not parse, names a symbol missing from
            `symbols`, or is undefined at these values (division by zero,
            square root of a negative number).
    """
    names, function = _compile(tag)
    try:
        values = [float(symbols[name]) for name in names]
    except KeyError as exc:
        raise TagError('unknown symbol {!r} in tag {!r}'.format(exc.args[0], tag)) from None
    try:
        return float(function(*values))
    except (ArithmeticError, ValueError, TypeError) as exc:
        raise TagError('tag {!r} is undefined at {}: {}'.format(tag, dict(zip(names, values)), exc)) from exc


def evaluate_grid(tags, symbols):
    """Evaluate a nested list of tags into a complex matrix."""
    return np.array([[evaluate_tag(tag, symbols) for tag in row] for row in tags], dtype=np.complex128)
