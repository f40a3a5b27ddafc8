"""
Grammar for polynomial Hamiltonians in the Darboux variables x1..xl, y1..yl, z.

Literals are exact rationals ``p`` or ``p/q``; ``^`` takes a non-negative integer exponent and
binds tighter than unary minus, so ``-x1^2`` is ``-(x1^2)``.
"""
import functools
from fractions import Fraction

from parglare import Grammar, Parser
from parglare.exceptions import ParseError

from ..modules.darboux_poly import Poly, variable_names
from ..utilities.errors import ExpressionError

HAMILTONIAN_GRAMMAR = r"""
E: E "+" T
 | E "-" T
 | T;
T: T "*" U
 | U;
U: "-" U
 | P;
P: A "^" NUMBER
 | A;
A: "(" E ")"
 | NUMBER
 | VARIABLE;

terminals
NUMBER: /\d+(\/\d+)?/;
VARIABLE: /[A-Za-z_]\w*/;
"""


def get_grammar() -> Grammar:
    return Grammar.from_string(HAMILTONIAN_GRAMMAR)


def _column(context) -> int:
    return context.start_position + 1


@functools.lru_cache(maxsize=None)
def _parser(ell: int) -> Parser:
    nvars = 2 * ell + 1
    names = {name: index for index, name in enumerate(variable_names(ell))}

    def number(context, value):
        try:
            return Poly.constant(nvars, Fraction(value))
        except ZeroDivisionError:
            raise ExpressionError(f"Rational literal {value} has a zero denominator", _column(context))

    def variable(context, value):
        if value not in names:
            raise ExpressionError(f"Variable {value} is not defined, choose from {list(names)}", _column(context))
        return Poly.variable(nvars, names[value])

    def power(context, nodes):
        base, exponent = nodes[0], nodes[2]
        value = exponent.constant_term()
        if value.denominator != 1:
            raise ExpressionError(f"Exponent {value} is not a non-negative integer", _column(context))
        return base ** int(value)

    # one action per production, in grammar order
    actions = {
        'E': [lambda context, nodes: nodes[0] + nodes[2],
              lambda context, nodes: nodes[0] - nodes[2],
              lambda context, nodes: nodes[0]],
        'T': [lambda context, nodes: nodes[0] * nodes[2],
              lambda context, nodes: nodes[0]],
        'U': [lambda context, nodes: -nodes[1],
              lambda context, nodes: nodes[0]],
        'P': [power,
              lambda context, nodes: nodes[0]],
        'A': [lambda context, nodes: nodes[1],
              lambda context, nodes: nodes[0],
              lambda context, nodes: nodes[0]],
        'NUMBER': number,
        'VARIABLE': variable,
    }
    return Parser(get_grammar(), actions=actions)


def parse_hamiltonian(text: str, ell: int = 1) -> Poly:
    """
    Parse a polynomial in the Darboux variables of dimension 2l+1 into an exact :class:`Poly`.

    Raises:
        ExpressionError: on a syntax error or an unknown variable, with the 1-based column
    """
    if ell < 1:
        raise ValueError(f"Darboux dimension l = {ell} is not defined, use l >= 1")
    try:
        return _parser(ell).parse(text)
    except ParseError as error:
        column = error.location.start_position + 1
        expected = ", ".join(sorted(symbol.name for symbol in error.symbols_expected))
        raise ExpressionError(f"Syntax error in '{text}', expected one of {expected}", column) from error
