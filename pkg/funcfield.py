"""
Rational functions in t and u over the algebraic closure of F_p.

Polynomial text grammar (whitespace-insensitive):

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' ['-'] INT)?
    atom  := INT | 't' | 'u' | 'z' INT | '(' expr ')'

`z<e>` is the Conway generator of F_{p^e}. Serialized polynomials are sums of
`coeff*t^i*u^j` terms in descending monomial order.
"""
from functools import lru_cache
from itertools import combinations, product

from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from groundfield import GFElem, constants, format_gf, poly_roots
from run_configs import SearchBudget

Monomial = Tuple[int, int]


class ExpressionError(ValueError):
    """Malformed polynomial or rational function text."""
    def __init__(self, message: str, text: str, offset: int):
        super().__init__('{} at offset {} in "{}"'.format(message, offset, text))
        self.offset = offset


class CurveError(ValueError):
    """Invalid curve data or operation not defined for the curve."""


def _order_key(monomial: Monomial) -> Tuple[int, int]:
    # Lex order with u > t
    return (monomial[1], monomial[0])


class BivPoly():
    """Sparse polynomial in t and u; monomial (i, j) stands for t^i u^j."""
    __slots__ = ('p', 'terms', '_key')

    def __init__(self, p: int, terms: Mapping[Monomial, GFElem]):
        self.p = p
        self.terms: Dict[Monomial, GFElem] = {m: c for m, c in terms.items() if not c.is_zero()}
        self._key: Optional[tuple] = None

    @staticmethod
    def constant(p: int, value: GFElem) -> 'BivPoly':
        return BivPoly(p, {(0, 0): value})

    @staticmethod
    def from_int(p: int, value: int) -> 'BivPoly':
        return BivPoly(p, {(0, 0): GFElem.from_int(p, value)})

    @staticmethod
    def monomial(p: int, i: int, j: int, coefficient: Optional[GFElem] = None) -> 'BivPoly':
        return BivPoly(p, {(i, j): coefficient if coefficient is not None else GFElem.from_int(p, 1)})

    @staticmethod
    def t(p: int) -> 'BivPoly':
        return BivPoly.monomial(p, 1, 0)

    @staticmethod
    def u(p: int) -> 'BivPoly':
        return BivPoly.monomial(p, 0, 1)

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.p,) + tuple(sorted((m, c.key()) for m, c in self.terms.items()))
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BivPoly):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self.terms)

    def coefficient(self, i: int, j: int) -> GFElem:
        return self.terms.get((i, j), GFElem.from_int(self.p, 0))

    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def degree_in(self, variable: str) -> int:
        index = 0 if variable == 't' else 1
        return max((m[index] for m in self.terms), default=-1)

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=_order_key)

    def leading_coefficient(self) -> GFElem:
        return self.terms[self.leading_monomial()]

    def __add__(self, other: 'BivPoly') -> 'BivPoly':
        result = dict(self.terms)
        for m, c in other.terms.items():
            result[m] = result[m] + c if m in result else c
        return BivPoly(self.p, result)

    def __neg__(self) -> 'BivPoly':
        return BivPoly(self.p, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: 'BivPoly') -> 'BivPoly':
        return self + (-other)

    def __mul__(self, other: 'BivPoly') -> 'BivPoly':
        result: Dict[Monomial, GFElem] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                m = (i1 + i2, j1 + j2)
                value = c1 * c2
                result[m] = result[m] + value if m in result else value
        return BivPoly(self.p, result)

    def scale(self, factor: GFElem) -> 'BivPoly':
        return BivPoly(self.p, {m: c * factor for m, c in self.terms.items()})

    def __pow__(self, exponent: int) -> 'BivPoly':
        if exponent < 0:
            raise ValueError('Negative power of a polynomial')
        result = BivPoly.from_int(self.p, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def exact_div(self, divisor: 'BivPoly') -> Optional['BivPoly']:
        """
        Quotient if divisor divides self exactly, else None.
        """
        if divisor.is_zero():
            raise ZeroDivisionError('Polynomial division by zero')
        lead = divisor.leading_monomial()
        lead_inv = divisor.terms[lead].inv()
        remainder = dict(self.terms)
        quotient: Dict[Monomial, GFElem] = {}
        while remainder:
            m = max(remainder, key=_order_key)
            if m[0] < lead[0] or m[1] < lead[1]:
                return None
            factor = remainder[m] * lead_inv
            shift = (m[0] - lead[0], m[1] - lead[1])
            quotient[shift] = factor
            for (i, j), c in divisor.terms.items():
                target = (i + shift[0], j + shift[1])
                value = remainder.get(target, GFElem.from_int(self.p, 0)) - c * factor
                if value.is_zero():
                    remainder.pop(target, None)
                else:
                    remainder[target] = value
        return BivPoly(self.p, quotient)

    def monic(self) -> 'BivPoly':
        return self.scale(self.leading_coefficient().inv())

    def content_monomial(self) -> Monomial:
        """Largest t^a u^b dividing every term."""
        if not self.terms:
            return (0, 0)
        return (min(i for i, _ in self.terms), min(j for _, j in self.terms))

    def shift_down(self, monomial: Monomial) -> 'BivPoly':
        a, b = monomial
        return BivPoly(self.p, {(i - a, j - b): c for (i, j), c in self.terms.items()})

    def evaluate_t(self, value: GFElem) -> GFElem:
        """Value of a polynomial in t only."""
        result = GFElem.from_int(self.p, 0)
        for (i, j), c in self.terms.items():
            if j:
                raise ValueError('Polynomial {} is not univariate in t'.format(self))
            result = result + c * value ** i
        return result

    def __repr__(self) -> str:
        return 'BivPoly("{}")'.format(self)

    def __str__(self) -> str:
        return format_poly(self)


def format_poly(f: BivPoly) -> str:
    """
    >>> format_poly(parse_poly(5, 'u - t^2 + 2*t*u'))
    '2*t*u + u - t^2'
    """
    if f.is_zero():
        return '0'
    pieces = []
    for m in sorted(f.terms, key=_order_key, reverse=True):
        c = f.terms[m]
        i, j = m
        factors = []
        if i:
            factors.append('t' if i == 1 else 't^{}'.format(i))
        if j:
            factors.append('u' if j == 1 else 'u^{}'.format(j))
        coeff = format_gf(c)
        negative = coeff.startswith('-')
        magnitude = coeff[1:] if negative else coeff
        if factors and magnitude == '1':
            text = '*'.join(factors)
        else:
            text = '*'.join([magnitude] + factors)
        pieces.append(('-' if negative else '+', text))
    sign, text = pieces[0]
    result = ('-' if sign == '-' else '') + text
    for sign, text in pieces[1:]:
        result += ' {} {}'.format(sign, text)
    return result


class BivRat():
    """
    A nonzero-denominator fraction num/den. Denominators are kept monic with
    common monomial factors cancelled; no general gcd reduction is done.
    """
    __slots__ = ('num', 'den')

    def __init__(self, num: BivPoly, den: Optional[BivPoly] = None):
        if den is None:
            den = BivPoly.from_int(num.p, 1)
        if den.is_zero():
            raise ZeroDivisionError('Rational function with zero denominator')
        if num.p != den.p:
            raise ValueError('Mismatching characteristics {} and {}'.format(num.p, den.p))
        if num.is_zero():
            den = BivPoly.from_int(num.p, 1)
        else:
            a1, b1 = num.content_monomial()
            a2, b2 = den.content_monomial()
            common = (min(a1, a2), min(b1, b2))
            if common != (0, 0):
                num = num.shift_down(common)
                den = den.shift_down(common)
        lead_inv = den.leading_coefficient().inv()
        if not lead_inv.is_one():
            num = num.scale(lead_inv)
            den = den.scale(lead_inv)
        self.num = num
        self.den = den

    @property
    def p(self) -> int:
        return self.num.p

    @staticmethod
    def from_int(p: int, value: int) -> 'BivRat':
        return BivRat(BivPoly.from_int(p, value))

    @staticmethod
    def constant(p: int, value: GFElem) -> 'BivRat':
        return BivRat(BivPoly.constant(p, value))

    def key(self) -> tuple:
        return (self.num.key(), self.den.key())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BivRat):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: 'BivRat') -> 'BivRat':
        if self.den == other.den:
            return BivRat(self.num + other.num, self.den)
        return BivRat(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> 'BivRat':
        return BivRat(-self.num, self.den)

    def __sub__(self, other: 'BivRat') -> 'BivRat':
        return self + (-other)

    def __mul__(self, other: 'BivRat') -> 'BivRat':
        return BivRat(self.num * other.num, self.den * other.den)

    def inv(self) -> 'BivRat':
        if self.is_zero():
            raise ZeroDivisionError('Inverse of the zero rational function')
        return BivRat(self.den, self.num)

    def __truediv__(self, other: 'BivRat') -> 'BivRat':
        return self * other.inv()

    def __pow__(self, exponent: int) -> 'BivRat':
        if exponent < 0:
            return self.inv() ** (-exponent)
        return BivRat(self.num ** exponent, self.den ** exponent)

    def one_minus(self) -> 'BivRat':
        return BivRat(self.den - self.num, self.den)

    def scale(self, factor: GFElem) -> 'BivRat':
        return BivRat(self.num.scale(factor), self.den)

    def __repr__(self) -> str:
        return 'BivRat("{}")'.format(self)

    def __str__(self) -> str:
        if self.den == BivPoly.from_int(self.p, 1):
            return format_poly(self.num)
        return '({})/({})'.format(format_poly(self.num), format_poly(self.den))


def rat_arith(op: str, x: BivRat, y: Optional[BivRat] = None) -> BivRat:
    """
    >>> str(rat_arith('one_minus', parse_rat(5, 't')))
    '-t + 1'
    """
    if op == 'inv':
        return x.inv()
    if op == 'one_minus':
        return x.one_minus()
    if y is None:
        raise ValueError('Operation {} needs two operands'.format(op))
    if op == 'add':
        return x + y
    if op == 'mul':
        return x * y
    raise ValueError('Unknown operation {}'.format(op))


class _ExpressionParser():
    def __init__(self, p: int, text: str):
        self.p = p
        self.text = text
        self.pos = 0

    def error(self, message: str) -> ExpressionError:
        return ExpressionError(message, self.text, self.pos)

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ''

    def integer(self) -> int:
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error('Expected an integer')
        return int(self.text[start:self.pos])

    def parse(self) -> BivRat:
        result = self.expr()
        if self.peek():
            raise self.error('Unexpected "{}"'.format(self.peek()))
        return result

    def expr(self) -> BivRat:
        result = self.term()
        while self.peek() in ('+', '-'):
            op = self.text[self.pos]
            self.pos += 1
            right = self.term()
            result = result + right if op == '+' else result - right
        return result

    def term(self) -> BivRat:
        result = self.unary()
        while self.peek() in ('*', '/'):
            op = self.text[self.pos]
            self.pos += 1
            right = self.unary()
            if op == '*':
                result = result * right
            else:
                if right.is_zero():
                    raise self.error('Division by zero')
                result = result / right
        return result

    def unary(self) -> BivRat:
        if self.peek() == '-':
            self.pos += 1
            return -self.unary()
        return self.power()

    def power(self) -> BivRat:
        base = self.atom()
        if self.peek() == '^':
            self.pos += 1
            negative = False
            if self.peek() == '-':
                self.pos += 1
                negative = True
            exponent = self.integer()
            if negative and base.is_zero():
                raise self.error('Negative power of zero')
            return base ** (-exponent if negative else exponent)
        return base

    def atom(self) -> BivRat:
        char = self.peek()
        if char == '(':
            self.pos += 1
            result = self.expr()
            if self.peek() != ')':
                raise self.error('Expected ")"')
            self.pos += 1
            return result
        if char.isdigit():
            return BivRat.from_int(self.p, self.integer())
        if char == 't':
            self.pos += 1
            return BivRat(BivPoly.t(self.p))
        if char == 'u':
            self.pos += 1
            return BivRat(BivPoly.u(self.p))
        if char == 'z':
            self.pos += 1
            degree = self.integer()
            if degree < 1:
                raise self.error('Field degree must be positive')
            return BivRat.constant(self.p, GFElem.generator(self.p, degree))
        raise self.error('Unexpected "{}"'.format(char) if char else 'Unexpected end of input')


def parse_rat(p: int, text: str) -> BivRat:
    """
    >>> str(parse_rat(5, 't/u * u/t'))
    '1'
    """
    return _ExpressionParser(p, text).parse()


def parse_poly(p: int, text: str) -> BivPoly:
    x = parse_rat(p, text)
    if not x.den.is_constant():
        raise ExpressionError('Expected a polynomial', text, 0)
    return x.num.scale(x.den.coefficient(0, 0).inv())


def parse_constant(p: int, text: str) -> GFElem:
    f = parse_poly(p, text)
    if not f.is_constant():
        raise ExpressionError('Expected a constant', text, 0)
    return f.coefficient(0, 0)


def _multiplicity(f: BivPoly, poly: BivPoly) -> int:
    count = 0
    while not poly.is_zero():
        quotient = poly.exact_div(f)
        if quotient is None:
            break
        poly = quotient
        count += 1
    return count


@lru_cache(maxsize=65536)
def _cached_multiplicity(f: BivPoly, poly: BivPoly) -> int:
    return _multiplicity(f, poly)


def curve_order(f: BivPoly, x: BivRat) -> int:
    """
    Order of vanishing of x along the curve f = 0.

    >>> curve_order(parse_poly(5, 'u'), parse_rat(5, 't/u^3'))
    -3
    """
    if f.is_constant():
        raise CurveError('Curve polynomial must not be constant')
    if x.is_zero():
        raise ZeroDivisionError('Order of zero along {}'.format(f))
    return _cached_multiplicity(f, x.num) - _cached_multiplicity(f, x.den)


def _is_univariate_quadratic(a: GFElem, b: GFElem, c: GFElem, d: GFElem, e: GFElem) -> bool:
    only_t = b.is_zero() and c.is_zero() and e.is_zero()
    only_u = a.is_zero() and b.is_zero() and d.is_zero()
    return only_t or only_u


def is_absolutely_irreducible(f: BivPoly) -> bool:
    """
    Decide absolute irreducibility for total degree at most 2 by factoring
    the quadratic part into linear forms and matching the lower terms.

    >>> is_absolutely_irreducible(parse_poly(5, 'u - t^2'))
    True
    >>> is_absolutely_irreducible(parse_poly(5, 't^2 - u^2'))
    False
    """
    degree = f.total_degree()
    if degree > 2:
        raise CurveError('Irreducibility is only decided up to total degree 2, got {}'.format(degree))
    if degree <= 0:
        return False
    if degree == 1:
        return True
    p = f.p
    a, b, c = f.coefficient(2, 0), f.coefficient(1, 1), f.coefficient(0, 2)
    d, e, g = f.coefficient(1, 0), f.coefficient(0, 1), f.coefficient(0, 0)
    zero = GFElem.from_int(p, 0)
    one = GFElem.from_int(p, 1)
    if _is_univariate_quadratic(a, b, c, d, e):
        # A univariate quadratic splits over the algebraic closure
        return False
    # Quadratic part = scale * (l1 . (t, u)) * (l2 . (t, u))
    if not a.is_zero():
        roots = [r for r, mult in poly_roots([c, b, a]) for _ in range(mult)]
        l1, l2, scale = (one, -roots[0]), (one, -roots[1]), a
    elif not c.is_zero():
        l1, l2, scale = (zero, one), (b, c), one
    else:
        l1, l2, scale = (one, zero), (zero, one), b
    det = l1[0] * l2[1] - l1[1] * l2[0]
    if not det.is_zero():
        # scale * (g2 * l1 + g1 * l2) = (d, e)
        rhs_t, rhs_u = d / scale, e / scale
        g2 = (rhs_t * l2[1] - rhs_u * l2[0]) / det
        g1 = (l1[0] * rhs_u - l1[1] * rhs_t) / det
        return scale * g1 * g2 != g
    return not (l1[0] * e - l1[1] * d).is_zero()


class LineParam():
    """
    Parametrization of a line: u = a*t + b (parameter t) or t = c
    (parameter u). Restrictions are returned as functions of t in both cases.
    """
    def __init__(self, kind: str, a: GFElem, b: GFElem):
        if kind not in ('u', 't'):
            raise CurveError('Unknown line kind {}'.format(kind))
        self.kind = kind
        self.a = a
        self.b = b

    def restrict_poly(self, f: BivPoly) -> BivPoly:
        p = f.p
        result = BivPoly(p, {})
        if self.kind == 'u':
            line = BivPoly(p, {(1, 0): self.a, (0, 0): self.b})
            for (i, j), c in f.terms.items():
                result = result + BivPoly.monomial(p, i, 0, c) * line ** j
        else:
            for (i, j), c in f.terms.items():
                result = result + BivPoly.monomial(p, j, 0, c * self.b ** i)
        return result

    def point_lift(self, point: GFElem) -> BivPoly:
        """A polynomial whose restriction is (parameter - point)."""
        p = point.p
        variable = BivPoly.t(p) if self.kind == 'u' else BivPoly.u(p)
        return variable - BivPoly.constant(p, point)


class Curve():
    """A registered prime divisor f = 0 with f normalized to a monic leading term."""
    def __init__(self, poly: BivPoly, assert_irreducible: bool = False):
        if poly.is_constant():
            raise CurveError('Curve polynomial must not be constant')
        degree = poly.total_degree()
        if degree <= 2:
            if not is_absolutely_irreducible(poly):
                raise CurveError('Curve {} is not absolutely irreducible'.format(poly))
        elif not assert_irreducible:
            raise CurveError('Curve {} has degree {}; irreducibility must be asserted'.format(poly, degree))
        self.poly = poly.monic()
        self.asserted = assert_irreducible and degree > 2
        self.line = self._line_param()

    def _line_param(self) -> Optional[LineParam]:
        if self.poly.total_degree() != 1:
            return None
        alpha = self.poly.coefficient(1, 0)
        beta = self.poly.coefficient(0, 1)
        gamma = self.poly.coefficient(0, 0)
        if not beta.is_zero():
            return LineParam('u', -alpha / beta, -gamma / beta)
        return LineParam('t', GFElem.from_int(self.poly.p, 0), -gamma / alpha)

    @property
    def p(self) -> int:
        return self.poly.p

    def uses_u(self) -> bool:
        return self.poly.degree_in('u') > 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Curve):
            return NotImplemented
        return self.poly == other.poly

    def __hash__(self) -> int:
        return hash(self.poly)

    def __str__(self) -> str:
        return str(self.poly)


def restrict_to_curve(x: BivRat, curve: Curve) -> BivRat:
    """
    Substitute the line parametrization into x (a unit along the line).

    >>> str(restrict_to_curve(parse_rat(5, '(t + u)/(1 + u)'), Curve(parse_poly(5, 'u'))))
    't'
    """
    if curve.line is None:
        raise CurveError('Curve {} is not a parametrized line'.format(curve))
    order = curve_order(curve.poly, x)
    if order != 0:
        raise CurveError('Element {} has order {} along {}, expected 0'.format(x, order, curve))
    num, den = x.num, x.den
    while True:
        q1 = num.exact_div(curve.poly)
        q2 = den.exact_div(curve.poly)
        if q1 is None or q2 is None:
            break
        num, den = q1, q2
    return BivRat(curve.line.restrict_poly(num), curve.line.restrict_poly(den))


def point_order(x: BivRat, point: GFElem) -> int:
    """Order at t = point of a rational function in t only."""
    if x.is_zero():
        raise ZeroDivisionError('Order of zero at a point')
    linear = BivPoly(x.p, {(1, 0): GFElem.from_int(x.p, 1), (0, 0): -point})
    return _cached_multiplicity(linear, x.num) - _cached_multiplicity(linear, x.den)


def default_pool(p: int, variables: int, curves: Sequence[Curve] = (), extra: Sequence[BivPoly] = ()) -> List[BivPoly]:
    """
    Registered curves plus t, u, t - 1, u - 1, t - u (only the t-part for a
    one-variable field), deduplicated in first-seen order.
    """
    t = BivPoly.t(p)
    one = BivPoly.from_int(p, 1)
    base = [t, t - one]
    if variables == 2:
        u = BivPoly.u(p)
        base += [u, u - one, t - u]
    pool: List[BivPoly] = []
    seen = set()
    for f in [c.poly for c in curves] + base + list(extra):
        normalized = f.monic()
        if normalized not in seen:
            seen.add(normalized)
            pool.append(normalized)
    return pool


def signed_exponents(max_exponent: int) -> List[int]:
    """
    >>> signed_exponents(2)
    [1, -1, 2, -2]
    """
    result = []
    for e in range(1, max_exponent + 1):
        result += [e, -e]
    return result


def _shapes(pool_size: int, budget: SearchBudget, total: int) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    exponents = signed_exponents(budget.max_exponent)
    for k in range(1, budget.max_factors + 1):
        for indices in combinations(range(pool_size), k):
            for powers in product(exponents, repeat=k):
                if sum(abs(e) for e in powers) == total:
                    yield indices, powers


def enum_test_elements(pool: Sequence[BivPoly], budget: SearchBudget) -> Iterator[BivRat]:
    """
    Deterministic stream of c * prod f_i^e_i, graded by total |e| and then
    lexicographic in (constant index, factor indices, exponents). Never yields
    0 or 1.
    """
    if not pool:
        raise ValueError('The element pool must not be empty')
    p = pool[0].p
    scalars = constants(p, budget.max_constants)
    for total in range(1, budget.max_factors * budget.max_exponent + 1):
        bases = []
        for indices, powers in _shapes(len(pool), budget, total):
            base = BivRat.from_int(p, 1)
            for index, power in zip(indices, powers):
                base = base * BivRat(pool[index]) ** power
            bases.append(base)
        for scalar in scalars:
            for base in bases:
                x = base.scale(scalar)
                if x.is_zero() or x.is_one():
                    continue
                yield x
