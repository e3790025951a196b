"""
Flag valuations with value group Z^r ordered lexicographically.

A flag on F(t, u) has at most two stages: a registered prime divisor, and
optionally a point on it given by a value of the line parameter. On F(t) a
flag is a single point stage written as the curve t - c.
"""
from enum import Enum
from functools import lru_cache

from typing import Iterable, List, Optional, Sequence, Tuple

from funcfield import BivPoly, BivRat, Curve, curve_order, point_order, restrict_to_curve
from groundfield import GFElem, format_gf
from linalg import smith_form


class ValuationError(ValueError):
    """Invalid flag data or an operation undefined for the given flag."""


class LexVector():
    """An element of Z^r, compared lexicographically."""
    __slots__ = ('coords',)

    def __init__(self, coords: Iterable[int]):
        self.coords = tuple(coords)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def _check(self, other: 'LexVector') -> None:
        if self.rank != other.rank:
            raise ValuationError('Cannot combine Z^{} with Z^{}'.format(self.rank, other.rank))

    def __add__(self, other: 'LexVector') -> 'LexVector':
        self._check(other)
        return LexVector(a + b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> 'LexVector':
        return LexVector(-a for a in self.coords)

    def __sub__(self, other: 'LexVector') -> 'LexVector':
        return self + (-other)

    def __lt__(self, other: 'LexVector') -> bool:
        self._check(other)
        return self.coords < other.coords

    def __le__(self, other: 'LexVector') -> bool:
        self._check(other)
        return self.coords <= other.coords

    def __eq__(self, other: object) -> bool:
        if isinstance(other, tuple):
            return self.coords == other
        if not isinstance(other, LexVector):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __getitem__(self, index: int) -> int:
        return self.coords[index]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_positive(self) -> bool:
        for a in self.coords:
            if a:
                return a > 0
        return False

    def __repr__(self) -> str:
        return 'LexVector({})'.format(self.coords)

    def __str__(self) -> str:
        return '({})'.format(', '.join(str(a) for a in self.coords))


class FlagValuation():
    """
    Flag valuation with stages (curve[, point]); the empty flag is the
    trivial valuation.
    """
    def __init__(self, variables: int, curve: Optional[Curve] = None, point: Optional[GFElem] = None):
        if variables not in (1, 2):
            raise ValuationError('Only fields in one or two variables are supported, got {}'.format(variables))
        if point is not None and curve is None:
            raise ValuationError('A point stage needs a curve stage')
        if curve is not None and variables == 1:
            if curve.uses_u() or curve.poly.total_degree() != 1:
                raise ValuationError('Flags on F(t) are points t - c, got {}'.format(curve))
            if point is not None:
                raise ValuationError('Flags on F(t) have rank at most 1')
        if point is not None and curve is not None and curve.line is None:
            raise ValuationError('The carrier {} of a rank-2 flag must be a line'.format(curve))
        self.variables = variables
        self.curve = curve
        self.point = point

    @staticmethod
    def trivial(variables: int) -> 'FlagValuation':
        return FlagValuation(variables)

    @property
    def rank(self) -> int:
        if self.curve is None:
            return 0
        return 1 if self.point is None else 2

    def is_trivial(self) -> bool:
        return self.curve is None

    def key(self) -> tuple:
        return (self.variables,
                self.curve.poly.key() if self.curve is not None else None,
                self.point.key() if self.point is not None else None)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FlagValuation):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def prefix(self, j: int) -> 'FlagValuation':
        if j < 0 or j > self.rank:
            raise ValuationError('Coarsening index {} out of range [0, {}]'.format(j, self.rank))
        if j == 0:
            return FlagValuation.trivial(self.variables)
        if j == 1:
            return FlagValuation(self.variables, self.curve)
        return self

    def prefixes(self) -> List['FlagValuation']:
        """Nontrivial coarsenings, coarsest first, ending with self."""
        return [self.prefix(j) for j in range(1, self.rank + 1)]

    def is_prefix_of(self, other: 'FlagValuation') -> bool:
        """Whether self is a coarsening of other (or equal to it)."""
        return self.variables == other.variables and self.rank <= other.rank and other.prefix(self.rank) == self

    def point_label(self) -> str:
        assert self.curve is not None and self.curve.line is not None and self.point is not None
        parameter = 't' if self.curve.line.kind == 'u' else 'u'
        return '{}={}'.format(parameter, format_gf(self.point))

    def __str__(self) -> str:
        if self.curve is None:
            return 'flag[]'
        stages = ['({})'.format(self.curve)]
        if self.point is not None:
            stages.append('({})'.format(self.point_label()))
        return 'flag[{}]'.format(','.join(stages))

    def __repr__(self) -> str:
        return 'FlagValuation("{}")'.format(self)


def sort_key(v: FlagValuation) -> Tuple[int, str]:
    return (v.rank, str(v))


@lru_cache(maxsize=65536)
def _flag_value(v: FlagValuation, num: BivPoly, den: BivPoly) -> Tuple[int, ...]:
    x = BivRat(num, den)
    if v.curve is None:
        return ()
    first = curve_order(v.curve.poly, x)
    if v.point is None:
        return (first,)
    f = BivRat(v.curve.poly)
    residue = restrict_to_curve(x * f ** (-first), v.curve)
    return (first, point_order(residue, v.point))


def flag_value(v: FlagValuation, x: BivRat) -> LexVector:
    """
    >>> from funcfield import parse_poly, parse_rat
    >>> v = FlagValuation(2, Curve(parse_poly(5, 'u')), GFElem.from_int(5, 0))
    >>> str(flag_value(v, parse_rat(5, 'u*t^2'))), str(flag_value(v, parse_rat(5, '(1 + u)/t')))
    ('(1, 2)', '(0, -1)')
    """
    if x.is_zero():
        raise ZeroDivisionError('Valuation of zero')
    return LexVector(_flag_value(v, x.num, x.den))


def is_unit(v: FlagValuation, x: BivRat) -> bool:
    return flag_value(v, x).is_zero()


def is_principal_unit(v: FlagValuation, x: BivRat) -> bool:
    if x.is_zero():
        raise ZeroDivisionError('Valuation of zero')
    difference = x - BivRat.from_int(x.p, 1)
    if difference.is_zero():
        return True
    return flag_value(v, difference).is_positive()


class ConvexIndex():
    """
    The convex subgroup 0^j x Z^(r-j) of Z^r; j = r is {0}, j = 0 the whole group.
    """
    def __init__(self, j: int, r: int):
        if j < 0 or j > r:
            raise ValuationError('Convex index {} out of range [0, {}]'.format(j, r))
        self.j = j
        self.r = r

    def generators(self) -> List[List[int]]:
        return [[1 if i == k else 0 for i in range(self.r)] for k in range(self.j, self.r)]

    def is_ell_divisible(self, ell: int) -> bool:
        """C = ell C, i.e. the quotient C / ell C is trivial."""
        return smith_form(self.generators(), ell, 1, columns=self.r).rank == 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConvexIndex):
            return NotImplemented
        return (self.j, self.r) == (other.j, other.r)

    def __hash__(self) -> int:
        return hash((self.j, self.r))

    def __repr__(self) -> str:
        return 'ConvexIndex({}, {})'.format(self.j, self.r)


def convex_subgroups(r: int) -> List[ConvexIndex]:
    return [ConvexIndex(j, r) for j in range(r + 1)]


def satisfies_v1(v: FlagValuation, ell: int = 2) -> bool:
    """No nontrivial ell-divisible convex subgroup in the value group."""
    return all(c.j == v.rank or not c.is_ell_divisible(ell) for c in convex_subgroups(v.rank))


def coarsen(v: FlagValuation, c: ConvexIndex) -> FlagValuation:
    if c.r != v.rank:
        raise ValuationError('Convex index of Z^{} used on a rank {} flag'.format(c.r, v.rank))
    return v.prefix(c.j)


def comparable(v: FlagValuation, w: FlagValuation) -> bool:
    if v.variables != w.variables:
        raise ValuationError('Flags live on different fields')
    return v.is_prefix_of(w) or w.is_prefix_of(v)


def max_convex_inside(kappas: Sequence[Sequence[int]], r: int, ell: int, n: int) -> ConvexIndex:
    """
    For H = {z in Z^r : kappa(z) = 0 mod ell^n for all kappa}, the coarsening
    index of the largest convex subgroup inside H.

    >>> max_convex_inside([[0, 1]], 2, 2, 1).j
    2
    >>> max_convex_inside([[1, 0]], 2, 2, 1).j
    1
    >>> max_convex_inside([], 2, 2, 1).j
    0
    """
    modulus = ell ** n
    for kappa in kappas:
        if len(kappa) != r:
            raise ValuationError('Coordinate map of length {} on Z^{}'.format(len(kappa), r))
    inside = 0
    for k in range(r - 1, -1, -1):
        if all(kappa[k] % modulus == 0 for kappa in kappas):
            inside += 1
        else:
            break
    return ConvexIndex(r - inside, r)


def ell_rank(v: FlagValuation, ell: int) -> int:
    """Dimension of the value group modulo ell over Z/ell."""
    return smith_form(ConvexIndex(0, v.rank).generators(), ell, 1, columns=v.rank).rank


def residue_trdeg(v: FlagValuation) -> int:
    return v.variables - v.rank


def abhyankar_holds(v: FlagValuation, d: int) -> bool:
    return v.rank + residue_trdeg(v) <= d


class QuasiDivisorialKind(Enum):
    QUASI_DIVISORIAL = 'quasi-divisorial'
    ALMOST = 'almost-quasi-divisorial'
    NEITHER = 'neither'


class Classification():
    def __init__(self, kind: QuasiDivisorialKind, rank: int):
        self.kind = kind
        self.rank = rank

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Classification):
            return NotImplemented
        return (self.kind, self.rank) == (other.kind, other.rank)

    def __str__(self) -> str:
        if self.kind == QuasiDivisorialKind.ALMOST:
            return 'almost-{}-quasi-divisorial'.format(self.rank)
        return self.kind.value


def classify_quasi_divisorial(v: FlagValuation, d: int) -> Classification:
    """
    >>> from funcfield import parse_poly
    >>> str(classify_quasi_divisorial(FlagValuation(2, Curve(parse_poly(5, 'u - t^2'))), 2))
    'quasi-divisorial'
    """
    if d not in (1, 2):
        raise ValuationError('Transcendence degree must be 1 or 2, got {}'.format(d))
    if v.rank > d:
        raise ValuationError('Rank {} exceeds the transcendence degree {}'.format(v.rank, d))
    if v.is_trivial() or not satisfies_v1(v):
        return Classification(QuasiDivisorialKind.NEITHER, v.rank)
    if residue_trdeg(v) != d - v.rank:
        return Classification(QuasiDivisorialKind.NEITHER, v.rank)
    if v.rank == 1:
        return Classification(QuasiDivisorialKind.QUASI_DIVISORIAL, 1)
    return Classification(QuasiDivisorialKind.ALMOST, v.rank)


def is_visible(v: FlagValuation, d: int) -> bool:
    """
    Visible flags: the value group condition holds and the residue field has
    positive transcendence degree, so its group of functionals is not a
    C-set. The residue condition on full-decomposition valuations holds for
    these flags by the visibility of quasi-divisors.
    """
    if v.is_trivial():
        return False
    classification = classify_quasi_divisorial(v, d)
    if classification.kind == QuasiDivisorialKind.NEITHER:
        return False
    return residue_trdeg(v) >= 1


def residue_point_flag(v: FlagValuation, point: GFElem) -> FlagValuation:
    """The point valuation t = point on the residue field of a line flag."""
    if v.rank != 1 or v.variables != 2:
        raise ValuationError('Residue fields are only formed for rank-1 flags on F(t, u)')
    p = point.p
    curve = Curve(BivPoly.t(p) - BivPoly.constant(p, point))
    return FlagValuation(1, curve)


def point_of(v: FlagValuation) -> GFElem:
    """The point c of a flag t - c on F(t)."""
    if v.variables != 1 or v.curve is None:
        raise ValuationError('{} is not a point flag on F(t)'.format(v))
    return -v.curve.poly.coefficient(0, 0)


def compose(v: FlagValuation, w: FlagValuation) -> FlagValuation:
    """
    Composite of a rank-1 line flag v with a point valuation w of its
    residue field.
    """
    if v.rank != 1 or v.variables != 2:
        raise ValuationError('Only rank-1 flags on F(t, u) can be composed')
    return FlagValuation(2, v.curve, point_of(w))
