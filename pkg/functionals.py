"""
Elements of Hom(K^x, Z/ell^m) in normal form: finite combinations of the
coordinate functionals of flag valuations.

A term is keyed by a prefix flag and stands for the last lexicographic
coordinate of that flag, so coordinate i of a flag F is the term keyed by
the coarsening of F to its first i stages. Membership in inertia and
decomposition groups is answered three-valued: structural rules give exact
answers for comparable flags, bounded search over test elements gives
witnesses for the rest.
"""
import threading
from enum import Enum

from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from coeff import Lambda, LevelError, check_prime
from funcfield import BivPoly, BivRat, enum_test_elements
from linalg import SmithForm, smith_form
from run_configs import SearchBudget
from valuations import FlagValuation, flag_value, is_unit, residue_point_flag, sort_key


class FunctionalError(ValueError):
    """Invalid functional data or an operation outside its domain."""


class Functional():
    """
    sum of coefficient * (last coordinate of flag_value(flag, x)) in Z/ell^level.
    """
    def __init__(self, ell: int, level: int, terms: Optional[Mapping[FlagValuation, Union[int, Lambda]]] = None):
        check_prime(ell)
        if level < 1:
            raise LevelError('Level must be positive, got {}'.format(level))
        self.ell = ell
        self.level = level
        modulus = ell ** level
        self.terms: Dict[FlagValuation, int] = {}
        for flag, coefficient in (terms or {}).items():
            if flag.is_trivial():
                raise FunctionalError('Terms must be keyed to nontrivial flags')
            if isinstance(coefficient, Lambda):
                if (coefficient.ell, coefficient.level) != (ell, level):
                    raise LevelError('Coefficient in Z/{}^{} for a functional in Z/{}^{}'.format(
                        coefficient.ell, coefficient.level, ell, level))
                value = coefficient.residue
            else:
                value = coefficient % modulus
            if value:
                self.terms[flag] = value

    @staticmethod
    def coordinate(flag: FlagValuation, index: int, ell: int, level: int, coefficient: int = 1) -> 'Functional':
        """Coefficient times the index-th (1-based) coordinate of flag."""
        if index < 1 or index > flag.rank:
            raise FunctionalError('Coordinate {} out of range for {}'.format(index, flag))
        return Functional(ell, level, {flag.prefix(index): coefficient})

    @staticmethod
    def from_triples(triples: Iterable[Tuple[FlagValuation, int, int]], ell: int, level: int) -> 'Functional':
        result = Functional(ell, level)
        for flag, index, coefficient in triples:
            result = result + Functional.coordinate(flag, index, ell, level, coefficient)
        return result

    @property
    def modulus(self) -> int:
        return self.ell ** self.level

    def flags(self) -> List[FlagValuation]:
        return sorted(self.terms, key=sort_key)

    def coefficient(self, flag: FlagValuation) -> Lambda:
        return Lambda(self.ell, self.level, self.terms.get(flag, 0))

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: 'Functional') -> None:
        if (self.ell, self.level) != (other.ell, other.level):
            raise LevelError('Cannot combine functionals in Z/{}^{} and Z/{}^{}'.format(
                self.ell, self.level, other.ell, other.level))

    def __add__(self, other: 'Functional') -> 'Functional':
        self._check(other)
        terms = dict(self.terms)
        for flag, value in other.terms.items():
            terms[flag] = terms.get(flag, 0) + value
        return Functional(self.ell, self.level, terms)

    def __neg__(self) -> 'Functional':
        return Functional(self.ell, self.level, {flag: -value for flag, value in self.terms.items()})

    def __sub__(self, other: 'Functional') -> 'Functional':
        return self + (-other)

    def __rmul__(self, scalar: Union[int, Lambda]) -> 'Functional':
        if isinstance(scalar, Lambda):
            if (scalar.ell, scalar.level) != (self.ell, self.level):
                raise LevelError('Scalar and functional live in different rings')
            scalar = scalar.residue
        return Functional(self.ell, self.level, {flag: scalar * value for flag, value in self.terms.items()})

    def key(self) -> tuple:
        return (self.ell, self.level, tuple((str(flag), value) for flag, value in
                                            sorted(self.terms.items(), key=lambda item: sort_key(item[0]))))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Functional):
            return NotImplemented
        return (self.ell, self.level) == (other.ell, other.level) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.key())

    def vector(self, columns: Sequence[FlagValuation]) -> List[int]:
        extra = set(self.terms) - set(columns)
        if extra:
            raise FunctionalError('Functional has terms outside the given columns')
        return [self.terms.get(flag, 0) for flag in columns]

    def __repr__(self) -> str:
        return 'Functional({})'.format(self)

    def __str__(self) -> str:
        if not self.terms:
            return '0'
        parts = []
        for flag in self.flags():
            parts.append('{}*{}#{}'.format(self.terms[flag], flag, flag.rank))
        return ' + '.join(parts)


def evaluate(s: Functional, x: BivRat) -> Lambda:
    """
    >>> from funcfield import Curve, parse_poly, parse_rat
    >>> ord_u = Functional.coordinate(FlagValuation(2, Curve(parse_poly(5, 'u'))), 1, 2, 1)
    >>> evaluate(ord_u, parse_rat(5, 'u^2*(t + 1)')), evaluate(ord_u, parse_rat(5, 'u*t'))
    (Lambda(2, 1, 0), Lambda(2, 1, 1))
    """
    if x.is_zero():
        raise ZeroDivisionError('Functionals are not defined at zero')
    total = 0
    for flag, value in s.terms.items():
        total += value * flag_value(flag, x)[-1]
    return Lambda(s.ell, s.level, total)


def project(s: Functional, n: int) -> Functional:
    if n < 1 or n > s.level:
        raise LevelError('Cannot project level {} to level {}'.format(s.level, n))
    return Functional(s.ell, n, dict(s.terms))


def lift(s: Functional, m: int) -> Functional:
    if m < s.level:
        raise LevelError('Cannot lift level {} to level {}'.format(s.level, m))
    return Functional(s.ell, m, dict(s.terms))


def lift_surjectivity_check(functionals: Sequence[Functional], m: int) -> bool:
    """
    Every functional has an m-lift projecting back onto it, and the inertia
    coordinates of its flags stay nonzero at both levels.
    """
    for s in functionals:
        if project(lift(s, m), s.level) != s:
            return False
        for flag in s.terms:
            coordinate = Functional.coordinate(flag, flag.rank, s.ell, m)
            if coordinate.is_zero() != project(coordinate, s.level).is_zero():
                return False
    return True


def common_ring(functionals: Sequence[Functional]) -> Tuple[int, int]:
    if not functionals:
        raise FunctionalError('Empty list of functionals')
    ell, level = functionals[0].ell, functionals[0].level
    for s in functionals:
        if (s.ell, s.level) != (ell, level):
            raise LevelError('Mixed levels: Z/{}^{} and Z/{}^{}'.format(ell, level, s.ell, s.level))
    return ell, level


def _smith(functionals: Sequence[Functional], extra: Sequence[Functional] = ()) -> Tuple[SmithForm, List[FlagValuation]]:
    ell, level = common_ring(list(functionals) + list(extra))
    columns = sorted({flag for s in list(functionals) + list(extra) for flag in s.terms}, key=sort_key)
    rows = [s.vector(columns) for s in functionals]
    return smith_form(rows, ell, level, columns=len(columns)), columns


def module_rank(functionals: Sequence[Functional]) -> int:
    """
    Number of generators of the submodule spanned, dim of M / ell M.
    """
    if not functionals:
        return 0
    return _smith(functionals)[0].rank


def is_independent(functionals: Sequence[Functional]) -> bool:
    """Whether the functionals form a basis of a free submodule."""
    if not functionals:
        return True
    form = _smith(functionals)[0]
    return form.rank == len(functionals) and form.is_free()


def submodule_member(t: Functional, functionals: Sequence[Functional]) -> bool:
    if not functionals:
        return t.is_zero()
    form, columns = _smith(functionals, [t])
    return form.contains(t.vector(columns))


class Truth(Enum):
    YES = 'yes'
    NO = 'no'
    UNKNOWN = 'unknown'


class TriBool():
    """
    A three-valued answer. Yes and no carry a witness (a field element, a
    flag or a certificate tag); unknown answers list what blocked them.
    """
    def __init__(self, truth: Truth, witness: object = None, blockers: Sequence[object] = ()):
        self.truth = truth
        self.witness = witness
        self.blockers = list(blockers)

    @staticmethod
    def yes(witness: object) -> 'TriBool':
        return TriBool(Truth.YES, witness)

    @staticmethod
    def no(witness: object) -> 'TriBool':
        return TriBool(Truth.NO, witness)

    @staticmethod
    def unknown(blockers: Sequence[object] = ()) -> 'TriBool':
        return TriBool(Truth.UNKNOWN, None, blockers)

    def is_yes(self) -> bool:
        return self.truth == Truth.YES

    def is_no(self) -> bool:
        return self.truth == Truth.NO

    def is_unknown(self) -> bool:
        return self.truth == Truth.UNKNOWN

    def __str__(self) -> str:
        return self.truth.value

    def __repr__(self) -> str:
        return 'TriBool({}, {!r})'.format(self.truth.value, self.witness)


class SearchSpace():
    """
    The bounded element stream shared by all searches, materialized lazily.
    """
    def __init__(self, pool: Sequence[BivPoly], budget: SearchBudget):
        if not pool:
            raise FunctionalError('The search pool must not be empty')
        self.pool = list(pool)
        self.budget = budget
        self._cache: List[BivRat] = []
        self._stream: Optional[Iterator[BivRat]] = None
        self._exhausted = False
        self._lock = threading.Lock()

    @property
    def p(self) -> int:
        return self.pool[0].p

    def _get(self, index: int) -> Optional[BivRat]:
        with self._lock:
            while len(self._cache) <= index and not self._exhausted:
                if self._stream is None:
                    self._stream = enum_test_elements(self.pool, self.budget)
                try:
                    self._cache.append(next(self._stream))
                except StopIteration:
                    self._exhausted = True
            return self._cache[index] if index < len(self._cache) else None

    def elements(self) -> Iterator[BivRat]:
        index = 0
        while True:
            x = self._get(index)
            if x is None:
                return
            yield x
            index += 1

    def units(self, v: FlagValuation, hints: Sequence[BivRat] = ()) -> Iterator[BivRat]:
        for x in hints:
            if not x.is_zero() and is_unit(v, x):
                yield x
        for x in self.elements():
            if is_unit(v, x):
                yield x

    def principal_units(self, v: FlagValuation) -> Iterator[BivRat]:
        one = BivRat.from_int(self.p, 1)
        for y in self.elements():
            if flag_value(v, y).is_positive():
                x = one + y
                if not x.is_zero():
                    yield x


def _split_terms(s: Functional, v: FlagValuation) -> Tuple[List[FlagValuation], List[FlagValuation], List[FlagValuation]]:
    """Term flags of s that coarsen v, refine v strictly, or are incomparable."""
    coarser, finer, other = [], [], []
    for flag in s.flags():
        if flag.is_prefix_of(v):
            coarser.append(flag)
        elif v.is_prefix_of(flag):
            finer.append(flag)
        else:
            other.append(flag)
    return coarser, finer, other


def _hint_elements(flags: Sequence[FlagValuation]) -> List[BivRat]:
    hints = []
    for flag in flags:
        assert flag.curve is not None
        if flag.point is not None and flag.curve.line is not None:
            hints.append(BivRat(flag.curve.line.point_lift(flag.point)))
        hints.append(BivRat(flag.curve.poly))
    return hints


def in_inertia(s: Functional, v: FlagValuation, space: SearchSpace) -> TriBool:
    """
    s kills the units of v. Terms on coarsenings of v factor through the
    value group; anything else needs a unit on which s does not vanish.
    """
    if v.is_trivial():
        raise FunctionalError('Inertia of the trivial valuation is not defined')
    coarser, finer, other = _split_terms(s, v)
    if not finer and not other:
        return TriBool.yes('prefix')
    if not other:
        # The point lift of a refinement is a unit seen only by that refinement
        flag = finer[0]
        assert flag.curve is not None and flag.curve.line is not None and flag.point is not None
        x = BivRat(flag.curve.line.point_lift(flag.point))
        if is_unit(v, x) and not evaluate(s, x).is_zero():
            return TriBool.no(x)
    for x in space.units(v, _hint_elements(finer + other)):
        if not evaluate(s, x).is_zero():
            return TriBool.no(x)
    return TriBool.unknown(other or finer)


def in_decomposition(s: Functional, v: FlagValuation, space: SearchSpace) -> TriBool:
    """
    s kills the principal units of v. Coarsenings and refinements of v do,
    incomparable terms need a principal unit on which s does not vanish.
    """
    if v.is_trivial():
        raise FunctionalError('Decomposition of the trivial valuation is not defined')
    _, _, other = _split_terms(s, v)
    if not other:
        return TriBool.yes('comparable')
    for x in space.principal_units(v):
        if not evaluate(s, x).is_zero():
            return TriBool.no(x)
    return TriBool.unknown(other)


def is_structurally_decomposed(s: Functional, v: FlagValuation) -> bool:
    return not _split_terms(s, v)[2]


def is_structurally_inertial(s: Functional, v: FlagValuation) -> bool:
    coarser, finer, other = _split_terms(s, v)
    return not finer and not other


def residue_functional(s: Functional, v: FlagValuation) -> Functional:
    """
    Image of s in the functionals of the residue field of the line flag v:
    inertia terms vanish, refinement terms become point functionals.
    """
    if v.rank != 1 or v.curve is None or v.curve.line is None:
        raise FunctionalError('Residues are taken along rank-1 line flags, got {}'.format(v))
    coarser, finer, other = _split_terms(s, v)
    if other:
        raise FunctionalError('Functional has terms incomparable to {}'.format(v))
    terms: Dict[FlagValuation, int] = {}
    for flag in finer:
        assert flag.point is not None
        terms[residue_point_flag(v, flag.point)] = s.terms[flag]
    return Functional(s.ell, s.level, terms)


def residue_image(s: Functional, v: FlagValuation) -> Functional:
    """
    Image of s in D_v / I_v for any nontrivial v: the refinement terms.
    For a line flag this is residue_functional up to re-keying.
    """
    coarser, finer, other = _split_terms(s, v)
    if other:
        raise FunctionalError('Functional has terms incomparable to {}'.format(v))
    return Functional(s.ell, s.level, {flag: s.terms[flag] for flag in finer})


def span_members(s: Functional, universe: Sequence[Functional]) -> List[Functional]:
    """Elements of the universe lying in the cyclic module generated by s."""
    return [x for x in universe if submodule_member(x, [s])]
