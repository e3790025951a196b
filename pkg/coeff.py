"""
Coefficient rings Z/ell^m, the maps between their levels, the constants
M_r, N and R, and the cancellation principle.
"""
from functools import lru_cache
from itertools import product

from typing import Callable, Iterable, Sequence, Tuple

from sympy import isprime

# Pluggable formula for N(n): (n, ell) -> int
NFormula = Callable[[int, int], int]


class LevelError(ValueError):
    """Mismatching or out-of-range levels of Z/ell^m values."""


class CancellationPreconditionError(ValueError):
    """The hypotheses of the cancellation principle are not satisfied."""


@lru_cache(maxsize=None)
def check_prime(number: int, what: str = 'ell') -> int:
    if number < 2 or not isprime(number):
        raise ValueError('{} must be a prime, got {}'.format(what, number))
    return number


class Lambda():
    """An element of Z/ell^level, always kept reduced."""
    __slots__ = ('ell', 'level', 'residue')

    def __init__(self, ell: int, level: int, residue: int):
        check_prime(ell)
        if level < 1:
            raise LevelError('Level must be positive, got {}'.format(level))
        self.ell = ell
        self.level = level
        self.residue = residue % (ell ** level)

    @property
    def modulus(self) -> int:
        return self.ell ** self.level

    def _check(self, other: 'Lambda') -> None:
        if (self.ell, self.level) != (other.ell, other.level):
            raise LevelError('Cannot combine Z/{}^{} with Z/{}^{}'.format(
                self.ell, self.level, other.ell, other.level))

    def _coerce(self, other: object) -> 'Lambda':
        if isinstance(other, Lambda):
            self._check(other)
            return other
        if isinstance(other, int):
            return Lambda(self.ell, self.level, other)
        raise TypeError('Cannot combine Lambda with {}'.format(type(other).__name__))

    def __add__(self, other: object) -> 'Lambda':
        o = self._coerce(other)
        return Lambda(self.ell, self.level, self.residue + o.residue)

    __radd__ = __add__

    def __sub__(self, other: object) -> 'Lambda':
        o = self._coerce(other)
        return Lambda(self.ell, self.level, self.residue - o.residue)

    def __neg__(self) -> 'Lambda':
        return Lambda(self.ell, self.level, -self.residue)

    def __mul__(self, other: object) -> 'Lambda':
        o = self._coerce(other)
        return Lambda(self.ell, self.level, self.residue * o.residue)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.residue == other % self.modulus
        if not isinstance(other, Lambda):
            return NotImplemented
        return (self.ell, self.level, self.residue) == (other.ell, other.level, other.residue)

    def __hash__(self) -> int:
        return hash((self.ell, self.level, self.residue))

    def is_zero(self) -> bool:
        return self.residue == 0

    def valuation(self) -> int:
        """
        Exponent of the largest power of ell dividing the residue, or the
        level for zero.

        >>> Lambda(2, 3, 4).valuation()
        2
        >>> Lambda(2, 3, 0).valuation()
        3
        """
        return ell_valuation(self.residue, self.ell, self.level)

    def __repr__(self) -> str:
        return 'Lambda({}, {}, {})'.format(self.ell, self.level, self.residue)

    def __str__(self) -> str:
        return '{}'.format(self.residue)


def ell_valuation(value: int, ell: int, level: int) -> int:
    value %= ell ** level
    if value == 0:
        return level
    result = 0
    while value % ell == 0:
        value //= ell
        result += 1
    return result


def lambda_project(a: Lambda, n: int) -> Lambda:
    """
    Image of a in Z/ell^n.

    >>> lambda_project(Lambda(2, 3, 5), 2)
    Lambda(2, 2, 1)
    """
    if n < 1 or n > a.level:
        raise LevelError('Cannot project level {} to level {}'.format(a.level, n))
    return Lambda(a.ell, n, a.residue)


def lambda_lift(a: Lambda, m: int) -> Lambda:
    """
    Canonical lift of a to Z/ell^m (same representative in [0, ell^n)).
    """
    if m < a.level:
        raise LevelError('Cannot lift level {} to level {}'.format(a.level, m))
    return Lambda(a.ell, m, a.residue)


def const_M(r: int, n: int) -> int:
    """
    M_r(n) = (r + 1) * n - r.

    >>> const_M(1, 2), const_M(2, 3)
    (3, 7)
    """
    if r < 1 or n < 1:
        raise ValueError('const_M needs r >= 1 and n >= 1, got r={}, n={}'.format(r, n))
    return (r + 1) * n - r


def published_n_formula(n: int, ell: int) -> int:
    return const_M(1, (6 * ell ** (3 * n - 2) - 7) * (n - 1) + 3 * n - 2)


def const_N(n: int, ell: int, formula: NFormula = published_n_formula) -> int:
    """
    >>> const_N(1, 5), const_N(2, 2), const_N(2, 3)
    (1, 185, 965)
    """
    if n < 1:
        raise ValueError('const_N needs n >= 1, got {}'.format(n))
    check_prime(ell)
    return formula(n, ell)


def const_R(n: int, ell: int, formula: NFormula = published_n_formula) -> int:
    """
    R(n) = N(M_2(M_1(n))).

    >>> const_R(1, 3), const_R(2, 2)
    (1, 37748689)
    """
    return const_N(const_M(2, const_M(1, n)), ell, formula)


def _check_cancellation_hypotheses(c: Sequence[Lambda], n: int) -> Tuple[int, int]:
    if not c:
        raise CancellationPreconditionError('At least one cancelled factor is needed')
    ell, level = c[0].ell, c[0].level
    for factor in c:
        if (factor.ell, factor.level) != (ell, level):
            raise LevelError('Cancelled factors must share ell and level')
    required = const_M(len(c), n)
    if level < required:
        raise CancellationPreconditionError(
            'Level {} is below M_{}({}) = {}'.format(level, len(c), n, required))
    for factor in c:
        if lambda_project(factor, n).is_zero():
            raise CancellationPreconditionError(
                'Factor {} vanishes in Z/{}^{}'.format(factor.residue, ell, n))
    return ell, level


def check_cancellation(c: Sequence[Lambda], a: Lambda, b: Lambda, n: int) -> bool:
    """
    Return whether a * prod(c) = b * prod(c) implies a_n = b_n for this
    instance.

    >>> check_cancellation([Lambda(2, 3, 2)], Lambda(2, 3, 1), Lambda(2, 3, 5), 2)
    True
    """
    _check_cancellation_hypotheses(c, n)
    a._check(c[0])
    b._check(c[0])
    prod = Lambda(a.ell, a.level, 1)
    for factor in c:
        prod = prod * factor
    if a * prod != b * prod:
        return True
    return lambda_project(a, n) == lambda_project(b, n)


class SweepResult():
    def __init__(self, ell: int, n: int, r: int, level: int, checked: int, counterexamples: int):
        self.ell = ell
        self.n = n
        self.r = r
        self.level = level
        self.checked = checked
        self.counterexamples = counterexamples

    @property
    def passed(self) -> bool:
        return self.counterexamples == 0

    def __str__(self) -> str:
        return '(sweep (ell {}) (n {}) (r {}) (level {}) (checked {}) (counterexamples {}))'.format(
            self.ell, self.n, self.r, self.level, self.checked, self.counterexamples)


def cancellation_sweep(ell: int, n: int, r: int) -> SweepResult:
    """
    Exhaustively verify the cancellation principle at level R = M_r(n).

    For a fixed tuple c, the implication only depends on d = a - b, so every
    triple (c, a, b) is covered by checking all differences d and counting
    the ell^R choices of a for each.
    """
    check_prime(ell)
    level = const_M(r, n)
    modulus = ell ** level
    small = ell ** n
    admissible = [value for value in range(modulus) if value % small != 0]
    checked = 0
    counterexamples = 0
    for c in product(admissible, repeat=r):
        prod = 1
        for value in c:
            prod = prod * value % modulus
        for d in range(modulus):
            if d * prod % modulus == 0 and d % small != 0:
                counterexamples += modulus
        checked += modulus * modulus
    return SweepResult(ell, n, r, level, checked, counterexamples)


def exhaustive_project_functoriality(ell: int, max_level: int) -> Iterable[Tuple[int, int, int, int]]:
    """
    Yield every (m, k, n, residue) that violates composition of projections;
    an empty result means the check passed.
    """
    for m in range(1, max_level + 1):
        for residue in range(ell ** m):
            a = Lambda(ell, m, residue)
            for k in range(1, m + 1):
                for n in range(1, k + 1):
                    if lambda_project(lambda_project(a, k), n) != lambda_project(a, n):
                        yield (m, k, n, residue)
