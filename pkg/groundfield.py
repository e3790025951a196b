"""
Exact arithmetic in the algebraic closure of F_p.

Every F_{p^e} is defined by its Conway polynomial, computed on first use:
the first monic primitive polynomial of degree e in Conway order whose root
alpha_e satisfies f_d(alpha_e^((p^e - 1) / (p^d - 1))) = 0 for every proper
divisor d of e. The embedding F_{p^d} -> F_{p^e} sends alpha_d to that power
of alpha_e, so embeddings along any chain of degrees commute.

Coordinates of an element of F_{p^e} are integer tuples (c_0, ..., c_{e-1})
with respect to 1, alpha_e, ..., alpha_e^(e-1).
"""
import threading
from functools import reduce
from itertools import product
from math import gcd

from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_compose_mod, gf_gcdex, gf_irreducible_p, gf_mul, gf_pow_mod, gf_rem

from linalg import solve_mod_p

Coords = Tuple[int, ...]


class FieldError(ValueError):
    """Invalid finite field data, e.g. mismatching characteristics."""


def _to_dense(coords: Sequence[int]) -> List[int]:
    """Low-degree-first coordinates to a sympy dense list (high degree first)."""
    dense = [int(c) for c in reversed(coords)]
    while dense and dense[0] == 0:
        dense.pop(0)
    return dense


def _from_dense(dense: Sequence[int], degree: int) -> Coords:
    values = [int(c) for c in reversed(dense)]
    return tuple(values + [0] * (degree - len(values)))


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


class FiniteField():
    """
    F_{p^degree} with raw arithmetic on coordinate tuples.
    Instances are shared through `finite_field`.
    """
    def __init__(self, p: int, degree: int, modulus: List[int]):
        self.p = p
        self.degree = degree
        # Dense sympy representation, monic, high degree first
        self.modulus = modulus
        self.order = p ** degree
        self._embeddings: Dict[int, Coords] = {}
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return 'FiniteField({}, {})'.format(self.p, self.degree)

    def zero(self) -> Coords:
        return (0,) * self.degree

    def one(self) -> Coords:
        return (1,) + (0,) * (self.degree - 1)

    def from_int(self, value: int) -> Coords:
        return (value % self.p,) + (0,) * (self.degree - 1)

    def generator(self) -> Coords:
        if self.degree == 1:
            # Root of the linear Conway polynomial x - g
            return ((-self.modulus[1]) % self.p,)
        return (0, 1) + (0,) * (self.degree - 2)

    def add(self, a: Coords, b: Coords) -> Coords:
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a: Coords, b: Coords) -> Coords:
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a: Coords) -> Coords:
        return tuple((-x) % self.p for x in a)

    def mul(self, a: Coords, b: Coords) -> Coords:
        if self.degree == 1:
            return (a[0] * b[0] % self.p,)
        product_ = gf_mul(_to_dense(a), _to_dense(b), self.p, ZZ)
        return _from_dense(gf_rem(product_, self.modulus, self.p, ZZ), self.degree)

    def inv(self, a: Coords) -> Coords:
        if not any(a):
            raise ZeroDivisionError('Inverse of zero in F_{}^{}'.format(self.p, self.degree))
        if self.degree == 1:
            return (pow(a[0], -1, self.p),)
        s, _, h = gf_gcdex(_to_dense(a), self.modulus, self.p, ZZ)
        assert h == [1], h
        return _from_dense(gf_rem(s, self.modulus, self.p, ZZ), self.degree)

    def power(self, a: Coords, exponent: int) -> Coords:
        if exponent < 0:
            return self.power(self.inv(a), -exponent)
        if self.degree == 1:
            return (pow(a[0], exponent, self.p),)
        if not any(a):
            return self.one() if exponent == 0 else self.zero()
        dense = gf_pow_mod(_to_dense(a), exponent, self.modulus, self.p, ZZ)
        return _from_dense(dense, self.degree)

    def is_zero(self, a: Coords) -> bool:
        return not any(a)

    def element(self, index: int) -> Coords:
        """Deterministic enumeration of the field: base-p digits of index."""
        digits = []
        for _ in range(self.degree):
            digits.append(index % self.p)
            index //= self.p
        return tuple(digits)

    def elements(self) -> Iterator[Coords]:
        for index in range(self.order):
            yield self.element(index)

    def embedding_image(self, d: int) -> Coords:
        """Image of alpha_d in this field."""
        if self.degree % d != 0:
            raise FieldError('F_{0}^{1} is not a subfield of F_{0}^{2}'.format(self.p, d, self.degree))
        with self._lock:
            image = self._embeddings.get(d)
        if image is None:
            if d == self.degree:
                image = self.generator()
            else:
                exponent = (self.order - 1) // (self.p ** d - 1)
                image = self.power(self.generator(), exponent)
            with self._lock:
                self._embeddings[d] = image
        return image

    def embed(self, coords: Coords, d: int) -> Coords:
        """Map coordinates of F_{p^d} into this field."""
        if d == self.degree:
            return tuple(coords)
        if d == 1:
            return self.from_int(coords[0])
        beta = self.embedding_image(d)
        result = self.zero()
        power_ = self.one()
        for c in coords:
            if c:
                result = self.add(result, tuple(c * x % self.p for x in power_))
            power_ = self.mul(power_, beta)
        return result

    def restrict(self, coords: Coords, d: int) -> Optional[Coords]:
        """Coordinates in F_{p^d} if the element lies in that subfield."""
        if d == self.degree:
            return tuple(coords)
        if d == 1:
            return (coords[0],) if not any(coords[1:]) else None
        beta = self.embedding_image(d)
        columns = []
        power_ = self.one()
        for _ in range(d):
            columns.append(power_)
            power_ = self.mul(power_, beta)
        solution = solve_mod_p(columns, coords, self.p)
        return tuple(solution) if solution is not None else None


_registry: Dict[Tuple[int, int], FiniteField] = {}
_registry_lock = threading.RLock()


def _conway_candidates(p: int, degree: int) -> Iterator[List[int]]:
    """
    Monic polynomials x^e - a_1 x^(e-1) + a_2 x^(e-2) - ... in Conway order,
    as dense lists, skipping those with zero constant term.
    """
    for a in product(range(p), repeat=degree):
        if a[-1] == 0:
            continue
        dense = [1]
        for i, value in enumerate(a, start=1):
            dense.append((-value if i % 2 else value) % p)
        yield dense


def _is_primitive(dense: List[int], p: int, degree: int, prime_factors: Sequence[int]) -> bool:
    if not gf_irreducible_p(dense, p, ZZ):
        return False
    order = p ** degree - 1
    for q in prime_factors:
        if gf_pow_mod([1, 0], order // q, dense, p, ZZ) == [1]:
            return False
    return True


def _is_norm_compatible(dense: List[int], p: int, degree: int) -> bool:
    for d in divisors(degree)[:-1]:
        sub = finite_field(p, d).modulus
        exponent = (p ** degree - 1) // (p ** d - 1)
        beta = gf_pow_mod([1, 0], exponent, dense, p, ZZ)
        if gf_compose_mod(sub, beta, dense, p, ZZ):
            return False
    return True


def finite_field(p: int, degree: int) -> FiniteField:
    """
    Registered F_{p^degree}; subfields are registered first.
    """
    key = (p, degree)
    with _registry_lock:
        field = _registry.get(key)
        if field is not None:
            return field
        if degree < 1:
            raise FieldError('Field degree must be positive, got {}'.format(degree))
        if not isprime(p):
            raise FieldError('Characteristic must be prime, got {}'.format(p))
        for d in divisors(degree)[:-1]:
            finite_field(p, d)
        prime_factors = sorted(factorint(p ** degree - 1))
        for dense in _conway_candidates(p, degree):
            if _is_primitive(dense, p, degree, prime_factors) and _is_norm_compatible(dense, p, degree):
                field = FiniteField(p, degree, dense)
                _registry[key] = field
                return field
    raise FieldError('No Conway polynomial found for F_{}^{}'.format(p, degree))


class GFElem():
    """
    An element of the algebraic closure of F_p, stored in its minimal
    subfield unless explicitly embedded.
    """
    __slots__ = ('p', 'deg', 'coords', 'minimal')

    def __init__(self, p: int, deg: int, coords: Sequence[int], normalize: bool = True):
        if len(coords) != deg:
            raise FieldError('Expected {} coordinates, got {}'.format(deg, len(coords)))
        values = tuple(int(c) % p for c in coords)
        if normalize and deg > 1:
            deg, values = _minimal_subfield(p, deg, values)
        self.p = p
        self.deg = deg
        self.coords = values
        self.minimal = normalize or deg == 1

    @staticmethod
    def from_int(p: int, value: int) -> 'GFElem':
        return GFElem(p, 1, (value,))

    @staticmethod
    def generator(p: int, degree: int) -> 'GFElem':
        """The root alpha_degree of the Conway polynomial of F_{p^degree}."""
        field = finite_field(p, degree)
        return GFElem(p, degree, field.generator(), normalize=False)

    def field(self) -> FiniteField:
        return finite_field(self.p, self.deg)

    def normalized(self) -> 'GFElem':
        return GFElem(self.p, self.deg, self.coords)

    def _lift_pair(self, other: 'GFElem') -> Tuple[FiniteField, Coords, Coords]:
        if self.p != other.p:
            raise FieldError('Mismatching characteristics {} and {}'.format(self.p, other.p))
        degree = lcm(self.deg, other.deg)
        field = finite_field(self.p, degree)
        return field, field.embed(self.coords, self.deg), field.embed(other.coords, other.deg)

    def _coerce(self, other: object) -> 'GFElem':
        if isinstance(other, GFElem):
            return other
        if isinstance(other, int):
            return GFElem.from_int(self.p, other)
        raise TypeError('Cannot combine GFElem with {}'.format(type(other).__name__))

    def __add__(self, other: object) -> 'GFElem':
        o = self._coerce(other)
        if self.deg == 1 and o.deg == 1 and self.p == o.p:
            return GFElem(self.p, 1, (self.coords[0] + o.coords[0],))
        field, a, b = self._lift_pair(o)
        return GFElem(self.p, field.degree, field.add(a, b))

    __radd__ = __add__

    def __sub__(self, other: object) -> 'GFElem':
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> 'GFElem':
        return self._coerce(other) - self

    def __neg__(self) -> 'GFElem':
        return GFElem(self.p, self.deg, tuple(-c for c in self.coords), normalize=False)

    def __mul__(self, other: object) -> 'GFElem':
        o = self._coerce(other)
        if self.deg == 1 and o.deg == 1 and self.p == o.p:
            return GFElem(self.p, 1, (self.coords[0] * o.coords[0],))
        field, a, b = self._lift_pair(o)
        return GFElem(self.p, field.degree, field.mul(a, b))

    __rmul__ = __mul__

    def inv(self) -> 'GFElem':
        if self.is_zero():
            raise ZeroDivisionError('Inverse of zero in characteristic {}'.format(self.p))
        field = self.field()
        return GFElem(self.p, self.deg, field.inv(self.coords))

    def __truediv__(self, other: object) -> 'GFElem':
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other: object) -> 'GFElem':
        return self._coerce(other) * self.inv()

    def __pow__(self, exponent: int) -> 'GFElem':
        field = self.field()
        return GFElem(self.p, self.deg, field.power(self.coords, exponent))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_one(self) -> bool:
        return self.deg == 1 and self.coords[0] == 1

    def key(self) -> Tuple[int, int, Coords]:
        n = self if self.minimal else self.normalized()
        return (n.p, n.deg, n.coords)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.key() == (self.p, 1, (other % self.p,))
        if not isinstance(other, GFElem):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __lt__(self, other: 'GFElem') -> bool:
        return self.key() < other.key()

    def __repr__(self) -> str:
        return 'GFElem({}, {}, {})'.format(self.p, self.deg, self.coords)

    def __str__(self) -> str:
        return format_gf(self)


def _minimal_subfield(p: int, degree: int, coords: Coords) -> Tuple[int, Coords]:
    field = finite_field(p, degree)
    for d in divisors(degree)[:-1]:
        restricted = field.restrict(coords, d)
        if restricted is not None:
            return d, restricted
    return degree, coords


def format_gf(x: GFElem) -> str:
    """
    Text form used by the polynomial grammar: prime field elements as signed
    integers, others as a polynomial in the generator symbol z<e>.

    >>> format_gf(GFElem.from_int(5, 4))
    '-1'
    >>> format_gf(GFElem.generator(5, 2) + 3)
    '(3 + z2)'
    """
    if x.deg == 1:
        value = x.coords[0]
        return str(value - x.p if value > x.p // 2 else value)
    terms = []
    for i, c in enumerate(x.coords):
        if c == 0:
            continue
        signed = c - x.p if c > x.p // 2 else c
        if i == 0:
            text = str(signed)
        else:
            symbol = 'z{}'.format(x.deg) + ('^{}'.format(i) if i > 1 else '')
            if signed == 1:
                text = symbol
            elif signed == -1:
                text = '-' + symbol
            else:
                text = '{}*{}'.format(signed, symbol)
        terms.append(text)
    joined = ' + '.join(terms).replace('+ -', '- ')
    return '({})'.format(joined)


def gf_arith(op: str, x: GFElem, y: Optional[GFElem] = None) -> GFElem:
    """
    >>> gf_arith('add', GFElem.from_int(5, 2), GFElem.from_int(5, 4))
    GFElem(5, 1, (1,))
    >>> gf_arith('inv', GFElem.from_int(5, 2))
    GFElem(5, 1, (3,))
    """
    if op == 'neg':
        return -x
    if op == 'inv':
        return x.inv()
    if y is None:
        raise ValueError('Operation {} needs two operands'.format(op))
    if op == 'add':
        return x + y
    if op == 'mul':
        return x * y
    raise ValueError('Unknown operation {}'.format(op))


def gf_embed(x: GFElem, degree: int) -> GFElem:
    """
    Image of x in F_{p^degree}, kept in that field's coordinates.

    >>> gf_embed(GFElem.from_int(5, 3), 2).coords
    (3, 0)
    """
    if degree % x.deg != 0:
        raise FieldError('Degree {} does not divide {}'.format(x.deg, degree))
    field = finite_field(x.p, degree)
    return GFElem(x.p, degree, field.embed(x.coords, x.deg), normalize=False)


def constants(p: int, count: int) -> List[GFElem]:
    """
    The first `count` nonzero constants: F_p^x in order 1..p-1, then the new
    elements of F_{p^2}, F_{p^3}, ...
    """
    result = [GFElem.from_int(p, value) for value in range(1, min(p, count + 1))]
    degree = 2
    while len(result) < count:
        field = finite_field(p, degree)
        for index in range(1, field.order):
            coords = field.element(index)
            if _minimal_subfield(p, degree, coords)[0] == degree:
                result.append(GFElem(p, degree, coords, normalize=False))
                if len(result) == count:
                    break
        degree += 1
    return result


# Univariate polynomials over a fixed FiniteField: lists of coordinate
# tuples, low degree first, no trailing zeros.
UniPoly = List[Coords]


def _trim(field: FiniteField, f: UniPoly) -> UniPoly:
    f = list(f)
    while f and field.is_zero(f[-1]):
        f.pop()
    return f


def _poly_add(field: FiniteField, f: UniPoly, g: UniPoly) -> UniPoly:
    size = max(len(f), len(g))
    zero = field.zero()
    return _trim(field, [field.add(f[i] if i < len(f) else zero, g[i] if i < len(g) else zero)
                         for i in range(size)])


def _poly_sub(field: FiniteField, f: UniPoly, g: UniPoly) -> UniPoly:
    return _poly_add(field, f, [field.neg(c) for c in g])


def _poly_mul(field: FiniteField, f: UniPoly, g: UniPoly) -> UniPoly:
    if not f or not g:
        return []
    result = [field.zero()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if field.is_zero(a):
            continue
        for j, b in enumerate(g):
            result[i + j] = field.add(result[i + j], field.mul(a, b))
    return _trim(field, result)


def _poly_divmod(field: FiniteField, f: UniPoly, g: UniPoly) -> Tuple[UniPoly, UniPoly]:
    if not g:
        raise ZeroDivisionError('Polynomial division by zero')
    remainder = list(f)
    quotient = [field.zero()] * max(len(f) - len(g) + 1, 1)
    lead_inv = field.inv(g[-1])
    while len(remainder) >= len(g) and remainder:
        shift = len(remainder) - len(g)
        factor = field.mul(remainder[-1], lead_inv)
        quotient[shift] = factor
        for i, c in enumerate(g):
            remainder[shift + i] = field.sub(remainder[shift + i], field.mul(factor, c))
        remainder = _trim(field, remainder)
    return _trim(field, quotient), remainder


def _poly_monic(field: FiniteField, f: UniPoly) -> UniPoly:
    lead_inv = field.inv(f[-1])
    return [field.mul(c, lead_inv) for c in f]


def _poly_gcd(field: FiniteField, f: UniPoly, g: UniPoly) -> UniPoly:
    while g:
        f, g = g, _poly_divmod(field, f, g)[1]
    return _poly_monic(field, f) if f else f


def _poly_powmod(field: FiniteField, base: UniPoly, exponent: int, modulus: UniPoly) -> UniPoly:
    result: UniPoly = [field.one()]
    base = _poly_divmod(field, base, modulus)[1]
    while exponent:
        if exponent & 1:
            result = _poly_divmod(field, _poly_mul(field, result, base), modulus)[1]
        base = _poly_divmod(field, _poly_mul(field, base, base), modulus)[1]
        exponent >>= 1
    return result


def _split_linear(field: FiniteField, h: UniPoly) -> List[Coords]:
    """Roots of a monic squarefree h that splits into linear factors over field."""
    degree = len(h) - 1
    if degree <= 0:
        return []
    if degree == 1:
        return [field.neg(field.mul(h[0], field.inv(h[1])))]
    x = [field.zero(), field.one()]
    for index in range(field.order):
        a = field.element(index)
        if field.p == 2:
            # Absolute trace of a*X, computed modulo h
            term = _poly_divmod(field, [field.zero(), a], h)[1]
            probe = term
            for _ in range(field.degree - 1):
                term = _poly_divmod(field, _poly_mul(field, term, term), h)[1]
                probe = _poly_add(field, probe, term)
        else:
            shifted = _poly_add(field, x, [a])
            probe = _poly_sub(field, _poly_powmod(field, shifted, (field.order - 1) // 2, h), [field.one()])
        factor = _poly_gcd(field, h, probe)
        if 0 < len(factor) - 1 < degree:
            cofactor = _poly_monic(field, _poly_divmod(field, h, factor)[0])
            return _split_linear(field, factor) + _split_linear(field, cofactor)
    return [c for c in field.elements() if _poly_eval(field, h, c) == field.zero()]


def _poly_eval(field: FiniteField, f: UniPoly, x: Coords) -> Coords:
    result = field.zero()
    for c in reversed(f):
        result = field.add(field.mul(result, x), c)
    return result


def poly_roots(coefficients: Sequence[GFElem]) -> List[Tuple[GFElem, int]]:
    """
    Roots with multiplicities of the polynomial sum_i coefficients[i] X^i.

    >>> sorted(poly_roots([GFElem.from_int(5, -1), GFElem.from_int(5, 0), GFElem.from_int(5, 1)]))
    [(GFElem(5, 1, (1,)), 1), (GFElem(5, 1, (4,)), 1)]
    """
    coefficients = list(coefficients)
    while coefficients and coefficients[-1].is_zero():
        coefficients.pop()
    if not coefficients:
        raise FieldError('The zero polynomial has no root multiset')
    p = coefficients[0].p
    total = len(coefficients) - 1
    base_degree = reduce(lcm, (c.deg for c in coefficients), 1)
    base = finite_field(p, base_degree)
    f = _poly_monic(base, [base.embed(c.coords, c.deg) for c in coefficients])
    q = base.order
    roots: Dict[GFElem, int] = {}
    found = 0
    x = [base.zero(), base.one()]
    frobenius = x
    k = 0
    while found < total:
        k += 1
        if k > total:
            raise FieldError('Root search did not terminate for {}'.format(coefficients))
        frobenius = _poly_powmod(base, frobenius, q, f)
        h = _poly_gcd(base, f, _poly_sub(base, frobenius, x))
        if len(h) <= 1:
            continue
        field = finite_field(p, base_degree * k)
        lifted = [field.embed(c, base_degree) for c in h]
        big_f = [field.embed(c, base_degree) for c in f]
        for root in _split_linear(field, lifted):
            element = GFElem(p, field.degree, root)
            if element in roots:
                continue
            multiplicity = 0
            remaining = big_f
            linear = [field.neg(root), field.one()]
            while True:
                quotient, remainder = _poly_divmod(field, remaining, linear)
                if remainder:
                    break
                multiplicity += 1
                remaining = quotient
            roots[element] = multiplicity
            found += multiplicity
    return sorted(roots.items(), key=lambda item: item[0].key())
