"""
Finite two-sorted structures of functionals at levels n and N together with
the C-pair relation and the projection, and the definable predicates
evaluated over them.

Quantifiers range over the universe only, so every answer holds relative to
the universe. Any decision that depends on an unknown C-verdict is unknown
and lists the pairs that blocked it.
"""
from itertools import combinations

from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from coeff import const_R
from cpairs import CPairEngine, CVerdict
from funcfield import BivRat
from functionals import (Functional, FunctionalError, SearchSpace, TriBool, Truth, evaluate, in_decomposition,
                         is_independent, is_structurally_inertial, module_rank, project, span_members)
from valuations import ConvexIndex, FlagValuation, coarsen, comparable, is_visible, max_convex_inside, sort_key

Thunk = Callable[[], TriBool]


class UniverseError(ValueError):
    """Inconsistent universe data or a query outside the universe."""


def negate(value: TriBool) -> TriBool:
    if value.is_yes():
        return TriBool.no(value.witness)
    if value.is_no():
        return TriBool.yes(value.witness)
    return value


def all_of(checks: Iterable[Thunk]) -> TriBool:
    """
    Conjunction: the first decisive no wins, otherwise unknown if anything
    was unknown.
    """
    blockers: List[object] = []
    for check in checks:
        value = check()
        if value.is_no():
            return value
        if value.is_unknown():
            blockers += value.blockers
    if blockers:
        return TriBool.unknown(blockers)
    return TriBool.yes(None)


def any_of(candidates: Iterable[Tuple[object, Thunk]]) -> TriBool:
    """Disjunction over labelled candidates; a yes carries the label."""
    blockers: List[object] = []
    for label, check in candidates:
        value = check()
        if value.is_yes():
            return TriBool.yes(label)
        if value.is_unknown():
            blockers += value.blockers
    if blockers:
        return TriBool.unknown(blockers)
    return TriBool.no(None)


class Universe():
    """
    S_n at level n, S_N at level N, a lift table from S_n into S_N and the
    C-pair engine. With n = N and no big sort given, S_N is S_n and every
    element is its own lift.
    """
    def __init__(self,
                 ell: int,
                 n: int,
                 big_n: int,
                 small: Sequence[Functional],
                 engine: CPairEngine,
                 big: Optional[Sequence[Functional]] = None,
                 lift_table: Optional[Mapping[Functional, Sequence[Functional]]] = None,
                 flags: Sequence[FlagValuation] = (),
                 variables: int = 2,
                 names: Optional[Mapping[Functional, str]] = None,
                 ):
        if n < 1 or big_n < n:
            raise UniverseError('Levels must satisfy 1 <= n <= N, got n={}, N={}'.format(n, big_n))
        if big_n < const_R(n, ell):
            raise UniverseError('N={} is below R({}) = {}'.format(big_n, n, const_R(n, ell)))
        self.ell = ell
        self.n = n
        self.big_n = big_n
        self.small = list(dict.fromkeys(small))
        self.engine = engine
        self.flags = list(flags)
        self.variables = variables
        self.names: Dict[Functional, str] = dict(names or {})
        for s in self.small:
            if (s.ell, s.level) != (ell, n):
                raise UniverseError('Element {} of S_n is not at level {}'.format(self.name(s), n))
        if big is None:
            if big_n != n:
                raise UniverseError('A universe with N > n needs an explicit S_N')
            big = self.small
        self.big = list(dict.fromkeys(big))
        for s in self.big:
            if (s.ell, s.level) != (ell, big_n):
                raise UniverseError('Element {} of S_N is not at level {}'.format(self.name(s), big_n))
            if project(s, n) not in self.small:
                raise UniverseError('S_n is not closed under projection: {} is missing'.format(project(s, n)))
        self.lift_table: Dict[Functional, List[Functional]] = {}
        for s in self.small:
            lifts = list((lift_table or {}).get(s, []))
            if big_n == n and not lifts:
                lifts = [s]
            for lifted in lifts:
                if lifted not in self.big:
                    raise UniverseError('Lift {} of {} is not in S_N'.format(lifted, self.name(s)))
                if project(lifted, n) != s:
                    raise UniverseError('{} is not a lift of {}'.format(lifted, self.name(s)))
            if not lifts:
                raise UniverseError('{} has no lift in S_N'.format(self.name(s)))
            self.lift_table[s] = lifts

    @property
    def space(self) -> SearchSpace:
        return self.engine.space

    def name(self, s: Functional) -> str:
        return self.names.get(s, str(s))

    def element(self, name: str) -> Functional:
        for s, label in self.names.items():
            if label == name:
                return s
        raise UniverseError('No element named "{}"'.format(name))

    def check_member(self, s: Functional) -> None:
        if s not in self.lift_table:
            raise UniverseError('{} is not an element of S_n'.format(self.name(s)))

    def lifts(self, s: Functional) -> List[Functional]:
        self.check_member(s)
        return self.lift_table[s]

    def cpair(self, s: Functional, t: Functional) -> TriBool:
        value = self.engine.is_cpair(s, t)
        if value.is_unknown():
            return TriBool.unknown([(self.name(s), self.name(t))])
        return value

    def lifted_cpair(self, s: Functional, t: Functional) -> TriBool:
        """Some N-lifts of s and t form a C-pair."""
        return any_of(((s2, t2), lambda s2=s2, t2=t2: self.cpair(s2, t2))
                      for s2 in self.lifts(s) for t2 in self.lifts(t))

    def pairs(self) -> Iterable[Tuple[Functional, Functional]]:
        for i, j in combinations(range(len(self.small)), 2):
            yield self.small[i], self.small[j]


def _shared_lift(s: Functional, targets: Sequence[Functional], universe: Universe) -> TriBool:
    """One lift of s forms a C-pair with some lift of every target."""
    return any_of((s2, lambda s2=s2: all_of(
        [lambda t=t: any_of((t2, lambda t2=t2: universe.cpair(s2, t2)) for t2 in universe.lifts(t))
         for t in targets])) for s2 in universe.lifts(s))


def _visible_witness(s: Functional, tau1: Functional, tau2: Functional, universe: Universe) -> TriBool:
    return all_of([lambda: negate(universe.cpair(tau1, tau2)),
                   lambda: _shared_lift(s, [tau1, tau2], universe)])


def visible_inertia_predicate(s: Functional, universe: Universe) -> TriBool:
    """
    There are tau_1, tau_2 in S_n forming no C-pair, and lifts s', tau_1',
    tau_2' with (s', tau_1') and (s', tau_2') C-pairs. A yes carries the
    names (tau_1, tau_2).
    """
    universe.check_member(s)
    result = any_of(((universe.name(t1), universe.name(t2)),
                     lambda t1=t1, t2=t2: _visible_witness(s, t1, t2, universe))
                    for t1, t2 in universe.pairs())
    return result


def common_inertia_predicate(sigma: Sequence[Functional], universe: Universe) -> TriBool:
    """
    Pairwise lifted C-pairs inside sigma, and one non-C-pair (tau_1, tau_2)
    of S_n serving as visible-inertia witness for every element of sigma at
    once.
    """
    if not sigma:
        raise UniverseError('The set must not be empty')
    for s in sigma:
        universe.check_member(s)
    pairwise: List[Thunk] = [lambda s=s, t=t: universe.lifted_cpair(s, t) for s, t in combinations(sigma, 2)]

    def shared_witness(t1: Functional, t2: Functional) -> TriBool:
        return all_of([lambda: negate(universe.cpair(t1, t2))]
                      + [lambda s=s: _shared_lift(s, [t1, t2], universe) for s in sigma])

    def some_witness() -> TriBool:
        return any_of(((universe.name(t1), universe.name(t2)), lambda t1=t1, t2=t2: shared_witness(t1, t2))
                      for t1, t2 in universe.pairs())
    return all_of(pairwise + [some_witness])


class Definable():
    """A subset of S_n split into decided members and undecided elements."""
    def __init__(self, members: List[Functional], undecided: List[Functional]):
        self.members = members
        self.undecided = undecided

    def is_decisive(self) -> bool:
        return not self.undecided

    def as_set(self) -> Set[Functional]:
        return set(self.members)

    def compare(self, expected: Iterable[Functional]) -> TriBool:
        """Three-valued set equality with an expected subset."""
        target = set(expected)
        members = set(self.members)
        if members - target:
            return TriBool.no(sorted(members - target, key=str)[0])
        missing = target - members - set(self.undecided)
        if missing:
            return TriBool.no(sorted(missing, key=str)[0])
        if self.undecided:
            return TriBool.unknown(self.undecided)
        return TriBool.yes(None)


def _split(elements: Sequence[Functional], test: Callable[[Functional], TriBool]) -> Definable:
    members, undecided = [], []
    for x in elements:
        value = test(x)
        if value.is_yes():
            members.append(x)
        elif value.is_unknown():
            undecided.append(x)
    return Definable(members, undecided)


def def_D(sigma: Sequence[Functional], universe: Universe) -> Definable:
    """
    Elements tau of S_n such that every sigma in the set has a non-C-pair
    (tau_1, tau_2) of S_n and a single lift sigma' forming C-pairs with lifts
    of tau, tau_1 and tau_2. For a set with common visible inertia this is
    the C-centralizer; an element whose partners all pair with each other
    defines the empty set.
    """
    for s in sigma:
        universe.check_member(s)

    def witnessed(s: Functional, tau: Functional) -> TriBool:
        return any_of(((universe.name(t1), universe.name(t2)),
                       lambda t1=t1, t2=t2: all_of([lambda: negate(universe.cpair(t1, t2)),
                                                    lambda: _shared_lift(s, [tau, t1, t2], universe)]))
                      for t1, t2 in universe.pairs())
    return _split(universe.small, lambda tau: all_of([lambda s=s: witnessed(s, tau) for s in sigma]))


def def_I(sigma: Sequence[Functional], universe: Universe) -> Definable:
    """
    Elements of sigma having one lift that forms a C-pair with some lift of
    every element of sigma.
    """
    for s in sigma:
        universe.check_member(s)

    def member(s: Functional) -> TriBool:
        return any_of((s2, lambda s2=s2: all_of(
            [lambda t=t: any_of((t2, lambda t2=t2: universe.cpair(s2, t2)) for t2 in universe.lifts(t))
             for t in sigma])) for s2 in universe.lifts(s))
    return _split(sigma, member)


def _verdicts(functionals: Sequence[Functional], universe: Universe) -> Dict[Tuple[int, int], CVerdict]:
    matrix = universe.engine.matrix(functionals)
    full = dict(matrix)
    for (i, j), verdict in matrix.items():
        full[(j, i)] = verdict
    return full


def c_centralizer(sigma: Sequence[Functional], universe: Universe) -> Definable:
    """Elements of S_n C-paired with everything in sigma, read off the verdict matrix."""
    elements = list(dict.fromkeys(list(universe.small) + list(sigma)))
    matrix = _verdicts(elements, universe)
    index = {s: k for k, s in enumerate(elements)}
    members, undecided = [], []
    for tau in universe.small:
        truths = [matrix[(index[s], index[tau])].truth for s in sigma]
        if all(truth == Truth.YES for truth in truths):
            members.append(tau)
        elif Truth.NO not in truths:
            undecided.append(tau)
    return Definable(members, undecided)


def c_center(sigma: Sequence[Functional], universe: Universe) -> Definable:
    """Elements of sigma C-paired with every element of sigma."""
    matrix = _verdicts(sigma, universe)
    members, undecided = [], []
    for i, s in enumerate(sigma):
        truths = [matrix[(i, j)].truth for j in range(len(sigma))]
        if all(truth == Truth.YES for truth in truths):
            members.append(s)
        elif Truth.NO not in truths:
            undecided.append(s)
    return Definable(members, undecided)


def quasi_divisorial_detect(inertia: Sequence[Functional], decomposition: Sequence[Functional], universe: Universe,
                            d: int) -> TriBool:
    """
    Search sigma_1, ..., sigma_(d-1) in S_n spanning a module of rank d - 1
    with common visible inertia, whose defined decomposition set is the given
    one and whose span is the given inertia set. Only surfaces (d = 2) are
    supported, where the tuple has one element.
    """
    if d != 2:
        raise UniverseError('Quasi-divisorial detection is implemented for d = 2 only, got {}'.format(d))
    if universe.variables != 2:
        raise UniverseError('Quasi-divisorial detection needs a universe over F(t, u)')
    for s in list(inertia) + list(decomposition):
        universe.check_member(s)

    def candidate(s: Functional) -> TriBool:
        if module_rank([s]) != d - 1:
            return TriBool.no('rank')
        if set(span_members(s, universe.small)) != set(inertia):
            return TriBool.no('span')
        return all_of([lambda: def_D([s], universe).compare(decomposition),
                       lambda: def_I(decomposition, universe).compare(inertia),
                       lambda: common_inertia_predicate([s], universe)])
    return any_of((universe.name(s), lambda s=s: candidate(s)) for s in universe.small)


class TrdegEstimate():
    def __init__(self, value: int, blocked: int, witness: Sequence[Functional]):
        self.value = value
        # Subsets of size value + 1 left open by unknown verdicts
        self.blocked = blocked
        self.witness = list(witness)


def trdeg_estimate(universe: Universe) -> TrdegEstimate:
    """
    Largest r with an independent r-subset of S_n whose pairs are all
    C-pairs. Subsets of qualifying sets qualify, so the search stops at the
    first size without a qualifying subset.
    """
    elements = [s for s in universe.small if not s.is_zero()]
    best: List[Functional] = []
    blocked = 0
    for r in range(1, len(elements) + 1):
        found: Optional[List[Functional]] = None
        blocked = 0
        for subset in combinations(elements, r):
            if not is_independent(list(subset)):
                continue
            value = all_of([lambda s=s, t=t: universe.cpair(s, t) for s, t in combinations(subset, 2)])
            if value.is_yes():
                found = list(subset)
                break
            if value.is_unknown():
                blocked += 1
        if found is None:
            break
        best = found
        blocked = 0
    return TrdegEstimate(len(best), blocked, best)


def _common_flag(sigma: Sequence[Functional], universe: Universe) -> FlagValuation:
    found = set(universe.flags)
    for s in sigma:
        for flag in s.terms:
            found.update(flag.prefixes())
    for w in sorted(found, key=lambda flag: (-flag.rank, str(flag))):
        if all(is_structurally_inertial(s, w) for s in sigma):
            return w
    raise UniverseError('Set is not valuative in the registry: no common flag carries all of its terms')


def kernel_coordinates(sigma: Sequence[Functional], w: FlagValuation) -> List[List[int]]:
    """Each functional of sigma as a coordinate map on the value group Z^rank(w)."""
    return [[s.terms.get(w.prefix(k), 0) for k in range(1, w.rank + 1)] for s in sigma]


def associated_valuation(sigma: Sequence[Functional], universe: Universe) -> FlagValuation:
    """
    Coarsening of a common inertia flag w along the largest convex subgroup
    of Z^rank(w) on which every element of sigma vanishes.
    """
    if not sigma:
        raise UniverseError('The set must not be empty')
    ell, level = sigma[0].ell, sigma[0].level
    w = _common_flag(sigma, universe)
    if w.is_trivial():
        return w
    convex: ConvexIndex = max_convex_inside(kernel_coordinates(sigma, w), w.rank, ell, level)
    return coarsen(w, convex)


def in_orthogonal(sigma: Sequence[Functional], x: BivRat) -> bool:
    return all(evaluate(s, x).is_zero() for s in sigma)


def h_membership_probe(t: BivRat, sigma: Sequence[Functional], space: SearchSpace) -> TriBool:
    """
    Bounded test of the H-set formula for t: t vanishes under sigma and for
    every x outside the orthogonal, (t - x) / (1 - x) vanishes too. Refuted
    with a witness x, or unknown once the stream is exhausted.
    """
    if t.is_zero():
        raise FunctionalError('The probe needs a nonzero element')
    if not in_orthogonal(sigma, t):
        return TriBool.no(t)
    for x in space.elements():
        if x == t or in_orthogonal(sigma, x):
            continue
        if not in_orthogonal(sigma, (t - x) / x.one_minus()):
            return TriBool.no(x)
    return TriBool.unknown(['budget'])


def ground_truth_inertia(s: Functional, universe: Universe) -> List[FlagValuation]:
    """Registered flags whose inertia structurally contains s."""
    return [v for v in universe.flags if not v.is_trivial() and is_structurally_inertial(s, v)]


def ground_truth_visible_inertia(s: Functional, universe: Universe) -> bool:
    if s.is_zero():
        return True
    return any(is_visible(v, universe.variables) for v in ground_truth_inertia(s, universe))


def valuative_comparability(s: Functional, t: Functional, universe: Universe) -> TriBool:
    """
    For valuative s and t the C-pair verdict must agree with comparability
    of their associated valuations; yes when it agrees, no on a mismatch.
    """
    v = associated_valuation([s], universe)
    w = associated_valuation([t], universe)
    verdict = universe.cpair(s, t)
    if verdict.is_unknown():
        return verdict
    if verdict.is_yes() == comparable(v, w):
        return TriBool.yes((v, w))
    return TriBool.no((v, w))


def supremum_valuation(sigma: Sequence[Functional], universe: Universe) -> FlagValuation:
    """
    The finest of the associated valuations of the elements of a valuative
    C-set; these must be pairwise comparable.
    """
    if not sigma:
        raise UniverseError('The set must not be empty')
    valuations = [associated_valuation([s], universe) for s in sigma]
    for v, w in combinations(valuations, 2):
        if not comparable(v, w):
            raise UniverseError('Associated valuations {} and {} are incomparable'.format(v, w))
    return max(valuations, key=sort_key)


def decomposition_from_cpair(s: Functional, t: Functional, universe: Universe) -> TriBool:
    """If (s, t) is a C-pair and s is valuative with valuation v, t lies in D_v."""
    verdict = universe.cpair(s, t)
    if not verdict.is_yes():
        return TriBool.unknown([(universe.name(s), universe.name(t))])
    v = associated_valuation([s], universe)
    if v.is_trivial():
        return TriBool.yes('trivial')
    return in_decomposition(t, v, universe.space)
