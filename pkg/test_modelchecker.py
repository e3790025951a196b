from itertools import islice

import pytest

from cpairs import CPairEngine
from funcfield import default_pool, parse_rat
from functionals import Functional, SearchSpace, TriBool, lift
from modelchecker import (
    Definable, Universe, UniverseError, all_of, any_of, associated_valuation, c_center, c_centralizer,
    common_inertia_predicate, decomposition_from_cpair, def_D, def_I, ground_truth_visible_inertia,
    h_membership_probe, kernel_coordinates, negate, quasi_divisorial_detect, supremum_valuation, trdeg_estimate,
    valuative_comparability, visible_inertia_predicate
)
from run_configs import SearchBudget
from universes import kt, make_flag, u0, u1

P = 5


@pytest.fixture(scope='module')
def universe0() -> Universe:
    return u0()


@pytest.fixture(scope='module')
def universe1() -> Universe:
    return u1()


@pytest.fixture(scope='module')
def small_space() -> SearchSpace:
    return SearchSpace(default_pool(P, 2), SearchBudget.parse('small'))


def names(universe: Universe, elements: list) -> set:
    return {universe.name(s) for s in elements}


def test_negate() -> None:
    assert negate(TriBool.yes(1)).is_no()
    assert negate(TriBool.no(1)).is_yes()
    assert negate(TriBool.unknown(['x'])).is_unknown()


def test_all_of() -> None:
    assert all_of([]).is_yes()
    assert all_of([lambda: TriBool.unknown(['a']), lambda: TriBool.no('b')]).witness == 'b'
    value = all_of([lambda: TriBool.yes(None), lambda: TriBool.unknown(['a'])])
    assert value.is_unknown() and value.blockers == ['a']


def test_all_of_short_circuits() -> None:
    def fail() -> TriBool:
        raise AssertionError('evaluated after a no')
    assert all_of([lambda: TriBool.no(None), fail]).is_no()


def test_any_of() -> None:
    assert any_of([]).is_no()
    assert any_of([('a', lambda: TriBool.no(None)), ('b', lambda: TriBool.yes(None))]).witness == 'b'
    assert any_of([('a', lambda: TriBool.unknown(['x'])), ('b', lambda: TriBool.no(None))]).is_unknown()


def test_definable_compare() -> None:
    a, b, c = (Functional.coordinate(make_flag(P, 2, curve), 1, 2, 1) for curve in ('u', 't', 't - 1'))
    assert Definable([a, b], []).compare([a, b]).is_yes()
    assert Definable([a, b], []).compare([a]).is_no()
    assert Definable([a], [b]).compare([a, b]).is_unknown()
    assert Definable([a], [b]).compare([a, c]).is_no()
    assert not Definable([a], [b]).is_decisive()


@pytest.mark.parametrize(['name', 'expected'], [
    ('0', 'yes'),
    ('ord_u', 'yes'),
    ('ord_t', 'yes'),
    ('ord_t1', 'yes'),
    ('a', 'no'),
    ('b', 'no'),
    ('c_t0', 'no'),
    ('c_t1', 'no'),
    ('d_0', 'no'),
    ('d_1', 'no'),
])
def test_visible_inertia_u0(universe0: Universe, name: str, expected: str) -> None:
    s = universe0.element(name)
    value = visible_inertia_predicate(s, universe0)
    assert str(value) == expected
    assert value.is_yes() == ground_truth_visible_inertia(s, universe0)


def test_common_inertia_u0(universe0: Universe) -> None:
    ord_u, ord_t = universe0.element('ord_u'), universe0.element('ord_t')
    assert common_inertia_predicate([ord_u], universe0).is_yes()
    assert common_inertia_predicate([ord_u, ord_t], universe0).is_no()
    with pytest.raises(UniverseError):
        common_inertia_predicate([], universe0)


def test_defined_sets_u0(universe0: Universe) -> None:
    ord_u = universe0.element('ord_u')
    decomposition = def_D([ord_u], universe0)
    assert decomposition.is_decisive()
    assert names(universe0, decomposition.members) == {'0', 'ord_u', 'a', 'b'}
    inertia = def_I(decomposition.members, universe0)
    assert names(universe0, inertia.members) == {'0', 'ord_u'}
    assert names(universe0, c_centralizer([ord_u], universe0).members) == {'0', 'ord_u', 'a', 'b'}
    assert names(universe0, c_center(decomposition.members, universe0).members) == {'0', 'ord_u'}


def test_defined_decomposition_needs_witness(universe0: Universe) -> None:
    a = universe0.element('a')
    decomposition = def_D([a], universe0)
    assert decomposition.is_decisive()
    assert decomposition.members == []
    assert names(universe0, c_centralizer([a], universe0).members) == {'0', 'ord_u', 'a'}
    assert names(universe0, def_D([], universe0).members) == names(universe0, universe0.small)


def test_quasi_divisorial_u0(universe0: Universe) -> None:
    element = universe0.element
    found = quasi_divisorial_detect([element('0'), element('ord_u')],
                                    [element(name) for name in ('0', 'ord_u', 'a', 'b')], universe0, 2)
    assert found.is_yes()
    assert found.witness == 'ord_u'
    second_stage = quasi_divisorial_detect([element('0'), element('a')],
                                           [element(name) for name in ('0', 'ord_u', 'a')], universe0, 2)
    assert second_stage.is_no()
    with pytest.raises(UniverseError):
        quasi_divisorial_detect([element('0')], [element('0')], universe0, 3)


def test_trdeg(universe0: Universe, universe1: Universe) -> None:
    estimate = trdeg_estimate(universe0)
    assert estimate.value == 2
    assert names(universe0, estimate.witness) == {'ord_u', 'a'}
    assert trdeg_estimate(universe1).value == 2
    assert trdeg_estimate(kt()).value == 1


def test_kt_universe() -> None:
    universe = kt()
    ord_0, ord_1 = universe.element('ord_0'), universe.element('ord_1')
    assert universe.cpair(ord_0, ord_1).is_no()
    # ord_0 only pairs with 0 and itself, which form a C-pair
    assert names(universe, def_D([ord_0], universe).members) == set()
    assert def_D([ord_0], universe).is_decisive()
    assert names(universe, def_D([universe.element('0')], universe).members) == {'0', 'ord_0', 'ord_1'}
    with pytest.raises(UniverseError):
        quasi_divisorial_detect([ord_0], [ord_0], universe, 2)


def test_common_inertia_u1(universe1: Universe) -> None:
    coord1, coord2 = universe1.element('coord1'), universe1.element('coord2')
    assert common_inertia_predicate([coord1], universe1).is_yes()
    # coord2 is C-paired with everything it could witness visibility against
    assert common_inertia_predicate([coord1, coord2], universe1).is_no()


def test_associated_valuation_u1(universe1: Universe) -> None:
    coord1, coord2 = universe1.element('coord1'), universe1.element('coord2')
    assert str(associated_valuation([coord1], universe1)) == 'flag[(u)]'
    assert str(associated_valuation([coord2], universe1)) == 'flag[(u),(t=0)]'
    assert str(associated_valuation([coord1, coord2], universe1)) == 'flag[(u),(t=0)]'
    assert associated_valuation([universe1.element('0')], universe1).is_trivial()
    assert str(supremum_valuation([coord1, coord2], universe1)) == 'flag[(u),(t=0)]'
    w = make_flag(P, 2, 'u', '0')
    assert kernel_coordinates([coord1, coord2], w) == [[1, 0], [0, 1]]


def test_supremum_incomparable(universe1: Universe) -> None:
    with pytest.raises(UniverseError):
        supremum_valuation([universe1.element('coord2'), universe1.element('coord2_t1')], universe1)


def test_comparability_u1(universe1: Universe) -> None:
    coord1, coord2, other = (universe1.element(name) for name in ('coord1', 'coord2', 'coord2_t1'))
    assert valuative_comparability(coord1, coord2, universe1).is_yes()
    assert valuative_comparability(coord2, other, universe1).is_yes()
    assert decomposition_from_cpair(coord1, coord2, universe1).is_yes()
    assert decomposition_from_cpair(coord2, other, universe1).is_unknown()


def test_h_membership_probe(universe0: Universe, small_space: SearchSpace) -> None:
    a = universe0.element('a')
    refuted = h_membership_probe(parse_rat(P, 'u*t'), [a], small_space)
    assert refuted.is_no()
    assert str(refuted.witness) == 't*u'
    outside = h_membership_probe(parse_rat(P, 'u'), [a], small_space)
    assert outside.is_no()
    assert str(outside.witness) == 't'
    unit = h_membership_probe(parse_rat(P, '2 + u'), [a], small_space)
    assert unit.is_unknown()
    assert unit.blockers == ['budget']


def test_universe_validation(small_space: SearchSpace) -> None:
    engine = CPairEngine(small_space)
    a = Functional.coordinate(make_flag(P, 2, 'u', '0'), 2, 2, 1)
    b = Functional.coordinate(make_flag(P, 2, 'u', '1'), 2, 2, 1)
    with pytest.raises(UniverseError):
        Universe(2, 1, 1, [lift(a, 2)], engine)
    with pytest.raises(UniverseError):
        Universe(2, 1, 2, [a], engine)
    with pytest.raises(UniverseError):
        Universe(2, 1, 2, [a], engine, big=[lift(a, 2), lift(b, 2)], lift_table={a: [lift(a, 2)]})
    with pytest.raises(UniverseError):
        Universe(2, 1, 2, [a, b], engine, big=[lift(a, 2), lift(b, 2)], lift_table={a: [lift(b, 2)]})
    with pytest.raises(UniverseError):
        Universe(2, 2, 185, [lift(a, 2)], engine)
    universe = Universe(2, 1, 2, [a], engine, big=[lift(a, 2)], lift_table={a: [lift(a, 2)]})
    assert universe.lifts(a) == [lift(a, 2)]
    with pytest.raises(UniverseError):
        universe.check_member(b)
    with pytest.raises(UniverseError):
        universe.element('missing')


def test_lifted_cpair() -> None:
    space = SearchSpace(default_pool(P, 2), SearchBudget.parse('default'))
    line = make_flag(P, 2, 'u')
    origin = make_flag(P, 2, 'u', '0')
    ord_u = Functional.coordinate(line, 1, 2, 1)
    a = Functional.coordinate(origin, 2, 2, 1)
    big = [lift(ord_u, 3), lift(a, 3), lift(ord_u, 3) + 2 * lift(a, 3)]
    universe = Universe(2, 1, 3, [ord_u, a], CPairEngine(space), big=big,
                        lift_table={ord_u: [big[0]], a: [big[1]]})
    assert universe.lifted_cpair(ord_u, a).is_yes()
    assert def_D([ord_u], universe).is_decisive()


class TableUniverse(Universe):
    """Universe whose C-pair relation is read from a table of name pairs."""
    def __init__(self, elements: dict, table: list, engine: CPairEngine):
        super().__init__(2, 1, 1, list(elements.values()), engine, names={s: name for name, s in elements.items()})
        self.table = {frozenset(pair) for pair in table}

    def cpair(self, s: Functional, t: Functional) -> TriBool:
        if s == t or frozenset((self.name(s), self.name(t))) in self.table:
            return TriBool.yes(None)
        return TriBool.no(None)


def test_common_inertia_shares_witness(small_space: SearchSpace) -> None:
    flags = {
        's1': make_flag(P, 2, 'u'),
        's2': make_flag(P, 2, 't'),
        'x': make_flag(P, 2, 't - 1'),
        'y': make_flag(P, 2, 'u - 1'),
        'z': make_flag(P, 2, 'u - t'),
    }
    elements = {name: Functional.coordinate(flag, 1, 2, 1) for name, flag in flags.items()}
    elements['w'] = Functional.coordinate(make_flag(P, 2, 'u', '0'), 2, 2, 1)
    table = [('s1', 's2'), ('s1', 'x'), ('s1', 'y'), ('s2', 'z'), ('s2', 'w')]
    universe = TableUniverse(elements, table, CPairEngine(small_space))
    s1, s2 = universe.element('s1'), universe.element('s2')
    assert visible_inertia_predicate(s1, universe).is_yes()
    assert visible_inertia_predicate(s2, universe).is_yes()
    assert universe.lifted_cpair(s1, s2).is_yes()
    # the only common partners of s1 and s2 are s1 and s2 themselves
    assert common_inertia_predicate([s1, s2], universe).is_no()
    assert common_inertia_predicate([s2], universe).is_yes()
    assert names(universe, def_D([s1], universe).members) == {'s1', 's2', 'x', 'y'}
    assert names(universe, def_D([s1, s2], universe).members) == {'s1', 's2'}


@pytest.mark.parametrize('fixture', ['universe0', 'universe1'])
def test_def_D_antitone(request: pytest.FixtureRequest, fixture: str) -> None:
    universe: Universe = request.getfixturevalue(fixture)
    everything = def_D([], universe)
    assert everything.is_decisive()
    assert set(everything.members) == set(universe.small)
    single = {s: def_D([s], universe) for s in universe.small}
    for s, t in universe.pairs():
        both = def_D([s, t], universe)
        for one in (single[s], single[t]):
            assert both.as_set() <= one.as_set() | set(one.undecided)
            assert set(both.undecided) <= one.as_set() | set(one.undecided)


def test_h_membership_units_survive(universe0: Universe, small_space: SearchSpace) -> None:
    ord_u = universe0.element('ord_u')
    v = associated_valuation([ord_u], universe0)
    assert str(v) == 'flag[(u)]'
    candidates = SearchSpace(default_pool(P, 2), SearchBudget.parse('2:2:24'))
    units = list(islice(candidates.units(v), 500))
    assert len(units) == 500
    refuted = [x for x in units if h_membership_probe(x, [ord_u], small_space).is_no()]
    assert refuted == []
