import pytest

from coeff import LevelError
from cpairs import CPairEngine, audit_pair, candidate_flags, cpair_certify, cpair_falsify, violates
from funcfield import default_pool, parse_rat
from functionals import Functional, SearchSpace
from run_configs import BUDGET_PRESETS, SearchBudget
from universes import make_flag

P = 5
LINE = make_flag(P, 2, 'u')
ORIGIN = make_flag(P, 2, 'u', '0')
ONE = make_flag(P, 2, 'u', '1')
T_ORIGIN = make_flag(P, 2, 't', '0')

ORD_U = Functional.coordinate(LINE, 1, 2, 1)
A = Functional.coordinate(ORIGIN, 2, 2, 1)
B = Functional.coordinate(ONE, 2, 2, 1)
ORD_T = Functional.coordinate(T_ORIGIN, 1, 2, 1)
C_T0 = Functional.coordinate(T_ORIGIN, 2, 2, 1)
ZERO = Functional(2, 1)

POINT_0 = make_flag(P, 1, 't')
POINT_1 = make_flag(P, 1, 't - 1')
ORD_0 = Functional.coordinate(POINT_0, 1, 2, 1)
ORD_1 = Functional.coordinate(POINT_1, 1, 2, 1)


@pytest.fixture(scope='module')
def space() -> SearchSpace:
    return SearchSpace(default_pool(P, 2, [LINE.curve, T_ORIGIN.curve]), BUDGET_PRESETS['default'])


@pytest.fixture(scope='module')
def line_space() -> SearchSpace:
    return SearchSpace(default_pool(P, 1), BUDGET_PRESETS['default'])


def test_violates() -> None:
    assert violates(ORD_0, ORD_1, parse_rat(P, 't'))
    assert not violates(ORD_0, ORD_0, parse_rat(P, 't'))
    assert not violates(A, B, parse_rat(P, '1'))


def test_candidate_flags() -> None:
    flags = candidate_flags(A, B, [T_ORIGIN])
    assert [str(v) for v in flags] == [
        'flag[(t)]', 'flag[(u)]', 'flag[(t),(u=0)]', 'flag[(u),(t=0)]', 'flag[(u),(t=1)]']


@pytest.mark.parametrize(['s', 't', 'certificate'], [
    (ORD_U, A, 'residue flag[(u)]'),
    (ORD_U, B, 'residue flag[(u)]'),
    (ORD_T, C_T0, 'residue flag[(t)]'),
    (A, A + ORD_U, 'residue flag[(u)]'),
    (ZERO, A, 'cyclic flag[]'),
    (A, A, 'cyclic flag[]'),
])
def test_cpair_certify(s: Functional, t: Functional, certificate: str) -> None:
    assert str(cpair_certify(s, t)) == certificate


@pytest.mark.parametrize(['s', 't'], [
    (A, B),
    (ORD_U, ORD_T),
    (A, C_T0),
    (ORD_U, C_T0),
])
def test_cpair_certify_fails(s: Functional, t: Functional) -> None:
    assert cpair_certify(s, t) is None


@pytest.mark.parametrize(['s', 't', 'witness'], [
    (A, B, 't'),
    (ORD_U, ORD_T, 'u/t'),
    (A, C_T0, 'u/t'),
])
def test_cpair_falsify(space: SearchSpace, s: Functional, t: Functional, witness: str) -> None:
    x = cpair_falsify(s, t, space)
    assert x is not None
    assert violates(s, t, x)
    assert violates(s, t, parse_rat(P, witness))


def test_cpair_falsify_first_witness(line_space: SearchSpace) -> None:
    assert str(cpair_falsify(ORD_0, ORD_1, line_space)) == 't'


def test_cpair_falsify_threads(space: SearchSpace) -> None:
    sequential = cpair_falsify(A, C_T0, space)
    parallel = cpair_falsify(A, C_T0, space, threads=4)
    assert sequential is not None and parallel is not None
    assert sequential == parallel
    assert str(sequential) == str(parallel)


def test_cpair_falsify_trivial_pairs(space: SearchSpace) -> None:
    assert cpair_falsify(ZERO, A, space) is None
    assert cpair_falsify(A, A, space) is None


def test_level_mismatch(space: SearchSpace) -> None:
    with pytest.raises(LevelError):
        cpair_certify(A, Functional.coordinate(ORIGIN, 2, 2, 2))
    with pytest.raises(LevelError):
        CPairEngine(space).verdict(A, Functional.coordinate(ORIGIN, 2, 2, 2))


def test_engine_verdicts(space: SearchSpace) -> None:
    engine = CPairEngine(space, [ORIGIN, ONE, T_ORIGIN])
    yes = engine.verdict(ORD_U, A)
    assert yes.is_yes()
    assert yes.detail() == 'certified by residue flag[(u)]'
    no = engine.verdict(A, B)
    assert no.is_no()
    assert no.detail() == 'falsified by x = t'


def test_engine_symmetric_cache(space: SearchSpace) -> None:
    engine = CPairEngine(space)
    first = engine.verdict(A, C_T0)
    assert engine.cache_size() == 1
    second = engine.verdict(C_T0, A)
    assert second is first
    assert engine.cache_size() == 1


def test_engine_unknown() -> None:
    tiny = SearchSpace(default_pool(P, 2)[:1], SearchBudget(1, 1, 1))
    verdict = CPairEngine(tiny).verdict(ORD_U, ORD_T)
    assert verdict.is_unknown()
    assert verdict.detail() == 'budget exhausted'


def test_engine_matrix(space: SearchSpace) -> None:
    engine = CPairEngine(space, threads=2)
    functionals = [ZERO, ORD_U, A, B]
    matrix = engine.matrix(functionals)
    assert sorted(matrix) == [(i, j) for i in range(4) for j in range(i, 4)]
    assert matrix[(1, 2)].is_yes()
    assert matrix[(2, 3)].is_no()
    assert all(matrix[(i, i)].is_yes() for i in range(4))


def test_audit(space: SearchSpace) -> None:
    certificate, witness = audit_pair(ORD_U, A, space)
    assert certificate is not None and witness is None
    certificate, witness = audit_pair(A, B, space)
    assert certificate is None and witness is not None
    assert CPairEngine(space, audit=True).verdict(ORD_U, B).is_yes()
