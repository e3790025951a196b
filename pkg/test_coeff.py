import pytest
from hypothesis import given
from hypothesis import strategies as st

from coeff import (
    CancellationPreconditionError, Lambda, LevelError, cancellation_sweep, check_cancellation, check_prime,
    const_M, const_N, const_R, exhaustive_project_functoriality, lambda_lift, lambda_project
)


@pytest.mark.parametrize(['r', 'n', 'expected'], [
    (1, 1, 1),
    (1, 2, 3),
    (2, 1, 1),
    (2, 3, 7),
    (3, 2, 5),
])
def test_const_M(r: int, n: int, expected: int) -> None:
    assert const_M(r, n) == expected


@pytest.mark.parametrize(['n', 'ell', 'expected'], [
    (1, 2, 1),
    (1, 7, 1),
    (2, 2, 185),
    (2, 3, 965),
])
def test_const_N(n: int, ell: int, expected: int) -> None:
    assert const_N(n, ell) == expected


@pytest.mark.parametrize(['n', 'ell', 'expected'], [
    (1, 2, 1),
    (1, 3, 1),
    (2, 2, 37748689),
])
def test_const_R(n: int, ell: int, expected: int) -> None:
    assert const_R(n, ell) == expected


def test_const_N_custom_formula() -> None:
    assert const_N(3, 2, formula=lambda n, ell: n * ell) == 6


@pytest.mark.parametrize('value', [0, 1, 4, 9])
def test_check_prime_rejects(value: int) -> None:
    with pytest.raises(ValueError):
        check_prime(value)


def test_lambda_arithmetic() -> None:
    a = Lambda(3, 2, 7)
    b = Lambda(3, 2, 5)
    assert a + b == Lambda(3, 2, 3)
    assert a - b == 2
    assert -a == Lambda(3, 2, 2)
    assert a * b == Lambda(3, 2, 8)
    assert 2 * a == Lambda(3, 2, 5)


def test_lambda_level_mismatch() -> None:
    with pytest.raises(LevelError):
        Lambda(2, 2, 1) + Lambda(2, 3, 1)
    with pytest.raises(LevelError):
        Lambda(2, 2, 1) + Lambda(3, 2, 1)


def test_lambda_invalid_level() -> None:
    with pytest.raises(LevelError):
        Lambda(2, 0, 1)


@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=10**6))
def test_project_lift(level: int, residue: int) -> None:
    a = Lambda(2, level, residue)
    for m in range(level, level + 3):
        assert lambda_project(lambda_lift(a, m), level) == a


@given(st.integers(min_value=0, max_value=10**6), st.integers(min_value=0, max_value=10**6))
def test_project_is_ring_homomorphism(x: int, y: int) -> None:
    a = Lambda(3, 4, x)
    b = Lambda(3, 4, y)
    assert lambda_project(a + b, 2) == lambda_project(a, 2) + lambda_project(b, 2)
    assert lambda_project(a * b, 2) == lambda_project(a, 2) * lambda_project(b, 2)


def test_project_out_of_range() -> None:
    with pytest.raises(LevelError):
        lambda_project(Lambda(2, 2, 1), 3)
    with pytest.raises(LevelError):
        lambda_lift(Lambda(2, 2, 1), 1)


def test_project_functoriality() -> None:
    assert list(exhaustive_project_functoriality(2, 4)) == []
    assert list(exhaustive_project_functoriality(3, 3)) == []


def test_check_cancellation_below_level() -> None:
    with pytest.raises(CancellationPreconditionError):
        check_cancellation([Lambda(2, 2, 1)], Lambda(2, 2, 0), Lambda(2, 2, 1), 2)


def test_check_cancellation_vanishing_factor() -> None:
    with pytest.raises(CancellationPreconditionError):
        check_cancellation([Lambda(2, 3, 4)], Lambda(2, 3, 0), Lambda(2, 3, 1), 2)


@pytest.mark.parametrize(['ell', 'n', 'r', 'level'], [
    (2, 1, 1, 1),
    (2, 1, 2, 1),
    (2, 2, 1, 3),
    (2, 2, 2, 4),
    (3, 1, 1, 1),
    (3, 1, 2, 1),
    (3, 2, 1, 3),
    (3, 2, 2, 4),
])
def test_cancellation_sweep(ell: int, n: int, r: int, level: int) -> None:
    result = cancellation_sweep(ell, n, r)
    assert result.level == level
    assert result.passed
    assert result.checked > 0
