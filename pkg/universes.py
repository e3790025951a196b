"""
Curated universes with known ground truth.

u0: divisors u, t and t - 1 of F(t, u) with two points on each, as first
and second stage coordinates.
u1: the flag universe of the divisor u alone.
kt: the point valuations t and t - 1 of F(t).
"""
from typing import Dict, List, Optional, Sequence, Tuple

from cpairs import CPairEngine
from funcfield import Curve, default_pool, parse_constant, parse_poly
from functionals import Functional, SearchSpace
from modelchecker import Universe
from run_configs import BUDGET_PRESETS, SearchBudget
from valuations import FlagValuation

# (name, curve, point or None, coordinate)
Coordinate = Tuple[str, str, Optional[str], int]

U0_COORDINATES: List[Coordinate] = [
    ('ord_u', 'u', None, 1),
    ('a', 'u', '0', 2),
    ('b', 'u', '1', 2),
    ('ord_t', 't', None, 1),
    ('c_t0', 't', '0', 2),
    ('c_t1', 't', '1', 2),
    ('ord_t1', 't - 1', None, 1),
    ('d_0', 't - 1', '0', 2),
    ('d_1', 't - 1', '1', 2),
]

U1_COORDINATES: List[Coordinate] = [
    ('coord1', 'u', '0', 1),
    ('coord2', 'u', '0', 2),
    ('coord2_t1', 'u', '1', 2),
]

KT_COORDINATES: List[Coordinate] = [
    ('ord_0', 't', None, 1),
    ('ord_1', 't - 1', None, 1),
]


def make_flag(p: int, variables: int, curve: str, point: Optional[str] = None) -> FlagValuation:
    carrier = Curve(parse_poly(p, curve))
    return FlagValuation(variables, carrier, parse_constant(p, point) if point is not None else None)


def build_universe(coordinates: Sequence[Coordinate],
                   p: int = 5,
                   ell: int = 2,
                   variables: int = 2,
                   budget: SearchBudget = BUDGET_PRESETS['default'],
                   threads: int = 1,
                   extra: Sequence[Tuple[str, Sequence[str]]] = (),
                   ) -> Universe:
    """
    Universe at n = N = 1 holding 0 and the listed coordinate functionals;
    extra entries are sums of already listed elements.
    """
    flags: List[FlagValuation] = []
    named: Dict[str, Functional] = {'0': Functional(ell, 1)}
    for name, curve, point, index in coordinates:
        flag = make_flag(p, variables, curve, point)
        if flag not in flags:
            flags.append(flag)
        named[name] = Functional.coordinate(flag, index, ell, 1)
    for name, parts in extra:
        total = Functional(ell, 1)
        for part in parts:
            total = total + named[part]
        named[name] = total
    curves = [flag.curve for flag in flags if flag.curve is not None]
    space = SearchSpace(default_pool(p, variables, list(dict.fromkeys(curves))), budget)
    engine = CPairEngine(space, flags, threads=threads)
    names = {s: name for name, s in named.items()}
    return Universe(ell, 1, 1, list(named.values()), engine, flags=flags, variables=variables, names=names)


def u0(p: int = 5, ell: int = 2, budget: SearchBudget = BUDGET_PRESETS['default'], threads: int = 1) -> Universe:
    return build_universe(U0_COORDINATES, p, ell, 2, budget, threads)


def u1(p: int = 5, ell: int = 2, budget: SearchBudget = BUDGET_PRESETS['default'], threads: int = 1) -> Universe:
    return build_universe(U1_COORDINATES, p, ell, 2, budget, threads, extra=[('coord1+coord2', ['coord1', 'coord2'])])


def kt(p: int = 5, ell: int = 2, budget: SearchBudget = BUDGET_PRESETS['default'], threads: int = 1) -> Universe:
    return build_universe(KT_COORDINATES, p, ell, 1, budget, threads)


CURATED = {
    'u0': u0,
    'u1': u1,
    'kt': kt,
}
