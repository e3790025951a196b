"""
Seeded randomized checks of the algebraic laws every run relies on. The
seed only picks which elements are checked; verdicts never depend on it.
"""
import random

from typing import Callable, List, Sequence, Tuple

from cpairs import cpair_certify, cpair_falsify
from funcfield import BivRat
from functionals import Functional, SearchSpace, evaluate, in_decomposition, in_inertia, lift, project
from valuations import FlagValuation, flag_value


class PropertyReport():
    def __init__(self) -> None:
        self.checked = 0
        self.failures: List[Tuple[str, str]] = []

    def record(self, law: str, ok: bool, detail: Callable[[], str]) -> None:
        self.checked += 1
        if not ok:
            self.failures.append((law, detail()))

    @property
    def passed(self) -> bool:
        return not self.failures

    def __str__(self) -> str:
        return '(properties (checked {}) (failures {}))'.format(self.checked, len(self.failures))


def _sample(space: SearchSpace, rng: random.Random, count: int) -> List[BivRat]:
    elements = list(space.elements())
    if not elements:
        return []
    return [rng.choice(elements) for _ in range(count)]


def check_laws(functionals: Sequence[Functional], flags: Sequence[FlagValuation], space: SearchSpace, seed: int,
               samples: int = 50) -> PropertyReport:
    """
    Homomorphism laws of functionals and flag values, vanishing on -1,
    projection after lifting, inertia inside decomposition, and disjointness
    of certification and falsification.
    """
    rng = random.Random(seed)
    report = PropertyReport()
    xs = _sample(space, rng, samples)
    ys = _sample(space, rng, samples)
    minus_one = BivRat.from_int(space.p, -1)
    for s in functionals:
        report.record('minus-one', evaluate(s, minus_one).is_zero(), lambda s=s: str(s))
        report.record('lift-project', project(lift(s, s.level + 1), s.level) == s, lambda s=s: str(s))
        for x, y in zip(xs, ys):
            report.record('homomorphism', evaluate(s, x * y) == evaluate(s, x) + evaluate(s, y),
                          lambda s=s, x=x, y=y: '{} at {}, {}'.format(s, x, y))
        for v in flags:
            if v.is_trivial():
                continue
            if in_inertia(s, v, space).is_yes():
                report.record('inertia-in-decomposition', in_decomposition(s, v, space).is_yes(),
                              lambda s=s, v=v: '{} at {}'.format(s, v))
    for v in flags:
        for x, y in zip(xs, ys):
            report.record('flag-value', flag_value(v, x * y) == flag_value(v, x) + flag_value(v, y),
                          lambda v=v, x=x, y=y: '{} at {}, {}'.format(v, x, y))
    pairs = [(s, t) for i, s in enumerate(functionals) for t in functionals[i:]]
    for s, t in rng.sample(pairs, min(len(pairs), samples)):
        certified = cpair_certify(s, t, flags) is not None
        report.record('soundness', not (certified and cpair_falsify(s, t, space) is not None),
                      lambda s=s, t=t: '({}, {})'.format(s, t))
    return report
