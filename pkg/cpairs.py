"""
Three-valued decision engine for C-pairs: (s, t) is a C-pair when
s(x) * t(1 - x) = s(1 - x) * t(x) for every x other than 0 and 1.

A certificate is a flag v such that s and t both lie in the decomposition
group of v and their images modulo inertia span a cyclic module; a
falsification is an element x breaking the identity. The two are mutually
exclusive, and verdicts are cached symmetrically.
"""
import threading
from concurrent.futures import ThreadPoolExecutor
from itertools import islice

from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from coeff import LevelError
from funcfield import BivRat
from functionals import (Functional, SearchSpace, TriBool, Truth, evaluate, is_structurally_decomposed, module_rank,
                         residue_image)
from valuations import FlagValuation, sort_key

# Elements handed to one worker at a time when falsifying in parallel
FALSIFY_CHUNK = 64


class SoundnessError(RuntimeError):
    """Certifier and falsifier both succeeded on the same pair."""


class Certificate():
    """A flag v witnessing a C-pair; the trivial flag means <s, t> is cyclic."""
    def __init__(self, flag: FlagValuation, reason: str):
        self.flag = flag
        self.reason = reason

    def __str__(self) -> str:
        return '{} {}'.format(self.reason, self.flag)


class CVerdict():
    def __init__(self, value: TriBool, certificate: Optional[Certificate] = None, witness: Optional[BivRat] = None):
        self.value = value
        self.certificate = certificate
        self.witness = witness

    @property
    def truth(self) -> Truth:
        return self.value.truth

    def is_yes(self) -> bool:
        return self.value.is_yes()

    def is_no(self) -> bool:
        return self.value.is_no()

    def is_unknown(self) -> bool:
        return self.value.is_unknown()

    def detail(self) -> str:
        if self.certificate is not None:
            return 'certified by {}'.format(self.certificate)
        if self.witness is not None:
            return 'falsified by x = {}'.format(self.witness)
        return 'budget exhausted'

    def __str__(self) -> str:
        return '{} ({})'.format(self.value, self.detail())


def violates(s: Functional, t: Functional, x: BivRat) -> bool:
    """
    Whether x breaks the C-pair identity for (s, t).

    >>> from funcfield import Curve, parse_poly, parse_rat
    >>> ord_0 = Functional.coordinate(FlagValuation(1, Curve(parse_poly(5, 't'))), 1, 2, 1)
    >>> ord_1 = Functional.coordinate(FlagValuation(1, Curve(parse_poly(5, 't - 1'))), 1, 2, 1)
    >>> violates(ord_0, ord_1, parse_rat(5, 't')), violates(ord_0, ord_0, parse_rat(5, 't'))
    (True, False)
    """
    y = x.one_minus()
    if y.is_zero():
        return False
    return evaluate(s, x) * evaluate(t, y) != evaluate(s, y) * evaluate(t, x)


def _check_levels(s: Functional, t: Functional) -> None:
    if (s.ell, s.level) != (t.ell, t.level):
        raise LevelError('C-pairs need a common level, got Z/{}^{} and Z/{}^{}'.format(s.ell, s.level, t.ell, t.level))


def candidate_flags(s: Functional, t: Functional, registered: Sequence[FlagValuation] = ()) -> List[FlagValuation]:
    """Registered flags, term flags and their coarsenings, coarsest first."""
    found = set()
    for flag in list(registered) + list(s.terms) + list(t.terms):
        if not flag.is_trivial():
            found.update(flag.prefixes())
    return sorted(found, key=sort_key)


def cpair_certify(s: Functional, t: Functional, registered: Sequence[FlagValuation] = ()) -> Optional[Certificate]:
    """
    >>> from funcfield import Curve, parse_poly
    >>> from groundfield import GFElem
    >>> line = FlagValuation(2, Curve(parse_poly(5, 'u')))
    >>> full = FlagValuation(2, line.curve, GFElem.from_int(5, 0))
    >>> str(cpair_certify(Functional.coordinate(full, 1, 2, 1), Functional.coordinate(full, 2, 2, 1)))
    'residue flag[(u)]'
    """
    _check_levels(s, t)
    if module_rank([s, t]) <= 1:
        variables = next(iter(list(s.terms) + list(t.terms) + list(registered)), None)
        return Certificate(FlagValuation.trivial(variables.variables if variables is not None else 2), 'cyclic')
    for v in candidate_flags(s, t, registered):
        if not is_structurally_decomposed(s, v) or not is_structurally_decomposed(t, v):
            continue
        if module_rank([residue_image(s, v), residue_image(t, v)]) <= 1:
            return Certificate(v, 'residue')
    return None


def cpair_falsify(s: Functional, t: Functional, space: SearchSpace, threads: int = 1) -> Optional[BivRat]:
    """The first element of the search stream breaking the identity, if any."""
    _check_levels(s, t)
    if s.is_zero() or t.is_zero() or s == t:
        return None
    if threads <= 1:
        for x in space.elements():
            if violates(s, t, x):
                return x
        return None
    stream = space.elements()
    with ThreadPoolExecutor(max_workers=threads) as executor:
        while True:
            chunk = list(islice(stream, FALSIFY_CHUNK * threads))
            if not chunk:
                return None
            # map keeps input order, so the reported witness does not depend on scheduling
            for x, bad in zip(chunk, executor.map(lambda y: violates(s, t, y), chunk)):
                if bad:
                    return x


class CPairEngine():
    """
    Certify first, then falsify, then give up. Verdicts are stored under the
    unordered pair of functionals.
    """
    def __init__(self, space: SearchSpace, registered: Sequence[FlagValuation] = (), threads: int = 1,
                 audit: bool = False):
        self.space = space
        self.registered = list(registered)
        self.threads = threads
        self.audit = audit
        self._cache: Dict[Tuple[tuple, tuple], CVerdict] = {}
        self._lock = threading.Lock()

    @staticmethod
    def _pair_key(s: Functional, t: Functional) -> Tuple[tuple, tuple]:
        a, b = s.key(), t.key()
        return (a, b) if a <= b else (b, a)

    def verdict(self, s: Functional, t: Functional) -> CVerdict:
        _check_levels(s, t)
        key = self._pair_key(s, t)
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached
        # Order the pair canonically so that cpair(s, t) and cpair(t, s) compute the same thing
        if (s.key(), t.key()) != key:
            s, t = t, s
        result = self._decide(s, t)
        with self._lock:
            return self._cache.setdefault(key, result)

    def _decide(self, s: Functional, t: Functional) -> CVerdict:
        certificate = cpair_certify(s, t, self.registered)
        if certificate is not None and not self.audit:
            return CVerdict(TriBool.yes(certificate.flag), certificate=certificate)
        witness = cpair_falsify(s, t, self.space, self.threads)
        if certificate is not None and witness is not None:
            raise SoundnessError('Pair ({}, {}) certified by {} and falsified by x = {}'.format(
                s, t, certificate, witness))
        if certificate is not None:
            return CVerdict(TriBool.yes(certificate.flag), certificate=certificate)
        if witness is not None:
            return CVerdict(TriBool.no(witness), witness=witness)
        return CVerdict(TriBool.unknown([(s, t)]))

    def is_cpair(self, s: Functional, t: Functional) -> TriBool:
        return self.verdict(s, t).value

    def matrix(self, functionals: Sequence[Functional]) -> Dict[Tuple[int, int], CVerdict]:
        """Verdicts for all index pairs i <= j, computed on the thread pool."""
        pairs = [(i, j) for i in range(len(functionals)) for j in range(i, len(functionals))]
        if self.threads <= 1:
            verdicts: Iterator[CVerdict] = (self.verdict(functionals[i], functionals[j]) for i, j in pairs)
            return dict(zip(pairs, verdicts))
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            results = executor.map(lambda pair: self.verdict(functionals[pair[0]], functionals[pair[1]]), pairs)
            return dict(zip(pairs, results))

    def cache_size(self) -> int:
        with self._lock:
            return len(self._cache)


def audit_pair(s: Functional, t: Functional, space: SearchSpace,
               registered: Sequence[FlagValuation] = ()) -> Tuple[Optional[Certificate], Optional[BivRat]]:
    """Run both halves of the engine; at most one of them may succeed."""
    certificate = cpair_certify(s, t, registered)
    witness = cpair_falsify(s, t, space)
    if certificate is not None and witness is not None:
        raise SoundnessError('Pair ({}, {}) certified by {} and falsified by x = {}'.format(s, t, certificate, witness))
    return certificate, witness
