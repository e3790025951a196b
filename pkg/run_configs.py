"""
Configuration file, containing the search budget presets and the run
configuration shared by all modules.

"""

from typing import Dict, Optional

from coeff import check_prime, const_R


class SearchBudget:
    """
    Bounds of the test element stream used by every bounded search
    (C-pair falsifier, membership witnesses, H-set probes).
    """
    def __init__(self,
                 max_factors: int,
                 max_exponent: int,
                 max_constants: int,
                 name: Optional[str] = None,
                 ):
        if max_factors < 1 or max_exponent < 1 or max_constants < 1:
            raise ValueError('Budget bounds must be positive, got {}:{}:{}'.format(
                max_factors, max_exponent, max_constants))
        self.max_factors = max_factors
        self.max_exponent = max_exponent
        self.max_constants = max_constants
        self.name = name or '{}:{}:{}'.format(max_factors, max_exponent, max_constants)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SearchBudget):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def key(self) -> tuple:
        return (self.max_factors, self.max_exponent, self.max_constants)

    def __str__(self) -> str:
        return self.name

    @staticmethod
    def parse(text: str) -> 'SearchBudget':
        """
        Resolve a preset name or a custom `factors:exponent:constants` triple.

        >>> SearchBudget.parse('2:1:4').key()
        (2, 1, 4)
        >>> SearchBudget.parse('small').key()
        (1, 1, 2)
        """
        if text in BUDGET_PRESETS:
            return BUDGET_PRESETS[text]
        parts = text.split(':')
        if len(parts) != 3 or not all(part.isdigit() for part in parts):
            raise ValueError('Unknown budget "{}", use a preset ({}) or factors:exponent:constants'.format(
                text, ', '.join(sorted(BUDGET_PRESETS))))
        return SearchBudget(int(parts[0]), int(parts[1]), int(parts[2]))


BUDGET_PRESETS: Dict[str, SearchBudget] = {
    'small': SearchBudget(1, 1, 2, name='small'),
    'default': SearchBudget(2, 2, 8, name='default'),
    'large': SearchBudget(2, 2, 200, name='large'),
}


class RunConfig:
    def __init__(self,
                 p: int,
                 ell: int,
                 n: int = 1,
                 big_n: int = 1,
                 budget: SearchBudget = BUDGET_PRESETS['default'],
                 threads: int = 1,
                 seed: int = 0,
                 ):
        check_prime(p, 'p')
        check_prime(ell, 'ell')
        if p == ell:
            raise ValueError('The characteristic p must differ from ell, both are {}'.format(p))
        if n < 1 or big_n < n:
            raise ValueError('Levels must satisfy 1 <= n <= N, got n={}, N={}'.format(n, big_n))
        # N >= R(n) only forces something for n >= 2, where R(n) is astronomically large
        if big_n < const_R(n, ell):
            raise ValueError('N={} is below R({}) = {}'.format(big_n, n, const_R(n, ell)))
        if threads < 1:
            raise ValueError('Thread count must be positive, got {}'.format(threads))
        self.p = p
        self.ell = ell
        self.n = n
        self.big_n = big_n
        self.budget = budget
        self.threads = threads
        self.seed = seed
