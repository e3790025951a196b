"""
Run reports: one fixed-width line per task verdict, optional indented
detail lines, and a `[trailer]` section of key=value lines.
"""
from typing import Dict, List, Optional, Sequence

from common import indent

COLUMNS = '{:<20} {:<22} {:<10} {}'


class TaskResult():
    def __init__(self, task: str, operation: str, verdict: str, detail: str = '',
                 lines: Sequence[str] = (), members: Optional[Sequence[str]] = None):
        self.task = task
        self.operation = operation
        self.verdict = verdict
        self.detail = detail
        # Per-item lines such as verdict matrix rows
        self.lines = list(lines)
        # Names of a returned subset, compared as a set against expectations
        self.members = list(members) if members is not None else None
        self.mismatch: Optional[str] = None
        self.decisive = verdict != 'unknown'

    def __str__(self) -> str:
        detail = self.detail
        if self.mismatch is not None:
            detail = 'MISMATCH expected {}; {}'.format(self.mismatch, detail)
        ret = COLUMNS.format(self.task, self.operation, self.verdict, detail).rstrip()
        for line in indent(2, self.lines):
            ret += '\n' + line
        return ret


class Report():
    def __init__(self, scenario: str):
        self.scenario = scenario
        self.results: List[TaskResult] = []
        self.trailer: Dict[str, str] = {}

    def add(self, result: TaskResult) -> None:
        self.results.append(result)

    @property
    def mismatches(self) -> int:
        return len([result for result in self.results if result.mismatch is not None])

    @property
    def unknowns(self) -> int:
        return len([result for result in self.results if result.verdict == 'unknown'])

    def __str__(self) -> str:
        ret = '; report {}\n'.format(self.scenario)
        ret += COLUMNS.format('task', 'operation', 'verdict', 'detail').rstrip() + '\n'
        ret += ''.join('{}\n'.format(result) for result in self.results)
        ret += '[trailer]\n'
        trailer = dict(self.trailer)
        trailer.setdefault('scenario', self.scenario)
        trailer['tasks'] = str(len(self.results))
        trailer['mismatches'] = str(self.mismatches)
        trailer['unknowns'] = str(self.unknowns)
        ret += ''.join('{}={}\n'.format(key, trailer[key]) for key in sorted(trailer))
        return ret
