"""
S-expression value entities shared by scenario files and reports
"""

from typing import List, Sequence

from common import escape_string


class BoolValue():
    """Helper class to represent a single named boolean value"""
    def __init__(self, name: str, value: bool):
        self.name = name
        self.value = str(value).lower()

    def __str__(self) -> str:
        return '({} {})'.format(self.name, self.value)


class StringValue():
    """Helper class to represent a single named string value"""
    def __init__(self, name: str, value: str):
        self.name = name
        self.value = value

    def __str__(self) -> str:
        return '({} "{}")'.format(self.name, escape_string(self.value))


class IntValue():
    """Helper class to represent a single named integer value"""
    def __init__(self, name: str, value: int):
        self.name = name
        self.value = value

    def __str__(self) -> str:
        return '({} {})'.format(self.name, self.value)


class AtomValue():
    """Helper class to represent a single named bare symbol"""
    def __init__(self, name: str, value: str):
        self.name = name
        self.value = value

    def __str__(self) -> str:
        return '({} {})'.format(self.name, self.value)


class AtomList():
    """A named list of bare symbols, e.g. `(small 0 ord_u a)`"""
    def __init__(self, name: str, values: Sequence[str]):
        self.name = name
        self.values: List[str] = list(values)

    def __str__(self) -> str:
        return '({})'.format(' '.join([self.name] + self.values))


class Budget(AtomValue):
    def __init__(self, budget: str):
        super().__init__('budget', budget)


class Level(IntValue):
    def __init__(self, level: int):
        super().__init__('level', level)


class Point(StringValue):
    def __init__(self, point: str):
        super().__init__('point', point)


class AssertIrreducible(BoolValue):
    def __init__(self, asserted: bool):
        super().__init__('assert_irreducible', asserted)
