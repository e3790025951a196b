from typing import List, Optional, Sequence, Tuple

from sexpr import Item, SList, SString, expect_atom, expect_int, expect_list, expect_string, format_item

from .common import AssertIrreducible, AtomList, Budget, IntValue, Level, Point, StringValue
from .helper import block, indent_entities


class Config():
    def __init__(self, p: int, ell: int, n: int = 1, big_n: int = 1, budget: str = 'default'):
        self.p = p
        self.ell = ell
        self.n = n
        self.big_n = big_n
        self.budget = budget

    def __str__(self) -> str:
        return '(config {} {} {} {} {})'.format(IntValue('p', self.p), IntValue('ell', self.ell),
                                                IntValue('n', self.n), IntValue('big_n', self.big_n),
                                                Budget(self.budget))

    @staticmethod
    def from_node(node: SList) -> 'Config':
        values = {}
        for item in node[1:]:
            entry = expect_list(item, node)
            if len(entry) != 2:
                raise entry.error('Expected (key value)')
            values[entry.head] = entry[1]
        for key in values:
            if key not in ('p', 'ell', 'n', 'big_n', 'budget'):
                raise node.error('Unknown config key "{}"'.format(key))
        if 'p' not in values or 'ell' not in values:
            raise node.error('Config needs p and ell')
        n = expect_int(values['n'], node) if 'n' in values else 1
        return Config(
            p=expect_int(values['p'], node),
            ell=expect_int(values['ell'], node),
            n=n,
            big_n=expect_int(values['big_n'], node) if 'big_n' in values else n,
            budget=expect_atom(values['budget'], node) if 'budget' in values else 'default',
        )


class CurveDecl():
    def __init__(self, id: str, poly: str, assert_irreducible: bool = False):
        self.id = id
        self.poly = poly
        self.assert_irreducible = assert_irreducible

    def __str__(self) -> str:
        ret = '(curve {} {}'.format(self.id, format_item(SString(self.poly)))
        if self.assert_irreducible:
            ret += ' {}'.format(AssertIrreducible(True))
        return ret + ')'

    @staticmethod
    def from_node(node: SList) -> 'CurveDecl':
        if len(node) < 3:
            raise node.error('Expected (curve <id> "<poly>")')
        asserted = node.child('assert_irreducible')
        return CurveDecl(expect_atom(node[1], node), expect_string(node[2], node),
                         asserted is not None and expect_atom(asserted[1], asserted) == 'true')


class FlagDecl():
    """A flag carried by a declared curve (by id) or an inline polynomial."""
    def __init__(self, id: str, curve: str, inline: bool = False, point: Optional[str] = None):
        self.id = id
        self.curve = curve
        self.inline = inline
        self.point = point

    def __str__(self) -> str:
        curve = StringValue('curve', self.curve) if self.inline else '(curve {})'.format(self.curve)
        ret = '(flag {} {}'.format(self.id, curve)
        if self.point is not None:
            ret += ' {}'.format(Point(self.point))
        return ret + ')'

    @staticmethod
    def from_node(node: SList) -> 'FlagDecl':
        curve = node.child('curve')
        if len(node) < 3 or curve is None or len(curve) != 2:
            raise node.error('Expected (flag <id> (curve ...))')
        point = node.child('point')
        return FlagDecl(expect_atom(node[1], node), str(curve[1]), isinstance(curve[1], SString),
                        expect_string(point[1], point) if point is not None else None)


class FunctionalDecl():
    def __init__(self, id: str, level: int, terms: Sequence[Tuple[str, int, int]]):
        self.id = id
        self.level = level
        self.terms = list(terms)

    def __str__(self) -> str:
        terms = ['(term {} {} {})'.format(*term) for term in self.terms]
        return block('functional {} {}'.format(self.id, Level(self.level)), terms)

    @staticmethod
    def from_node(node: SList) -> 'FunctionalDecl':
        level = node.child('level')
        if len(node) < 2 or level is None:
            raise node.error('Expected (functional <id> (level <m>) ...)')
        terms = []
        for term in node.children('term'):
            if len(term) != 4:
                raise term.error('Expected (term <flag-id> <coordinate> <coefficient>)')
            terms.append((expect_atom(term[1], term), expect_int(term[2], term), expect_int(term[3], term)))
        return FunctionalDecl(expect_atom(node[1], node), expect_int(level[1], level), terms)


class UniverseDecl():
    """Either a curated universe by name or explicit sorts with lifts."""
    def __init__(self, id: str, small: Sequence[str] = (), big: Sequence[str] = (),
                 lifts: Sequence[Tuple[str, str]] = (), curated: Optional[str] = None):
        self.id = id
        self.small = list(small)
        self.big = list(big)
        self.lifts = list(lifts)
        self.curated = curated

    def __str__(self) -> str:
        if self.curated is not None:
            return '(universe {} (curated {}))'.format(self.id, self.curated)
        children = [AtomList('small', self.small)]
        if self.big:
            children.append(AtomList('big', self.big))
        children += ['(lift {} {})'.format(a, b) for a, b in self.lifts]
        return block('universe {}'.format(self.id), children)

    @staticmethod
    def from_node(node: SList) -> 'UniverseDecl':
        if len(node) < 2:
            raise node.error('Expected (universe <id> ...)')
        id = expect_atom(node[1], node)
        curated = node.child('curated')
        if curated is not None:
            return UniverseDecl(id, curated=expect_atom(curated[1], curated))
        small = node.child('small')
        if small is None:
            raise node.error('Universe {} needs (small ...) or (curated ...)'.format(id))
        big = node.child('big')
        lifts = []
        for lift in node.children('lift'):
            if len(lift) != 3:
                raise lift.error('Expected (lift <small-id> <big-id>)')
            lifts.append((expect_atom(lift[1], lift), expect_atom(lift[2], lift)))
        return UniverseDecl(id, [expect_atom(x, small) for x in small[1:]],
                            [expect_atom(x, big) for x in big[1:]] if big is not None else [], lifts)


class TaskDecl():
    def __init__(self, id: str, call: SList, expect: Optional[Item] = None):
        self.id = id
        self.call = call
        self.expect = expect

    @property
    def operation(self) -> str:
        return self.call.head

    @property
    def args(self) -> List[Item]:
        return list(self.call[1:])

    def __str__(self) -> str:
        ret = '(task {} {}'.format(self.id, format_item(self.call))
        if self.expect is not None:
            ret += ' (expect {})'.format(format_item(self.expect))
        return ret + ')'

    @staticmethod
    def from_node(node: SList) -> 'TaskDecl':
        if len(node) < 3:
            raise node.error('Expected (task <id> (<operation> ...))')
        expect = node.child('expect')
        if expect is not None and len(expect) != 2:
            raise expect.error('Expected (expect <value>)')
        return TaskDecl(expect_atom(node[1], node), expect_list(node[2], node),
                        expect[1] if expect is not None else None)


class Scenario():
    def __init__(self, name: str, config: Config, variables: Sequence[str] = ('t', 'u')):
        self.name = name
        self.config = config
        self.variables = list(variables)
        self.curves: List[CurveDecl] = []
        self.flags: List[FlagDecl] = []
        self.functionals: List[FunctionalDecl] = []
        self.universes: List[UniverseDecl] = []
        self.tasks: List[TaskDecl] = []

    def __str__(self) -> str:
        ret = '(scenario "{}"\n'.format(self.name) +\
            ' {}\n'.format(self.config) +\
            ' {}\n'.format(AtomList('field', self.variables))
        ret += indent_entities(self.curves)
        ret += indent_entities(self.flags)
        ret += indent_entities(self.functionals)
        ret += indent_entities(self.universes)
        ret += indent_entities(self.tasks)
        ret += ')'
        return ret

    @staticmethod
    def from_node(node: SList) -> 'Scenario':
        if node.head != 'scenario' or len(node) < 3:
            raise node.error('Expected (scenario "<name>" ...)')
        config = node.child('config')
        if config is None:
            raise node.error('Scenario needs a (config ...) entry')
        field = node.child('field')
        variables = [expect_atom(x, field) for x in field[1:]] if field is not None else ['t', 'u']
        if variables not in (['t'], ['t', 'u']):
            raise node.error('The field must be (field t) or (field t u)')
        scenario = Scenario(expect_string(node[1], node), Config.from_node(config), variables)
        readers = {
            'curve': lambda item: scenario.curves.append(CurveDecl.from_node(item)),
            'flag': lambda item: scenario.flags.append(FlagDecl.from_node(item)),
            'functional': lambda item: scenario.functionals.append(FunctionalDecl.from_node(item)),
            'universe': lambda item: scenario.universes.append(UniverseDecl.from_node(item)),
            'task': lambda item: scenario.tasks.append(TaskDecl.from_node(item)),
        }
        for item in node[2:]:
            entry = expect_list(item, node)
            if entry.head in ('config', 'field'):
                continue
            if entry.head not in readers:
                raise entry.error('Unknown declaration "{}"'.format(entry.head))
            readers[entry.head](entry)
        return scenario
