import pytest

from entities.common import AssertIrreducible, AtomList, Budget, IntValue, Level, Point, StringValue
from entities.helper import block
from entities.report import COLUMNS, Report, TaskResult
from entities.scenario import Config, CurveDecl, FlagDecl, FunctionalDecl, Scenario, TaskDecl, UniverseDecl
from sexpr import ParseError, SList, SString, parse


def test_values() -> None:
    assert str(IntValue('p', 5)) == '(p 5)'
    assert str(StringValue('curve', 'u - "t"')) == '(curve "u - \\"t\\"")'
    assert str(Budget('small')) == '(budget small)'
    assert str(Level(3)) == '(level 3)'
    assert str(Point('z2')) == '(point "z2")'
    assert str(AssertIrreducible(True)) == '(assert_irreducible true)'
    assert str(AtomList('small', ['0', 'ord_u'])) == '(small 0 ord_u)'


def test_config() -> None:
    config = Config(5, 2)
    assert str(config) == '(config (p 5) (ell 2) (n 1) (big_n 1) (budget default))'
    parsed = Config.from_node(parse('(config (ell 3) (p 7) (n 2) (budget large))')[0])
    assert (parsed.p, parsed.ell, parsed.n, parsed.big_n, parsed.budget) == (7, 3, 2, 2, 'large')


@pytest.mark.parametrize('text', [
    '(config (p 5))',
    '(config (p 5) (ell 2) (depth 3))',
    '(config (p five) (ell 2))',
    '(config (p 5 6) (ell 2))',
])
def test_config_invalid(text: str) -> None:
    with pytest.raises(ParseError):
        Config.from_node(parse(text)[0])


def test_curve_decl() -> None:
    assert str(CurveDecl('cu', 'u')) == '(curve cu "u")'
    curve = CurveDecl.from_node(parse('(curve c3 "u - t^3" (assert_irreducible true))')[0])
    assert (curve.id, curve.poly, curve.assert_irreducible) == ('c3', 'u - t^3', True)
    assert str(curve) == '(curve c3 "u - t^3" (assert_irreducible true))'


def test_flag_decl() -> None:
    inline = FlagDecl.from_node(parse('(flag vt (curve "t"))')[0])
    assert inline.inline and inline.curve == 't' and inline.point is None
    assert str(inline) == '(flag vt (curve "t"))'
    by_id = FlagDecl.from_node(parse('(flag v0 (curve cu) (point "0"))')[0])
    assert not by_id.inline and by_id.point == '0'
    assert str(by_id) == '(flag v0 (curve cu) (point "0"))'
    with pytest.raises(ParseError):
        FlagDecl.from_node(parse('(flag v0 (point "0"))')[0])


def test_functional_decl() -> None:
    functional = FunctionalDecl('s', 1, [('v0', 1, 1), ('v0', 2, 3)])
    assert str(functional) == '(functional s (level 1)\n (term v0 1 1)\n (term v0 2 3)\n)'
    parsed = FunctionalDecl.from_node(parse(str(functional))[0])
    assert parsed.terms == [('v0', 1, 1), ('v0', 2, 3)]
    with pytest.raises(ParseError):
        FunctionalDecl.from_node(parse('(functional s (term v0 1 1))')[0])
    with pytest.raises(ParseError):
        FunctionalDecl.from_node(parse('(functional s (level 1) (term v0 1))')[0])


def test_universe_decl() -> None:
    assert str(UniverseDecl('u0', curated='u0')) == '(universe u0 (curated u0))'
    declared = UniverseDecl.from_node(parse('(universe U (small 0 s) (big S) (lift s S))')[0])
    assert declared.small == ['0', 's']
    assert declared.big == ['S']
    assert declared.lifts == [('s', 'S')]
    assert str(declared) == '(universe U\n (small 0 s)\n (big S)\n (lift s S)\n)'
    with pytest.raises(ParseError):
        UniverseDecl.from_node(parse('(universe U (big S))')[0])


def test_task_decl() -> None:
    task = TaskDecl.from_node(parse('(task t1 (cpair U a b) (expect no))')[0])
    assert task.operation == 'cpair'
    assert task.args == ['U', 'a', 'b']
    assert task.expect == 'no'
    assert str(task) == '(task t1 (cpair U a b) (expect no))'
    assert TaskDecl.from_node(parse('(task t2 (trdeg U))')[0]).expect is None
    with pytest.raises(ParseError):
        TaskDecl.from_node(parse('(task t3 (trdeg U) (expect))')[0])


def test_scenario() -> None:
    text = '\n'.join([
        '(scenario "demo"',
        ' (config (p 5) (ell 2))',
        ' (curve cu "u")',
        ' (flag v (curve cu))',
        ' (functional ord_u (level 1) (term v 1 1))',
        ' (universe U (small ord_u))',
        ' (task rank (module_rank (ord_u)) (expect 1))',
        ')',
    ])
    scenario = Scenario.from_node(parse(text)[0])
    assert scenario.name == 'demo'
    assert scenario.variables == ['t', 'u']
    assert [len(scenario.curves), len(scenario.flags), len(scenario.functionals), len(scenario.universes),
            len(scenario.tasks)] == [1, 1, 1, 1, 1]
    assert str(scenario).startswith('(scenario "demo"\n (config (p 5) (ell 2) (n 1) (big_n 1) (budget default))\n'
                                    ' (field t u)\n (curve cu "u")\n')
    reparsed = Scenario.from_node(parse(str(scenario))[0])
    assert str(reparsed) == str(scenario)


@pytest.mark.parametrize('text', [
    '(scenario "x" (ell 2))',
    '(scenario "x" (config (p 5) (ell 2)) (field t v))',
    '(scenario "x" (config (p 5) (ell 2)) (widget w))',
    '(scenario x (config (p 5) (ell 2)))',
    '(other "x" (config (p 5) (ell 2)))',
])
def test_scenario_invalid(text: str) -> None:
    with pytest.raises(ParseError):
        Scenario.from_node(parse(text)[0])


def test_block() -> None:
    assert block('universe u', []) == '(universe u\n)'


def test_task_result() -> None:
    result = TaskResult('t1', 'cpair', 'yes', 'certified by residue flag[(u)]')
    assert str(result) == COLUMNS.format('t1', 'cpair', 'yes', 'certified by residue flag[(u)]')
    result.mismatch = 'no'
    assert 'MISMATCH expected no; certified by' in str(result)
    with_lines = TaskResult('m', 'cpair_matrix', 'decisive', '', ['a b yes'])
    assert str(with_lines).splitlines()[1] == '  a b yes'
    assert not TaskResult('u', 'cpair', 'unknown').decisive


def test_report() -> None:
    report = Report('demo')
    report.add(TaskResult('t1', 'trdeg', '2', 'witness (ord_u a) blocked=0'))
    unknown = TaskResult('t2', 'cpair', 'unknown', 'blocked by (a, b)')
    unknown.mismatch = 'yes'
    report.add(unknown)
    report.trailer['budget'] = 'default'
    text = str(report)
    lines = text.splitlines()
    assert lines[0] == '; report demo'
    assert lines[1] == COLUMNS.format('task', 'operation', 'verdict', 'detail').rstrip()
    assert lines[4:] == ['[trailer]', 'budget=default', 'mismatches=1', 'scenario=demo', 'tasks=2', 'unknowns=1']
    assert text.endswith('\n')
    assert (report.mismatches, report.unknowns) == (1, 1)


def test_slist_error_position() -> None:
    node = SList(['x', SString('y')], (3, 4))
    error = node.error('Broken')
    assert (error.line, error.column) == (3, 4)
    assert str(error) == 'Broken at line 3, column 4'
