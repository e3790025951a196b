import glob
import os

import pytest

from entities.report import TaskResult
from funcfield import parse_rat
from run_configs import SearchBudget
from run_scenario import ScenarioError, Workspace, describe, load_scenario, main, matches
from sexpr import parse

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'scenarios')

KT_SCENARIO = '''
(scenario "kt_small"
 (config (p 5) (ell 2) (budget small))
 (field t)
 (universe kt (curated kt))
 (task cpair (cpair kt ord_0 ord_1) (expect no))
 (task n2 (constants N 2 2) (expect 185))
)
'''

FLAG_SCENARIO = '''
(scenario "flags_small"
 (config (p 5) (ell 2) (budget small))
 (curve cu "u")
 (flag v (curve cu))
 (flag v0 (curve cu) (point "0"))
 (flag v1 (curve cu) (point "1"))
 (functional ord_u (level 1) (term v 1 1))
 (functional a (level 1) (term v0 2 1))
 (functional b (level 1) (term v1 2 1))
 (task rank (module_rank (ord_u a)) (expect 2))
 (task residue (cpair ord_u a) (expect yes))
 (task points (cpair a b) (expect no))
)
'''


def write_scenario(tmp_path, text: str) -> str:  # type: ignore[no-untyped-def]
    scenario_path = tmp_path / 'scenario.scn'
    scenario_path.write_text(text)
    return str(scenario_path)


@pytest.mark.parametrize('scenario_path', sorted(glob.glob(os.path.join(SCENARIO_DIR, '*.scn'))))
def test_bundled_scenarios(scenario_path: str, tmp_path) -> None:  # type: ignore[no-untyped-def]
    report_path = str(tmp_path / 'report.txt')
    assert main(['--scenario', scenario_path, '--report', report_path]) == 0
    with open(report_path) as f:
        text = f.read()
    assert 'mismatches=0' in text
    assert 'MISMATCH' not in text


def test_report_printed(tmp_path, capsys) -> None:  # type: ignore[no-untyped-def]
    assert main(['--scenario', write_scenario(tmp_path, KT_SCENARIO)]) == 0
    out = capsys.readouterr().out
    assert '; report kt_small' in out
    assert 'budget=small' in out
    assert 'Done, 2 tasks, 0 mismatches' in out


def test_report_file(tmp_path) -> None:  # type: ignore[no-untyped-def]
    report_path = str(tmp_path / 'out' / 'report.txt')
    assert main(['--scenario', write_scenario(tmp_path, FLAG_SCENARIO), '--report', report_path, '--seed', '4']) == 0
    with open(report_path) as f:
        lines = f.read().splitlines()
    assert lines[0] == '; report flags_small'
    assert lines[lines.index('[trailer]') + 1:] == [
        'budget=small', 'mismatches=0', 'scenario=flags_small', 'seed=4', 'tasks=3', 'unknowns=0',
    ]


def test_threads_do_not_change_report(tmp_path) -> None:  # type: ignore[no-untyped-def]
    scenario_path = write_scenario(tmp_path, FLAG_SCENARIO)
    texts = []
    for threads in ('1', '3'):
        report_path = str(tmp_path / 'report{}.txt'.format(threads))
        assert main(['--scenario', scenario_path, '--threads', threads, '--report', report_path]) == 0
        with open(report_path) as f:
            texts.append(f.read())
    assert texts[0] == texts[1]


def test_mismatch_exit_code(tmp_path) -> None:  # type: ignore[no-untyped-def]
    text = KT_SCENARIO.replace('(expect 185)', '(expect 1459)')
    report_path = str(tmp_path / 'report.txt')
    assert main(['--scenario', write_scenario(tmp_path, text), '--report', report_path]) == 1
    with open(report_path) as f:
        report = f.read()
    assert 'MISMATCH expected 1459' in report
    assert 'mismatches=1' in report


@pytest.mark.parametrize('text', [
    KT_SCENARIO.replace('(p 5)', '(p 4)'),
    KT_SCENARIO.replace('(p 5)', '(p 2)'),
    KT_SCENARIO.replace('ord_1)', 'ord_9)'),
    KT_SCENARIO.replace('(curated kt)', '(curated u7)'),
    KT_SCENARIO.replace('(constants N 2 2)', '(constants Q 2 2)'),
    KT_SCENARIO.replace('(constants N 2 2)', '(frobnicate)'),
    KT_SCENARIO[:-3],
    FLAG_SCENARIO.replace('(term v0 2 1)', '(term w 2 1)'),
    FLAG_SCENARIO.replace('(curve cu "u")', '(curve cu "u + (")'),
])
def test_errors_exit_code(text: str, tmp_path, capsys) -> None:  # type: ignore[no-untyped-def]
    assert main(['--scenario', write_scenario(tmp_path, text)]) == 2
    assert 'Error: ' in capsys.readouterr().out


def test_missing_file(tmp_path, capsys) -> None:  # type: ignore[no-untyped-def]
    assert main(['--scenario', str(tmp_path / 'missing.scn')]) == 2
    assert 'Error: ' in capsys.readouterr().out


def test_invalid_budget_argument(tmp_path) -> None:  # type: ignore[no-untyped-def]
    assert main(['--scenario', write_scenario(tmp_path, KT_SCENARIO), '--budget', 'huge']) == 2


def test_budget_override(tmp_path, capsys) -> None:  # type: ignore[no-untyped-def]
    assert main(['--scenario', write_scenario(tmp_path, KT_SCENARIO), '--budget', 'default']) == 0
    assert 'budget=default' in capsys.readouterr().out


def test_load_scenario_needs_one_root(tmp_path) -> None:  # type: ignore[no-untyped-def]
    with pytest.raises(ScenarioError):
        load_scenario(write_scenario(tmp_path, KT_SCENARIO + KT_SCENARIO))


def test_workspace_duplicate_ids(tmp_path) -> None:  # type: ignore[no-untyped-def]
    text = FLAG_SCENARIO.replace('(flag v1 (curve cu)', '(flag v0 (curve cu)')
    with pytest.raises(ScenarioError):
        Workspace(load_scenario(write_scenario(tmp_path, text)))


def test_workspace_budget(tmp_path) -> None:  # type: ignore[no-untyped-def]
    scenario = load_scenario(write_scenario(tmp_path, FLAG_SCENARIO))
    assert Workspace(scenario).config.budget == SearchBudget.parse('small')
    assert Workspace(scenario, SearchBudget.parse('large')).config.budget == SearchBudget.parse('large')


def test_describe() -> None:
    assert describe(None) == ''
    assert describe(parse_rat(5, 't')) == 'x = t'
    assert describe((parse_rat(5, 't'), 'a')) == '(x = t, a)'
    assert describe('flag[(u)]') == 'flag[(u)]'


def test_matches() -> None:
    expect = parse('(e decisive (0 ord_u) "1*flag[(t)]#1" yes)')[0]
    assert matches(expect[1], TaskResult('t', 'cpair', 'yes'))
    assert not matches(expect[1], TaskResult('t', 'cpair', 'unknown'))
    assert matches(expect[2], TaskResult('t', 'def_d', '(ord_u 0)', members=['ord_u', '0']))
    assert not matches(expect[2], TaskResult('t', 'def_d', '(0)', members=['0']))
    assert matches(expect[3], TaskResult('t', 'residue', '1*flag[(t)]#1'))
    assert matches(expect[4], TaskResult('t', 'cpair', 'yes'))
    assert not matches(expect[4], TaskResult('t', 'cpair', 'no'))
