"""
Run a scenario file and write its report

"""
import argparse
import sys

from typing import Callable, Dict, List, Optional, Sequence

from coeff import cancellation_sweep, const_M, const_N, const_R
from common import warn, write_text_file
from cpairs import CPairEngine
from entities.report import Report, TaskResult
from entities.scenario import Scenario, TaskDecl, UniverseDecl
from funcfield import BivRat, Curve, default_pool, parse_constant, parse_poly, parse_rat
from functionals import (Functional, SearchSpace, TriBool, in_decomposition, in_inertia, module_rank,
                         residue_functional, submodule_member)
from modelchecker import (Definable, Universe, associated_valuation, c_center, c_centralizer, common_inertia_predicate,
                          decomposition_from_cpair, def_D, def_I, h_membership_probe, quasi_divisorial_detect,
                          supremum_valuation, trdeg_estimate, valuative_comparability, visible_inertia_predicate)
from properties import check_laws
from run_configs import RunConfig, SearchBudget
from sexpr import Item, SList, SString, expect_atom, expect_int, expect_list, expect_string, format_item, parse
from universes import CURATED
from valuations import FlagValuation, classify_quasi_divisorial, is_visible, is_unit

# Operations whose result is a subset of a universe; usable as nested arguments
SET_OPERATIONS = ('def_d', 'def_i', 'centralizer', 'center')


class ScenarioError(ValueError):
    """Unresolved references or an invalid scenario configuration."""


def describe(witness: object) -> str:
    if witness is None:
        return ''
    if isinstance(witness, BivRat):
        return 'x = {}'.format(witness)
    if isinstance(witness, tuple):
        return '({})'.format(', '.join(describe(part) if isinstance(part, BivRat) else str(part) for part in witness))
    return str(witness)


def tri_result(task: TaskDecl, value: TriBool) -> TaskResult:
    if value.is_unknown():
        blockers = ' '.join(sorted({str(blocker) for blocker in value.blockers}))
        return TaskResult(task.id, task.operation, 'unknown', 'blocked by {}'.format(blockers) if blockers else '')
    return TaskResult(task.id, task.operation, str(value), describe(value.witness))


class Workspace():
    """A scenario with every declaration resolved."""
    def __init__(self, scenario: Scenario, budget: Optional[SearchBudget] = None, threads: int = 1, seed: int = 0):
        config = scenario.config
        try:
            self.config = RunConfig(config.p, config.ell, config.n, config.big_n,
                                    budget or SearchBudget.parse(config.budget), threads, seed)
        except ValueError as error:
            raise ScenarioError('Invalid configuration: {}'.format(error)) from error
        self.scenario = scenario
        self.variables = len(scenario.variables)
        p, ell = self.config.p, self.config.ell

        self.curves: Dict[str, Curve] = {}
        for curve in scenario.curves:
            self._check_new(curve.id, self.curves)
            self.curves[curve.id] = Curve(parse_poly(p, curve.poly), curve.assert_irreducible)
        self.flags: Dict[str, FlagValuation] = {}
        for flag in scenario.flags:
            self._check_new(flag.id, self.flags)
            carrier = Curve(parse_poly(p, flag.curve)) if flag.inline else self._lookup(self.curves, flag.curve, 'curve')
            point = parse_constant(p, flag.point) if flag.point is not None else None
            self.flags[flag.id] = FlagValuation(self.variables, carrier, point)
        self.functionals: Dict[str, Functional] = {}
        for functional in scenario.functionals:
            self._check_new(functional.id, self.functionals)
            triples = [(self._lookup(self.flags, flag, 'flag'), index, coefficient)
                       for flag, index, coefficient in functional.terms]
            self.functionals[functional.id] = Functional.from_triples(triples, ell, functional.level)
        self.names = {s: name for name, s in self.functionals.items()}

        carriers = list(dict.fromkeys(list(self.curves.values()) +
                                      [flag.curve for flag in self.flags.values() if flag.curve is not None]))
        self.space = SearchSpace(default_pool(p, self.variables, carriers), self.config.budget)
        self.engine = CPairEngine(self.space, list(self.flags.values()), threads=threads)
        self.universes: Dict[str, Universe] = {}
        for universe in scenario.universes:
            self._check_new(universe.id, self.universes)
            self.universes[universe.id] = self._build_universe(universe)

    @staticmethod
    def _check_new(id: str, table: Dict) -> None:  # type: ignore[type-arg]
        if id in table:
            raise ScenarioError('Duplicate id "{}"'.format(id))

    @staticmethod
    def _lookup(table: Dict, id: str, what: str):  # type: ignore[no-untyped-def,type-arg]
        if id not in table:
            raise ScenarioError('Unknown {} "{}"'.format(what, id))
        return table[id]

    def _build_universe(self, declaration: UniverseDecl) -> Universe:
        config = self.config
        if declaration.curated is not None:
            builder = self._lookup(CURATED, declaration.curated, 'curated universe')
            return builder(config.p, config.ell, config.budget, config.threads)  # type: ignore[no-any-return]
        small = [self._lookup(self.functionals, id, 'functional') for id in declaration.small]
        big = [self._lookup(self.functionals, id, 'functional') for id in declaration.big] or None
        lift_table: Dict[Functional, List[Functional]] = {}
        for a, b in declaration.lifts:
            source = self._lookup(self.functionals, a, 'functional')
            lift_table.setdefault(source, []).append(self._lookup(self.functionals, b, 'functional'))
        return Universe(config.ell, config.n, config.big_n, small, self.engine, big=big, lift_table=lift_table,
                        flags=list(self.flags.values()), variables=self.variables, names=self.names)

    def universe(self, item: Item, task: SList) -> Universe:
        return self._lookup(self.universes, expect_atom(item, task), 'universe')  # type: ignore[no-any-return]

    def functional(self, item: Item, task: SList) -> Functional:
        return self._lookup(self.functionals, expect_atom(item, task), 'functional')  # type: ignore[no-any-return]

    def flag(self, item: Item, task: SList) -> FlagValuation:
        return self._lookup(self.flags, expect_atom(item, task), 'flag')  # type: ignore[no-any-return]

    def element(self, universe: Universe, item: Item, task: SList) -> Functional:
        name = expect_atom(item, task)
        if name in universe.names.values():
            s = universe.element(name)
        else:
            s = self._lookup(self.functionals, name, 'functional')
        universe.check_member(s)
        return s

    def elements(self, universe: Universe, item: Item, task: SList) -> List[Functional]:
        """An explicit list of element names or a nested subset operation on the same universe."""
        items = expect_list(item, task)
        if items and not isinstance(items[0], (SList, SString)) and items[0] in SET_OPERATIONS and len(items) == 3 \
                and isinstance(items[1], str) and items[1] in self.universes and self.universes[items[1]] is universe:
            return self._definable(items, universe).members
        return [self.element(universe, x, task) for x in items]

    def _definable(self, call: SList, universe: Universe) -> Definable:
        sigma = self.elements(universe, call[2], call)
        operations: Dict[str, Callable[[Sequence[Functional], Universe], Definable]] = {
            'def_d': def_D,
            'def_i': def_I,
            'centralizer': c_centralizer,
            'center': c_center,
        }
        return operations[call.head](sigma, universe)

    def run_task(self, task: TaskDecl) -> TaskResult:
        runners: Dict[str, Callable[[TaskDecl], TaskResult]] = {
            'constants': self._constants,
            'cancellation_sweep': self._cancellation_sweep,
            'cpair': self._cpair,
            'cpair_matrix': self._cpair_matrix,
            'visible_inertia': self._visible_inertia,
            'common_inertia': self._common_inertia,
            'def_d': self._subset,
            'def_i': self._subset,
            'centralizer': self._subset,
            'center': self._subset,
            'quasi_divisorial': self._quasi_divisorial,
            'trdeg': self._trdeg,
            'associated_valuation': self._associated_valuation,
            'supremum': self._supremum,
            'comparability': self._comparability,
            'decomposition_from_cpair': self._decomposition_from_cpair,
            'h_probe': self._h_probe,
            'h_probe_units': self._h_probe_units,
            'classify': self._classify,
            'visible': self._visible,
            'in_inertia': self._membership,
            'in_decomposition': self._membership,
            'residue': self._residue,
            'module_rank': self._module_rank,
            'submodule_member': self._submodule_member,
            'property_checks': self._property_checks,
        }
        if task.operation not in runners:
            raise task.call.error('Unknown operation "{}"'.format(task.operation))
        return runners[task.operation](task)

    def _arity(self, task: TaskDecl, *counts: int) -> List[Item]:
        if len(task.args) not in counts:
            raise task.call.error('{} takes {} arguments, got {}'.format(
                task.operation, ' or '.join(map(str, counts)), len(task.args)))
        return task.args

    def _constants(self, task: TaskDecl) -> TaskResult:
        kind, n, ell = self._arity(task, 3)
        kinds: Dict[str, Callable[[int, int], int]] = {
            'M1': lambda n, ell: const_M(1, n),
            'M2': lambda n, ell: const_M(2, n),
            'N': const_N,
            'R': const_R,
        }
        name = expect_atom(kind, task.call)
        if name not in kinds:
            raise task.call.error('Unknown constant "{}", use one of M1, M2, N, R'.format(name))
        n_value, ell_value = expect_int(n, task.call), expect_int(ell, task.call)
        value = kinds[name](n_value, ell_value)
        return TaskResult(task.id, task.operation, str(value), '{}({}) at ell={}'.format(name, n_value, ell_value))

    def _cancellation_sweep(self, task: TaskDecl) -> TaskResult:
        ell, n, r = [expect_int(item, task.call) for item in self._arity(task, 3)]
        result = cancellation_sweep(ell, n, r)
        return TaskResult(task.id, task.operation, 'pass' if result.passed else 'fail', str(result))

    def _pair(self, task: TaskDecl) -> tuple:  # type: ignore[type-arg]
        args = self._arity(task, 2, 3)
        if len(args) == 3:
            universe = self.universe(args[0], task.call)
            return universe.engine, self.element(universe, args[1], task.call), self.element(universe, args[2],
                                                                                               task.call)
        return self.engine, self.functional(args[0], task.call), self.functional(args[1], task.call)

    def _cpair(self, task: TaskDecl) -> TaskResult:
        engine, s, t = self._pair(task)
        verdict = engine.verdict(s, t)
        return TaskResult(task.id, task.operation, str(verdict.value), verdict.detail())

    def _cpair_matrix(self, task: TaskDecl) -> TaskResult:
        universe = self.universe(self._arity(task, 1)[0], task.call)
        matrix = universe.engine.matrix(universe.small)
        lines = []
        counts = {'yes': 0, 'no': 0, 'unknown': 0}
        for (i, j), verdict in sorted(matrix.items()):
            if i == j:
                continue
            counts[str(verdict.value)] += 1
            lines.append('{} {} {} {}'.format(universe.name(universe.small[i]), universe.name(universe.small[j]),
                                              verdict.value, verdict.detail()))
        detail = 'yes={} no={} unknown={}'.format(counts['yes'], counts['no'], counts['unknown'])
        return TaskResult(task.id, task.operation, 'unknown' if counts['unknown'] else 'decisive', detail, lines)

    def _visible_inertia(self, task: TaskDecl) -> TaskResult:
        universe_item, s = self._arity(task, 2)
        universe = self.universe(universe_item, task.call)
        return tri_result(task, visible_inertia_predicate(self.element(universe, s, task.call), universe))

    def _common_inertia(self, task: TaskDecl) -> TaskResult:
        universe_item, sigma = self._arity(task, 2)
        universe = self.universe(universe_item, task.call)
        return tri_result(task, common_inertia_predicate(self.elements(universe, sigma, task.call), universe))

    def _subset(self, task: TaskDecl) -> TaskResult:
        universe_item, _ = self._arity(task, 2)
        universe = self.universe(universe_item, task.call)
        subset = self._definable(task.call, universe)
        members = [universe.name(s) for s in subset.members]
        result = TaskResult(task.id, task.operation, '({})'.format(' '.join(members)),
                            'undecided {}'.format(' '.join(universe.name(s) for s in subset.undecided))
                            if subset.undecided else '', members=members)
        result.decisive = subset.is_decisive()
        return result

    def _quasi_divisorial(self, task: TaskDecl) -> TaskResult:
        universe_item, inertia, decomposition, d = self._arity(task, 4)
        universe = self.universe(universe_item, task.call)
        return tri_result(task, quasi_divisorial_detect(self.elements(universe, inertia, task.call),
                                                        self.elements(universe, decomposition, task.call),
                                                        universe, expect_int(d, task.call)))

    def _trdeg(self, task: TaskDecl) -> TaskResult:
        universe = self.universe(self._arity(task, 1)[0], task.call)
        estimate = trdeg_estimate(universe)
        detail = 'witness ({}) blocked={}'.format(' '.join(universe.name(s) for s in estimate.witness),
                                                  estimate.blocked)
        return TaskResult(task.id, task.operation, str(estimate.value), detail)

    def _associated_valuation(self, task: TaskDecl) -> TaskResult:
        universe_item, sigma = self._arity(task, 2)
        universe = self.universe(universe_item, task.call)
        v = associated_valuation(self.elements(universe, sigma, task.call), universe)
        return TaskResult(task.id, task.operation, str(v), 'rank {}'.format(v.rank))

    def _supremum(self, task: TaskDecl) -> TaskResult:
        universe_item, sigma = self._arity(task, 2)
        universe = self.universe(universe_item, task.call)
        v = supremum_valuation(self.elements(universe, sigma, task.call), universe)
        return TaskResult(task.id, task.operation, str(v), 'rank {}'.format(v.rank))

    def _comparability(self, task: TaskDecl) -> TaskResult:
        universe_item, s, t = self._arity(task, 3)
        universe = self.universe(universe_item, task.call)
        return tri_result(task, valuative_comparability(self.element(universe, s, task.call),
                                                        self.element(universe, t, task.call), universe))

    def _decomposition_from_cpair(self, task: TaskDecl) -> TaskResult:
        universe_item, s, t = self._arity(task, 3)
        universe = self.universe(universe_item, task.call)
        return tri_result(task, decomposition_from_cpair(self.element(universe, s, task.call),
                                                         self.element(universe, t, task.call), universe))

    def _h_probe(self, task: TaskDecl) -> TaskResult:
        universe_item, element, sigma = self._arity(task, 3)
        universe = self.universe(universe_item, task.call)
        t = parse_rat(self.config.p, expect_string(element, task.call))
        return tri_result(task, h_membership_probe(t, self.elements(universe, sigma, task.call), universe.space))

    def _h_probe_units(self, task: TaskDecl) -> TaskResult:
        """Probe the first units of the associated valuation; none may be refuted."""
        universe_item, sigma_item, count = self._arity(task, 3)
        universe = self.universe(universe_item, task.call)
        sigma = self.elements(universe, sigma_item, task.call)
        v = associated_valuation(sigma, universe)
        probed = 0
        refuted = []
        for x in universe.space.elements():
            if probed >= expect_int(count, task.call):
                break
            if not v.is_trivial() and not is_unit(v, x):
                continue
            probed += 1
            if h_membership_probe(x, sigma, universe.space).is_no():
                refuted.append(str(x))
        return TaskResult(task.id, task.operation, 'fail' if refuted else 'pass',
                          'probed={} refuted={} valuation={}'.format(probed, len(refuted), v), refuted)

    def _classify(self, task: TaskDecl) -> TaskResult:
        flag, d = self._arity(task, 2)
        v = self.flag(flag, task.call)
        return TaskResult(task.id, task.operation, str(classify_quasi_divisorial(v, expect_int(d, task.call))),
                          str(v))

    def _visible(self, task: TaskDecl) -> TaskResult:
        flag, d = self._arity(task, 2)
        v = self.flag(flag, task.call)
        return TaskResult(task.id, task.operation, str(is_visible(v, expect_int(d, task.call))).lower(), str(v))

    def _membership(self, task: TaskDecl) -> TaskResult:
        s, flag = self._arity(task, 2)
        check = in_inertia if task.operation == 'in_inertia' else in_decomposition
        return tri_result(task, check(self.functional(s, task.call), self.flag(flag, task.call), self.space))

    def _residue(self, task: TaskDecl) -> TaskResult:
        s, flag = self._arity(task, 2)
        image = residue_functional(self.functional(s, task.call), self.flag(flag, task.call))
        return TaskResult(task.id, task.operation, str(image))

    def _module_rank(self, task: TaskDecl) -> TaskResult:
        items = expect_list(self._arity(task, 1)[0], task.call)
        rank = module_rank([self.functional(item, task.call) for item in items])
        return TaskResult(task.id, task.operation, str(rank))

    def _submodule_member(self, task: TaskDecl) -> TaskResult:
        t, items = self._arity(task, 2)
        generators = [self.functional(item, task.call) for item in expect_list(items, task.call)]
        member = submodule_member(self.functional(t, task.call), generators)
        return TaskResult(task.id, task.operation, str(member).lower())

    def _property_checks(self, task: TaskDecl) -> TaskResult:
        universe_item, samples = self._arity(task, 2)
        universe = self.universe(universe_item, task.call)
        report = check_laws(universe.small, universe.flags, universe.space, self.config.seed,
                            expect_int(samples, task.call))
        lines = ['{}: {}'.format(law, detail) for law, detail in report.failures]
        return TaskResult(task.id, task.operation, 'pass' if report.passed else 'fail', str(report), lines)


def matches(expected: Item, result: TaskResult) -> bool:
    if not isinstance(expected, (SList, SString)) and expected == 'decisive':
        return result.decisive
    if isinstance(expected, SList) and result.members is not None:
        return {format_item(item) for item in expected} == set(result.members)
    if isinstance(expected, SString):
        return str(expected) == result.verdict
    return format_item(expected) == result.verdict


def load_scenario(file_path: str) -> Scenario:
    with open(file_path, 'r') as f:
        nodes = parse(f.read())
    if len(nodes) != 1:
        raise ScenarioError('Expected exactly one (scenario ...) in {}, found {}'.format(file_path, len(nodes)))
    return Scenario.from_node(nodes[0])


def run(scenario_path: str, budget: Optional[SearchBudget] = None, threads: int = 1,
        report_path: Optional[str] = None, seed: int = 0) -> int:
    print('Loading scenario: {}'.format(scenario_path))
    scenario = load_scenario(scenario_path)
    workspace = Workspace(scenario, budget, threads, seed)
    report = Report(scenario.name)
    for task in scenario.tasks:
        print('Running task {}'.format(task.id))
        result = workspace.run_task(task)
        if task.expect is not None and not matches(task.expect, result):
            result.mismatch = format_item(task.expect)
        if not result.decisive and (task.expect is None or format_item(task.expect) != 'unknown'):
            warn('Task {} is undecided within budget {}'.format(task.id, workspace.config.budget))
        report.add(result)
    report.trailer['budget'] = str(workspace.config.budget)
    report.trailer['seed'] = str(seed)
    if report_path is not None:
        print('Writing report: {}'.format(report_path))
        write_text_file(report_path, str(report))
    else:
        print()
        print(report, end='')
    print('Done, {} tasks, {} mismatches'.format(len(report.results), report.mismatches))
    return 1 if report.mismatches else 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(description='Run a scenario and write its report')
    parser.add_argument(
        '--scenario', metavar='path', required=True,
        help='path to the scenario file',
    )
    parser.add_argument(
        '--budget', metavar='preset|factors:exponent:constants',
        help='search budget, overrides the one in the scenario',
    )
    parser.add_argument(
        '--threads', type=int, default=1,
        help='worker threads for C-pair searches',
    )
    parser.add_argument(
        '--report', metavar='path',
        help='write the report here instead of printing it',
    )
    parser.add_argument(
        '--seed', type=int, default=0,
        help='seed for randomized property checks',
    )
    args = parser.parse_args(argv)
    try:
        budget = SearchBudget.parse(args.budget) if args.budget is not None else None
        return run(args.scenario, budget, args.threads, args.report, args.seed)
    except (ValueError, ArithmeticError, OSError) as error:
        print('Error: {}'.format(error))
        return 2


if __name__ == '__main__':
    sys.exit(main())
