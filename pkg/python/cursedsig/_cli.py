"""Command-line interface.

Exit codes: 0 on success, 1 when ``verify`` rejects an assessment, 2 on
input errors and 3 when a search budget or solver budget is exhausted.
The environment variable CURSED_SIG_SEED is reserved for sampling hooks
and is not read.
"""

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from ._common import ConvergenceError, SearchBudgetError, _check_chi, _fmt, invoker
from ._continuum import (COMPRESSION_COLUMNS, SCHEDULE_COLUMNS, ContinuumModel, schedule_table,
                         wage_compression_report)
from ._experiment import format_p, load_block_stats, load_bundled_block_stats, pipeline_regime, prediction_report, regime
from ._fixtures import kmn_game
from ._game import load_game
from ._io import assessment_from_dict, dumps, record_to_dict, write_csv
from ._refinement import CURSED, STANDARD, refine_equilibrium_set
from ._solver import enumerate_pure_cse, record_from_assessment, solve_support_cse, verify_cse
from ._spence import (REGION_COLUMNS, SpenceModel, cost_from_spec, equilibrium_wages, pooling_region, region_row,
                      riley_outcome, riley_selection, separating_region)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_REJECTED, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3
REGIME_COLUMNS = ('chi', 'separating_survives', 'pooling_survives', 'hybrid_invest_prob',
                  'pipeline_separating', 'pipeline_pooling', 'pipeline_hybrid')
REFINE_COLUMNS = ('chi', 'kind', 'source', 'profile', 'survives_standard', 'survives_cursed')
STATS_COLUMNS = ('treatment', 'block', 'worker_type', 'n', 'mean', 'sd', 'exact_moments', 'ci_lo', 'ci_hi',
                 'p_intuitive', 'cursed_prediction', 'p_cursed')
WHAT_DEFAULT = {'spence': 'regions', 'kmn': 'regimes', 'game': 'refine', 'continuum': 'schedule'}
WHAT_ALLOWED = {'spence': {'regions'}, 'kmn': {'regimes', 'refine'}, 'game': {'refine'},
                'continuum': {'schedule', 'compression'}}


def parse_chi_grid(text):
    """A single χ, or an inclusive grid 'start:stop:step'."""
    parts = text.split(':')
    try:
        values = [float(part) for part in parts]
    except ValueError:
        raise ValueError(f'{invoker}: cannot read chi {text!r}.') from None
    if len(values) == 1:
        return (_check_chi(values[0]),)
    if len(values) != 3:
        raise ValueError(f'{invoker}: a chi grid is start:stop:step, not {text!r}.')
    start, stop, step = values
    if not step > 0:
        raise ValueError(f'{invoker}: the chi grid step should be positive.')
    if stop < start:
        raise ValueError(f'{invoker}: the chi grid stops before it starts.')
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return tuple(_check_chi(round(start + i * step, 12)) for i in range(count))


@dataclass(frozen=True)
class RunConfig:
    """Validated options of one CLI run; plain values so it can be sent to worker processes."""
    command: str
    chis: tuple = ()
    game: str = None
    assessment: str = None
    equilibria: str = None
    model: str = None
    what: str = None
    cost: str = 'linear'
    theta_l: float = None
    theta_h: float = None
    p: float = None
    theta_min: float = None
    theta_max: float = None
    mean: float = None
    distribution: str = 'uniform'
    n_theta: int = 101
    data: tuple = ()
    output: str = None
    fmt: str = 'json'
    jobs: int = 1
    use_supports: bool = True
    quiet: bool = False

    @classmethod
    def from_args(cls, args):
        values = {name: getattr(args, name) for name in cls.__dataclass_fields__ if hasattr(args, name)}
        if getattr(args, 'chi', None) is not None:
            values['chis'] = parse_chi_grid(args.chi)
        config = cls(**{k: v for k, v in values.items() if v is not None})
        config.validate()
        return config

    def validate(self):
        if self.jobs < 1:
            raise ValueError(f'{invoker}: --jobs should be at least 1.')
        if self.command == 'sweep':
            if self.what not in WHAT_ALLOWED[self.model]:
                raise ValueError(f'{invoker}: --what {self.what} does not apply to --{self.model}.')
        if self.model == 'spence' or self.command == 'spence':
            for name in ('theta_l', 'theta_h', 'p'):
                if getattr(self, name) is None:
                    raise ValueError(f'{invoker}: the Spence model needs --{name.replace("_", "-")}.')
        if self.model == 'continuum' or self.command == 'continuum':
            if self.theta_min is None or (self.theta_max is None and self.mean is None):
                raise ValueError(f'{invoker}: the continuum model needs --theta-min and --theta-max or --mean.')

    def spence_model(self):
        return SpenceModel(self.theta_l, self.theta_h, self.p, cost_from_spec(self.cost))

    def continuum_model(self):
        if self.theta_max is None:
            return ContinuumModel.from_mean(self.theta_min, self.mean)
        return ContinuumModel(self.theta_min, self.theta_max, self.mean, self.distribution)

    def load_game(self):
        return kmn_game() if self.model == 'kmn' else load_game(self.game)


def _solve_all(game, chi, use_supports=True):
    records = enumerate_pure_cse(game, chi)
    if use_supports:
        for spec in game.supports:
            records += solve_support_cse(game, chi, spec)
    return records


def _open_output(config):
    return open(config.output, 'w', newline='') if config.output else sys.stdout


def _emit(config, text, summary):
    if config.output:
        with open(config.output, 'w', newline='') as handle:
            handle.write(text)
        if not config.quiet:
            print(summary)
    else:
        sys.stdout.write(text)


def _records_text(records):
    lines = []
    for record in records:
        profile = record.profile or 'mixed'
        verdicts = ', '.join(f'{k}={"pass" if v else "fail"}' for k, v in record.refinement_verdicts.items())
        payoffs = ', '.join(f'{t}: {_fmt(u)}' for t, u in zip(record.sender.types, record.sender_payoffs))
        lines.append(f'{record.kind:<10} {record.source:<16} profile={profile} payoffs=({payoffs})'
                     + (f' [{verdicts}]' if verdicts else ''))
    return '\n'.join(lines) + '\n'


def cmd_solve(config):
    game = config.load_game()
    chi = config.chis[0]
    records = _solve_all(game, chi, config.use_supports)
    if config.fmt == 'text':
        text = _records_text(records)
    else:
        text = dumps({'game': game.name, 'chi': chi, 'equilibria': [record_to_dict(r) for r in records]})
    _emit(config, text, f'{len(records)} equilibria at chi={_fmt(chi)} written to {config.output}')
    return EXIT_OK


def cmd_verify(config):
    game = config.load_game()
    with open(config.assessment) as handle:
        doc = json.load(handle)
    chi = config.chis[0] if config.chis else None
    verdict = verify_cse(game, assessment_from_dict(game, doc, chi))
    text = dumps({'passed': verdict.passed, 'condition': verdict.condition, 'magnitude': verdict.magnitude,
                  'detail': verdict.detail})
    _emit(config, text, 'pass' if verdict else f'fail: {verdict.detail}')
    return EXIT_OK if verdict else EXIT_REJECTED


def _load_equilibria(game, path):
    with open(path) as handle:
        doc = json.load(handle)
    entries = doc.get('equilibria', doc) if isinstance(doc, dict) else doc
    if not isinstance(entries, list):
        raise ValueError(f'{invoker}: {path} should hold a list of equilibria.')
    return [record_from_assessment(game, assessment_from_dict(game, entry), entry.get('source', 'input'))
            for entry in entries]


def cmd_refine(config):
    game = config.load_game()
    chi = config.chis[0]
    if config.equilibria:
        records = _load_equilibria(game, config.equilibria)
    else:
        records = _solve_all(game, chi, config.use_supports)
    records = refine_equilibrium_set(game, chi, records)
    if config.fmt == 'text':
        text = _records_text(records)
    else:
        text = dumps({'game': game.name, 'chi': chi, 'equilibria': [record_to_dict(r) for r in records]})
    survivors = sum(r.refinement_verdicts[CURSED] for r in records)
    _emit(config, text, f'{survivors} of {len(records)} equilibria survive at chi={_fmt(chi)}')
    return EXIT_OK


def _sweep_point(task):
    """Rows of one χ grid point; a module-level function so worker processes can run it."""
    config, chi = task
    if config.model == 'spence':
        return [region_row(config.spence_model(), chi)]
    if config.model == 'continuum':
        model = config.continuum_model()
        if config.what == 'compression':
            return wage_compression_report(model, [chi])
        return schedule_table(model, [chi], config.n_theta)
    if config.what == 'regimes':
        closed, pipeline = regime(chi), pipeline_regime(chi)
        return [{'chi': chi, 'separating_survives': closed.separating_survives,
                 'pooling_survives': closed.pooling_survives, 'hybrid_invest_prob': closed.hybrid_invest_prob,
                 'pipeline_separating': pipeline.separating_survives, 'pipeline_pooling': pipeline.pooling_survives,
                 'pipeline_hybrid': pipeline.hybrid_invest_prob}]
    game = config.load_game()
    records = refine_equilibrium_set(game, chi, _solve_all(game, chi, config.use_supports))
    return [{'chi': chi, 'kind': r.kind, 'source': r.source, 'profile': '/'.join(r.profile) if r.profile else 'mixed',
             'survives_standard': r.refinement_verdicts[STANDARD], 'survives_cursed': r.refinement_verdicts[CURSED]}
            for r in records]


SWEEP_COMMENTS = {
    'regions': 'Spence model: separating and pooling education regions, Riley education and wages per chi',
    'regimes': 'binary-investment game: equilibria surviving the cursed intuitive criterion per chi',
    'refine': 'criterion verdicts of every equilibrium per chi',
    'schedule': 'continuum types: separating education and wage schedules per chi',
    'compression': 'continuum types: wage slope and pivot per chi',
}
SWEEP_COLUMNS = {'regions': REGION_COLUMNS, 'regimes': REGIME_COLUMNS, 'refine': REFINE_COLUMNS,
                 'schedule': SCHEDULE_COLUMNS, 'compression': COMPRESSION_COLUMNS}


def cmd_sweep(config):
    tasks = [(config, chi) for chi in config.chis]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(task) for task in tasks]
    rows = [row for chunk in results for row in chunk]
    handle = _open_output(config)
    try:
        write_csv(handle, rows, SWEEP_COLUMNS[config.what], SWEEP_COMMENTS[config.what])
    finally:
        if handle is not sys.stdout:
            handle.close()
    if config.output and not config.quiet:
        print(f'{len(rows)} rows written to {config.output}')
    return EXIT_OK


def cmd_spence(config):
    model = config.spence_model()
    chi = config.chis[0]
    separating, pooling = separating_region(model, chi), pooling_region(model, chi)
    wages = equilibrium_wages(model, chi)
    survivors = riley_selection(model, chi)
    doc = {
        'chi': chi,
        'cost': model.cost.name,
        'separating_region': None if separating.empty else [separating.lo, separating.hi],
        'pooling_region': [pooling.lo, pooling.hi],
        'wages': {'w_L': wages.w_L, 'w_H': wages.w_H},
        'riley_outcome': dict(zip(('e_H', 'e_L'), riley_outcome(model, chi))),
        'criterion_survivors': [{'kind': c.kind, 'e_H': c.e_H, 'e_L': c.e_L, 'q': c.q} for c in survivors],
    }
    _emit(config, dumps(doc), f'Spence report at chi={_fmt(chi)} written to {config.output}')
    return EXIT_OK


def cmd_continuum(config):
    model = config.continuum_model()
    handle = _open_output(config)
    try:
        write_csv(handle, schedule_table(model, config.chis, config.n_theta), SCHEDULE_COLUMNS,
                  SWEEP_COMMENTS['schedule'])
    finally:
        if handle is not sys.stdout:
            handle.close()
    return EXIT_OK


def cmd_kmn_stats(config):
    cells = [c for path in config.data for c in load_block_stats(path)] if config.data else load_bundled_block_stats()
    chi = config.chis[0] if config.chis else None
    rows = prediction_report(cells, chi)
    records = [{
        'treatment': r.stats.treatment, 'block': 'All' if r.stats.block is None else r.stats.block,
        'worker_type': r.stats.worker_type, 'n': r.stats.n, 'mean': r.mean, 'sd': r.sd,
        'exact_moments': r.exact_moments, 'ci_lo': r.ci_lo, 'ci_hi': r.ci_hi,
        'p_intuitive': r.p_intuitive, 'cursed_prediction': r.cursed_prediction, 'p_cursed': r.p_cursed,
    } for r in rows]
    if config.output:
        with open(config.output, 'w', newline='') as handle:
            write_csv(handle, records, STATS_COLUMNS, 'block investment rates tested against the predictions')
    if not config.quiet or not config.output:
        for r in rows:
            line = (f'{r.stats.label:<22} n={r.stats.n:<4} mean={r.stats.mean:.3f} '
                    f'CI=[{max(0.0, r.ci_lo):.3f}, {min(1.0, r.ci_hi):.3f}] '
                    f'p(intuitive)={format_p(r.p_intuitive)}')
            if chi is not None:
                line += f' p(cursed {r.cursed_prediction:.3f})={format_p(r.p_cursed)}'
            print(line)
    return EXIT_OK


COMMANDS = {'solve': cmd_solve, 'verify': cmd_verify, 'refine': cmd_refine, 'sweep': cmd_sweep,
            'spence': cmd_spence, 'continuum': cmd_continuum, 'kmn-stats': cmd_kmn_stats}


def _add_spence_options(parser):
    parser.add_argument('--cost', default='linear', help='linear, quadratic, power:K or expr:EXPRESSION in e and theta')
    parser.add_argument('--theta-l', type=float, dest='theta_l', help='low productivity')
    parser.add_argument('--theta-h', type=float, dest='theta_h', help='high productivity')
    parser.add_argument('--p', type=float, help='prior probability of the high type')


def _add_continuum_options(parser):
    parser.add_argument('--theta-min', type=float, dest='theta_min')
    parser.add_argument('--theta-max', type=float, dest='theta_max', help='defaults to 2 * mean - theta-min')
    parser.add_argument('--mean', type=float, help='E[theta]; wins over the distribution mean')
    parser.add_argument('--distribution', default='uniform', choices=('uniform', 'triangular', 'truncnorm'))
    parser.add_argument('--n-theta', type=int, default=101, dest='n_theta', help='type grid size')


def build_parser():
    formatter = argparse.RawDescriptionHelpFormatter
    parser = argparse.ArgumentParser(prog=invoker, description='Cursed sequential equilibria of signaling games.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='log more (repeat for debug output)')
    parser.add_argument('--quiet', action='store_true', help='no summary line on stdout')
    commands = parser.add_subparsers(dest='command', required=True)

    def add(name, help_text, epilog):
        sub = commands.add_parser(name, help=help_text, description=help_text, epilog=epilog,
                                  formatter_class=formatter)
        sub.add_argument('-o', '--output', help='output file (default: stdout)')
        return sub

    solve = add('solve', 'enumerate pure equilibria and solve the declared supports',
                'examples:\n  cursedsig solve --game kmn.json --chi 0.3\n'
                '  cursedsig solve --game beerquiche.json --chi 0 --format text')
    solve.add_argument('--game', required=True)
    solve.add_argument('--chi', required=True)
    solve.add_argument('--format', dest='fmt', choices=('json', 'text'), default='json')
    solve.add_argument('--no-supports', dest='use_supports', action='store_false')

    verify = add('verify', 'check an assessment file against a game',
                 'examples:\n  cursedsig verify --game kmn.json --assessment separating.json --chi 0.8')
    verify.add_argument('--game', required=True)
    verify.add_argument('--assessment', required=True)
    verify.add_argument('--chi', help='overrides the chi stored in the assessment')

    refine = add('refine', 'apply the standard and cursed intuitive criteria',
                 'examples:\n  cursedsig refine --game beerquiche.json --chi 0.6\n'
                 '  cursedsig refine --game kmn.json --chi 0.9 --format text')
    refine.add_argument('--game', required=True)
    refine.add_argument('--chi', required=True)
    refine.add_argument('--equilibria', help='JSON written by solve; solved in-process when omitted')
    refine.add_argument('--format', dest='fmt', choices=('json', 'text'), default='json')
    refine.add_argument('--no-supports', dest='use_supports', action='store_false')

    sweep = add('sweep', 'evaluate a chi grid and write CSV',
                'examples:\n'
                '  cursedsig sweep --spence --cost linear --theta-h 2 --theta-l 1 --p 0.5 --chi 0:1:0.01\n'
                '  cursedsig sweep --kmn --chi 0:1:0.005 --what regimes --jobs 4\n'
                '  cursedsig sweep --continuum --theta-min 1 --mean 2 --chi 0:1:0.25')
    target = sweep.add_mutually_exclusive_group(required=True)
    for name in ('spence', 'kmn', 'continuum'):
        target.add_argument(f'--{name}', dest='model', action='store_const', const=name)
    target.add_argument('--game', help='a game file, swept with --what refine')
    sweep.add_argument('--chi', required=True, help='start:stop:step, inclusive')
    sweep.add_argument('--what', choices=sorted(SWEEP_COLUMNS))
    sweep.add_argument('--jobs', type=int, default=1, help='worker processes')
    sweep.add_argument('--no-supports', dest='use_supports', action='store_false')
    _add_spence_options(sweep)
    _add_continuum_options(sweep)

    spence = add('spence', 'regions, wages and criterion survivors of the Spence model at one chi',
                 'examples:\n  cursedsig spence --cost quadratic --theta-h 2 --theta-l 1 --p 0.5 --chi 0.25')
    spence.add_argument('--chi', required=True)
    _add_spence_options(spence)

    continuum = add('continuum', 'separating schedules with a continuum of types',
                    'examples:\n  cursedsig continuum --theta-min 1 --mean 2 --chi 0:1:0.25 -o schedule.csv')
    continuum.add_argument('--chi', required=True)
    _add_continuum_options(continuum)

    stats = add('kmn-stats', 'test the published block statistics against the predictions',
                'examples:\n  cursedsig kmn-stats\n  cursedsig kmn-stats --chi 0.7 -o stats.csv')
    stats.add_argument('--data', action='append', help='block statistics CSV (default: the bundled tables)')
    stats.add_argument('--chi', help='adds the cursed prediction at this chi')
    return parser


def _configure(args):
    if args.command == 'sweep':
        if args.game is not None:
            args.model = 'game'
        args.what = args.what or WHAT_DEFAULT[args.model]
    if isinstance(getattr(args, 'data', None), list):
        args.data = tuple(args.data)
    return RunConfig.from_args(args)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format='%(name)s: %(levelname)s: %(message)s')
    try:
        return COMMANDS[args.command](_configure(args))
    except (SearchBudgetError, ConvergenceError) as e:
        _report(e)
        return EXIT_RESOURCE
    except (ValueError, OSError, json.JSONDecodeError) as e:
        _report(e)
        return EXIT_INPUT


def _report(error):
    message = str(error)
    if message.startswith(f'{invoker}: '):
        message = message[len(invoker) + 2:]
    print(f'{invoker}: error: {message}', file=sys.stderr)
