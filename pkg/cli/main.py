"""
Command-line front end.

    csb fit --scm spec.json --out model/ [--source src.csv] [--target tgt.csv] [-n N]
    csb counterfactual --model model/ --fact row.csv --do "Y=3" [--sigma 0.5]
    csb sample --scm spec.json -n N [--out data.csv|data.csbd]
    csb calibrate-baseline [--dref 50] [--trials 20]
    csb experiment <name|all> [--seed N] [--config path] [--out dir] [--large] [--jobs J]

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""
import argparse
import json
import logging
import sys
from pathlib import Path

from errors import CsbError
from graph import Scm
from data import Dataset, DatasetLoader, build_latent_source
from bridges import TrainConfig
from fitting import fit, load_model, save_model
from sde import TimeGrid, stack_paths
from extrapolation import calibrate, extrapolation_table, HESSIAN_FACTOR, memory_wall_estimate
from experiments import DEFAULTS, EXPERIMENTS, ExperimentRunner, load_overrides, overrides_for

logger = logging.getLogger(__name__)

DEFAULT_SEED = 42
CALIBRATION_DIMS = (1000, 10000, 100000)


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    """argparse with usage failures on exit code 1."""
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f'{self.prog}: error: {message}\n')


def parse_do(expression: str) -> dict:
    """'Y=3,Z=-1.5' -> {'Y': 3.0, 'Z': -1.5}; an empty expression is no intervention."""
    assignments = {}
    for part in filter(None, (p.strip() for p in (expression or '').split(','))):
        name, sep, value = part.partition('=')
        if not sep or not name.strip():
            raise UsageError(f'bad do-expression {part!r}; expected NAME=FLOAT.')
        try:
            assignments[name.strip()] = float(value)
        except ValueError:
            raise UsageError(f'bad value in do-expression {part!r}.') from None
    return assignments


def _write_or_print(frame, out):
    if out is None:
        sys.stdout.write(frame.to_csv(index=False))
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(out, index=False)


def _train_config(args) -> TrainConfig:
    cfg = TrainConfig.from_json(args.config) if args.config else TrainConfig()
    changes = {'seed': args.seed}
    if args.sigma is not None:
        changes['sigma'] = args.sigma
    if args.jobs is not None:
        changes['jobs'] = args.jobs
    return cfg.replace(**changes)


def cmd_fit(args) -> int:
    scm = Scm.from_json(args.scm)
    target = (DatasetLoader(args.target, scm.names).load() if args.target
              else scm.sample(args.n, args.seed))
    source = (DatasetLoader(args.source, scm.names).load() if args.source
              else build_latent_source(target.n, target.d, args.seed, target.names))
    model = fit(scm.dag, source, target, cfg=_train_config(args), seed=args.seed)
    path = save_model(model, args.out)
    logger.info('fitted %r in %.2fs', model, model.metadata['wall_time'])
    print(path)
    return 0


def cmd_counterfactual(args) -> int:
    model = load_model(args.model)
    assignments = parse_do(args.do)
    fact = DatasetLoader(args.fact, list(model.column_names)).load()
    grid = TimeGrid(args.steps)
    result, paths = model.counterfactual(fact.samples, assignments, grid, args.sigma, args.seed,
                                         return_paths=True)
    frame = Dataset(result, model.column_names).to_frame()
    if args.out is None:
        _write_or_print(frame, None)
        return 0
    out = Path(args.out)
    _write_or_print(frame, out / 'counterfactual.csv')
    trajectory = stack_paths([paths[i] for i in range(model.dag.node_count)])
    trajectory.to_frame(0, list(model.column_names)).to_csv(out / 'trajectory.csv', index=False)
    return 0


def cmd_sample(args) -> int:
    data = Scm.from_json(args.scm).sample(args.n, args.seed)
    if args.out is None:
        _write_or_print(data.to_frame(), None)
    else:
        DatasetLoader(args.out).save(data)
    return 0


def cmd_calibrate(args) -> int:
    model = calibrate(args.dref, args.trials, args.seed, args.iterations)
    dims = [d for d in args.dims if d >= model.d_ref]
    doc = {
        't_ref': model.t_ref,
        'd_ref': model.d_ref,
        'I': model.iterations,
        'extrapolations': extrapolation_table(model, dims),
        'hessian_memory_bytes': [memory_wall_estimate(d, factor=HESSIAN_FACTOR) for d in dims],
    }
    text = json.dumps(doc, indent=2)
    if args.out is None:
        print(text)
    else:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text)
    return 0


def _experiment_overrides(names, args) -> dict:
    """Config file first, then --steps / --sigma on every experiment that has the key."""
    doc = load_overrides(args.config) if args.config else {}
    merged = {}
    for name in names:
        cfg = dict(overrides_for(name, doc))
        if args.steps is not None and 'grid_steps' in DEFAULTS[name]:
            cfg['grid_steps'] = args.steps
        if args.sigma is not None:
            key = 'sigma_gen' if 'sigma_gen' in DEFAULTS[name] else 'sigma'
            if key in DEFAULTS[name]:
                cfg[key] = args.sigma
        merged[name] = cfg
    return merged


def cmd_experiment(args) -> int:
    names = list(EXPERIMENTS) if args.name == 'all' else [args.name]
    runner = ExperimentRunner(
        {name: EXPERIMENTS[name] for name in names},
        seed=args.seed,
        overrides=_experiment_overrides(names, args),
        large=args.large,
        jobs=args.jobs or 1,
    )
    reports = runner.run()
    summary = ExperimentRunner.write(reports, args.out)
    print(summary.T.to_string(header=False))
    return 0


def build_parser() -> Parser:
    common = Parser(add_help=False)
    common.add_argument('--seed', type=int, default=DEFAULT_SEED)
    common.add_argument('-v', '--verbose', action='count', default=0)

    parser = Parser(prog='csb', description='Causal Schrödinger bridges over a DAG.')
    sub = parser.add_subparsers(dest='command', parser_class=Parser)

    p = sub.add_parser('fit', parents=[common], help='fit one local bridge per node')
    p.add_argument('--scm', required=True, help='SCM spec (JSON); supplies the graph')
    p.add_argument('--source', help='source dataset (CSV/CSBD); latent normals if omitted')
    p.add_argument('--target', help='target dataset; sampled from the SCM if omitted')
    p.add_argument('-n', type=int, default=5000, help='rows to sample when --target is omitted')
    p.add_argument('--config', help='TrainConfig JSON')
    p.add_argument('--sigma', type=float)
    p.add_argument('--jobs', type=int)
    p.add_argument('--out', required=True, help='model directory')
    p.set_defaults(run=cmd_fit)

    p = sub.add_parser('counterfactual', parents=[common], help='hybrid counterfactual for factual rows')
    p.add_argument('--model', required=True)
    p.add_argument('--fact', required=True, help='factual rows (CSV with node-name header)')
    p.add_argument('--do', default='', help='comma-separated NAME=FLOAT')
    p.add_argument('--sigma', type=float, default=0.0, help='generation noise of the descendants')
    p.add_argument('--steps', type=int, default=200)
    p.add_argument('--out', help='directory for counterfactual.csv and trajectory.csv')
    p.set_defaults(run=cmd_counterfactual)

    p = sub.add_parser('sample', parents=[common], help='ancestral samples of an SCM')
    p.add_argument('--scm', required=True)
    p.add_argument('-n', type=int, required=True)
    p.add_argument('--out', help='.csv or .csbd; CSV on stdout if omitted')
    p.set_defaults(run=cmd_sample)

    p = sub.add_parser('calibrate-baseline', parents=[common], help='time the dense cubic baseline')
    p.add_argument('--dref', type=int, default=50)
    p.add_argument('--trials', type=int, default=20)
    p.add_argument('--iterations', type=int, default=100)
    p.add_argument('--dims', type=int, nargs='+', default=list(CALIBRATION_DIMS))
    p.add_argument('--out')
    p.set_defaults(run=cmd_calibrate)

    p = sub.add_parser('experiment', parents=[common], help='run a benchmark and write its report')
    p.add_argument('name', choices=sorted(EXPERIMENTS) + ['all'])
    p.add_argument('--config', help='JSON overrides, flat or keyed by experiment')
    p.add_argument('--out', default='results')
    p.add_argument('--steps', type=int, help='integration steps')
    p.add_argument('--sigma', type=float)
    p.add_argument('--large', action='store_true', help='full-size dimensions')
    p.add_argument('--jobs', type=int, help='experiments run in parallel')
    p.set_defaults(run=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')

    try:
        return args.run(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f'csb: error: {exc}', file=sys.stderr)
        return 1
    except (CsbError, OSError, ValueError) as exc:
        print(f'csb: {type(exc).__name__}: {exc}', file=sys.stderr)
        return 2
