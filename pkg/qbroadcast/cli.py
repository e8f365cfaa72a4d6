"""
Command-line front end.

Usage:
    qbroadcast verify --suite lemmas --trials 100 --seed 7
    qbroadcast region evaluate --theorem multilevel --channel c.json --dist d.json
    qbroadcast region fm-check --theorem marton --channel c.json --dist d.json
    qbroadcast region compare --seed 3
    qbroadcast region pareto --theorem general2 --channel c.json
    qbroadcast simulate --spec run.yaml --trials 20
    qbroadcast eigencount --base qubit.json --n 6

Exit codes: 0 when every requested check passes, 1 on a failed check,
2 on unreadable or invalid input.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
import pydantic
import yaml

from . import __version__
from .certify import SUITES, run_suite
from .codesim import CodeSimulator, monte_carlo, tensor_square
from .config import Config, NumericsConfig, create_example_config, setup_logging
from .errors import DimensionError, QBroadcastError, ValidationError
from .quantum.pinching import check_count_bounds
from .regions import (
    FAMILIES,
    AtomTable,
    check_downward_closed,
    degraded_channel,
    double_markov_distribution,
    evaluate_region,
    get_spec,
    markov_chain_distribution,
    pareto_search,
    reproduce_final_region,
    slice_vertices,
    special_case_checks,
    superposition_distribution,
)
from .schema import CERTIFICATE_SCHEMA, TRIAL_SCHEMA, ChannelFile, DistributionFile, SimulationSpec
from .states.cq_state import AuxiliaryDistribution, ClassicalRegister, channel_to_cqstate
from .storage import ArtifactStore

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def read_document(path: str) -> Any:
    """Parse a JSON or YAML input file."""
    file = Path(path)
    if not file.exists():
        raise FileNotFoundError(f"Input file not found: {path}")
    text = file.read_text()
    if file.suffix in ('.yaml', '.yml'):
        return yaml.safe_load(text)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}", path)


def _validate(model, data: Any, path: str):
    """pydantic validation with the offending field path in the error."""
    try:
        return model.model_validate(data)
    except pydantic.ValidationError as e:
        first = e.errors()[0]
        loc = '.'.join(str(p) for p in first['loc']) or '<root>'
        raise ValidationError(first['msg'], f"{path}:{loc}")


def load_channel(path: str, numerics: Optional[NumericsConfig] = None):
    numerics = numerics or NumericsConfig()
    channel_file = _validate(ChannelFile, read_document(path), path)
    return channel_file.to_channel(numerics.density_tol, numerics.hermitian_tol)


def atom_table(channel, distribution: AuxiliaryDistribution, config: Config) -> AtomTable:
    """Atom table quantized and optimized as configured."""
    return AtomTable(
        channel,
        distribution,
        bits=config.numerics.quantization_bits,
        optimizer=config.optimizer,
        seed=config.runtime.seed,
    )


def load_distribution(path: str) -> AuxiliaryDistribution:
    return _validate(DistributionFile, read_document(path), path).to_distribution()


def load_simulation_spec(path: str) -> SimulationSpec:
    spec = _validate(SimulationSpec, read_document(path), path)
    base = Path(path).parent
    # instance paths are relative to the spec file
    updates = {
        name: str(base / getattr(spec, name))
        for name in ('channel', 'distribution')
        if not Path(getattr(spec, name)).is_absolute()
    }
    return spec.model_copy(update=updates)


def resolve_theorem(name: str, final: bool = True) -> str:
    """Family name ('marton') or theorem id ('marton_final') to a theorem id."""
    if name in FAMILIES:
        prelim, fin = FAMILIES[name]
        return fin if final else prelim
    return get_spec(name).theorem_id


def family_of(name: str) -> str:
    if name in FAMILIES:
        return name
    for family, ids in FAMILIES.items():
        if name in ids:
            return family
    raise ValidationError(f"unknown region family '{name}', expected one of {sorted(FAMILIES)}")


def run_metadata(config: Config, command: str) -> Dict[str, Any]:
    return {
        'command': command,
        'seed': config.runtime.seed,
        'certificate_tol': config.numerics.certificate_tol,
        'cluster_tol': config.numerics.cluster_tol,
        'dim_cap': config.numerics.dim_cap,
        'version': __version__,
    }


def apply_overrides(config: Config, args: argparse.Namespace) -> Config:
    """Command-line values take precedence over file and environment values."""
    if args.seed is not None:
        config.runtime.seed = args.seed
    if args.workers is not None:
        config.runtime.workers = args.workers
    if args.out is not None:
        config.runtime.output_dir = args.out
    if args.tol is not None:
        config.numerics.certificate_tol = args.tol
    if args.dim_cap is not None:
        config.numerics.dim_cap = args.dim_cap
    if args.trials is not None:
        config.simulation.trials = args.trials
    if args.alpha is not None:
        config.simulation.alpha = args.alpha
    if args.log_level is not None:
        config.logging.level = args.log_level
    return config


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args: argparse.Namespace, config: Config) -> int:
    trials = args.trials if args.trials is not None else 100
    summaries = run_suite(
        args.suite,
        trials,
        config.runtime.seed,
        config.numerics.certificate_tol,
        config.runtime.workers,
    )
    store = ArtifactStore(config.runtime.output_dir, run_metadata(config, 'verify'))
    rows = [c.to_row() for s in summaries for c in s.certificates]
    store.write_table(f"certificates_{args.suite}", pd.DataFrame(rows), CERTIFICATE_SCHEMA)
    store.write_json(f"verify_{args.suite}", {
        'suite': args.suite,
        'trials': trials,
        'lemmas': [s.to_dict() for s in summaries],
        'passed': all(s.passed for s in summaries),
    })

    print(f"Suite {args.suite}: {len(rows):,} certificates")
    for s in summaries:
        mark = '✓' if s.passed else '✗'
        print(f"  {mark} {s.lemma_id}: {s.stats['passed']:,} passed, {s.stats['failed']:,} failed, "
              f"{s.stats['errors']:,} errors (min margin {s.min_margin:.3e})")
    return EXIT_OK if all(s.passed for s in summaries) else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# region


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise ValidationError(f"missing required option(s) {missing}", args.region_command)


def region_evaluate(args: argparse.Namespace, config: Config, store: ArtifactStore) -> int:
    _require(args, 'theorem', 'channel', 'dist')
    theorem = resolve_theorem(args.theorem, final=not args.preliminary)
    channel = load_channel(args.channel, config.numerics)
    distribution = load_distribution(args.dist)
    instance = evaluate_region(
        theorem, channel, distribution, atom_table(channel, distribution, config), config.runtime.workers
    )
    report = instance.to_dict()
    report['downward_closed'] = check_downward_closed(
        instance.system, np.random.default_rng(config.runtime.seed)
    )
    store.write_json(f"region_{theorem}", report)

    keep = tuple(args.slice)
    if not instance.spec.is_preliminary and set(keep) <= set(instance.system.variables):
        vertices = slice_vertices(instance.system, keep)
        frame = pd.DataFrame([[float(a), float(b)] for a, b in vertices], columns=list(keep))
        store.write_csv(f"region_{theorem}_{keep[0]}_{keep[1]}", frame)
        print(f"  {len(vertices):,} vertices on the ({keep[0]}, {keep[1]}) slice")

    print(f"Region {theorem}: {len(instance.system):,} inequalities")
    for row in instance.system.inequalities:
        print(f"  {row}")
    if instance.spec.converse:
        print(f"  note: {report['banner']}")
    return EXIT_OK if report['downward_closed'] else EXIT_CHECK_FAILED


def region_fm_check(args: argparse.Namespace, config: Config, store: ArtifactStore) -> int:
    _require(args, 'theorem', 'channel', 'dist')
    family = family_of(args.theorem)
    prelim_id, final_id = FAMILIES[family]
    channel = load_channel(args.channel, config.numerics)
    distribution = load_distribution(args.dist)
    report = reproduce_final_region(
        prelim_id, final_id, channel, distribution, atom_table(channel, distribution, config), config.runtime.workers
    )
    passed = report.equal and report.conditions_hold
    data = report.to_dict()
    data['passed'] = passed
    store.write_json(f"fm_check_{family}", data)

    print(f"FM check {prelim_id} -> {final_id}")
    print(f"  Final in projection: {report.final_in_projection}")
    print(f"  Projection in final: {report.projection_in_final}")
    for tag, c in report.conditions.items():
        print(f"  Condition {tag}: {c['value']:.4f} ({'holds' if c['holds'] else 'fails'})")
    print(f"  Result: {'pass' if passed else 'FAIL'}")
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def _compare_instances(args: argparse.Namespace, config: Config):
    """Files when given, otherwise a seeded degraded channel with fresh distributions."""
    if args.channel is not None:
        channel = load_channel(args.channel, config.numerics)
        load = lambda p: load_distribution(p) if p else None  # noqa: E731
        return channel, load(args.dist), load(args.markov_dist), load(args.double_markov_dist)
    rng = np.random.default_rng(config.runtime.seed)
    channel = degraded_channel(rng, input_size=2, d_b=2)
    return (
        channel,
        superposition_distribution(rng, 2, 2).build(),
        markov_chain_distribution(rng, 2, 2, 2).build(),
        double_markov_distribution(rng, 2, 2, 2, 2).build(),
    )


def region_compare(args: argparse.Namespace, config: Config, store: ArtifactStore) -> int:
    channel, sup, markov, double = _compare_instances(args, config)
    if sup is None and markov is None and double is None:
        raise ValidationError("give at least one of --dist, --markov-dist, --double-markov-dist", 'compare')
    results = special_case_checks(channel, sup, markov, double, config.numerics.certificate_tol)
    store.write_json('region_compare', {
        'generated': args.channel is None,
        'checks': [r.to_dict() for r in results],
        'passed': all(r.passed for r in results),
    })
    print(f"Special-case checks: {len(results)}")
    for r in results:
        print(f"  {'✓' if r.passed else '✗'} {r.name}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


def region_pareto(args: argparse.Namespace, config: Config, store: ArtifactStore) -> int:
    _require(args, 'theorem', 'channel')
    theorem = resolve_theorem(args.theorem)
    spec = get_spec(theorem)
    channel = load_channel(args.channel, config.numerics)
    if args.samples is not None:
        config.search.samples = args.samples
    frontier = pareto_search(spec, channel, config.search, config.runtime.seed, config.runtime.workers)
    points = [p.to_dict(spec.rate_vars) for p in frontier]
    store.write_json(f"pareto_{theorem}", {'theorem_id': theorem, 'points': points})
    frame = pd.DataFrame([p['rates'] for p in points], columns=list(spec.rate_vars))
    store.write_csv(f"pareto_{theorem}", frame)
    print(f"Pareto search {theorem}: {len(points):,} frontier points from {config.search.samples:,} samples")
    return EXIT_OK


REGION_COMMANDS = {
    'evaluate': region_evaluate,
    'fm-check': region_fm_check,
    'compare': region_compare,
    'pareto': region_pareto,
}


def cmd_region(args: argparse.Namespace, config: Config) -> int:
    store = ArtifactStore(config.runtime.output_dir, run_metadata(config, f"region {args.region_command}"))
    return REGION_COMMANDS[args.region_command](args, config, store)


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args: argparse.Namespace, config: Config) -> int:
    spec = load_simulation_spec(args.spec)
    if args.seed is None:
        config.runtime.seed = spec.seed
    trials = args.trials if args.trials is not None else spec.trials
    if args.alpha is None and spec.alphas:
        alphas: List[float] = list(spec.alphas)
    else:
        alphas = [config.simulation.alpha]
    if any(not 0 < a < 1 for a in alphas):
        raise ValidationError(f"alpha must lie in (0, 1), got {alphas}", 'alpha')

    channel = load_channel(spec.channel, config.numerics)
    distribution = load_distribution(spec.distribution)
    if args.blocklength == 2:
        channel, distribution = tensor_square(channel, distribution, config.numerics.dim_cap)
    elif args.blocklength != 1:
        raise ValidationError(f"blocklength must be 1 or 2, got {args.blocklength}", 'blocklength')

    config.simulation.trials = trials
    simulator = CodeSimulator(
        spec.scenario, spec.rates, channel, distribution, config.simulation, cluster_tol=config.numerics.cluster_tol
    )
    result = monte_carlo(simulator, trials, config.runtime.seed, config.runtime.workers)
    bounds = {}
    for a in alphas:
        bounds[str(a)] = {}
        for r, b in simulator.bounds(a, config.optimizer, config.runtime.seed).items():
            entry = b.to_dict()
            if r in result.receivers:
                entry['within_bound'] = result.receivers[r].within_bound(b.petz)
            bounds[str(a)][r] = entry

    store = ArtifactStore(config.runtime.output_dir, run_metadata(config, 'simulate'))
    report = result.to_dict()
    report['blocklength'] = args.blocklength
    report['rates'] = spec.rates
    report['bounds'] = bounds
    store.write_json(f"simulate_{spec.scenario}", report)
    store.write_table(f"trials_{spec.scenario}", pd.DataFrame(result.rows()), TRIAL_SCHEMA)

    residual_ok = all(s.min_residual >= -1e-9 for s in result.receivers.values())
    chain_ok = all(s.chain_violations == 0 for s in result.receivers.values())
    sound = all(e.get('within_bound', True) for per_alpha in bounds.values() for e in per_alpha.values())
    print(f"Simulated {spec.scenario}: {len(result.trials):,} trials, encoder failure {result.encoder_failure:.3f}")
    for r, s in result.receivers.items():
        print(f"  {r}: error {s.mean:.4f} ± {s.stderr:.4f}, total {s.total_error:.4f}, HN bound {s.hn_mean:.4f}")
        for a in alphas:
            b = bounds[str(a)][r]
            vac = ' (vacuous)' if b['sandwiched_vacuous'] else ''
            mark = '' if b.get('within_bound', True) else ' EXCEEDED'
            print(f"    alpha={a}: petz {b['petz']:.4f}{mark}, sandwiched {b['sandwiched']:.4f}{vac}")
    passed = residual_ok and chain_ok and sound and len(result.trials) == trials
    return EXIT_OK if passed else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# eigencount


def _uniform_input(input_size: int) -> AuxiliaryDistribution:
    """U = X uniform, the default for a bare channel file."""
    return AuxiliaryDistribution.with_input_register(
        [ClassicalRegister('U', input_size)], np.full(input_size, 1.0 / input_size), 'U'
    )


def cmd_eigencount(args: argparse.Namespace, config: Config) -> int:
    channel = load_channel(args.base, config.numerics)
    distribution = load_distribution(args.dist) if args.dist else _uniform_input(channel.input_size)
    state = channel_to_cqstate(channel, distribution, args.receiver)
    report = check_count_bounds(
        state,
        args.n,
        config.numerics.cluster_tol,
        outer=args.outer,
        inner=args.inner,
        dim_cap=config.numerics.dim_cap,
        rng=np.random.default_rng(config.runtime.seed),
    )
    store = ArtifactStore(config.runtime.output_dir, run_metadata(config, 'eigencount'))
    store.write_json(f"eigencount_n{args.n}", report.to_dict())

    print(f"Distinct eigenvalue counts at n={args.n} ({args.receiver})")
    print(f"  {'count':<6}{'value':>10}{'bound':>16}")
    for name in ('nu', 'nu1', 'nu2'):
        value = getattr(report, name)
        if value is not None:
            print(f"  {name:<6}{value:>10,}{getattr(report, name + '_bound'):>16,.0f}")
    if not report.exhaustive:
        print(f"  sampled {report.sequences:,} sequences")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_init_config(args: argparse.Namespace, config: Config) -> int:
    create_example_config(args.path)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', default=None, help='Config file path (YAML)')
    common.add_argument('--seed', type=int, default=None, help='Master seed (overrides config)')
    common.add_argument('--tol', type=float, default=None, help='Certificate tolerance')
    common.add_argument('--trials', type=int, default=None, help='Instances or codebooks')
    common.add_argument('--alpha', type=float, default=None, help='Exponent parameter in (0, 1)')
    common.add_argument('--out', default=None, help='Output directory')
    common.add_argument('--workers', type=int, default=None, help='Worker threads')
    common.add_argument('--dim-cap', type=int, default=None, help='Largest dense dimension')
    common.add_argument('--log-level', default=None, help='Override log level')

    parser = argparse.ArgumentParser(
        prog='qbroadcast',
        description='Rate regions, operator certificates and one-shot codes for three-receiver quantum broadcast channels',
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest='command', required=True)

    verify = sub.add_parser('verify', parents=[common], help='Certify operator inequalities on random instances')
    verify.add_argument('--suite', choices=sorted(SUITES), default='lemmas')
    verify.set_defaults(handler=cmd_verify)

    region = sub.add_parser('region', help='Evaluate, project and compare rate regions')
    region_sub = region.add_subparsers(dest='region_command', required=True)
    for name in REGION_COMMANDS:
        p = region_sub.add_parser(name, parents=[common])
        p.add_argument('--theorem', default=None, help=f"Family {sorted(FAMILIES)} or theorem id")
        p.add_argument('--channel', default=None, help='Channel file (JSON or YAML)')
        p.add_argument('--dist', default=None, help='Distribution file')
        p.set_defaults(handler=cmd_region)
        if name == 'evaluate':
            p.add_argument('--preliminary', action='store_true', help='Use the preliminary system of a family')
            p.add_argument('--slice', nargs=2, default=['R0', 'R1'], metavar=('X', 'Y'),
                           help='Rate pair for the CSV vertex list')
        if name == 'compare':
            p.add_argument('--markov-dist', default=None, help='Distribution with U - V - X')
            p.add_argument('--double-markov-dist', default=None, help='Distribution over (U, V2, V3, X)')
        if name == 'pareto':
            p.add_argument('--samples', type=int, default=None, help='Random distributions to draw')

    simulate = sub.add_parser('simulate', parents=[common], help='Monte-Carlo one-shot code simulation')
    simulate.add_argument('--spec', required=True, help='Simulation spec file')
    simulate.add_argument('--blocklength', type=int, default=1, help='1, or 2 for two channel uses')
    simulate.set_defaults(handler=cmd_simulate)

    eigen = sub.add_parser('eigencount', parents=[common], help='Distinct-eigenvalue counts versus bounds')
    eigen.add_argument('--base', required=True, help='Channel file')
    eigen.add_argument('--dist', default=None, help='Distribution file (default: U = X uniform)')
    eigen.add_argument('--n', type=int, required=True, help='Tensor power')
    eigen.add_argument('--receiver', default='B1', choices=['B1', 'B2', 'B3'])
    eigen.add_argument('--outer', default='U', help='Register of the first level')
    eigen.add_argument('--inner', default=None, help='Register of the second level')
    eigen.set_defaults(handler=cmd_eigencount)

    init = sub.add_parser('init-config', parents=[common], help='Write an example config file')
    init.add_argument('path', nargs='?', default='qbroadcast.yaml')
    init.set_defaults(handler=cmd_init_config)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        base = Config.from_file(args.config) if args.config else Config.load()
        config = apply_overrides(base, args)
    except (FileNotFoundError, TypeError, yaml.YAMLError) as e:
        print(f"error: config: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    setup_logging(config.logging)

    try:
        return args.handler(args, config)
    except (FileNotFoundError, ValidationError, DimensionError, yaml.YAMLError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except QBroadcastError as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        return EXIT_CHECK_FAILED


if __name__ == '__main__':
    sys.exit(main())
