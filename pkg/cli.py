"""
Command-line interface: MSE reports, the worst case, and figure data

    python cli.py mse --dist uniform:2 --n 2
    python cli.py worst-case --n 100 --m inf --format json
    python cli.py phase-curve --start 0.05 --stop 2.0 --step 0.05 > gt_risk.csv
    python cli.py simulate --dist zipf:20:1 --n 50 --trials 100000 --seed 7
    python cli.py lemmas exp-quad --b -0.8

Exit codes: 0 success, 2 usage error, 1 computational error.
"""

import argparse
import dataclasses
import io
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from approx import mse_thm1, mse_thm2
from config import Config, format_number
from core import (
    Distribution,
    GTRiskError,
    ValidationError,
    build_distribution,
    dirac_uniform,
    uniform,
    zipf,
)
from exact import brute_force_mse, exact_mse, mse_occupancy_exact
from minimax import (
    alpha_landscape,
    beta_mode,
    central_derivative,
    exp_quad,
    exp_quad_curve,
    exp_quad_extremes,
    exp_quad_inflections,
    lambert_w0,
    phase_curve,
    solve_worst_case,
)
from montecarlo import monte_carlo_mse

logger = logging.getLogger(__name__)

SUBCOMMANDS = ('mse', 'worst-case', 'phase-curve', 'simulate', 'lemmas', 'landscape')
LEMMA_PARAMETERS = {
    'exp-quad': ('b',),
    'exp-quad-curve': ('b',),
    'beta-mode': ('a', 'b'),
    'lambert-w': ('x',),
}
LEMMAS = tuple(LEMMA_PARAMETERS)
FORMATS = ('csv', 'json')
DIST_REQUIRED = ('mse', 'simulate')


@dataclass
class RunConfig:
    subcommand: str
    dist_spec: str = None
    n: int = None
    m: str = 'inf'
    trials: int = None
    seed: int = 0
    output: str = None
    format: str = 'csv'
    oracle: bool = False
    occupancy: bool = False
    start: float = None
    stop: float = None
    step: float = None
    ratios: str = None
    n_ref: int = Config.DEFAULT_N_REF
    lemma: str = None
    a: float = None
    b: float = None
    x: float = None
    ratio: float = 0.8
    c_max: float = 5.0
    points: int = None
    u_max: float = 7.0

    def validate(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ValidationError(f"unknown subcommand {self.subcommand!r}")
        if self.format not in FORMATS:
            raise ValidationError(f"format must be one of {', '.join(FORMATS)}")
        if self.subcommand in DIST_REQUIRED and not self.dist_spec:
            raise ValidationError(f"{self.subcommand} needs exactly one --dist source")
        if self.subcommand in DIST_REQUIRED + ('worst-case',) and self.n is None:
            raise ValidationError(f"{self.subcommand} needs --n")
        if self.subcommand == 'simulate' and self.trials is None:
            raise ValidationError("simulate needs --trials")
        if self.subcommand == 'lemmas':
            needed = LEMMA_PARAMETERS.get(self.lemma)
            if needed is None:
                raise ValidationError(f"unknown lemma {self.lemma!r}; choose from {', '.join(LEMMAS)}")
            missing = [name for name in needed if getattr(self, name) is None]
            if missing:
                raise ValidationError(f"lemma {self.lemma} needs " + ', '.join('--' + name for name in missing))
        return self


# Distribution sources

def read_distribution_file(path):
    """One probability per line; '#' starts a comment"""
    values = []
    for number, line in enumerate(Path(path).read_text(encoding='utf-8').splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise ValidationError(f"{path}:{number}: not a probability: {line!r}")
    if not values:
        raise ValidationError(f"{path}: no probabilities found")
    # must already be a distribution within tolerance; then renormalize exactly
    Distribution(values)
    return build_distribution(values)


def parse_dist_spec(spec):
    """uniform:m, dirac-uniform:m:w, zipf:m:s, a file path, or inline weights"""
    if not spec or not spec.strip():
        raise ValidationError("empty distribution spec")
    spec = spec.strip()
    family, _, rest = spec.partition(':')
    args = rest.split(':') if rest else []
    try:
        if family == 'uniform' and len(args) == 1:
            return uniform(int(args[0]))
        if family == 'dirac-uniform' and len(args) == 2:
            return dirac_uniform(int(args[0]), float(args[1]))
        if family == 'zipf' and len(args) == 2:
            return zipf(int(args[0]), float(args[1]))
    except ValueError as e:
        if isinstance(e, ValidationError):
            raise
        raise ValidationError(f"cannot parse distribution spec {spec!r}: {e}")
    if family in ('uniform', 'dirac-uniform', 'zipf'):
        raise ValidationError(f"wrong number of parameters in {spec!r}")

    if Path(spec).is_file():
        return read_distribution_file(spec)
    try:
        weights = [float(token) for token in spec.split(',')]
    except ValueError:
        raise ValidationError(f"cannot parse distribution spec {spec!r}")
    return build_distribution(weights)


def parse_alphabet(value):
    if value is None or str(value).lower() in ('inf', 'infinity'):
        return math.inf
    try:
        return int(value)
    except ValueError:
        raise ValidationError(f"--m must be an integer or 'inf', got {value!r}")


def ratio_grid(config):
    if config.ratios:
        try:
            ratios = [float(token) for token in config.ratios.split(',') if token.strip()]
        except ValueError:
            raise ValidationError(f"cannot parse ratios {config.ratios!r}")
    else:
        if None in (config.start, config.stop, config.step):
            raise ValidationError("phase-curve needs --ratios or --start/--stop/--step")
        if config.step <= 0 or config.stop < config.start:
            raise ValidationError(
                f"empty ratio range [{config.start}, {config.stop}] step {config.step}")
        count = int(math.floor((config.stop - config.start) / config.step + 1e-9)) + 1
        ratios = [float(format_number(config.start + i * config.step)) for i in range(count)]
    if not ratios:
        raise ValidationError("empty ratio list")
    return sorted(ratios)


# Report builders

def _gap(a, b):
    if a is None or b is None:
        return None
    return abs(a - b)


def cmd_mse(config):
    dist = parse_dist_spec(config.dist_spec)
    n = config.n
    report = exact_mse(dist, n)
    thm1 = mse_thm1(dist, n) if n >= 2 else None
    thm2 = mse_thm2(dist, n)
    fields = {'m': dist.m, 'n': n}
    fields.update(dataclasses.asdict(report))
    fields.update({
        'mse_thm1': thm1,
        'mse_thm2': thm2,
        'gap_exact_thm1': _gap(report.mse, thm1),
        'gap_exact_thm2': _gap(report.mse, thm2),
        'gap_thm1_thm2': _gap(thm1, thm2),
    })
    if config.occupancy:
        fields['mse_occupancy'] = mse_occupancy_exact(dist, n)
    if config.oracle:
        fields['mse_oracle'] = brute_force_mse(dist, n)
    return fields


def cmd_worst_case(config):
    solution = solve_worst_case(parse_alphabet(config.m), config.n)
    return {
        'm': solution.m if math.isinf(solution.m) else int(solution.m),
        'n': solution.n,
        'alpha': solution.alpha,
        'w': solution.w,
        'c': solution.c,
        'regime': solution.regime.value,
        'mse_leading': solution.mse_leading,
        'uniform_support': solution.uniform_support,
        'atom_weight': solution.atom_weight,
        'total_support': solution.total_support,
    }


def cmd_phase_curve(config):
    rows = phase_curve(ratio_grid(config), config.n_ref)
    return pd.DataFrame(rows, columns=['b', 'mse'])


def cmd_simulate(config):
    dist = parse_dist_spec(config.dist_spec)
    result = monte_carlo_mse(dist, config.n, config.trials, config.seed)
    fields = {'m': dist.m, 'n': config.n}
    fields.update(dataclasses.asdict(result))
    exact = z_score = None
    if dist.m <= Config.MC_DESK_M:
        exact = exact_mse(dist, config.n).mse
        if result.std_error > 0:
            z_score = (result.mse_estimate - exact) / result.std_error
        elif result.mse_estimate == exact:
            z_score = 0.0
    fields.update({'exact_mse': exact, 'z_score': z_score})
    return fields


def cmd_landscape(config):
    points = 50 if config.points is None else config.points
    surface, _ = alpha_landscape(config.ratio, config.c_max, points)
    return pd.DataFrame(surface, columns=['c', 'w', 'alpha', 'feasible'])


def _beta_density(a, b):
    return lambda x: x**a * (1.0 - x) ** b


def cmd_lemmas(config):
    if config.lemma == 'exp-quad':
        b = config.b

        def g(u):
            return exp_quad(u, b)

        extremes = exp_quad_extremes(b)
        inflections = exp_quad_inflections(b)
        return {
            'b': b,
            'extremes': extremes,
            'extreme_residuals': [abs(central_derivative(g, u, 1)) for u in extremes],
            'inflections': inflections,
            'inflection_residuals': [abs(central_derivative(g, u, 2)) for u in inflections],
        }
    if config.lemma == 'exp-quad-curve':
        points = 100 if config.points is None else config.points
        u, g = exp_quad_curve(config.b, config.u_max, points)
        return pd.DataFrame({'u': u, 'g': g})
    if config.lemma == 'beta-mode':
        mode = beta_mode(config.a, config.b)
        density = _beta_density(config.a, config.b)
        h = min(1e-5, mode / 2, (1.0 - mode) / 2)
        return {
            'a': config.a,
            'b': config.b,
            'mode': mode,
            'value': density(mode),
            'residual': abs(central_derivative(density, mode, 1, h)),
        }
    if config.lemma == 'lambert-w':
        w = lambert_w0(config.x)
        return {'x': config.x, 'w': w, 'residual': abs(w * math.exp(w) - config.x)}
    raise ValidationError(f"unknown lemma {config.lemma!r}; choose from {', '.join(LEMMAS)}")


COMMANDS = {
    'mse': cmd_mse,
    'worst-case': cmd_worst_case,
    'phase-curve': cmd_phase_curve,
    'simulate': cmd_simulate,
    'lemmas': cmd_lemmas,
    'landscape': cmd_landscape,
}


def run(config):
    return COMMANDS[config.validate().subcommand](config)


# Output

def _csv_cell(value):
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (list, tuple, np.ndarray)):
        return ';'.join(_csv_cell(item) for item in value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return 'inf' if math.isinf(value) else format_number(value)
    return str(value)


def _json_value(value):
    if value is None or isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_json_value(item) for item in value]
    if isinstance(value, (int, np.integer)):
        return int(value)
    if math.isinf(value):
        return 'inf'
    return float(format_number(value))


def render(report, fmt):
    if fmt == 'json':
        if isinstance(report, pd.DataFrame):
            payload = {'rows': [{k: _json_value(v) for k, v in row.items()}
                                for row in report.to_dict(orient='records')]}
        else:
            payload = {k: _json_value(v) for k, v in report.items()}
        return json.dumps(payload, sort_keys=Config.JSON_SORT_KEYS) + '\n'

    if isinstance(report, pd.DataFrame):
        buffer = io.StringIO()
        report.to_csv(buffer, index=False, float_format=f'%.{Config.CSV_DIGITS}g', lineterminator='\n')
        return buffer.getvalue()
    header = ','.join(report)
    row = ','.join(_csv_cell(value) for value in report.values())
    return f"{header}\n{row}\n"


def emit(text, output=None):
    if output:
        with open(output, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# Argument parsing

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=FORMATS, default='csv')
    common.add_argument('--output', help='write here instead of stdout')
    common.add_argument('-v', '--verbose', action='store_true')

    parser = argparse.ArgumentParser(
        prog='gt-risk', description='Mean-squared error of the Good-Turing missing-mass estimator')
    sub = parser.add_subparsers(dest='subcommand', required=True)

    mse = sub.add_parser('mse', parents=[common], help='exact and asymptotic MSE')
    mse.add_argument('--dist', dest='dist_spec', required=True)
    mse.add_argument('--n', type=int, required=True)
    mse.add_argument('--oracle', action='store_true', help='add the brute-force enumeration')
    mse.add_argument('--occupancy', action='store_true', help='add the occupancy-variance expression')

    worst = sub.add_parser('worst-case', parents=[common], help='maximal MSE over alphabets of size m')
    worst.add_argument('--n', type=int, required=True)
    worst.add_argument('--m', default='inf')

    phase = sub.add_parser('phase-curve', parents=[common], help='alpha as a function of m/n')
    phase.add_argument('--start', type=float)
    phase.add_argument('--stop', type=float)
    phase.add_argument('--step', type=float)
    phase.add_argument('--ratios')
    phase.add_argument('--n-ref', type=int, default=Config.DEFAULT_N_REF)

    simulate = sub.add_parser('simulate', parents=[common], help='Monte-Carlo estimate of the MSE')
    simulate.add_argument('--dist', dest='dist_spec', required=True)
    simulate.add_argument('--n', type=int, required=True)
    simulate.add_argument('--trials', type=int, required=True)
    simulate.add_argument('--seed', type=int, default=0)

    landscape = sub.add_parser('landscape', parents=[common], help='alpha(w, c) over the program box')
    landscape.add_argument('--ratio', type=float, default=0.8)
    landscape.add_argument('--c-max', type=float, default=5.0)
    landscape.add_argument('--points', type=int)

    lemmas = sub.add_parser('lemmas', help='auxiliary lemma checks')
    lemma_sub = lemmas.add_subparsers(dest='lemma', required=True)
    exp_quad_parser = lemma_sub.add_parser('exp-quad', parents=[common])
    exp_quad_parser.add_argument('--b', type=float, required=True)
    curve = lemma_sub.add_parser('exp-quad-curve', parents=[common])
    curve.add_argument('--b', type=float, required=True)
    curve.add_argument('--u-max', type=float, default=7.0)
    curve.add_argument('--points', type=int)
    beta = lemma_sub.add_parser('beta-mode', parents=[common])
    beta.add_argument('--a', type=float, required=True)
    beta.add_argument('--b', type=float, required=True)
    lambert = lemma_sub.add_parser('lambert-w', parents=[common])
    lambert.add_argument('--x', type=float, required=True)
    return parser


def config_from_args(args):
    fields = {f.name for f in dataclasses.fields(RunConfig)}
    values = {k: v for k, v in vars(args).items() if k in fields and v is not None}
    return RunConfig(**values)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )
    try:
        config = config_from_args(args)
        emit(render(run(config), config.format), config.output)
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (GTRiskError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
