#!/usr/bin/env python3
"""
FEI bounds toolkit - command-line entry point.

Every sub-command writes a table (CSV by default, --json for records) to
stdout or --out; progress lines go to stderr.

    python scripts/fei.py analyze --formula "x1 & x2"
    python scripts/fei.py bound lb1
    python scripts/fei.py verify-all --quick
"""
import argparse
import sys
import traceback
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

import pandas as pd

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.bf_core import (average_sensitivity, is_monotone, profile, read_truth_table,
                         write_truth_table)
from src.biased import bias_fixed_points, biased_profile
from src.bounds import (beta, emit_beta_curves, general_biased_bound, lb1, lb2, lb3, lb_gamma,
                        maximize_beta, named_profile, profile_expression, table1)
from src.config import get_setting, load_config
from src.errors import CheckFailed, FeiError
from src.formula import builtin, builtin_arity, evaluate, max_variable, parse, to_text, variables
from src.lex import (harper_check, influence_scan, lex_profile_exact, lex_profile_truncated,
                     parse_measure)
from src.lipschitz_niho import (delta_suite, expected_niho_multiset, lipschitz_suite, niho,
                                niho_gap, spectrum_multiset)
from src.profile_algebra import FunctionProfile
from src.search import search_balanced_ratio, search_biased_bases, verify_named
from src.verify import run_all, summarize

QUIET = False


def log(message: str):
    if not QUIET:
        print(message, file=sys.stderr)


def _cell(value):
    if isinstance(value, Fraction):
        return str(value)
    return value


def emit(df: pd.DataFrame, args, config: dict):
    """Write a table as CSV or JSON records to --out or stdout."""
    df = df.apply(lambda col: col.map(_cell)) if not df.empty else df
    if args.json:
        text = df.to_json(orient='records')
        text += '\n'
    else:
        text = df.to_csv(index=False, float_format=get_setting(config, 'output.float_format', '%.15g'))
    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        log(f"✅ Wrote {len(df)} rows to {path}")
    else:
        sys.stdout.write(text)


def _profile_row(prof: FunctionProfile, **extra) -> dict:
    row = dict(extra)
    row.update({'p': prof.p, 'I': prof.I, 'H': prof.H, 'E': prof.E, 'V': prof.V,
                'I_plus': prof.I_plus, 'H_plus': prof.H_plus})
    return row


def _int_list(text: str) -> List[int]:
    """'1,2,3' -> [1, 2, 3]."""
    try:
        values = [int(t) for t in text.split(',') if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _load_function(args):
    if getattr(args, 'table', None):
        return read_truth_table(Path(args.table).read_text())
    if getattr(args, 'builtin', None):
        node = builtin(args.builtin, args.param)
        return evaluate(node, args.n or builtin_arity(args.builtin, args.param))
    if getattr(args, 'formula', None):
        node = parse(args.formula)
        return evaluate(node, args.n or max_variable(node))
    raise argparse.ArgumentTypeError("give one of --formula, --builtin or --table")


# ---------------------------------------------------------------------------
# Sub-commands

def cmd_analyze(args, config) -> int:
    f = _load_function(args)
    row = _profile_row(profile(f), n=f.n)
    row['average_sensitivity'] = average_sensitivity(f)
    row['monotone'] = is_monotone(f)
    emit(pd.DataFrame([row]), args, config)
    return 0


def cmd_parse(args, config) -> int:
    node = parse(args.formula)
    row = {'formula': to_text(node), 'variables': len(variables(node)),
           'max_variable': max_variable(node)}
    if args.n:
        row['table'] = write_truth_table(evaluate(node, args.n)).split('\n')[1]
    emit(pd.DataFrame([row]), args, config)
    return 0


def cmd_lex(args, config) -> int:
    if args.scan:
        log("🔍 Scanning I[l<mu>] over the dyadic grid and small rationals...")
        scan = influence_scan(grid_bits=args.grid_bits or get_setting(config, 'lex.scan_grid_bits', 16),
                              max_denominator=get_setting(config, 'lex.scan_max_denominator', 24))
        df = pd.DataFrame([{'mu': mu, 'I': scan.maximum} for mu in scan.argmax])
    elif args.harper:
        log(f"🔍 Checking Harper minimality over every function on {args.harper} variables...")
        df = harper_check(args.harper)
    else:
        if args.exact and args.bits:
            raise argparse.ArgumentTypeError("--exact and --bits are mutually exclusive")
        mu = parse_measure(args.mu, exact=args.exact)
        if isinstance(mu, Fraction) and not args.bits:
            lp = lex_profile_exact(mu)
        else:
            lp = lex_profile_truncated(mu, args.bits or get_setting(config, 'lex.truncation_bits', 60))
        df = pd.DataFrame([{'mu': lp.mu, 'I': lp.I, 'H': lp.H, 'error_bound_I': lp.error_bound_I,
                            'error_bound_H': lp.error_bound_H, 'bits': lp.bits}])
    emit(df, args, config)
    return 0


def cmd_compose(args, config) -> int:
    prof = profile_expression(args.expr)
    emit(pd.DataFrame([_profile_row(prof, expr=args.expr)]), args, config)
    return 0


def cmd_biased(args, config) -> int:
    f = _load_function(args)
    if args.fixed_points:
        scan = bias_fixed_points(f)
        if scan.degenerate:
            log("⚠️  E_g is the identity; every bias is a fixed point")
        rows = [{'rho': fp.eta, 'p': fp.p, 'derivative': fp.derivative,
                 'attractive': fp.attractive} for fp in scan.points]
        emit(pd.DataFrame(rows, columns=['rho', 'p', 'derivative', 'attractive']), args, config)
        return 0
    bp = biased_profile(f, args.eta)
    row = {'eta': args.eta, 'I_tilde': bp.I_tilde, 'H_tilde': bp.H_tilde}
    for i, w in enumerate(bp.coord_influences, start=1):
        row[f'I_{i}'] = float(w)
    emit(pd.DataFrame([row]), args, config)
    return 0


def cmd_bound(args, config) -> int:
    tol = args.tol or get_setting(config, 'numerics.tol', 1e-12)
    if args.name == 'general':
        if args.p is None:
            raise argparse.ArgumentTypeError("bound general needs --p")
        g = _load_function(args)
        value = general_biased_bound(g, parse_measure(args.p))
        emit(pd.DataFrame([{'name': 'general', 'p': args.p, 'value': value}]), args, config)
        return 0

    start = named_profile(args.profile)
    if args.name == 'lb1':
        report = lb1()
    elif args.name == 'lb2':
        report = lb2(bits=args.bits or get_setting(config, 'lex.certified_bits', 100))
    elif args.name == 'lb3':
        report = lb3(start, tol)
    else:
        report = lb_gamma(start, tol)

    marker = "✅" if report.passed else ("⚠️ " if report.informational else "❌")
    log(f"{marker} {report.name}: {report.value:.12f} (target {report.target})")
    emit(pd.DataFrame([report.model_dump()]), args, config)
    if not report.passed and not report.informational:
        raise CheckFailed(report.name, f"certified {report.certified_value} <= {report.target}")
    return 0


def cmd_table1(args, config) -> int:
    max_m = args.max_m or get_setting(config, 'table1.max_m', 10)
    log(f"🔍 Computing g_m for m = 2..{max_m}...")
    emit(table1(max_m=max_m), args, config)
    return 0


def cmd_beta(args, config) -> int:
    if args.z is not None:
        tol = args.tol or get_setting(config, 'numerics.tol', 1e-12)
        emit(pd.DataFrame([{'z': args.z, 'beta': beta(args.z, tol)}]), args, config)
        return 0
    levels = args.levels or get_setting(config, 'beta_curves.levels', [1, 2, 3, 5, 10, 100])
    grid = args.grid or get_setting(config, 'beta_curves.grid', 512)
    emit(emit_beta_curves(levels, grid), args, config)
    return 0


def cmd_maximize_beta(args, config) -> int:
    best = maximize_beta(window=tuple(get_setting(config, 'maximize_beta.window', [0.4, 0.6])),
                         grid_points=get_setting(config, 'maximize_beta.grid_points', 1001),
                         xatol=get_setting(config, 'maximize_beta.xatol', 1e-10),
                         tol=args.tol or get_setting(config, 'numerics.tol', 1e-12))
    if not best.unimodal:
        log("⚠️  beta is not unimodal on the grid; reporting the grid maximum")
    emit(pd.DataFrame([{'z_star': best.z_star, 'beta_star': best.beta_star,
                        'unimodal': best.unimodal, 'grid_argmax': best.grid_argmax}]), args, config)
    return 0


def cmd_lipschitz(args, config) -> int:
    seed = args.seed if args.seed is not None else get_setting(config, 'lipschitz.seed', 0)
    if args.deltas:
        instances = args.trials or get_setting(config, 'lipschitz.delta_instances', 200)
        df = delta_suite(instances, args.max_n or get_setting(config, 'lipschitz.delta_max_n', 10), seed,
                         n=args.n)
    else:
        trials = args.trials or get_setting(config, 'lipschitz.trials', 500)
        df = lipschitz_suite(trials, args.max_n or get_setting(config, 'lipschitz.max_n', 12), seed,
                             n=args.n)
    log(f"✅ {len(df)} random flips within bounds")
    emit(df, args, config)
    return 0


def cmd_niho(args, config) -> int:
    degrees = args.n or get_setting(config, 'niho.degrees', [4, 8, 12])
    if args.emit_spectrum:
        if args.emit_spectrum == 'json':
            args.json = True
        rows = []
        for n in degrees:
            log(f"🔍 Building Tr(a^r) on GF(2^{n})...")
            counts = spectrum_multiset(niho(n))
            if counts != expected_niho_multiset(n):
                log(f"❌ n={n}: spectrum differs from the four-valued multiset")
            rows.extend({'n': n, 'value': value, 'count': count}
                        for value, count in sorted(counts.items()))
        emit(pd.DataFrame(rows, columns=['n', 'value', 'count']), args, config)
        return 0

    rows = []
    for n in degrees:
        log(f"🔍 Building Tr(a^r) on GF(2^{n})...")
        counts = spectrum_multiset(niho(n))
        gap = niho_gap(n)
        if not gap.exceeds_threshold:
            log(f"⚠️  n={n}: gap {gap.gap:.6f} does not exceed 8/(3 sqrt N) = {gap.threshold:.6f}")
        rows.append({'n': n, 'gap': gap.gap, 'threshold': gap.threshold, 'bound': gap.bound,
                     'exceeds_threshold': gap.exceeds_threshold,
                     'spectrum_matches': counts == expected_niho_multiset(n)})
    emit(pd.DataFrame(rows), args, config)
    return 0


def cmd_search(args, config) -> int:
    if args.mode == 'named':
        df = verify_named()
    elif args.mode == 'bases':
        max_vars = args.max_vars or get_setting(config, 'search.max_vars', 4)
        log(f"🔍 Scoring every base function on up to {max_vars} inputs...")
        df = search_biased_bases(max_vars=max_vars,
                                 top=args.top or get_setting(config, 'search.top', 20),
                                 prune=get_setting(config, 'search.prune', True) and not args.no_prune)
    else:
        n = args.n or get_setting(config, 'search.balanced_n', 4)
        log(f"🔍 Searching balanced functions on {n} inputs...")
        best = search_balanced_ratio(n)
        df = pd.DataFrame([{'n': best.n, 'code': best.function.to_int(),
                            'table': write_truth_table(best.function).split('\n')[1],
                            'I': best.I, 'H': best.H, 'C': best.C, 'candidates': best.candidates}])
    emit(df, args, config)
    return 0


def cmd_verify_all(args, config) -> int:
    log("🔍 Running acceptance checks" + (" (quick)" if args.quick else ""))
    log("=" * 80)

    def report(result):
        if result.passed:
            marker = "✅"
        elif result.informational:
            marker = "⚠️ "
        else:
            marker = "❌"
        log(f"{marker} {result.name:<18} {result.seconds:7.1f}s  {result.detail}")

    results = run_all(config, quick=args.quick, progress=report)
    counts = summarize(results)
    log("=" * 80)
    log(f"{counts['passed']} passed, {counts['failed']} failed, {counts['warned']} informational")
    emit(pd.DataFrame([{'check': r.name, 'passed': r.passed, 'informational': r.informational,
                        'detail': r.detail} for r in results]), args, config)
    return 1 if counts['failed'] else 0


# ---------------------------------------------------------------------------
# Parser

def _add_function_source(p: argparse.ArgumentParser):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument('--formula', help='formula text, e.g. "x1 & (x2 | !x3)"')
    src.add_argument('--builtin', help='named construction (AND, OR, g, G, g3, gprime3, g4, gprime4, tau, iota)')
    src.add_argument('--table', help='truth-table file (n=<int> then hex)')
    p.add_argument('--param', type=int, default=0, help='size parameter for --builtin')
    p.add_argument('--n', type=int, help='number of variables (default: largest index used)')


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--out', help='write output to this file instead of stdout')
    common.add_argument('--json', action='store_true', help='JSON records instead of CSV')
    common.add_argument('--seed', type=int, help='random seed for randomized suites')
    common.add_argument('--tol', type=float, help='series tolerance')
    common.add_argument('--bits', type=int, help='truncation bits for l<mu>')
    common.add_argument('--max-m', type=int, help='largest m for table1')
    common.add_argument('--config', help='YAML settings file (default: config/fei_config.yaml)')
    common.add_argument('--quiet', action='store_true', help='suppress progress lines')

    parser = argparse.ArgumentParser(prog='fei', description='Entropy/influence lower-bound toolkit')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('analyze', parents=[common], help='p, I, H of a Boolean function')
    _add_function_source(p)
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser('parse', parents=[common], help='canonical formula text')
    p.add_argument('--formula', required=True)
    p.add_argument('--n', type=int, help='also print the truth table on n variables')
    p.set_defaults(handler=cmd_parse)

    p = sub.add_parser('lex', parents=[common], help='profiles of lexicographic functions')
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument('--mu', help='measure, e.g. 2/3 (exact) or 0.618 (float)')
    mode.add_argument('--scan', action='store_true', help='maximise I[l<mu>] over a grid')
    mode.add_argument('--harper', type=int, help='Harper minimality check on n <= 4 variables')
    p.add_argument('--grid-bits', type=int)
    p.add_argument('--exact', action='store_true',
                   help='closed-form rational profile; mu must be a fraction')
    p.set_defaults(handler=cmd_lex)

    p = sub.add_parser('compose', parents=[common], help='profile algebra expression')
    p.add_argument('--expr', required=True, help="e.g. 'kappa(iota) & ~lex:2/3'")
    p.set_defaults(handler=cmd_compose)

    p = sub.add_parser('biased', parents=[common], help='biased influence and entropy')
    _add_function_source(p)
    p.add_argument('--eta', type=float, default=0.0, help='common bias in (-1, 1)')
    p.add_argument('--fixed-points', action='store_true', help='interior fixed points of E_g')
    p.set_defaults(handler=cmd_biased)

    p = sub.add_parser('bound', parents=[common], help='evaluate a lower bound')
    p.add_argument('name', choices=['lb1', 'lb2', 'lb3', 'gamma', 'general'])
    p.add_argument('--profile', '--start', dest='profile', default='iota',
                   help='starting profile for lb3/gamma (iota, lex2/3, lex:<mu>)')
    p.add_argument('--p', default=None, help='fixed point for the general bound')
    src = p.add_mutually_exclusive_group()
    src.add_argument('--formula')
    src.add_argument('--builtin')
    src.add_argument('--table')
    p.add_argument('--param', type=int, default=0)
    p.add_argument('--n', type=int)
    p.set_defaults(handler=cmd_bound)

    p = sub.add_parser('table1', parents=[common], help='g_m sequence table')
    p.set_defaults(handler=cmd_table1)

    p = sub.add_parser('beta', parents=[common], help='beta(z) or beta_m curves')
    p.add_argument('--z', type=float)
    p.add_argument('--levels', type=_int_list, help='comma-separated levels, e.g. 1,2,3,5,10,100')
    p.add_argument('--grid', type=int)
    p.set_defaults(handler=cmd_beta)

    p = sub.add_parser('maximize-beta', parents=[common], help='argmax of beta near 1/2')
    p.set_defaults(handler=cmd_maximize_beta)

    p = sub.add_parser('lipschitz', parents=[common], help='randomized single-flip suite')
    p.add_argument('--trials', type=int)
    p.add_argument('--n', type=int, help='number of variables (default: random 1..--max-n)')
    p.add_argument('--max-n', dest='max_n', type=int)
    p.add_argument('--deltas', action='store_true', help='check the Delta_k identities instead')
    p.set_defaults(handler=cmd_lipschitz)

    p = sub.add_parser('niho', parents=[common], help='trace-function entropy witness')
    p.add_argument('--n', type=int, nargs='+', choices=[4, 8, 12])
    p.add_argument('--emit-spectrum', choices=['csv', 'json'],
                   help='write the Walsh value multiset instead of the gap summary')
    p.set_defaults(handler=cmd_niho)

    p = sub.add_parser('search', parents=[common], help='exhaustive small-function searches')
    p.add_argument('mode', choices=['bases', 'balanced', 'named'])
    p.add_argument('--max-vars', type=int)
    p.add_argument('--top', type=int)
    p.add_argument('--no-prune', action='store_true')
    p.add_argument('--n', type=int)
    p.set_defaults(handler=cmd_search)

    p = sub.add_parser('verify-all', parents=[common], help='run every acceptance check')
    p.add_argument('--quick', action='store_true', help='skip the exhaustive 4-input base search')
    p.set_defaults(handler=cmd_verify_all)

    return parser


def dispatch(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run one sub-command and return its exit code."""
    global QUIET
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    QUIET = args.quiet

    try:
        config = load_config(args.config)
        return args.handler(args, config)
    except CheckFailed as e:
        log(f"❌ {e.check}: {e.detail}")
        return 1
    except (FeiError, argparse.ArgumentTypeError) as e:
        log(f"❌ {e}")
        return 1
    except Exception as e:
        print(f"\n❌ Error: {e}", file=sys.stderr)
        traceback.print_exc()
        return 1


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
