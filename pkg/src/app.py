"""
Command-line driver - every experiment is a subcommand here.
Reads operators and functions from JSON files, runs the check, writes CSV/JSON
plus a manifest next to them, and reports the verdict through the exit code:
0 passed, 1 an invariant failed, 2 bad input or usage, 3 lambda too close to
the real axis.
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

import numpy as np
from tqdm import tqdm

from src.config import get_params
from src.core.errors import HalflineError, TooCloseToRealAxis
from src.core.operators import SpectralPoint, make_unitary
from src.example.neumann import (NeumannConfig, build_example_extension, default_forcing, default_probe_vector,
                                 field_samples, resolvent_table, run_example)
from src.io.codec import (load_function, load_hermitian, load_json, load_unitary,
                          resolvent_output_to_json, two_component_to_json, vector_from_json)
from src.logging.log_writer import ResultWriter, RunManifest
from src.probe.spectral import (NOT_EIGENVALUE, continuous_spectrum_scan, point_spectrum_table,
                                point_spectrum_test, scan_table)
from src.resolvent.extension import make_extension, resolve
from src.space.halfline import l2_norm
from src.triplet.boundary import deficiency_indices, green_defect
from src.utils.sampling import random_two_component, random_vector

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_REAL_AXIS = 3


def parse_grid(text: str) -> List[float]:
    """'start:stop:count' for an evenly spaced grid, or a comma-separated list."""
    text = (text or '').strip()
    if not text:
        return []
    if ':' in text:
        start, stop, count = text.split(':')
        return [float(x) for x in np.linspace(float(start), float(stop), int(count))]
    return [float(x) for x in text.split(',') if x.strip()]


def parse_lambda(text: str) -> complex:
    """Complex number in Python (0.5+1j) or maths (0.5+1i) notation."""
    s = (text or '').replace(' ', '')
    if s.endswith('i'):
        s = s[:-1] + 'j'
    try:
        return complex(s)
    except ValueError:
        raise ValueError(f"Cannot parse spectral parameter {text!r}")


def _manifest_inputs(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {'func', 'verbose', 'no_progress'}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(args: argparse.Namespace, name: str, report: Dict[str, Any], seed: Optional[int] = None) -> None:
    """Write a JSON report (plus manifest) if --out is given, else print it."""
    if args.out:
        writer = ResultWriter(args.out)
        writer.write_json(name, report)
        writer.write_manifest(RunManifest(args.command, _manifest_inputs(args), seed))
    else:
        print(json.dumps(report, sort_keys=True, indent=2))


def _extension_from_args(args: argparse.Namespace):
    """Extension from --example or from --A/--W files."""
    if args.example or not args.A:
        return build_example_extension(NeumannConfig(args.modes, args.phi))
    A = load_hermitian(args.A)
    W = load_unitary(args.W) if args.W else make_unitary(np.eye(A.dim))
    return make_extension(A, W, args.a, args.b)


def cmd_green_check(args: argparse.Namespace) -> int:
    A = load_hermitian(args.A)
    rng = np.random.default_rng(args.seed)
    tol = get_params()['residual_tol']

    defects = []
    for _ in tqdm(range(args.trials), desc="green", disable=args.no_progress):
        u = random_two_component(rng, A.dim, n_atoms=args.atoms)
        v = random_two_component(rng, A.dim, n_atoms=args.atoms)
        defects.append(abs(green_defect(u, v, A)) / (1.0 + l2_norm(u) * l2_norm(v)))

    max_defect = max(defects) if defects else 0.0
    report = {'dim': A.dim, 'trials': args.trials, 'seed': args.seed,
              'max_defect': max_defect, 'mean_defect': float(np.mean(defects)) if defects else 0.0,
              'passed': max_defect < tol}
    _emit(args, 'green_check.json', report, args.seed)
    if not report['passed']:
        logger.error(f"Green's identity defect {max_defect:.3e} exceeds {tol:.1e}")
        return EXIT_FAILED
    return EXIT_OK


def cmd_deficiency(args: argparse.Namespace) -> int:
    A = load_hermitian(args.A)
    left = deficiency_indices('left', A)
    right = deficiency_indices('right', A)
    _emit(args, 'deficiency.json', {'left': left.as_dict(), 'right': right.as_dict(), 'dim': A.dim})
    ok = (left.m, left.n) == (0, A.dim) and (right.m, right.n) == (A.dim, 0)
    if not ok:
        logger.error(f"Unexpected deficiency indices {left} / {right}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_resolve(args: argparse.Namespace) -> int:
    A = load_hermitian(args.A)
    W = load_unitary(args.W) if args.W else make_unitary(np.eye(A.dim))
    f = load_function(args.f)
    ext = make_extension(A, W, f.a, f.b)
    lam = SpectralPoint(parse_lambda(args.lam))

    out = resolve(ext, lam, f)
    tol = get_params()['residual_tol']
    _emit(args, 'resolvent.json', resolvent_output_to_json(out))
    ok = out.residual < tol and out.bc_defect < tol * max(1.0, l2_norm(f))
    if not ok:
        logger.error(f"Resolvent check failed: residual={out.residual:.3e}, bc_defect={out.bc_defect:.3e}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_spectrum_scan(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    xs = parse_grid(args.grid_re)
    eps = parse_grid(args.grid_im)
    if not xs or not eps:
        parser.error("spectrum-scan needs non-empty --grid-re and --grid-im")

    ext = _extension_from_args(args)
    f0 = vector_from_json(load_json(args.f0)) if args.f0 else default_probe_vector(ext.dim)
    reports = continuous_spectrum_scan(ext, xs, eps, f0, progress=not args.no_progress)
    table = scan_table(reports)

    if args.out:
        writer = ResultWriter(args.out)
        writer.write_csv('scan.csv', table)
        writer.write_json('scan.json', [dict(row, full_ratio=r.full_ratio)
                                        for row, r in zip(table.to_dict('records'), reports)])
        writer.write_manifest(RunManifest(args.command, _manifest_inputs(args)))
    else:
        sys.stdout.write(table.to_csv(index=False, float_format='%.17g', lineterminator='\n'))

    ok = all(r.satisfied for r in reports)
    if not ok:
        logger.error("Witness bound violated on part of the grid")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_point_spectrum(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    lambdas = parse_grid(args.lambdas)
    if not lambdas:
        parser.error("point-spectrum needs a non-empty --lambdas grid")
    ext = _extension_from_args(args)
    rng = np.random.default_rng(args.seed)

    reports = []
    for x in lambdas:
        for _ in range(args.trials):
            reports.append(point_spectrum_test(ext, x, random_vector(rng, ext.dim)))
    real_ok = all(r.verdict == NOT_EIGENVALUE for r in reports)
    if args.control:
        reports.append(point_spectrum_test(ext, complex(lambdas[0], args.control), random_vector(rng, ext.dim)))

    table = point_spectrum_table(reports)
    if args.out:
        writer = ResultWriter(args.out)
        writer.write_csv('point_spectrum.csv', table)
        writer.write_manifest(RunManifest(args.command, _manifest_inputs(args), args.seed))
    else:
        sys.stdout.write(table.to_csv(index=False, float_format='%.17g', lineterminator='\n'))
    return EXIT_OK if real_ok else EXIT_FAILED


def cmd_example(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.config:
        cfg_data = load_json(args.config)
        cfg = NeumannConfig(int(cfg_data.get('n_modes', args.modes)), float(cfg_data.get('phi', args.phi)))
    else:
        cfg = NeumannConfig(args.modes, args.phi)
    xs = parse_grid(args.grid_re)
    eps = parse_grid(args.grid_im)
    if not xs or not eps:
        parser.error("example needs non-empty --grid-re and --grid-im")

    grid = [SpectralPoint(complex(x, e)) for x in xs for e in eps]
    result = run_example(cfg, grid, progress=not args.no_progress)

    writer = ResultWriter(args.out)
    scan = scan_table(result.scan)
    writer.write_csv('scan.csv', scan)
    writer.write_json('scan.json', scan.to_dict('records'))
    writer.write_csv('resolvents.csv', resolvent_table(result.resolvents))
    writer.write_csv('point_spectrum.csv', point_spectrum_table(result.point_spectrum))
    if args.fields:
        ext = build_example_extension(cfg)
        out = resolve(ext, grid[0], default_forcing(cfg))
        writer.write_csv('fields.csv', field_samples(out.u, parse_grid(args.fields)))
        writer.write_json('field_solution.json', two_component_to_json(out.u))
    writer.write_manifest(RunManifest(args.command, _manifest_inputs(args)))

    if not result.passed():
        logger.error("Example checks failed")
        return EXIT_FAILED
    return EXIT_OK


def _add_extension_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--example", action="store_true",
                   help="Use the Neumann example operator (default when --A is absent)")
    p.add_argument("--modes", type=int, default=8, help="Cosine modes for the example")
    p.add_argument("--phi", type=float, default=0.0, help="Coupling phase for the example")
    p.add_argument("--A", type=str, help="Hermitian coefficient as JSON matrix")
    p.add_argument("--W", type=str, help="Unitary coupling as JSON matrix (default identity)")
    p.add_argument("--a", type=float, default=-1.0, help="Left anchor")
    p.add_argument("--b", type=float, default=1.0, help="Right anchor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Self-adjoint extensions of iu' + Au on two half-lines")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--no-progress", action="store_true", help="Hide progress bars")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("green-check", help="Randomized Green's identity check")
    p.add_argument("--A", type=str, required=True, help="Hermitian coefficient as JSON matrix")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--atoms", type=int, default=3, help="Atoms per half-line in random functions")
    p.add_argument("--seed", type=int, default=get_params()['seed'])
    p.add_argument("--out", type=str, help="Output directory")
    p.set_defaults(func=cmd_green_check)

    p = sub.add_parser("deficiency", help="Deficiency indices on both half-lines")
    p.add_argument("--A", type=str, required=True)
    p.add_argument("--out", type=str)
    p.set_defaults(func=cmd_deficiency)

    p = sub.add_parser("resolve", help="Apply the resolvent to a function")
    p.add_argument("--A", type=str, required=True)
    p.add_argument("--W", type=str)
    p.add_argument("--lambda", dest="lam", type=str, required=True, help="Spectral parameter, e.g. 0.5+1j or 0.5+1i")
    p.add_argument("--f", type=str, required=True, help="TwoComponentFunction JSON")
    p.add_argument("--out", type=str)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("spectrum-scan", help="Witness bound on a grid x + i eps")
    _add_extension_flags(p)
    p.add_argument("--grid-re", type=str, default="-10:10:21")
    p.add_argument("--grid-im", type=str, default="1,0.1,0.01")
    p.add_argument("--f0", type=str, help="Witness vector as JSON list of [re, im]")
    p.add_argument("--out", type=str)
    p.set_defaults(func=lambda args: cmd_spectrum_scan(args, p_scan))
    p_scan = p

    p = sub.add_parser("point-spectrum", help="Norm flatness of candidate eigenfunctions")
    _add_extension_flags(p)
    p.add_argument("--lambdas", type=str, default="-5:5:11", help="Real spectral parameters")
    p.add_argument("--trials", type=int, default=5, help="Random f0 per lambda")
    p.add_argument("--control", type=float, default=0.0,
                   help="Also run a control at Im lambda = CONTROL (0 disables)")
    p.add_argument("--seed", type=int, default=get_params()['seed'])
    p.add_argument("--out", type=str)
    p.set_defaults(func=lambda args: cmd_point_spectrum(args, p_point))
    p_point = p

    p = sub.add_parser("example", help="End-to-end Neumann example")
    p.add_argument("--config", type=str, help="JSON with n_modes and phi")
    p.add_argument("--modes", type=int, default=8)
    p.add_argument("--phi", type=float, default=np.pi / 3)
    p.add_argument("--grid-re", type=str, default="-10:10:21")
    p.add_argument("--grid-im", type=str, default="1,0.1,0.01")
    p.add_argument("--fields", type=str, help="t-points for x-space field samples, e.g. -3,-2,2,3")
    p.add_argument("--out", type=str, default="runs/example")
    p.set_defaults(func=lambda args: cmd_example(args, p_example))
    p_example = p

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s - %(levelname)s - %(message)s'
    )

    try:
        return args.func(args)
    except TooCloseToRealAxis as e:
        logger.error(f"{e}")
        return EXIT_REAL_AXIS
    except (HalflineError, ValueError, OSError) as e:
        logger.error(f"Bad input: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
