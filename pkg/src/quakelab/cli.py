"""Command-line experiment harness.

Exit codes: 0 success, 1 usage or I/O error, 2 experiment FAIL, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import shlex
import sys
from pathlib import Path

import numpy as np

from .barycentric import (
    DEFAULT_QUADRATURE,
    DEFAULT_TOL,
    ConvergenceError,
    SingularSampleError,
    asymptotic_conformality_profile,
    barycentric_extension,
    beltrami_estimate,
)
from .boundary import qs_constant_estimate, symmetric_modulus
from .circle import IdentityMap, InvalidMapError, MobiusMap
from .convergence import (
    DEFAULT_BANDWIDTH,
    DEFAULT_WINDOW_RADIUS,
    MeasureSequence,
    NoLimitError,
    TestWindow,
    convergence_experiment,
)
from .earthquake import Earthquake, normalize_three_points
from .formats import fmt, format_lamination, read_lamination, read_manifest, read_tabulated_map, table_to_csv
from .generators import GenerationError, gen_chain, gen_dyadic_family, gen_fan, gen_random_bounded
from .hyperbolic import TWO_PI, Mobius
from .lamination import DEFAULT_R0, LaminationError, asymptotic_profile, monte_carlo_norm, thurston_norm_with_witness
from .svg import line_plot

EXIT_USAGE, EXIT_FAIL, EXIT_NONCONVERGENCE = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a complex number like 0.3+0.1j, got {text!r}") from None


def _config_line(args, keys) -> str:
    return "# config: " + " ".join(f"{k}={getattr(args, k)}" for k in keys)


def _emit(text: str, path) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _write_svg(args, series, **kw) -> None:
    if getattr(args, "svg", None):
        Path(args.svg).write_text(line_plot(series, command=args.command_line, **kw))


# ---------------------------------------------------------------- commands


def cmd_gen(args) -> int:
    fam = args.family
    if fam == "random":
        if args.seed is None:
            raise UsageError("--seed is required for the random family")
        lam = gen_random_bounded(args.atoms, args.norm, args.seed, min_arc=args.min_arc)
    elif fam == "dyadic":
        rule = args.rule
        if "," in rule or rule.replace(".", "", 1).isdigit():
            rule = _floats(rule)
            if len(rule) < args.depth:
                raise UsageError("tabulated --rule needs one weight per level")
        lam = gen_dyadic_family(args.depth, rule, args.weight)
    elif fam == "fan":
        weights = _floats(args.weights) if args.weights else args.weight
        lam = gen_fan(args.atoms, args.vertex, weights)
    else:
        lam = gen_chain(args.weight, n_atoms=args.atoms, gap=args.gap)
    _emit(format_lamination(lam, header=args.command_line), args.output)
    return 0


def cmd_norm(args) -> int:
    lam = read_lamination(args.file)
    res = thurston_norm_with_witness(lam)
    print(_config_line(args, ["file", "samples", "seed"]))
    print(f"atoms: {len(lam)}")
    print(f"norm: {fmt(res.value)}")
    if res.witness is not None:
        a, b = (lam.atoms[i].geodesic for i in res.witness)
        print(f"witness: ({fmt(a.p)} {fmt(a.q)}) ({fmt(b.p)} {fmt(b.q)})")
    if args.samples:
        if args.seed is None:
            raise UsageError("--seed is required with --samples")
        print(f"monte_carlo_lower: {fmt(monte_carlo_norm(lam, args.samples, args.seed))}")
    return 0


def _boundary_of(args):
    lam = read_lamination(args.file)
    h = Earthquake(lam).boundary_map()
    if getattr(args, "normalize", "three") == "three":
        h = normalize_three_points(h)
    return lam, h


def cmd_boundary(args) -> int:
    _, h = _boundary_of(args)
    x = np.linspace(0.0, TWO_PI, args.grid, endpoint=False)
    y = h(x)
    print(_config_line(args, ["file", "grid", "normalize"]), file=sys.stderr)
    _emit(table_to_csv(["x", "E(x)"], zip(x, y)), args.output)
    lift = y[0] + np.concatenate([[0.0], np.cumsum(np.mod(np.diff(y), TWO_PI))])
    _write_svg(args, [("E", x, lift)], title="boundary map", xlabel="x", ylabel="E(x) (lifted)")
    return 0


def cmd_qs(args) -> int:
    _, h = _boundary_of(args)
    r = qs_constant_estimate(h, args.samples, args.seed)
    rows = [("cr_min", r.cr_min, *r.witness_min), ("cr_max", r.cr_max, *r.witness_max)]
    print(_config_line(args, ["file", "samples", "seed"]))
    print(f"unresolved_probes: {r.unresolved}")
    _emit(table_to_csv(["quantity", "value", "a", "b", "c", "d"], rows), args.output)
    return 0


def cmd_sym(args) -> int:
    _, h = _boundary_of(args)
    prof = symmetric_modulus(h, args.scales, args.samples, args.seed)
    print(_config_line(args, ["file", "scales", "samples", "seed"]))
    _emit(table_to_csv(["scale", "beta"], zip(prof.scales, prof.beta)), args.output)
    _write_svg(args, [("beta", prof.scales, prof.beta)], title="symmetry modulus", xlabel="scale", ylabel="beta",
               logx=True)
    return 0


def cmd_profile(args) -> int:
    lam = read_lamination(args.file)
    ts = sorted(args.tlist, reverse=True)
    vals = [asymptotic_profile(lam, t, args.samples, args.seed, args.r0) for t in ts]
    print(_config_line(args, ["file", "tlist", "samples", "seed", "r0"]))
    _emit(table_to_csv(["t", "profile"], zip(ts, vals)), args.output)
    _write_svg(args, [("profile", ts, vals)], title="asymptotic profile", xlabel="t", ylabel="max disk mass",
               logx=True)
    return 0


def cmd_converge(args) -> int:
    man = read_manifest(args.manifest)
    seq = MeasureSequence([read_lamination(p) for p in man.members], description=str(args.manifest))
    limit = read_lamination(man.limit)
    table = convergence_experiment(seq, limit, args.grid, TestWindow(args.window_r, args.bandwidth))
    print(_config_line(args, ["manifest", "grid", "window_r", "bandwidth"]))
    rows = [(r.index, r.norm, r.weak_star_discrepancy, r.boundary_sup_distance) for r in table.rows]
    _emit(table_to_csv(["index", "norm", "weak_star_discrepancy", "boundary_sup_distance"], rows), args.output)
    idx = [r.index for r in table.rows]
    _write_svg(args, [("weak*", idx, table.column("weak_star_discrepancy")),
                      ("boundary", idx, table.column("boundary_sup_distance"))],
               title="convergence", xlabel="index", ylabel="discrepancy", logy=True)
    verdict = "PASS" if table.passed else "FAIL"
    base = "three-point" if table.base is None else fmt(table.base.real) + "," + fmt(table.base.imag)
    print(f"# base: {base} spearman: {fmt(table.spearman)} verdict: {verdict} {'; '.join(table.notes)}".rstrip())
    return 0 if table.passed else EXIT_FAIL


def _map_of(args):
    if args.tabulated:
        return read_tabulated_map(args.tabulated)
    if args.mobius is not None:
        return MobiusMap(Mobius.moving_origin_to(args.mobius))
    if args.file:
        return Earthquake(read_lamination(args.file)).boundary_map()
    return IdentityMap()


def cmd_barycentric(args) -> int:
    h = _map_of(args)
    print(_config_line(args, ["file", "tabulated", "mobius", "at", "profile", "quadrature", "tol"]))
    if args.profile:
        prof = asymptotic_conformality_profile(h, args.profile, args.samples, args.quadrature)
        _emit(table_to_csv(["radius", "max_beltrami"], zip(prof.radii, prof.max_beltrami)), args.output)
        _write_svg(args, [("|Belt|", prof.radii, prof.max_beltrami)], title="asymptotic conformality",
                   xlabel="radius", ylabel="max |Beltrami|")
        return 0
    z = args.at if args.at is not None else 0j
    res = barycentric_extension(h, z, args.quadrature, args.tol)
    mu = beltrami_estimate(h, z, quadrature_n=args.quadrature).value
    rows = [(fmt(z.real), fmt(z.imag), res.w.real, res.w.imag, res.residual, res.iterations, mu.real, mu.imag, abs(mu))]
    _emit(table_to_csv(["z_re", "z_im", "w_re", "w_im", "residual", "iterations", "mu_re", "mu_im", "abs_mu"], rows),
          args.output)
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quakelab", description="Earthquakes along finite measured laminations: experiments and reports.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a lamination file")
    g.add_argument("--family", choices=["random", "dyadic", "fan", "chain"], required=True)
    g.add_argument("--atoms", type=int, default=10)
    g.add_argument("--norm", type=float, default=1.0)
    g.add_argument("--min-arc", type=float, default=0.02, help="smallest chord angle for random atoms")
    g.add_argument("--depth", type=int, default=4)
    g.add_argument("--rule", default="const", help="const, pow2, invsq, or comma-separated per-level weights")
    g.add_argument("--weight", type=float, default=1.0)
    g.add_argument("--weights", help="comma-separated fan weights")
    g.add_argument("--vertex", type=float, default=0.0)
    g.add_argument("--gap", type=float, default=0.3)
    g.add_argument("--seed", type=int)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    n = sub.add_parser("norm", help="exact norm with witness, optional Monte-Carlo lower bound")
    n.add_argument("file")
    n.add_argument("--samples", type=int, default=0)
    n.add_argument("--seed", type=int)
    n.set_defaults(func=cmd_norm)

    def map_args(sp):
        sp.add_argument("file")
        sp.add_argument("--normalize", choices=["three", "base"], default="three",
                        help="fix 0, pi/2, pi (three) or the stratum of 0 (base)")
        sp.add_argument("-o", "--output")

    b = sub.add_parser("boundary", help="tabulate the boundary map")
    map_args(b)
    b.add_argument("--grid", type=int, default=1024)
    b.add_argument("--svg")
    b.set_defaults(func=cmd_boundary)

    q = sub.add_parser("qs", help="sampled cross-ratio distortion bounds")
    map_args(q)
    q.add_argument("--samples", type=int, default=20000)
    q.add_argument("--seed", type=int, required=True)
    q.set_defaults(func=cmd_qs)

    s = sub.add_parser("sym", help="symmetry modulus per scale")
    map_args(s)
    s.add_argument("--scales", type=_floats, default=[0.1, 0.03, 0.01, 0.003, 0.001])
    s.add_argument("--samples", type=int, default=2000)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--svg")
    s.set_defaults(func=cmd_sym)

    pr = sub.add_parser("profile", help="max disk mass near the boundary per t")
    pr.add_argument("file")
    pr.add_argument("--tlist", type=_floats, default=[0.1, 0.03, 0.01, 0.003, 0.001])
    pr.add_argument("--samples", type=int, default=4000)
    pr.add_argument("--seed", type=int, required=True)
    pr.add_argument("--r0", type=float, default=DEFAULT_R0)
    pr.add_argument("-o", "--output")
    pr.add_argument("--svg")
    pr.set_defaults(func=cmd_profile)

    c = sub.add_parser("converge", help="joint decay table for a manifest of laminations")
    c.add_argument("manifest")
    c.add_argument("--grid", type=int, default=4096)
    c.add_argument("--window-r", type=float, default=DEFAULT_WINDOW_RADIUS)
    c.add_argument("--bandwidth", type=float, default=DEFAULT_BANDWIDTH)
    c.add_argument("-o", "--output")
    c.add_argument("--svg")
    c.set_defaults(func=cmd_converge)

    bc = sub.add_parser("barycentric", help="barycentric extension, Beltrami coefficient, conformality profile")
    src = bc.add_mutually_exclusive_group()
    src.add_argument("--file", help="lamination file (earthquake boundary map)")
    src.add_argument("--tabulated", help="two-column file of (angle, image angle)")
    src.add_argument("--mobius", type=_complex, help="Möbius map sending 0 to this point")
    mode = bc.add_mutually_exclusive_group()
    mode.add_argument("--at", type=_complex)
    mode.add_argument("--profile", type=_floats, help="radii")
    bc.add_argument("--samples", type=int, default=16)
    bc.add_argument("--quadrature", type=int, default=DEFAULT_QUADRATURE)
    bc.add_argument("--tol", type=float, default=DEFAULT_TOL)
    bc.add_argument("-o", "--output")
    bc.add_argument("--svg")
    bc.set_defaults(func=cmd_barycentric)
    return p


def _without_outputs(argv):
    """Drop output-path flags so recorded command lines do not depend on where files go."""
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a in ("-o", "--output", "--svg"):
            skip = True
            continue
        if a.startswith(("--output=", "--svg=")):
            continue
        out.append(a)
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.command_line = "quakelab " + shlex.join(_without_outputs(argv))
    try:
        return args.func(args)
    except UsageError as e:
        print(f"quakelab: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, LaminationError, GenerationError, InvalidMapError, ValueError) as e:
        print(f"quakelab: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, NoLimitError, SingularSampleError) as e:
        print(f"quakelab: numerical failure: {e}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
