"""Command-line harness: sweeps, verification suites, and report emission."""

from __future__ import annotations

import argparse
import math
import random
import sys

import numpy as np

from . import cutoff, density, geometry, gram, quadrature

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _parse_m_values(args: argparse.Namespace) -> list[int]:
    if args.m_list:
        values = [int(tok) for tok in args.m_list.split(",") if tok.strip()]
    elif args.m_range:
        lo_s, _, hi_s = args.m_range.partition(":")
        lo, hi = int(lo_s), int(hi_s)
        if lo <= 0 or hi < lo:
            raise ValueError(f"bad m range {args.m_range!r}")
        values = sorted(
            {
                int(round(v))
                for v in np.logspace(math.log10(lo), math.log10(hi), args.points)
            }
        )
    else:
        values = []
    if values != sorted(values):
        raise ValueError("m values must be ascending")
    return values


def _out_stream(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline="\n"), True


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        m_values = _parse_m_values(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not m_values:
        print("error: empty sweep", file=sys.stderr)
        return EXIT_USAGE
    budget = gram.ErrorBudget(args.budget_c)
    v_degrees = [int(t) for t in args.v_degrees.split(",") if t.strip()] if args.v_degrees else []

    stream, close = _out_stream(args.out)
    try:
        try:
            result = density.remainder_sweep(args.rho, m_values, budget, v_degrees)
        except quadrature.QuadratureError as exc:
            stream.write(density.CSV_HEADER + "\n")
            stream.write(f"FAILED,{exc}\n")
            print(f"error: quadrature failure: {exc}", file=sys.stderr)
            return EXIT_FAIL
        if args.format == "csv":
            stream.write(density.sweep_to_csv(result))
        else:
            stream.write(density.sweep_to_json(result))
    finally:
        if close:
            stream.close()

    envelope_ok = all(
        abs(rep.remainder) <= density.remainder_envelope(rep.m) for rep in result.reports
    )
    print(f"fitted_C = {result.fitted_c!r}")
    print(f"envelope exp(-(log m)^2/8): {'PASS' if envelope_ok else 'FAIL'}")
    return EXIT_OK if envelope_ok else EXIT_FAIL


def _sample_points(rng: random.Random, count: int, r_lo: float, r_hi: float) -> list[complex]:
    pts = []
    for _ in range(count):
        r = rng.uniform(r_lo, r_hi)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        pts.append(complex(r * math.cos(theta), r * math.sin(theta)))
    return pts


def _suite_ode_residuals(args, rng) -> tuple[str, str]:
    worst = 0.0
    for rho in (-2.0, 0.0, 2.0):
        geom = geometry.ModelGeometry(rho)
        for z in _sample_points(rng, 40, 0.05, 0.6):
            worst = max(worst, abs(geometry.curvature_residual(geom, z, 1e-3)))
    geom = geometry.ModelGeometry(2.0)
    for _ in range(40):
        r = rng.uniform(0.35, 0.65)
        worst = max(worst, abs(geometry.polar_ode_residual(geom, r, 1e-3)))
    ok = worst <= 1e-5
    return ("PASS" if ok else "FAIL", f"max residual {worst:.3e} (tol 1e-5)")


def _suite_eta_bounds(args, rng) -> tuple[str, str]:
    profile = cutoff.get_profile(args.eta)
    max_d1 = max_d2 = 0.0
    neg_slope_ok = True
    for i in range(10_000):
        t = 1.2 * (i + 0.5) / 10_000
        if min(abs(t - k) for k in profile.knots) < 1e-6:
            continue
        d1 = profile.eta_d1(t)
        neg_slope_ok = neg_slope_ok and -d1 >= -1e-9
        max_d1 = max(max_d1, -d1)
        max_d2 = max(max_d2, abs(profile.eta_d2(t)))
    if not neg_slope_ok or max_d1 > 4.0 + 1e-9:
        return ("FAIL", f"slope bound violated (max -eta' = {max_d1:.3f})")
    if max_d2 > 8.0 + 1e-9:
        if max_d2 <= profile.d2_bound + 1e-9:
            return ("FLAG", f"profile {profile.name}: |eta''| <= {max_d2:.1f} (documented {profile.d2_bound:.0f}-bound variant)")
        return ("FAIL", f"|eta''| = {max_d2:.3f} exceeds documented bound")
    return ("PASS", f"max -eta' = {max_d1:.3f} <= 4, max |eta''| = {max_d2:.3f} <= 8")


def _suite_psi_hessian(args, rng) -> tuple[str, str]:
    profile = cutoff.get_profile(args.eta)
    geom = geometry.ModelGeometry(-2.0)
    worst = math.inf
    for m, p_prime in ((10**3, 2), (10**4, 2), (10**4, 3)):
        check = cutoff.psi_hessian_bound_check(
            cutoff.WeightParams(p_prime=p_prime, m=m), geom, profile
        )
        worst = min(worst, check.margin)
        if not check.passed:
            return ("FAIL", f"margin {check.margin:.3e} at (m={m}, p'={p_prime})")
    return ("PASS", f"min margin {worst:.3e}")


def _suite_quadrature(args, rng) -> tuple[str, str]:
    cfg = quadrature.QuadratureConfig(rel_tol=args.rel_tol)
    tol = 100.0 * args.rel_tol
    worst = 0.0
    for rho in (-2.0, -1.0, 0.0, 2.0):
        geom = geometry.ModelGeometry(rho)
        for m in (100, 1000, 10_000, 100_000):
            closed = quadrature.lambda0_closed_form(geom, m)
            numeric = quadrature.lambda_inv_sq(
                geom, m, 0, quadrature.truncation_radius(m), cfg
            ).value
            worst = max(worst, abs(numeric - closed) / closed)
    ok = worst <= tol
    return ("PASS" if ok else "FAIL", f"max rel dev {worst:.3e} (tol {tol:.1e})")


def _suite_schur(args, rng) -> tuple[str, str]:
    np_rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(200):
        k = int(np_rng.integers(2, 13))
        b = np_rng.normal(size=(k, k)) + 1j * np_rng.normal(size=(k, k))
        F = b @ b.conj().T + 0.5 * k * np.eye(k)
        F = 0.5 * (F + F.conj().T)
        G = gram.BorderedGram(entries=F)
        v1, _ = gram.schur_i00(G)
        v2 = gram.inverse00_oracle(G)
        v3 = gram.orthonormalize_i00(G)
        scale = max(abs(v1), abs(v2), abs(v3))
        worst = max(worst, abs(v1 - v2) / scale, abs(v1 - v3) / scale, abs(v2 - v3) / scale)
    ok = worst <= 1e-10
    return ("PASS" if ok else "FAIL", f"max pairwise rel dev {worst:.3e} (tol 1e-10)")


def _suite_cp1(args, rng) -> tuple[str, str]:
    worst = 0.0
    for m in list(range(1, 17)) + [32, 64]:
        for z in _sample_points(rng, 20, 0.0, 3.0):
            worst = max(worst, abs(density.cp1_density(m, z) - (m + 1)) / (m + 1))
    ok = worst <= 1e-9
    return ("PASS" if ok else "FAIL", f"max rel dev from m+1: {worst:.3e} (tol 1e-9)")


_SUITES = [
    ("ode_residuals", _suite_ode_residuals),
    ("eta_bounds", _suite_eta_bounds),
    ("psi_hessian", _suite_psi_hessian),
    ("quadrature_vs_closed_form", _suite_quadrature),
    ("schur_vs_inverse", _suite_schur),
    ("cp1_constancy", _suite_cp1),
]


def cmd_verify(args: argparse.Namespace) -> int:
    failures = []
    for name, suite in _SUITES:
        rng = random.Random(args.seed)
        status, detail = suite(args, rng)
        print(f"{status:4s} {name}: {detail}")
        if status == "FAIL":
            failures.append(name)
    if failures:
        print("failing suites: " + ", ".join(failures), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_cp1(args: argparse.Namespace) -> int:
    if args.m < 1 or args.samples < 1:
        print("error: m and samples must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    rng = random.Random(args.seed)
    reference = float(args.m + 1)
    max_dev = 0.0
    print("z_re,z_im,density,deviation")
    for z in _sample_points(rng, args.samples, 0.0, 3.0):
        value = density.cp1_density(args.m, z)
        dev = abs(value - reference) / reference
        max_dev = max(max_dev, dev)
        print(f"{z.real!r},{z.imag!r},{value!r},{dev!r}")
    print(f"closed form: {reference!r}; max relative deviation: {max_dev!r}")
    return EXIT_OK


def cmd_moments(args: argparse.Namespace) -> int:
    geom = geometry.ModelGeometry(args.rho)
    cfg = quadrature.QuadratureConfig(rel_tol=args.rel_tol)
    radius = args.radius if args.radius else quadrature.truncation_radius(args.m)
    print("alpha,beta,re,im")
    for alpha in range(args.max_degree + 1):
        for beta in range(args.max_degree + 1):
            try:
                val = quadrature.monomial_moment(geom, args.m, alpha, beta, radius, cfg)
            except quadrature.QuadratureError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_FAIL
            print(f"{alpha},{beta},{val.real!r},{val.imag!r}")
    return EXIT_OK


def cmd_gram(args: argparse.Namespace) -> int:
    geom = geometry.ModelGeometry(args.rho)
    degrees = [int(t) for t in args.degrees.split(",") if t.strip()] if args.degrees else []
    G = gram.assemble_truncated_gram(geom, args.m, degrees, gram.ErrorBudget(args.budget_c))
    stream, close = _out_stream(args.out)
    try:
        stream.write(G.to_json() + "\n")
    finally:
        if close:
            stream.close()
    value, (lo, hi) = gram.schur_i00(G)
    print(f"I00 schur = {value!r} interval [{lo!r}, {hi!r}]")
    print(f"I00 solve = {gram.inverse00_oracle(G)!r}")
    print(f"I00 factor = {gram.orthonormalize_i00(G)!r}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bergmanlab",
        description="Density expansion laboratory for constant-curvature surface models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--rel-tol", type=float, default=1e-12)
        p.add_argument("--eta", choices=("c1", "smooth"), default="c1")
        p.add_argument("--seed", type=int, default=0)

    p_sweep = sub.add_parser("sweep", help="density sweep over m")
    p_sweep.add_argument("--rho", type=float, required=True)
    p_sweep.add_argument("--m-range", help="LO:HI, log-spaced")
    p_sweep.add_argument("--points", type=int, default=5)
    p_sweep.add_argument("--m-list", help="comma-separated m values")
    p_sweep.add_argument("--budget-c", type=float, default=0.0)
    p_sweep.add_argument("--v-degrees", help="comma-separated extra degrees >= 2")
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.add_argument("--out", help="output path (default: stdout)")
    common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run all property suites")
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_cp1 = sub.add_parser("cp1", help="exact sphere-model density check")
    p_cp1.add_argument("--m", type=int, required=True)
    p_cp1.add_argument("--samples", type=int, default=20)
    common(p_cp1)
    p_cp1.set_defaults(func=cmd_cp1)

    p_mom = sub.add_parser("moments", help="monomial moment table")
    p_mom.add_argument("--rho", type=float, required=True)
    p_mom.add_argument("--m", type=int, required=True)
    p_mom.add_argument("--max-degree", type=int, default=3)
    p_mom.add_argument("--radius", type=float)
    common(p_mom)
    p_mom.set_defaults(func=cmd_moments)

    p_gram = sub.add_parser("gram", help="assemble and serialize a bordered Gram matrix")
    p_gram.add_argument("--rho", type=float, required=True)
    p_gram.add_argument("--m", type=int, required=True)
    p_gram.add_argument("--degrees", help="comma-separated extra degrees >= 2")
    p_gram.add_argument("--budget-c", type=float, default=1.0)
    p_gram.add_argument("--out", help="output path (default: stdout)")
    common(p_gram)
    p_gram.set_defaults(func=cmd_gram)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "rel_tol", None) is not None:
        if not 0.0 < args.rel_tol <= 1e-4:
            print("error: --rel-tol must lie in (0, 1e-4]", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except (geometry.DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
