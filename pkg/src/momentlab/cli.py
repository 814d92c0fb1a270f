"""Command line entry point: verification suites, moment scans, CSV emission.

Determinism contract: given the same command line, seed and thread count,
every numeric column of an emitted CSV is byte-identical (fixed summation
order, 17-significant-digit formatting).  The wall-clock `seconds` column is
the one diagnostic exception; setting MOMENTLAB_FIXED_TIME=1 pins it to 0
for byte-level comparisons.

Scan CSV schema (shared by all experiments):

    q,ell,omega1_idx,omega2_idx,re,im,main_term,defect,seconds

  cubic:     re/im = T3, main_term = delta_{ell=1}, defect = |T3 - main|
  census:    re = proportion, main_term = count, defect = 0, ell = 0
  twist-sum: re/im = S, main_term = |S|/(M q)  (trivial-bound ratio),
             defect = |S|  (the exponent-fit column)
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from .ffcore import build_context, dft_prime, dft_naive, idft_prime, is_prime
from . import characters as chars
from .expsums import KloostermanSpec, kloosterman_direct, weil_scan
from .hecke import build_tau, twisted_divisor_table, twist_sum
from .lvalues import dirichlet_central, hurwitz_oracle, cusp_twist_central
from .moments import (census, census_cusp, cubic_moment_dirichlet, cubic_moment_cusp,
                      draw_twists, moment_parity_direct, moment_via_arithmetic)
from .tracefn import (SmoothCutoff, bilinear_experiment, correlation_scan,
                      from_additive, from_kloosterman)

DEFAULT_FIXTURES = "fixtures/derived.json"


@dataclass
class RunConfig:
    """Parsed run settings; round-trips to the exact command line."""

    command: list[str]
    threads: int = 1
    tolerance: dict = field(default_factory=dict)
    out: str | None = None
    seed: int = 0

    @staticmethod
    def from_env_and_file(command: list[str], config_path: str | None,
                          out: str | None, seed: int) -> "RunConfig":
        cfg = RunConfig(command=list(command), out=out, seed=seed)
        cfg.threads = int(os.environ.get("MOMENTLAB_THREADS", "1"))
        if config_path:
            for key, value in parse_config_file(config_path).items():
                if key == "threads":
                    cfg.threads = int(value)
                elif key.startswith("tol."):
                    cfg.tolerance[key[4:]] = float(value)
                elif key == "seed":
                    cfg.seed = int(value)
        return cfg

    def to_argv(self) -> list[str]:
        argv = list(self.command)
        if self.out:
            argv += ["--out", self.out]
        return argv


def parse_config_file(path: str) -> dict:
    """Line-oriented `key = value` file; '#' starts a comment."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line (need key = value): {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _seconds(t0: float) -> float:
    if os.environ.get("MOMENTLAB_FIXED_TIME"):
        return 0.0
    return round(time.perf_counter() - t0, 3)


def write_csv(path: str | None, header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)
    return text


def _parse_omega(spec: str, q: int, salt: int = 0) -> int:
    if spec.startswith("random:"):
        seed = int(spec.split(":", 1)[1])
        return draw_twists(q, seed + salt)[0]
    return int(spec) % (q - 1)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _check(name: str, ok: bool, detail: str = "") -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f"  {detail}" if detail else ""))
    return ok


def cmd_verify(args) -> int:
    q = args.q
    ctx = build_context(q)
    G = chars.character_group(ctx)
    rng = np.random.default_rng(args.seed)
    ok = True

    v = rng.normal(size=q) + 1j * rng.normal(size=q)
    d = dft_prime(v, ctx)
    ok &= _check("dft rader vs naive", np.abs(d - dft_naive(v, ctx)).max() < 1e-9)
    ok &= _check("dft round trip", np.abs(idft_prime(d, ctx) - v).max() < 1e-10)
    ok &= _check("parseval", abs(np.sum(np.abs(d) ** 2) - q * np.sum(np.abs(v) ** 2))
                 < 1e-10 * q * np.sum(np.abs(v) ** 2))

    worst = max(abs(chars.even_orthogonality_sum(ctx, a)
                    - chars.even_orthogonality_closed(ctx, a)) for a in range(1, q))
    ok &= _check("even orthogonality", worst < 1e-9, f"defect {worst:.2e}")

    worst = 0.0
    for kappa in (0, 1):
        for m in range(1, q):
            worst = max(worst, abs(chars.gauss_weighted_average(ctx, kappa, m)
                                   - chars.gauss_weighted_closed(ctx, kappa, m)))
    ok &= _check("eps-weighted average", worst < 1e-9, f"defect {worst:.2e}")

    worst = 0.0
    for _ in range(5):
        w1, w2 = rng.integers(0, q - 1, 2)
        for m in range(1, q):
            worst = max(worst, abs(chars.double_gauss_average(ctx, int(w1), int(w2), m)
                                   - chars.double_gauss_closed(ctx, int(w1), int(w2), m)))
    ok &= _check("double Gauss identity", worst < 1e-8, f"defect {worst:.2e}")

    worst = 0.0
    for _ in range(3):
        w1, w2 = rng.integers(0, q - 1, 2)
        for m in (1, 2, q - 1):
            resid = abs(chars.triple_gauss_average(ctx, int(w1), int(w2), m)
                        - chars.triple_gauss_closed(ctx, int(w1), int(w2), m))
            worst = max(worst, resid)
    ok &= _check("triple Gauss residual", worst <= 5 * q ** -1.5,
                 f"residual {worst:.2e} vs 5q^-1.5 = {5 * q**-1.5:.2e}")

    for k in (2, 3):
        tw = tuple(int(x) for x in rng.integers(0, q - 1, k))
        mx = weil_scan(KloostermanSpec(k=k, twists=tw, q=q), ctx)
        ok &= _check(f"Weil bound k={k}", mx <= k + 1e-9, f"max {mx:.6f}")

    return 0 if ok else 1


# ---------------------------------------------------------------------------
# moments / census / scans
# ---------------------------------------------------------------------------

def cmd_moment(args) -> int:
    t0 = time.perf_counter()
    q = args.q
    if args.which == "dirichlet":
        t1 = _parse_omega(args.omega1, q)
        t2 = _parse_omega(args.omega2, q, salt=1)
        m = cubic_moment_dirichlet(q, t1, t2, args.ell)
    elif args.which == "cusp":
        tab = build_tau(_tau_len_for(q))
        m = cubic_moment_cusp(q, args.ell, tab)
        t1 = t2 = 0
    else:  # cross-check
        if args.cusp:
            from .lvalues import AfeWeight, _left_line, weight_cut
            from .moments import cusp_moment_via_arithmetic, cusp_parity_direct

            spec_g = (("holomorphic", 12), ("dirichlet", args.parity % 2))
            wgt = AfeWeight(gamma_spec=spec_g, sigma_left=_left_line(spec_g))
            need = max(_tau_len_for(q), weight_cut(wgt, q ** 1.5) + 8)
            tab = build_tau(need)
            direct = cusp_parity_direct(q, args.ell, tab, args.parity)
            arith = cusp_moment_via_arithmetic(q, args.ell, tab, args.parity)
        else:
            t1 = _parse_omega(args.omega1, q)
            t2 = _parse_omega(args.omega2, q, salt=1)
            direct = moment_parity_direct(q, t1, t2, args.ell, args.parity)
            arith = moment_via_arithmetic(q, t1, t2, args.ell, args.parity)
        tol = 10 * args.ell / np.sqrt(q)
        print(f"direct  (L-values)   : {direct:.12f}")
        print(f"arithmetic (Kl3 side): {arith:.12f}")
        print(f"difference {abs(direct - arith):.3e}  vs tolerance {tol:.3e}")
        return 0 if abs(direct - arith) < tol else 1
    row = [q, m.ell, m.omega1, m.omega2, float(m.value.real), float(m.value.imag),
           float(m.main_term), float(m.defect), _seconds(t0)]
    write_csv(args.out, SCAN_HEADER, [row])
    return 0


def cmd_census(args) -> int:
    q = args.q
    if args.cusp:
        tab = build_tau(_tau_len_for(q))
        r = census_cusp(q, tab)
    else:
        t1, t2 = draw_twists(q, args.seed)
        r = census(q, t1, t2, seed=args.seed)
    print(json.dumps(asdict(r), default=float))
    return 0


SCAN_HEADER = ["q", "ell", "omega1_idx", "omega2_idx", "re", "im",
               "main_term", "defect", "seconds"]


def _tau_len_for(q: int) -> int:
    # enough lambda(n) for the conductor-q^2 AFE cut (~36 q in practice)
    return min(10**6, max(2000, int(38 * q) + 200))


def _scan_row_cubic(q: int, args) -> list:
    t0 = time.perf_counter()
    t1 = _parse_omega(args.omega1, q)
    t2 = _parse_omega(args.omega2, q, salt=1)
    m = cubic_moment_dirichlet(q, t1, t2, args.ell)
    return [q, m.ell, m.omega1, m.omega2, float(m.value.real), float(m.value.imag),
            float(m.main_term), float(m.defect), _seconds(t0)]


def _scan_row_census(q: int, args) -> list:
    t0 = time.perf_counter()
    t1, t2 = draw_twists(q, args.seed)
    r = census(q, t1, t2, seed=args.seed)
    return [q, 0, r.omega1, r.omega2, float(r.proportion), 0.0,
            float(r.count), 0.0, _seconds(t0)]


def _scan_row_twist(q: int, args) -> list:
    t0 = time.perf_counter()
    ctx = build_context(q)
    K = from_kloosterman(ctx, KloostermanSpec(k=3, twists=(0, 0, 0), q=q))
    cut = SmoothCutoff()
    if args.coeff == "tau":
        tab = build_tau(max(2000, int(2.2 * q) + 64))
        coeff = np.asarray(tab.lam, dtype=complex)
    else:
        _, idx, tval = args.coeff.split(":")
        coeff = twisted_divisor_table(ctx, int(idx), float(tval), int(2.2 * q) + 64)
    S, ratio = twist_sum(coeff, K.values, cut, float(q), sup_bound=K.sup_bound)
    return [q, 0, 0, 0, float(S.real), float(S.imag), float(ratio), float(abs(S)),
            _seconds(t0)]


def cmd_scan(args) -> int:
    qs = [int(s) for s in args.q_list.split(",")]
    for q in qs:
        if not is_prime(q):
            raise SystemExit(f"q = {q} is not prime")
    row_fn = {"cubic": _scan_row_cubic, "census": _scan_row_census,
              "twist-sum": _scan_row_twist}[args.experiment]
    cfg = RunConfig.from_env_and_file(["scan"], args.config, args.out, args.seed)
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            rows = list(pool.map(lambda q: row_fn(q, args), qs))
    else:
        rows = [row_fn(q, args) for q in qs]
    write_csv(args.out, SCAN_HEADER, rows)
    return 0


def cmd_correlation(args) -> int:
    q = args.q
    ctx = build_context(q)
    if args.kernel == "kl3":
        K = from_kloosterman(ctx, KloostermanSpec(k=3, twists=(0, 0, 0), q=q))
    elif args.kernel == "kl2":
        K = from_kloosterman(ctx, KloostermanSpec(k=2, twists=(0, 0), q=q))
    elif args.kernel == "additive":
        K = from_additive(ctx, [0, 1])
    else:
        raise SystemExit(f"unknown kernel {args.kernel!r} (kl2|kl3|additive)")
    if args.mode == "exhaustive":
        summ = correlation_scan(K, args.omega, args.threshold, ctx, mode="exhaustive",
                                keep_all=args.keep_all)
    else:
        parts = args.mode.split(":")
        if parts[0] != "sample" or len(parts) != 3:
            raise SystemExit("mode must be 'exhaustive' or 'sample:<n>:<seed>'")
        summ = correlation_scan(K, args.omega, args.threshold, ctx, mode="sample",
                                n_sample=int(parts[1]), seed=int(parts[2]),
                                keep_all=args.keep_all)
    rows = [[r.gamma.a, r.gamma.b, r.gamma.c, r.gamma.d, float(abs(r.value)), r.cls.tag]
            for r in summ.records]
    header = ["gamma_a", "gamma_b", "gamma_c", "gamma_d", "abs_corr", "class"]
    write_csv(args.out, header, rows)
    print(f"# scanned {summ.n_scanned}, exceeders {summ.n_exceed}, "
          f"parabolic {summ.parabolic_exceeders}, bruhat {summ.bruhat_exceeders}, "
          f"pairs {summ.torus_pairs}, goodness_ok {summ.goodness_ok}", file=sys.stderr)
    return 0


def cmd_twist_sum(args) -> int:
    rows = [_scan_row_twist(args.q, args)]
    write_csv(args.out, SCAN_HEADER, rows)
    return 0


def cmd_weil(args) -> int:
    q = args.q
    ctx = build_context(q)
    rng = np.random.default_rng(args.seed)
    ok = True
    for k in (2, 3):
        for _ in range(args.tuples):
            tw = tuple(int(x) for x in rng.integers(0, q - 1, k))
            mx = weil_scan(KloostermanSpec(k=k, twists=tw, q=q), ctx)
            ok &= _check(f"k={k} twists={tw}", mx <= k + 1e-9, f"max |Kl_{k}| = {mx:.6f}")
    return 0 if ok else 1


def cmd_lvalue(args) -> int:
    q = args.q
    ctx = build_context(q)
    if args.cusp:
        tab = build_tau(_tau_len_for(q))
        v1 = cusp_twist_central(ctx, args.chi, tab)
        v2 = cusp_twist_central(ctx, args.chi, tab, q_choice="g40")
        print(f"L(Delta x chi_{args.chi}, 1/2) = {v1.value:.12f}  ({v1.terms_used} terms)")
        print(f"damping cross-check delta = {abs(v1.value - v2.value):.3e}")
        return 0 if abs(v1.value - v2.value) < 1e-7 else 1
    v1 = dirichlet_central(ctx, args.chi)
    v2 = hurwitz_oracle(ctx, args.chi, 0.5)
    print(f"L(chi_{args.chi}, 1/2) = {v1.value:.12f}  ({v1.terms_used} terms, afe)")
    print(f"hurwitz oracle        = {v2:.12f}")
    print(f"|afe - oracle| = {abs(v1.value - v2):.3e}")
    return 0 if abs(v1.value - v2) < 1e-8 else 1


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

def compute_derived_fixtures() -> dict:
    """Every frozen [DERIVED] value, each produced by its stated oracle."""
    fx: dict[str, object] = {}

    ctx5 = build_context(5)
    fx["hurwitz.L_quad_mod5_half"] = _c2l(hurwitz_oracle(ctx5, 2, 0.5))
    ctx7 = build_context(7)
    fx["hurwitz.L_t1_mod7_half"] = _c2l(hurwitz_oracle(ctx7, 1, 0.5))
    fx["kloosterman.kl2_q5_a1"] = _c2l(kloosterman_direct(
        KloostermanSpec(2, (0, 0), 5), 1, ctx5))

    # correlation fixtures: q = 13, Kl3, principal twist
    ctx13 = build_context(13)
    K = from_kloosterman(ctx13, KloostermanSpec(3, (0, 0, 0), 13))
    summ_all = correlation_scan(K, 0, M=float("inf"), ctx=ctx13, mode="sample",
                                n_sample=100, seed=7, keep_all=True)
    med = float(np.median([abs(r.value) for r in summ_all.records]))
    fx["correlation.median_absC_q13_kl3_sample100_seed7"] = med
    M_thr = 2 * med / np.sqrt(13)
    summ = correlation_scan(K, 0, M=M_thr, ctx=ctx13, mode="exhaustive")
    fx["correlation.scan_q13_threshold"] = M_thr
    fx["correlation.scan_q13_exceeders"] = summ.n_exceed
    fx["correlation.scan_q13_histogram"] = summ.histogram

    # q = 11, Kl2 kernel: exceeding-set structure at a moderate threshold
    ctx11 = build_context(11)
    K2 = from_kloosterman(ctx11, KloostermanSpec(2, (0, 0), 11))
    all11 = correlation_scan(K2, 0, M=float("inf"), ctx=ctx11, mode="exhaustive",
                             keep_all=True)
    med11 = float(np.median([abs(r.value) for r in all11.records]))
    M11 = 2 * med11 / np.sqrt(11)
    scan11 = correlation_scan(K2, 0, M=M11, ctx=ctx11, mode="exhaustive")
    fx["correlation.scan_q11_kl2_threshold"] = M11
    fx["correlation.scan_q11_kl2_histogram"] = scan11.histogram

    # q = 13 cubic moment from oracle L-values (brute force over 12 characters)
    G = chars.character_group(ctx13)
    Ls = {t: hurwitz_oracle(ctx13, t, 0.5) for t in range(1, 12)}
    val = sum(Ls[t] ** 3 for t in range(1, 12)) / 12
    fx["moment.cubic_q13_trivial_ell1"] = _c2l(val)

    # twist-sum ratios across the q-list (tau coefficients, X = q)
    cut = SmoothCutoff()
    for q in (211, 401, 809, 1009, 2003):
        ctx = build_context(q)
        Kq = from_kloosterman(ctx, KloostermanSpec(3, (0, 0, 0), q))
        tab = build_tau(max(2000, int(2.2 * q) + 64))
        S, ratio = twist_sum(np.asarray(tab.lam, dtype=complex), Kq.values, cut,
                             float(q), sup_bound=Kq.sup_bound)
        fx[f"twist.q{q}_kl3_tau_absS"] = abs(S)
        fx[f"twist.q{q}_kl3_tau_ratio"] = ratio

    # bilinear ratios at q = 1009
    ctx1009 = build_context(1009)
    K1009 = from_kloosterman(ctx1009, KloostermanSpec(3, (0, 0, 0), 1009))
    for type1 in (False, True):
        r = bilinear_experiment(K1009, 31, 31, coeff_seed=7, ctx=ctx1009, type1=type1)
        fx[f"bilinear.q1009_{'type1' if type1 else 'general'}_ratio"] = r["ratio"]
    return fx


def _c2l(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def cmd_fixtures(args) -> int:
    if args.action != "record":
        raise SystemExit("only 'fixtures record' is supported")
    if args.suite != "derived":
        raise SystemExit(f"unknown suite {args.suite!r}")
    fx = compute_derived_fixtures()
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(fx, indent=1, sort_keys=True) + "\n")
    print(f"wrote {len(fx)} fixtures to {out}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="momentlab",
                                 description="desk-scale L-function moment workbench")
    ap.add_argument("--config", default=None, help="key = value config file")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("verify", help="run the exact-identity suite")
    p.add_argument("suite", choices=["identities"])
    p.add_argument("--q", type=int, default=13)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("moment", help="cubic moments")
    p.add_argument("which", choices=["dirichlet", "cusp", "cross-check"])
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--omega1", default="0")
    p.add_argument("--omega2", default="0")
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--parity", type=int, default=0)
    p.add_argument("--cusp", action="store_true",
                   help="cross-check the Delta moment instead of the Dirichlet one")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_moment)

    p = sub.add_parser("census", help="non-vanishing census")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--cusp", action="store_true")
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(fn=cmd_census)

    p = sub.add_parser("scan", help="experiments over a q list")
    p.add_argument("--q-list", required=True)
    p.add_argument("--experiment", choices=["cubic", "census", "twist-sum"],
                   required=True)
    p.add_argument("--omega1", default="0")
    p.add_argument("--omega2", default="0")
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--coeff", default="tau")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("correlation", help="twisted correlation scans")
    p.add_argument("action", choices=["scan"])
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--kernel", default="kl3")
    p.add_argument("--omega", type=int, default=0)
    p.add_argument("--mode", default="exhaustive")
    p.add_argument("--threshold", type=float, default=1.0,
                   help="M: exceeders are |C| > M sqrt(q)")
    p.add_argument("--keep-all", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_correlation)

    p = sub.add_parser("twist-sum", help="single twisted coefficient sum")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--kernel", default="kl3")
    p.add_argument("--coeff", default="tau", help="tau | divisor:<t_idx>:<t>")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_twist_sum)

    p = sub.add_parser("weil-scan", help="Weil bound scans")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--tuples", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_weil)

    p = sub.add_parser("lvalue", help="single central value with cross-check")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--chi", type=int, required=True)
    p.add_argument("--cusp", action="store_true")
    p.set_defaults(fn=cmd_lvalue)

    p = sub.add_parser("fixtures", help="record derived-oracle fixtures")
    p.add_argument("action", choices=["record"])
    p.add_argument("--suite", default="derived")
    p.add_argument("--out", default=DEFAULT_FIXTURES)
    p.set_defaults(fn=cmd_fixtures)
    return ap


def run(argv: list[str]) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    return args.fn(args)


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
