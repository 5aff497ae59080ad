"""Batch command-line front end.

Subcommands run verification suites and emit CSV/JSON reports:

    gfsl spherical-check  --lambda 0.3,1,5 --nu 0.1,0.3 --n 40 --k 8
    gfsl traces           --t 0.5,1,2 --genus 2 [--laplace-file F]
    gfsl selberg          --lmax 8 [--center 5.5 --sigma 0.5]
    gfsl means            --lambda 1,2,5 --m 8

Exit codes: 0 pass, 1 usage/config error, 2 verification failure,
3 resource budget exceeded.  Reports are byte-deterministic: floats are
written with shortest round-trip repr, keys are sorted, line endings LF.
"""

import argparse
import configparser
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import discrete, global_traces, means, selberg, spherical
from .errors import BudgetError, GfslError
from .specfun import legendre_conical

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY = 2
EXIT_BUDGET = 3


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, (np.floating,)):
        return repr(float(x))
    return str(x)


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _parse_floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _load_config(path):
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise GfslError(f"config file not found: {path}")
    flat = {}
    for section in cp.sections():
        for key, val in cp.items(section):
            flat[key.replace("_", "-")] = val
    for key, val in cp.defaults().items():
        flat[key.replace("_", "-")] = val
    return flat


_CONFIG_ALIASES = {"lambda": "lam"}


def _apply_config(args, flat):
    known = {k for k in vars(args)
             if not k.startswith("_set_") and k not in ("func", "command")}
    for key, val in flat.items():
        dest = _CONFIG_ALIASES.get(key, key).replace("-", "_")
        if dest not in known:
            raise GfslError(f"config: unknown field '{key}'")
        if getattr(args, f"_set_{dest}", False):
            continue  # explicit flag wins
        setattr(args, dest, val)
    return args


class _TrackSet(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        setattr(namespace, f"_set_{self.dest}", True)


def _add_common(sub):
    sub.add_argument("--config", default=None, action=_TrackSet)
    sub.add_argument("--tol", default="1e-9", action=_TrackSet)
    sub.add_argument("--threads",
                     default=os.environ.get("GFSL_THREADS", "1"),
                     action=_TrackSet)
    sub.add_argument("--out", default=".", action=_TrackSet)
    sub.add_argument("--format", default="csv", choices=("csv", "json"),
                     action=_TrackSet)


def cmd_spherical_check(args):
    tol = float(args.tol)
    lams = _parse_floats(args.lam)
    nus = _parse_floats(args.nu)
    n_ord = int(args.n)
    k_ord = int(args.k)
    params = [("principal", lam, spherical.SpectralParam.principal(lam))
              for lam in lams]
    params += [("complementary", nu, spherical.SpectralParam.complementary(nu))
               for nu in nus]

    def one(job):
        regime, val, p = job
        ops = spherical.build_k_matrices(p, k_ord)
        rows = []
        for branch, renorm in (("plus", False), ("minus", False)):
            tab = (spherical.coeffs_plus(p, n_ord, k_ord) if branch == "plus"
                   else spherical.coeffs_minus(p, n_ord, k_ord, renormalized=renorm))
            res = spherical.intertwine_residual(p, tab, ops)
            for rel in ("X", "U", "S"):
                rows.append((regime, val, f"{branch}:{rel}", res[rel]))
        return rows

    with ThreadPoolExecutor(max_workers=max(1, int(args.threads))) as pool:
        chunks = list(pool.map(one, params))
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "spherical_residuals.csv",
              ["regime", "lambda", "relation", "max_residual"], rows)
    worst = max(r[3] for r in rows)
    print(f"spherical-check: {len(rows)} relations, worst residual {worst:.3e}")
    return EXIT_OK if worst < tol else EXIT_VERIFY


def cmd_traces(args):
    tol = float(args.tol)
    ts = _parse_floats(args.t)
    genus = int(args.genus)
    if args.laplace_file:
        spec = global_traces.LaplaceSpectrum.from_csv(args.laplace_file, genus)
    else:
        spec = global_traces.LaplaceSpectrum([], genus)
    entries = []
    for t in ts:
        tr = spherical.trace_spherical(spherical.SpectralParam.threshold(), t)
        entries.append({
            "identity": "spherical_flat_vs_spectral", "t": t, "lambda": 0.0,
            "lhs": tr["flat"],
            "rhs": tr["spectral_partial"][-1] + tr["tail_exact"][-1],
        })
        td = discrete.trace_ds(2, t)
        entries.append({
            "identity": "discrete_flat_vs_spectral", "t": t, "l": 2,
            "lhs": td["flat"],
            "rhs": td["spectral_partial"][-1] + td["tail_exact"][-1],
        })
        entries.append({
            "identity": "pre_rr_vs_post_rr", "t": t, "genus": genus,
            "lhs": global_traces.global_trace(spec, t, global_traces.PRE_RR,
                                              q_max=200),
            "rhs": global_traces.global_trace(spec, t, global_traces.POST_RR),
        })
        th = selberg.tanh_transform(t)
        entries.append({
            "identity": "tanh_fourier", "t": t,
            "lhs": th["pole_sum"], "rhs": th["closed_form"],
            "tail_bound": th["tail_bound"],
        })
    worst = 0.0
    for e in entries:
        e["abs_err"] = abs(e["lhs"] - e["rhs"])
        allowed = tol + e.get("tail_bound", 0.0)
        if e["abs_err"] > allowed:
            worst = max(worst, e["abs_err"] - allowed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / "traces.json", {"identities": entries})
    print(f"traces: {len(entries)} identities checked")
    ln2 = math.log(2.0)
    for e in entries:
        if abs(e["t"] - ln2) < 1e-9 and e["identity"] != "tanh_fourier":
            print(f"  {e['identity']} @ t=ln2: lhs={e['lhs']:.9g} "
                  f"rhs={e['rhs']:.9g} abs_err={e['abs_err']:.2e}")
    return EXIT_OK if worst == 0.0 else EXIT_VERIFY


def cmd_selberg(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    l_max = float(args.lmax)
    if l_max > 8.0:
        raise GfslError("--lmax must be <= 8 (desk scale)")
    try:
        group = selberg.bolza_group()
        ls = selberg.length_spectrum(group, l_max)
    except BudgetError as exc:
        print(f"selberg: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    ls.to_csv(out / "length_spectrum.csv")
    checks = {"relator_residual": group.relator_residual()}
    sys_expect = 2.0 * math.acosh(1.0 + math.sqrt(2.0))
    checks["systole"] = ls.systole
    checks["systole_error"] = abs(ls.systole - sys_expect)
    ok = checks["relator_residual"] < 1e-9 and checks["systole_error"] < 1e-9
    g = selberg.GaussianTestFn(float(args.center), float(args.sigma), 1.0)
    laplace = [(0.0, 1)]
    discs = []
    grid = [x for x in (5.0, 6.0, 7.0, 8.0) if x <= l_max]
    for lm in grid:
        sub = selberg.LengthSpectrum(
            [(ell, m) for ell, m in ls.primitives if ell <= lm + 1e-12], lm)
        rep = selberg.wave_trace_pair(sub, g, laplace=laplace)
        discs.append(rep.discrepancy)
    monotone = all(b <= a + 1e-12 for a, b in zip(discs, discs[1:]))
    checks["discrepancies"] = discs
    checks["discrepancy_monotone"] = monotone
    checks["weyl"] = selberg.weyl_consistency(ls)["rows"]
    ok = ok and monotone
    rep = selberg.wave_trace_pair(ls, g, laplace=laplace)
    payload = json.loads(rep.to_json())
    payload["checks"] = checks
    write_json(out / "selberg_report.json", payload)
    print(f"selberg: systole {ls.systole:.9f}, relator residual "
          f"{checks['relator_residual']:.2e}, monotone={monotone}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_means(args):
    tol = float(args.tol)
    lams = _parse_floats(args.lam)
    m_top = int(args.m)

    def conv_rows(lam):
        rows = []
        t = 3.0
        target = legendre_conical(lam, t)
        for m in range(m_top + 1):
            val = means.hc_partial_sum(lam, t, m)
            rows.append((lam, t, m, val, abs(val - target)))
        return rows

    with ThreadPoolExecutor(max_workers=max(1, int(args.threads))) as pool:
        chunks = list(pool.map(conv_rows, lams))
    conv = [r for c in chunks for r in c]
    conv.sort(key=lambda r: (r[0], r[2]))
    rows = []
    ok = True
    for lam in lams:
        fit = means.wave_residual(lam)
        phi0 = legendre_conical(lam, 0.0)
        defect = means.w_symbol_defect(lam)
        bound = 0.2 / lam if lam >= 5.0 else float("inf")
        rows.append((lam, fit.slope, int(fit.floor_limited), phi0, defect,
                     bound))
        ok = ok and (fit.floor_limited or abs(fit.slope + 2.0) <= 0.1)
        ok = ok and phi0 == 1.0 and defect <= bound
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "hc_convergence.csv",
              ["lambda", "t", "m_max", "partial_sum", "abs_err"], conv)
    write_csv(out / "wave_slopes.csv",
              ["lambda", "slope", "floor_limited", "phi_at_zero",
               "w_symbol_defect", "w_symbol_bound"], rows)
    final_err = max(r[4] for r in conv if r[2] == m_top)
    print(f"means: worst terminal HC error {final_err:.3e}, checks ok={ok}")
    if not ok or final_err > max(tol, 1e-10):
        return EXIT_VERIFY
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gfsl",
        description="verification suites for the geodesic-flow Hilbert models")
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("spherical-check", help="intertwining residual sweep")
    _add_common(sp)
    sp.add_argument("--lambda", dest="lam", default="0.3,1,5", action=_TrackSet)
    sp.add_argument("--nu", default="0.1,0.3", action=_TrackSet)
    sp.add_argument("--n", default="40", action=_TrackSet)
    sp.add_argument("--k", default="8", action=_TrackSet)
    sp.set_defaults(func=cmd_spherical_check)

    tr = subs.add_parser("traces", help="flat-vs-spectral trace identities")
    _add_common(tr)
    tr.add_argument("--t", default="0.5,0.6931471805599453,1,2", action=_TrackSet)
    tr.add_argument("--genus", default="2", action=_TrackSet)
    tr.add_argument("--laplace-file", dest="laplace_file", default=None,
                    action=_TrackSet)
    tr.set_defaults(func=cmd_traces)

    se = subs.add_parser("selberg", help="Bolza length spectrum + wave-trace pair")
    _add_common(se)
    se.add_argument("--lmax", default="8", action=_TrackSet)
    se.add_argument("--center", default="5.5", action=_TrackSet)
    se.add_argument("--sigma", default="0.5", action=_TrackSet)
    se.set_defaults(func=cmd_selberg)

    me = subs.add_parser("means", help="Harish-Chandra convergence and wave slopes")
    _add_common(me)
    me.add_argument("--lambda", dest="lam", default="1,2,5", action=_TrackSet)
    me.add_argument("--m", default="8", action=_TrackSet)
    me.add_argument("--tau", default="1", action=_TrackSet)
    me.set_defaults(func=cmd_means)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "config", None):
            _apply_config(args, _load_config(args.config))
        return args.func(args)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GfslError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
