"""
Scenario runner: reproducible experiments over the library modules with
delimited result tables, a structured summary, and rendered figures.

Each scenario writes, into the output directory:
  <scenario>-<table>.csv     one comma-separated table per result series
                             (numbers at 17 significant digits)
  <scenario>-summary.json    scenario echo, checks with tolerances, and
                             an environment fingerprint
  <scenario>-<table>.png     a rendered figure per table

Exit codes: 0 all checks pass, 1 check failure, 2 config error,
3 numerical failure.
"""

import argparse
import configparser
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from . import __version__
from .collar_builder import build_psc_cobordism, spin_bound
from .convex_revolution import (RevolutionProfile, capped_cylinder_metric,
                                dilation, embed, gauss_bonnet_total,
                                prop51_check, spheroid_metric, steiner_fit,
                                total_mean_curvature)
from .mass import (ah_mass_curve, by_large_sphere_limit,
                   schwarzschild_sphere_data)
from .quasi_spherical import (SolverOptions, reconstruct_scalar_curvature,
                              solve_generic, solve_hyperbolic)
from .ricci_paths import (ConformalMetric, monotone_scaled_path,
                          psc_connecting_path, ricci_deturck_flow,
                          ricci_flow)
from .sphere_geometry import (AxisymField, LinearWarped, RoundMetric,
                              WarpedMetric, build_grid)


class ConfigError(Exception):
    """Raised for malformed or inconsistent scenario configuration."""


# ============================================================
# Config handling
# ============================================================

_METRIC_PRESETS = {
    "round": lambda n: WarpedMetric.round(2, 1.0, n=n),
    "spheroid": lambda n: spheroid_metric(1.0, 1.5, n=n),
    "capped-cylinder": lambda n: capped_cylinder_metric(2.0, 0.1, 0.05, n=n),
}


def _parse_floats(text):
    try:
        return np.array([float(tok) for tok in text.split()])
    except ValueError as exc:
        raise ConfigError(f"bad numeric list in profile table: {exc}")


def load_config(path):
    """
    Read a key-value scenario configuration.

    Sections: [params] scalar overrides; [profile] an inline metric
    table with whitespace-separated columns x, f, h.

    Returns:
        (params: dict[str, str], metric: WarpedMetric | None)
    """
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    params = dict(parser["params"]) if parser.has_section("params") else {}
    metric = None
    if parser.has_section("profile"):
        sec = parser["profile"]
        for key in ("x", "f", "h"):
            if key not in sec:
                raise ConfigError(f"profile table missing column '{key}'")
        x = _parse_floats(sec["x"])
        f = _parse_floats(sec["f"])
        h = _parse_floats(sec["h"])
        if not len(x) == len(f) == len(h):
            raise ConfigError("profile columns must have equal length")
        try:
            metric = WarpedMetric(x, f, h, d=2)
        except ValueError as exc:
            raise ConfigError(f"invalid profile table: {exc}")
    if "metric" in params:
        name = params["metric"]
        if metric is not None:
            raise ConfigError("give either a metric preset or a profile "
                              "table, not both")
        if name not in _METRIC_PRESETS:
            raise ConfigError(f"unknown metric preset '{name}' "
                              f"(available: {sorted(_METRIC_PRESETS)})")
    return params, metric


def _get(params, key, cast, default):
    if key in params:
        try:
            return cast(params[key])
        except ValueError:
            raise ConfigError(f"parameter '{key}' must be {cast.__name__}, "
                              f"got '{params[key]}'")
    return default


# ============================================================
# Report plumbing
# ============================================================

class Report:
    """Accumulates tables and checks for one scenario run."""

    def __init__(self, scenario, params):
        self.scenario = scenario
        self.params = params
        self.tables = {}        # name -> dict[column -> array]
        self.checks = []        # dicts with name/passed/tolerance/value

    def table(self, name, **columns):
        self.tables[name] = {k: np.atleast_1d(np.asarray(v))
                             for k, v in columns.items()}

    def check(self, name, passed, tolerance, value):
        self.checks.append({"name": name, "passed": bool(passed),
                            "tolerance": tolerance, "value": value})

    @property
    def all_passed(self):
        return all(c["passed"] for c in self.checks)


def _write_csv(path, columns):
    keys = list(columns.keys())
    n = max(len(v) for v in columns.values())
    with open(path, "w") as fh:
        fh.write(",".join(keys) + "\n")
        for i in range(n):
            row = []
            for k in keys:
                v = columns[k]
                if i < len(v):
                    item = v[i]
                    row.append(format(float(item), ".17g")
                               if np.issubdtype(np.asarray(item).dtype,
                                                np.number)
                               else str(item))
                else:
                    row.append("")
            fh.write(",".join(row) + "\n")


def _render_png(path, name, columns):
    keys = list(columns.keys())
    numeric = [k for k in keys
               if np.issubdtype(columns[k].dtype, np.number)]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if len(numeric) >= 2:
        xkey = numeric[0]
        for k in numeric[1:]:
            if len(columns[k]) == len(columns[xkey]):
                ax.plot(columns[xkey], columns[k], marker=".", label=k)
        ax.set_xlabel(xkey)
        ax.legend(loc="best", fontsize=8)
    elif numeric:
        ax.plot(columns[numeric[0]], marker=".", label=numeric[0])
        ax.legend(loc="best", fontsize=8)
    ax.set_title(name)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def write_report(report, outdir, grid_n, tol):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, cols in report.tables.items():
        base = f"{report.scenario}-{name}"
        _write_csv(outdir / f"{base}.csv", cols)
        _render_png(outdir / f"{base}.png", base, cols)
    summary = {
        "scenario": report.scenario,
        "params": {k: str(v) for k, v in report.params.items()},
        "checks": report.checks,
        "tables": sorted(report.tables),
        "environment": {"version": __version__, "grid_n": grid_n,
                        "tol": tol},
    }
    with open(outdir / f"{report.scenario}-summary.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ============================================================
# Scenarios
# ============================================================

def _scenario_qs_collar(params, metric, grid_n, tol):
    rep = Report("qs-collar", params)
    a = _get(params, "a", float, 1.0)
    b = _get(params, "b", float, 2.0)
    delta = _get(params, "delta", float, 0.1)
    n_st = _get(params, "stations", int, 257)
    grid = build_grid(2, grid_n)
    path = LinearWarped(RoundMetric(2, a), RoundMetric(2, b), grid=grid)
    sol = solve_generic(path, delta, 0.01,
                        opts=SolverOptions(n_stations=n_st))
    rec = reconstruct_scalar_curvature(sol)
    resid = np.max(np.abs(rec.values - delta), axis=1)
    rep.table("lapse", theta=grid.nodes, u_final=sol.u[-1])
    rep.table("residual", t=rec.t, max_residual=resid)
    rep.check("prescribed-curvature residual", float(np.max(resid)) < tol,
              tol, float(np.max(resid)))
    rep.check("solver completed", sol.status == "completed", 0.0,
              1.0 if sol.status == "completed" else 0.0)
    return rep


def _scenario_ah_mass(params, metric, grid_n, tol):
    rep = Report("ah-mass", params)
    lam = _get(params, "lam", float, 1.0)
    hval = _get(params, "H", float, 0.9 * 2.0 * math.sqrt(2.0))
    r_max = _get(params, "r_max", float, 6.0)
    n_st = _get(params, "stations", int, 513)
    grid = build_grid(2, grid_n)
    sol = solve_hyperbolic(AxisymField(grid, hval * np.ones(grid.N)),
                           lam, r_max=r_max,
                           opts=SolverOptions(n_stations=n_st))
    curve = ah_mass_curve(sol)
    rep.table("mass", r=curve.r, m=curve.m, m_prime=curve.m_prime,
              m_prime_fd=curve.m_prime_fd)
    viol = float(np.max(np.maximum(np.diff(curve.m), 0.0), initial=0.0))
    rep.check("mass non-increasing", viol < 1e-8, 1e-8, viol)
    rep.check("derivative identity", curve.identity_residual < tol, tol,
              curve.identity_residual)
    rep.check("limit agreement", abs(curve.limit_residual) < 0.01, 0.01,
              float(curve.limit_residual))
    return rep


def _scenario_schwarzschild_by(params, metric, grid_n, tol):
    rep = Report("schwarzschild-by", params)
    m = _get(params, "m", float, 1.0)
    radii = [10.0, 100.0, 1000.0]
    grid = build_grid(2, grid_n)
    reports = by_large_sphere_limit(3, m, radii, grid)
    mby = np.array([r.m_by for r in reports])
    exact = np.array([r * (1.0 - math.sqrt(1.0 - 2.0 * m / r))
                      for r in radii])
    rel = np.abs(mby - exact) / np.abs(exact)
    rep.table("mass", r=np.array(radii), m_by=mby, exact=exact,
              rel_err=rel)
    rep.check("closed-form agreement", float(np.max(rel)) < tol, tol,
              float(np.max(rel)))
    slope = np.polyfit(np.log(radii), np.log(np.abs(mby - m)), 1)[0]
    rep.check("large-sphere decay slope", -1.2 <= slope <= -0.8, 0.2,
              float(slope))
    return rep


def _scenario_cobordism(params, metric, grid_n, tol):
    rep = Report("cobordism", params)
    a = _get(params, "a", float, 1.0)
    b = _get(params, "b", float, 2.0)
    delta = _get(params, "delta", float, 0.1)
    eps = _get(params, "eps", float, 0.01)
    grid = build_grid(2, grid_n)
    res = build_psc_cobordism(RoundMetric(2, a), RoundMetric(2, b), delta,
                              eps=eps, grid=grid)
    rep.table("boundary", theta=grid.nodes, h0=res.h0.values,
              h1=res.h1.values)
    rep.table("residual", value=np.array([res.residual]))
    rep.check("prescribed-curvature residual", res.residual < tol, tol,
              res.residual)
    rep.check("inner boundary law",
              float(np.min(res.h1.values)) >= res.h1_lower_bound - 1e-12,
              1e-12, float(np.min(res.h1.values)) - res.h1_lower_bound)
    return rep


def _scenario_spin_bound(params, metric, grid_n, tol):
    rep = Report("spin-bound", params)
    grid = build_grid(2, grid_n)
    rows, totals, bounds = [], [], []
    corpus = [("flat-ball", 1.0), ("flat-ball", 2.0),
              ("schwarzschild", 0.0), ("schwarzschild", 0.5),
              ("schwarzschild", 1.0)]
    for kind, p in corpus:
        if kind == "flat-ball":
            lam, mdat = p, 0.0
        else:
            lam, mdat = 4.0, p
        data = schwarzschild_sphere_data(3, mdat, lam, grid=grid)
        K = -1.0
        # strict round domination needs a slightly larger radius; the
        # bound is increasing in lam, so it remains valid
        lam_emb = data.r_areal * (1.0 + 1e-6)
        bnd = spin_bound(RoundMetric(2, data.r_areal), lam_emb, K,
                         grid=grid)
        rows.append(f"{kind}:{p:g}")
        totals.append(data.total_H)
        bounds.append(bnd)
    rep.table("corpus", case=np.array(rows), total_H=np.array(totals),
              bound=np.array(bounds))
    gap = float(np.max(np.array(totals) - np.array(bounds)))
    rep.check("spin bound holds", gap <= 0.0, 0.0, gap)
    spot = spin_bound(RoundMetric(2, 2.0 * (1.0 - 1e-9)), 2.0, -1.0,
                      grid=grid)
    spot_exact = 16.0 * math.pi * math.sqrt(5.0 / 3.0)
    rep.check("closed-form spot value",
              abs(spot - spot_exact) < 1e-10, 1e-10,
              float(spot - spot_exact))
    return rep


def _corpus_profiles():
    return [
        ("sphere-1", RevolutionProfile.sphere(1.0)),
        ("sphere-2", RevolutionProfile.sphere(2.0)),
        ("sphere-0.5", RevolutionProfile.sphere(0.5)),
        ("spheroid-1-1.5", RevolutionProfile.spheroid(1.0, 1.5)),
        ("spheroid-1-2", RevolutionProfile.spheroid(1.0, 2.0)),
        ("spheroid-1.2-2", RevolutionProfile.spheroid(1.2, 2.0)),
        ("oblate-1.5-1", RevolutionProfile.spheroid(1.5, 1.0)),
        ("capped-2-0.1-0.05",
         RevolutionProfile.capped_cylinder(2.0, 0.1, 0.05)),
        ("capped-1-0.1-0.08",
         RevolutionProfile.capped_cylinder(1.0, 0.1, 0.08)),
        ("spheroid-0.8-1.2", RevolutionProfile.spheroid(0.8, 1.2)),
    ]


def _scenario_embed_steiner(params, metric, grid_n, tol):
    rep = Report("embed-steiner", params)
    if metric is None and "metric" in params:
        metric = _METRIC_PRESETS[params["metric"]](grid_n)
    names, areas, tmcs, gbs, errs = [], [], [], [], []
    for name, prof in _corpus_profiles():
        c0, c1, c2 = steiner_fit(prof)
        a, t, g = prof.area(), total_mean_curvature(prof), \
            gauss_bonnet_total(prof)
        err = max(abs(c0 - a) / a, abs(c1 - t) / t,
                  abs(c2 - 4.0 * math.pi) / (4.0 * math.pi))
        names.append(name)
        areas.append(a)
        tmcs.append(t)
        gbs.append(g)
        errs.append(err)
    if metric is not None:
        prof = embed(metric)
        names.append("custom")
        areas.append(prof.area())
        tmcs.append(total_mean_curvature(prof))
        gbs.append(gauss_bonnet_total(prof))
        errs.append(math.nan)
    rep.table("corpus", case=np.array(names), area=np.array(areas),
              total_mean_curvature=np.array(tmcs),
              gauss_bonnet=np.array(gbs), steiner_rel_err=np.array(errs))
    sphere_gap = abs(total_mean_curvature(RevolutionProfile.sphere(1.0))
                     - 8.0 * math.pi)
    rep.check("unit-sphere total mean curvature", sphere_gap < 1e-10,
              1e-10, float(sphere_gap))
    cc = RevolutionProfile.capped_cylinder(2.0, 0.1, 0.05)
    cc_gap = abs(total_mean_curvature(cc)
                 - (2.0 * math.pi * 1.8 + 8.0 * math.pi * 0.05))
    rep.check("capped-cylinder total mean curvature", cc_gap < 1e-6,
              1e-6, float(cc_gap))
    rep.check("steiner coefficients",
              float(np.nanmax(errs)) < tol, tol, float(np.nanmax(errs)))
    gb_gap = float(np.max(np.abs(np.array(gbs[:10]) - 4.0 * math.pi)))
    rep.check("total curvature 4 pi", gb_gap < 1e-6, 1e-6, gb_gap)
    return rep


def _scenario_prop51_corpus(params, metric, grid_n, tol):
    rep = Report("prop51-corpus", params)
    metrics = [
        ("round", WarpedMetric.round(2, 1.0, n=257)),
        ("round-2", WarpedMetric.round(2, 2.0, n=257)),
        ("spheroid-1-1.5", spheroid_metric(1.0, 1.5)),
        ("spheroid-1-2", spheroid_metric(1.0, 2.0)),
        ("spheroid-1.2-2", spheroid_metric(1.2, 2.0)),
        ("oblate-1.5-1", spheroid_metric(1.5, 1.0)),
        ("capped-2-0.1-0.05", capped_cylinder_metric(2.0, 0.1, 0.05)),
        ("capped-1-0.1-0.08", capped_cylinder_metric(1.0, 0.1, 0.08)),
        ("spheroid-0.8-1.2", spheroid_metric(0.8, 1.2)),
        ("capped-3-0.2-0.1", capped_cylinder_metric(3.0, 0.2, 0.1)),
    ]
    if metric is not None:
        metrics.append(("custom", metric))
    rows = []
    for name, g in metrics:
        r = prop51_check(g, n_grid=min(grid_n, 256))
        rows.append((name, r.two_diam, r.lambda_plus, r.twelve_pi_diam,
                     r.ok))
    rep.table("corpus",
              case=np.array([r[0] for r in rows]),
              two_diam=np.array([r[1] for r in rows]),
              lambda_plus=np.array([r[2] for r in rows]),
              twelve_pi_diam=np.array([r[3] for r in rows]))
    n_fail = sum(0 if r[4] else 1 for r in rows)
    rep.check("strict diameter ordering", n_fail == 0, 0.0, float(n_fail))
    return rep


def _scenario_stability_2d(params, metric, grid_n, tol):
    rep = Report("stability-2d", params)
    grid = build_grid(2, grid_n)
    path = LinearWarped(RoundMetric(2, 1.0), RoundMetric(2, 2.0),
                        grid=grid)
    delta = _get(params, "delta", float, 0.1)
    eps_list = [1e-1, 1e-2, 1e-3]
    rows = []
    for eps in eps_list:
        sol = solve_generic(path, delta, eps,
                            opts=SolverOptions(n_stations=129))
        M = sol.diagnostics["M"]
        lo = 0.5 * math.exp(-M) * eps
        hi = math.exp(M) * eps
        umin, umax = float(np.min(sol.u)), float(np.max(sol.u))
        h1min = float(np.min(sol.path.slice(1.0).Hbar / sol.u[-1]))
        rows.append((eps, umin, umax, lo, hi, h1min, M))
    rep.table("sweep",
              eps=np.array([r[0] for r in rows]),
              u_min=np.array([r[1] for r in rows]),
              u_max=np.array([r[2] for r in rows]),
              lower=np.array([r[3] for r in rows]),
              upper=np.array([r[4] for r in rows]),
              h1_min=np.array([r[5] for r in rows]))
    inside = all(r[3] - 1e-12 <= r[1] and r[2] <= r[4] + 1e-12
                 for r in rows)
    rep.check("sandwich bounds", inside, 1e-12, 1.0 if inside else 0.0)
    M0 = rows[0][6]
    law = all(r[5] * r[0] >= math.exp(-r[6])
              * float(np.min(path.slice(1.0).Hbar)) - 1e-9 for r in rows)
    rep.check("boundary blow-up law", law, 1e-9, 1.0 if law else 0.0)
    rep.params["M"] = M0
    return rep


def _scenario_ricci_path(params, metric, grid_n, tol):
    rep = Report("ricci-path", params)
    T = _get(params, "T", float, 0.3)
    g0 = ConformalMetric.round(0.0, N=grid_n)
    flow = ricci_flow(g0, T, dt=1e-4)
    exact = 1.0 - 2.0 * flow.t
    fac = np.array([np.max(m.factor) for m in flow.metrics])
    rep.table("round-flow", t=flow.t, factor=fac, exact=exact,
              err=np.abs(fac - exact))
    rep.check("round shrinking solution",
              float(np.max(np.abs(fac - exact))) < 1e-8, 1e-8,
              float(np.max(np.abs(fac - exact))))
    gp = ConformalMetric.cos_mode(0.1, N=grid_n)
    bg = ricci_flow(ConformalMetric.round(0.0, N=grid_n), 0.2, dt=1e-4,
                    n_save=33)
    rdt = ricci_deturck_flow(gp, bg, 0.2, dt=1e-4, n_save=33)
    rep.table("rdt", t=rdt.t, min_R=rdt.min_R,
              bound=rdt.diagnostics["kappa"]
              / (1.0 - rdt.t * rdt.diagnostics["kappa"]))
    rep.check("curvature lower bound",
              rdt.diagnostics["bound_margin"] >= -1e-6, 1e-6,
              rdt.diagnostics["bound_margin"])
    cp = psc_connecting_path(ConformalMetric.cos_mode(0.05, N=grid_n),
                             ConformalMetric.round(0.0, N=grid_n), T=0.05)
    rep.table("connecting", s=cp.t, min_R=cp.min_R,
              deriv_norm=cp.deriv_norms)
    rep.check("connecting path positive curvature",
              float(np.min(cp.min_R)) > 0.0, 0.0, float(np.min(cp.min_R)))
    rep.check("derivative envelope exponent",
              cp.diagnostics["fit_exponent"] >= -1.1, 1.1,
              cp.diagnostics["fit_exponent"])
    return rep


def _scenario_monotone_path(params, metric, grid_n, tol):
    rep = Report("monotone-path-sandwich", params)
    eps_t = _get(params, "eps_tilde", float, 0.05)
    g = ConformalMetric.cos_mode(0.05, N=grid_n)
    path = monotone_scaled_path(g, eps_tilde=eps_t)
    rep.table("path", s=path.t, min_R=path.min_R,
              deriv_norm=path.deriv_norms)
    rep.check("monotone derivative",
              path.diagnostics["min_eig"] >= -1e-10, 1e-10,
              path.diagnostics["min_eig"])
    lam_plus = total_mean_curvature(embed(g.to_warped()))
    bound = (1.0 + eps_t) * 8.0 * math.pi * (1.0 + 1e-3)
    rep.table("sandwich", lambda_plus=np.array([lam_plus]),
              bound=np.array([bound]))
    rep.check("total-mean-curvature sandwich", lam_plus <= bound, 1e-3,
              float(lam_plus - bound))
    return rep


_SCENARIOS = {
    "qs-collar": _scenario_qs_collar,
    "ah-mass": _scenario_ah_mass,
    "schwarzschild-by": _scenario_schwarzschild_by,
    "cobordism": _scenario_cobordism,
    "spin-bound": _scenario_spin_bound,
    "embed-steiner": _scenario_embed_steiner,
    "prop51-corpus": _scenario_prop51_corpus,
    "stability-2d": _scenario_stability_2d,
    "ricci-path": _scenario_ricci_path,
    "monotone-path-sandwich": _scenario_monotone_path,
}

_DEFAULT_TOL = {
    "qs-collar": 1e-2, "ah-mass": 1e-4, "schwarzschild-by": 1e-6,
    "cobordism": 1e-2, "spin-bound": 1e-10, "embed-steiner": 1e-4,
    "prop51-corpus": 1e-9, "stability-2d": 1e-9, "ricci-path": 1e-8,
    "monotone-path-sandwich": 1e-3,
}

_DEFAULT_GRID = {
    "qs-collar": 64, "ah-mass": 64, "schwarzschild-by": 64,
    "cobordism": 64, "spin-bound": 64, "embed-steiner": 257,
    "prop51-corpus": 256, "stability-2d": 64, "ricci-path": 129,
    "monotone-path-sandwich": 129,
}


def list_scenarios():
    """Registered scenario names in stable order."""
    return sorted(_SCENARIOS)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="qsgeom",
        description="Run a geometric-analysis scenario and emit tables, "
                    "figures, and a summary.")
    parser.add_argument("scenario", nargs="?", choices=sorted(_SCENARIOS),
                        metavar="scenario",
                        help="scenario name (see --list)")
    parser.add_argument("--config", type=str, default=None,
                        help="key-value config file with [params] and an "
                             "optional inline [profile] table")
    parser.add_argument("--out", type=str, default=".",
                        help="output directory")
    parser.add_argument("--grid-n", type=int, default=None,
                        help="meridian grid size override")
    parser.add_argument("--tol", type=float, default=None,
                        help="primary check tolerance override")
    parser.add_argument("--list", action="store_true",
                        help="list scenarios and exit")
    args = parser.parse_args(argv)

    if args.list:
        for name in list_scenarios():
            print(name)
        return 0
    if args.scenario is None:
        parser.print_usage(sys.stderr)
        print("error: a scenario name (or --list) is required",
              file=sys.stderr)
        return 2

    try:
        params, metric = ({}, None) if args.config is None \
            else load_config(args.config)
        tol = args.tol if args.tol is not None \
            else _DEFAULT_TOL[args.scenario]
        grid_n = args.grid_n if args.grid_n is not None \
            else _DEFAULT_GRID[args.scenario]
        if tol <= 0:
            raise ConfigError("tolerance must be positive")
        if grid_n < 16:
            raise ConfigError("grid size must be at least 16")
    except (ConfigError, configparser.Error) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    t0 = time.time()
    try:
        report = _SCENARIOS[args.scenario](params, metric, grid_n, tol)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, FloatingPointError,
            np.linalg.LinAlgError) as exc:
        failure = {"scenario": args.scenario, "error": str(exc),
                   "environment": {"version": __version__,
                                   "grid_n": grid_n, "tol": tol}}
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        with open(outdir / f"{args.scenario}-summary.json", "w") as fh:
            json.dump(failure, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3

    write_report(report, args.out, grid_n, tol)
    elapsed = time.time() - t0
    for c in report.checks:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"[{status}] {report.scenario}: {c['name']} "
              f"(value {c['value']:.6g}, tolerance {c['tolerance']:g})")
    print(f"{report.scenario}: {len(report.tables)} table(s) written to "
          f"{args.out} in {elapsed:.2f} s")
    return 0 if report.all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
