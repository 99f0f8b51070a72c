"""
End-to-end acceptance checks for the toolkit.

Each test covers one headline criterion, prints a single PASS/FAIL line,
and asserts the pinned tolerance.  Budgets are wall-clock seconds.
"""

import math
import time

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from qsgeom.collar_builder import build_psc_cobordism, spin_bound
from qsgeom.convex_revolution import (RevolutionProfile, diameter, dilation,
                                      embed, enclosure_check,
                                      gauss_bonnet_total, prop51_check,
                                      spheroid_metric, steiner_fit,
                                      total_mean_curvature)
from qsgeom.mass import (BartnikTriple, ah_mass_curve, brown_york,
                         lambda_plus_round, schwarzschild_sphere_data)
from qsgeom.quasi_spherical import (SolverOptions,
                                    reconstruct_scalar_curvature,
                                    solve_generic, solve_hyperbolic)
from qsgeom.ricci_paths import (ConformalMetric, monotone_scaled_path,
                                psc_connecting_path, ricci_deturck_flow,
                                ricci_flow)
from qsgeom.sphere_geometry import (AxisymField, LinearWarped, RoundMetric,
                                    RoundScaling, build_grid, sphere_volume)


def _report(num, label, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {num}: {label} ({detail})")
    return ok


# ------------------------------------------------------------
# 1. Schwarzschild Brown-York large-sphere limit
# ------------------------------------------------------------

def test_criterion_1_schwarzschild_brown_york():
    t0 = time.monotonic()
    n, m = 3, 1.0
    grid = build_grid(2, 64)
    radii = [10.0, 100.0, 1000.0]
    rel_errs, gaps = [], []
    for r_areal in radii:
        # isotropic radius from the areal one
        from qsgeom.mass import _isotropic_from_areal
        rho = _isotropic_from_areal(n, m, r_areal)
        # numerical mean curvature: central difference of the areal
        # radius function through the conformal factor
        p = n - 2

        def r_a(x):
            return x * (1.0 + 0.5 * m / x ** p) ** (2.0 / p)

        dx = 1e-5 * rho
        dra = (r_a(rho + dx) - r_a(rho - dx)) / (2.0 * dx)
        Phi = 1.0 + 0.5 * m / rho ** p
        H_num = (n - 1) * dra / (Phi ** (2.0 / p) * r_a(rho))
        triple = BartnikTriple(RoundMetric(2, r_areal),
                               AxisymField(grid, np.full(grid.N, H_num)))
        rep = brown_york(triple, lambda_plus_round(n, r_areal))
        exact = r_areal * (1.0 - math.sqrt(1.0 - 2.0 * m / r_areal))
        rel_errs.append(abs(rep.m_by - exact) / exact)
        gaps.append(abs(rep.m_by - m))
    slope = np.polyfit(np.log(radii), np.log(gaps), 1)[0]
    elapsed = time.monotonic() - t0
    ok = (max(rel_errs) < 1e-6 and -1.2 <= slope <= -0.8
          and elapsed < 10.0)
    assert _report(1, "Schwarzschild Brown-York limit", ok,
                   f"max rel err {max(rel_errs):.3g}, slope {slope:.3f}, "
                   f"{elapsed:.1f} s")


# ------------------------------------------------------------
# 2. AH mass monotonicity
# ------------------------------------------------------------

@pytest.mark.parametrize("case,N", [("const", 64), ("cos", 128)])
def test_criterion_2_ah_mass_monotonicity(case, N):
    t0 = time.monotonic()
    grid = build_grid(2, N)
    if case == "const":
        H = AxisymField(grid, np.full(grid.N, 0.9 * 2.0 * math.sqrt(2.0)))
    else:
        H = AxisymField(grid, 2.0 * math.sqrt(2.0)
                        * (1.0 + 0.1 * np.cos(grid.nodes)))
    sol = solve_hyperbolic(H, 1.0, r_max=6.0,
                           opts=SolverOptions(n_stations=513))
    curve = ah_mass_curve(sol)
    viol = float(np.max(np.maximum(np.diff(curve.m), 0.0), initial=0.0))
    limit_rel = curve.limit_residual / max(abs(curve.m[-1]),
                                           abs(curve.limit), 1e-300)
    elapsed = time.monotonic() - t0
    ok = (viol < 1e-8 and curve.identity_residual < 1e-4
          and limit_rel < 0.01 and elapsed < 60.0)
    assert _report(2, f"AH mass monotonicity ({case})", ok,
                   f"violation {viol:.3g}, identity "
                   f"{curve.identity_residual:.3g}, limit rel "
                   f"{limit_rel:.3g}, {elapsed:.1f} s")


# ------------------------------------------------------------
# 3. quasi-spherical prescription convergence
# ------------------------------------------------------------

def test_criterion_3_prescription_convergence():
    t0 = time.monotonic()
    delta = 0.1
    errs, Ns = [], [64, 128, 256]
    for N, K in zip(Ns, (129, 257, 513)):
        grid = build_grid(2, N)
        path = LinearWarped(RoundMetric(2, 1.0), RoundMetric(2, 2.0),
                            grid=grid)
        sol = solve_generic(path, delta, 0.01,
                            opts=SolverOptions(n_stations=K))
        rec = reconstruct_scalar_curvature(sol)
        errs.append(rec.residual)
    order = -np.polyfit(np.log(Ns), np.log(errs), 1)[0]

    # ODE-reduction oracle on a round-scaling path
    grid = build_grid(2, 64)
    rpath = RoundScaling(grid, 1.0, 2.0)
    sol = solve_generic(rpath, delta, 0.9,
                        opts=SolverOptions(n_stations=257))

    def rhs(t, y):
        sl = rpath.slice(min(t, 1.0))
        u = y[0]
        return [(0.5 * (delta - float(sl.R_gamma[0])) * u ** 3
                 + 0.5 * float(sl.R_gamma[0] - sl.R_bg[0]) * u)
                / float(sl.Hbar[0])]

    ivp = solve_ivp(rhs, (0.0, 1.0), [0.9], rtol=1e-12, atol=1e-14,
                    dense_output=True)
    oracle_err = float(np.max(np.abs(sol.u[:, 0] - ivp.sol(sol.t)[0])))
    elapsed = time.monotonic() - t0
    ok = order >= 1.8 and oracle_err < 1e-8 and elapsed < 60.0
    assert _report(3, "quasi-spherical prescription", ok,
                   f"order {order:.2f}, oracle err {oracle_err:.3g}, "
                   f"{elapsed:.1f} s")


# ------------------------------------------------------------
# 4. comparison bounds
# ------------------------------------------------------------

def test_criterion_4_comparison_bounds():
    grid = build_grid(2, 64)
    delta = 0.1
    sandwich_ok = True
    min_h1_eps = []
    min_Hbar1 = None
    Mmax = 0.0
    for eps in (1e-1, 1e-2, 1e-3):
        # the criterion concerns the lapse bounds, not the residual, so
        # relax the a-posteriori warning threshold for the coarse eps
        res = build_psc_cobordism(RoundMetric(2, 1.0), RoundMetric(2, 2.0),
                                  delta, eps=eps, grid=grid,
                                  opts=SolverOptions(n_stations=513,
                                                     tolerance=1e-2))
        sol = res.collar
        M = sol.diagnostics["M"]
        Mmax = max(Mmax, M)
        assert eps <= math.exp(-0.5 * M)
        lo = 0.5 * math.exp(-M) * eps
        hi = math.exp(M) * eps
        umin, umax = float(np.min(sol.u)), float(np.max(sol.u))
        sandwich_ok &= (umin >= lo - 1e-12 and umax <= hi + 1e-12)
        min_h1_eps.append(eps * float(np.min(res.h1.values)))
        min_Hbar1 = float(np.min(sol.path.slice(1.0).Hbar))
    blowup_ok = all(v >= math.exp(-Mmax) * min_Hbar1 - 1e-12
                    for v in min_h1_eps)
    ok = sandwich_ok and blowup_ok
    assert _report(4, "comparison bounds", ok,
                   f"sandwich {sandwich_ok}, blow-up law {blowup_ok}, "
                   f"min h1*eps {min(min_h1_eps):.4g}")


# ------------------------------------------------------------
# 5. convex-revolution suite
# ------------------------------------------------------------

def _corpus():
    profs = [RevolutionProfile.sphere(R) for R in (1.0, 1.5, 2.0)]
    profs += [RevolutionProfile.spheroid(1.0, c)
              for c in (1.2, 1.5, 2.0, 0.8)]
    profs += [RevolutionProfile.capped_cylinder(*args)
              for args in ((1.5, 0.25, 0.3), (2.0, 0.1, 0.05),
                           (1.0, 0.2, 0.25))]
    return profs


def test_criterion_5_convex_revolution_suite():
    t0 = time.monotonic()
    ok = True
    details = []

    # unit sphere Lambda_+ = 8 pi
    sphere_err = abs(total_mean_curvature(RevolutionProfile.sphere(1.0))
                     - 8.0 * math.pi)
    ok &= sphere_err < 1e-10
    details.append(f"sphere {sphere_err:.2g}")

    # capped-cylinder total mean curvature closed form
    l, e1, e2 = 1.5, 0.25, 0.3
    cap = RevolutionProfile.capped_cylinder(l, e1, e2)
    cap_err = abs(total_mean_curvature(cap)
                  - (2.0 * math.pi * (l - 2 * e1) + 8.0 * math.pi * e2))
    ok &= cap_err < 1e-6
    details.append(f"cap {cap_err:.2g}")

    corpus = _corpus()

    # Steiner coefficients on the corpus
    steiner_rel = 0.0
    for p in corpus:
        c0, c1, c2 = steiner_fit(p)
        steiner_rel = max(
            steiner_rel,
            abs(c0 - p.area()) / p.area(),
            abs(c1 - total_mean_curvature(p)) / total_mean_curvature(p),
            abs(c2 - 4.0 * math.pi) / (4.0 * math.pi))
    ok &= steiner_rel < 1e-4
    details.append(f"steiner {steiner_rel:.2g}")

    # Gauss-Bonnet on the corpus
    gb_err = max(abs(gauss_bonnet_total(p) - 4.0 * math.pi)
                 for p in corpus)
    ok &= gb_err < 1e-6
    details.append(f"gauss-bonnet {gb_err:.2g}")

    # strict two-sided diameter bound on the corpus
    prop_ok = all(prop51_check(p.as_metric(), n_grid=128).ok
                  for p in corpus)
    ok &= prop_ok
    details.append(f"ordering {prop_ok}")

    # enclosure monotonicity on 10 nested pairs (profile in its dilate)
    encl_ok = True
    for p in corpus:
        rep = enclosure_check(p, p.scale(1.3))
        encl_ok &= rep.nested and rep.area_monotone and rep.tmc_monotone
    ok &= encl_ok
    details.append(f"enclosure {encl_ok}")

    elapsed = time.monotonic() - t0
    ok &= elapsed < 120.0
    assert _report(5, "convex-revolution suite", ok,
                   ", ".join(details) + f", {elapsed:.1f} s")


# ------------------------------------------------------------
# 6. continuity of Lambda_+ under dilation convergence
# ------------------------------------------------------------

def test_criterion_6_dilation_continuity():
    base = spheroid_metric(1.0, 1.0)
    dils, gaps = [], []
    for k in range(1, 6):
        g = spheroid_metric(1.0, 1.0 + 2.0 ** -k)
        dils.append(float(dilation(g, base)))
        lam_plus = total_mean_curvature(embed(g))
        gaps.append(abs(lam_plus - 8.0 * math.pi))
    dil_to_one = all(d2 <= d1 + 1e-9 for d1, d2 in zip(dils, dils[1:])) \
        and dils[-1] < 1.05
    gaps_to_zero = gaps[-1] < 0.5 and all(
        g2 <= g1 + 1e-3 for g1, g2 in zip(gaps, gaps[1:]))
    ok = dil_to_one and gaps_to_zero
    assert _report(6, "Lambda_+ continuity in dilation", ok,
                   f"dilations {dils[0]:.3f}->{dils[-1]:.3f}, gaps "
                   f"{gaps[0]:.3f}->{gaps[-1]:.3f}")


# ------------------------------------------------------------
# 7. conformal flow suite
# ------------------------------------------------------------

def test_criterion_7_conformal_flow_suite():
    ok = True
    details = []

    # round flow matches the (1 - 2t) shrinking law
    T = 0.1
    path = ricci_flow(ConformalMetric.round(0.0), T, dt=1e-3)
    rf_err = float(np.max(np.abs(path.metrics[-1].factor
                                 - (1.0 - 2.0 * T))))
    ok &= rf_err < 1e-8
    details.append(f"round flow {rf_err:.2g}")

    # RDT curvature lower bound and station equality for g0 = gbar0
    g = ConformalMetric.cos_mode(0.05)
    bg = ricci_flow(g, 0.05, dt=1e-3)
    rdt = ricci_deturck_flow(g, bg, 0.05, dt=1e-3)
    ok &= rdt.diagnostics["bound_margin"] >= -1e-6
    eq = max(float(np.max(np.abs(a.factor - b.factor)))
             for a, b in zip(bg.metrics, rdt.metrics))
    ok &= eq < 1e-10
    details.append(f"bound margin {rdt.diagnostics['bound_margin']:.2g}, "
                   f"station gap {eq:.2g}")

    # connecting path stays PSC with an admissible derivative exponent
    cpath = psc_connecting_path(g, ConformalMetric.round(0.0), T=0.02,
                                dt=1e-3)
    ok &= cpath.psc and cpath.diagnostics["fit_exponent"] >= -1.1
    details.append(f"path exponent {cpath.diagnostics['fit_exponent']:.3f}")

    # monotone scaled path and the two-dimensional sandwich
    mpath = monotone_scaled_path(g, eps_tilde=0.05)
    ok &= mpath.diagnostics["min_eig"] >= -1e-10
    lam_plus = total_mean_curvature(embed(g.to_warped(n=513)))
    bound = (1.0 + 0.05) * 8.0 * math.pi * (1.0 + 1e-3)
    ok &= lam_plus <= bound
    details.append(f"sandwich {lam_plus:.4f} <= {bound:.4f}")

    assert _report(7, "conformal flow suite", ok, ", ".join(details))


# ------------------------------------------------------------
# 8. spin bound
# ------------------------------------------------------------

def test_criterion_8_spin_bound():
    grid = build_grid(2, 64)
    ok = True
    worst_gap = -math.inf
    corpus = [(0.0, 1.0), (0.0, 2.0), (0.0, 4.0), (0.5, 4.0), (1.0, 4.0)]
    for m, r in corpus:
        data = schwarzschild_sphere_data(3, m, r, grid=grid)
        lam = data.r_areal * (1.0 + 1e-6)
        bnd = spin_bound(RoundMetric(2, data.r_areal), lam, -1.0,
                         grid=grid)
        worst_gap = max(worst_gap, data.total_H - bnd)
    ok &= worst_gap <= 0.0
    spot = spin_bound(RoundMetric(2, 2.0 * (1.0 - 1e-9)), 2.0, -1.0,
                      grid=grid)
    spot_err = abs(spot - 16.0 * math.pi * math.sqrt(5.0 / 3.0))
    ok &= spot_err < 1e-10
    assert _report(8, "spin bound", ok,
                   f"worst corpus gap {worst_gap:.4g}, spot err "
                   f"{spot_err:.2g}")
