"""
Conformal axisymmetric Ricci flow machinery on S^2: Ricci flow,
the DeTurck vector field, Ricci-DeTurck flow with curvature
lower-bound preservation, positive-scalar-curvature connecting paths,
and monotone scaled paths.

Metrics are gamma = e^{2 phi} gamma_std with axisymmetric phi, so every
flow reduces to a scalar parabolic equation d phi / dt = -K with
K = e^{-2 phi} (1 - Lap_0 phi) the Gauss curvature.  In this conformal
two-dimensional class the DeTurck vector field of any pair of metrics
vanishes identically (the trace of the conformal Christoffel difference
carries a factor 2 - dim), so the Ricci-DeTurck flow coincides with the
Ricci flow; the field is still computed numerically as a check.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .sphere_geometry import AxisymField, SphereGrid, WarpedMetric, build_grid

__all__ = [
    "ConformalMetric", "FlowPath", "ricci_flow", "deturck_field",
    "ricci_deturck_flow", "psc_connecting_path", "monotone_scaled_path",
]


# ============================================================
# Conformal metrics
# ============================================================

class ConformalMetric:
    """
    Axisymmetric conformal metric gamma = e^{2 phi} gamma_std on S^2.

    Attributes:
        grid: SphereGrid (d = 2) carrying phi
        phi: AxisymField, the conformal exponent
    """

    def __init__(self, phi, grid=None):
        if isinstance(phi, AxisymField):
            self.grid = phi.grid
            self.phi = phi
        else:
            if grid is None:
                raise ValueError("array-valued phi requires a grid")
            self.grid = grid
            self.phi = AxisymField(grid, np.asarray(phi, dtype=float))
        if self.grid.d != 2:
            raise ValueError("conformal metrics live on S^2 (d = 2)")
        if not np.all(np.isfinite(self.phi.values)):
            raise ValueError("conformal exponent must be finite")

    @classmethod
    def round(cls, c=0.0, N=129):
        """The round metric e^{2c} gamma_std."""
        grid = build_grid(2, N)
        return cls(np.full(grid.N, float(c)), grid)

    @classmethod
    def cos_mode(cls, amplitude, N=129):
        """The perturbation phi = amplitude * cos(theta)."""
        grid = build_grid(2, N)
        return cls(float(amplitude) * np.cos(grid.nodes), grid)

    @property
    def factor(self):
        """Conformal factor e^{2 phi}."""
        return np.exp(2.0 * self.phi.values)

    def gauss_curvature(self):
        """Gauss curvature K = e^{-2 phi} (1 - Lap_0 phi)."""
        p = self.phi.values
        return np.exp(-2.0 * p) * (1.0 - self.grid.round_laplacian(p))

    def scalar_curvature(self):
        """Scalar curvature 2 K."""
        return 2.0 * self.gauss_curvature()

    @property
    def is_psc(self):
        return bool(np.min(self.scalar_curvature()) > 0.0)

    def to_warped(self, n=513):
        """The metric as a WarpedMetric on the uniform theta grid."""
        x = np.linspace(0.0, math.pi, n)
        ephi = CubicSpline(self.grid.nodes, np.exp(self.phi.values))(x)
        h = ephi * np.sin(x)
        h[0] = h[-1] = 0.0
        return WarpedMetric(x, ephi, h, d=2)

    def distance_c0(self, other):
        """Sup-norm distance of the conformal factors."""
        return float(np.max(np.abs(self.factor - other.factor)))


@dataclass
class FlowPath:
    """
    A path of conformal metrics with derivative estimates.

    Attributes:
        t: path timestamps
        metrics: ConformalMetric per station
        deriv_norms: sup-norm of the time derivative of the conformal
            factor measured against the initial metric
        min_R: minimum scalar curvature per station
        psc: True when every station has positive scalar curvature
        diagnostics: solver metadata (dt, bounds, fits)
    """
    t: np.ndarray
    metrics: list
    deriv_norms: np.ndarray
    min_R: np.ndarray
    psc: bool
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.deriv_norms = np.asarray(self.deriv_norms, dtype=float)
        self.min_R = np.asarray(self.min_R, dtype=float)
        if self.psc and np.min(self.min_R) <= 0.0:
            raise ValueError("path claims positive scalar curvature but a "
                             "station violates it")


# ============================================================
# Flows
# ============================================================

def _rf_rhs(grid, L, p):
    return -np.exp(-2.0 * p) * (1.0 - L @ p)


def _run_ricci_flow(phi0, grid, T, dt, n_save):
    """
    Explicit RK4 integration of d phi/dt = -K, returning dense saved
    states (t_k, phi_k) at about n_save stations including both ends.
    """
    L = grid.round_laplacian_matrix()
    dth2 = float(np.min(np.diff(grid.nodes))) ** 2
    p = phi0.copy()
    t = 0.0
    saves_t = [0.0]
    saves_p = [p.copy()]
    t_next = T / (n_save - 1)
    nstep = 0
    while t < T - 1e-15 * max(T, 1.0):
        emin = float(np.min(np.exp(2.0 * p)))
        if not np.isfinite(emin) or emin < 1e-8:
            raise ValueError(f"extinction-time overrun: conformal factor "
                             f"collapsed at t = {t:.6g} before T = {T:.6g}")
        h = min(dt, 0.3 * dth2 * emin, T - t)
        k1 = _rf_rhs(grid, L, p)
        k2 = _rf_rhs(grid, L, p + 0.5 * h * k1)
        k3 = _rf_rhs(grid, L, p + 0.5 * h * k2)
        k4 = _rf_rhs(grid, L, p + h * k3)
        p = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
        nstep += 1
        if nstep > 10_000_000:
            raise ValueError("Ricci flow step budget exhausted")
        if t >= t_next - 1e-15 or t >= T - 1e-15 * max(T, 1.0):
            saves_t.append(t)
            saves_p.append(p.copy())
            t_next = (len(saves_t)) * T / (n_save - 1)
    return np.array(saves_t), saves_p


def _path_from_states(grid, ts, phis, phi_ref):
    """Assemble a FlowPath from saved flow states."""
    mets = [ConformalMetric(p, grid) for p in phis]
    min_R = np.array([np.min(m.scalar_curvature()) for m in mets])
    fac = np.array([np.exp(2.0 * p) for p in phis])
    ref = np.exp(2.0 * phi_ref)
    dn = np.zeros(len(ts))
    if len(ts) > 1:
        dfac = np.gradient(fac, ts, axis=0)
        dn = np.max(np.abs(dfac) / ref, axis=1)
    return FlowPath(t=ts, metrics=mets, deriv_norms=dn, min_R=min_R,
                    psc=bool(np.min(min_R) > 0.0))


def ricci_flow(phi0, T, dt=1e-4, n_save=65):
    """
    Ricci flow of an axisymmetric conformal metric on S^2.

    The flow reduces to d phi/dt = -K and is integrated explicitly with
    RK4 under the diffusive step restriction dt <= c dtheta^2 e^{2 min
    phi}; the step adapts near extinction and the flow aborts if the
    conformal factor collapses before T.

    Args:
        phi0: ConformalMetric initial data
        T: final time (before extinction)
        dt: requested step (further capped by stability)
        n_save: saved stations

    Returns:
        FlowPath from phi0 to the time-T metric.

    Raises:
        ValueError: extinction-time overrun.
    """
    if T <= 0:
        raise ValueError("flow horizon T must be positive")
    grid = phi0.grid
    ts, phis = _run_ricci_flow(phi0.phi.values, grid, T, dt, n_save)
    path = _path_from_states(grid, ts, phis, phi0.phi.values)
    path.diagnostics.update({"dt": dt, "flow": "ricci"})
    return path


def deturck_field(g, gbar):
    """
    Theta component of the DeTurck vector field of g relative to gbar,
    X^k = g^{ij} (Gamma^k_{ij}(g) - Gamma^k_{ij}(gbar)).

    For conformal metrics in two dimensions the trace of the conformal
    Christoffel difference is (2 - dim) grad(phi - phibar) = 0, so the
    returned field is zero to rounding.

    Args:
        g, gbar: ConformalMetrics on a shared grid

    Returns:
        ndarray, theta component at the grid nodes.
    """
    if g.grid is not gbar.grid and \
            not np.array_equal(g.grid.nodes, gbar.grid.nodes):
        raise ValueError("metrics must share a grid")
    grid = g.grid
    th = grid.nodes
    u = g.phi.values
    v = gbar.phi.values
    du = grid.derivative(u)
    dv = grid.derivative(v)
    sin2 = np.sin(th) ** 2
    # Gamma^th_{thth} = phi', Gamma^th_{phiphi} = -(sin cos + phi' sin^2)
    g_thth = du - dv
    g_phph = -(np.sin(th) * np.cos(th) + du * sin2) \
        + (np.sin(th) * np.cos(th) + dv * sin2)
    safe = np.where(sin2 > 1e-14, sin2, 1.0)
    X = np.exp(-2.0 * u) * g_thth \
        + np.exp(-2.0 * u) * np.where(sin2 > 1e-14, g_phph / safe, -g_thth)
    return X


def ricci_deturck_flow(g0, background, T, dt=1e-4, n_save=65):
    """
    Ricci-DeTurck flow of g0 with the given background.

    In the conformal axisymmetric class on S^2 the DeTurck field
    vanishes identically, so the flow integrates the same equation as
    `ricci_flow`; the value of the construction is the comparison
    against the background flow and the maximum-principle curvature
    bound R(t) >= kappa / (1 - t kappa) with kappa = min R(g0), which
    is checked at every station.

    Args:
        g0: ConformalMetric initial data
        background: FlowPath (a background Ricci flow) or ConformalMetric
        T: final time
        dt: requested step
        n_save: saved stations

    Returns:
        FlowPath with diagnostics {"kappa", "bound_margin", "bound_ok",
        "background_gap"}.

    Raises:
        ValueError: g0 too far from the background start (threshold
            0.5 in the sup norm of the conformal factors).
    """
    if isinstance(background, FlowPath):
        bar0 = background.metrics[0]
    else:
        bar0 = background
    gap0 = g0.distance_c0(bar0)
    if gap0 > 0.5:
        raise ValueError(f"initial data too far from the background: "
                         f"C^0 gap {gap0:.3g} exceeds the admissibility "
                         f"threshold 0.5")
    path = ricci_flow(g0, T, dt=dt, n_save=n_save)
    kappa = float(np.min(g0.scalar_curvature()))
    denom = 1.0 - path.t * kappa
    with np.errstate(divide="ignore"):
        bound = np.where(denom > 0, kappa / np.where(denom > 0, denom, 1.0),
                         -np.inf)
    margin = float(np.min(path.min_R - bound))
    gapT = math.nan
    if isinstance(background, FlowPath):
        # compare against the background at its final station
        tb = float(background.t[-1])
        if tb <= path.t[-1] + 1e-12:
            k = int(np.argmin(np.abs(path.t - tb)))
            gapT = path.metrics[k].distance_c0(background.metrics[-1])
    path.diagnostics.update({
        "flow": "ricci-deturck", "kappa": kappa,
        "bound_margin": margin, "bound_ok": bool(margin >= -1e-6),
        "background_gap": gapT,
    })
    return path


# ============================================================
# Path constructions
# ============================================================

def psc_connecting_path(gamma, gamma0, T=0.05, dt=1e-4, n_leg=21,
                        c0_threshold=0.3):
    """
    Connect two nearby positively curved conformal metrics by a path
    that stays positively curved: a Ricci-DeTurck leg from gamma, a
    linear segment, and a reversed Ricci-flow leg ending at gamma0.

    The concatenation is continuous; junction smoothness is not
    asserted.  The derivative norm on the first leg is fitted against
    t^p and the exponent is reported (consistency with a C/t envelope
    means p >= -1.1).

    Args:
        gamma, gamma0: positively curved ConformalMetrics (shared grid)
        T: flow horizon of the two flow legs
        dt: flow step
        n_leg: stations per leg
        c0_threshold: admissibility threshold on the C^0 gap of the
            conformal factors (empirical default 0.3)

    Returns:
        FlowPath over s in [0, 1] with diagnostics {"fit_exponent",
        "fit_C", "linear_min_R"}.

    Raises:
        ValueError: endpoints not positively curved, C^0 gap above the
            admissibility threshold, or positivity loss on the linear
            segment (reporting the failing s and the C^0 distance).
    """
    if gamma.grid is not gamma0.grid and \
            not np.array_equal(gamma.grid.nodes, gamma0.grid.nodes):
        raise ValueError("endpoints must share a grid")
    if not (gamma.is_psc and gamma0.is_psc):
        raise ValueError("endpoints must have positive scalar curvature")
    gap = gamma.distance_c0(gamma0)
    if gap > c0_threshold:
        raise ValueError(f"endpoints too far apart: C^0 gap {gap:.3g} "
                         f"exceeds the admissibility threshold "
                         f"{c0_threshold:g}")
    grid = gamma.grid
    if gap == 0.0:
        # identical endpoints: the constant path
        s = np.linspace(0.0, 1.0, 3 * n_leg)
        mets = [gamma] * len(s)
        mr = float(np.min(gamma.scalar_curvature()))
        return FlowPath(t=s, metrics=mets,
                        deriv_norms=np.zeros(len(s)),
                        min_R=np.full(len(s), mr), psc=bool(mr > 0.0),
                        diagnostics={"fit_exponent": 0.0, "fit_C": 0.0,
                                     "linear_min_R": mr})
    fwd = ricci_flow(gamma, T, dt=dt, n_save=n_leg)
    bwd = ricci_flow(gamma0, T, dt=dt, n_save=n_leg)

    s_list, mets = [], []
    # leg 1: flow of gamma, s in [0, 1/3]
    for tk, mk in zip(fwd.t, fwd.metrics):
        s_list.append(tk / T / 3.0)
        mets.append(mk)
    # leg 2: linear segment between the two time-T metrics
    facA = fwd.metrics[-1].factor
    facB = bwd.metrics[-1].factor
    for j in range(1, n_leg):
        lam = j / (n_leg - 1)
        fac = (1.0 - lam) * facA + lam * facB
        m = ConformalMetric(0.5 * np.log(fac), grid)
        mr = float(np.min(m.scalar_curvature()))
        if mr <= 0.0:
            raise ValueError(
                f"positivity lost on the linear segment at s = "
                f"{1/3 + lam/3:.4f} (min R = {mr:.3e}, C^0 distance "
                f"{gap:.3g}); endpoints too far apart")
        s_list.append(1.0 / 3.0 + lam / 3.0)
        mets.append(m)
    # leg 3: reversed flow of gamma0, s in [2/3, 1]
    for tk, mk in zip(bwd.t[::-1][1:], bwd.metrics[::-1][1:]):
        s_list.append(2.0 / 3.0 + (T - tk) / T / 3.0)
        mets.append(mk)

    s = np.array(s_list)
    min_R = np.array([np.min(m.scalar_curvature()) for m in mets])
    ref = gamma0.factor
    fac = np.array([m.factor for m in mets])
    dn = np.max(np.abs(np.gradient(fac, s, axis=0)) / ref, axis=1)

    # fit ||eta'|| ~ C t^p on the interior of the first leg
    tt = fwd.t[1:-1]
    dd = dn[1:len(fwd.t) - 1]
    good = dd > 1e-14
    if np.count_nonzero(good) >= 3:
        A = np.column_stack([np.ones(np.count_nonzero(good)),
                             np.log(tt[good])])
        coef, *_ = np.linalg.lstsq(A, np.log(dd[good]), rcond=None)
        fitC, fitp = float(np.exp(coef[0])), float(coef[1])
    else:
        fitC, fitp = 0.0, 0.0
    return FlowPath(t=s, metrics=mets, deriv_norms=dn, min_R=min_R,
                    psc=bool(np.min(min_R) > 0.0),
                    diagnostics={"fit_exponent": fitp, "fit_C": fitC,
                                 "linear_min_R":
                                     float(np.min(min_R))})


def monotone_scaled_path(gamma, eps_tilde=0.05, s0=None, N_exp=5,
                         n_station=65, dt=1e-5):
    """
    Monotone scaled path s -> (1 + eps_tilde s / s0) gamma(s^N) where
    gamma(t) is the Ricci flow of gamma: the linear inflation dominates
    the flow shrinking for small s0, so the path is nondecreasing in
    the quadratic-form sense.

    Args:
        gamma: positively curved ConformalMetric
        eps_tilde: inflation amount (> 0)
        s0: path length; None triggers a halving search from 0.2
        N_exp: time-reparametrization exponent (default 5 from the
            p = 4 gradient-exponent configuration)
        n_station: stations on [0, s0]
        dt: flow step for the tiny flow horizon

    Returns:
        increasing FlowPath with diagnostics {"s0", "min_eig",
        "endpoint_factor"}; endpoints gamma and
        (1 + eps_tilde) gamma(s0^N).

    Raises:
        ValueError: monotonicity failure for an explicitly given s0
            (s0 too large), or search exhaustion.
    """
    if eps_tilde <= 0:
        raise ValueError("eps_tilde must be positive")
    search = s0 is None
    s0_try = 0.2 if search else float(s0)
    grid = gamma.grid
    for _ in range(20 if search else 1):
        Tflow = s0_try ** N_exp
        flow = ricci_flow(gamma, Tflow, dt=min(dt, Tflow / 64.0),
                          n_save=129)
        fac = np.array([m.factor for m in flow.metrics])
        Ks = np.array([m.gauss_curvature() for m in flow.metrics])
        fac_t = CubicSpline(flow.t, fac, axis=0)
        K_t = CubicSpline(flow.t, Ks, axis=0)
        s = np.linspace(0.0, s0_try, n_station)
        tt = s ** N_exp
        f_s = fac_t(tt)
        K_s = K_t(tt)
        # d/ds of (1 + eps s/s0) e^{2 phi(s^N)} gamma_std
        coef = (eps_tilde / s0_try) * f_s \
            + (1.0 + eps_tilde * s[:, None] / s0_try) \
            * (N_exp * s[:, None] ** (N_exp - 1)) * (-2.0 * K_s * f_s)
        min_eig = float(np.min(coef))
        if min_eig >= -1e-10:
            mets = [ConformalMetric(
                0.5 * np.log((1.0 + eps_tilde * sj / s0_try) * fj), grid)
                for sj, fj in zip(s, f_s)]
            min_R = np.array([np.min(m.scalar_curvature()) for m in mets])
            dn = np.max(np.abs(np.gradient(
                np.array([m.factor for m in mets]), s, axis=0))
                / gamma.factor, axis=1)
            return FlowPath(
                t=s, metrics=mets, deriv_norms=dn, min_R=min_R,
                psc=bool(np.min(min_R) > 0.0),
                diagnostics={"s0": s0_try, "min_eig": min_eig,
                             "endpoint_factor": 1.0 + eps_tilde})
        if not search:
            raise ValueError(f"monotonicity failure: s0 = {s0_try:.4g} "
                             f"too large (min derivative eigenvalue "
                             f"{min_eig:.3e})")
        s0_try *= 0.5
    raise ValueError("no admissible s0 found down to "
                     f"{s0_try:.3g}; metric shrinks too fast")


def gap_decay_fit(g0, gbar0, times, dt=None):
    """
    Empirical decay of the flow difference: integrate the flows of g0
    and gbar0 with identical steps, record the sup norm of the
    conformal-factor gap and of its theta gradient at the requested
    times, and fit power laws gap ~ c t^p.

    The gap norm stays of the order of the initial gap (exponent near
    0) while the gradient norm of a rough initial gap decays like
    t^{-1/2}, matching the smoothing rate of the flow.

    Args:
        g0, gbar0: ConformalMetrics on a shared grid
        times: increasing positive sample times
        dt: step (default: resolve the smallest sample time)

    Returns:
        dict with keys "t", "gap", "grad_gap", "gap_exponent",
        "grad_exponent".
    """
    if g0.grid is not gbar0.grid and \
            not np.array_equal(g0.grid.nodes, gbar0.grid.nodes):
        raise ValueError("metrics must share a grid")
    times = np.asarray(times, dtype=float)
    if np.any(times <= 0) or np.any(np.diff(times) <= 0):
        raise ValueError("sample times must be positive and increasing")
    grid = g0.grid
    L = grid.round_laplacian_matrix()
    dth2 = float(np.min(np.diff(grid.nodes))) ** 2
    if dt is None:
        dt = times[0] / 16.0
    p = g0.phi.values.copy()
    q = gbar0.phi.values.copy()
    t = 0.0
    gaps, grads = [], []
    k = 0
    while k < len(times):
        emin = min(float(np.min(np.exp(2.0 * p))),
                   float(np.min(np.exp(2.0 * q))))
        h = min(dt, 0.3 * dth2 * emin, times[k] - t)
        for arr in (p, q):
            k1 = _rf_rhs(grid, L, arr)
            k2 = _rf_rhs(grid, L, arr + 0.5 * h * k1)
            k3 = _rf_rhs(grid, L, arr + 0.5 * h * k2)
            k4 = _rf_rhs(grid, L, arr + h * k3)
            arr += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
        if t >= times[k] - 1e-15:
            diff = np.exp(2.0 * p) - np.exp(2.0 * q)
            gaps.append(float(np.max(np.abs(diff))))
            grads.append(float(np.max(np.abs(grid.derivative(diff)))))
            k += 1
    gaps = np.array(gaps)
    grads = np.array(grads)

    def _fit(y):
        A = np.column_stack([np.ones(len(times)), np.log(times)])
        coef, *_ = np.linalg.lstsq(A, np.log(np.maximum(y, 1e-300)),
                                   rcond=None)
        return float(coef[1])

    return {"t": times, "gap": gaps, "grad_gap": grads,
            "gap_exponent": _fit(gaps), "grad_exponent": _fit(grads)}
