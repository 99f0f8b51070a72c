"""
High-level collar constructions on top of the quasi-spherical solver:
PSC cobordisms between nested axisymmetric metrics, monotone-increase
collars for the total mean curvature, the no-fill-in threshold for large
constant boundary data, and the spin bound on fill-in boundary data.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .sphere_geometry import (AxisymField, ExponentialScaled, LinearWarped,
                              MetricPath, RoundMetric, RoundScaling,
                              SphereGrid, WarpedMetric, sphere_volume)
from .quasi_spherical import (CollarSolution, SolverOptions,
                              reconstruct_scalar_curvature, solve_generic,
                              total_mean_curvature_evolution)

__all__ = [
    "CobordismResult", "MonotoneReport", "ThresholdReport",
    "build_psc_cobordism", "monotone_increase_collar",
    "no_fill_in_threshold", "spin_bound",
]


# ============================================================
# Result containers
# ============================================================

@dataclass
class CobordismResult:
    """
    A PSC cobordism between nested boundary metrics.

    Attributes:
        collar: the underlying CollarSolution
        h0: inner boundary mean curvature with respect to the outward
            normal; on the inner boundary the outward direction opposes
            the collar direction, so h0 = -H_0 (sign stored explicitly)
        h1: outer boundary mean curvature, h1 = H_1
        delta: the constant scalar curvature achieved
        epsilon: initial lapse constant used
        residual: max-norm reconstruction residual |R_g - delta|
        verified: residual <= tolerance
        h1_lower_bound: the guaranteed value eps^-1 e^-M min Hbar_1
        h_target_met: min h1 > max h_target (None when no target given)
    """
    collar: CollarSolution
    h0: AxisymField
    h1: AxisymField
    delta: float
    epsilon: float
    residual: float
    verified: bool
    h1_lower_bound: float
    h_target_met: object = None


@dataclass
class MonotoneReport:
    """Monotone-increase collar and its total-mean-curvature report."""
    collar: CollarSolution
    total_initial: float          # integral of H d(mu_{gamma_0})
    total_final: float            # integral of H_1 d(mu_{gamma_bar_1})
    strict_increase: bool
    derivative_positive: bool     # predicted derivative > 0 at stations
    series: object                # EvolutionSeries


@dataclass
class ThresholdReport:
    """No-fill-in threshold estimate from a sweep of round embeddings."""
    C: float
    lam0: float
    sweep: list = field(default_factory=list)  # (lam0, C) pairs tried

    def __float__(self):
        return float(self.C)


# ============================================================
# Helpers
# ============================================================

def _nested(gamma0, gamma1):
    """Strict componentwise comparison gamma1 > gamma0; returns bool."""
    if isinstance(gamma0, RoundMetric) and isinstance(gamma1, RoundMetric):
        return gamma1.lam > gamma0.lam
    if isinstance(gamma0, WarpedMetric) and isinstance(gamma1, WarpedMetric):
        return bool(np.all(gamma1.f > gamma0.f)
                    and np.all(gamma1.h[1:-1] > gamma0.h[1:-1]))
    raise TypeError("endpoints must both be round or both warped")


def _as_warped(gamma, d, n):
    if isinstance(gamma, RoundMetric):
        return WarpedMetric.round(d, gamma.lam, n)
    return gamma


def _lattice_min_R(path, n_t=33):
    """Minimum of R_{gamma_t} over the discrete (theta, t) lattice."""
    t0, t1 = path.t_span
    vals = [np.min(path.slice(t).R_gamma)
            for t in np.linspace(t0, t1, n_t)]
    return float(np.min(vals))


def _monotone_nondecreasing(path):
    """True when the family gamma_t is componentwise nondecreasing in t."""
    if isinstance(path, ExponentialScaled):
        # the wrap adds eps * gamma >= 0; inner monotonicity suffices
        return _monotone_nondecreasing(path.inner)
    if isinstance(path, RoundScaling):
        return path.b >= path.a
    if isinstance(path, LinearWarped):
        if path._round is not None:
            return path._round.b >= path._round.a
        return bool(np.all(path._df2 >= 0) and np.all(path._dh2 >= 0))
    # foliations by growing spheres and unknown paths: sample Hbar
    t0, t1 = path.t_span
    return all(np.all(path.slice(t).Hbar >= -1e-12)
               for t in np.linspace(t0, t1, 17))


# ============================================================
# Operations
# ============================================================

def build_psc_cobordism(gamma0, gamma1, delta, h_target=None, eps=0.01,
                        grid=None, opts=None):
    """
    Build a PSC cobordism of constant scalar curvature delta between two
    nested axisymmetric metrics gamma1 > gamma0.

    Solves the quasi-spherical equation along the linear interpolation
    with target f = delta and constant initial lapse eps, then reports
    the induced boundary mean curvatures with explicit signs.

    Args:
        gamma0, gamma1: RoundMetric or WarpedMetric, componentwise nested
        delta: prescribed scalar curvature, > 0
        h_target: optional AxisymField the outer mean curvature should
            dominate
        eps: initial lapse constant; must satisfy eps <= e^(-M/2)
        grid: SphereGrid, required when both endpoints are round
        opts: SolverOptions (default: 513 stations, tolerance 1e-3)

    Returns:
        CobordismResult

    Raises:
        ValueError: endpoints not nested, or eps above the threshold.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not _nested(gamma0, gamma1):
        raise ValueError("endpoints are not strictly nested: need "
                         "gamma1 > gamma0 componentwise")
    opts = opts if opts is not None else SolverOptions(n_stations=513,
                                                       tolerance=1e-3)
    path = LinearWarped(gamma0, gamma1, grid=grid)

    # discrete coefficient-ratio bound on the station lattice, needed for
    # the eps admissibility check before solving
    stations = np.linspace(0.0, 1.0, opts.n_stations)
    M = 0.0
    for t in stations:
        sl = path.slice(t)
        M = max(M, float(np.max((np.abs(sl.R_gamma) + np.abs(sl.R_bg)
                                 + delta) / sl.Hbar)))
    eps0 = math.exp(-0.5 * M)
    if eps > eps0:
        raise ValueError(
            f"eps = {eps} exceeds the admissible threshold "
            f"e^(-M/2) = {eps0:.6g} (M = {M:.6g}); no positivity "
            f"guarantee for the collar lapse")

    sol = solve_generic(path, float(delta), eps, opts=opts)
    if sol.status != "completed":
        raise RuntimeError(f"collar solve failed with status {sol.status!r}")

    rec = reconstruct_scalar_curvature(sol)
    sl0 = path.slice(0.0)
    sl1 = path.slice(1.0)
    h0 = AxisymField(path.grid, -sl0.Hbar / sol.u[0])
    h1 = AxisymField(path.grid, sl1.Hbar / sol.u[-1])
    bound = math.exp(-M) / eps * float(np.min(sl1.Hbar))
    verified = rec.residual <= opts.tolerance
    if not verified:
        warnings.warn(f"cobordism scalar-curvature residual {rec.residual:.3e}"
                      f" exceeds tolerance {opts.tolerance:.1e}",
                      RuntimeWarning, stacklevel=2)
    met = None
    if h_target is not None:
        tv = h_target.values if isinstance(h_target, AxisymField) \
            else np.asarray(h_target, dtype=float)
        met = bool(np.min(h1.values) > np.max(tv))
    return CobordismResult(collar=sol, h0=h0, h1=h1, delta=float(delta),
                           epsilon=float(eps), residual=rec.residual,
                           verified=verified, h1_lower_bound=bound,
                           h_target_met=met)


def monotone_increase_collar(gamma_path, eps, H, opts=None):
    """
    Collar over a monotone NNSC family that strictly increases the total
    mean curvature.

    Wraps the family as gamma_bar_t = e^(2 eps t) gamma_t, solves the
    quasi-spherical equation with f = 0 starting from u(., 0) =
    Hbar_0 / H, and reports the strict increase of the total mean
    curvature from the given data H to the outer slice.

    Args:
        gamma_path: MetricPath, componentwise nondecreasing with R >= 0
        eps: wrap rate, > 0
        H: positive AxisymField (or array/scalar) of boundary mean
           curvature data on the initial slice
        opts: SolverOptions

    Returns:
        MonotoneReport
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not isinstance(gamma_path, MetricPath):
        raise TypeError("gamma_path must be a MetricPath")
    t0, t1 = gamma_path.t_span
    for t in np.linspace(t0, t1, 17):
        if np.min(gamma_path.slice(t).R_gamma) < -1e-10:
            raise ValueError(f"family is not NNSC: R_gamma < 0 at t = {t}")
    if not _monotone_nondecreasing(gamma_path):
        raise ValueError("family gamma_t is not monotone nondecreasing")

    opts = opts if opts is not None else SolverOptions(n_stations=257)
    wrapped = ExponentialScaled(gamma_path, eps)
    sl0 = wrapped.slice(t0)
    Hv = H.values if isinstance(H, AxisymField) else \
        np.broadcast_to(np.asarray(H, dtype=float), sl0.Hbar.shape)
    if np.any(Hv <= 0):
        raise ValueError("boundary data H must be positive")
    u0 = sl0.Hbar / Hv
    sol = solve_generic(wrapped, 0.0, u0, opts=opts)
    if sol.status != "completed":
        raise RuntimeError(f"collar solve failed with status {sol.status!r}")
    series = total_mean_curvature_evolution(sol)
    return MonotoneReport(
        collar=sol,
        total_initial=float(series.total[0]),
        total_final=float(series.total[-1]),
        strict_increase=bool(series.total[-1] > series.total[0]),
        derivative_positive=bool(np.all(series.predicted_derivative > 0)),
        series=series)


def no_fill_in_threshold(gamma, delta=0.1, eps=0.01, lam_sweep=9, opts=None):
    """
    Threshold constant C above which constant boundary mean curvature
    admits no NNSC fill-in, estimated over round embeddings.

    Embeds gamma inside a round sphere lam0^2 gamma_std, builds the
    constant-scalar-curvature cobordism, and takes C = max(-H_0) on the
    inner boundary.  lam0 runs over a geometric sweep lam_min * 2^(k/4);
    the reported C is the smallest value achieved (an upper bound for
    the true threshold).

    Args:
        gamma: WarpedMetric on S^2 (d = 2)
        delta: collar scalar curvature
        eps: initial lapse constant
        lam_sweep: number of sweep points
        opts: SolverOptions for the cobordism solves

    Returns:
        ThresholdReport with fields C, lam0, sweep.
    """
    if not isinstance(gamma, WarpedMetric) or gamma.d != 2:
        raise ValueError("gamma must be a WarpedMetric on S^2")
    n = len(gamma.x)
    sin_x = np.sin(gamma.x[1:-1])
    lam_min = 1.02 * max(float(np.max(gamma.f)),
                         float(np.max(gamma.h[1:-1] / sin_x)))
    sweep = []
    for k in range(lam_sweep):
        lam0 = lam_min * 2.0 ** (k / 4.0)
        outer = WarpedMetric.round(2, lam0, n)
        try:
            res = build_psc_cobordism(gamma, outer, delta, eps=eps,
                                      opts=opts)
        except (ValueError, RuntimeError):
            continue
        # threshold is the max of minus the outward-normal inner datum,
        # i.e. max of Hbar_0 / u(., 0)
        C = float(np.max(-res.h0.values))
        sweep.append((lam0, C))
    if not sweep:
        raise RuntimeError("no admissible round embedding found in the "
                           "sweep; decrease eps")
    lam_best, C_best = min(sweep, key=lambda p: p[1])
    return ThresholdReport(C=C_best, lam0=lam_best, sweep=sweep)


def spin_bound(gamma, lam, K, grid=None, n_t=33):
    """
    Upper bound on the total boundary mean curvature of spin NNSC
    fill-ins of (S^(n-1), gamma) under a negative curvature floor.

    Returns (n-1) omega_{n-1} lam^(n-2) sqrt(1 - K lam^2 / (n(n-1))),
    valid when lam^2 gamma_std > gamma and K lower-bounds the scalar
    curvature along the linear interpolation from gamma to the round
    sphere.

    Args:
        gamma: RoundMetric or WarpedMetric on S^(n-1)
        lam: round embedding radius with lam^2 gamma_std > gamma
        K: strictly negative curvature floor; must lie below the sampled
           minimum of R_{gamma_t} by a 1e-8 margin
        grid: SphereGrid (needed when gamma is round)
        n_t: lattice resolution in t for the K validation

    Returns:
        float, the closed-form bound.
    """
    if K >= 0:
        raise ValueError("curvature floor K must be negative")
    if lam <= 0:
        raise ValueError("lam must be positive")
    d = gamma.d
    n = d + 1
    outer = RoundMetric(d, lam) if isinstance(gamma, RoundMetric) \
        else WarpedMetric.round(d, lam, len(gamma.x))
    if not _nested(gamma, outer):
        raise ValueError(f"lam^2 gamma_std with lam = {lam} does not "
                         f"strictly dominate gamma")
    path = LinearWarped(gamma, outer, grid=grid)
    min_R = _lattice_min_R(path, n_t)
    if K > min_R - 1e-8:
        raise ValueError(
            f"K = {K} is not a valid floor: sampled min R = {min_R:.6g} "
            f"requires K <= {min_R - 1e-8:.6g}")
    return (n - 1) * sphere_volume(n - 1) * lam ** (n - 2) \
        * math.sqrt(1.0 - K * lam * lam / (n * (n - 1)))
