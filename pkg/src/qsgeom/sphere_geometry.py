"""
Grids, quadrature and curvature operators for axisymmetric metrics on
spheres, together with one-parameter families of such metrics and their
slice geometry inside the cylinder metric dt^2 + gamma_t.

All fields are rotationally invariant, so a metric on S^d is described by
a single meridian profile and every operator reduces to one dimension.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import gamma as gamma_fn
from scipy.special import roots_jacobi

from ._fd import (diff_matrix, even_extension_value, even_second_derivative,
                  uniform_diff_matrix)

__all__ = [
    "sphere_volume", "SphereGrid", "AxisymField", "RoundMetric",
    "WarpedMetric", "build_grid", "integrate", "laplace_beltrami",
    "scalar_curvature", "Slice", "MetricPath", "LinearWarped", "RoundScaling",
    "ExponentialScaled", "EuclideanFoliation", "HyperbolicFoliation",
    "slice_geometry", "background_scalar_curvature",
]


def sphere_volume(d):
    """Volume of the unit d-sphere, omega_d = 2 pi^((d+1)/2) / Gamma((d+1)/2)."""
    if d < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {d}")
    return 2.0 * math.pi ** ((d + 1) / 2.0) / gamma_fn((d + 1) / 2.0)


# ============================================================
# Grid and fields
# ============================================================

class SphereGrid:
    """
    Meridian quadrature grid on S^d for axisymmetric integrands.

    Nodes are Gauss-Jacobi points in x = cos(theta) with exponent
    (d-2)/2 (plain Gauss-Legendre when d = 2), mapped to theta, plus the
    two pole endpoints carried with zero weight so fields can be closed
    there.  Integration of an axisymmetric F over S^d is sum(w * F).
    """

    def __init__(self, d, nodes, weights):
        self.d = int(d)
        self.nodes = np.asarray(nodes, dtype=float)
        self.weights = np.asarray(weights, dtype=float)
        self.N = len(self.nodes)
        self._d1 = None
        self._d2 = None
        self._pole_cache = None

    # -- differentiation -------------------------------------------------

    def _matrices(self):
        if self._d1 is None:
            self._d1 = diff_matrix(self.nodes, 1, stencil=3)
            self._d2 = diff_matrix(self.nodes, 2, stencil=3)
        return self._d1, self._d2

    def derivative(self, values, order=1):
        """Derivative in theta with 3-point stencils (second order)."""
        D = self._matrices()[order - 1]
        return D @ values

    def pole_second_derivatives(self, values):
        """
        F'' at both poles assuming even parity of F about each pole.

        Uses the two interior nodes nearest to each pole.
        """
        th = self.nodes
        f0 = even_second_derivative(th[1:3] - th[0],
                                    values[1:3] - values[0])
        f1 = even_second_derivative(th[-1] - th[-3:-1][::-1],
                                    values[-3:-1][::-1] - values[-1])
        return f0, f1

    def round_laplacian(self, values):
        """
        Laplace-Beltrami operator of the unit round metric on S^d applied
        to an axisymmetric field: F'' + (d-1) cot(theta) F' away from the
        poles and the limit d * F'' at the poles.
        """
        D1, D2 = self._matrices()
        th = self.nodes
        out = np.empty_like(values)
        out[1:-1] = (D2 @ values)[1:-1] + \
            (self.d - 1) / np.tan(th[1:-1]) * (D1 @ values)[1:-1]
        p0, p1 = self.pole_second_derivatives(values)
        out[0] = self.d * p0
        out[-1] = self.d * p1
        return out

    def round_laplacian_matrix(self):
        """Dense matrix form of `round_laplacian` (used by implicit steps)."""
        D1, D2 = self._matrices()
        th = self.nodes
        L = D2 + np.diag(np.r_[0.0, (self.d - 1) / np.tan(th[1:-1]), 0.0]) @ D1
        # pole rows: d * F'' with even-parity closure through the two
        # nearest interior nodes
        for row, idx, pole in ((0, np.array([1, 2]), th[0]),
                               (self.N - 1, np.array([self.N - 2,
                                                      self.N - 3]), th[-1])):
            L[row, :] = 0.0
            delta = np.abs(th[idx] - pole)
            V = np.column_stack([delta**2, delta**4])
            # F'' = 2 * b where [b, c] = V^-1 (F(idx) - F(pole))
            Vinv = np.linalg.inv(V)
            w = 2.0 * Vinv[0]
            L[row, idx] = self.d * w
            L[row, row] = -self.d * w.sum()
        return L

    def __repr__(self):
        return f"SphereGrid(d={self.d}, N={self.N})"


@dataclass
class AxisymField:
    """An axisymmetric scalar field sampled on a meridian grid."""
    grid: object
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)


def build_grid(d, N):
    """
    Build a SphereGrid with N nodes (both poles included).

    Args:
        d: sphere dimension, 2 <= d <= 6
        N: total node count, N >= 16

    Returns:
        SphereGrid whose weights sum to omega_d to machine precision.
    """
    d = int(d)
    N = int(N)
    if not 2 <= d <= 6:
        raise ValueError(f"sphere dimension d must be in [2, 6], got {d}")
    if N < 16:
        raise ValueError(f"node count N must be >= 16, got {N}")
    alpha = (d - 2) / 2.0
    x, wx = roots_jacobi(N - 2, alpha, alpha)
    theta = np.arccos(x[::-1])
    w = sphere_volume(d - 1) * wx[::-1]
    nodes = np.concatenate([[0.0], theta, [math.pi]])
    weights = np.concatenate([[0.0], w, [0.0]])
    return SphereGrid(d, nodes, weights)


def integrate(grid, F):
    """
    Integral of an axisymmetric field over (S^d, gamma_std).

    Args:
        grid: SphereGrid
        F: AxisymField on the same grid

    Returns:
        float, sum of weights times values.
    """
    if F.grid is not grid:
        raise ValueError("field was sampled on a different grid")
    return float(grid.weights @ F.values)


# ============================================================
# Metrics
# ============================================================

@dataclass(frozen=True)
class RoundMetric:
    """The round metric lambda^2 gamma_std on S^d."""
    d: int
    lam: float = 1.0

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("radius factor lambda must be positive")

    @property
    def area(self):
        return sphere_volume(self.d) * self.lam ** self.d


class WarpedMetric:
    """
    Axisymmetric metric gamma = f(x)^2 dx^2 + h(x)^2 gamma_{S^(d-1)} on S^d.

    The profile is sampled on a uniform parameter grid x in [0, pi].  The
    warping radius h vanishes exactly at the endpoints and the meridian
    closes smoothly there (|dh/dl| -> 1 with l the arc length).

    Args:
        x: uniform nodes on [0, pi]
        f: positive radial coefficient samples
        h: warping radius samples (zero at the ends, positive inside)
        d: sphere dimension
        pole_tol: tolerance for the smooth-closure check
    """

    _STENCIL = 7

    def __init__(self, x, f, h, d=2, pole_tol=1e-8):
        x = np.asarray(x, dtype=float)
        f = np.asarray(f, dtype=float)
        h = np.array(h, dtype=float)
        if x.ndim != 1 or len(x) < 16:
            raise ValueError("need at least 16 profile samples")
        dx = np.diff(x)
        if abs(x[0]) > 1e-14 or abs(x[-1] - math.pi) > 1e-12 or \
                np.max(np.abs(dx - dx[0])) > 1e-10 * dx[0]:
            raise ValueError("profile grid must be uniform on [0, pi]")
        if np.any(f <= 0):
            raise ValueError("radial coefficient f must be positive")
        scale = float(np.max(np.abs(h)))
        if abs(h[0]) > 1e-10 * scale or abs(h[-1]) > 1e-10 * scale:
            raise ValueError("warping radius h must vanish at both poles")
        h[0] = 0.0
        h[-1] = 0.0
        if np.any(h[1:-1] <= 0):
            raise ValueError("warping radius h must be positive away from "
                             "the poles (interior zero detected)")
        self.x = x
        self.f = f
        self.h = h
        self.d = int(d)
        self.nodes = x

        D1 = uniform_diff_matrix(len(x), x[0], x[-1], 1, self._STENCIL)
        self._D1 = D1
        self._D2 = uniform_diff_matrix(len(x), x[0], x[-1], 2, self._STENCIL)
        self.h_x = D1 @ h
        self.f_x = D1 @ f
        self.hl = self.h_x / f          # dh/dl, l = arc length
        self.hll = (D1 @ self.hl) / f
        # arc length along the meridian via a spline antiderivative of f
        self.ell = CubicSpline(x, f).antiderivative()(x)
        self.length = float(self.ell[-1])

        slope0 = self._pole_slope(self.ell, h)
        slope1 = self._pole_slope(self.length - self.ell[::-1], h[::-1])
        closure = max(abs(abs(slope0) - 1.0), abs(abs(slope1) - 1.0))
        if closure > pole_tol:
            raise ValueError(
                f"meridian does not close smoothly: |dh/dl| deviates from 1 "
                f"by {closure:.2e} at a pole (tolerance {pole_tol:.1e})")
        self.pole_slopes = (slope0, slope1)

    @staticmethod
    def _pole_slope(ell, h):
        """dh/dl at the pole from an odd-parity fit through 3 nodes."""
        dl = ell[1:4] - ell[0]
        V = np.column_stack([dl, dl**3, dl**5])
        coef = np.linalg.solve(V, h[1:4] - h[0])
        return coef[0]

    @classmethod
    def round(cls, d, lam=1.0, n=257):
        """The round sphere of radius lam as a warped profile."""
        x = np.linspace(0.0, math.pi, n)
        h = lam * np.sin(x)
        h[0] = 0.0
        h[-1] = 0.0
        return cls(x, np.full(n, float(lam)), h, d=d)

    # -- calculus on the profile grid ------------------------------------

    def derivative(self, values, order=1):
        D = self._D1 if order == 1 else self._D2
        return D @ values

    def measure_weights(self):
        """
        Quadrature weights w such that w @ F = integral of F d(mu_gamma).

        Composite Simpson on the uniform grid against the volume factor
        omega_{d-1} f h^(d-1).
        """
        n = len(self.x)
        dens = sphere_volume(self.d - 1) * self.f * self.h ** (self.d - 1)
        w = _simpson_weights(n, self.x[1] - self.x[0])
        return w * dens

    def area(self):
        return float(np.sum(self.measure_weights()))

    def laplacian(self, values):
        """
        Laplace-Beltrami operator applied to an axisymmetric field given
        on the profile grid; poles closed with the d * F'' limit in arc
        length assuming even parity.
        """
        F_x = self._D1 @ values
        F_xx = self._D2 @ values
        out = np.empty_like(values)
        out[1:-1] = (F_xx[1:-1] / self.f[1:-1] ** 2
                     + F_x[1:-1] * ((self.d - 1) * self.h_x[1:-1]
                                    / (self.h[1:-1] * self.f[1:-1] ** 2)
                                    - self.f_x[1:-1] / self.f[1:-1] ** 3))
        dl = self.ell[1:3] - self.ell[0]
        out[0] = self.d * even_second_derivative(dl, values[1:3] - values[0])
        dl = self.ell[-1] - self.ell[-3:-1][::-1]
        out[-1] = self.d * even_second_derivative(
            dl, values[-3:-1][::-1] - values[-1])
        return out

    def scalar_curvature_values(self):
        """Pointwise scalar curvature of the warped metric."""
        d = self.d
        h, hl, hll = self.h, self.hl, self.hll
        R = np.empty_like(h)
        R[1:-1] = (d - 1) * ((d - 2) * (1.0 - hl[1:-1] ** 2) / h[1:-1] ** 2
                             - 2.0 * hll[1:-1] / h[1:-1])
        # even extrapolation onto the poles
        R[0] = even_extension_value(self.ell[1:4], R[1:4], n_terms=2)
        R[-1] = even_extension_value(self.length - self.ell[-4:-1][::-1],
                                     R[-4:-1][::-1], n_terms=2)
        return R

    def __repr__(self):
        return f"WarpedMetric(d={self.d}, n={len(self.x)}, L={self.length:.4g})"


def _simpson_weights(n, dx):
    """Composite Simpson weights for n uniform samples (n odd preferred)."""
    w = np.zeros(n)
    m = n if n % 2 == 1 else n - 1
    w[0:m:2] += 1.0
    w[1:m:2] += 4.0
    w[2:m:2] += 1.0
    w[:m] *= dx / 3.0
    if m != n:
        # trapezoid correction on the last interval
        w[-2] += 0.5 * dx
        w[-1] += 0.5 * dx
    return w


def laplace_beltrami(metric, F, grid=None):
    """
    Laplace-Beltrami operator of `metric` applied to an axisymmetric field.

    Args:
        metric: RoundMetric or WarpedMetric
        F: AxisymField (on `grid` for round metrics, on the profile grid
           for warped metrics)
        grid: SphereGrid, required for RoundMetric

    Returns:
        AxisymField with the same grid reference.
    """
    if isinstance(metric, RoundMetric):
        g = grid if grid is not None else F.grid
        if not isinstance(g, SphereGrid):
            raise ValueError("round metrics need a SphereGrid")
        if g.d != metric.d:
            raise ValueError("grid dimension does not match the metric")
        out = g.round_laplacian(F.values) / metric.lam ** 2
        return AxisymField(g, out)
    if isinstance(metric, WarpedMetric):
        if len(F.values) != len(metric.x):
            raise ValueError("field length does not match the profile grid")
        out = metric.laplacian(F.values)
        if not np.all(np.isfinite(out)):
            raise FloatingPointError("non-finite Laplacian output; "
                                     "discretization failure at the poles")
        return AxisymField(F.grid, out)
    raise TypeError(f"unsupported metric type {type(metric).__name__}")


def scalar_curvature(metric, grid=None):
    """
    Scalar curvature field of a round or warped metric.

    For d = 2 the Gauss curvature is R / 2.
    """
    if isinstance(metric, RoundMetric):
        R = metric.d * (metric.d - 1) / metric.lam ** 2
        if grid is None:
            raise ValueError("round metrics need a target grid")
        return AxisymField(grid, np.full(grid.N, R))
    if isinstance(metric, WarpedMetric):
        R = metric.scalar_curvature_values()
        if not np.all(np.isfinite(R)):
            raise FloatingPointError("pole-singular scalar curvature; "
                                     "closure violated")
        return AxisymField(metric, R)
    raise TypeError(f"unsupported metric type {type(metric).__name__}")


# ============================================================
# Metric paths and slice geometry
# ============================================================

class Slice:
    """
    Geometry of one slice of the cylinder metric dt^2 + gamma_t.

    Attributes:
        nodes: meridian coordinate samples
        R_gamma: scalar curvature of gamma_t
        Hbar: slice mean curvature with respect to d/dt
        Asq: squared norm of the second fundamental form (1/2) d(gamma)/dt
        dHbar_dt: t-derivative of Hbar
        R_bg: scalar curvature of the cylinder metric, from the identity
              R_bg = R_gamma - (Hbar^2 + Asq) - 2 dHbar_dt
        dmu: quadrature weights for integrals against d(mu_{gamma_t})
        lap: callable applying the Laplace-Beltrami operator of gamma_t
        dt_scale: min over nodes of (local spacing)^2 / (principal
              diffusion coefficient); explicit-step stability scale
    """

    def __init__(self, nodes, R_gamma, Hbar, Asq, dHbar_dt, dmu, lap,
                 dt_scale):
        n = len(nodes)
        self.nodes = nodes
        self.R_gamma = np.broadcast_to(np.asarray(R_gamma, float), (n,))
        self.Hbar = np.broadcast_to(np.asarray(Hbar, float), (n,))
        self.Asq = np.broadcast_to(np.asarray(Asq, float), (n,))
        self.dHbar_dt = np.broadcast_to(np.asarray(dHbar_dt, float), (n,))
        self.dmu = dmu
        self.lap = lap
        self.dt_scale = dt_scale
        self.R_bg = self.R_gamma - (self.Hbar ** 2 + self.Asq) \
            - 2.0 * self.dHbar_dt


class MetricPath:
    """Base class for one-parameter families gamma_t of metrics on S^d."""

    t_span = (0.0, 1.0)

    def slice(self, t):
        raise NotImplementedError

    def check_t(self, t):
        t0, t1 = self.t_span
        if not (t0 - 1e-12 <= t <= t1 + 1e-12):
            raise ValueError(f"t = {t} outside the path domain [{t0}, {t1}]")


class _RoundSlicePath(MetricPath):
    """Common plumbing for paths whose slices are round spheres."""

    def __init__(self, grid):
        if not isinstance(grid, SphereGrid):
            raise TypeError("round paths require a SphereGrid")
        self.grid = grid
        self.d = grid.d
        self.nodes = grid.nodes
        dth = np.diff(grid.nodes)
        self._min_spacing2 = float(np.min(dth)) ** 2

    def _round_slice(self, rho2, R, Hbar, Asq, dHdt):
        grid = self.grid
        dmu = rho2 ** (self.d / 2.0) * grid.weights
        lap = lambda F: grid.round_laplacian(F) / rho2
        return Slice(grid.nodes, R, Hbar, Asq, dHdt, dmu, lap,
                     self._min_spacing2 * rho2)


class RoundScaling(_RoundSlicePath):
    """gamma_t = rho(t)^2 gamma_std with rho^2 affine: rho^2 = (1-t)a^2 + t b^2."""

    def __init__(self, grid, a, b):
        super().__init__(grid)
        if a <= 0 or b <= 0:
            raise ValueError("radii must be positive")
        self.a = float(a)
        self.b = float(b)

    def rho2(self, t):
        return (1.0 - t) * self.a ** 2 + t * self.b ** 2

    def slice(self, t):
        self.check_t(t)
        d = self.d
        rho2 = self.rho2(t)
        if rho2 <= 0:
            raise ValueError("degenerate slice: rho^2 <= 0")
        q = (self.b ** 2 - self.a ** 2) / (2.0 * rho2)
        return self._round_slice(rho2, d * (d - 1) / rho2, d * q, d * q * q,
                                 -2.0 * d * q * q)


class EuclideanFoliation(_RoundSlicePath):
    """gamma_r = r^2 gamma_std, the round foliation of flat space."""

    def __init__(self, grid, r_span=(1.0, 2.0)):
        super().__init__(grid)
        if r_span[0] <= 0 or r_span[1] <= r_span[0]:
            raise ValueError("need 0 < r0 < r1")
        self.t_span = (float(r_span[0]), float(r_span[1]))

    def slice(self, r):
        self.check_t(r)
        d = self.d
        return self._round_slice(r * r, d * (d - 1) / r ** 2, d / r,
                                 d / r ** 2, -d / r ** 2)


class HyperbolicFoliation(_RoundSlicePath):
    """gamma_r = sinh(r)^2 gamma_std, geodesic spheres in hyperbolic space."""

    def __init__(self, grid, r_span=(1.0, 8.0)):
        super().__init__(grid)
        if r_span[0] <= 0 or r_span[1] <= r_span[0]:
            raise ValueError("need 0 < r0 < r1")
        self.t_span = (float(r_span[0]), float(r_span[1]))

    def slice(self, r):
        self.check_t(r)
        d = self.d
        s = math.sinh(r)
        c = math.cosh(r)
        return self._round_slice(s * s, d * (d - 1) / s ** 2, d * c / s,
                                 d * (c / s) ** 2, -d / s ** 2)


class LinearWarped(MetricPath):
    """
    Componentwise linear interpolation gamma_t = (1-t) gamma_0 + t gamma_1
    between two axisymmetric metrics (f^2 and h^2 interpolate linearly).

    Round endpoints are accepted and produce round slices.
    """

    def __init__(self, gamma0, gamma1, grid=None):
        if isinstance(gamma0, RoundMetric) and isinstance(gamma1, RoundMetric):
            if gamma0.d != gamma1.d:
                raise ValueError("endpoint dimensions differ")
            if grid is None:
                raise ValueError("round endpoints require a SphereGrid")
            self._round = RoundScaling(grid, gamma0.lam, gamma1.lam)
            self.grid = grid
            self.d = grid.d
            self.nodes = grid.nodes
            self.gamma0, self.gamma1 = gamma0, gamma1
            return
        if not (isinstance(gamma0, WarpedMetric)
                and isinstance(gamma1, WarpedMetric)):
            raise TypeError("endpoints must both be warped or both round")
        if gamma0.d != gamma1.d or len(gamma0.x) != len(gamma1.x):
            raise ValueError("endpoint profiles are not on a shared grid")
        self._round = None
        self.grid = gamma0
        self.d = gamma0.d
        self.nodes = gamma0.x
        self.gamma0, self.gamma1 = gamma0, gamma1
        self._df2 = gamma1.f ** 2 - gamma0.f ** 2
        self._dh2 = gamma1.h ** 2 - gamma0.h ** 2

    def metric_at(self, t):
        """The interpolated metric as a WarpedMetric."""
        if self._round is not None:
            rho = math.sqrt(self._round.rho2(t))
            return WarpedMetric.round(self.d, rho, n=max(257, self.grid.N))
        g0, g1 = self.gamma0, self.gamma1
        f2 = (1.0 - t) * g0.f ** 2 + t * g1.f ** 2
        h2 = (1.0 - t) * g0.h ** 2 + t * g1.h ** 2
        return WarpedMetric(g0.x, np.sqrt(f2), np.sqrt(np.maximum(h2, 0.0)),
                            d=self.d)

    def slice(self, t):
        self.check_t(t)
        if self._round is not None:
            return self._round.slice(t)
        d = self.d
        g0 = self.gamma0
        w = self.metric_at(t)
        qf = 0.5 * self._df2 / w.f ** 2
        qh = np.empty_like(qf)
        qh[1:-1] = 0.5 * self._dh2[1:-1] / w.h[1:-1] ** 2
        # at the poles h^2 ratios degenerate to the slope-squared ratio;
        # extrapolate evenly from the interior
        qh[0] = even_extension_value(g0.x[1:4], qh[1:4])
        qh[-1] = even_extension_value(math.pi - g0.x[-4:-1][::-1],
                                      qh[-4:-1][::-1])
        Hbar = qf + (d - 1) * qh
        Asq = qf ** 2 + (d - 1) * qh ** 2
        dHdt = -2.0 * (qf ** 2 + (d - 1) * qh ** 2)
        dx = w.x[1] - w.x[0]
        dt_scale = float(np.min(dx ** 2 * w.f ** 2))
        return Slice(w.x, w.scalar_curvature_values(), Hbar, Asq, dHdt,
                     w.measure_weights(), w.laplacian, dt_scale)


class ExponentialScaled(MetricPath):
    """
    Wrap a path as gamma_bar_t = exp(2 eps t) gamma_t.  Used to make a
    monotone path strictly expanding.
    """

    def __init__(self, inner, eps):
        if eps < 0:
            raise ValueError("eps must be nonnegative")
        self.inner = inner
        self.eps = float(eps)
        self.d = inner.d
        self.grid = inner.grid
        self.nodes = inner.nodes
        self.t_span = inner.t_span

    def slice(self, t):
        sl = self.inner.slice(t)
        d, eps = self.d, self.eps
        e2 = math.exp(2.0 * eps * t)
        inner_lap = sl.lap
        return Slice(sl.nodes,
                     sl.R_gamma / e2,
                     d * eps + sl.Hbar,
                     d * eps * eps + 2.0 * eps * sl.Hbar + sl.Asq,
                     sl.dHbar_dt,
                     e2 ** (d / 2.0) * sl.dmu,
                     lambda F: inner_lap(F) / e2,
                     sl.dt_scale * e2)


def slice_geometry(path, t):
    """
    Slice data (Hbar, |Abar|^2, dHbar/dt) of a path at time t.

    Returns:
        tuple of three AxisymFields on the path's meridian grid.
    """
    sl = path.slice(t)
    g = path.grid
    return (AxisymField(g, sl.Hbar.copy()), AxisymField(g, sl.Asq.copy()),
            AxisymField(g, sl.dHbar_dt.copy()))


def background_scalar_curvature(path, t):
    """
    Scalar curvature of the cylinder metric dt^2 + gamma_t at time t, from
    R_bg = R_gamma - (Hbar^2 + |Abar|^2) - 2 dHbar/dt.
    """
    sl = path.slice(t)
    return AxisymField(path.grid, sl.R_bg.copy())
