"""
Quasi-local mass functionals for axisymmetric Bartnik data: closed-form
total-mean-curvature suprema for round data, the generalized Brown-York
mass, the asymptotically hyperbolic mass function along quasi-spherical
collars, and Schwarzschild coordinate-sphere data with exact closed
forms in dimension three.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .sphere_geometry import (AxisymField, RoundMetric, SphereGrid,
                              WarpedMetric, build_grid, sphere_volume)
from .quasi_spherical import CollarSolution, _time_derivative

__all__ = [
    "BartnikTriple", "MassCurve", "ByReport", "SchwarzschildData",
    "lambda_plus_round", "lambda_plus_kappa_round", "brown_york",
    "schwarzschild_sphere_data", "by_large_sphere_limit", "ah_mass_curve",
    "ah_boundary_value",
]


# ============================================================
# Domain types
# ============================================================

@dataclass
class BartnikTriple:
    """
    Axisymmetric Bartnik data (S^d, gamma, H): a boundary metric together
    with a prescribed mean curvature with respect to the outward normal.
    """
    metric: object                 # RoundMetric or WarpedMetric
    H: AxisymField

    def __post_init__(self):
        if not isinstance(self.metric, (RoundMetric, WarpedMetric)):
            raise TypeError("metric must be RoundMetric or WarpedMetric")
        if not np.all(np.isfinite(self.H.values)):
            raise ValueError("mean curvature data must be finite")

    @property
    def d(self):
        return self.metric.d

    def total_mean_curvature(self):
        """Integral of H over (Sigma, gamma)."""
        if isinstance(self.metric, RoundMetric):
            g = self.H.grid
            if not isinstance(g, SphereGrid):
                raise ValueError("round data needs H on a SphereGrid")
            return float(self.metric.lam ** self.d
                         * (g.weights @ self.H.values))
        return float(self.metric.measure_weights() @ self.H.values)


@dataclass
class MassCurve:
    """
    The mass function m(r) along a hyperbolic quasi-spherical collar.

    Attributes:
        r: stations
        m: mass values
        m_prime: closed-form derivative values at the stations
        m_prime_fd: finite-difference derivative of m
        identity_residual: max mismatch of the two derivatives at
            interior stations, relative to the peak |m_prime| (the
            pointwise quotient is meaningless near r_max where the
            derivative underflows)
        limit: extrapolated limit 2^-n / omega_{n-1} * integral of v
        limit_residual: |m(r_max) - limit|
        monotone: whether m is non-increasing up to 1e-8
    """
    r: np.ndarray
    m: np.ndarray
    m_prime: np.ndarray
    m_prime_fd: np.ndarray
    identity_residual: float
    limit: float
    limit_residual: float
    monotone: bool


@dataclass
class ByReport:
    """Generalized Brown-York mass evaluation."""
    lambda_plus: float
    provenance: str
    total_H: float
    m_by: float


class LambdaPlusValue(float):
    """A float carrying the provenance of the Lambda_+ value."""

    def __new__(cls, value, provenance):
        obj = super().__new__(cls, value)
        obj.provenance = provenance
        return obj


@dataclass
class SchwarzschildData:
    """Coordinate-sphere Bartnik data in a Schwarzschild slice."""
    triple: BartnikTriple
    n: int
    mass: float
    r_iso: float                  # isotropic (coordinate) radius
    r_areal: float                # areal radius
    H: float                      # exact mean curvature value
    H_series: float               # leading-order expansion value
    area: float
    total_H: float


# ============================================================
# Closed forms for round data
# ============================================================

def lambda_plus_round(n, lam=1.0):
    """
    Supremum of the total boundary mean curvature over NNSC fill-ins of
    the round sphere (S^(n-1), lam^2 gamma_std).

    Returns (n-1) omega_{n-1} lam^(n-2).  The value is the closed form
    equivalent to the positive mass theorem for asymptotically flat
    manifolds; the returned float carries that caveat in `provenance`.

    Args:
        n: fill-in dimension, 3 <= n <= 7
        lam: sphere radius, > 0
    """
    n = int(n)
    if not 3 <= n <= 7:
        raise ValueError(f"dimension n must be in [3, 7], got {n}")
    if lam <= 0:
        raise ValueError("lam must be positive")
    val = (n - 1) * sphere_volume(n - 1) * lam ** (n - 2)
    return LambdaPlusValue(val, "closed-form round (conditional on AF PMT)")


def lambda_plus_kappa_round(n, lam, kappa):
    """
    Supremum of the total boundary mean curvature over fill-ins with
    scalar curvature at least n(n-1) kappa, for round boundary data
    (S^(n-1), lam^2 gamma_std) and kappa < 0.

    The kappa = -1 value (n-1) omega_{n-1} lam^(n-2) sqrt(1 + lam^2)
    extends to general negative kappa by the scaling
    |kappa|^(1 - n/2) Lambda_{+,-1}(|kappa| lam^2 gamma_std), which
    collapses to the closed form with 1 - kappa lam^2 under the root.

    Args:
        n: dimension, 3 <= n <= 7
        lam: sphere radius, > 0
        kappa: strictly negative curvature scale
    """
    n = int(n)
    if not 3 <= n <= 7:
        raise ValueError(f"dimension n must be in [3, 7], got {n}")
    if lam <= 0:
        raise ValueError("lam must be positive")
    if kappa >= 0:
        raise ValueError("kappa must be negative (use lambda_plus_round "
                         "for the kappa = 0 case)")
    val = (n - 1) * sphere_volume(n - 1) * lam ** (n - 2) \
        * math.sqrt(1.0 - kappa * lam * lam)
    return LambdaPlusValue(val, "closed-form round (conditional on AH PMT)")


# ============================================================
# Brown-York mass
# ============================================================

def brown_york(data, lambda_plus):
    """
    Generalized Brown-York mass of a Bartnik triple:

        m_BY = (Lambda_+ - integral of H) / ((n-1) omega_{n-1}).

    Args:
        data: BartnikTriple with H > 0
        lambda_plus: the Lambda_+ value for the boundary metric; floats
            produced by the closed-form helpers carry their provenance

    Returns:
        ByReport
    """
    if np.any(data.H.values <= 0):
        raise ValueError("Brown-York mass needs strictly positive H")
    n = data.d + 1
    total = data.total_mean_curvature()
    m_by = (float(lambda_plus) - total) / ((n - 1) * sphere_volume(n - 1))
    return ByReport(
        lambda_plus=float(lambda_plus),
        provenance=getattr(lambda_plus, "provenance", "user-supplied"),
        total_H=total, m_by=m_by)


# ============================================================
# Schwarzschild coordinate spheres
# ============================================================

def schwarzschild_sphere_data(n, m, r, grid=None):
    """
    Bartnik data of the coordinate sphere of isotropic radius r in the
    n-dimensional Schwarzschild slice of mass m.

    The slice is written conformally, g = Phi^(4/(n-2)) delta with
    Phi = 1 + m / (2 rho^(n-2)), so the sphere rho = r is round with
    areal radius r_areal = r Phi^(2/(n-2)) and constant mean curvature

        H = (n-1) Phi^(-2/(n-2)) (1/r + (2/(n-2)) Phi'/Phi),

    exact in every dimension.  The leading-order series value
    ((n-1)/r)(1 - ((n-1)/(n-2)) m r^(2-n)) is reported alongside.

    Args:
        n: slice dimension, 3 <= n <= 7
        m: mass parameter (any sign)
        r: isotropic radius; must stay outside the horizon-scale region
        grid: optional SphereGrid for the returned H field
    """
    n = int(n)
    if not 3 <= n <= 7:
        raise ValueError(f"dimension n must be in [3, 7], got {n}")
    if r <= 0:
        raise ValueError("r must be positive")
    if m > 0 and r ** (n - 2) <= 0.75 * m:
        # isotropic horizon at rho^(n-2) = m/2; demand a 50% margin
        raise ValueError(
            f"r = {r} is in the horizon-scale regime: need "
            f"r^(n-2) > 0.75 m = {0.75 * m:.6g}")
    p = n - 2
    Phi = 1.0 + 0.5 * m / r ** p
    if Phi <= 0:
        raise ValueError("conformal factor non-positive at this radius")
    dPhi = -0.5 * p * m / r ** (p + 1)
    r_areal = r * Phi ** (2.0 / p)
    H = (n - 1) * Phi ** (-2.0 / p) * (1.0 / r + (2.0 / p) * dPhi / Phi)
    H_series = (n - 1) / r * (1.0 - (n - 1) / p * m / r ** p)
    if grid is None:
        grid = build_grid(n - 1, 64)
    triple = BartnikTriple(RoundMetric(n - 1, r_areal),
                           AxisymField(grid, np.full(grid.N, H)))
    area = sphere_volume(n - 1) * r_areal ** (n - 1)
    return SchwarzschildData(triple=triple, n=n, mass=float(m),
                             r_iso=float(r), r_areal=float(r_areal),
                             H=float(H), H_series=float(H_series),
                             area=float(area), total_H=float(H * area))


def _isotropic_from_areal(n, m, r_areal):
    """Invert r_areal = rho Phi(rho)^(2/(n-2)) for the isotropic radius."""
    from scipy.optimize import brentq
    p = n - 2
    if m == 0:
        return float(r_areal)
    f = lambda rho: rho * (1.0 + 0.5 * m / rho ** p) ** (2.0 / p) - r_areal
    if m > 0:
        lo = (0.751 * m) ** (1.0 / p)
    else:
        # conformal factor must stay positive: rho^p > -m/2
        lo = (1.0 + 1e-9) * (-0.5 * m) ** (1.0 / p)
    hi = 2.0 * r_areal + abs(m) + 1.0
    if f(lo) > 0:
        raise ValueError(f"areal radius {r_areal} is inside the valid "
                         f"regime boundary")
    return brentq(f, lo, hi, xtol=1e-14, rtol=1e-15)


def by_large_sphere_limit(n, m, r_list, grid=None):
    """
    Brown-York masses of growing Schwarzschild metric spheres.

    Args:
        n: slice dimension
        m: Schwarzschild mass
        r_list: increasing areal radii in the valid regime
        grid: optional SphereGrid reused across radii

    Returns:
        list of ByReport, one per radius; m_BY(r) converges to m at
        rate 1/r.
    """
    r_list = [float(r) for r in r_list]
    if any(b <= a for a, b in zip(r_list, r_list[1:])):
        raise ValueError("r_list must be strictly increasing")
    if grid is None:
        grid = build_grid(n - 1, 64)
    out = []
    for r in r_list:
        rho = _isotropic_from_areal(n, m, r)
        data = schwarzschild_sphere_data(n, m, rho, grid=grid)
        out.append(brown_york(data.triple,
                              lambda_plus_round(n, data.r_areal)))
    return out


# ============================================================
# Asymptotically hyperbolic mass curve
# ============================================================

def ah_mass_curve(sol):
    """
    Mass function m(r) along a hyperbolic quasi-spherical collar.

    In the normalization of the defining line (total mean curvature
    deficit divided by (n-1) omega_{n-1}),

        m(r) = (1 / omega_{n-1}) sinh^(n-2) r cosh^2 r
               * integral of (1 - 1/u) domega,

    with closed-form derivative

        m'(r) = -(1 / (2 omega_{n-1})) sinh^(n-3) r cosh r
                * (n - 2 + n sinh^2 r)
                * integral of u^-1 (u - 1)^2 domega,

    so m is non-increasing.  The limit is cross-checked against
    2^-n / omega_{n-1} times the integral of the fitted asymptotic
    coefficient v.

    Args:
        sol: CollarSolution from solve_hyperbolic

    Returns:
        MassCurve
    """
    if not isinstance(sol, CollarSolution):
        raise TypeError("sol must be a CollarSolution")
    if "asymptotic_v" not in sol.diagnostics:
        raise ValueError("sol does not carry hyperbolic asymptotics; "
                         "produce it with solve_hyperbolic")
    grid = sol.path.grid
    d = grid.d
    n = d + 1
    omega = sphere_volume(d)
    w = grid.weights
    r = sol.t
    s = np.sinh(r)
    c = np.cosh(r)
    I1 = (1.0 - 1.0 / sol.u) @ w                     # int (1 - 1/u) domega
    I2 = ((sol.u - 1.0) ** 2 / sol.u) @ w            # int u^-1 (u-1)^2
    mvals = s ** (n - 2) * c ** 2 * I1 / omega
    mprime = -0.5 * s ** (n - 3) * c * (n - 2 + n * s * s) * I2 / omega
    m_fd = _time_derivative(r, mvals[:, None])[:, 0]
    scale = float(np.max(np.abs(mprime))) + 1e-12
    rel = np.abs(m_fd[2:-2] - mprime[2:-2]) / scale
    v = sol.diagnostics["asymptotic_v"]
    limit = float((v @ w) / (2 ** n * omega))
    return MassCurve(
        r=r, m=mvals, m_prime=mprime, m_prime_fd=m_fd,
        identity_residual=float(np.max(rel)) if len(rel) else math.nan,
        limit=limit,
        limit_residual=float(abs(mvals[-1] - limit)),
        monotone=bool(np.all(np.diff(mvals) <= 1e-8)))


def ah_boundary_value(n, lam, H):
    """
    Total boundary mean curvature of AH Bartnik data against its bound.

    Computes the integral of H over (S^(n-1), lam^2 gamma_std) and the
    closed-form bound (n-1) omega_{n-1} lam^(n-2) sqrt(1 + lam^2) that
    NNSC-in-the-hyperbolic-sense fill-ins impose.

    Args:
        n: dimension, 3 <= n <= 7
        lam: sphere radius
        H: AxisymField on a SphereGrid of dimension n-1, positive

    Returns:
        (total, bound) pair of floats.
    """
    n = int(n)
    if not 3 <= n <= 7:
        raise ValueError(f"dimension n must be in [3, 7], got {n}")
    if lam <= 0:
        raise ValueError("lam must be positive")
    if not isinstance(H, AxisymField) or not isinstance(H.grid, SphereGrid):
        raise ValueError("H must be an AxisymField on a SphereGrid")
    if H.grid.d != n - 1:
        raise ValueError("grid dimension does not match n")
    if np.any(H.values <= 0):
        raise ValueError("H must be positive")
    total = float(lam ** (n - 1) * (H.grid.weights @ H.values))
    bound = (n - 1) * sphere_volume(n - 1) * lam ** (n - 2) \
        * math.sqrt(1.0 + lam * lam)
    return total, bound
