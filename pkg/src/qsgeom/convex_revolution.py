"""
Convex surfaces of revolution: isometric embedding of nonnegatively
curved axisymmetric metrics on S^2, total mean curvature, Steiner offset
areas, enclosure monotonicity, intrinsic diameter by fast sweeping, and
a dilation distance restricted to axisymmetric reparametrizations.

Profiles are unit-speed meridian curves (rho(s), z(s)) rotated about the
z-axis.  Piecewise-smooth (C^{1,1}) profiles carry their segment breaks
and, when built from closed forms, exact per-segment callables so that
integral quantities are computed to quadrature precision across corners.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from .sphere_geometry import WarpedMetric

__all__ = [
    "RevolutionProfile", "EnclosureReport", "Prop51Report", "DilationResult",
    "embed", "total_mean_curvature", "steiner_area", "enclosure_check",
    "diameter", "prop51_check", "dilation", "capped_cylinder_metric",
    "spheroid_metric", "gauss_bonnet_total", "steiner_fit",
]


# ============================================================
# Profiles
# ============================================================

@dataclass
class RevolutionProfile:
    """
    Unit-speed meridian profile of a convex surface of revolution.

    Attributes:
        s: arclength samples in [0, L]
        rho: radius samples, zero exactly at the endpoints
        z: height samples
        alpha: tangent angle, (rho', z') = (cos alpha, sin alpha)
        kappa1: meridian principal curvature
        kappa2: parallel principal curvature
        breaks: interior arclengths of C^1 junctions (kappa1 may jump)
        exact: optional dict of callables {rho, zp, kappa1} of s for
            segment-exact quadrature
    """
    s: np.ndarray
    rho: np.ndarray
    z: np.ndarray
    alpha: np.ndarray
    kappa1: np.ndarray
    kappa2: np.ndarray
    breaks: tuple = ()
    exact: dict = None

    def __post_init__(self):
        for name in ("s", "rho", "z", "alpha", "kappa1", "kappa2"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=float))
        if self.rho[0] != 0.0 or self.rho[-1] != 0.0:
            raise ValueError("profile radius must vanish exactly at the "
                             "endpoints")
        if np.any(self.rho[1:-1] <= 0):
            raise ValueError("profile radius must be positive inside")
        # unit speed: (drho/ds)^2 + (dz/ds)^2 = 1
        dev = np.abs(np.cos(self.alpha) ** 2 + np.sin(self.alpha) ** 2 - 1.0)
        if np.max(dev) > 1e-10:
            raise ValueError("tangent angle does not encode a unit-speed "
                             "curve")
        if np.min(self.kappa1) < -1e-8 or np.min(self.kappa2) < -1e-8:
            j = int(np.argmin(np.minimum(self.kappa1, self.kappa2)))
            raise ValueError(f"profile is not convex: principal curvature "
                             f"{min(self.kappa1[j], self.kappa2[j]):.3e} "
                             f"at s = {self.s[j]:.6g}")

    @property
    def length(self):
        return float(self.s[-1])

    # -- integral quantities --------------------------------------------

    def _segments(self):
        pts = [0.0, *self.breaks, self.length]
        return list(zip(pts[:-1], pts[1:]))

    def _integrate_exact(self, integrand):
        total = 0.0
        for a, b in self._segments():
            val, _ = quad(integrand, a, b, limit=200, epsabs=1e-13,
                          epsrel=1e-12)
            total += val
        return total

    def _integrate_samples(self, values):
        return float(CubicSpline(self.s, values).integrate(0.0, self.length))

    def area(self):
        """Surface area 2 pi * integral of rho ds."""
        if self.exact is not None:
            r = self.exact["rho"]
            return 2.0 * math.pi * self._integrate_exact(r)
        return 2.0 * math.pi * self._integrate_samples(self.rho)

    def scale(self, lam):
        """The profile of the surface dilated by lam > 0."""
        if lam <= 0:
            raise ValueError("scale factor must be positive")
        ex = None
        if self.exact is not None:
            r, zp, k1 = (self.exact["rho"], self.exact["zp"],
                         self.exact["kappa1"])
            ex = {"rho": lambda t: lam * r(t / lam),
                  "zp": lambda t: zp(t / lam),
                  "kappa1": lambda t: k1(t / lam) / lam}
        return RevolutionProfile(
            lam * self.s, lam * self.rho, lam * self.z, self.alpha,
            self.kappa1 / lam, self.kappa2 / lam,
            breaks=tuple(lam * b for b in self.breaks), exact=ex)

    # -- constructors ----------------------------------------------------

    @classmethod
    def sphere(cls, R=1.0, n=513):
        """Round sphere of radius R."""
        if R <= 0:
            raise ValueError("radius must be positive")
        s = np.linspace(0.0, math.pi * R, n)
        t = s / R
        rho = R * np.sin(t)
        rho[0] = rho[-1] = 0.0
        prof = cls(s, rho, -R * np.cos(t), t, np.full(n, 1.0 / R),
                   np.full(n, 1.0 / R),
                   exact={"rho": lambda u: R * math.sin(u / R),
                          "zp": lambda u: math.sin(u / R),
                          "kappa1": lambda u: 1.0 / R})
        return prof

    @classmethod
    def capped_cylinder(cls, l, eps1, eps2, n=513):
        """
        Cylinder of radius eps2 and length l - 2 eps1 capped with two
        hemispheres of radius eps2 (a C^{1,1} convex surface).
        """
        Lc = l - 2.0 * eps1
        if eps2 <= 0 or Lc <= 0:
            raise ValueError("need eps2 > 0 and l > 2 eps1")
        q = 0.5 * math.pi * eps2          # cap meridian length
        L = Lc + 2.0 * q
        b1, b2 = q, q + Lc

        def rho_f(u):
            if u <= b1:
                return eps2 * math.sin(u / eps2)
            if u <= b2:
                return eps2
            return eps2 * math.sin((L - u) / eps2)

        def zp_f(u):
            if u <= b1:
                return math.sin(u / eps2)
            if u <= b2:
                return 1.0
            return math.sin((L - u) / eps2)

        def k1_f(u):
            return 0.0 if b1 < u < b2 else 1.0 / eps2

        def alpha_f(u):
            if u <= b1:
                return u / eps2
            if u <= b2:
                return 0.5 * math.pi
            return math.pi - (L - u) / eps2

        def z_f(u):
            if u <= b1:
                return -eps2 * math.cos(u / eps2)
            if u <= b2:
                return u - b1
            return Lc + eps2 * math.cos((L - u) / eps2)

        # sample with the breaks as exact nodes
        m = max(n // 4, 32)
        s = np.unique(np.concatenate([
            np.linspace(0.0, b1, m), np.linspace(b1, b2, 2 * m),
            np.linspace(b2, L, m)]))
        rho = np.array([rho_f(u) for u in s])
        rho[0] = rho[-1] = 0.0
        z = np.array([z_f(u) for u in s])
        alpha = np.array([alpha_f(u) for u in s])
        k1 = np.array([k1_f(u) for u in s])
        zp = np.array([zp_f(u) for u in s])
        k2 = np.empty_like(s)
        k2[1:-1] = zp[1:-1] / rho[1:-1]
        k2[0] = k1[0]
        k2[-1] = k1[-1]
        return cls(s, rho, z, alpha, k1, k2, breaks=(b1, b2),
                   exact={"rho": rho_f, "zp": zp_f, "kappa1": k1_f})

    @classmethod
    def spheroid(cls, a, c, n=1025):
        """
        Spheroid with equatorial radius a and polar semi-axis c,
        meridian (a sin v, -c cos v).
        """
        if a <= 0 or c <= 0:
            raise ValueError("semi-axes must be positive")
        v = np.linspace(0.0, math.pi, 8193)
        speed = np.sqrt((a * np.cos(v)) ** 2 + (c * np.sin(v)) ** 2)
        ell = CubicSpline(v, speed).antiderivative()(v)
        L = float(ell[-1])
        v_of_s = CubicSpline(ell, v)
        s = np.linspace(0.0, L, n)
        vs = np.clip(v_of_s(s), 0.0, math.pi)
        vs[0], vs[-1] = 0.0, math.pi
        w = np.sqrt((a * np.cos(vs)) ** 2 + (c * np.sin(vs)) ** 2)
        rho = a * np.sin(vs)
        rho[0] = rho[-1] = 0.0
        z = -c * np.cos(vs)
        alpha = np.arctan2(c * np.sin(vs), a * np.cos(vs))
        k1 = a * c / w ** 3
        k2 = c / (a * w)

        def rho_f(u):
            vv = float(np.clip(v_of_s(u), 0.0, math.pi))
            return a * math.sin(vv)

        def zp_f(u):
            vv = float(np.clip(v_of_s(u), 0.0, math.pi))
            return c * math.sin(vv) / math.hypot(a * math.cos(vv),
                                                 c * math.sin(vv))

        def k1_f(u):
            vv = float(np.clip(v_of_s(u), 0.0, math.pi))
            return a * c / math.hypot(a * math.cos(vv),
                                      c * math.sin(vv)) ** 3

        return cls(s, rho, z, alpha, k1, k2,
                   exact={"rho": rho_f, "zp": zp_f, "kappa1": k1_f})

    def as_metric(self, n=513):
        """The induced metric as a WarpedMetric (uniform parameter)."""
        L = self.length
        x = np.linspace(0.0, math.pi, n)
        su = L * x / math.pi
        if self.exact is not None:
            h = np.array([self.exact["rho"](u) for u in su])
        else:
            h = CubicSpline(self.s, self.rho)(su)
        h[0] = h[-1] = 0.0
        return WarpedMetric(x, np.full(n, L / math.pi), h, d=2)


def embed(gamma):
    """
    Isometrically embed a nonnegatively curved axisymmetric metric on
    S^2 as a convex surface of revolution.

    The radius is the warping profile itself, rho = h, and the height
    solves dz/ds = sqrt(1 - (dh/ds)^2); nonnegative Gauss curvature
    K = -h''/h makes h concave so the square root is well defined.

    Args:
        gamma: WarpedMetric with d = 2 and K >= -1e-8 everywhere

    Returns:
        RevolutionProfile whose induced metric equals gamma.

    Raises:
        ValueError: negative curvature beyond tolerance (with the
            offending node), or |dh/ds| > 1 (embedding obstruction).
    """
    if not isinstance(gamma, WarpedMetric) or gamma.d != 2:
        raise ValueError("embedding requires a WarpedMetric on S^2")
    h = gamma.h
    hl = gamma.hl.copy()
    s = gamma.ell
    over = np.max(np.abs(hl)) - 1.0
    if over > 1e-6:
        j = int(np.argmax(np.abs(hl)))
        raise ValueError(f"embedding obstruction: |dh/ds| = "
                         f"{abs(hl[j]):.10g} > 1 at s = {s[j]:.6g}")
    hl = np.clip(hl, -1.0, 1.0)
    alpha = np.arccos(hl)
    zp = np.sin(alpha)

    # Gauss curvature check with a slope-limited fallback at C^{1,1}
    # junctions, where wide centered stencils overshoot
    K = np.empty_like(h)
    K[1:-1] = -gamma.hll[1:-1] / h[1:-1]
    ds = np.diff(s)
    k1 = np.empty_like(h)
    k1[1:-1] = np.where(zp[1:-1] > 1e-8,
                        -gamma.hll[1:-1] / zp[1:-1], 0.0)
    # secant slopes of a concave profile are nonincreasing, so the
    # midpoint tangent angles are monotone and this quotient is
    # sign-safe across C^{1,1} junctions
    a_half = np.arccos(np.clip(np.diff(h) / ds, -1.0, 1.0))
    limited = np.diff(a_half) / (0.5 * (s[2:] - s[:-2]))
    bad = (K[1:-1] < -1e-8) | (zp[1:-1] <= 1e-8)
    k1[1:-1][bad] = limited[bad]
    K[1:-1][bad] = k1[1:-1][bad] * zp[1:-1][bad] / \
        np.where(h[1:-1][bad] > 0, h[1:-1][bad], 1.0)
    if np.min(K[1:-1]) < -1e-8:
        j = 1 + int(np.argmin(K[1:-1]))
        raise ValueError(f"metric has negative curvature K = "
                         f"{K[j]:.3e} at node {j} (s = {s[j]:.6g}); "
                         f"convex embedding rejected")
    # poles: umbilic, extrapolate evenly from the interior
    from ._fd import even_extension_value
    k1[0] = even_extension_value(s[1:4], k1[1:4])
    k1[-1] = even_extension_value(s[-1] - s[-4:-1][::-1], k1[-4:-1][::-1])
    k2 = np.empty_like(h)
    k2[1:-1] = zp[1:-1] / h[1:-1]
    k2[0], k2[-1] = k1[0], k1[-1]
    k1 = np.maximum(k1, np.where(np.abs(k1) < 1e-8, 0.0, k1))

    z = CubicSpline(s, zp).antiderivative()(s)
    rho = h.copy()
    rho[0] = rho[-1] = 0.0
    return RevolutionProfile(s, rho, z, alpha, k1, k2)


# ============================================================
# Integral functionals
# ============================================================

def total_mean_curvature(profile):
    """
    Total mean curvature 2 pi * integral of (kappa1 rho + dz/ds) ds
    (the kappa2 rho factor collapses to dz/ds, which is regular at the
    poles).  Equals the fill-in invariant Lambda_+ of the induced metric.
    """
    if profile.exact is not None:
        r, zp, k1 = (profile.exact["rho"], profile.exact["zp"],
                     profile.exact["kappa1"])
        return 2.0 * math.pi * profile._integrate_exact(
            lambda u: k1(u) * r(u) + zp(u))
    vals = profile.kappa1 * profile.rho + np.sin(profile.alpha)
    return 2.0 * math.pi * profile._integrate_samples(vals)


def gauss_bonnet_total(profile):
    """Total Gauss curvature 2 pi * integral of kappa1 dz/ds ds (= 4 pi)."""
    if profile.exact is not None:
        zp, k1 = profile.exact["zp"], profile.exact["kappa1"]
        return 2.0 * math.pi * profile._integrate_exact(
            lambda u: k1(u) * zp(u))
    vals = profile.kappa1 * np.sin(profile.alpha)
    return 2.0 * math.pi * profile._integrate_samples(vals)


def steiner_area(profile, offset):
    """
    Area of the outward-parallel surface at distance `offset`.

    Each profile point moves along the outward normal; for a convex
    profile the offset meridian has radius rho + offset dz/ds and speed
    1 + offset kappa1, so

        |Sigma^t| = 2 pi * integral of (rho + t dz/ds)(1 + t kappa1) ds,

    which is quadratic in t with coefficients (area, total mean
    curvature, total Gauss curvature = 4 pi).

    Args:
        profile: convex RevolutionProfile
        offset: nonnegative distance

    Returns:
        float area of the offset surface.
    """
    if offset < 0:
        raise ValueError("offset must be nonnegative")
    t = float(offset)
    if profile.exact is not None:
        r, zp, k1 = (profile.exact["rho"], profile.exact["zp"],
                     profile.exact["kappa1"])
        return 2.0 * math.pi * profile._integrate_exact(
            lambda u: (r(u) + t * zp(u)) * (1.0 + t * k1(u)))
    vals = (profile.rho + t * np.sin(profile.alpha)) \
        * (1.0 + t * profile.kappa1)
    return 2.0 * math.pi * profile._integrate_samples(vals)


def steiner_fit(profile, h=0.1):
    """
    Quadratic fit of the offset areas over t in {0, h, 2h, 3h}.

    Returns:
        (c0, c1, c2): fitted (area, total mean curvature, total Gauss
        curvature) coefficients.
    """
    ts = np.array([0.0, h, 2 * h, 3 * h])
    areas = np.array([steiner_area(profile, t) for t in ts])
    V = np.vander(ts, 3, increasing=True)
    coef, *_ = np.linalg.lstsq(V, areas, rcond=None)
    return float(coef[0]), float(coef[1]), float(coef[2])


# ============================================================
# Enclosure
# ============================================================

@dataclass
class EnclosureReport:
    """Nesting check plus the Steiner monotonicity consequences."""
    nested: bool
    area_inner: float
    area_outer: float
    tmc_inner: float
    tmc_outer: float
    area_monotone: bool
    tmc_monotone: bool
    violation_height: float = math.nan


def enclosure_check(inner, outer, tol=1e-9):
    """
    Verify that `inner` is enclosed by `outer` (coaxial, after aligning
    the height midpoints) and report the induced monotonicity of area
    and total mean curvature.

    Args:
        inner, outer: convex RevolutionProfiles
        tol: slack for the radial comparison

    Returns:
        EnclosureReport; `nested` False carries the violating height.
    """
    zi = inner.z - 0.5 * (inner.z.min() + inner.z.max())
    zo = outer.z - 0.5 * (outer.z.min() + outer.z.max())
    # convex profiles have monotone z, so radius-of-height is well defined
    rho_out = CubicSpline(zo, outer.rho)
    nested = True
    viol = math.nan
    for zz, rr in zip(zi, inner.rho):
        if zz < zo[0] - tol or zz > zo[-1] + tol:
            nested, viol = False, float(zz)
            break
        if rr > float(rho_out(np.clip(zz, zo[0], zo[-1]))) + tol:
            nested, viol = False, float(zz)
            break
    ai, ao = inner.area(), outer.area()
    ti, to = total_mean_curvature(inner), total_mean_curvature(outer)
    return EnclosureReport(nested=nested, area_inner=ai, area_outer=ao,
                           tmc_inner=ti, tmc_outer=to,
                           area_monotone=bool(ai <= ao + 1e-9),
                           tmc_monotone=bool(ti <= to + 1e-9),
                           violation_height=viol)


# ============================================================
# Diameter by fast sweeping
# ============================================================

def _sweep_distance(su, hu, src_idx, n_phi, n_iter=8):
    """
    Geodesic distance field from (s[src_idx], phi=0) on the half strip
    [0, L] x [0, pi] with metric ds^2 + h(s)^2 dphi^2, by Gauss-Seidel
    fast sweeping with the axis-aligned eikonal update.

    The phi = 0 and phi = pi edges are symmetry (Neumann) boundaries;
    the s edges are the poles, where all phi values are identified.
    """
    ns = len(su)
    dphi = math.pi / (n_phi - 1)
    dsv = su[1] - su[0]
    hphi = np.maximum(hu * dphi, 1e-300)
    big = 1e30
    d = np.full((ns, n_phi), big)
    d[src_idx, 0] = 0.0

    def update_row(i, dcur):
        # neighbor minima in the s-direction
        up = d[i - 1] if i > 0 else np.full(n_phi, big)
        dn = d[i + 1] if i < ns - 1 else np.full(n_phi, big)
        a = np.minimum(up, dn)
        # poles identify all phi values
        if i == 0 or i == ns - 1:
            m = dcur.min()
            dcur = np.minimum(dcur, m)
        # neighbor minima in the phi-direction with symmetry at edges
        left = np.empty(n_phi)
        right = np.empty(n_phi)
        left[1:] = dcur[:-1]
        left[0] = dcur[1]
        right[:-1] = dcur[1:]
        right[-1] = dcur[-2]
        b = np.minimum(left, right)
        hb = hphi[i]
        # axis-aligned anisotropic eikonal update
        cand1 = np.minimum(a + dsv, b + hb)
        det = dsv ** 2 + hb ** 2 - (a - b) ** 2
        both = (np.abs(a - b) < np.minimum(dsv, hb) * 10) & \
            (a < big) & (b < big) & (det > 0)
        num = np.where(both,
                       (np.minimum(a, big) * hb ** 2
                        + np.minimum(b, big) * dsv ** 2
                        + dsv * hb * np.sqrt(np.maximum(det, 0.0))),
                       big)
        cand2 = num / (dsv ** 2 + hb ** 2)
        good = both & (cand2 >= np.maximum(a, b))
        return np.minimum(dcur, np.where(good, np.minimum(cand1, cand2),
                                         cand1))

    for _ in range(n_iter):
        for order in (range(ns), range(ns - 1, -1, -1)):
            for i in order:
                d[i] = update_row(i, d[i])
                # two extra passes let information travel within the row
                d[i] = update_row(i, d[i])
    return d


def diameter(gamma, n_grid=512, n_sources=17):
    """
    Intrinsic diameter of (S^2, gamma) by fast sweeping on the half
    strip (s, delta phi) in [0, L] x [0, pi].

    Distances are computed from a set of source latitudes (plus the
    pole, which certifies the meridian length as a lower bound) and the
    maximum over all targets is returned.

    Args:
        gamma: WarpedMetric with d = 2
        n_grid: grid resolution in s (phi uses n_grid // 2 + 1)
        n_sources: number of source latitudes

    Returns:
        float diameter estimate (first-order accurate).
    """
    if not isinstance(gamma, WarpedMetric) or gamma.d != 2:
        raise ValueError("diameter requires a WarpedMetric on S^2")
    L = gamma.length
    su = np.linspace(0.0, L, n_grid)
    h_of_s = CubicSpline(gamma.ell, gamma.h)
    hu = np.maximum(h_of_s(su), 0.0)
    hu[0] = hu[-1] = 0.0
    n_phi = n_grid // 2 + 1
    best = L        # meridian length: certified lower bound (pole source)
    idxs = sorted({0, *np.linspace(0, n_grid - 1, n_sources).astype(int)})
    for idx in idxs:
        d = _sweep_distance(su, hu, int(idx), n_phi)
        m = float(np.max(d[d < 1e29]))
        best = max(best, m)
    return best


# ============================================================
# Proposition-style checks and dilation
# ============================================================

@dataclass
class Prop51Report:
    """The two-sided diameter bound on the total mean curvature."""
    two_diam: float
    lambda_plus: float
    twelve_pi_diam: float
    ok: bool


def prop51_check(gamma, n_grid=256):
    """
    Check the strict ordering 2 diam < Lambda_+ < 12 pi diam for a
    nonnegatively curved axisymmetric metric on S^2.

    Args:
        gamma: WarpedMetric (K >= 0) on S^2
        n_grid: diameter grid resolution

    Returns:
        Prop51Report
    """
    prof = embed(gamma)
    lam_plus = total_mean_curvature(prof)
    diam = diameter(gamma, n_grid=n_grid)
    return Prop51Report(
        two_diam=2.0 * diam, lambda_plus=lam_plus,
        twelve_pi_diam=12.0 * math.pi * diam,
        ok=bool(2.0 * diam < lam_plus < 12.0 * math.pi * diam))


@dataclass
class DilationResult:
    """Upper bound for the dilation between two axisymmetric metrics."""
    value: float
    sigma_coef: np.ndarray      # optimizing reparametrization coefficients

    def __float__(self):
        return self.value


def _dilation_objective(coef, xa, fa2, ha2, gb, beta=200.0):
    k = np.arange(1, len(coef) + 1)
    sig = xa + np.sin(np.outer(xa, k)) @ coef
    dsig = 1.0 + np.cos(np.outer(xa, k)) @ (k * coef)
    if np.any(dsig <= 1e-6) or np.any(sig[1:-1] <= 0) \
            or np.any(sig[1:-1] >= math.pi):
        return 1e6
    fb2, hb2 = gb(sig)
    r1 = dsig ** 2 * fb2 / fa2
    ratios = [r1, 1.0 / r1]
    good = ha2 > 1e-12
    r2 = hb2[good] / ha2[good]
    ratios += [r2, 1.0 / r2]
    allr = np.concatenate(ratios)
    m = np.max(allr)
    # smoothed max for optimizer friendliness
    return m + np.log(np.mean(np.exp(beta * (allr - m)))) / beta


def dilation(gamma_a, gamma_b, n_modes=4):
    """
    Upper bound for the dilation between two axisymmetric metrics on
    S^2: the infimum over monotone axisymmetric reparametrizations of
    the largest two-sided quadratic-form ratio, here minimized over a
    truncated sine-series family of reparametrizations.

    Args:
        gamma_a, gamma_b: WarpedMetrics on a shared parameter interval
        n_modes: sine modes in the reparametrization family

    Returns:
        DilationResult (value >= 1; equals 1 iff the metrics agree up to
        the family's reparametrizations).
    """
    from scipy.optimize import minimize
    xa = gamma_a.x
    fa2 = gamma_a.f ** 2
    ha2 = gamma_a.h ** 2
    fb = CubicSpline(gamma_b.x, gamma_b.f)
    hb = CubicSpline(gamma_b.x, gamma_b.h)
    gb = lambda sig: (fb(sig) ** 2, np.maximum(hb(sig), 0.0) ** 2)
    x0 = np.zeros(n_modes)
    res = minimize(_dilation_objective, x0,
                   args=(xa, fa2, ha2, gb), method="Nelder-Mead",
                   options={"maxiter": 2000, "xatol": 1e-10,
                            "fatol": 1e-12})
    best = min(_dilation_objective(x0, xa, fa2, ha2, gb, beta=1e8),
               _dilation_objective(res.x, xa, fa2, ha2, gb, beta=1e8))
    coef = res.x if best < _dilation_objective(
        x0, xa, fa2, ha2, gb, beta=1e8) else x0
    return DilationResult(value=float(max(best, 1.0)), sigma_coef=coef)


# ============================================================
# Metric presets
# ============================================================

def capped_cylinder_metric(l, eps1, eps2, n=513):
    """The induced (C^{1,1}) metric of the capped cylinder."""
    return RevolutionProfile.capped_cylinder(l, eps1, eps2).as_metric(n)


def spheroid_metric(a, c, n=513):
    """The induced metric of the (a, a, c) spheroid."""
    x = np.linspace(0.0, math.pi, n)
    f = np.sqrt((a * np.cos(x)) ** 2 + (c * np.sin(x)) ** 2)
    h = a * np.sin(x)
    h[0] = h[-1] = 0.0
    return WarpedMetric(x, f, h, d=2)
