"""Convex surfaces of revolution: integrals, embedding, diameter."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsgeom.convex_revolution import (RevolutionProfile,
                                      capped_cylinder_metric, diameter,
                                      dilation, embed, enclosure_check,
                                      gauss_bonnet_total, prop51_check,
                                      spheroid_metric, steiner_area,
                                      steiner_fit, total_mean_curvature)
from qsgeom.sphere_geometry import WarpedMetric


# ------------------------------------------------------------
# exact integrals on analytic profiles
# ------------------------------------------------------------

def test_sphere_integrals():
    p = RevolutionProfile.sphere(1.0)
    assert p.area() == pytest.approx(4.0 * math.pi, rel=1e-13)
    assert total_mean_curvature(p) == pytest.approx(8.0 * math.pi,
                                                    rel=1e-13)
    assert gauss_bonnet_total(p) == pytest.approx(4.0 * math.pi, rel=1e-13)
    p2 = RevolutionProfile.sphere(2.0)
    assert p2.area() == pytest.approx(16.0 * math.pi, rel=1e-13)
    assert total_mean_curvature(p2) == pytest.approx(16.0 * math.pi,
                                                     rel=1e-13)


def test_capped_cylinder_integrals():
    l, e1, e2 = 1.5, 0.25, 0.3
    p = RevolutionProfile.capped_cylinder(l, e1, e2)
    Lc = l - 2.0 * e1
    assert p.area() == pytest.approx(
        2.0 * math.pi * e2 * Lc + 4.0 * math.pi * e2 ** 2, rel=1e-12)
    assert total_mean_curvature(p) == pytest.approx(
        2.0 * math.pi * Lc + 8.0 * math.pi * e2, rel=1e-12)
    assert gauss_bonnet_total(p) == pytest.approx(4.0 * math.pi, rel=1e-12)
    assert p.length == pytest.approx(Lc + math.pi * e2, rel=1e-14)


def test_spheroid_gauss_bonnet():
    p = RevolutionProfile.spheroid(1.0, 1.5)
    assert gauss_bonnet_total(p) == pytest.approx(4.0 * math.pi, rel=1e-10)
    # degenerate spheroid equals the round sphere
    q = RevolutionProfile.spheroid(1.0, 1.0)
    assert total_mean_curvature(q) == pytest.approx(8.0 * math.pi,
                                                    rel=1e-9)


def test_scale():
    p = RevolutionProfile.sphere(1.0).scale(2.0)
    assert p.area() == pytest.approx(16.0 * math.pi, rel=1e-12)
    assert total_mean_curvature(p) == pytest.approx(16.0 * math.pi,
                                                    rel=1e-12)
    with pytest.raises(ValueError):
        RevolutionProfile.sphere(1.0).scale(-1.0)


def test_profile_validation():
    p = RevolutionProfile.sphere(1.0)
    with pytest.raises(ValueError):
        RevolutionProfile(p.s, p.rho + 0.1, p.z, p.alpha, p.kappa1,
                          p.kappa2)          # radius not vanishing
    with pytest.raises(ValueError):
        RevolutionProfile(p.s, p.rho, p.z, p.alpha, p.kappa1 - 2.0,
                          p.kappa2)          # not convex
    with pytest.raises(ValueError):
        RevolutionProfile.capped_cylinder(0.4, 0.25, 0.3)


# ------------------------------------------------------------
# Steiner polynomial
# ------------------------------------------------------------

def test_steiner_fit_coefficients():
    p = RevolutionProfile.capped_cylinder(1.5, 0.25, 0.3)
    c0, c1, c2 = steiner_fit(p)
    assert c0 == pytest.approx(p.area(), rel=1e-10)
    assert c1 == pytest.approx(total_mean_curvature(p), rel=1e-10)
    assert c2 == pytest.approx(4.0 * math.pi, rel=1e-10)


@settings(max_examples=25, deadline=None)
@given(t=st.floats(0.0, 2.0))
def test_steiner_area_is_quadratic(t):
    p = RevolutionProfile.sphere(1.0)
    expect = p.area() + t * total_mean_curvature(p) + t * t * 4.0 * math.pi
    assert steiner_area(p, t) == pytest.approx(expect, rel=1e-10)


def test_steiner_area_rejects_negative_offset():
    with pytest.raises(ValueError):
        steiner_area(RevolutionProfile.sphere(1.0), -0.1)


# ------------------------------------------------------------
# embedding
# ------------------------------------------------------------

def test_embed_round_sphere():
    g = RevolutionProfile.sphere(1.0).as_metric()
    p = embed(g)
    assert total_mean_curvature(p) == pytest.approx(8.0 * math.pi,
                                                    rel=1e-8)
    assert np.max(np.abs(p.kappa1[1:-1] - 1.0)) < 1e-7


def test_embed_spheroid_round_trip():
    exact = RevolutionProfile.spheroid(1.0, 1.4)
    p = embed(exact.as_metric(n=1025))
    assert total_mean_curvature(p) == pytest.approx(
        total_mean_curvature(exact), rel=1e-6)


def test_embed_capped_cylinder_c11():
    # kappa1 jumps at the cap junctions; the secant fallback keeps the
    # embedding usable at reduced accuracy
    g = capped_cylinder_metric(1.5, 0.25, 0.3)
    p = embed(g)
    exact = RevolutionProfile.capped_cylinder(1.5, 0.25, 0.3)
    assert total_mean_curvature(p) == pytest.approx(
        total_mean_curvature(exact), rel=1e-2)


def test_embed_obstruction():
    # meridian slope of the radius exceeding 1 admits no embedding
    x = np.linspace(0.0, math.pi, 513)
    f = 1.0 - 0.9 * np.sin(x) ** 2
    g = WarpedMetric(x, f, np.sin(x), d=2)
    with pytest.raises(ValueError):
        embed(g)


def test_embed_rejects_negative_curvature():
    x = np.linspace(0.0, math.pi, 513)
    g = WarpedMetric(x, np.ones(513),
                     np.sin(x) * (1 - 0.5 * np.sin(x) ** 2), d=2)
    with pytest.raises(ValueError):
        embed(g)


# ------------------------------------------------------------
# enclosure
# ------------------------------------------------------------

def test_enclosure_nested_spheres():
    rep = enclosure_check(RevolutionProfile.sphere(1.0),
                          RevolutionProfile.sphere(2.0))
    assert rep.nested
    assert rep.area_monotone and rep.tmc_monotone


def test_enclosure_cylinder_in_sphere():
    inner = RevolutionProfile.capped_cylinder(1.5, 0.25, 0.3)
    outer = RevolutionProfile.sphere(2.0)
    rep = enclosure_check(inner, outer)
    assert rep.nested
    assert rep.tmc_inner <= rep.tmc_outer


def test_enclosure_violation_reported():
    rep = enclosure_check(RevolutionProfile.sphere(2.0),
                          RevolutionProfile.sphere(1.0))
    assert not rep.nested
    assert math.isfinite(rep.violation_height)


# ------------------------------------------------------------
# diameter
# ------------------------------------------------------------

def test_diameter_round_sphere():
    g = RevolutionProfile.sphere(1.0).as_metric()
    assert diameter(g, n_grid=256) == pytest.approx(math.pi, rel=1e-12)


def test_diameter_capped_cylinder():
    # the pole-to-pole meridian realizes the diameter
    prof = RevolutionProfile.capped_cylinder(1.5, 0.25, 0.3)
    d = diameter(prof.as_metric(), n_grid=256)
    assert d == pytest.approx(prof.length, rel=1e-10)


def test_diameter_validation():
    with pytest.raises(ValueError):
        diameter("not a metric")


# ------------------------------------------------------------
# two-sided diameter bound
# ------------------------------------------------------------

@pytest.mark.parametrize("gamma", [
    RevolutionProfile.sphere(1.0).as_metric(),
    capped_cylinder_metric(1.5, 0.25, 0.3),
])
def test_prop51(gamma):
    rep = prop51_check(gamma, n_grid=128)
    assert rep.ok
    assert rep.two_diam < rep.lambda_plus < rep.twelve_pi_diam


# ------------------------------------------------------------
# dilation
# ------------------------------------------------------------

def test_dilation_self_is_one():
    g = spheroid_metric(1.0, 1.5)
    assert float(dilation(g, g)) == 1.0


def test_dilation_of_scaling():
    lam = 1.3
    g = RevolutionProfile.sphere(1.0).as_metric()
    gs = RevolutionProfile.sphere(lam).as_metric()
    val = float(dilation(g, gs))
    assert val == pytest.approx(lam ** 2, rel=1e-6)


def test_dilation_spheroid_family_contracts():
    base = spheroid_metric(1.0, 1.0)
    vals = [float(dilation(spheroid_metric(1.0, 1.0 + 2.0 ** -k), base))
            for k in (1, 3, 5)]
    assert all(v >= 1.0 for v in vals)
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 1.05
