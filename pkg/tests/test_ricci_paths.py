"""Conformal Ricci flows, DeTurck comparison, and PSC path builders."""

import math

import numpy as np
import pytest

from qsgeom.ricci_paths import (ConformalMetric, FlowPath, deturck_field,
                                gap_decay_fit, monotone_scaled_path,
                                psc_connecting_path, ricci_deturck_flow,
                                ricci_flow)


# ------------------------------------------------------------
# conformal metrics
# ------------------------------------------------------------

def test_conformal_round_curvature():
    g = ConformalMetric.round(0.0)
    assert float(np.max(np.abs(g.gauss_curvature() - 1.0))) < 1e-11
    assert float(np.max(np.abs(g.scalar_curvature() - 2.0))) < 1e-11
    c = ConformalMetric.round(0.3)
    assert float(np.max(np.abs(c.gauss_curvature()
                               - math.exp(-0.6)))) < 1e-11
    assert c.is_psc


def test_conformal_cos_mode_and_distance():
    g = ConformalMetric.cos_mode(0.05)
    assert g.is_psc
    r = ConformalMetric.round(0.0)
    d = g.distance_c0(r)
    assert 0.0 < d < 0.2
    assert r.distance_c0(r) == 0.0


def test_conformal_to_warped_round_trip():
    g = ConformalMetric.round(0.2)
    w = g.to_warped()
    assert w.d == 2
    # area of e^{2c} gamma_std is e^{2c} 4 pi
    assert w.area() == pytest.approx(math.exp(0.4) * 4.0 * math.pi,
                                     rel=1e-8)


# ------------------------------------------------------------
# Ricci flow
# ------------------------------------------------------------

def test_ricci_flow_round_exact():
    # round solutions stay spatially constant: e^{2 phi(t)} = e^{2c} - 2t
    c = 0.1
    T = 0.05
    path = ricci_flow(ConformalMetric.round(c), T, dt=1e-3)
    fac = path.metrics[-1].factor
    expect = math.exp(2.0 * c) - 2.0 * T
    assert float(np.max(np.abs(fac - expect))) < 1e-10
    assert path.psc


def test_ricci_flow_oscillation_decreases():
    g = ConformalMetric.cos_mode(0.1)
    path = ricci_flow(g, 0.2, dt=1e-3)
    osc0 = float(np.ptp(path.metrics[0].phi.values))
    oscT = float(np.ptp(path.metrics[-1].phi.values))
    assert oscT < osc0


def test_ricci_flow_extinction_guard():
    # the round unit sphere vanishes at t = 1/2
    with pytest.raises(ValueError):
        ricci_flow(ConformalMetric.round(0.0), 0.6, dt=1e-3)
    with pytest.raises(ValueError):
        ricci_flow(ConformalMetric.round(0.0), -1.0)


# ------------------------------------------------------------
# DeTurck field and Ricci-DeTurck flow
# ------------------------------------------------------------

def test_deturck_field_vanishes():
    a = ConformalMetric.cos_mode(0.1)
    b = ConformalMetric.round(0.2)
    assert float(np.max(np.abs(deturck_field(a, a)))) == 0.0
    assert float(np.max(np.abs(deturck_field(a, b)))) < 1e-12


def test_deturck_field_grid_mismatch():
    a = ConformalMetric.round(0.0, N=129)
    b = ConformalMetric.round(0.0, N=257)
    with pytest.raises(ValueError):
        deturck_field(a, b)


def test_ricci_deturck_matches_ricci_flow():
    # with vanishing DeTurck field the two flows coincide stationwise
    g = ConformalMetric.cos_mode(0.05)
    bg = ricci_flow(ConformalMetric.round(0.0), 0.05, dt=1e-3)
    rf = ricci_flow(g, 0.05, dt=1e-3)
    rdt = ricci_deturck_flow(g, bg, 0.05, dt=1e-3)
    gap = max(float(np.max(np.abs(a.factor - b.factor)))
              for a, b in zip(rf.metrics, rdt.metrics))
    assert gap == 0.0
    assert rdt.diagnostics["bound_ok"]
    assert math.isfinite(rdt.diagnostics["background_gap"])


def test_ricci_deturck_curvature_bound_saturates():
    # the round flow saturates R >= kappa / (1 - t kappa) exactly
    path = ricci_deturck_flow(ConformalMetric.round(0.0),
                              ConformalMetric.round(0.0), 0.1, dt=1e-3)
    assert path.diagnostics["kappa"] == pytest.approx(2.0, abs=1e-10)
    assert abs(path.diagnostics["bound_margin"]) < 1e-8
    assert path.diagnostics["bound_ok"]


def test_ricci_deturck_rejects_distant_data():
    g = ConformalMetric.round(1.0)
    with pytest.raises(ValueError):
        ricci_deturck_flow(g, ConformalMetric.round(0.0), 0.01)


# ------------------------------------------------------------
# PSC connecting path
# ------------------------------------------------------------

def test_connecting_path_constant_case():
    g = ConformalMetric.round(0.1)
    path = psc_connecting_path(g, g)
    assert path.psc
    assert float(np.max(path.deriv_norms)) == 0.0
    assert float(np.max(np.abs(path.metrics[0].factor
                               - path.metrics[-1].factor))) == 0.0


def test_connecting_path_nearby_metrics():
    g = ConformalMetric.cos_mode(0.05)
    r = ConformalMetric.round(0.0)
    path = psc_connecting_path(g, r, T=0.02, dt=1e-3)
    assert path.psc
    assert float(np.min(path.min_R)) > 0.0
    # exact endpoints
    assert float(np.max(np.abs(path.metrics[0].factor - g.factor))) == 0.0
    assert float(np.max(np.abs(path.metrics[-1].factor
                               - r.factor))) == 0.0
    # derivative envelope consistent with C / t
    assert path.diagnostics["fit_exponent"] >= -1.1


def test_connecting_path_rejects_distant_endpoints():
    g = ConformalMetric.round(1.0)
    r = ConformalMetric.round(0.0)
    with pytest.raises(ValueError):
        psc_connecting_path(g, r)


def test_connecting_path_rejects_non_psc():
    # a metric with K < 0 somewhere is not an admissible endpoint
    g = ConformalMetric.cos_mode(1.5)
    r = ConformalMetric.round(0.0)
    if not g.is_psc:
        with pytest.raises(ValueError):
            psc_connecting_path(g, r, c0_threshold=1e9)


# ------------------------------------------------------------
# monotone scaled path
# ------------------------------------------------------------

def test_monotone_scaled_path_search():
    g = ConformalMetric.cos_mode(0.05)
    path = monotone_scaled_path(g, eps_tilde=0.05)
    assert path.psc
    assert path.diagnostics["min_eig"] >= -1e-10
    assert path.diagnostics["endpoint_factor"] == pytest.approx(1.05)
    # starts exactly at gamma
    assert float(np.max(np.abs(path.metrics[0].factor - g.factor))) == 0.0
    # ends at the inflated flowed metric: factor ratio 1 + eps_tilde
    s0 = path.diagnostics["s0"]
    assert path.t[-1] == pytest.approx(s0)


def test_monotone_scaled_path_s0_too_large():
    g = ConformalMetric.cos_mode(0.05)
    with pytest.raises(ValueError):
        monotone_scaled_path(g, eps_tilde=1e-6, s0=0.3)


def test_monotone_scaled_path_validation():
    g = ConformalMetric.round(0.0)
    with pytest.raises(ValueError):
        monotone_scaled_path(g, eps_tilde=-0.1)


# ------------------------------------------------------------
# gap decay
# ------------------------------------------------------------

def test_gap_decay_fit_exponents():
    grid = ConformalMetric.round(0.0, N=257).grid
    base = ConformalMetric.round(0.0, N=257)
    rough = ConformalMetric(
        base.phi.values + 0.01 * np.tanh(np.cos(grid.nodes) / 0.02), grid)
    out = gap_decay_fit(rough, base, np.geomspace(2e-3, 2e-2, 9))
    # the gap itself persists (exponent near 0) while its gradient
    # smooths out at roughly the t^{-1/2} rate
    assert abs(out["gap_exponent"]) < 0.15
    assert out["grad_exponent"] == pytest.approx(-0.5, abs=0.15)
    assert np.all(out["gap"] > 0.0)
    assert np.all(np.diff(out["grad_gap"]) < 0.0)


def test_gap_decay_fit_validation():
    a = ConformalMetric.round(0.0)
    b = ConformalMetric.round(0.1)
    with pytest.raises(ValueError):
        gap_decay_fit(a, b, np.array([0.0, 1e-2]))
    with pytest.raises(ValueError):
        gap_decay_fit(a, ConformalMetric.round(0.0, N=257),
                      np.array([1e-3, 1e-2]))


# ------------------------------------------------------------
# FlowPath invariants
# ------------------------------------------------------------

def test_flow_path_psc_consistency():
    g = ConformalMetric.round(0.0)
    with pytest.raises(ValueError):
        FlowPath(t=np.array([0.0, 1.0]), metrics=[g, g],
                 deriv_norms=np.zeros(2), min_R=np.array([1.0, -1.0]),
                 psc=True)
