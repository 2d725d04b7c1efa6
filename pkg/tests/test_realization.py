"""Angle solving for the concrete families and spherical embeddings."""

import math

import numpy as np
import pytest
from scipy import optimize

from spheretile.generators import earth_map, football, prism, snub_fusion
from spheretile.realization import (
    ClosureDefect,
    earth_map_gamma,
    earth_map_solution,
    embed_earth_map,
    embed_generic,
    embed_prism,
    prism_default_radius,
    prism_geometric_bounds,
    prism_params,
    prism_r_bounds,
    prism_solution,
    sporadic_solution,
    verify_geometric,
)
from spheretile.trig import closure_residual, mgon_edge_cos, rhombus_edge_cos


# -- earth-map family -----------------------------------------------------------------


def _block_length(gamma: float) -> float:
    """Independent restatement of the block-length curve c(gamma).

    The rhombus angle beta = pi - gamma/2 pins the polygon angle alpha via
    the shared edge length; a meridian strip then fits c rhombi where the
    leftover colatitude is (pi - alpha)/gamma + 1/2.
    """
    alpha = 2.0 * math.asin(
        2.0 * math.cos(math.pi / 5.0) / math.sqrt(3.0 - math.tan(gamma / 4.0) ** 2)
    )
    return (math.pi - alpha) / gamma + 0.5


@pytest.mark.parametrize("c", [2, 3, 4, 7, 16])
def test_earth_map_gamma_matches_brentq(c):
    oracle = optimize.brentq(
        lambda g: _block_length(g) - c, 1e-9, 2.0 * math.pi / 5.0, xtol=1e-14
    )
    assert earth_map_gamma(c) == pytest.approx(oracle, abs=1e-12)


def test_earth_map_gamma_frozen_values():
    assert earth_map_gamma(2) == pytest.approx(0.477996300836003, abs=1e-15)
    assert earth_map_gamma(3) == pytest.approx(0.2900412490314611, abs=1e-15)
    assert earth_map_gamma(4) == pytest.approx(0.20781787482320518, abs=1e-15)


def test_earth_map_gamma_inverts_block_length():
    for c in range(2, 65):
        assert abs(_block_length(earth_map_gamma(c)) - c) < 1e-10


def test_earth_map_gamma_strictly_decreasing():
    values = [earth_map_gamma(c) for c in range(2, 65)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_earth_map_gamma_rejects_short_blocks():
    with pytest.raises(ValueError):
        earth_map_gamma(1)


def test_earth_map_solution_identities():
    for c in (2, 3, 6):
        s = earth_map_solution(c)
        assert s.beta == pytest.approx(math.pi - s.gamma / 2.0, abs=1e-15)
        assert s.alpha > 3.0 * math.pi / 5.0
        assert abs(closure_residual(5, s.alpha, s.beta, s.gamma)) < 1e-12
        # The polygon corner meets one beta and a run of c gammas.
        assert s.alpha + s.beta + c * s.gamma == pytest.approx(
            2.0 * math.pi, abs=1e-9
        )


# -- prism family ---------------------------------------------------------------------


def test_prism_radius_bounds():
    lo, hi = prism_r_bounds(5)
    assert lo == pytest.approx(math.atan(1.0 / math.sin(math.pi / 5)))
    assert hi == pytest.approx(math.pi / 2)
    glo, ghi = prism_geometric_bounds(5)
    assert (glo, ghi) == (lo, hi)
    # Narrower for triangles: the rhombus flattens at tan(r) = sqrt(2).
    tlo, thi = prism_geometric_bounds(3)
    assert thi == pytest.approx(math.atan(math.sqrt(2.0)))
    assert tlo < prism_default_radius(3) < thi


def test_prism_params_domain():
    with pytest.raises(ValueError):
        prism_params(2, 1.3)
    with pytest.raises(ValueError):
        prism_params(5, 0.9)
    with pytest.raises(ValueError):
        prism_params(5, math.pi / 2)


def test_prism_solution_identities():
    for m, r in ((3, 0.9), (5, 1.2), (7, 1.4), (12, 1.5)):
        s = prism_solution(m, r)
        assert s.alpha + s.beta + s.gamma == pytest.approx(2 * math.pi, abs=1e-12)
        assert rhombus_edge_cos(s.beta, s.gamma) == pytest.approx(
            mgon_edge_cos(m, s.alpha), abs=1e-12
        )
        # Two polygon vertices at colatitude r, one step of longitude apart.
        chord = math.cos(r) ** 2 + math.sin(r) ** 2 * math.cos(2 * math.pi / m)
        assert s.cos_x == pytest.approx(chord, abs=1e-12)


def test_prism_solution_flattening():
    with pytest.raises(ValueError, match="quarter"):
        prism_solution(3, 1.05)


def test_prism_solution_frozen_pentagon():
    s = prism_solution(5, 1.2)
    assert s.alpha / math.pi == pytest.approx(0.836117, abs=1e-6)
    assert s.beta / math.pi == pytest.approx(0.879612, abs=1e-6)
    assert s.gamma / math.pi == pytest.approx(0.284271, abs=1e-6)
    assert s.x / math.pi == pytest.approx(0.369099, abs=1e-6)


# -- sporadic solutions ---------------------------------------------------------------


def test_sporadic_football_frozen():
    s = sporadic_solution("football")
    assert s.alpha == pytest.approx(1.944051137388356, abs=1e-15)
    assert s.beta == 2.0 * math.pi / 3.0
    assert s.gamma == pytest.approx(1.122369533699016, abs=1e-15)
    assert s.cos_x == pytest.approx(0.9184682595567826, abs=1e-15)


def test_sporadic_snub_fusion_frozen():
    s = sporadic_solution("snub-fusion")
    assert s.alpha == pytest.approx(1.9643068301178892, abs=1e-15)
    assert s.beta == pytest.approx(2.1594392385308474, abs=1e-15)
    assert s.beta - 2.0 * s.gamma == 0.0
    assert s.cos_x == pytest.approx(0.8924183971388202, abs=1e-15)


def test_sporadic_accepts_flexible_keys():
    assert sporadic_solution("SNUB_FUSION") == sporadic_solution("snub-fusion")
    with pytest.raises(ValueError, match="unknown sporadic kind"):
        sporadic_solution("pyramid")


# -- embeddings -----------------------------------------------------------------------


def _assert_clean_geometry(t, e, s, tol=1e-6):
    report = verify_geometric(t, e, s, tol=tol)
    assert report.ok, report.failures
    assert report.area_defect < 1e-6
    assert not report.overlapping_faces


@pytest.mark.parametrize("m,r", [(3, 0.9), (5, 1.2), (5, 1.35), (8, 1.45)])
def test_embed_prism_verifies(m, r):
    t, e = embed_prism(m, r)
    _assert_clean_geometry(t, e, prism_solution(m, r))
    assert e.worst_defect == 0.0


def test_embed_generic_matches_explicit_prism():
    t = prism(5)
    s = prism_solution(5, 1.2)
    e = embed_generic(t, s)
    assert e.worst_defect < 1e-12
    _assert_clean_geometry(t, e, s)


@pytest.mark.parametrize("c", [2, 3, 5])
def test_embed_earth_map_verifies(c):
    t, e = embed_earth_map(c)
    _assert_clean_geometry(t, e, earth_map_solution(c))


def test_embed_sporadics_verify():
    tf = football()
    _assert_clean_geometry(tf, embed_generic(tf, sporadic_solution("football")),
                           sporadic_solution("football"))
    for variant in (1, 2, 3):
        ts = snub_fusion(variant)
        s = sporadic_solution("snub-fusion")
        _assert_clean_geometry(ts, embed_generic(ts, s), s)


def test_embed_generic_rejects_wrong_angles():
    t = earth_map(3)
    wrong = earth_map_solution(2)
    with pytest.raises(ClosureDefect):
        embed_generic(t, wrong)


def test_embedding_deterministic():
    t = football()
    s = sporadic_solution("football")
    e1 = embed_generic(t, s)
    e2 = embed_generic(t, s)
    for v in range(t.vertex_count):
        assert np.array_equal(e1.positions[v], e2.positions[v])


def test_verify_geometric_flags_jitter():
    t, e = embed_prism(5, 1.2)
    s = prism_solution(5, 1.2)
    rng = np.random.default_rng(0)
    bad_positions = {
        v: p + rng.normal(scale=1e-3, size=3) for v, p in e.positions.items()
    }
    bad = type(e)(positions=bad_positions, seed_face=e.seed_face)
    report = verify_geometric(t, bad, s, tol=1e-6)
    assert not report.ok
    assert any("norm" in msg for msg in report.failures)
