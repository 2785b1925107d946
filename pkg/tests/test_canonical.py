import numpy as np
import pytest

from asymptotic_surfaces.canonical import (
    canonicalize,
    gauge_functions,
    gauge_grids,
    is_canonical,
    reparam_map,
)
from asymptotic_surfaces.errors import CrossVariationTooLarge, NonPositiveGauge
from asymptotic_surfaces.invariants import InvariantField
from asymptotic_surfaces.pde import GoursatProblem, constant_k_field, solve_cosh_gordon
from asymptotic_surfaces.surface import SurfaceDef

from conftest import SADDLE, enneper


def scaled_enneper(n=61):
    # u = 2*ubar, so ubar runs over [-0.15, 0.15]
    return enneper().substitute("2*u", "v", u_range=(-0.15, 0.15), v_range=(-0.3, 0.3), shape=(n, n), base=(0.0, 0.0))


@pytest.fixture(scope="module")
def scaled_field():
    return InvariantField.from_surface(scaled_enneper())


def test_enneper_is_canonical(enneper41):
    fld = InvariantField.from_surface(enneper41)
    gp = gauge_functions(fld, (0.0, 0.0))
    assert gp.deviation < 1e-8
    assert gp.cross_variation < 1e-12
    check = is_canonical(fld, (0.0, 0.0))
    assert check.canonical and check.deviation < 1e-8


def test_scaled_enneper_has_phi_two(scaled_field):
    fld = scaled_field
    uu, vv = fld.grid.mesh()
    np.testing.assert_allclose(fld.sqrtE, 1 - 4 * uu**2 + vv**2, rtol=1e-12)
    gp = gauge_functions(fld, (0.0, 0.0))
    np.testing.assert_allclose(gp.phi, 2.0, atol=1e-6)
    np.testing.assert_allclose(gp.psi, 1.0, atol=1e-6)
    check = is_canonical(fld, (0.0, 0.0))
    assert not check.canonical
    assert abs(check.deviation - 1.0) < 1e-6


def test_canonicalize_recovers_original_parameter(scaled_field):
    rmap, new = canonicalize(scaled_field, (0.0, 0.0))
    np.testing.assert_allclose(rmap.ubar, 2 * rmap.u, atol=1e-6)
    np.testing.assert_allclose(rmap.vbar, rmap.v, atol=1e-6)
    assert is_canonical(new, (0.0, 0.0), tol=1e-5).canonical
    # the resampled field agrees with the Enneper patch sampled directly
    ref = InvariantField.from_surface(enneper(3).with_domain(u_range=(new.grid.u[0], new.grid.u[-1]), v_range=(new.grid.v[0], new.grid.v[-1]), shape=new.grid.shape))
    np.testing.assert_allclose(new.grid.u, ref.grid.u, atol=1e-12)
    np.testing.assert_allclose(new.alpha, ref.alpha, rtol=1e-5)
    np.testing.assert_allclose(new.sqrtE, ref.sqrtE, rtol=1e-5)


def test_reparam_map_properties(scaled_field):
    gp = gauge_functions(scaled_field, (0.0, 0.0))
    rmap = reparam_map(gp)
    i0 = int(np.argmin(abs(rmap.u)))
    assert rmap.ubar[i0] == 0.0 and rmap.vbar[int(np.argmin(abs(rmap.v)))] == 0.0
    assert np.all(np.diff(rmap.ubar) > 0) and np.all(np.diff(rmap.vbar) > 0)
    slope = np.gradient(rmap.ubar, rmap.u)
    np.testing.assert_allclose(slope, gp.phi, rtol=1e-6)
    ub, vb = rmap.to_bar(np.array([0.05]), np.array([-0.1]))
    uo, vo = rmap.from_bar(ub, vb)
    np.testing.assert_allclose([uo[0], vo[0]], [0.05, -0.1], atol=1e-10)


def test_already_canonical_is_identity(enneper41):
    fld = InvariantField.from_surface(enneper41)
    rmap, new = canonicalize(fld, (0.0, 0.0))
    np.testing.assert_allclose(rmap.ubar, rmap.u, atol=1e-10)
    np.testing.assert_allclose(new.grid.u, fld.grid.u, atol=1e-10)
    for name in ("a", "alpha", "gamma1", "gamma2", "sqrtE", "sqrtMinusG"):
        np.testing.assert_allclose(getattr(new, name), getattr(fld, name), atol=1e-10)


def test_two_bases_differ_by_shifts(scaled_field):
    r0, _ = canonicalize(scaled_field, (0.0, 0.0))
    r1, _ = canonicalize(scaled_field, (0.1, 0.0))
    du = r1.ubar - r0.ubar
    dv = r1.vbar - r0.vbar
    assert np.ptp(du) < 1e-5 and np.ptp(dv) < 1e-5


def test_canonicalize_is_idempotent_up_to_shift(scaled_field):
    _, once = canonicalize(scaled_field, (0.0, 0.0))
    rmap, twice = canonicalize(once, (0.0, 0.0))
    np.testing.assert_allclose(rmap.ubar, rmap.u, atol=1e-5)
    np.testing.assert_allclose(twice.alpha, once.alpha, rtol=1e-8)


def test_saddle_canonicalization():
    s = SurfaceDef.from_strings(*SADDLE, u_range=(-0.4, 0.4), v_range=(-0.4, 0.4), shape=(161, 161))
    fld = InvariantField.from_surface(s)
    gp = gauge_functions(fld, (0.0, 0.0))
    assert gp.cross_variation < 1e-6
    assert gp.deviation > 1e-3
    _, new = canonicalize(fld, (0.0, 0.0))
    assert is_canonical(new, (0.0, 0.0), tol=1e-5).canonical


def test_tampered_metric_is_rejected(enneper41):
    fld = InvariantField.from_surface(enneper41)
    uu, vv = fld.grid.mesh()
    bad = fld.replace(sqrtE=fld.sqrtE * (1 + 0.01 * vv))
    with pytest.raises(CrossVariationTooLarge) as info:
        gauge_functions(bad, (0.0, 0.0))
    assert info.value.detail["phi_cross_variation"] > 1e-3


def test_negative_metric_is_rejected(enneper41):
    fld = InvariantField.from_surface(enneper41)
    with pytest.raises(NonPositiveGauge):
        gauge_functions(fld.replace(sqrtE=-fld.sqrtE), (0.0, 0.0))


def test_cross_variation_converges():
    def var(n):
        s = SurfaceDef.from_strings(*SADDLE, u_range=(-0.4, 0.4), v_range=(-0.4, 0.4), shape=(n, n))
        phi, psi = gauge_grids(InvariantField.from_surface(s), (0.0, 0.0))
        return max(np.max(np.ptp(phi, axis=1)), np.max(np.ptp(psi, axis=0)))

    assert 3.0 < var(41) / var(81) < 5.0


def test_constant_k_field_is_canonical():
    p = GoursatProblem(0.4, 0.4, (41, 41), bu="0.3*u", bv="-0.2*v")
    sol = solve_cosh_gordon(p)
    fld = constant_k_field(sol.omega, sol.grid)
    check = is_canonical(fld, (0.0, 0.0))
    assert check.canonical and check.deviation < 1e-12


def test_minimal_canonical_metric_matches_alpha(enneper41):
    fld = InvariantField.from_surface(enneper41)
    np.testing.assert_allclose(fld.sqrtE**2 * fld.alpha, 1.0, atol=1e-6)
    np.testing.assert_allclose(fld.sqrtMinusG**2 * fld.alpha, 1.0, atol=1e-6)
