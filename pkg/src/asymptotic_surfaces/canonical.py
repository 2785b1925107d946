"""Gauge functions and canonical asymptotic parameters.

For asymptotic parameters about a base point ``(u0, v0)`` the gauge
functions are ``phi(u)`` and ``psi(v)``::

    phi = sqrt(E) exp(-int_{v0}^{v} (f_v + a f_u sqrt(-G)/sqrt(E)) dv
                      -int_{u0}^{u} (-a f_v sqrt(E)/sqrt(-G) + f_u)(., v0) du - f(u0, v0))

and symmetrically for ``psi``. The parameters are canonical when both are 1.
The ``f_v`` and ``f_u`` parts of the exponent integrate exactly, so only the
``a``-weighted terms go through quadrature::

    phi = sqrt(E) exp(-f - int a f_u sqrt(-G)/sqrt(E) dv + int a f_v sqrt(E)/sqrt(-G) (., v0) du)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator, RectBivariateSpline

from .errors import CrossVariationTooLarge, InterpolationOutOfRange, NonPositiveGauge
from .grid import Grid, cumulative_from, gradient
from .invariants import CSV_COLUMNS, InvariantField


@dataclass(frozen=True)
class GaugePair:
    u: np.ndarray
    v: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    base: tuple
    phi_cross_variation: float
    psi_cross_variation: float

    @property
    def cross_variation(self):
        return max(self.phi_cross_variation, self.psi_cross_variation)

    @property
    def deviation(self):
        """``max(|phi - 1|, |psi - 1|)``."""
        return float(max(np.max(np.abs(self.phi - 1.0)), np.max(np.abs(self.psi - 1.0))))


def gauge_grids(fld: InvariantField, base):
    """``phi`` and ``psi`` evaluated at every node, before projection."""
    g = fld.grid
    i0, j0 = g.index_of(*base)
    a, f, sE, sG = fld.a, fld.f, fld.sqrtE, fld.sqrtMinusG
    f_u, f_v = gradient(f, g)
    p = a * f_u * sG / sE
    q = a * f_v * sE / sG
    P = cumulative_from(p, g.v, j0, axis=1)
    Q = cumulative_from(q, g.u, i0, axis=0)
    phi = sE * np.exp(-f - P + Q[:, j0][:, None])
    psi = sG * np.exp(-f + Q - P[i0, :][None, :])
    return phi, psi


def gauge_functions(fld: InvariantField, base, tol=1e-6) -> GaugePair:
    """Gauge functions about ``base``, which must be a grid node.

    ``phi`` must not depend on ``v`` nor ``psi`` on ``u``; a spread above
    ``tol`` raises :class:`CrossVariationTooLarge`.
    """
    base = tuple(float(b) for b in base)
    phi2, psi2 = gauge_grids(fld, base)
    phi_var = float(np.max(np.ptp(phi2, axis=1)))
    psi_var = float(np.max(np.ptp(psi2, axis=0)))
    if max(phi_var, psi_var) > tol:
        raise CrossVariationTooLarge(
            f"gauge functions vary across the other parameter by {max(phi_var, psi_var):.3g}",
            phi_cross_variation=phi_var,
            psi_cross_variation=psi_var,
        )
    phi = phi2.mean(axis=1)
    psi = psi2.mean(axis=0)
    if np.any(phi <= 0) or np.any(psi <= 0):
        raise NonPositiveGauge("gauge function is not positive")
    return GaugePair(fld.grid.u, fld.grid.v, phi, psi, base, phi_var, psi_var)


class CanonicityCheck(NamedTuple):
    canonical: bool
    deviation: float


def is_canonical(fld: InvariantField, base, tol=1e-6, cross_tol=1e-6) -> CanonicityCheck:
    gp = gauge_functions(fld, base, tol=cross_tol)
    dev = gp.deviation
    return CanonicityCheck(dev < tol, dev)


@dataclass(frozen=True)
class ReparamMap:
    """Monotone maps ``ubar(u)`` and ``vbar(v)`` with ``ubar(u0) = u0``, ``vbar(v0) = v0``."""

    u: np.ndarray
    ubar: np.ndarray
    v: np.ndarray
    vbar: np.ndarray
    base: tuple

    def to_bar(self, u, v):
        return (
            PchipInterpolator(self.u, self.ubar, extrapolate=False)(u),
            PchipInterpolator(self.v, self.vbar, extrapolate=False)(v),
        )

    def from_bar(self, ubar, vbar):
        return (
            PchipInterpolator(self.ubar, self.u, extrapolate=False)(ubar),
            PchipInterpolator(self.vbar, self.v, extrapolate=False)(vbar),
        )


def _bar_axis(lo, hi, origin, n):
    h = (hi - lo) / (n - 1)
    k_lo = int(np.ceil((lo - origin) / h - 1e-9))
    k_hi = int(np.floor((hi - origin) / h + 1e-9))
    ks = np.arange(k_lo, k_hi + 1)
    return np.clip(origin + ks * h, lo, hi)


def reparam_map(gp: GaugePair) -> ReparamMap:
    u0, v0 = gp.base
    i0 = int(np.argmin(np.abs(gp.u - u0)))
    j0 = int(np.argmin(np.abs(gp.v - v0)))
    ubar = cumulative_from(gp.phi, gp.u, i0) + u0
    vbar = cumulative_from(gp.psi, gp.v, j0) + v0
    return ReparamMap(gp.u, ubar, gp.v, vbar, gp.base)


def canonicalize(fld: InvariantField, base, cross_tol=1e-6):
    """Resample ``fld`` in canonical asymptotic parameters about ``base``.

    The new parameters are ``ubar = u0 + int phi du`` and ``vbar = v0 +
    int psi dv``. The output grid is uniform in ``(ubar, vbar)``, contains the
    base point as a node and may be slightly smaller than the image of the
    input domain. Orientation and the order of the parameters are preserved.
    """
    gp = gauge_functions(fld, base, tol=cross_tol)
    rmap = reparam_map(gp)
    u0, v0 = gp.base
    nu, nv = fld.grid.shape
    ub = _bar_axis(rmap.ubar[0], rmap.ubar[-1], u0, nu)
    vb = _bar_axis(rmap.vbar[0], rmap.vbar[-1], v0, nv)
    if ub.size < 2 or vb.size < 2:
        raise InterpolationOutOfRange("canonical domain is empty")
    u_of, v_of = rmap.from_bar(ub, vb)
    if np.any(~np.isfinite(u_of)) or np.any(~np.isfinite(v_of)):
        raise InterpolationOutOfRange("canonical grid leaves the original patch")
    u_of = np.clip(u_of, fld.grid.u[0], fld.grid.u[-1])
    v_of = np.clip(v_of, fld.grid.v[0], fld.grid.v[-1])

    g = fld.grid
    out = {}
    for name in CSV_COLUMNS:
        spline = RectBivariateSpline(g.u, g.v, getattr(fld, name), kx=3, ky=3, s=0)
        out[name] = spline(u_of, v_of)
    phi_new = CubicSpline(g.u, gp.phi)(u_of)
    psi_new = CubicSpline(g.v, gp.psi)(v_of)
    out["sqrtE"] = out["sqrtE"] / phi_new[:, None]
    out["sqrtMinusG"] = out["sqrtMinusG"] / psi_new[None, :]
    new = InvariantField(Grid(ub, vb), **out)
    return rmap, new
