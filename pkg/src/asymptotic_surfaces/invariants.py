"""Basic asymptotic invariants and the compatibility equations.

For a time-like surface in asymptotic parameters (``L = N = 0``) with
``E > 0`` and ``G < 0`` the asymptotic frame is ``x = z_u/sqrt(E)``,
``y = z_v/sqrt(-G)``, ``n``. Its invariants are

* ``a = <x, y> = F/(sqrt(E) sqrt(-G))``
* ``alpha = M/(sqrt(E) sqrt(-G))``
* ``gamma1``, ``gamma2``, the connection coefficients of the asymptotic lines

together with ``f = (log sqrt(1+a^2) - log|alpha|)/2 = -log K^(1/4)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, fields, replace

import numpy as np

from .errors import (
    DegenerateDenominator,
    MethodNotApplicable,
    NotAsymptotic,
    WrongSignature,
)
from .grid import Grid, central_u, central_uv, central_v
from .surface import SurfaceDef, VANISH_TOL, derivatives, forms_from_derivatives
from .minkowski import mdot

log = logging.getLogger(__name__)


def f_from(a, alpha):
    """``f = (log sqrt(1+a^2) - log|alpha|)/2``."""
    return 0.5 * (0.5 * np.log1p(np.square(a)) - np.log(np.abs(alpha)))


@dataclass(frozen=True)
class InvariantPoint:
    a: float
    alpha: float
    f: float
    gamma1: float
    gamma2: float
    sqrtE: float
    sqrtMinusG: float

    @property
    def gamma1_bar(self):
        """Geodesic curvature of the u-lines."""
        return self.gamma1 * np.sqrt(1.0 + self.a**2)

    @property
    def gamma2_bar(self):
        return self.gamma2 * np.sqrt(1.0 + self.a**2)

    @property
    def alpha_bar(self):
        """Torsion of the asymptotic lines."""
        return self.alpha / np.sqrt(1.0 + self.a**2)

    @property
    def K(self):
        return self.alpha**2 / (1.0 + self.a**2)

    @property
    def H(self):
        return self.a * self.alpha / (1.0 + self.a**2)


def _exact_invariants(s: SurfaceDef, u, v, vanish_tol=VANISH_TOL):
    """Invariants and the jet-exact derivatives of ``a`` and the metric."""
    d = derivatives(s, u, v)
    fc = forms_from_derivatives(d)
    E, F, G, L, M, N = fc.E, fc.F, fc.G, fc.L, fc.M, fc.N
    scale = np.max(np.abs([E, F, G, L, M, N]))
    if np.max(np.abs(L)) + np.max(np.abs(N)) > vanish_tol * scale:
        raise NotAsymptotic("L and N do not vanish: the parameters are not asymptotic")
    if np.any(E <= 0) or np.any(G >= 0):
        raise WrongSignature("asymptotic parameters need E > 0 and G < 0")

    sE = np.sqrt(E)
    sG = np.sqrt(-G)
    Eu, Ev = 2 * mdot(d.zu, d.zuu), 2 * mdot(d.zu, d.zuv)
    Gu, Gv = 2 * mdot(d.zv, d.zuv), 2 * mdot(d.zv, d.zvv)
    Fu = mdot(d.zuu, d.zv) + mdot(d.zu, d.zuv)
    Fv = mdot(d.zuv, d.zv) + mdot(d.zu, d.zvv)
    sE_u, sE_v = Eu / (2 * sE), Ev / (2 * sE)
    sG_u, sG_v = -Gu / (2 * sG), -Gv / (2 * sG)

    a = F / (sE * sG)
    a_u = Fu / (sE * sG) - a * (sE_u / sE + sG_u / sG)
    a_v = Fv / (sE * sG) - a * (sE_v / sE + sG_v / sG)
    alpha = M / (sE * sG)
    q = 1.0 + a * a
    # connection coefficients from the metric (exact in the jets)
    gamma1 = -(a_u / sE + a * sG_u / (sE * sG) - sE_v / (sE * sG)) / q
    gamma2 = (a_v / sG + a * sE_v / (sE * sG) + sG_u / (sE * sG)) / q
    return dict(
        a=a, a_u=a_u, a_v=a_v, alpha=alpha, f=f_from(a, alpha),
        gamma1=gamma1, gamma2=gamma2, sqrtE=sE, sqrtMinusG=sG,
    )


def invariants_at(s: SurfaceDef, u: float, v: float, h=1e-4, check_tol=1e-6) -> InvariantPoint:
    """Basic asymptotic invariants at one point.

    ``gamma1``, ``gamma2`` use the ``f``-form of the connection coefficients,
    with ``f_u`` and ``f_v`` from central differences of step ``h`` and the
    derivatives of ``a`` from jets. The result is cross-checked against the
    metric form, which is exact in the jets; disagreement above ``check_tol``
    is logged.
    """
    p = _exact_invariants(s, u, v)
    fn = lambda uu, vv: _exact_invariants(s, uu, vv)["f"]
    f_u = (fn(u + h, v) - fn(u - h, v)) / (2 * h)
    f_v = (fn(u, v + h) - fn(u, v - h)) / (2 * h)
    q = 1.0 + p["a"] ** 2
    gamma1 = -p["a_u"] / (q * p["sqrtE"]) + f_v / p["sqrtMinusG"]
    gamma2 = p["a_v"] / (q * p["sqrtMinusG"]) + f_u / p["sqrtE"]
    gap = max(abs(gamma1 - p["gamma1"]), abs(gamma2 - p["gamma2"]))
    if gap > check_tol:
        log.warning("gamma cross-check off by %.3g at (%g, %g)", gap, u, v)
    return InvariantPoint(
        float(p["a"]), float(p["alpha"]), float(p["f"]), float(gamma1), float(gamma2),
        float(p["sqrtE"]), float(p["sqrtMinusG"]),
    )


CSV_COLUMNS = ("a", "alpha", "f", "gamma1", "gamma2", "sqrtE", "sqrtMinusG")


@dataclass(frozen=True)
class InvariantField:
    """Invariants sampled on a uniform ``(u, v)`` grid; arrays are ``[i, j]``."""

    grid: Grid
    a: np.ndarray
    alpha: np.ndarray
    f: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray
    sqrtE: np.ndarray
    sqrtMinusG: np.ndarray

    def __post_init__(self):
        for fld in fields(self)[1:]:
            arr = np.asarray(getattr(self, fld.name), dtype=float)
            if arr.shape != self.grid.shape:
                raise ValueError(f"{fld.name} has shape {arr.shape}, grid is {self.grid.shape}")
            object.__setattr__(self, fld.name, arr)

    @classmethod
    def from_surface(cls, s: SurfaceDef, grid: Grid = None, vanish_tol=VANISH_TOL):
        grid = grid or s.grid
        U, V = grid.mesh()
        p = _exact_invariants(s, U, V, vanish_tol)
        field = cls(grid, *(p[k] for k in CSV_COLUMNS))
        field.alpha_sign()
        return field

    def replace(self, **changes):
        """Copy with some arrays replaced; ``f`` follows ``a`` and ``alpha``."""
        if ("a" in changes or "alpha" in changes) and "f" not in changes:
            changes["f"] = f_from(changes.get("a", self.a), changes.get("alpha", self.alpha))
        return replace(self, **changes)

    def alpha_sign(self):
        s = np.sign(self.alpha)
        if np.any(s == 0) or np.any(s != s.flat[0]):
            raise MethodNotApplicable("alpha vanishes or changes sign on the patch")
        return int(s.flat[0])

    @property
    def K(self):
        return self.alpha**2 / (1.0 + self.a**2)

    @property
    def H(self):
        return self.a * self.alpha / (1.0 + self.a**2)

    @property
    def gamma1_bar(self):
        return self.gamma1 * np.sqrt(1.0 + self.a**2)

    @property
    def gamma2_bar(self):
        return self.gamma2 * np.sqrt(1.0 + self.a**2)

    @property
    def alpha_bar(self):
        return self.alpha / np.sqrt(1.0 + self.a**2)

    def point(self, i, j) -> InvariantPoint:
        return InvariantPoint(*(float(getattr(self, k)[i, j]) for k in CSV_COLUMNS))


@dataclass(frozen=True)
class ResidualGrid:
    """Residual values on the grid; NaN marks nodes without a value."""

    name: str
    values: np.ndarray

    @property
    def max(self) -> float:
        vals = np.abs(self.values[np.isfinite(self.values)])
        return float(vals.max()) if vals.size else float("nan")

    @property
    def count(self) -> int:
        return int(np.isfinite(self.values).sum())


def _interior_derivs(F, grid):
    return central_u(F, grid.hu), central_v(F, grid.hv)


def gauss_residual(fld: InvariantField) -> ResidualGrid:
    """Residual of the Gauss equation in terms of the basic invariants."""
    g = fld.grid
    a, al, g1, g2 = fld.a, fld.alpha, fld.gamma1, fld.gamma2
    sE, sG = fld.sqrtE, fld.sqrtMinusG
    q = 1.0 + a * a
    a_u, a_v = _interior_derivs(a, g)
    a_uv = central_uv(a, g.hu, g.hv)
    xa, ya = a_u / sE, a_v / sG
    x_g2 = central_u(g2, g.hu) / sE
    y_g1 = central_v(g1, g.hv) / sG
    r = (
        x_g2 - y_g1 - 2 * a * g1 * g2 - g1**2 + g2**2
        - g1 * xa / q - g2 * ya / q
        - a_uv / (q * sE * sG) + a * xa * ya / q**2
        + al**2 / q
    )
    return ResidualGrid("gauss", r)


def codazzi_residual(fld: InvariantField):
    """Residuals of the two Codazzi equations."""
    g = fld.grid
    a, al, g1, g2 = fld.a, fld.alpha, fld.gamma1, fld.gamma2
    sE, sG = fld.sqrtE, fld.sqrtMinusG
    q = 1.0 + a * a
    a_u, a_v = _interior_derivs(a, g)
    al_u, al_v = _interior_derivs(al, g)
    xa, ya = a_u / sE, a_v / sG
    r1 = al_u / sE - (a * al * xa / q + 2 * al * (ya / q - g2))
    r2 = al_v / sG - (a * al * ya / q - 2 * al * (xa / q + g1))
    return ResidualGrid("codazzi_1", r1), ResidualGrid("codazzi_2", r2)


def system_residual(fld: InvariantField):
    """Residuals of the first-order system for ``sqrt(E)`` and ``sqrt(-G)``."""
    g = fld.grid
    a, sE, sG = fld.a, fld.sqrtE, fld.sqrtMinusG
    f_u, f_v = _interior_derivs(fld.f, g)
    r1 = central_v(sE, g.hv) - (f_v * sE + a * f_u * sG)
    r2 = central_u(sG, g.hu) - (-a * f_v * sE + f_u * sG)
    return ResidualGrid("system_1", r1), ResidualGrid("system_2", r2)


def all_residuals(fld: InvariantField) -> dict:
    out = {"gauss": gauss_residual(fld).max}
    for r in codazzi_residual(fld) + system_residual(fld):
        out[r.name] = r.max
    return out


def eg_from_invariants(a, gamma1, gamma2, a_u, a_v, f_u, f_v, rel_tol=1e-10, strict=True):
    """``(sqrt(E), sqrt(-G))`` recovered from the invariants and their derivatives.

    Raises :class:`DegenerateDenominator` where a denominator is not bounded
    away from zero; with ``strict=False`` those entries are NaN instead.
    """
    a, g1, g2 = (np.asarray(t, dtype=float) for t in (a, gamma1, gamma2))
    q = 1.0 + a * a
    num = a_u * a_v + q * q * f_u * f_v
    t1, t2 = -a_v * g1, q * f_v * g2
    t3, t4 = a_u * g2, q * f_u * g1
    den_e = q * (t1 + t2)
    den_g = q * (t3 + t4)
    bad_e = np.abs(den_e) <= rel_tol * q * (np.abs(t1) + np.abs(t2) + np.abs(num))
    bad_g = np.abs(den_g) <= rel_tol * q * (np.abs(t3) + np.abs(t4) + np.abs(num))
    bad = bad_e | bad_g
    if strict and np.any(bad):
        raise DegenerateDenominator("denominator of the metric recovery vanishes")
    with np.errstate(all="ignore"):
        sE = np.where(bad, np.nan, num / den_e)
        sG = np.where(bad, np.nan, num / den_g)
    if np.ndim(sE) == 0:
        return float(sE), float(sG)
    return sE, sG


def ah_from_kh(K, H, branch="+"):
    """``(a, alpha)`` from Gauss and mean curvature.

    ``a = H/sqrt(K-H^2)``, ``alpha = K/sqrt(K-H^2)`` on the ``"+"`` branch and
    both negated on the ``"-"`` branch.
    """
    if branch not in ("+", "-"):
        raise ValueError("branch must be '+' or '-'")
    K = np.asarray(K, dtype=float)
    H = np.asarray(H, dtype=float)
    D = K - H * H
    if np.any(K <= 0):
        raise MethodNotApplicable("K<=0: the method needs positive Gauss curvature")
    if np.any(D <= 0):
        raise MethodNotApplicable("K-H^2<=0: the method needs imaginary principal curvatures")
    sign = 1.0 if branch == "+" else -1.0
    r = np.sqrt(D)
    a, alpha = sign * H / r, sign * K / r
    if a.ndim == 0:
        return float(a), float(alpha)
    return a, alpha
