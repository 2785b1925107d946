"""Gauss-equation tooling for two special cases.

For ``K = 1`` in canonical asymptotic parameters the Gauss equation becomes
the cosh-Gordon equation ``w_uv + cosh w = 0`` after ``a = sinh w``. It is
solved here as a Goursat problem, with data on the two characteristics
``v = 0`` and ``u = 0``. The minimal case is only checked, never solved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CornerMismatch, DivergenceError, NonPositiveK
from .expr import evaluate, parse
from .grid import Grid, central_u, central_uu, central_v, central_vv
from .invariants import InvariantField

DIVERGENCE_BOUND = 50.0


def _sample(data, x, other):
    """Boundary data as an array on ``x``; accepts arrays, callables and expression strings."""
    if isinstance(data, str):
        e = parse(data)
        names = ("u", "v") if other == "v" else ("v", "u")
        kw = {names[0]: x, names[1]: np.zeros_like(x)}
        vals = evaluate(e, kw["u"], kw["v"])
    elif callable(data):
        vals = data(x)
    else:
        vals = data
    vals = np.broadcast_to(np.asarray(vals, dtype=float), x.shape).copy()
    if vals.shape != x.shape:
        raise ValueError("boundary data does not match the grid")
    return vals


@dataclass(frozen=True)
class GoursatProblem:
    """``w_uv + cosh w = source`` on ``[0,U] x [0,V]`` with ``w(u,0)`` and ``w(0,v)`` given.

    ``bu`` is the data along ``v = 0`` (a function of ``u``) and ``bv`` along
    ``u = 0``. Either may be an expression string in the free variable, a
    callable or an array of grid values. ``source`` is an optional forcing
    ``g(u, v)`` used by manufactured-solution tests.
    """

    U: float
    V: float
    shape: tuple
    bu: object = 0.0
    bv: object = 0.0
    source: object = None
    corner_tol: float = 1e-12

    def __post_init__(self):
        if not (self.U > 0 and self.V > 0):
            raise ValueError("domain lengths must be positive")
        if min(self.shape) < 2:
            raise ValueError("grid sizes must be at least 2")

    @property
    def grid(self) -> Grid:
        return Grid.uniform((0.0, self.U), (0.0, self.V), self.shape)

    def boundary(self):
        g = self.grid
        wu = _sample(self.bu, g.u, "v")
        wv = _sample(self.bv, g.v, "u")
        if abs(wu[0] - wv[0]) > self.corner_tol:
            raise CornerMismatch(
                f"boundary data disagree at the corner: {float(wu[0])!r} vs {float(wv[0])!r}", corner=(float(wu[0]), float(wv[0]))
            )
        return wu, wv

    def source_grid(self):
        if self.source is None:
            return None
        g = self.grid
        uu, vv = g.mesh()
        if isinstance(self.source, str):
            return np.asarray(evaluate(parse(self.source), uu, vv), dtype=float)
        if callable(self.source):
            return np.asarray(self.source(uu, vv), dtype=float)
        return np.broadcast_to(np.asarray(self.source, dtype=float), g.shape)


@dataclass(frozen=True)
class CoshGordonSolution:
    grid: Grid
    omega: np.ndarray
    residual: np.ndarray

    @property
    def max_residual(self) -> float:
        r = self.residual[np.isfinite(self.residual)]
        return float(np.max(np.abs(r))) if r.size else float("nan")

    def a(self):
        return np.sinh(self.omega)


def solve_cosh_gordon(p: GoursatProblem) -> CoshGordonSolution:
    """Characteristic cell marching with one corrector pass per cell.

    ``w11 = w10 + w01 - w00 + hk (g_bar - cosh(w_bar))`` where ``w_bar`` is the
    cell average; the predictor uses ``w11 = w10 + w01 - w00``. Cells on one
    anti-diagonal are independent and updated together.
    """
    g = p.grid
    h, k = g.hu, g.hv
    wu, wv = p.boundary()
    src = p.source_grid()
    nu, nv = g.shape
    w = np.full(g.shape, np.nan)
    w[:, 0] = wu
    w[0, :] = wv
    for d in range(2, nu + nv - 1):
        i = np.arange(max(1, d - nv + 1), min(nu - 1, d - 1) + 1)
        j = d - i
        w00, w10, w01 = w[i - 1, j - 1], w[i, j - 1], w[i - 1, j]
        gbar = 0.0 if src is None else 0.25 * (src[i - 1, j - 1] + src[i, j - 1] + src[i - 1, j] + src[i, j])
        w11 = w10 + w01 - w00
        for _ in range(2):
            wbar = 0.25 * (w00 + w10 + w01 + w11)
            w11 = w10 + w01 - w00 + h * k * (gbar - np.cosh(wbar))
        bad = ~np.isfinite(w11) | (np.abs(w11) > DIVERGENCE_BOUND)
        if np.any(bad):
            b = int(np.argmax(bad))
            cell = (int(i[b]), int(j[b]))
            raise DivergenceError(
                f"cosh-Gordon marching diverged at cell {cell} (u={g.u[cell[0]]:.6g}, v={g.v[cell[1]]:.6g})",
                cell=cell,
            )
        w[i, j] = w11
    return CoshGordonSolution(g, w, cosh_gordon_residual(w, g, src))


def cosh_gordon_residual(omega, grid: Grid, source=None):
    """``w_uv + cosh w - g`` at interior nodes with the four-point mixed stencil."""
    w = np.asarray(omega, dtype=float)
    r = np.full(w.shape, np.nan)
    w_uv = (w[2:, 2:] - w[2:, :-2] - w[:-2, 2:] + w[:-2, :-2]) / (4.0 * grid.hu * grid.hv)
    r[1:-1, 1:-1] = w_uv + np.cosh(w[1:-1, 1:-1])
    if source is not None:
        r[1:-1, 1:-1] -= np.asarray(source)[1:-1, 1:-1]
    return r


def constant_k_residual(a, grid: Grid):
    """``a_uv/(1+a^2) - a a_u a_v/(1+a^2)^2 + 1`` at interior nodes."""
    a = np.asarray(a, dtype=float)
    q = 1.0 + a * a
    a_u, a_v = central_u(a, grid.hu), central_v(a, grid.hv)
    a_uv = np.full(a.shape, np.nan)
    a_uv[1:-1, 1:-1] = (a[2:, 2:] - a[2:, :-2] - a[:-2, 2:] + a[:-2, :-2]) / (4.0 * grid.hu * grid.hv)
    return a_uv / q - a * a_u * a_v / (q * q) + 1.0


def minimal_k_residual(K, grid: Grid):
    """``(log sqrt K)_uu - (log sqrt K)_vv - 2 sqrt K`` at interior nodes."""
    K = np.asarray(K, dtype=float)
    if np.any(~(K > 0)):
        raise NonPositiveK("K must be positive on the whole grid")
    L = 0.5 * np.log(K)
    return central_uu(L, grid.hu) - central_vv(L, grid.hv) - 2.0 * np.sqrt(K)


def constant_k_field(omega, grid: Grid) -> InvariantField:
    """Invariants of the ``K = 1`` surface with ``a = sinh w`` in canonical parameters.

    ``alpha = cosh w = sqrt(1+a^2)`` so ``f = 0`` and ``sqrt(E) = sqrt(-G) = 1``;
    the gammas reduce to ``-a_u/(1+a^2)`` and ``a_v/(1+a^2)``, i.e.
    ``-w_u/cosh w`` and ``w_v/cosh w``.
    """
    w = np.asarray(omega, dtype=float)
    a = np.sinh(w)
    alpha = np.cosh(w)
    w_u, w_v = np.gradient(w, grid.u, grid.v, edge_order=2)
    ones = np.ones(grid.shape)
    return InvariantField(
        grid, a, alpha, np.zeros(grid.shape), -w_u / alpha, w_v / alpha, ones, ones.copy()
    )
