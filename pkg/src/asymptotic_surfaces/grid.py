"""Rectangular parameter grids, finite differences and line quadrature.

Grid arrays are indexed ``[i, j]`` with ``i`` along ``u`` (axis 0) and ``j``
along ``v`` (axis 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson


@dataclass(frozen=True)
class Grid:
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if u.ndim != 1 or v.ndim != 1:
            raise ValueError("grid axes must be one-dimensional")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def uniform(cls, u_range, v_range, shape):
        nu, nv = shape
        if nu < 1 or nv < 1:
            raise ValueError("grid sizes must be positive")
        return cls(np.linspace(*u_range, nu), np.linspace(*v_range, nv))

    @property
    def shape(self):
        return (self.u.size, self.v.size)

    @property
    def hu(self):
        return float(self.u[1] - self.u[0]) if self.u.size > 1 else 0.0

    @property
    def hv(self):
        return float(self.v[1] - self.v[0]) if self.v.size > 1 else 0.0

    def mesh(self):
        return np.meshgrid(self.u, self.v, indexing="ij")

    def index_of(self, u0, v0, tol=1e-9):
        """Indices of the node at ``(u0, v0)``; raises if it is not a node."""
        i = int(np.argmin(np.abs(self.u - u0)))
        j = int(np.argmin(np.abs(self.v - v0)))
        scale = max(abs(self.hu), abs(self.hv), 1.0)
        if abs(self.u[i] - u0) > tol * scale or abs(self.v[j] - v0) > tol * scale:
            raise ValueError(f"base point ({u0}, {v0}) is not a grid node")
        return i, j

    def center(self):
        return float(self.u[self.u.size // 2]), float(self.v[self.v.size // 2])


def interior(shape):
    """Boolean mask of nodes with a full 3x3 neighbourhood."""
    mask = np.zeros(shape, dtype=bool)
    mask[1:-1, 1:-1] = True
    return mask


def central_u(F, h):
    """Central difference along ``u``; boundary rows are NaN."""
    out = np.full(F.shape, np.nan)
    out[1:-1] = (F[2:] - F[:-2]) / (2.0 * h)
    return out


def central_v(F, h):
    out = np.full(F.shape, np.nan)
    out[:, 1:-1] = (F[:, 2:] - F[:, :-2]) / (2.0 * h)
    return out


def central_uu(F, h):
    out = np.full(F.shape, np.nan)
    out[1:-1] = (F[2:] - 2.0 * F[1:-1] + F[:-2]) / (h * h)
    return out


def central_vv(F, h):
    out = np.full(F.shape, np.nan)
    out[:, 1:-1] = (F[:, 2:] - 2.0 * F[:, 1:-1] + F[:, :-2]) / (h * h)
    return out


def central_uv(F, hu, hv):
    out = np.full(F.shape, np.nan)
    out[1:-1, 1:-1] = (F[2:, 2:] - F[2:, :-2] - F[:-2, 2:] + F[:-2, :-2]) / (4.0 * hu * hv)
    return out


def gradient(F, grid: Grid):
    """Second-order derivatives ``(F_u, F_v)`` at every node.

    Central in the interior, second-order one-sided on the boundary.
    """
    Fu = _diff(F, grid.u, 0)
    Fv = _diff(F, grid.v, 1)
    return Fu, Fv


def _diff(F, x, axis):
    if x.size < 2:
        return np.zeros_like(F)
    edge = 2 if x.size >= 3 else 1
    return np.gradient(F, x, axis=axis, edge_order=edge)


def mixed(F, grid: Grid):
    """``F_uv`` at every node (central interior, one-sided on the edges)."""
    Fu = _diff(F, grid.u, 0)
    return _diff(Fu, grid.v, 1)


def cumulative_from(y, x, i0, axis=0):
    """``int_{x[i0]}^{x[i]} y dx`` for every ``i``, along ``axis``.

    Composite Simpson on each side of ``i0``; a side with a single interval
    uses the trapezoid rule.
    """
    y = np.moveaxis(np.asarray(y, dtype=float), axis, 0)
    out = np.zeros_like(y)
    out[i0:] = _cumulative(y[i0:], x[i0:])
    if i0 > 0:
        out[: i0 + 1] = -_cumulative(y[: i0 + 1][::-1], -x[: i0 + 1][::-1])[::-1]
    return np.moveaxis(out, 0, axis)


def _cumulative(y, x):
    out = np.zeros_like(y)
    if len(x) == 2:
        out[1] = 0.5 * (y[0] + y[1]) * (x[1] - x[0])
    elif len(x) > 2:
        out[1:] = cumulative_simpson(y, x=x, axis=0)
    return out
