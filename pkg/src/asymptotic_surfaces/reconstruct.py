"""Surface reconstruction from basic asymptotic invariants.

The pipeline mirrors the existence proof: solve the metric system for
``Phi = sqrt(E)`` and ``Psi = sqrt(-G)``, assemble the connection matrices
``U`` and ``V`` of the frame ``xi = (x, y, n)`` (``xi_u = U xi``,
``xi_v = V xi``), integrate the frame from an initial frame at the base
point and finally integrate ``z_u = Phi x``, ``z_v = Psi y``.

Frames are stored as ``(..., 3, 3)`` arrays whose rows are ``x, y, n``.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    AllNodesMasked,
    ClosureExceeded,
    GramDriftExceeded,
    IncompatibleInvariants,
    MethodNotApplicable,
    NonPositiveResult,
    StageError,
    SurfaceError,
)
from .grid import Grid, central_u, central_uv, central_v, cumulative_from, gradient
from .invariants import InvariantField, ResidualGrid, ah_from_kh, f_from
from .minkowski import (
    LorentzMotion,
    det3,
    frame_gram,
    gram,
    mcross,
    mdot,
    motion_from_frames,
    orthonormalize,
)
from .surface import SurfaceDef, frame_at, positions

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# metric system


@dataclass(frozen=True)
class PhiPsiField:
    grid: Grid
    Phi: np.ndarray
    Psi: np.ndarray
    base: tuple
    phi_residual: ResidualGrid
    psi_residual: ResidualGrid

    @property
    def initial_row(self):
        j0 = self.grid.index_of(*self.base)[1]
        return self.Phi[:, j0]

    @property
    def initial_column(self):
        i0 = self.grid.index_of(*self.base)[0]
        return self.Psi[i0, :]


def _metric_rhs(a, f_u, f_v):
    """Coefficients of ``Phi_v = cvp Phi + cvq Psi`` and ``Psi_u = cup Phi + cuq Psi``."""
    return f_v, a * f_u, -a * f_v, f_u


def metric_residuals(Phi, Psi, a, f, grid: Grid):
    f_u, f_v = central_u(f, grid.hu), central_v(f, grid.hv)
    r1 = central_v(Phi, grid.hv) - (f_v * Phi + a * f_u * Psi)
    r2 = central_u(Psi, grid.hu) - (-a * f_v * Phi + f_u * Psi)
    return ResidualGrid("phi_v", r1), ResidualGrid("psi_u", r2)


def solve_phi_psi(a, alpha, grid: Grid, base) -> PhiPsiField:
    """Solve the Cauchy problem for ``(Phi, Psi)`` about ``base``.

    ``Phi_v = f_v Phi + a f_u Psi`` and ``Psi_u = -a f_v Phi + f_u Psi`` with
    ``Phi(u, v0) = exp(int_{u0}^{u} (f_u - a f_v)(., v0) du + f(u0, v0))`` and
    ``Psi(u0, v) = exp(int_{v0}^{v} (f_v + a f_u)(u0, .) dv + f(u0, v0))``.
    The ``f_u``/``f_v`` parts of the initial data integrate exactly; the
    remaining terms use Simpson quadrature. The rest of the grid is filled by
    Heun steps, marching outwards from the base one anti-diagonal at a time
    in each quadrant.
    """
    a = np.asarray(a, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha == 0) or np.any(np.sign(alpha) != np.sign(alpha.flat[0])):
        raise MethodNotApplicable("alpha vanishes or changes sign")
    base = tuple(float(b) for b in base)
    i0, j0 = grid.index_of(*base)
    f = f_from(a, alpha)
    f_u, f_v = spline_gradient(f, grid)
    cvp, cvq, cup, cuq = _metric_rhs(a, f_u, f_v)

    Phi = np.full(grid.shape, np.nan)
    Psi = np.full(grid.shape, np.nan)
    Phi[:, j0] = np.exp(f[:, j0] - cumulative_from(a[:, j0] * f_v[:, j0], grid.u, i0))
    Psi[i0, :] = np.exp(f[i0, :] + cumulative_from(a[i0, :] * f_u[i0, :], grid.v, j0))

    nu, nv = grid.shape
    for di in (1, -1):
        for dj in (1, -1):
            P = (nu - 1 - i0) if di > 0 else i0
            Q = (nv - 1 - j0) if dj > 0 else j0
            hu = di * grid.hu
            hv = dj * grid.hv
            for d in range(1, P + Q + 1):
                p = np.arange(max(0, d - Q), min(P, d) + 1)
                q = d - p
                i = i0 + di * p
                j = j0 + dj * q
                on_row = q == 0
                on_col = p == 0
                # Phi from the node below (v-step), Psi from the node to the left (u-step)
                ib, jb = i, j - dj * (~on_row)
                il, jl = i - di * (~on_col), j
                Fb = cvp[ib, jb] * Phi[ib, jb] + cvq[ib, jb] * Psi[ib, jb]
                Gl = cup[il, jl] * Phi[il, jl] + cuq[il, jl] * Psi[il, jl]
                Phi_p = np.where(on_row, Phi[i, j], Phi[ib, jb] + hv * Fb)
                Psi_p = np.where(on_col, Psi[i, j], Psi[il, jl] + hu * Gl)
                Fn = cvp[i, j] * Phi_p + cvq[i, j] * Psi_p
                Gn = cup[i, j] * Phi_p + cuq[i, j] * Psi_p
                Phi[i, j] = np.where(on_row, Phi[i, j], Phi[ib, jb] + 0.5 * hv * (Fb + Fn))
                Psi[i, j] = np.where(on_col, Psi[i, j], Psi[il, jl] + 0.5 * hu * (Gl + Gn))

    if not (np.all(Phi > 0) and np.all(Psi > 0)):
        raise NonPositiveResult("Phi or Psi is not positive on the patch")
    r1, r2 = metric_residuals(Phi, Psi, a, f, grid)
    return PhiPsiField(grid, Phi, Psi, base, r1, r2)


def gammas_from_metric(a, f, Phi, Psi, grid: Grid):
    """``gamma1 = -a_u/((1+a^2) Phi) + f_v/Psi``, ``gamma2 = a_v/((1+a^2) Psi) + f_u/Phi``."""
    a_u, a_v = spline_gradient(a, grid)
    f_u, f_v = spline_gradient(f, grid)
    q = 1.0 + a * a
    return -a_u / (q * Phi) + f_v / Psi, a_v / (q * Psi) + f_u / Phi


def spline_gradient(F, grid: Grid):
    """``(F_u, F_v)`` from not-a-knot cubic splines along each axis.

    More accurate than central differences at the nodes; used for ``a_u`` and
    ``a_v`` in the connection, whose consistency with ``a`` controls the Gram
    drift of the integrated frames.
    """
    F = np.asarray(F, dtype=float)
    out = []
    for x, axis in ((grid.u, 0), (grid.v, 1)):
        if x.size >= 4:
            out.append(CubicSpline(x, F, axis=axis).derivative()(x))
        else:
            out.append(gradient(F, grid)[axis])
    return tuple(out)


# ---------------------------------------------------------------------------
# connection matrices


def assemble_connection(a, alpha, gamma1, gamma2, a_u, a_v, Phi, Psi):
    """Connection matrices ``U`` and ``V`` (broadcast over leading axes)."""
    a, al, g1, g2, a_u, a_v, Phi, Psi = np.broadcast_arrays(
        *(np.asarray(t, dtype=float) for t in (a, alpha, gamma1, gamma2, a_u, a_v, Phi, Psi))
    )
    q = 1.0 + a * a
    U = np.zeros(a.shape + (3, 3))
    V = np.zeros(a.shape + (3, 3))
    U[..., 0, 0] = -a * g1 * Phi
    U[..., 0, 1] = g1 * Phi
    U[..., 1, 0] = a_u / q + g1 * Phi
    U[..., 1, 1] = a * a_u / q + a * g1 * Phi
    U[..., 1, 2] = al * Phi
    U[..., 2, 0] = -a * al * Phi / q
    U[..., 2, 1] = al * Phi / q
    V[..., 0, 0] = a * a_v / q - a * g2 * Psi
    V[..., 0, 1] = -a_v / q + g2 * Psi
    V[..., 0, 2] = al * Psi
    V[..., 1, 0] = g2 * Psi
    V[..., 1, 1] = a * g2 * Psi
    V[..., 2, 0] = -al * Psi / q
    V[..., 2, 1] = -a * al * Psi / q
    return U, V


def _deep(values):
    """Blank the two outer rings; derived fields there carry one-sided stencils."""
    out = np.array(values, dtype=float)
    out[:2] = out[-2:] = np.nan
    out[:, :2] = out[:, -2:] = np.nan
    return out


def integrability_residual(U, V, grid: Grid) -> ResidualGrid:
    """Frobenius norm of ``U_v - V_u - (V U - U V)`` two or more nodes from the edge."""
    U_v = np.full(U.shape, np.nan)
    V_u = np.full(V.shape, np.nan)
    U_v[:, 1:-1] = (U[:, 2:] - U[:, :-2]) / (2 * grid.hv)
    V_u[1:-1] = (V[2:] - V[:-2]) / (2 * grid.hu)
    R = U_v - V_u - (V @ U - U @ V)
    return ResidualGrid("integrability", _deep(np.sqrt(np.sum(R * R, axis=(-2, -1)))))


class BonnetResiduals(NamedTuple):
    gauss: ResidualGrid
    codazzi_phi: ResidualGrid
    codazzi_psi: ResidualGrid
    masked: int


def bonnet_condition_residuals(gamma1, gamma2, a, alpha, Phi, Psi, grid: Grid, rel_tol=1e-10, allow_all_masked=False):
    """Residuals of the Gauss and Codazzi conditions for the four-function reconstruction.

    The Codazzi conditions contain the ratio of ``a_u gamma2 + (1+a^2) f_u
    gamma1`` and ``-a_v gamma1 + (1+a^2) f_v gamma2``; nodes where either
    denominator is not bounded away from zero are masked (NaN) and counted.
    Like the integrability residual, values are reported two or more nodes
    from the edge. If every node is masked :class:`AllNodesMasked` is raised
    unless ``allow_all_masked`` is set; the Gauss residual is still usable then.
    """
    g1, g2, a, al, Phi, Psi = (np.asarray(t, dtype=float) for t in (gamma1, gamma2, a, alpha, Phi, Psi))
    q = 1.0 + a * a
    f = f_from(a, al)
    a_u, a_v = central_u(a, grid.hu), central_v(a, grid.hv)
    a_uv = central_uv(a, grid.hu, grid.hv)
    f_u, f_v = central_u(f, grid.hu), central_v(f, grid.hv)
    g2_u = central_u(g2, grid.hu)
    g1_v = central_v(g1, grid.hv)
    gauss = (
        g2_u / Phi - g1_v / Psi - 2 * a * g1 * g2 - g1**2 + g2**2
        - g1 * a_u / (q * Phi) - g2 * a_v / (q * Psi)
        - a_uv / (q * Phi * Psi) + a * a_u * a_v / (q * q * Phi * Psi)
        + al**2 / q
    )
    d1 = a_u * g2 + q * f_u * g1
    d2 = -a_v * g1 + q * f_v * g2
    s1 = np.abs(a_u * g2) + np.abs(q * f_u * g1)
    s2 = np.abs(a_v * g1) + np.abs(q * f_v * g2)
    bad = (np.abs(d1) <= rel_tol * s1) | (np.abs(d2) <= rel_tol * s2) | (d1 == 0) | (d2 == 0)
    bad &= np.isfinite(gauss)
    with np.errstate(all="ignore"):
        c1 = central_v(np.log(Phi), grid.hv) + a * f_u * (-d2) / d1 - f_v
        c2 = central_u(np.log(Psi), grid.hu) + a * f_v * d1 / d2 - f_u
    gauss = _deep(gauss)
    c1 = _deep(np.where(bad, np.nan, c1))
    c2 = _deep(np.where(bad, np.nan, c2))
    masked = int(bad.sum())
    if not allow_all_masked and not np.any(np.isfinite(c1)):
        raise AllNodesMasked("every interior node has a vanishing denominator")
    return BonnetResiduals(
        ResidualGrid("gauss", gauss), ResidualGrid("codazzi_phi", c1), ResidualGrid("codazzi_psi", c2), masked
    )


# ---------------------------------------------------------------------------
# frames


def initial_frame(a0: float):
    """Frame with ``x = (1,0,0)``, ``y = (a0, 0, sqrt(1+a0^2))`` and positive orientation."""
    x0 = np.array([1.0, 0.0, 0.0])
    y0 = np.array([a0, 0.0, np.sqrt(1.0 + a0 * a0)])
    w = mcross(x0, y0)
    n0 = w / np.sqrt(mdot(w, w))
    return np.stack([x0, y0, n0])


@dataclass(frozen=True)
class FramePatch:
    grid: Grid
    frames: np.ndarray
    a: np.ndarray
    drift: np.ndarray

    @property
    def max_drift(self) -> float:
        return float(np.max(self.drift))

    def orientation(self):
        return det3(self.frames[..., 0, :], self.frames[..., 1, :], self.frames[..., 2, :])


def gram_drift(frames, a):
    return np.max(np.abs(gram(frames) - frame_gram(a)), axis=(-2, -1))


def _rk4_line(M, xi0, h, a=None, every=None):
    """Integrate ``xi' = M(t) xi`` along axis 0 of ``M`` from ``xi0``.

    ``M`` has shape ``(n, ..., 3, 3)``; mid-step matrices come from cubic
    interpolation of the node values (quadratic next to the ends).
    """
    n = M.shape[0]
    out = np.empty(M.shape)
    out[0] = xi0
    xi = xi0
    for k in range(n - 1):
        M0, M1 = M[k], M[k + 1]
        if n < 3:
            Mm = 0.5 * (M0 + M1)
        elif 0 < k < n - 2:
            Mm = (9.0 * (M0 + M1) - M[k - 1] - M[k + 2]) / 16.0
        elif k == 0:
            Mm = (3.0 * M0 + 6.0 * M1 - M[k + 2]) / 8.0
        else:
            Mm = (3.0 * M1 + 6.0 * M0 - M[k - 1]) / 8.0
        k1 = M0 @ xi
        k2 = Mm @ (xi + 0.5 * h * k1)
        k3 = Mm @ (xi + 0.5 * h * k2)
        k4 = M1 @ (xi + h * k3)
        xi = xi + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if every and (k + 1) % every == 0:
            xi = orthonormalize(xi, a[k + 1])
        out[k + 1] = xi
    return out


def _line_both_ways(M, xi0, idx0, h, a=None, every=None):
    out = np.empty(M.shape)
    out[idx0:] = _rk4_line(M[idx0:], xi0, h, None if a is None else a[idx0:], every)
    if idx0 > 0:
        back = _rk4_line(M[: idx0 + 1][::-1], xi0, -h, None if a is None else a[: idx0 + 1][::-1], every)
        out[: idx0 + 1] = back[::-1]
    return out


def integrate_frames(
    U,
    V,
    grid: Grid,
    frame0,
    base,
    a=None,
    reorthonormalize_every=None,
    check_integrability=True,
    warn_above=0.1,
    abort_above=1.0,
    max_drift=1e-3,
) -> FramePatch:
    """Integrate ``xi_u = U xi`` along the base row, then ``xi_v = V xi`` up every column.

    ``a`` is the invariant ``<x, y>`` used for the Gram drift diagnostic;
    ``reorthonormalize_every=k`` projects the frames back onto the exact
    Gram relations every ``k`` steps.
    """
    i0, j0 = grid.index_of(*base)
    frame0 = np.asarray(frame0, dtype=float)
    if a is None:
        a = np.full(grid.shape, float(mdot(frame0[0], frame0[1])))
    if check_integrability and min(grid.shape) >= 3:
        res = integrability_residual(U, V, grid).max
        if res > abort_above:
            raise IncompatibleInvariants(f"integrability residual {res:.3g} is above {abort_above}", residual=res)
        if res > warn_above:
            log.warning("integrability residual %.3g is above %.3g", res, warn_above)
    every = reorthonormalize_every
    row = _line_both_ways(U[:, j0], frame0, i0, grid.hu, a[:, j0], every)
    if grid.shape[1] > 1:
        # columns: axis 0 of the integration is v, batched over u
        Vc = np.swapaxes(V, 0, 1)
        frames = _line_both_ways(Vc, row, j0, grid.hv, np.swapaxes(a, 0, 1), every)
        frames = np.swapaxes(frames, 0, 1)
    else:
        frames = row[:, None]
    drift = gram_drift(frames, a)
    if float(np.max(drift)) > max_drift:
        raise GramDriftExceeded(f"frame Gram drift {float(np.max(drift)):.3g} exceeds {max_drift}", drift=float(np.max(drift)))
    return FramePatch(grid, frames, np.asarray(a, dtype=float), drift)


# ---------------------------------------------------------------------------
# positions


@dataclass(frozen=True)
class SurfacePatch:
    grid: Grid
    z: np.ndarray
    base: tuple
    base_frame: np.ndarray
    provenance: str = "reconstructed"
    closure: float = 0.0

    @property
    def base_point(self):
        i0, j0 = self.grid.index_of(*self.base)
        return self.z[i0, j0]

    def diameter(self):
        pts = self.z.reshape(-1, 3)
        return float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))

    def transformed(self, motion: LorentzMotion):
        return SurfacePatch(
            self.grid, motion(self.z), self.base, motion.apply_linear(self.base_frame),
            self.provenance, self.closure,
        )


def _trapezoid_cumulative(y, x, i0):
    """Cumulative trapezoid integral along axis 0 starting at index ``i0``."""
    out = np.zeros(y.shape)
    dx = np.diff(x).reshape((-1,) + (1,) * (y.ndim - 1))
    steps = 0.5 * (y[1:] + y[:-1]) * dx
    c = np.concatenate([np.zeros((1,) + y.shape[1:]), np.cumsum(steps, axis=0)])
    out[:] = c - c[i0]
    return out


def integrate_position(Phi, Psi, frames: FramePatch, z0, base, closure_tol=1e-2) -> SurfacePatch:
    """Integrate ``z_u = Phi x``, ``z_v = Psi y`` with the trapezoid rule.

    The patch is built along the base row and then up the columns; the
    opposite order is computed only to report the closure residual.
    """
    grid = frames.grid
    i0, j0 = grid.index_of(*base)
    z0 = np.asarray(z0, dtype=float)
    zu = np.asarray(Phi)[..., None] * frames.frames[..., 0, :]
    zv = np.asarray(Psi)[..., None] * frames.frames[..., 1, :]

    row = z0 + _trapezoid_cumulative(zu[:, j0], grid.u, i0)
    z = row[:, None, :] + np.swapaxes(_trapezoid_cumulative(np.swapaxes(zv, 0, 1), grid.v, j0), 0, 1)
    col = z0 + _trapezoid_cumulative(zv[i0, :], grid.v, j0)
    z_alt = col[None, :, :] + _trapezoid_cumulative(zu, grid.u, i0)
    closure = float(np.max(np.linalg.norm(z - z_alt, axis=-1)))

    patch = SurfacePatch(grid, z, tuple(float(b) for b in base), frames.frames[i0, j0].copy(), "reconstructed", closure)
    diam = patch.diameter()
    if closure > closure_tol * max(diam, 1e-300):
        raise ClosureExceeded(f"closure residual {closure:.3g} exceeds {closure_tol} x diameter", closure=closure)
    return patch


def patch_from_surface(s: SurfaceDef, grid: Grid = None, base=None) -> SurfacePatch:
    """Sample a parametrised surface with its asymptotic frame at the base point."""
    grid = grid or s.grid
    base = tuple(float(b) for b in (base or s.base))
    frame = frame_at(s, *base)
    return SurfacePatch(grid, positions(s, grid), base, frame, "expressions", 0.0)


class MotionComparison(NamedTuple):
    motion: LorentzMotion
    rms: float


def compare_up_to_motion(A: SurfacePatch, B: SurfacePatch, tol=1e-8) -> MotionComparison:
    """Align ``A`` onto ``B`` by the motion matching their base frames; report the RMS gap."""
    if A.z.shape != B.z.shape:
        raise ValueError("patches have different grid shapes")
    motion = motion_from_frames(A.base_frame, A.base_point, B.base_frame, B.base_point, tol=tol)
    diff = motion(A.z) - B.z
    rms = float(np.sqrt(np.mean(np.sum(diff * diff, axis=-1))))
    return MotionComparison(motion, rms)


# ---------------------------------------------------------------------------
# pipelines


@dataclass
class Reconstruction:
    patch: SurfacePatch
    frames: FramePatch
    metric: PhiPsiField
    a: np.ndarray
    alpha: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray
    diagnostics: dict = field(default_factory=dict)


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except StageError:
        raise
    except SurfaceError as exc:
        raise StageError(name, exc) from exc


def _max_or_none(r):
    m = r.max
    return None if not np.isfinite(m) else m


def reconstruct_from_invariants(
    fld: InvariantField,
    base,
    frame0=None,
    z0=(0.0, 0.0, 0.0),
    metric="solve",
    reorthonormalize_every=None,
    gauss_tol=0.05,
) -> Reconstruction:
    """Build a patch with the given basic asymptotic invariants.

    ``metric="solve"`` treats the parameters as canonical: ``Phi``, ``Psi``
    come from :func:`solve_phi_psi` and ``gamma1``, ``gamma2`` are derived from
    them (the stored gammas and metric are ignored). ``metric="field"`` uses the
    stored ``sqrtE``, ``sqrtMinusG`` and gammas as given.
    """
    timings = {}
    grid = fld.grid
    base = tuple(float(b) for b in base)
    a, alpha = fld.a, fld.alpha
    t = time.perf_counter()
    if metric == "solve":
        pp = _stage("solve_phi_psi", solve_phi_psi, a, alpha, grid, base)
        g1, g2 = gammas_from_metric(a, f_from(a, alpha), pp.Phi, pp.Psi, grid)
    elif metric == "field":
        r1, r2 = metric_residuals(fld.sqrtE, fld.sqrtMinusG, a, fld.f, grid)
        pp = PhiPsiField(grid, fld.sqrtE, fld.sqrtMinusG, base, r1, r2)
        g1, g2 = fld.gamma1, fld.gamma2
    else:
        raise ValueError("metric must be 'solve' or 'field'")
    timings["metric"] = time.perf_counter() - t

    t = time.perf_counter()
    bc = _stage(
        "bonnet_conditions", bonnet_condition_residuals, g1, g2, a, alpha, pp.Phi, pp.Psi, grid,
        allow_all_masked=True,
    )
    scale = float(np.max(alpha**2 / (1 + a * a)))
    if bc.gauss.max > gauss_tol * scale:
        raise StageError(
            "bonnet_conditions",
            IncompatibleInvariants(
                f"Gauss condition residual {bc.gauss.max:.3g} is not small: the invariants are incompatible",
                gauss_residual=bc.gauss.max,
            ),
        )
    if not np.any(np.isfinite(bc.codazzi_phi.values)):
        raise StageError("bonnet_conditions", AllNodesMasked("every interior node has a vanishing denominator"))
    timings["conditions"] = time.perf_counter() - t

    t = time.perf_counter()
    a_u, a_v = spline_gradient(a, grid)
    U, V = assemble_connection(a, alpha, g1, g2, a_u, a_v, pp.Phi, pp.Psi)
    integ = integrability_residual(U, V, grid) if min(grid.shape) >= 3 else None
    i0, j0 = grid.index_of(*base)
    if frame0 is None:
        frame0 = initial_frame(float(a[i0, j0]))
    frames = _stage(
        "integrate_frames", integrate_frames, U, V, grid, frame0, base, a=a,
        reorthonormalize_every=reorthonormalize_every,
    )
    timings["frames"] = time.perf_counter() - t

    t = time.perf_counter()
    patch = _stage("integrate_position", integrate_position, pp.Phi, pp.Psi, frames, z0, base)
    timings["position"] = time.perf_counter() - t

    diagnostics = {
        "residuals": {
            "phi_v": _max_or_none(pp.phi_residual),
            "psi_u": _max_or_none(pp.psi_residual),
            "gauss_condition": _max_or_none(bc.gauss),
            "codazzi_phi": _max_or_none(bc.codazzi_phi),
            "codazzi_psi": _max_or_none(bc.codazzi_psi),
            "masked_nodes": bc.masked,
            "integrability": None if integ is None else _max_or_none(integ),
        },
        "drift": frames.max_drift,
        "closure": patch.closure,
        "timings": timings,
    }
    return Reconstruction(patch, frames, pp, a, alpha, g1, g2, diagnostics)


def reconstruct_from_kh(
    K, H, grid: Grid, base, branch="+", z0=(0.0, 0.0, 0.0), frame0=None, reorthonormalize_every=None
) -> Reconstruction:
    """Surface in canonical asymptotic parameters with Gauss curvature ``K`` and mean curvature ``H``."""
    t = time.perf_counter()
    a, alpha = _stage("ah_from_kh", ah_from_kh, K, H, branch)
    f = f_from(a, alpha)
    nan = np.full(grid.shape, np.nan)
    fld = InvariantField(grid, a, alpha, f, nan, nan, nan, nan)
    rec = reconstruct_from_invariants(
        fld, base, frame0=frame0, z0=z0, metric="solve", reorthonormalize_every=reorthonormalize_every
    )
    rec.diagnostics["timings"]["total"] = time.perf_counter() - t
    return rec
