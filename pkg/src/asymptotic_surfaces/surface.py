"""Parametrised surfaces in Minkowski 3-space.

Fundamental forms are evaluated exactly from second-order jets of the
coordinate expressions. The unit normal is the normalised Lorentzian cross
product of ``z_u`` and ``z_v`` with the sign chosen so that
``det[z_u, z_v, n] > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import expr as _expr
from .errors import DegeneratePoint, ExprDomainError, LightLikeNormal, SingularMetric
from .grid import Grid, gradient
from .minkowski import mcross, mdot

VANISH_TOL = 1e-9


@dataclass(frozen=True)
class SurfaceDef:
    """Coordinate expressions ``z = (z1, z2, z3)`` on a rectangular domain.

    The third coordinate is the time-like one.
    """

    coords: tuple
    u_range: tuple = (-1.0, 1.0)
    v_range: tuple = (-1.0, 1.0)
    shape: tuple = (101, 101)
    base: tuple = None
    texts: tuple = None

    def __post_init__(self):
        if len(self.coords) != 3:
            raise ValueError("a surface needs exactly three coordinate expressions")
        coords = tuple(_expr.parse(c) if isinstance(c, str) else c for c in self.coords)
        if self.texts is None:
            object.__setattr__(self, "texts", tuple(_expr.unparse(c) for c in coords))
        object.__setattr__(self, "coords", coords)
        u_range = tuple(float(t) for t in self.u_range)
        v_range = tuple(float(t) for t in self.v_range)
        if not (u_range[0] < u_range[1] and v_range[0] < v_range[1]):
            raise ValueError("degenerate domain")
        nu, nv = (int(n) for n in self.shape)
        if nu < 2 or nv < 2:
            raise ValueError("grid sizes must be at least 2")
        object.__setattr__(self, "u_range", u_range)
        object.__setattr__(self, "v_range", v_range)
        object.__setattr__(self, "shape", (nu, nv))
        base = self.base
        if base is None:
            base = (0.5 * sum(u_range), 0.5 * sum(v_range))
        base = tuple(float(t) for t in base)
        if not (u_range[0] <= base[0] <= u_range[1] and v_range[0] <= base[1] <= v_range[1]):
            raise ValueError("base point outside the domain")
        object.__setattr__(self, "base", base)

    @classmethod
    def from_strings(cls, x, y, z, **kw):
        return cls((x, y, z), texts=(x, y, z), **kw)

    @property
    def grid(self) -> Grid:
        return Grid.uniform(self.u_range, self.v_range, self.shape)

    def with_domain(self, u_range=None, v_range=None, shape=None, base=None):
        return replace(
            self,
            u_range=u_range or self.u_range,
            v_range=v_range or self.v_range,
            shape=shape or self.shape,
            base=base,
        )

    def substitute(self, u, v, **kw):
        """Reparametrise by ``u -> u(.)``, ``v -> v(.)`` given as expressions."""
        u = _expr.parse(u) if isinstance(u, str) else u
        v = _expr.parse(v) if isinstance(v, str) else v
        coords = tuple(_expr.substitute(c, u=u, v=v) for c in self.coords)
        params = dict(u_range=self.u_range, v_range=self.v_range, shape=self.shape)
        params.update(kw)
        return SurfaceDef(coords, **params)

    def transformed(self, motion, **kw):
        """Apply a Lorentz motion to the coordinate expressions."""
        A, b = motion.A, motion.b
        coords = []
        for r in range(3):
            terms = [f"({float(A[r, c])!r})*({self.texts[c]})" for c in range(3)]
            coords.append(" + ".join(terms) + f" + ({float(b[r])!r})")
        params = dict(u_range=self.u_range, v_range=self.v_range, shape=self.shape, base=self.base)
        params.update(kw)
        return SurfaceDef(tuple(coords), texts=tuple(coords), **params)

    def jets(self, u, v):
        return tuple(_expr.eval_jet2(c, u, v) for c in self.coords)


@dataclass(frozen=True)
class Derivatives:
    """``z`` and its partials up to order two, each of shape ``(..., 3)``."""

    z: np.ndarray
    zu: np.ndarray
    zv: np.ndarray
    zuu: np.ndarray
    zuv: np.ndarray
    zvv: np.ndarray


def derivatives(s: SurfaceDef, u, v) -> Derivatives:
    jets = s.jets(u, v)
    stack = lambda name: np.stack([np.asarray(getattr(j, name), dtype=float) for j in jets], axis=-1)
    return Derivatives(*(stack(n) for n in ("val", "du", "dv", "duu", "duv", "dvv")))


@dataclass(frozen=True)
class FormCoefficients:
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    L: np.ndarray
    M: np.ndarray
    N: np.ndarray
    n: np.ndarray

    def as_tuple(self):
        return tuple(float(c) for c in (self.E, self.F, self.G, self.L, self.M, self.N))


@dataclass(frozen=True)
class CurvaturePair:
    K: np.ndarray
    H: np.ndarray

    @property
    def K_minus_H2(self):
        return self.K - self.H**2


def _normal(zu, zv, strict=True):
    w = mcross(zu, zv)
    q = mdot(w, w)
    size = np.linalg.norm(zu, axis=-1) * np.linalg.norm(zv, axis=-1)
    rank_defect = np.linalg.norm(np.cross(zu, zv), axis=-1) <= 1e-12 * np.maximum(size, 1e-300)
    light = np.abs(q) <= 1e-12 * np.maximum(size, 1e-300) ** 2
    if strict and np.any(rank_defect):
        raise DegeneratePoint("z_u and z_v are linearly dependent")
    if strict and np.any(light):
        raise LightLikeNormal("the normal direction is light-like")
    with np.errstate(all="ignore"):
        n = w * (np.sign(q) / np.sqrt(np.abs(q)))[..., None]
    return n


def forms_from_derivatives(d: Derivatives, strict=True) -> FormCoefficients:
    n = _normal(d.zu, d.zv, strict=strict)
    return FormCoefficients(
        mdot(d.zu, d.zu),
        mdot(d.zu, d.zv),
        mdot(d.zv, d.zv),
        mdot(n, d.zuu),
        mdot(n, d.zuv),
        mdot(n, d.zvv),
        n,
    )


def forms_at(s: SurfaceDef, u, v) -> FormCoefficients:
    """First and second fundamental forms at ``(u, v)`` (scalars or arrays)."""
    return forms_from_derivatives(derivatives(s, u, v))


def forms_on_grid(s: SurfaceDef, grid: Grid = None) -> FormCoefficients:
    grid = grid or s.grid
    U, V = grid.mesh()
    return forms_at(s, U, V)


def curvatures(f: FormCoefficients) -> CurvaturePair:
    """Gauss and mean curvature from the fundamental form coefficients."""
    E, F, G, L, M, N = f.E, f.F, f.G, f.L, f.M, f.N
    det = E * G - F * F
    scale = np.maximum.reduce([E * E, F * F, G * G])
    if np.any(np.abs(det) < 1e-14 * scale) or np.any(det == 0):
        raise SingularMetric("EG - F^2 vanishes")
    K = (L * N - M * M) / det
    H = (E * N - 2.0 * F * M + G * L) / (2.0 * det)
    return CurvaturePair(K, H)


def frame_at(s: SurfaceDef, u, v):
    """Asymptotic frame ``(x, y, n)`` with ``x = z_u/sqrt(E)``, ``y = z_v/sqrt(-G)``."""
    d = derivatives(s, u, v)
    f = forms_from_derivatives(d)
    if np.any(f.E <= 0) or np.any(f.G >= 0):
        raise ValueError("frame_at needs E > 0 and G < 0")
    x = d.zu / np.sqrt(f.E)[..., None]
    y = d.zv / np.sqrt(-f.G)[..., None]
    return np.stack([x, y, f.n], axis=-2)


def positions(s: SurfaceDef, grid: Grid = None):
    grid = grid or s.grid
    U, V = grid.mesh()
    return np.stack([np.asarray(_expr.evaluate(c, U, V), dtype=float) for c in s.coords], axis=-1)


def forms_from_positions(z, grid: Grid) -> FormCoefficients:
    """Fundamental forms of a sampled surface by finite differences.

    Derivatives are second-order accurate everywhere; the outermost ring of
    nodes uses one-sided stencils with larger error constants.
    """
    zu = np.empty_like(z)
    zv = np.empty_like(z)
    zuu = np.empty_like(z)
    zuv = np.empty_like(z)
    zvv = np.empty_like(z)
    for c in range(3):
        zu[..., c], zv[..., c] = gradient(z[..., c], grid)
        zuu[..., c], zuv[..., c] = gradient(zu[..., c], grid)
        _, zvv[..., c] = gradient(zv[..., c], grid)
        # three-point second differences where available
        zuu[1:-1, :, c] = (z[2:, :, c] - 2 * z[1:-1, :, c] + z[:-2, :, c]) / grid.hu**2
        zvv[:, 1:-1, c] = (z[:, 2:, c] - 2 * z[:, 1:-1, c] + z[:, :-2, c]) / grid.hv**2
    # four-point one-sided second differences keep the edges second order
    if z.shape[0] >= 4:
        zuu[0] = (2 * z[0] - 5 * z[1] + 4 * z[2] - z[3]) / grid.hu**2
        zuu[-1] = (2 * z[-1] - 5 * z[-2] + 4 * z[-3] - z[-4]) / grid.hu**2
    if z.shape[1] >= 4:
        zvv[:, 0] = (2 * z[:, 0] - 5 * z[:, 1] + 4 * z[:, 2] - z[:, 3]) / grid.hv**2
        zvv[:, -1] = (2 * z[:, -1] - 5 * z[:, -2] + 4 * z[:, -3] - z[:, -4]) / grid.hv**2
    return forms_from_derivatives(Derivatives(z, zu, zv, zuu, zuv, zvv), strict=False)


# ---------------------------------------------------------------------------
# classification


@dataclass
class ClassReport:
    """Flags describing a parametrised patch; see :func:`classify_patch`."""

    causal_type: str
    K_sign: str
    K_minus_H2_sign: str
    asymptotic: bool
    principal: bool
    isotropic: bool
    E_positive: bool
    G_negative: bool
    method_applicable: bool
    reasons: list = field(default_factory=list)
    extrema: dict = field(default_factory=dict)
    sign_changes: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def to_dict(self):
        return {
            "causal_type": self.causal_type,
            "K_sign": self.K_sign,
            "K_minus_H2_sign": self.K_minus_H2_sign,
            "asymptotic": self.asymptotic,
            "principal": self.principal,
            "isotropic": self.isotropic,
            "E_positive": self.E_positive,
            "G_negative": self.G_negative,
            "method_applicable": self.method_applicable,
            "reasons": list(self.reasons),
            "extrema": self.extrema,
            "sign_changes": list(self.sign_changes),
            "failures": list(self.failures),
        }


def _sign_label(x, tol):
    lo, hi = float(np.min(x)), float(np.max(x))
    if lo > tol:
        return "+"
    if hi < -tol:
        return "-"
    if max(abs(lo), abs(hi)) <= tol:
        return "0"
    return "mixed"


def _locate_failures(s, grid):
    failures = []
    for i, u in enumerate(grid.u):
        for j, v in enumerate(grid.v):
            try:
                f = forms_at(s, u, v)
                curvatures(f)
            except (ExprDomainError, DegeneratePoint, LightLikeNormal, SingularMetric) as exc:
                failures.append({"u": float(u), "v": float(v), "i": i, "j": j, "error": str(exc)})
    return failures


def classify_patch(s: SurfaceDef, vanish_tol=VANISH_TOL) -> ClassReport:
    """Classify the parametrisation of ``s`` over its grid.

    A coefficient vanishes on the patch when its maximum modulus is below
    ``vanish_tol`` times the largest modulus among all six coefficients.
    """
    grid = s.grid
    try:
        f = forms_on_grid(s, grid)
        c = curvatures(f)
    except (ExprDomainError, DegeneratePoint, LightLikeNormal, SingularMetric):
        failures = _locate_failures(s, grid)
        return ClassReport(
            "unknown", "unknown", "unknown", False, False, False, False, False, False,
            reasons=["evaluation failed at some grid nodes"], failures=failures,
        )

    coeffs = {"E": f.E, "F": f.F, "G": f.G, "L": f.L, "M": f.M, "N": f.N}
    scale = max(float(np.max(np.abs(x))) for x in coeffs.values())
    tol = vanish_tol * scale
    vanishes = {k: float(np.max(np.abs(x))) < tol for k, x in coeffs.items()}

    det = f.E * f.G - f.F**2
    if np.all(det < 0):
        causal = "time-like"
    elif np.all(det > 0):
        causal = "space-like"
    else:
        causal = "mixed"

    K, H = c.K, c.H
    KH = c.K_minus_H2
    k_scale = max(float(np.max(np.abs(K))), float(np.max(H * H)), 1e-300)
    K_sign = _sign_label(K, vanish_tol * k_scale)
    KH_sign = _sign_label(KH, vanish_tol * k_scale)

    asymptotic = vanishes["L"] and vanishes["N"]
    principal = vanishes["F"] and vanishes["M"]
    isotropic = vanishes["E"] and vanishes["G"]
    E_pos = bool(np.all(f.E > tol))
    G_neg = bool(np.all(f.G < -tol))

    sign_changes = []
    for name, arr in (("E", f.E), ("G", f.G)):
        if _sign_label(arr, tol) == "mixed":
            sign_changes.append(name)

    reasons = []
    if causal != "time-like":
        reasons.append(f"surface is not time-like ({causal})")
    if K_sign != "+":
        reasons.append({"-": "K<0", "0": "K=0"}.get(K_sign, "K changes sign"))
    if KH_sign in ("-", "0"):
        reasons.append("K-H^2<0" if KH_sign == "-" else "K-H^2=0")
    elif KH_sign != "+":
        reasons.append("K-H^2 changes sign")
    if isotropic:
        reasons.append("the parameters are isotropic (E=G=0)")
    elif not asymptotic:
        reasons.append("the parameters are not asymptotic (L, N do not vanish)")
    if asymptotic and not isotropic and not (E_pos and G_neg):
        reasons.append("E>0, G<0 fails in asymptotic parameters")
    if sign_changes:
        reasons.append("sign change of " + ", ".join(sign_changes) + " inside the patch")

    extrema = {}
    for name, arr in list(coeffs.items()) + [("K", K), ("H", H), ("K-H^2", KH)]:
        extrema[name] = [float(np.min(arr)), float(np.max(arr))]

    applicable = (
        causal == "time-like"
        and K_sign == "+"
        and KH_sign == "+"
        and asymptotic
        and not isotropic
        and E_pos
        and G_neg
    )
    return ClassReport(
        causal, K_sign, KH_sign, asymptotic, principal, isotropic, E_pos, G_neg,
        bool(applicable), reasons, extrema, sign_changes,
    )
