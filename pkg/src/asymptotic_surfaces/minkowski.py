"""Linear algebra of Minkowski 3-space with signature (+, +, -).

Vectors are plain numpy arrays whose last axis has length 3; every function
broadcasts over leading axes. Frames are ``(3, 3)`` arrays whose *rows* are
the frame vectors ``x, y, n``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import FrameIncompatible

ETA = np.diag([1.0, 1.0, -1.0])
_SIGN = np.array([1.0, 1.0, -1.0])

EPS_CAUSAL = 1e-12


class CausalType(str, enum.Enum):
    SPACE_LIKE = "space-like"
    TIME_LIKE = "time-like"
    LIGHT_LIKE = "light-like"


def mdot(x, y):
    """Scalar product ``x1*y1 + x2*y2 - x3*y3``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return x[..., 0] * y[..., 0] + x[..., 1] * y[..., 1] - x[..., 2] * y[..., 2]


def mnorm2(x):
    return mdot(x, x)


def causal_type(x, eps=EPS_CAUSAL) -> CausalType:
    q = float(mdot(x, x))
    if abs(q) <= eps:
        return CausalType.LIGHT_LIKE
    return CausalType.SPACE_LIKE if q > 0 else CausalType.TIME_LIKE


def mcross(x, y):
    """Lorentzian cross product.

    The unique ``w`` with ``mdot(w, z) == det[x, y, z]`` for every ``z``;
    with this convention ``det[x, y, mcross(x, y)] = mdot(w, w)``.
    """
    return np.cross(np.asarray(x, dtype=float), np.asarray(y, dtype=float)) * _SIGN


def det3(x, y, z):
    """Determinant of the matrix with columns ``x, y, z``."""
    return np.einsum("...i,...i->...", np.cross(x, y), z)


def gram(frame):
    """Matrix of scalar products of the rows of ``frame``."""
    frame = np.asarray(frame, dtype=float)
    return frame @ ETA @ np.swapaxes(frame, -1, -2)


def frame_gram(a):
    """Target Gram matrix of an asymptotic frame ``(x, y, n)`` with ``<x,y> = a``."""
    a = np.asarray(a, dtype=float)
    g = np.zeros(a.shape + (3, 3))
    g[..., 0, 0] = 1.0
    g[..., 1, 1] = -1.0
    g[..., 2, 2] = 1.0
    g[..., 0, 1] = a
    g[..., 1, 0] = a
    return g


def is_lorentz(A, tol=1e-10):
    A = np.asarray(A, dtype=float)
    return bool(np.all(np.abs(A.T @ ETA @ A - ETA) <= tol))


def boost(rapidity, axis=1):
    """Boost mixing spatial axis ``axis`` (0 or 1) with the time axis."""
    c, s = np.cosh(rapidity), np.sinh(rapidity)
    A = np.eye(3)
    A[axis, axis] = c
    A[axis, 2] = s
    A[2, axis] = s
    A[2, 2] = c
    return A


def rotation(angle):
    """Rotation in the space-like ``(x1, x2)`` plane."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


@dataclass(frozen=True)
class LorentzMotion:
    """Affine map ``p -> A p + b`` whose linear part preserves ``mdot``."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", np.asarray(self.A, dtype=float))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))

    @classmethod
    def identity(cls):
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def random(cls, rng=None, scale=1.0):
        """A random orientation-preserving motion (boosts, rotation, shift)."""
        rng = np.random.default_rng(rng)
        A = (
            rotation(rng.uniform(-np.pi, np.pi))
            @ boost(scale * rng.uniform(-0.5, 0.5), axis=0)
            @ boost(scale * rng.uniform(-0.5, 0.5), axis=1)
            @ rotation(rng.uniform(-np.pi, np.pi))
        )
        return cls(A, rng.uniform(-2.0, 2.0, size=3))

    def __call__(self, points):
        points = np.asarray(points, dtype=float)
        return points @ self.A.T + self.b

    def apply_linear(self, vectors):
        return np.asarray(vectors, dtype=float) @ self.A.T

    def inverse(self):
        Ainv = ETA @ self.A.T @ ETA
        return LorentzMotion(Ainv, -Ainv @ self.b)

    def compose(self, other):
        """``self`` after ``other``."""
        return LorentzMotion(self.A @ other.A, self.A @ other.b + self.b)

    def metric_defect(self):
        return float(np.max(np.abs(self.A.T @ ETA @ self.A - ETA)))


def motion_from_frames(frame_s, base_s, frame_t, base_t, tol=1e-8) -> LorentzMotion:
    """The motion carrying frame ``frame_s`` at ``base_s`` onto ``frame_t`` at ``base_t``.

    Both frames must have the same Gram matrix to ``tol``.
    """
    Fs = np.asarray(frame_s, dtype=float).T
    Ft = np.asarray(frame_t, dtype=float).T
    gs = Fs.T @ ETA @ Fs
    gt = Ft.T @ ETA @ Ft
    mismatch = float(np.max(np.abs(gs - gt)))
    if mismatch > tol:
        raise FrameIncompatible(
            f"frames have different Gram matrices (max difference {mismatch:.3g})",
            mismatch=mismatch,
        )
    Fs_inv = np.linalg.solve(gs, Fs.T @ ETA)
    A = Ft @ Fs_inv
    return LorentzMotion(A, np.asarray(base_t, dtype=float) - A @ np.asarray(base_s, dtype=float))


def orthonormalize(frame, a):
    """Project a drifted frame back onto ``x^2=1, y^2=-1, n^2=1, <x,y>=a``.

    Minkowski Gram-Schmidt: ``x`` is normalised, ``n`` rebuilt from the cross
    product and ``y`` reassembled from ``x`` and the unit time-like direction
    orthogonal to ``x`` and ``n``.
    """
    frame = np.asarray(frame, dtype=float)
    a = np.asarray(a, dtype=float)
    x, y = frame[..., 0, :], frame[..., 1, :]
    x = x / np.sqrt(mdot(x, x))[..., None]
    w = mcross(x, y)
    n = w / np.sqrt(mdot(w, w))[..., None]
    t = mcross(n, x)
    t = t / np.sqrt(-mdot(t, t))[..., None]
    s = np.sqrt(1.0 + a * a) * np.sign(-mdot(y, t))
    y = a[..., None] * x + s[..., None] * t
    return np.stack([x, y, n], axis=-2)
