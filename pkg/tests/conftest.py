from importlib.resources import files

import numpy as np
import pytest

from asymptotic_surfaces.io import read_surface_file
from asymptotic_surfaces.surface import SurfaceDef

DATA = files("asymptotic_surfaces") / "data"

ENNEPER_POS = ("u^3/6 + u*v^2/2 - u/2", "u*v", "u^2*v/2 + v^3/6 + v/2")
ENNEPER_NEG = ("v^3/6 + u^2*v/2 - v/2", "u^2/2 + v^2/2", "u^3/6 + u*v^2/2 + v^3/6 + u/2")
ROTATIONAL = ("u", "cos(u)*cosh(v)", "cos(u)*sinh(v)")
LORENTZ_SPHERE = ("cosh(v)/cosh(u)", "tanh(u)", "sinh(v)/cosh(u)")
SADDLE = ("u", "u*v", "v")


def fixture_path(name):
    return str(DATA / f"{name}.surf")


def enneper(n=41, lo=-0.3, hi=0.3, base=(0.0, 0.0)):
    return SurfaceDef.from_strings(*ENNEPER_POS, u_range=(lo, hi), v_range=(lo, hi), shape=(n, n), base=base)


def enneper_closed_forms(u, v):
    """Closed forms for the positive-curvature Enneper surface in canonical parameters."""
    w = 1 - u**2 + v**2
    return {"E": w**2 / 4, "G": -(w**2) / 4, "K": 16 / w**4, "sqrtE": w / 2, "alpha": 4 / w**2}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def enneper41():
    return enneper(41)


@pytest.fixture(scope="session")
def enneper_file():
    return read_surface_file(fixture_path("enneper_pos"))
