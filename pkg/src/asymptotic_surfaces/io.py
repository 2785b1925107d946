"""File formats: surface files, grid CSVs, OBJ meshes and JSON reports.

Grid CSVs always start with ``u,v`` followed by the field columns; rows run
with ``v`` in the outer loop and ``u`` in the inner loop, both ascending.
Floats are written with 17 significant digits so files round-trip exactly.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from pathlib import Path

import numpy as np
import tomli

from .errors import SurfaceError
from .grid import Grid
from .invariants import CSV_COLUMNS, InvariantField
from .surface import SurfaceDef

log = logging.getLogger(__name__)

DEFAULT_GRID = (101, 101)
KH_COLUMNS = ("K", "H")
OMEGA_COLUMNS = ("omega",)


def fmt(x) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# surface files


def _pair(value, name):
    try:
        a, b = (float(t) for t in value)
    except (TypeError, ValueError):
        raise SurfaceError(f"{name} must be a pair of numbers", key=name) from None
    return a, b


def parse_surface_text(text: str, source="<string>") -> SurfaceDef:
    """Parse the TOML surface format.

    ``[surface]`` holds the coordinate expressions ``x``, ``y``, ``z`` (``z`` is
    the time-like coordinate), ``[domain]`` the ranges ``u``, ``v`` and
    ``grid = [Nu, Nv]``, and ``[base]`` the keys ``u0``, ``v0``.
    """
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise SurfaceError(f"{source}: {exc}") from None
    surf = doc.get("surface")
    if not isinstance(surf, dict):
        raise SurfaceError(f"{source}: missing [surface] section", section="surface")
    coords = []
    for key in ("x", "y", "z"):
        if key not in surf:
            raise SurfaceError(f"{source}: missing coordinate {key!r} in [surface]", key=key)
        if not isinstance(surf[key], str):
            raise SurfaceError(f"{source}: coordinate {key!r} must be a quoted expression", key=key)
        coords.append(surf[key])
    dom = doc.get("domain")
    if dom is None:
        log.warning("%s: no [domain] section, using [-1,1]^2 on a %dx%d grid", source, *DEFAULT_GRID)
        dom = {}
    u_range = _pair(dom.get("u", (-1.0, 1.0)), "domain.u")
    v_range = _pair(dom.get("v", (-1.0, 1.0)), "domain.v")
    shape = dom.get("grid", DEFAULT_GRID)
    try:
        shape = tuple(int(n) for n in shape)
    except (TypeError, ValueError):
        raise SurfaceError("domain.grid must be two integers", key="domain.grid") from None
    base = None
    if "base" in doc:
        b = doc["base"]
        if "u0" not in b or "v0" not in b:
            raise SurfaceError(f"{source}: [base] needs both u0 and v0", section="base")
        base = (float(b["u0"]), float(b["v0"]))
    try:
        return SurfaceDef.from_strings(*coords, u_range=u_range, v_range=v_range, shape=shape, base=base)
    except ValueError as exc:
        raise SurfaceError(f"{source}: {exc}") from None


def read_surface_file(path) -> SurfaceDef:
    path = Path(path)
    return parse_surface_text(path.read_text(), source=str(path))


def surface_to_text(s: SurfaceDef) -> str:
    x, y, z = s.texts
    return (
        "[surface]\n"
        f"x = {json.dumps(x)}\ny = {json.dumps(y)}\nz = {json.dumps(z)}\n\n"
        "[domain]\n"
        f"u = [{fmt(s.u_range[0])}, {fmt(s.u_range[1])}]\n"
        f"v = [{fmt(s.v_range[0])}, {fmt(s.v_range[1])}]\n"
        f"grid = [{s.shape[0]}, {s.shape[1]}]\n\n"
        "[base]\n"
        f"u0 = {fmt(s.base[0])}\nv0 = {fmt(s.base[1])}\n"
    )


# ---------------------------------------------------------------------------
# grid CSVs


def write_grid_csv(path, grid: Grid, fields: dict):
    """Write ``fields`` (name -> ``(Nu, Nv)`` array) in the order given."""
    names = list(fields)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["u", "v"] + names)
        arrays = [np.asarray(fields[n], dtype=float) for n in names]
        for j, v in enumerate(grid.v):
            for i, u in enumerate(grid.u):
                w.writerow([fmt(u), fmt(v)] + [fmt(arr[i, j]) for arr in arrays])


def read_grid_csv(path, columns=None):
    """Read a grid CSV; returns ``(grid, {name: array})``.

    ``columns`` lists required field names. The rows must form a full
    rectangular grid in the standard order.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SurfaceError(f"{path}: empty CSV file")
    header = [h.strip() for h in rows[0]]
    if header[:2] != ["u", "v"]:
        raise SurfaceError(f"{path}: header must start with u,v", header=header)
    missing = [c for c in (columns or ()) if c not in header]
    if missing:
        raise SurfaceError(f"{path}: missing column(s) {', '.join(missing)}", missing=missing)
    try:
        data = np.array([[float(t) for t in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise SurfaceError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[1] != len(header):
        raise SurfaceError(f"{path}: ragged rows")
    u = np.unique(data[:, 0])
    v = np.unique(data[:, 1])
    if data.shape[0] != u.size * v.size:
        raise SurfaceError(f"{path}: rows do not form a rectangular grid")
    uu = data[:, 0].reshape(v.size, u.size)
    vv = data[:, 1].reshape(v.size, u.size)
    if not (np.all(uu == u[None, :]) and np.all(vv == v[:, None])):
        raise SurfaceError(f"{path}: rows are not in v-outer, u-inner order")
    fields = {name: data[:, k].reshape(v.size, u.size).T.copy() for k, name in enumerate(header) if k >= 2}
    return Grid(u, v), fields


def write_invariants_csv(path, fld: InvariantField):
    write_grid_csv(path, fld.grid, {c: getattr(fld, c) for c in CSV_COLUMNS})


def read_invariants_csv(path) -> InvariantField:
    grid, fields = read_grid_csv(path, ("a", "alpha"))
    nan = np.full(grid.shape, np.nan)
    kw = {c: fields.get(c, nan) for c in CSV_COLUMNS}
    return InvariantField(grid, **kw)


def write_kh_csv(path, grid: Grid, K, H):
    write_grid_csv(path, grid, {"K": K, "H": H})


def read_kh_csv(path):
    grid, fields = read_grid_csv(path, KH_COLUMNS)
    return grid, fields["K"], fields["H"]


def write_omega_csv(path, grid: Grid, omega):
    write_grid_csv(path, grid, {"omega": omega})


def read_omega_csv(path):
    grid, fields = read_grid_csv(path, OMEGA_COLUMNS)
    return grid, fields["omega"]


def write_reparam_csv(prefix, rmap):
    """``PREFIX.u.csv`` with columns ``u,ubar`` and ``PREFIX.v.csv`` with ``v,vbar``."""
    for name, x, xbar in (("u", rmap.u, rmap.ubar), ("v", rmap.v, rmap.vbar)):
        with open(f"{prefix}.{name}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([name, name + "bar"])
            for a, b in zip(x, xbar):
                w.writerow([fmt(a), fmt(b)])


# ---------------------------------------------------------------------------
# meshes and frames


def write_obj(path, z):
    """OBJ mesh of a ``(Nu, Nv, 3)`` patch.

    Vertices follow CSV order (``v`` outer). Each cell gives the triangles
    ``(i,j) (i+1,j) (i+1,j+1)`` and ``(i,j) (i+1,j+1) (i,j+1)``, counter-clockwise
    in ``(u, v)``, which matches the orientation ``det[z_u, z_v, n] > 0``.
    """
    z = np.asarray(z, dtype=float)
    nu, nv = z.shape[:2]

    def idx(i, j):
        return j * nu + i + 1

    with open(path, "w") as fh:
        fh.write(f"# grid {nu} {nv}\n")
        for j in range(nv):
            for i in range(nu):
                fh.write("v " + " ".join(fmt(c) for c in z[i, j]) + "\n")
        for j in range(nv - 1):
            for i in range(nu - 1):
                fh.write(f"f {idx(i, j)} {idx(i + 1, j)} {idx(i + 1, j + 1)}\n")
                fh.write(f"f {idx(i, j)} {idx(i + 1, j + 1)} {idx(i, j + 1)}\n")


def read_obj(path):
    """Vertices of an OBJ written by :func:`write_obj`, as ``(Nu, Nv, 3)``."""
    shape = None
    verts = []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "#" and len(parts) == 4 and parts[1] == "grid":
                shape = (int(parts[2]), int(parts[3]))
            elif parts[0] == "v":
                verts.append([float(t) for t in parts[1:4]])
    if shape is None:
        raise SurfaceError(f"{path}: missing '# grid Nu Nv' header")
    verts = np.array(verts, dtype=float)
    if verts.shape != (shape[0] * shape[1], 3):
        raise SurfaceError(f"{path}: vertex count does not match the grid header")
    return verts.reshape(shape[1], shape[0], 3).transpose(1, 0, 2).copy()


def write_frame_json(path, base_index, base_point, frame):
    data = {
        "base_index": [int(base_index[0]), int(base_index[1])],
        "base_point": [float(t) for t in base_point],
        "frame": [[float(t) for t in row] for row in np.asarray(frame)],
    }
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


def read_frame_json(path):
    try:
        data = json.loads(Path(path).read_text())
        return tuple(data["base_index"]), np.array(data["base_point"], float), np.array(data["frame"], float)
    except (KeyError, ValueError, TypeError) as exc:
        raise SurfaceError(f"{path}: malformed frame file ({exc})") from None


# ---------------------------------------------------------------------------
# JSON reports


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, Path):
        return str(obj)
    return obj


def report_json(report: dict) -> str:
    """Deterministic JSON text; non-finite floats become ``null``."""
    return json.dumps(_clean(report), indent=2, sort_keys=True, allow_nan=False) + "\n"
