"""CSV and NPZ storage of trajectories, grid sections and residual tables."""
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from geomech.errors import ModelFileError, ShapeMismatchError
from geomech.field.residual import PhaseSection

log = logging.getLogger(__name__)

METADATA = ("m", "k", "dims", "origin", "spacing")


def write_trajectory_csv(trajectory, path):
    """Write ``t, x1..xn, p1..pn`` rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    trajectory.to_frame().to_csv(path, index=False, float_format="%.17g")
    log.info("trajectory written to %s", path)
    return path


def read_trajectory_csv(path):
    frame = pd.read_csv(path)
    if frame.columns[0] != "t" or (len(frame.columns) - 1) % 2:
        raise ShapeMismatchError(f"{path}: expected columns t, x1..xn, p1..pn")
    return frame


def _section_columns(m, k, with_momenta):
    columns = [f"x{i + 1}" for i in range(m)] + [f"y{a + 1}" for a in range(k)]
    if with_momenta:
        columns += [f"p{i + 1}_{a + 1}" for i in range(m) for a in range(k)]
    return columns


def write_section_csv(section, path):
    """Write a grid section with ``#``-comment metadata; nodes in row-major order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    m, k, nodes = section.m, section.k, int(np.prod(section.dims))
    blocks = [section.coordinates().reshape(nodes, m), section.y.reshape(nodes, k)]
    if section.p is not None:
        blocks.append(section.p.reshape(nodes, m * k))
    frame = pd.DataFrame(np.hstack(blocks), columns=_section_columns(m, k, section.p is not None))
    meta = {"m": m, "k": k, "dims": " ".join(map(str, section.dims)),
            "origin": " ".join(repr(float(v)) for v in section.origin),
            "spacing": " ".join(repr(float(v)) for v in section.spacing)}
    with open(path, "w", encoding="utf-8") as fd:
        for key in METADATA:
            fd.write(f"# {key}: {meta[key]}\n")
        frame.to_csv(fd, index=False, float_format="%.17g")
    return path


def _read_metadata(path):
    meta = {}
    with open(path, encoding="utf-8") as fd:
        for line in fd:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.split()
    missing = [key for key in METADATA if key not in meta]
    if missing:
        raise ModelFileError(f"{path}: missing metadata {', '.join(missing)}", 1)
    return meta


def read_section_csv(path):
    """Read a grid section written by ``write_section_csv``.

    Raises:
        ShapeMismatchError: If the rows or node coordinates do not match the metadata.
    """
    meta = _read_metadata(path)
    m, k = int(meta["m"][0]), int(meta["k"][0])
    dims = tuple(int(d) for d in meta["dims"])
    origin = np.array(meta["origin"], dtype=float)
    spacing = np.array(meta["spacing"], dtype=float)
    if len(dims) != m or origin.size != m or spacing.size != m:
        raise ShapeMismatchError(f"{path}: metadata does not describe an {m}-dimensional grid")
    frame = pd.read_csv(path, comment="#")
    if len(frame) != int(np.prod(dims)):
        raise ShapeMismatchError(f"{path}: {len(frame)} rows for a grid of {dims}")
    with_momenta = "p1_1" in frame.columns
    columns = _section_columns(m, k, with_momenta)
    absent = [c for c in columns if c not in frame.columns]
    if absent:
        raise ShapeMismatchError(f"{path}: missing columns {', '.join(absent)}")
    section = PhaseSection(origin, spacing, frame[columns[m:m + k]].to_numpy().reshape(dims + (k,)),
                           frame[columns[m + k:]].to_numpy().reshape(dims + (m, k)) if with_momenta else None)
    coords = frame[columns[:m]].to_numpy().reshape(dims + (m,))
    if not np.allclose(coords, section.coordinates(), atol=1e-9 * max(1.0, float(np.max(np.abs(coords))))):
        raise ShapeMismatchError(f"{path}: node coordinates do not follow origin and spacing")
    return section


def write_section_npz(section, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    arrays = {"dims": np.asarray(section.dims, dtype="<i8"), "origin": section.origin.astype("<f8"),
              "spacing": section.spacing.astype("<f8"), "y": section.y.astype("<f8")}
    if section.p is not None:
        arrays["p"] = section.p.astype("<f8")
    np.savez(path, **arrays)
    return path


def read_section_npz(path):
    with np.load(path) as data:
        missing = [key for key in ("dims", "origin", "spacing", "y") if key not in data]
        if missing:
            raise ShapeMismatchError(f"{path}: missing arrays {', '.join(missing)}")
        dims = tuple(int(d) for d in data["dims"])
        y = data["y"]
        if tuple(y.shape[:len(dims)]) != dims:
            raise ShapeMismatchError(f"{path}: y has shape {y.shape}, dims are {dims}")
        p = data["p"] if "p" in data else None
        return PhaseSection(data["origin"], data["spacing"], y, p)


def read_section(path):
    """Read a grid section from ``.csv`` or ``.npz`` by suffix."""
    path = Path(path)
    if not path.is_file():
        raise ModelFileError(f"grid data {path} does not exist")
    if path.suffix == ".npz":
        return read_section_npz(path)
    return read_section_csv(path)


def write_residual_csv(report, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    report.to_frame().to_csv(path, index=False, float_format="%.17g")
    log.info("per-node residuals written to %s", path)
    return path
