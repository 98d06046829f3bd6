"""Structured grids with nodal scalars and cell-centred gradients.

Scalars live on nodes, gradients on cells.  In 2D the cell gradient is the
gradient of the bilinear interpolant at the cell centre, i.e. the average of
the two forward differences along each axis.  `divergence_weights` is the
exact transpose of `gradient` (weighted by cell volume), so

    sum_i w_i phi_i == sum_cells <sigma, grad phi> * vol

for every nodal ``phi`` vanishing on the boundary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "Grid",
    "ScalarField",
    "VectorField",
    "DivergenceWeights",
    "gradient",
    "divergence_weights",
    "pairing",
    "write_field_csv",
    "read_field_csv",
]


@dataclass(frozen=True)
class Grid:
    """Tensor grid on an interval (dim 1) or a rectangle (dim 2)."""

    extents: tuple
    cells: tuple

    def __post_init__(self):
        ext = tuple((float(lo), float(hi)) for lo, hi in self.extents)
        cells = tuple(int(c) for c in self.cells)
        if len(ext) != len(cells) or len(ext) not in (1, 2):
            raise ValueError("grid must be 1D or 2D with one cell count per axis")
        if any(hi <= lo for lo, hi in ext) or any(c < 1 for c in cells):
            raise ValueError("grid extents must be increasing and cells positive")
        object.__setattr__(self, "extents", ext)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def interval(cls, low, high, cells):
        return cls(((low, high),), (cells,))

    @classmethod
    def rectangle(cls, xlim, ylim, cells):
        if np.isscalar(cells):
            cells = (cells, cells)
        return cls((tuple(xlim), tuple(ylim)), tuple(cells))

    @property
    def dim(self) -> int:
        return len(self.cells)

    @property
    def spacing(self) -> tuple:
        return tuple((hi - lo) / n for (lo, hi), n in zip(self.extents, self.cells))

    @property
    def node_shape(self) -> tuple:
        return tuple(n + 1 for n in self.cells)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def num_nodes(self) -> int:
        return int(np.prod(self.node_shape))

    @cached_property
    def axes(self) -> tuple:
        return tuple(np.linspace(lo, hi, n + 1) for (lo, hi), n in zip(self.extents, self.cells))

    @cached_property
    def coords(self) -> tuple:
        """Nodal coordinate arrays, ``indexing='ij'``."""
        return tuple(np.meshgrid(*self.axes, indexing="ij"))

    @cached_property
    def cell_centers(self) -> tuple:
        mids = [0.5 * (a[1:] + a[:-1]) for a in self.axes]
        return tuple(np.meshgrid(*mids, indexing="ij"))

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.node_shape, dtype=bool)
        for ax in range(self.dim):
            idx = [slice(None)] * self.dim
            idx[ax] = 0
            mask[tuple(idx)] = True
            idx[ax] = -1
            mask[tuple(idx)] = True
        mask.setflags(write=False)
        return mask

    @cached_property
    def interior_mask(self) -> np.ndarray:
        mask = ~self.boundary_mask
        mask.setflags(write=False)
        return mask

    def to_dict(self) -> dict:
        return {"dim": self.dim, "extents": [list(e) for e in self.extents],
                "cells": list(self.cells)}

    @classmethod
    def from_dict(cls, d) -> "Grid":
        return cls(tuple(tuple(e) for e in d["extents"]), tuple(d["cells"]))

    def nodal(self, func) -> "ScalarField":
        """Sample ``func(*coords)`` at the nodes."""
        vals = np.broadcast_to(np.asarray(func(*self.coords), dtype=float), self.node_shape)
        return ScalarField(self, np.array(vals))


@dataclass(frozen=True)
class ScalarField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.node_shape:
            raise ValueError(f"scalar field shape {vals.shape} != {self.grid.node_shape}")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class VectorField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        shape = self.grid.cells + (self.grid.dim,)
        if vals.shape != shape:
            raise ValueError(f"vector field shape {vals.shape} != {shape}")
        object.__setattr__(self, "values", vals)

    def __neg__(self):
        return VectorField(self.grid, -self.values)


@dataclass(frozen=True)
class DivergenceWeights:
    """Nodal weights of the measure ``-div sigma`` tested on hat functions.

    Boundary entries are zero; only interior nodes carry weights.
    """

    grid: Grid
    weights: np.ndarray

    @property
    def interior(self) -> np.ndarray:
        return self.weights[self.grid.interior_mask]

    def min_interior(self) -> float:
        return float(np.min(self.interior)) if self.interior.size else 0.0

    def scale(self) -> float:
        return float(np.max(np.abs(self.weights))) if self.weights.size else 0.0


# -- array kernels (used directly by the solver) ------------------------------


def grad_array(grid: Grid, u: np.ndarray) -> np.ndarray:
    if grid.dim == 1:
        (h,) = grid.spacing
        return ((u[1:] - u[:-1]) / h)[:, None]
    hx, hy = grid.spacing
    dx = u[1:, :] - u[:-1, :]
    dy = u[:, 1:] - u[:, :-1]
    gx = (dx[:, :-1] + dx[:, 1:]) / (2.0 * hx)
    gy = (dy[:-1, :] + dy[1:, :]) / (2.0 * hy)
    return np.stack([gx, gy], axis=-1)


def adjoint_array(grid: Grid, sigma: np.ndarray) -> np.ndarray:
    """Transpose of `grad_array` applied to ``sigma * vol``; boundary zeroed."""
    vol = grid.cell_volume
    w = np.zeros(grid.node_shape)
    if grid.dim == 1:
        (h,) = grid.spacing
        a = sigma[:, 0] * (vol / h)
        w[1:] += a
        w[:-1] -= a
    else:
        hx, hy = grid.spacing
        a = sigma[..., 0] * (vol / (2.0 * hx))
        b = sigma[..., 1] * (vol / (2.0 * hy))
        w[1:, :-1] += a
        w[1:, 1:] += a
        w[:-1, :-1] -= a
        w[:-1, 1:] -= a
        w[:-1, 1:] += b
        w[1:, 1:] += b
        w[:-1, :-1] -= b
        w[1:, :-1] -= b
    w[grid.boundary_mask] = 0.0
    return w


# -- public operations --------------------------------------------------------


def gradient(u: ScalarField) -> VectorField:
    """Cell-centred gradient; exact for affine ``u``."""
    return VectorField(u.grid, grad_array(u.grid, u.values))


def divergence_weights(sigma: VectorField) -> DivergenceWeights:
    """``w_i = sum_cells <sigma, grad hat_i> vol`` at interior nodes."""
    return DivergenceWeights(sigma.grid, adjoint_array(sigma.grid, sigma.values))


def pairing(sigma: VectorField, U: ScalarField, u0: ScalarField) -> float:
    """Discrete ``[[sigma, U]]_{u0} = int (U - u0) d(-div sigma) + int <sigma, Du0>``."""
    grid = sigma.grid
    w = adjoint_array(grid, sigma.values)
    first = float(np.sum(w * (U.values - u0.values)))
    second = float(np.sum(sigma.values * grad_array(grid, u0.values))) * grid.cell_volume
    return first + second


# -- CSV I/O ------------------------------------------------------------------


def write_field_csv(path, field) -> None:
    """Write a field as CSV with a one-line JSON header (``# {...}``)."""
    grid = field.grid
    if isinstance(field, ScalarField):
        kind, vals, pts = "scalar", field.values.reshape(-1, 1), grid.coords
    elif isinstance(field, DivergenceWeights):
        kind, vals, pts = "weights", field.weights.reshape(-1, 1), grid.coords
    elif isinstance(field, VectorField):
        kind, pts = "vector", grid.cell_centers
        vals = field.values.reshape(-1, grid.dim)
    else:
        raise TypeError(f"cannot write {type(field).__name__}")
    xyz = np.column_stack([p.ravel() for p in pts])
    idx = np.arange(len(xyz))[:, None]
    names = ["index"] + ["x", "y"][: grid.dim]
    names += ["value"] if vals.shape[1] == 1 else ["sx", "sy"][: grid.dim]
    header = json.dumps({"kind": kind, "grid": grid.to_dict()}, sort_keys=True)
    with open(path, "w") as fh:
        fh.write(f"# {header}\n")
        fh.write(",".join(names) + "\n")
        for i, p, v in zip(idx[:, 0], xyz, vals):
            fh.write(",".join([str(i)] + [f"{x:.15g}" for x in p] + [f"{x:.15g}" for x in v]))
            fh.write("\n")


def read_field_csv(path):
    """Inverse of `write_field_csv`."""
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("#"):
            raise ValueError(f"{path}: missing JSON header")
        meta = json.loads(first[1:])
        fh.readline()
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    grid = Grid.from_dict(meta["grid"])
    kind = meta["kind"]
    if kind == "vector":
        vals = data[:, 1 + grid.dim:].reshape(grid.cells + (grid.dim,))
        return VectorField(grid, vals)
    vals = data[:, -1].reshape(grid.node_shape)
    if kind == "weights":
        return DivergenceWeights(grid, vals)
    return ScalarField(grid, vals)
