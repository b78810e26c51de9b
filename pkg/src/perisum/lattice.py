"""Unit-covolume Bravais lattices, their duals, and shell enumeration.

A lattice is the set {V k : k integer vector} for a nonsingular d x d basis
matrix V whose columns are the generators.  Construction rescales any input
basis so |det V| = 1; the dual basis is inv(V).T, whose columns generate the
dual lattice (every dual generator has integer products with every direct
generator).
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import DimensionMismatch, SingularBasis

__all__ = [
    "Lattice",
    "ShellIterator",
    "lattice_from_basis",
    "lattice_preset",
    "enumerate_shells",
    "reduce_to_cell",
    "min_dual_norm",
    "PRESETS",
]

# fractional coordinates within this distance of 1.0 snap to 0.0 so that
# reduction into the half-open cell is idempotent
_SNAP = 1e-15

# raw (pre-normalization) bases for the named presets; columns are generators
PRESETS = {
    "Z1": [[1.0]],
    "Z2": [[1.0, 0.0], [0.0, 1.0]],
    "Z3": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    # hexagonal (equilateral triangular): columns (1, 0) and (1/2, sqrt(3)/2)
    "hex": [[1.0, 0.5], [0.0, math.sqrt(3.0) / 2.0]],
    # fcc primitive cell: columns (0,1/2,1/2), (1/2,0,1/2), (1/2,1/2,0)
    "fcc-like": [[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]],
}


class Lattice:
    """Immutable unit-covolume lattice with cached dual and inverse bases."""

    def __init__(self, basis, scale_applied=1.0):
        basis = np.array(basis, dtype=float)
        if basis.ndim != 2 or basis.shape[0] != basis.shape[1]:
            raise DimensionMismatch("basis must be a square matrix")
        det = np.linalg.det(basis)
        if abs(abs(det) - 1.0) > 1e-12:
            raise ValueError("Lattice requires a unit-covolume basis; "
                             "use lattice_from_basis to normalize")
        self.basis = basis
        self.basis.setflags(write=False)
        self.dimension = basis.shape[0]
        self.covolume = abs(det)
        self.scale_applied = float(scale_applied)
        self._inv_basis = np.linalg.inv(basis)
        self._inv_basis.setflags(write=False)
        self.dual_basis = self._inv_basis.T.copy()
        self.dual_basis.setflags(write=False)

    # -- coordinates -------------------------------------------------------

    def to_fractional(self, x):
        """Cartesian -> fractional; works on points or (..., d) batches."""
        x = np.asarray(x, dtype=float)
        return x @ self._inv_basis.T

    def to_cartesian(self, f):
        f = np.asarray(f, dtype=float)
        return f @ self.basis.T

    def reduce_frac(self, f):
        """Reduce fractional coordinates into [0, 1)^d.

        Exactly idempotent: a second application returns the input bitwise.
        """
        f = np.asarray(f, dtype=float)
        g = f - np.floor(f)
        g = np.where(g >= 1.0 - _SNAP, 0.0, g)
        return g

    @property
    def column_norms(self):
        return np.linalg.norm(self.basis, axis=0)

    @property
    def half_cell_diameter(self):
        """Upper bound on |V f| for f in [-1/2, 1/2]^d (min-imaged points)."""
        return 0.5 * float(np.sum(self.column_norms))

    # -- serialization -----------------------------------------------------

    def to_json_dict(self):
        return {
            "dim": self.dimension,
            "basis": [float(v) for v in self.basis.reshape(-1)],
            "scale_applied": self.scale_applied,
        }

    @classmethod
    def from_json_dict(cls, obj):
        d = int(obj["dim"])
        basis = np.asarray(obj["basis"], dtype=float).reshape(d, d)
        return cls(basis, scale_applied=float(obj.get("scale_applied", 1.0)))

    def to_json(self):
        return json.dumps(self.to_json_dict())

    def __repr__(self):
        return f"Lattice(d={self.dimension}, basis={self.basis.tolist()})"


def lattice_from_basis(raw_basis):
    """Build a Lattice from any nonsingular square basis.

    The basis is rescaled by |det|^(-1/d) (a positive factor) so the
    co-volume is exactly 1; the applied factor is recorded on the result.
    """
    raw = np.asarray(raw_basis, dtype=float)
    if raw.ndim != 2 or raw.shape[0] != raw.shape[1]:
        raise DimensionMismatch(f"basis must be square, got shape {raw.shape}")
    det = np.linalg.det(raw)
    if not np.isfinite(det) or abs(det) < 1e-300:
        raise SingularBasis("basis determinant is zero or not finite")
    d = raw.shape[0]
    scale = abs(det) ** (-1.0 / d)
    return Lattice(raw * scale, scale_applied=scale)


def lattice_preset(name):
    """One of the named presets: Z1, Z2, Z3, hex, fcc-like."""
    if name not in PRESETS:
        raise KeyError(f"unknown lattice preset {name!r}; "
                       f"choose from {sorted(PRESETS)}")
    return lattice_from_basis(PRESETS[name])


class ShellIterator:
    """Lattice vectors with |v| <= max_radius, sorted by (norm, integer
    coordinates lexicographically).

    The ordering is a fixed total order, so the enumeration for a smaller
    radius is always a prefix of the enumeration for a larger one.
    Materializes the vectors up front; iterate or use the arrays directly.
    """

    def __init__(self, lattice, which, max_radius, include_origin=True):
        if max_radius < 0:
            raise ValueError("max_radius must be >= 0")
        self.lattice = lattice
        self.which = which
        self.max_radius = float(max_radius)
        self.include_origin = include_origin
        basis = lattice.basis if which == "direct" else lattice.dual_basis
        if which not in ("direct", "dual"):
            raise ValueError("which must be 'direct' or 'dual'")
        d = lattice.dimension
        inv = np.linalg.inv(basis)
        row_norms = np.linalg.norm(inv, axis=1)
        bound = np.ceil(row_norms * self.max_radius + 1e-9).astype(int)
        axes = [np.arange(-b, b + 1) for b in bound]
        grid = np.meshgrid(*axes, indexing="ij")
        k = np.stack([g.reshape(-1) for g in grid], axis=1)
        v = k @ basis.T
        norms = np.linalg.norm(v, axis=1)
        keep = norms <= self.max_radius * (1.0 + 1e-12) + 1e-300
        if not include_origin:
            keep &= np.any(k != 0, axis=1)
        k, v, norms = k[keep], v[keep], norms[keep]
        order = np.lexsort(tuple(k[:, j] for j in range(d - 1, -1, -1)) + (norms,))
        self.integer_coords = k[order]
        self.vectors = v[order]
        self.norms = norms[order]

    def __len__(self):
        return self.vectors.shape[0]

    def __iter__(self):
        return iter(self.vectors)

    def half(self):
        """Canonical half of the sign pairs +-v: keeps the vector whose first
        nonzero integer coordinate is positive.  Drops the origin."""
        k = self.integer_coords
        nz = k != 0
        first = np.argmax(nz, axis=1)
        vals = k[np.arange(k.shape[0]), first]
        keep = nz.any(axis=1) & (vals > 0)
        return self.vectors[keep], self.norms[keep], self.integer_coords[keep]


def enumerate_shells(lat, which, max_radius, include_origin=True):
    """Shell-ordered enumeration of direct or dual lattice vectors."""
    return ShellIterator(lat, which, max_radius, include_origin)


def reduce_to_cell(lat, x):
    """Translate x by a lattice vector into the half-open fundamental cell."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("point must be finite")
    return lat.to_cartesian(lat.reduce_frac(lat.to_fractional(x)))


def min_dual_norm(lat):
    """Length |w0| of a shortest nonzero dual lattice vector.

    The shortest dual generator is itself a candidate, so scanning the
    integer box of radius min(dual column norms) is provably sufficient.
    """
    bound = float(np.min(np.linalg.norm(lat.dual_basis, axis=0)))
    shells = enumerate_shells(lat, "dual", bound, include_origin=False)
    return float(shells.norms[0])
