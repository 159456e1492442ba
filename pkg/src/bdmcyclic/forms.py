"""Complex differential forms on the sampled half-cylinder cosphere.

Coordinates are ordered (x1, x2, theta); a degree-d form stores one sample
array per increasing d-tuple of coordinate indices. Orientation is fixed so
that dx1 ^ dx2 ^ dtheta is positive.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .grids import GridSet

_DIRS = ("x1", "x2", "theta")


def _merge_sign(a, b):
    """Sign of sorting the concatenation of two increasing index tuples.

    Returns (sign, merged) with sign 0 when an index repeats.
    """
    if set(a) & set(b):
        return 0, ()
    merged = a + b
    perm = sorted(range(len(merged)), key=lambda i: merged[i])
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign, tuple(sorted(merged))


class Form:
    """Sampled differential form of degree 0..3."""

    def __init__(self, grid: GridSet, degree: int, comps=None):
        if not 0 <= degree <= 3:
            raise ValueError(f"degree {degree} out of range")
        self.grid = grid
        self.degree = degree
        self.comps = {}
        keys = list(combinations(range(3), degree))
        if comps is not None:
            for k in comps:
                if tuple(k) not in keys:
                    raise ValueError(f"bad component {k} for degree {degree}")
            self.comps = {tuple(k): np.asarray(v, dtype=complex)
                          for k, v in comps.items()}
        for k, v in self.comps.items():
            if v.shape != grid.shape():
                raise ValueError(f"component {k} shape {v.shape} != {grid.shape()}")

    @classmethod
    def function(cls, grid, samples):
        return cls(grid, 0, {(): samples})

    def component(self, key):
        key = tuple(key)
        if key in self.comps:
            return self.comps[key]
        return np.zeros(self.grid.shape(), dtype=complex)

    def __add__(self, other):
        if self.degree != other.degree or self.grid is not other.grid:
            raise ValueError("form mismatch in addition")
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = out[k] + v if k in out else v
        return Form(self.grid, self.degree, out)

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def scaled(self, c):
        return Form(self.grid, self.degree,
                    {k: c * v for k, v in self.comps.items()})

    def norm_max(self):
        if not self.comps:
            return 0.0
        return max(np.max(np.abs(v)) for v in self.comps.values())


def wedge(f1: Form, f2: Form) -> Form:
    """Antisymmetrized product; degrees add."""
    if f1.degree + f2.degree > 3:
        raise ValueError("wedge degree overflow")
    grid = f1.grid
    out = {}
    for ka, va in f1.comps.items():
        for kb, vb in f2.comps.items():
            sign, key = _merge_sign(ka, kb)
            if sign == 0:
                continue
            term = sign * va * vb
            out[key] = out[key] + term if key in out else term
    return Form(grid, f1.degree + f2.degree, out)


def exterior_d(f: Form) -> Form:
    """Exterior differential; spectral in x1/theta, finite differences in x2."""
    if f.degree == 3:
        raise ValueError("exterior differential of a top-degree form")
    grid = f.grid
    out = {}
    for key, val in f.comps.items():
        for j in range(3):
            if j in key:
                continue
            sign = (-1) ** sum(1 for k in key if k < j)
            dval = grid.differentiate(val, _DIRS[j])
            tkey = tuple(sorted(key + (j,)))
            term = sign * dval
            out[tkey] = out[tkey] + term if tkey in out else term
    return Form(grid, f.degree + 1, out)


def integrate_top(f: Form) -> complex:
    """Integral of a degree-3 form over the full sampled cosphere space."""
    if f.degree != 3:
        raise ValueError(f"can only integrate degree-3 forms, got degree {f.degree}")
    return complex(f.grid.integrate_volume(f.component((0, 1, 2))))


def boundary_faces_integral(f: Form) -> complex:
    """Oriented integral over the two x2 faces of the (x1, theta) component.

    Matches integrate_top(exterior_d(.)): the x2 = 0 face enters with +,
    the x2 = x2_max face with -.
    """
    if f.degree != 2:
        raise ValueError("boundary integral needs a degree-2 form")
    grid = f.grid
    comp = f.component((0, 2))
    h = (2.0 * np.pi / grid.n_x1) * (2.0 * np.pi / grid.n_theta)
    return complex(h * (np.sum(comp[:, 0, :]) - np.sum(comp[:, -1, :])))


def integrate_boundary_cosphere(values) -> complex:
    """Sum over both xi1 components of the periodic trapezoid in x1.

    `values` is an array (n_x1, 2) sampling a function on the boundary
    cosphere S^1 x {+1, -1}; component 0 is xi1 = +1.
    """
    values = np.asarray(values)
    if values.ndim != 2 or values.shape[1] != 2:
        raise ValueError(f"expected shape (n_x1, 2), got {values.shape}")
    return complex((2.0 * np.pi / values.shape[0]) * np.sum(values))
