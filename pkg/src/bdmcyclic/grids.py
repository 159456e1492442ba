"""Grids on the half-cylinder cosphere geometry and 1-d calculus helpers.

The base manifold is S^1_{x1} x [0, x2_max] with a fiber circle S^1_theta,
so sampled fields are complex arrays of shape (n_x1, n_x2, n_theta).
Periodic directions use Fourier (spectral) calculus; the normal direction
x2 uses fixed-order finite differences and an endpoint-corrected
(Gregory) quadrature rule of matching order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

# Endpoint-corrected trapezoid weights (Gregory rules); global error O(h^p).
_GREGORY_HEADS = {
    2: np.array([0.5]),
    4: np.array([3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0]),
    6: np.array([95.0 / 288.0, 317.0 / 240.0, 23.0 / 30.0,
                 793.0 / 720.0, 157.0 / 160.0]),
}


def fornberg_weights(x0, nodes, order):
    """Finite-difference weights at x0 for given nodes, up to `order`-th derivative.

    Classic Fornberg recursion; returns array (order+1, len(nodes)) whose
    m-th row gives the weights of the m-th derivative.
    """
    nodes = np.asarray(nodes, dtype=float)
    n = len(nodes)
    c = np.zeros((order + 1, n))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = nodes[0] - x0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = nodes[i] - x0
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c


def fd_derivative_matrix(n, h, order):
    """Dense first-derivative matrix on a uniform grid, truncation O(h^order).

    Centered stencils inside, one-sided near the endpoints; stencil width
    is order+1 points.
    """
    if n < order + 1:
        raise ValueError(f"need at least {order + 1} points for order {order}")
    width = order + 1
    D = np.zeros((n, n))
    for i in range(n):
        lo = min(max(i - width // 2, 0), n - width)
        idx = np.arange(lo, lo + width)
        D[i, idx] = fornberg_weights(float(i), idx.astype(float), 1)[1] / h
    return D


def gregory_weights(n, h, order):
    """Quadrature weights for n uniform samples spanning (n-1)*h, error O(h^order)."""
    if order not in _GREGORY_HEADS:
        raise ValueError(f"unsupported quadrature order {order}")
    head = _GREGORY_HEADS[order]
    if n < 2 * len(head) + 2:
        raise ValueError(f"need at least {2 * len(head) + 2} points for order {order}")
    w = np.ones(n)
    w[: len(head)] = head
    w[-len(head):] = head[::-1]
    return w * h


def boundary_chart(xi2, sign):
    """Map (xi2, sign) to the point (xi1, xi2)/|xi| of the fiber circle.

    Covers the sign>0 (resp. sign<0) half of the circle as xi2 runs over
    the real line; extends continuously to xi2 = +-inf -> (0, +-1).
    """
    xi2 = np.asarray(xi2, dtype=float)
    r = np.sqrt(xi2 * xi2 + 1.0)
    s = 1.0 if sign > 0 else -1.0
    return s / r, xi2 / r


def chart_angle(xi2, sign):
    """Fiber angle theta with (cos theta, sin theta) = boundary_chart(xi2, sign)."""
    c, s = boundary_chart(xi2, sign)
    return np.arctan2(s, c)


def cayley(xi2):
    """Circle coordinate w(xi2) = (xi2 + i)/(xi2 - i); |w| = 1 on the real line."""
    xi2 = np.asarray(xi2, dtype=complex)
    return (xi2 + 1j) / (xi2 - 1j)


def xi2_of_angle(phi):
    """Inverse of the circle coordinate: xi2 with w = e^{i phi}, phi in (0, 2pi)."""
    return 1.0 / np.tan(np.asarray(phi, dtype=float) / 2.0)


@dataclass(frozen=True)
class GridSet:
    """Discretization parameters shared by all sampled objects.

    n_x1, n_theta: periodic grids on circles of circumference 2*pi.
    n_x2: uniform inclusive grid on [0, x2_max].
    n_xi2: circle grid used for quadrature over the normal covariable line.
    hardy_n: truncation rank of the half-line (Hardy) basis.
    modes_k: mode cutoff K for stored circle symbols (2K+1 coefficients).
    fd_order: finite-difference/quadrature order in x2 (>= 4).
    interp_order: local interpolation order in x2 used by pullbacks.
    """

    n_x1: int = 64
    n_x2: int = 64
    x2_max: float = 1.0
    n_theta: int = 64
    n_xi2: int = 256
    hardy_n: int = 256
    modes_k: int = 32
    fd_order: int = 6
    interp_order: int = 8

    def __post_init__(self):
        for name in ("n_x1", "n_x2", "n_theta", "n_xi2"):
            v = getattr(self, name)
            if v < 4 or v % 2:
                raise ValueError(f"{name} must be even and >= 4, got {v}")
        if self.x2_max <= 0:
            raise ValueError("x2_max must be positive")
        if self.hardy_n < 4 or self.modes_k < 2:
            raise ValueError("hardy_n/modes_k too small")
        if self.fd_order < 4:
            raise ValueError("fd_order must be >= 4")

    # -- coordinates ---------------------------------------------------------

    @property
    def x1(self):
        return 2.0 * np.pi * np.arange(self.n_x1) / self.n_x1

    @property
    def x2(self):
        return np.linspace(0.0, self.x2_max, self.n_x2)

    @property
    def theta(self):
        return 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta

    @property
    def h_x2(self):
        return self.x2_max / (self.n_x2 - 1)

    def shape(self):
        return (self.n_x1, self.n_x2, self.n_theta)

    # -- cached operators ----------------------------------------------------

    @property
    def d_x2_matrix(self):
        return _fd_matrix_cached(self.n_x2, self.h_x2, self.fd_order)

    @property
    def w_x2(self):
        return _gregory_cached(self.n_x2, self.h_x2, min(self.fd_order, 6))

    def wavenumbers(self, n):
        return np.fft.fftfreq(n, d=1.0 / n)

    # -- calculus on sampled fields ------------------------------------------

    def differentiate(self, f, direction):
        """Partial derivative of a sampled field along x1, x2 or theta.

        Spectral in the periodic directions, finite differences in x2.
        """
        f = np.asarray(f)
        if f.shape != self.shape():
            raise ValueError(f"field shape {f.shape} != grid shape {self.shape()}")
        if direction == "x1":
            k = self.wavenumbers(self.n_x1).reshape(-1, 1, 1)
            return np.fft.ifft(1j * k * np.fft.fft(f, axis=0), axis=0)
        if direction == "theta":
            k = self.wavenumbers(self.n_theta).reshape(1, 1, -1)
            return np.fft.ifft(1j * k * np.fft.fft(f, axis=2), axis=2)
        if direction == "x2":
            return np.einsum("ij,ajb->aib", self.d_x2_matrix, f, optimize=True)
        raise ValueError(f"unknown direction {direction!r}")

    def integrate_volume(self, f):
        """Integral over S^1 x [0, x2_max] x S^1 with dx1 dx2 dtheta measure."""
        f = np.asarray(f)
        if f.shape != self.shape():
            raise ValueError(f"field shape {f.shape} != grid shape {self.shape()}")
        hx1 = 2.0 * np.pi / self.n_x1
        hth = 2.0 * np.pi / self.n_theta
        return hx1 * hth * np.einsum("ajb,j->", f, self.w_x2, optimize=True)

    def integrate_x1(self, samples):
        """Periodic trapezoid along the leading x1 axis."""
        return (2.0 * np.pi / self.n_x1) * np.sum(np.asarray(samples), axis=0)

    def shift_x1(self, f, shift, axis=0):
        """Evaluate the trig interpolant of f at x1 - shift (exact for resolved modes)."""
        f = np.asarray(f)
        n = f.shape[axis]
        steps = shift * n / (2.0 * np.pi)
        r = np.rint(steps)
        if abs(steps - r) < 1e-12:
            return np.roll(f, int(r) % n, axis=axis)
        k = self.wavenumbers(n)
        phase = np.exp(-1j * k * shift)
        shp = [1] * f.ndim
        shp[axis] = n
        return np.fft.ifft(np.fft.fft(f, axis=axis) * phase.reshape(shp), axis=axis)

    def theta_eval_matrix(self, angles):
        """Matrix E with (E f_samples) = trig interpolant of f at given angles.

        angles: array (m,); returns (m, n_theta) complex matrix.
        """
        n = self.n_theta
        k = self.wavenumbers(n)
        E = np.exp(1j * np.outer(np.asarray(angles), k))
        F = np.exp(-1j * np.outer(k, self.theta)) / n
        return E @ F

    def x2_interp_weights(self, points):
        """Local Lagrange interpolation of x2 samples at arbitrary points.

        Points outside [0, x2_max] are mapped to zero rows (fields are
        extended by zero above the cutoff). Returns (idx, wts) with shapes
        (m, q) suitable for `np.einsum("...j,mj->...m", f[idx], wts)` style
        gathering; see `x2_interpolate`.
        """
        pts = np.asarray(points, dtype=float)
        q = self.interp_order + 1
        n = self.n_x2
        h = self.h_x2
        pos = pts / h
        lo = np.clip(np.floor(pos).astype(int) - (q - 1) // 2, 0, n - q)
        idx = lo[..., None] + np.arange(q)
        wts = np.empty(idx.shape, dtype=float)
        for j in range(q):
            w = np.ones_like(pts)
            for m in range(q):
                if m == j:
                    continue
                w *= (pos - (lo + m)) / ((lo + j) - (lo + m))
            wts[..., j] = w
        inside = (pts >= -1e-12) & (pts <= self.x2_max * (1 + 1e-12))
        wts *= inside[..., None]
        return idx, wts

    def x2_interpolate(self, f, points, axis=1):
        """Interpolate f along the x2 axis at `points` (1-d array)."""
        idx, wts = self.x2_interp_weights(points)
        f = np.moveaxis(np.asarray(f), axis, -1)
        out = np.einsum("...mj,mj->...m", f[..., idx], wts, optimize=True)
        return np.moveaxis(out, -1, axis)

    # -- circle grid for the normal covariable -------------------------------

    @property
    def xi2_angles(self):
        """Midpoint circle grid avoiding the point at infinity (phi = 0)."""
        m = self.n_xi2
        return 2.0 * np.pi * (np.arange(m) + 0.5) / m

    @property
    def xi2_nodes(self):
        return xi2_of_angle(self.xi2_angles)

    @property
    def xi2_line_weights(self):
        """Weights turning circle samples into int_R f(xi2) dxi2.

        dxi2 = -(1/2) csc^2(phi/2) dphi; the sign is absorbed by summing
        with positive weights (integrand sampled against increasing xi2).
        """
        phi = self.xi2_angles
        return (np.pi / self.n_xi2) / np.sin(phi / 2.0) ** 2


@lru_cache(maxsize=32)
def _fd_matrix_cached(n, h, order):
    return fd_derivative_matrix(n, h, order)


@lru_cache(maxsize=32)
def _gregory_cached(n, h, order):
    return gregory_weights(n, h, order)
