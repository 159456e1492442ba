"""Coefficient fields over the boundary cosphere S^1_{x1} x {+1, -1}.

Circle symbols are stored by Cayley-circle Fourier coefficients (powers of
w = (xi2+i)/(xi2-i)); compact corrections are kept in factored low-rank
form G = U V^H so that products, traces and x1-derivatives stay cheap at
large Hardy rank. Arrays carry leading axes (n_x1, 2) for the base point,
with component index 0 <-> xi1 = +1.
"""

from __future__ import annotations

import numpy as np

from .grids import GridSet


def _dx1(arr, n_x1):
    k = np.fft.fftfreq(n_x1, d=1.0 / n_x1)
    shp = [1] * arr.ndim
    shp[0] = n_x1
    return np.fft.ifft(1j * k.reshape(shp) * np.fft.fft(arr, axis=0), axis=0)


class CircleField:
    """Laurent coefficients sigma_m(x1, s) for m = kmin .. kmin+L-1."""

    def __init__(self, grid: GridSet, coeffs, kmin: int):
        self.grid = grid
        self.coeffs = np.asarray(coeffs, dtype=complex)
        if self.coeffs.ndim != 3 or self.coeffs.shape[:2] != (grid.n_x1, 2):
            raise ValueError(f"bad circle field shape {self.coeffs.shape}")
        self.kmin = int(kmin)

    @classmethod
    def zero(cls, grid):
        return cls(grid, np.zeros((grid.n_x1, 2, 1)), 0)

    @classmethod
    def constant(cls, grid, values):
        c = np.empty((grid.n_x1, 2, 1), dtype=complex)
        c[..., 0] = values
        return cls(grid, c, 0)

    @property
    def kmax(self):
        return self.kmin + self.coeffs.shape[2] - 1

    def mode(self, m):
        i = m - self.kmin
        if 0 <= i < self.coeffs.shape[2]:
            return self.coeffs[..., i]
        return np.zeros((self.grid.n_x1, 2), dtype=complex)

    def norm_max(self):
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def add(self, other, c=1.0):
        kmin = min(self.kmin, other.kmin)
        kmax = max(self.kmax, other.kmax)
        out = np.zeros((self.grid.n_x1, 2, kmax - kmin + 1), dtype=complex)
        out[..., self.kmin - kmin: self.kmin - kmin + self.coeffs.shape[2]] += self.coeffs
        out[..., other.kmin - kmin: other.kmin - kmin + other.coeffs.shape[2]] += c * other.coeffs
        return CircleField(self.grid, out, kmin)

    def scale(self, c):
        return CircleField(self.grid, c * self.coeffs, self.kmin)

    def scale_field(self, vals):
        """Multiply by a scalar field over (n_x1, 2)."""
        return CircleField(self.grid, vals[..., None] * self.coeffs, self.kmin)

    def mul(self, other):
        """Pointwise symbol product: coefficient convolution, support adds."""
        a, b = self.coeffs, other.coeffs
        la, lb = a.shape[2], b.shape[2]
        out = np.zeros((self.grid.n_x1, 2, la + lb - 1), dtype=complex)
        if la >= lb:
            for i in range(lb):
                out[..., i:i + la] += a * b[..., i:i + 1]
        else:
            for i in range(la):
                out[..., i:i + lb] += b * a[..., i:i + 1]
        return CircleField(self.grid, out, self.kmin + other.kmin)

    def dx1(self):
        return CircleField(self.grid, _dx1(self.coeffs, self.grid.n_x1), self.kmin)

    def deriv_xi2(self):
        """d sigma / d xi2 as a circle field.

        With w = e^{i phi} and xi2 = cot(phi/2), d phi/d xi2 = cos(phi) - 1,
        a Laurent polynomial; the derivative stays band-limited (band + 1).
        """
        m = self.kmin + np.arange(self.coeffs.shape[2])
        dphi = 1j * m * self.coeffs
        out = np.zeros((self.grid.n_x1, 2, self.coeffs.shape[2] + 2), dtype=complex)
        out[..., 1:-1] -= dphi
        out[..., 2:] += 0.5 * dphi
        out[..., :-2] += 0.5 * dphi
        return CircleField(self.grid, out, self.kmin - 1)

    def reflect(self):
        """Coefficients of sigma(1/w) (reversed mode order)."""
        return CircleField(self.grid, self.coeffs[..., ::-1], -self.kmax)

    def truncate(self, k=None, tol=1e-14):
        """Drop trailing coefficients below tol (relative), cap band at k."""
        c = self.coeffs
        scale = max(np.max(np.abs(c)), 1e-300)
        keep = np.nonzero(np.max(np.abs(c), axis=(0, 1)) > tol * scale)[0]
        if len(keep) == 0:
            return CircleField.zero(self.grid)
        lo, hi = keep[0], keep[-1]
        kmin = self.kmin + lo
        c = c[..., lo:hi + 1]
        if k is not None:
            lo2 = max(0, -k - kmin)
            hi2 = min(c.shape[2], k - kmin + 1)
            c = c[..., lo2:hi2]
            kmin += lo2
        return CircleField(self.grid, c, kmin)

    def eval_angles(self, phi, component):
        """Values at circle angles for one component (array (n_x1, len(phi)))."""
        m = self.kmin + np.arange(self.coeffs.shape[2])
        E = np.exp(1j * np.outer(np.asarray(phi), m))
        return np.einsum("xm,pm->xp", self.coeffs[:, component, :], E, optimize=True)

    def shift_x1(self, shift):
        return CircleField(self.grid, self.grid.shift_x1(self.coeffs, shift), self.kmin)

    def dilate(self, lam):
        """Coefficients of sigma(lam * xi2); exact circle-grid resampling."""
        from .hardy import dilate_modes
        if np.isscalar(lam) or np.asarray(lam).ndim == 0:
            lams = [(float(lam), slice(None))]
        else:
            raise ValueError("use dilate_per_x1 for x1-dependent dilations")
        n_ang = max(4 * (abs(self.kmin) + abs(self.kmax)) + 64, 256)
        outs = []
        for lv, _ in lams:
            mats = []
            for s in (0, 1):
                block = []
                for ix in range(self.grid.n_x1):
                    m, km = dilate_modes(self.coeffs[ix, s], self.kmin, lv, n_ang)
                    block.append((m, km))
                mats.append(block)
            kmin = min(km for blk in mats for (_, km) in blk)
            kmax = max(km + len(m) - 1 for blk in mats for (m, km) in blk)
            out = np.zeros((self.grid.n_x1, 2, kmax - kmin + 1), dtype=complex)
            for s in (0, 1):
                for ix in range(self.grid.n_x1):
                    m, km = mats[s][ix]
                    out[ix, s, km - kmin: km - kmin + len(m)] = m
            outs.append(CircleField(self.grid, out, kmin))
        return outs[0]


class GreenField:
    """Factored compact block G = U V^H per boundary point.

    U, V have shape (n_x1, 2, N, r); the represented operator on the
    truncated Hardy space is G[j, k] = sum_r U[..., j, r] conj(V[..., k, r]).
    """

    def __init__(self, grid: GridSet, u, v):
        self.grid = grid
        self.u = np.asarray(u, dtype=complex)
        self.v = np.asarray(v, dtype=complex)
        n = grid.hardy_n
        if (self.u.shape[:3] != (grid.n_x1, 2, n)
                or self.v.shape != self.u.shape):
            raise ValueError(f"bad green factor shapes {self.u.shape} {self.v.shape}")

    @classmethod
    def zero(cls, grid):
        z = np.zeros((grid.n_x1, 2, grid.hardy_n, 0))
        return cls(grid, z, z)

    @property
    def rank(self):
        return self.u.shape[3]

    def is_zero(self):
        return self.rank == 0

    def dense(self, ix, s):
        return self.u[ix, s] @ self.v[ix, s].conj().T

    def add(self, other, c=1.0):
        if other.is_zero():
            return self
        if self.is_zero():
            return other.scale(c)
        return GreenField(self.grid,
                          np.concatenate([self.u, c * other.u], axis=3),
                          np.concatenate([self.v, other.v], axis=3))

    def scale(self, c):
        if self.is_zero():
            return self
        return GreenField(self.grid, c * self.u, self.v)

    def scale_field(self, vals):
        if self.is_zero():
            return self
        return GreenField(self.grid, vals[..., None, None] * self.u, self.v)

    def matmul(self, other):
        """G1 G2 = U1 (V1^H U2) V2^H; rank of the result is other's rank."""
        if self.is_zero() or other.is_zero():
            return GreenField.zero(self.grid)
        inner = np.einsum("xsnr,xsnq->xsrq", np.conj(self.v), other.u, optimize=True)
        u = np.einsum("xsnr,xsrq->xsnq", self.u, inner, optimize=True)
        return GreenField(self.grid, u, other.v)

    def trace(self):
        if self.is_zero():
            return np.zeros((self.grid.n_x1, 2), dtype=complex)
        return np.einsum("xsnr,xsnr->xs", self.u, np.conj(self.v), optimize=True)

    def dx1(self):
        if self.is_zero():
            return self
        du, dv = _dx1(self.u, self.grid.n_x1), _dx1(self.v, self.grid.n_x1)
        return GreenField(self.grid,
                          np.concatenate([du, self.u], axis=3),
                          np.concatenate([self.v, dv], axis=3))

    def apply_vec(self, vec):
        """G c for a vector field c of shape (n_x1, 2, N)."""
        if self.is_zero():
            return np.zeros_like(vec)
        inner = np.einsum("xsnr,xsn->xsr", np.conj(self.v), vec, optimize=True)
        return np.einsum("xsnr,xsr->xsn", self.u, inner, optimize=True)

    def apply_covec(self, cov):
        """b G for a covector field b of shape (n_x1, 2, N)."""
        if self.is_zero():
            return np.zeros_like(cov)
        inner = np.einsum("xsn,xsnr->xsr", cov, self.u, optimize=True)
        return np.einsum("xsr,xsnr->xsn", inner, np.conj(self.v), optimize=True)

    def shift_x1(self, shift):
        if self.is_zero():
            return self
        g = self.grid
        return GreenField(g, g.shift_x1(self.u, shift), g.shift_x1(self.v, shift))

    def conjugate_pointwise(self, left, right_h):
        """K G M in factored form; left and right_h = M^H may be a single
        (N, N) matrix or per-point (n_x1, 2, N, N) stacks."""
        if self.is_zero():
            return self
        spec_l = "nm,xsmr->xsnr" if left.ndim == 2 else "xsnm,xsmr->xsnr"
        spec_r = "nm,xsmr->xsnr" if right_h.ndim == 2 else "xsnm,xsmr->xsnr"
        u = np.einsum(spec_l, left, self.u, optimize=True)
        v = np.einsum(spec_r, right_h, self.v, optimize=True)
        return GreenField(self.grid, u, v)


def toeplitz_apply_left(sig: CircleField, u):
    """(T(sigma) U)[j] = sum_m sigma_m U[j - m], truncated to rank N rows."""
    n = u.shape[2]
    out = np.zeros_like(u)
    c = sig.coeffs
    for i in range(c.shape[2]):
        m = sig.kmin + i
        cm = c[..., i]
        if m >= 0:
            if m < n:
                out[:, :, m:, ...] += cm[..., None, None] * u[:, :, :n - m, ...]
        else:
            out[:, :, :n + m, ...] += cm[..., None, None] * u[:, :, -m:, ...]
    return out


def toeplitz_apply_covec(cov, sig: CircleField):
    """(b T(sigma))[k] = sum_j b_j sigma_{j-k}."""
    n = cov.shape[2]
    out = np.zeros_like(cov)
    c = sig.coeffs
    for i in range(c.shape[2]):
        m = sig.kmin + i
        cm = c[..., i]
        if m >= 0:
            if m < n:
                out[:, :, :n - m] += cm[..., None] * cov[:, :, m:]
        else:
            out[:, :, -m:] += cm[..., None] * cov[:, :, :n + m]
    return out


def toeplitz_on_green(sig: CircleField, g: GreenField):
    """T(sigma) G in factored form."""
    if g.is_zero():
        return g
    return GreenField(g.grid, toeplitz_apply_left(sig, g.u), g.v)


def green_on_toeplitz(g: GreenField, sig: CircleField):
    """G T(sigma) in factored form: V <- T(sigma)^H V."""
    if g.is_zero():
        return g
    sig_h = CircleField(sig.grid, np.conj(sig.coeffs[..., ::-1]), -sig.kmax)
    return GreenField(g.grid, g.u, toeplitz_apply_left(sig_h, g.v))


def semicommutator_field(s1: CircleField, s2: CircleField) -> GreenField:
    """Factored field version of T(s1) T(s2) - T(s1 s2).

    The block is supported in the top-left corner with rank at most
    min(max mode of s1, -min mode of s2).
    """
    grid = s1.grid
    n = grid.hardy_n
    rank = max(0, min(s1.kmax, -s2.kmin))
    if rank == 0:
        return GreenField.zero(grid)
    if rank > n:
        raise ValueError("hardy rank too small for symbol band")
    u = np.zeros((grid.n_x1, 2, n, rank), dtype=complex)
    v = np.zeros((grid.n_x1, 2, n, rank), dtype=complex)
    for m in range(1, rank + 1):
        for j in range(0, min(s1.kmax - m + 1, n)):
            u[:, :, j, m - 1] = s1.mode(j + m)
        for k in range(0, min(-s2.kmin - m + 1, n)):
            v[:, :, k, m - 1] = -np.conj(s2.mode(-m - k))
    return GreenField(grid, u, v)


def outer_field(grid, vec, cov) -> GreenField:
    """Rank-one field c (x) b with G[j,k] = c_j b_k."""
    return GreenField(grid, vec[..., None], np.conj(cov)[..., None])
