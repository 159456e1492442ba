"""Discretized half-line Hardy space and structured operators on it.

Fourier convention: (Fu)(xi2) = int_0^inf e^{-i x2 xi2} u(x2) dx2, so the
transforms of functions supported on the positive half-line extend
holomorphically to the lower half-plane. The circle coordinate

    w(xi2) = (xi2 + i)/(xi2 - i)

maps that half-plane onto the unit disk; the orthonormal basis

    psi_k(xi2) = sqrt(2) w^k / (1 + i xi2),   k = 0, 1, ...

(in the inner product (1/2pi) int u conj(v) dxi2) is the transform of the
Laguerre basis sqrt(2) L_k(2 x2) e^{-x2}. Bounded circle symbols are stored
by their Fourier coefficients in powers of w; with these conventions the
compression of multiplication by a symbol to the Hardy space is the
Toeplitz matrix T[j, k] = sigma_{j-k}, and T(w) is the lower shift.
"""

from __future__ import annotations

import numpy as np

from .grids import cayley, xi2_of_angle


def hardy_basis_xi2(n, xi2):
    """Values psi_k(xi2), returned as array (len(xi2), n)."""
    xi2 = np.asarray(xi2, dtype=float)
    w = cayley(xi2)
    base = np.sqrt(2.0) / (1.0 + 1j * xi2)
    return base[:, None] * w[:, None] ** np.arange(n)


def hardy_basis_angle(n, phi):
    """Values psi_k on the circle, psi_k = w^k (1 - w)/sqrt(2), w = e^{i phi}."""
    w = np.exp(1j * np.asarray(phi, dtype=float))
    return (w[:, None] ** np.arange(n)) * ((1.0 - w) / np.sqrt(2.0))[:, None]


def pi_prime_hardy(coeffs):
    """Boundary-value functional on Hardy coefficients.

    The inverse transform of psi_k tends to sqrt(2) at x2 -> 0+, so the
    functional is sqrt(2) * sum of coefficients.
    """
    return np.sqrt(2.0) * np.sum(np.asarray(coeffs), axis=-1)


def pi_prime_modes(modes, kmin=None, tol=1e-10):
    """Boundary-value functional on a circle symbol given by w-modes.

    Requires decay at xi2 = +-inf, i.e. vanishing at w = 1 (mode sum 0);
    then the value is -2 * sum_{m>0} m * sigma_m.  Raises on symbols with a
    nonzero limit at infinity, where the functional is undefined.
    """
    modes = np.asarray(modes, dtype=complex)
    if kmin is None:
        if len(modes) % 2 == 0:
            raise ValueError("centered mode array must have odd length")
        kmin = -(len(modes) // 2)
    total = np.sum(modes)
    scale = max(1.0, float(np.max(np.abs(modes))) if modes.size else 1.0)
    if abs(total) > tol * scale:
        raise ValueError("functional undefined: symbol does not vanish at infinity")
    m = kmin + np.arange(len(modes))
    return -2.0 * np.sum(np.where(m > 0, m, 0) * modes)


def pi_plus_modes(modes, kmin):
    """Hardy-space component of a circle symbol, as Hardy coefficients.

    Splits u = u(1) * 1 + u_+ + u_-; returns (hardy coefficients of u_+,
    constant part u(1)). The coefficients satisfy
    u_+ = sum_k c_k psi_k with c_k = sqrt(2) * partial_sum_k(u - u(1) delta_0).
    """
    modes = np.asarray(modes, dtype=complex)
    const = np.sum(modes)
    adj = modes.copy()
    adj[-kmin] -= const
    partial = np.cumsum(adj)
    kmax = kmin + len(modes) - 1
    if kmax < 0:
        return np.zeros(0, dtype=complex), const
    c = np.sqrt(2.0) * partial[-kmin:]
    return c, const


def toeplitz_matrix(modes, n, kmin=None):
    """Compression of multiplication by a circle symbol: T[j,k] = sigma_{j-k}."""
    modes = np.asarray(modes, dtype=complex)
    if kmin is None:
        if len(modes) % 2 == 0:
            raise ValueError("centered mode array must have odd length")
        kmin = -(len(modes) // 2)
    diff = np.arange(n)[:, None] - np.arange(n)[None, :] - kmin
    ok = (diff >= 0) & (diff < len(modes))
    out = np.zeros((n, n), dtype=complex)
    out[ok] = modes[diff[ok]]
    return out


def semicommutator(modes1, modes2, n, kmin1=None, kmin2=None):
    """Exact matrix of T(s1) T(s2) - T(s1 s2) on the truncated Hardy space.

    The product of two Toeplitz operators differs from the Toeplitz operator
    of the product by a finite-rank block supported (for band-limited
    symbols) in the top-left corner:
        H[j, k] = - sum_{m >= 1} s1_{j+m} s2_{-m-k}.
    """
    m1 = np.asarray(modes1, dtype=complex)
    m2 = np.asarray(modes2, dtype=complex)
    if kmin1 is None:
        kmin1 = -(len(m1) // 2)
    if kmin2 is None:
        kmin2 = -(len(m2) // 2)
    k1max = kmin1 + len(m1) - 1
    k2min = kmin2
    rank = max(0, min(k1max, -k2min))
    out = np.zeros((n, n), dtype=complex)
    if rank == 0:
        return out
    def s1(idx):
        return m1[idx - kmin1] if 0 <= idx - kmin1 < len(m1) else 0.0
    def s2(idx):
        return m2[idx - kmin2] if 0 <= idx - kmin2 < len(m2) else 0.0
    for j in range(min(n, rank)):
        for k in range(min(n, rank)):
            acc = 0.0 + 0.0j
            for m in range(1, rank - max(j, k) + 1):
                acc += s1(j + m) * s2(-m - k)
            out[j, k] = -acc
    return out


def hankel_trace(modes1, modes2, kmin1=None, kmin2=None):
    """Trace of the semicommutator block: -sum_{s>=1} s * s1_s * s2_{-s}."""
    m1 = np.asarray(modes1, dtype=complex)
    m2 = np.asarray(modes2, dtype=complex)
    if kmin1 is None:
        kmin1 = -(len(m1) // 2)
    if kmin2 is None:
        kmin2 = -(len(m2) // 2)
    acc = 0.0 + 0.0j
    for s in range(1, kmin1 + len(m1)):
        i2 = -s - kmin2
        if 0 <= i2 < len(m2):
            acc += s * m1[s - kmin1] * m2[i2]
    return -acc


def commutator_trace(modes1, modes2, kmin1=None, kmin2=None):
    """Regularized trace of [T(s1), T(s2)] computed structurally.

    Equals -sum_s s * s1_s s2_{-s} over all s, which matches
    -(i/2pi) int s1' s2 dxi2 for smooth decaying symbols.
    """
    return (hankel_trace(modes1, modes2, kmin1, kmin2)
            - hankel_trace(modes2, modes1, kmin2, kmin1))


def kappa_matrix(lam, n):
    """Matrix of the dilation u(xi2) -> sqrt(lam) u(lam xi2) in the Hardy basis.

    On the disk side this is the unitary weighted composition operator
    p(w) -> sqrt(1-mu^2)/(1+mu w) p((w+mu)/(1+mu w)) with mu=(lam-1)/(lam+1);
    columns are generated by an exact, stable coefficient recurrence.
    """
    if lam <= 0:
        raise ValueError("dilation parameter must be positive")
    if lam == 1.0:
        return np.eye(n, dtype=complex)
    mu = (lam - 1.0) / (lam + 1.0)
    out = np.empty((n, n), dtype=complex)
    col = np.sqrt(1.0 - mu * mu) * (-mu) ** np.arange(n)
    out[:, 0] = col
    for k in range(1, n):
        t = mu * col
        t[1:] += col[:-1]
        b = np.empty_like(t)
        acc = 0.0
        for j in range(n):
            acc = t[j] - mu * acc
            b[j] = acc
        col = b
        out[:, k] = col
    return out


def kappa_inner_product_quadrature(lam, j, k, n_angles=4096):
    """Independent quadrature oracle for <kappa_lam psi_k, psi_j>.

    Uses the weighted circle parameterization of the line inner product
    (1/2pi) int sqrt(lam) psi_k(lam xi2) conj(psi_j(xi2)) dxi2.
    """
    phi = 2.0 * np.pi * (np.arange(n_angles) + 0.5) / n_angles
    xi2 = xi2_of_angle(phi)
    w = (np.pi / n_angles) / np.sin(phi / 2.0) ** 2 / (2.0 * np.pi)
    pk = hardy_basis_xi2(k + 1, lam * xi2)[:, k]
    pj = hardy_basis_xi2(j + 1, xi2)[:, j]
    return np.sqrt(lam) * np.sum(w * pk * np.conj(pj))


def green_from_kernel(kernel, n, n_angles=None, warn_tol=1e-8):
    """Matrix of u -> (1/2pi) int kernel(., eta) u(eta) d eta in the Hardy basis.

    `kernel` is a callable g(xi, eta) vectorized over numpy arrays, smooth
    with O(1/xi) decay in each variable. Returns (matrix, residual) where
    residual estimates the dropped tail of the coefficient expansion.
    """
    if n_angles is None:
        n_angles = max(8 * n, 512)
    phi = 2.0 * np.pi * (np.arange(n_angles) + 0.5) / n_angles
    xi2 = xi2_of_angle(phi)
    wline = (np.pi / n_angles) / np.sin(phi / 2.0) ** 2 / (2.0 * np.pi)
    nb = n + 8
    basis = hardy_basis_xi2(nb, xi2)
    g = np.asarray(kernel(xi2[:, None], xi2[None, :]), dtype=complex)
    left = (wline[:, None] * np.conj(basis)).T
    right = basis * wline[:, None]
    full = left @ g @ right
    mat = full[:n, :n]
    tail = max(np.max(np.abs(full[n:, :])), np.max(np.abs(full[:, n:])))
    return mat, float(tail)


def dilate_modes(modes, kmin, lam, n_angles, tol=1e-14):
    """Coefficients of sigma(lam * xi2) in powers of w, from those of sigma.

    The dilation is a disk automorphism on the circle side, so the composed
    symbol is smooth and its FFT coefficients decay geometrically; trailing
    coefficients below tol (relative) are dropped.
    """
    if lam == 1.0:
        return np.asarray(modes, dtype=complex), kmin
    modes = np.asarray(modes, dtype=complex)
    phi = 2.0 * np.pi * np.arange(n_angles) / n_angles
    with np.errstate(divide="ignore"):
        xi2 = np.where(phi == 0.0, np.inf, 1.0 / np.tan(phi / 2.0))
    lx = lam * xi2
    w_im = np.where(np.isinf(lx), 1.0 + 0.0j, (lx + 1j) / (lx - 1j))
    ks = kmin + np.arange(len(modes))
    vals = (w_im[:, None] ** ks).dot(modes)
    coeff = np.fft.fft(vals) / n_angles
    half = n_angles // 2
    centered = np.concatenate([coeff[half:], coeff[:half]])
    scale = max(np.max(np.abs(centered)), 1e-300)
    keep = np.nonzero(np.abs(centered) > tol * scale)[0]
    if len(keep) == 0:
        return np.zeros(1, dtype=complex), 0
    lo, hi = keep[0], keep[-1]
    return centered[lo:hi + 1], lo - half
