"""Small dense eigensolvers: cyclic Jacobi, batched.

The matrices this package diagonalizes are tiny and fixed-size (3x3 real
symmetric correlation products, 4x4 Hermitian density operators), so a
classic cyclic Jacobi sweep is used instead of an external linear-algebra
stack.  All routines accept stacked inputs of shape (..., n, n) and work on
the whole batch per rotation, which keeps the 1e4-sample criterion scans
cheap.

Hermitian matrices H = A + iB are handled through the standard real
embedding [[A, -B], [B, A]], whose spectrum is that of H with every
eigenvalue doubled.
"""

from __future__ import annotations

import numpy as np

_SWEEP_LIMIT = 60


def jacobi_eigh(mats, tol: float = 1e-15, vectors: bool = True):
    """Eigen-decomposition of real symmetric matrices via cyclic Jacobi.

    Args:
        mats: array-like, shape (..., n, n), symmetric along the last two axes.
        tol: convergence threshold relative to each matrix's Frobenius norm.
        vectors: accumulate eigenvectors (skip for a ~25% speedup on batches).

    Returns:
        (eigenvalues, eigenvectors): shapes (..., n) ascending and (..., n, n)
        with eigenvectors in columns, so  A @ V[..., :, i] = w[..., i] V[..., :, i].
        eigenvectors is None when vectors=False.
    """
    a = np.array(mats, dtype=np.float64)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    n = a.shape[-1]
    v = None
    if vectors:
        v = np.zeros_like(a)
        v[...] = np.eye(n)
    thresh = tol * np.maximum(np.sqrt((a * a).sum(axis=(-2, -1))), 1e-300)
    iu = np.triu_indices(n, k=1)

    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    for _ in range(_SWEEP_LIMIT):
        off = np.abs(a[..., iu[0], iu[1]]).max(axis=-1)
        if np.all(off <= thresh):
            break
        for p, q in pairs:
            apq = a[..., p, q]
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                theta = (a[..., q, q] - a[..., p, p]) / (2.0 * apq)
                t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                t = np.where(theta == 0.0, 1.0, t)   # app == aqq: 45-degree rotation
            t = np.where(apq == 0.0, 0.0, t)
            t = np.where(np.isfinite(t), t, 0.0)     # |theta| overflow: skip
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            cc = c[..., None]
            ss = s[..., None]
            # A <- J^T A J with J the (p,q) plane rotation
            rp = cc * a[..., p, :] - ss * a[..., q, :]
            rq = ss * a[..., p, :] + cc * a[..., q, :]
            a[..., p, :] = rp
            a[..., q, :] = rq
            cp = cc * a[..., :, p] - ss * a[..., :, q]
            cq = ss * a[..., :, p] + cc * a[..., :, q]
            a[..., :, p] = cp
            a[..., :, q] = cq
            a[..., p, q] = 0.0
            a[..., q, p] = 0.0
            if vectors:
                vp = cc * v[..., :, p] - ss * v[..., :, q]
                vq = ss * v[..., :, p] + cc * v[..., :, q]
                v[..., :, p] = vp
                v[..., :, q] = vq
    else:
        raise RuntimeError(f"Jacobi sweep did not converge in {_SWEEP_LIMIT} sweeps")

    w = np.einsum("...ii->...i", a).copy()
    order = np.argsort(w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    if vectors:
        v = np.take_along_axis(v, order[..., None, :], axis=-1)
    return w, v


def eigvalsh_sym(mats, tol: float = 1e-15) -> np.ndarray:
    """Ascending eigenvalues of real symmetric matrices."""
    return jacobi_eigh(mats, tol=tol, vectors=False)[0]


def _real_embedding(h: np.ndarray) -> np.ndarray:
    n = h.shape[-1]
    m = np.zeros(h.shape[:-2] + (2 * n, 2 * n), dtype=np.float64)
    m[..., :n, :n] = h.real
    m[..., :n, n:] = -h.imag
    m[..., n:, :n] = h.imag
    m[..., n:, n:] = h.real
    return m


def eigh_hermitian(h, tol: float = 1e-15):
    """Eigen-decomposition of complex Hermitian matrices.

    Returns (eigenvalues ascending, eigenvectors in columns), both obtained
    from the Jacobi solve of the doubled real embedding; each eigenvalue of
    the embedding appears twice, and one representative per pair is kept.
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim < 2 or h.shape[-1] != h.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {h.shape}")
    n = h.shape[-1]
    w2, v2 = jacobi_eigh(_real_embedding(h), tol=tol)
    w = w2[..., 0::2]
    vecs = v2[..., :n, 0::2] + 1j * v2[..., n:, 0::2]
    return w, vecs


def eigvalsh_hermitian(h, tol: float = 1e-15) -> np.ndarray:
    """Ascending eigenvalues of complex Hermitian matrices."""
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim < 2 or h.shape[-1] != h.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {h.shape}")
    w2, _ = jacobi_eigh(_real_embedding(h), tol=tol, vectors=False)
    return w2[..., 0::2]
