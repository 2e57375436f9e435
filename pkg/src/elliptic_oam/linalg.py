"""Small dense linear-algebra and quadrature kernels.

No physics lives here: a diagonally-symmetrizable tridiagonal eigensolver
(implicit-shift QL on the symmetrized bands) and a tensor-product
Gauss-Legendre quadrature over a square window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NonSymmetrizableError, SolverError

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Real tridiagonal matrix stored as its three bands.

    ``sub[i]`` couples row i+1 to column i, ``sup[i]`` row i to column i+1.
    """

    diag: np.ndarray
    sub: np.ndarray
    sup: np.ndarray

    def __post_init__(self):
        diag = np.atleast_1d(np.asarray(self.diag, dtype=float))
        sub = np.atleast_1d(np.asarray(self.sub, dtype=float)) if np.size(self.sub) else np.zeros(0)
        sup = np.atleast_1d(np.asarray(self.sup, dtype=float)) if np.size(self.sup) else np.zeros(0)
        if diag.size < 1:
            raise SolverError("tridiagonal matrix must have dimension >= 1")
        if sub.size != diag.size - 1 or sup.size != diag.size - 1:
            raise SolverError(
                f"band lengths ({sub.size}, {sup.size}) inconsistent with dimension {diag.size}"
            )
        for name, arr in (("diag", diag), ("sub", sub), ("sup", sup)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dimension(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        n = self.dimension
        dense = np.diag(self.diag)
        for i in range(n - 1):
            dense[i, i + 1] = self.sup[i]
            dense[i + 1, i] = self.sub[i]
        return dense


@dataclass(frozen=True)
class EigenSolution:
    """Full spectrum of a tridiagonal matrix.

    ``eigenvalues`` ascending; column i of ``eigenvectors`` is the unit-norm
    vector paired with eigenvalue i, sign-fixed so its first nonzero entry
    is positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        for name in ("eigenvalues", "eigenvectors"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def _ql_implicit_shift(d: np.ndarray, e: np.ndarray, max_sweeps: int = 60):
    """Eigen-decomposition of a symmetric tridiagonal matrix.

    ``d`` is the diagonal, ``e[i]`` the coupling between i and i+1.  Returns
    (eigenvalues, eigenvector columns), unsorted.  Classic QL iteration with
    implicit Wilkinson shifts; O(n^2) per sweep, fine for the tiny matrices
    this package produces.
    """
    n = d.size
    d = d.astype(float).copy()
    e = np.append(e.astype(float), 0.0)
    vecs = np.eye(n)
    for low in range(n):
        sweeps = 0
        while True:
            for split in range(low, n - 1):
                scale = abs(d[split]) + abs(d[split + 1])
                if abs(e[split]) <= _EPS * scale:
                    break
            else:
                split = n - 1
            if split == low:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise SolverError("QL iteration failed to converge")
            g = (d[low + 1] - d[low]) / (2.0 * e[low])
            r = math.hypot(g, 1.0)
            g = d[split] - d[low] + e[low] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(split - 1, low - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[split] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                col = vecs[:, i + 1].copy()
                vecs[:, i + 1] = s * vecs[:, i] + c * col
                vecs[:, i] = c * vecs[:, i] - s * col
            if underflow:
                continue
            d[low] -= p
            e[low] = g
            e[split] = 0.0
    return d, vecs


def _sign_fix(vec: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(vec) > 0.0)
    if nz.size and vec[nz[0]] < 0.0:
        return -vec
    return vec


def eigen_tridiagonal(matrix: TridiagonalMatrix) -> EigenSolution:
    """Full real spectrum of a diagonally-symmetrizable tridiagonal matrix.

    Requires ``sub[i] * sup[i] >= 0`` for every coupling; couplings that are
    zero on both sides split the problem into independent blocks.  Raises
    :class:`NonSymmetrizableError` otherwise.
    """
    n = matrix.dimension
    sub, sup = matrix.sub, matrix.sup
    products = sub * sup
    if np.any(products < 0.0):
        bad = int(np.flatnonzero(products < 0.0)[0])
        raise NonSymmetrizableError(
            f"sub[{bad}]*sup[{bad}] = {products[bad]:g} < 0; no diagonal similarity exists"
        )
    one_sided = (products == 0.0) & ((sub != 0.0) | (sup != 0.0))
    if np.any(one_sided):
        bad = int(np.flatnonzero(one_sided)[0])
        raise NonSymmetrizableError(
            f"coupling {bad} is zero on one side only; matrix is defective under symmetrization"
        )

    eigenvalues = np.empty(n)
    eigenvectors = np.zeros((n, n))
    block_edges = [0] + [i + 1 for i in range(n - 1) if products[i] == 0.0] + [n]
    for start, stop in zip(block_edges[:-1], block_edges[1:]):
        width = stop - start
        d_block = matrix.diag[start:stop]
        e_block = np.sqrt(products[start : stop - 1])
        # scale factors mapping the original block onto the symmetric one
        scale = np.ones(width)
        for i in range(width - 1):
            scale[i + 1] = scale[i] * math.sqrt(sup[start + i] / sub[start + i])
        vals, vecs = _ql_implicit_shift(d_block, e_block)
        vecs = vecs / scale[:, None]
        for j in range(width):
            eigenvalues[start + j] = vals[j]
            v = vecs[:, j]
            eigenvectors[start:stop, start + j] = v / np.linalg.norm(v)

    order = np.argsort(eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    eigenvectors = eigenvectors[:, order]
    for j in range(n):
        eigenvectors[:, j] = _sign_fix(eigenvectors[:, j])

    dense = matrix.to_dense()
    for j in range(n):
        v = eigenvectors[:, j]
        residual = np.linalg.norm(dense @ v - eigenvalues[j] * v)
        if residual > 1e-10 * (1.0 + abs(eigenvalues[j])):
            raise SolverError(
                f"eigenpair {j} residual {residual:.3e} exceeds bound; matrix badly scaled?"
            )
    return EigenSolution(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


@lru_cache(maxsize=32)
def _gauss_legendre(nodes: int):
    x, w = np.polynomial.legendre.leggauss(nodes)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def plane_quadrature_grid(half_width: float, nodes_per_axis: int):
    """Gauss-Legendre nodes and combined weights on [-half_width, half_width]^2.

    Returns (X, Y, W) meshgrids; ``sum(f(X, Y) * W)`` approximates the plane
    integral of f over the square.
    """
    if half_width <= 0.0:
        raise ValueError("half_width must be positive")
    if nodes_per_axis < 2:
        raise ValueError("nodes_per_axis must be at least 2")
    x, w = _gauss_legendre(nodes_per_axis)
    x = x * half_width
    w = w * half_width
    X, Y = np.meshgrid(x, x, indexing="xy")
    return X, Y, np.outer(w, w)


def integrate_plane(f, half_width: float, nodes_per_axis: int) -> complex:
    """Tensor Gauss-Legendre integral of f(x, y) over the centered square.

    ``f`` must accept equal-shaped coordinate arrays and evaluate pointwise.
    Exact for bivariate polynomials up to degree 2*nodes_per_axis - 1.
    """
    X, Y, W = plane_quadrature_grid(half_width, nodes_per_axis)
    values = np.asarray(f(X, Y))
    return complex(np.sum(values * W))
