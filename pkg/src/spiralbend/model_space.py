"""Finite-dimensional normed-space plumbing.

Vectors are plain ``numpy`` arrays; block-indexed vectors of a
:class:`ModelSpace` are arrays of shape ``(2I, n)`` (or ``(N, 2I, n)`` for a
batch).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidArgument
from .norms2d import UncondNorm2, l2


def euclidean_rows(x) -> np.ndarray:
    """Euclidean norm along the last axis, safe against overflow."""
    x = np.asarray(x, dtype=float)
    big = np.max(np.abs(x), axis=-1) if x.shape[-1] else np.zeros(x.shape[:-1])
    safe = np.where(big > 0, big, 1.0)
    return big * np.sqrt(np.sum((x / safe[..., None]) ** 2, axis=-1))


def l2_combine(values, axis: int = -1) -> np.ndarray:
    """``sqrt(sum v^2)`` along ``axis`` with overflow-safe scaling."""
    v = np.moveaxis(np.abs(np.asarray(values, dtype=float)), axis, -1)
    return euclidean_rows(v)


def as_vector(x, dim: int | None = None) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise InvalidArgument("expected a 1-D coordinate array")
    if dim is not None and v.size != dim:
        raise InvalidArgument(f"expected dimension {dim}, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise InvalidArgument("vector entries must be finite")
    return v


@dataclass(frozen=True)
class DirectSum:
    """``Y_left (+)_Z Y_right`` with ``||(u, v)|| = Z(||u||_left, ||v||_right)``."""

    Z: UncondNorm2
    left_dim: int
    right_dim: int
    left_norm: Callable = field(default=euclidean_rows, repr=False)
    right_norm: Callable = field(default=euclidean_rows, repr=False)

    def norm(self, u, v) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if u.shape[-1] != self.left_dim or v.shape[-1] != self.right_dim:
            raise InvalidArgument("summand dimensions do not match the direct sum")
        return self.Z(self.left_norm(u), self.right_norm(v))

    def joint_norm(self, w) -> np.ndarray:
        """Norm of concatenated vectors ``w = (u, v)``."""
        w = np.asarray(w, dtype=float)
        return self.norm(w[..., : self.left_dim], w[..., self.left_dim :])


def direct_sum_norm(D: DirectSum, u, v) -> float:
    u = as_vector(u, D.left_dim)
    v = as_vector(v, D.right_dim)
    return float(D.norm(u, v))


def projection_norm_ratio(D: DirectSum, samples: int = 100_000, seed: int = 0) -> float:
    """Largest sampled ``||P_j w|| / ||w||`` over both coordinate projections."""
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((samples, D.left_dim))
    v = rng.standard_normal((samples, D.right_dim))
    scale = rng.uniform(0.0, 1.0, (samples, 1))
    v = v * scale
    full = D.norm(u, v)
    left = D.norm(u, np.zeros_like(v))
    right = D.norm(np.zeros_like(u), v)
    return float(max(np.max(left / full), np.max(right / full)))


@dataclass(frozen=True)
class ModelSpace:
    """Blocks ``V_1 ... V_{2I}`` of Euclidean ``R^n``.

    Pair ``i`` (blocks ``2i-1, 2i``) is combined by ``Z_i`` and the pairs are
    joined by an outer l_2 sum, so blocks ``2i`` and ``2i+1`` always sit in
    Euclidean position relative to each other.
    """

    combiners: tuple
    block_dim: int
    gammas: tuple = ()
    zeta: float = 0.0

    def __post_init__(self):
        if len(self.combiners) < 1 or self.block_dim < 1:
            raise InvalidArgument("model space needs at least one pair and positive block dimension")

    @property
    def pairs(self) -> int:
        return len(self.combiners)

    @property
    def blocks(self) -> int:
        return 2 * len(self.combiners)

    def zeros(self, batch: int | None = None) -> np.ndarray:
        shape = (self.blocks, self.block_dim) if batch is None else (batch, self.blocks, self.block_dim)
        return np.zeros(shape)

    def norm(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-2:] != (self.blocks, self.block_dim):
            raise InvalidArgument(
                f"expected block shape {(self.blocks, self.block_dim)}, got {x.shape[-2:]}"
            )
        b = euclidean_rows(x)
        pair_vals = np.stack(
            [Zi(b[..., 2 * i], b[..., 2 * i + 1]) for i, Zi in enumerate(self.combiners)], axis=-1
        )
        return l2_combine(pair_vals)


def model_space(pairs: int, block_dim: int, Z: UncondNorm2 | Sequence[UncondNorm2] | None = None) -> ModelSpace:
    """Build a model space whose pair combiners cycle through ``Z``."""
    if Z is None:
        Z = [l2()]
    elif isinstance(Z, UncondNorm2):
        Z = [Z]
    Z = list(Z)
    return ModelSpace(tuple(Z[i % len(Z)] for i in range(pairs)), int(block_dim))


def model_norm(M: ModelSpace, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise InvalidArgument("model_norm takes a single block-indexed vector")
    if not np.all(np.isfinite(x)):
        raise InvalidArgument("vector entries must be finite")
    return float(M.norm(x))


def max_renorm(x1, x2, ambient_norm: Callable, tilde1: Callable, tilde2: Callable | None = None):
    """``max(||x1||~, ||x2||~, ||x1 + x2||)`` for slot vectors in a common ambient space."""
    tilde2 = tilde1 if tilde2 is None else tilde2
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    return np.maximum(np.maximum(tilde1(x1), tilde2(x2)), ambient_norm(x1 + x2))


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of R^n given by an orthonormal frame of shape ``(n, k)``."""

    frame: np.ndarray

    def __post_init__(self):
        F = np.asarray(self.frame, dtype=float)
        if F.ndim != 2 or F.shape[1] < 1:
            raise InvalidArgument("subspace frame must be a nonempty (n, k) array")
        if not np.allclose(F.T @ F, np.eye(F.shape[1]), rtol=0, atol=1e-12):
            raise InvalidArgument("subspace frame is not orthonormal to 1e-12")
        object.__setattr__(self, "frame", F)

    @classmethod
    def from_vectors(cls, vectors) -> "Subspace":
        """Orthonormalize the columns of ``vectors`` (shape ``(n, k)``)."""
        A = np.asarray(vectors, dtype=float)
        if A.ndim == 1:
            A = A[:, None]
        if A.shape[1] < 1:
            raise InvalidArgument("need at least one spanning vector")
        q, r = np.linalg.qr(A)
        if np.min(np.abs(np.diag(r))) <= 1e-12 * max(1.0, np.abs(r).max()):
            raise InvalidArgument("spanning vectors are linearly dependent")
        return cls(q)

    @classmethod
    def coordinate(cls, n: int, axes: Sequence[int]) -> "Subspace":
        return cls(np.eye(n)[:, list(axes)])

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    @property
    def ambient(self) -> int:
        return self.frame.shape[0]

    def project(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=float) @ self.frame) @ self.frame.T


def _check_pair(U: Subspace, W: Subspace):
    if U.ambient != W.ambient:
        raise InvalidArgument("subspaces live in different ambient spaces")
    if U.dim != W.dim:
        raise InvalidArgument("spherical opening needs subspaces of equal dimension")
    if not (1 <= U.dim <= U.ambient - 1):
        raise InvalidArgument("subspace dimension must lie in [1, n-1]")


def principal_angles(U: Subspace, W: Subspace) -> np.ndarray:
    """Principal angles (ascending) from the singular values of ``U^T W``."""
    s = np.linalg.svd(U.frame.T @ W.frame, compute_uv=False)
    return np.sort(np.arccos(np.clip(s, 0.0, 1.0)))


def opening_from_frames(A, B) -> np.ndarray:
    """Vectorized spherical opening between batches of equal-size frames.

    ``A`` and ``B`` broadcast as ``(..., n, k)`` arrays of orthonormal frames.
    """
    s = np.linalg.svd(np.swapaxes(A, -1, -2) @ B, compute_uv=False)
    smin = np.clip(s[..., -1], 0.0, 1.0)
    return np.sqrt(np.maximum(2.0 - 2.0 * smin, 0.0))


def spherical_opening(U: Subspace, W: Subspace) -> float:
    """``Omega(U, W) = 2 sin(theta_max / 2)`` for Euclidean subspaces of equal dimension."""
    _check_pair(U, W)
    theta = principal_angles(U, W)[-1]
    return float(2.0 * math.sin(theta / 2.0))


def _sphere_grid(S: Subspace, steps: int) -> np.ndarray:
    if S.dim == 1:
        return np.stack([S.frame[:, 0], -S.frame[:, 0]])
    if S.dim != 2:
        raise InvalidArgument("grid opening supports subspaces of dimension 1 or 2")
    phi = np.linspace(0.0, 2.0 * math.pi, steps, endpoint=False)
    return np.cos(phi)[:, None] * S.frame[:, 0] + np.sin(phi)[:, None] * S.frame[:, 1]


def spherical_opening_grid(U: Subspace, W: Subspace, steps: int = 720) -> float:
    """Brute-force opening from grids on both unit spheres (dimension 1 or 2)."""
    _check_pair(U, W)
    pu = _sphere_grid(U, steps)
    pw = _sphere_grid(W, steps)
    d = np.sqrt(np.maximum(2.0 - 2.0 * (pu @ pw.T), 0.0))
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))
