"""Rank-one operator families built from vectors, evaluated Gram-only.

For nonzero vectors y_1..y_n, the operators A_i = y_i y_i^H / ||y_i||
satisfy ||A_i|| = ||y_i|| and ||A_i A_j^H|| = |(y_i, y_j)|, so the whole
bound catalog collapses to arithmetic over the Gram matrix.  The
production path here never materializes a d x d matrix; the matrix path
exists to cross-validate it.

The Gram-only left side uses the usual rank reduction: with Z the d x n
matrix of columns y_i and D = diag(alpha_i / ||y_i||), the weighted sum
is S = Z D Z^H, and S^H S = Z (D^H Gbar D) Z^H shares its nonzero
spectrum with (D^H Gbar D) Gbar where Gbar is the conjugated Gram
matrix.  Symmetrizing with Gbar^(1/2) turns that into an n x n
Hermitian eigenvalue problem.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from . import linalg
from .bounds import (
    BoundConfig,
    BoundReport,
    HolderPair,
    ORTHOGONAL_TOL,
    _catalog,
    _cross_total,
    _Eval,
    _holder_count,
    _l1_cross,
    _l2_cross,
    _master,
    _max_terms,
    _power_mean,
)
from .cbs import OperatorFamily, as_weights
from .errors import DimensionMismatch, ZeroVector


class VectorFamily:
    """Nonzero vectors y_1..y_n in C^d with their Gram matrix."""

    def __init__(self, vectors):
        if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
            stack = np.asarray(vectors, dtype=np.complex128)
        else:
            rows = [np.asarray(v, dtype=np.complex128) for v in vectors]
            if not rows:
                raise DimensionMismatch("empty vector family")
            shape = rows[0].shape
            if len(shape) != 1:
                raise DimensionMismatch(f"expected 1-d vectors, got shape {shape}")
            for v in rows[1:]:
                if v.shape != shape:
                    raise DimensionMismatch(f"mixed vector dimensions {shape} and {v.shape}")
            stack = np.stack(rows)
        if stack.shape[0] == 0 or stack.shape[1] == 0:
            raise DimensionMismatch("empty vector family")
        if not np.isfinite(stack).all():
            raise ValueError("vector entries must be finite")
        norms = np.sqrt((np.abs(stack) ** 2).sum(axis=1))
        if (norms == 0.0).any():
            raise ZeroVector("vector family contains a zero vector")
        self.vectors = stack
        self.count = int(stack.shape[0])
        self.dim = int(stack.shape[1])
        self.norms = norms

    @cached_property
    def gram(self) -> np.ndarray:
        return self.vectors @ self.vectors.conj().T

    @cached_property
    def _gram_conj_sqrt(self) -> np.ndarray:
        return linalg.psd_sqrt(self.gram.conj())

    def weighted_sum_norm_sq(self, alpha) -> float:
        """||sum alpha_i A_i||^2 from Gram data alone, O(n^3) after caching."""
        w = as_weights(alpha, self.count)
        d = w / self.norms
        gbar = self.gram.conj()
        p = d.conj()[:, None] * gbar * d[None, :]
        r = self._gram_conj_sqrt
        h = r @ p @ r
        return float(linalg.spectral_norms(h[None])[0])


def as_vector_family(Y) -> VectorFamily:
    if isinstance(Y, VectorFamily):
        return Y
    return VectorFamily(Y)


def rank_one_family(Y) -> OperatorFamily:
    """Materialize A_i = y_i y_i^H / ||y_i|| as explicit matrices."""
    vf = as_vector_family(Y)
    ops = np.einsum("ia,ib->iab", vf.vectors, vf.vectors.conj()) / vf.norms[:, None, None]
    return OperatorFamily(ops)


def verify_identities(Y, tol: float = 1e-9) -> bool:
    """Check ||A_i|| = ||y_i|| and ||A_i A_j^H|| = |(y_i, y_j)| numerically.

    Cross deviations are measured relative to ||y_i|| ||y_j||, which
    dominates both sides, so exactly orthogonal pairs are checked at the
    right scale instead of against a zero denominator.
    """
    vf = as_vector_family(Y)
    fam = rank_one_family(vf)
    norm_dev = float((np.abs(fam.norms - vf.norms) / vf.norms).max())
    pair_scale = np.outer(vf.norms, vf.norms)
    cross_dev = float((np.abs(fam.cross - np.abs(vf.gram)) / pair_scale).max())
    return norm_dev <= tol and cross_dev <= tol


def _eval_gram(alpha, Y, x_norm_sq: float) -> _Eval:
    vf = as_vector_family(Y)
    w = as_weights(alpha, vf.count)
    if not (x_norm_sq >= 0.0 and np.isfinite(x_norm_sq)):
        raise ValueError(f"x_norm_sq must be finite and nonnegative, got {x_norm_sq}")
    return _Eval(
        np.abs(w),
        vf.norms,
        np.abs(vf.gram),
        lambda: vf.weighted_sum_norm_sq(w),
        scale=float(x_norm_sq),
    )


def gram_master_bound(alpha, Y, x_norm_sq: float, config: BoundConfig) -> BoundReport:
    """The master bound on ||sum alpha_i (x, y_i) y_i / ||y_i||||^2,
    computed from the Gram matrix only and scaled by ||x||^2."""
    return _master(_eval_gram(alpha, Y, x_norm_sq), config)


def particular_bounds(alpha, Y, x_norm_sq: float, pair: HolderPair, r: float) -> list[BoundReport]:
    """The six named Gram-data bounds, in catalog order."""
    ev = _eval_gram(alpha, Y, x_norm_sq)
    return [
        _cross_total(ev),
        _holder_count(ev, pair),
        _max_terms(ev),
        _l2_cross(ev),
        _l1_cross(ev),
        _power_mean(ev, r),
    ]


def gram_catalog_reports(alpha, Y, x_norm_sq: float, exponent_grid=None,
                         orthogonal_tol: float = ORTHOGONAL_TOL) -> list[BoundReport]:
    """The full catalog evaluated on Gram data, in catalog order."""
    return _catalog(_eval_gram(alpha, Y, x_norm_sq), exponent_grid, orthogonal_tol)


def bessel_weighting(Y) -> np.ndarray:
    """Weights alpha_i = ||y_i||, turning the bounded quantity into the
    frame-operator image sum (x, y_i) y_i."""
    return as_vector_family(Y).norms.copy()
