"""Operator-order form of the Cauchy-Bunyakovsky-Schwarz inequality.

For operators A_1..A_n on C^d and scalars z_1..z_n, the weighted sum
S = sum z_i A_i satisfies, in the PSD order,

    S S^*  <=  (sum |z_i|^2) (sum A_i A_i^*),

with both sides PSD.  This module materializes the gap between the two
sides and tests it, and exposes the scalar norm consequence
||S||^2 <= (sum |z_i|^2) ||sum A_i A_i^*||.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .errors import DimensionMismatch


def as_weights(z, n: int | None = None) -> np.ndarray:
    """Coerce a weight list to a finite complex 1-d array."""
    w = np.asarray(z, dtype=np.complex128)
    if w.ndim != 1 or w.size == 0:
        raise DimensionMismatch(f"expected a nonempty 1-d weight list, got shape {w.shape}")
    if not np.isfinite(w).all():
        raise ValueError("weights must be finite")
    if n is not None and w.size != n:
        raise DimensionMismatch(f"{w.size} weights for a family of {n} operators")
    return w


class OperatorFamily:
    """A family A_1..A_n of d x d operators with cached norm data.

    The norm caches exist because the whole point of the bound catalog
    is to avoid touching the assembled sum: every bound is arithmetic
    over ||A_i|| and ||A_i A_j^*||, so those are computed once, in one
    batched power-iteration pass, on first use.
    """

    def __init__(self, ops):
        if isinstance(ops, np.ndarray) and ops.ndim == 3:
            stack = np.asarray(ops, dtype=np.complex128)
        else:
            mats = [linalg.as_matrix(m) for m in ops]
            if not mats:
                raise DimensionMismatch("empty operator family")
            shape = mats[0].shape
            for m in mats[1:]:
                if m.shape != shape:
                    raise DimensionMismatch(f"mixed operator shapes {shape} and {m.shape}")
            stack = np.stack(mats)
        if stack.shape[0] == 0:
            raise DimensionMismatch("empty operator family")
        if stack.shape[1] != stack.shape[2]:
            raise DimensionMismatch(f"operators must be square, got shape {stack.shape[1:]}")
        if not np.isfinite(stack).all():
            raise ValueError("operator entries must be finite")
        self.ops = stack
        self.count = int(stack.shape[0])
        self.dim = int(stack.shape[1])

    def weighted_sum(self, z) -> np.ndarray:
        w = as_weights(z, self.count)
        return np.einsum("i,iab->ab", w, self.ops)

    @cached_property
    def sum_products(self) -> np.ndarray:
        """The matrix sum A_1 A_1^* + ... + A_n A_n^*."""
        return np.einsum("iab,icb->ac", self.ops, self.ops.conj())

    @cached_property
    def _norm_data(self):
        n = self.count
        # ||A_i A_j^*|| = ||A_j A_i^*|| (adjoint invariance), so only the
        # upper triangle goes through the norm computation
        iu, ju = np.triu_indices(n)
        pairs = np.einsum("kab,kcb->kac", self.ops[iu], self.ops.conj()[ju])
        stacked = np.concatenate([pairs, self.ops, self.sum_products[None]])
        values = linalg.spectral_norms(stacked)
        cross = np.zeros((n, n))
        cross[iu, ju] = values[: iu.size]
        cross[ju, iu] = values[: iu.size]
        norms = values[iu.size : iu.size + n]
        return norms, cross, float(values[-1])

    @property
    def norms(self) -> np.ndarray:
        """||A_i|| for each member."""
        return self._norm_data[0]

    @property
    def cross(self) -> np.ndarray:
        """Full n x n table of ||A_i A_j^*||, diagonal included."""
        return self._norm_data[1]

    @property
    def sum_products_norm(self) -> float:
        """||sum A_i A_i^*||."""
        return self._norm_data[2]


def as_family(A) -> OperatorFamily:
    if isinstance(A, OperatorFamily):
        return A
    return OperatorFamily(A)


@dataclass(frozen=True)
class PsdGapResult:
    """Outcome of the operator-order check.

    gap is the symmetrized difference between the dominating side and
    S S^*; holds records whether its smallest eigenvalue clears the
    relative PSD tolerance.  The inner_* fields report the same test on
    S S^* itself, which must also be PSD.
    """

    gap: np.ndarray
    min_eigenvalue: float
    holds: bool
    gap_norm: float
    inner_min_eigenvalue: float
    inner_holds: bool
    inner_norm: float


def _psd_verdict(h: np.ndarray, tol: float) -> tuple[float, float, bool]:
    eigs = linalg.hermitian_eigenvalues(h)
    lo = float(eigs[0])
    norm = max(abs(lo), abs(float(eigs[-1])))
    return lo, norm, lo >= -tol * max(1.0, norm)


def cbs_operator_gap(z, A, tol: float = linalg.PSD_TOL) -> PsdGapResult:
    """The PSD gap (sum |z_i|^2)(sum A_i A_i^*) - S S^* with S = sum z_i A_i.

    The assembled difference is symmetrized before eigenvalue analysis:
    the exact gap is self-adjoint, floating point is not quite.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    fam = as_family(A)
    w = as_weights(z, fam.count)
    s = np.einsum("i,iab->ab", w, fam.ops)
    inner = s @ s.conj().T
    raw = float((np.abs(w) ** 2).sum()) * fam.sum_products - inner
    gap = 0.5 * (raw + raw.conj().T)
    min_eig, gap_norm, holds = _psd_verdict(gap, tol)
    inner_min, inner_norm, inner_holds = _psd_verdict(0.5 * (inner + inner.conj().T), tol)
    return PsdGapResult(
        gap=gap,
        min_eigenvalue=min_eig,
        holds=holds,
        gap_norm=gap_norm,
        inner_min_eigenvalue=inner_min,
        inner_holds=inner_holds,
        inner_norm=inner_norm,
    )


def cbs_norm_check(z, A) -> tuple[float, float, bool]:
    """(lhs, rhs, holds) with lhs = ||sum z_i A_i||^2 and
    rhs = (sum |z_i|^2) ||sum A_i A_i^*||."""
    fam = as_family(A)
    w = as_weights(z, fam.count)
    s = np.einsum("i,iab->ab", w, fam.ops)
    lhs = linalg.spectral_norm(s).value ** 2
    rhs = float((np.abs(w) ** 2).sum()) * fam.sum_products_norm
    return lhs, rhs, lhs <= rhs * (1.0 + 1e-9)
