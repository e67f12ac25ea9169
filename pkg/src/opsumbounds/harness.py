"""Instance generation, catalog-wide verification, and slack sweeps.

All randomness flows through the package's portable generator, so a
spec (kind, dim, count, seed) reproduces the same instance on any
platform, and the same verification numbers with it.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import bounds
from .cbs import OperatorFamily, as_family, as_weights, cbs_operator_gap
from .errors import InvalidSpec
from .linalg import PSD_TOL
from .problemio import format_float
from .rng import PortableRng, derive_seed
from .vectors import VectorFamily, rank_one_family

KINDS = (
    "GaussianDense",
    "UnitaryScaled",
    "RankOneFromVectors",
    "BlockOrthogonal",
    "OrthonormalRankOne",
)

_PROBE_COUNT = 8
_PROBE_SALT = 0x50B1


@dataclass(frozen=True)
class InstanceSpec:
    kind: str
    dim: int
    count: int
    seed: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if not (isinstance(self.dim, int) and self.dim >= 1):
            raise InvalidSpec(f"dim must be a positive integer, got {self.dim!r}")
        if not (isinstance(self.count, int) and self.count >= 1):
            raise InvalidSpec(f"count must be a positive integer, got {self.count!r}")
        if not isinstance(self.seed, int):
            raise InvalidSpec(f"seed must be an integer, got {self.seed!r}")
        if self.kind in ("BlockOrthogonal", "OrthonormalRankOne") and self.dim < self.count:
            raise InvalidSpec(f"{self.kind} needs dim >= count, got dim={self.dim}, count={self.count}")


def _gram_schmidt_unitary(m: np.ndarray) -> np.ndarray:
    """Orthonormalize columns by modified Gram-Schmidt.

    If a column collapses (numerically dependent input, essentially
    impossible for Gaussian draws), it is replaced by the first basis
    vector with a nonzero remainder against the columns built so far.
    """
    d = m.shape[0]
    q = np.zeros_like(m)
    for j in range(d):
        v = m[:, j].copy()
        for i in range(j):
            v -= (q[:, i].conj() @ v) * q[:, i]
        nv = float(np.linalg.norm(v))
        if nv <= 1e-12:
            for basis in range(d):
                v = np.zeros(d, dtype=np.complex128)
                v[basis] = 1.0
                for i in range(j):
                    v -= (q[:, i].conj() @ v) * q[:, i]
                nv = float(np.linalg.norm(v))
                if nv > 1e-8:
                    break
        q[:, j] = v / nv
    return q


def generate(spec: InstanceSpec):
    """Deterministically build (weights, OperatorFamily, VectorFamily or None)."""
    rng = PortableRng(derive_seed(spec.seed, KINDS.index(spec.kind), spec.dim, spec.count))
    n, d = spec.count, spec.dim

    if spec.kind == "GaussianDense":
        ops = rng.complex_normal((n, d, d))
        weights = rng.complex_normal(n)
        return weights, OperatorFamily(ops), None

    if spec.kind == "UnitaryScaled":
        base = rng.complex_normal((n, d, d))
        scalars = rng.complex_normal(n)
        weights = rng.complex_normal(n)
        ops = np.stack([scalars[i] * _gram_schmidt_unitary(base[i]) for i in range(n)])
        return weights, OperatorFamily(ops), None

    if spec.kind == "RankOneFromVectors":
        vf = VectorFamily(rng.complex_normal((n, d)))
        weights = rng.complex_normal(n)
        return weights, rank_one_family(vf), vf

    if spec.kind == "BlockOrthogonal":
        base = d // n
        sizes = [base + 1] * (d % n) + [base] * (n - d % n)
        ops = np.zeros((n, d, d), dtype=np.complex128)
        offset = 0
        for i, k in enumerate(sizes):
            ops[i, offset : offset + k, offset : offset + k] = rng.complex_normal((k, k))
            offset += k
        weights = rng.complex_normal(n)
        return weights, OperatorFamily(ops), None

    # OrthonormalRankOne: distinct basis vectors, unit weights; the
    # resulting operators are commuting orthogonal projections with
    # exactly vanishing cross products.
    picks = rng.permutation(d)[:n]
    vf = VectorFamily(np.eye(d, dtype=np.complex128)[picks])
    weights = np.ones(n, dtype=np.complex128)
    return weights, rank_one_family(vf), vf


class CheckRecord(NamedTuple):
    name: str
    lhs: float
    bound: float
    holds: bool
    slack_ratio: float


@dataclass(frozen=True)
class VerificationResult:
    spec: Optional[InstanceSpec]
    checks: list
    all_hold: bool
    worst_violation: float


def _violation(lhs: float, bound: float) -> float:
    if bound > 0.0:
        return max(lhs / bound - 1.0, 0.0)
    return 0.0 if lhs <= 0.0 else float("inf")


def _check_name(rep: bounds.BoundReport) -> str:
    return f"{rep.name}({rep.exponents})" if rep.exponents else rep.name


def verify_instance(alpha, A, tol: float = 1e-9, *, exponent_grid=None,
                    probe_seed: int = _PROBE_SALT,
                    spec: Optional[InstanceSpec] = None) -> VerificationResult:
    """Run every inequality in the catalog against one instance.

    Records, per check: name, the exact quantity being dominated, the
    dominating quantity, whether it holds at the given relative
    tolerance, and the slack ratio.  The PSD checks use their own
    relative eigenvalue tolerance rather than tol.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    fam = as_family(A)
    w = as_weights(alpha, fam.count)
    checks: list[CheckRecord] = []

    gap = cbs_operator_gap(w, fam)
    gap_limit = PSD_TOL * max(1.0, gap.gap_norm)
    checks.append(CheckRecord("psd_gap", -gap.min_eigenvalue, gap_limit,
                              gap.holds, bounds._slack(max(-gap.min_eigenvalue, 0.0), gap_limit)))
    inner_limit = PSD_TOL * max(1.0, gap.inner_norm)
    checks.append(CheckRecord("psd_gap_inner", -gap.inner_min_eigenvalue, inner_limit,
                              gap.inner_holds, bounds._slack(max(-gap.inner_min_eigenvalue, 0.0), inner_limit)))

    # same quantity the catalog dominates, so the assembled-sum norm is
    # computed once and shared with every later check
    ev = bounds._eval_operators(w, fam)
    lhs = ev.lhs_sq
    rhs = float((np.abs(w) ** 2).sum()) * fam.sum_products_norm
    checks.append(CheckRecord("cbs_norm", lhs, rhs, lhs <= rhs * (1.0 + 1e-9),
                              bounds._slack(lhs, rhs)))

    reports = bounds._catalog(ev, exponent_grid)
    for rep in reports:
        holds = rep.lhs_sq <= rep.bound * (1.0 + tol)
        checks.append(CheckRecord(_check_name(rep), rep.lhs_sq, rep.bound, holds, rep.slack_ratio))

    tightest = reports[0]
    for rep in reports[1:]:
        if rep.bound < tightest.bound:
            tightest = rep
    m = tightest.bound

    prng = PortableRng(derive_seed(probe_seed, fam.dim, fam.count))
    probes = [np.ones(fam.dim, dtype=np.complex128)]
    probes.extend(prng.complex_normal(fam.dim) for _ in range(_PROBE_COUNT))
    for k, x in enumerate(probes):
        plhs, prhs, pok = bounds.vector_image_bound(w, fam, x, m)
        checks.append(CheckRecord(f"image_probe_{k}", plhs, prhs, pok, bounds._slack(plhs, prhs)))
    for k, x in enumerate(probes):
        y = probes[(k + 1) % len(probes)]
        blhs, brhs, bok = bounds.bilinear_bound(w, fam, x, y, m)
        checks.append(CheckRecord(f"bilinear_probe_{k}", blhs, brhs, bok, bounds._slack(blhs, brhs)))

    worst = 0.0
    for c in checks:
        worst = max(worst, _violation(c.lhs, c.bound))
    return VerificationResult(
        spec=spec,
        checks=checks,
        all_hold=all(c.holds for c in checks),
        worst_violation=worst,
    )


def verify_spec(spec: InstanceSpec, tol: float = 1e-9, *, exponent_grid=None) -> VerificationResult:
    weights, fam, _ = generate(spec)
    return verify_instance(weights, fam, tol, exponent_grid=exponent_grid, spec=spec)


def slack_sweep(specs, exponent_grid=None) -> list[tuple]:
    """One row per (instance, catalog bound): seed, kind, dim, count,
    bound name, exponents, lhs, bound value, slack ratio.  Row order is
    spec order, then catalog order."""
    rows = []
    for spec in specs:
        weights, fam, _ = generate(spec)
        ev = bounds._eval_operators(weights, fam)
        for rep in bounds._catalog(ev, exponent_grid):
            rows.append((spec.seed, spec.kind, spec.dim, spec.count,
                         rep.name, rep.exponents, rep.lhs_sq, rep.bound, rep.slack_ratio))
    return rows


CSV_HEADER = ("seed", "kind", "dim", "count", "bound", "exponents", "lhs", "bound_value", "slack_ratio")


def write_slack_csv(rows, path) -> None:
    """Emit the sweep table: UTF-8, LF endings, 17 significant digits."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for seed, kind, dim, count, name, exponents, lhs, bound, slack in rows:
            writer.writerow((seed, kind, dim, count, name, exponents,
                             format_float(lhs), format_float(bound), format_float(slack)))
