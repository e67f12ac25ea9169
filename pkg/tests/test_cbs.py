import numpy as np
import pytest

from opsumbounds import linalg
from opsumbounds.cbs import OperatorFamily, as_weights, cbs_norm_check, cbs_operator_gap
from opsumbounds.errors import DimensionMismatch
from opsumbounds.rng import PortableRng


def _random_instance(seed, d, n):
    rng = PortableRng(seed)
    return rng.complex_normal(n), OperatorFamily(rng.complex_normal((n, d, d)))


def test_family_validation():
    with pytest.raises(DimensionMismatch):
        OperatorFamily(np.zeros((2, 3, 4)))
    with pytest.raises(DimensionMismatch):
        OperatorFamily([np.eye(2), np.eye(3)])
    with pytest.raises(ValueError):
        OperatorFamily(np.full((1, 2, 2), np.nan))
    fam = OperatorFamily([np.eye(2), 2 * np.eye(2)])
    assert fam.count == 2 and fam.dim == 2


def test_as_weights_shapes():
    w = as_weights([1.0, 1j], 2)
    assert w.dtype == np.complex128
    with pytest.raises(DimensionMismatch):
        as_weights([1.0], 2)
    with pytest.raises(ValueError):
        as_weights([np.inf], 1)


def test_family_cached_norms_hand_values():
    fam = OperatorFamily([np.diag([3.0, 0.0]), np.diag([0.0, 4.0])])
    assert fam.norms == pytest.approx([3.0, 4.0], rel=1e-10)
    # disjoint diagonal supports: cross products vanish exactly
    assert fam.cross[0, 1] == 0.0
    assert fam.cross[1, 0] == 0.0
    assert fam.cross[0, 0] == pytest.approx(9.0, rel=1e-10)
    assert fam.cross[1, 1] == pytest.approx(16.0, rel=1e-10)
    assert fam.sum_products_norm == pytest.approx(16.0, rel=1e-10)


def test_cross_table_is_symmetric_and_matches_direct():
    w, fam = _random_instance(31, d=5, n=4)
    for i in range(4):
        for j in range(4):
            direct = float(np.linalg.svd(fam.ops[i] @ fam.ops[j].conj().T, compute_uv=False)[0])
            assert fam.cross[i, j] == pytest.approx(direct, rel=1e-9, abs=1e-12)
    assert np.array_equal(fam.cross, fam.cross.T)


def test_gap_single_operator_is_exactly_degenerate():
    # n = 1: the gap is |z|^2 A A^* - (zA)(zA)^* = 0
    rng = PortableRng(8)
    fam = OperatorFamily(rng.complex_normal((1, 4, 4)))
    res = cbs_operator_gap([1.7 - 0.3j], fam)
    assert res.holds
    assert abs(res.min_eigenvalue) <= 1e-10 * max(1.0, res.gap_norm)
    assert res.inner_holds


def test_gap_holds_on_random_ensemble():
    for seed in range(25):
        w, fam = _random_instance(seed, d=2 + seed % 6, n=1 + seed % 5)
        res = cbs_operator_gap(w, fam)
        assert res.holds, (seed, res.min_eigenvalue)
        assert res.inner_holds
        # the gap matrix itself is Hermitian by construction
        assert np.abs(res.gap - res.gap.conj().T).max() == 0.0


def test_gap_global_phase_invariance():
    # S picks up the phase, S S^* and sum |z|^2 do not: the gap matrix
    # is unchanged up to roundoff
    w, fam = _random_instance(404, d=4, n=3)
    base = cbs_operator_gap(w, fam)
    spun = cbs_operator_gap(w * np.exp(0.7j), fam)
    scale = max(1.0, base.gap_norm)
    assert np.abs(base.gap - spun.gap).max() <= 1e-12 * scale
    assert abs(base.min_eigenvalue - spun.min_eigenvalue) <= 1e-10 * scale


def test_norm_check_holds_and_scales():
    w, fam = _random_instance(99, d=5, n=4)
    lhs, rhs, ok = cbs_norm_check(w, fam)
    assert ok and lhs <= rhs * (1 + 1e-9)
    c = 2.5 - 1.5j
    lhs2, rhs2, ok2 = cbs_norm_check(np.asarray(w) * c, fam)
    assert ok2
    assert lhs2 == pytest.approx(abs(c) ** 2 * lhs, rel=1e-10)
    assert rhs2 == pytest.approx(abs(c) ** 2 * rhs, rel=1e-10)


def test_norm_check_equality_for_identical_phases():
    # A_i = c_i U with |c_i| arranged so S S^* is a multiple of the
    # identity: then lhs equals (sum |z_i c_i|)^2 <= rhs with equality
    # when the products z_i c_i share one phase
    fam = OperatorFamily([np.eye(3), 2.0 * np.eye(3)])
    lhs, rhs, ok = cbs_norm_check([2.0, 1.0], fam)
    assert ok
    assert lhs == pytest.approx(16.0, rel=1e-10)          # ||2I + 2I||^2
    assert rhs == pytest.approx(5.0 * 5.0, rel=1e-10)     # (4+1) * ||I+4I||


def test_weighted_sum_matches_manual():
    w, fam = _random_instance(1234, d=3, n=2)
    manual = w[0] * fam.ops[0] + w[1] * fam.ops[1]
    assert np.allclose(fam.weighted_sum(w), manual, rtol=0, atol=1e-14)


def test_gap_psd_verdict_uses_relative_scale():
    # scaling the instance must not flip the verdict
    w, fam = _random_instance(17, d=4, n=3)
    big = OperatorFamily(fam.ops * 1e6)
    assert cbs_operator_gap(np.asarray(w) * 1e3, big).holds
