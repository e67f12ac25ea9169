import csv

import numpy as np
import pytest

from opsumbounds.bounds import tightest_bound
from opsumbounds.errors import InvalidSpec
from opsumbounds.harness import (
    CSV_HEADER,
    InstanceSpec,
    generate,
    slack_sweep,
    verify_instance,
    verify_spec,
    write_slack_csv,
)


def test_generate_is_deterministic():
    spec = InstanceSpec("GaussianDense", 5, 3, 17)
    w1, fam1, _ = generate(spec)
    w2, fam2, _ = generate(spec)
    assert w1.tobytes() == w2.tobytes()
    assert fam1.ops.tobytes() == fam2.ops.tobytes()


def test_generate_separates_seeds_and_kinds():
    w1, fam1, _ = generate(InstanceSpec("GaussianDense", 4, 2, 0))
    w2, fam2, _ = generate(InstanceSpec("GaussianDense", 4, 2, 1))
    assert fam1.ops.tobytes() != fam2.ops.tobytes()
    _, fam3, _ = generate(InstanceSpec("UnitaryScaled", 4, 2, 0))
    assert fam1.ops.tobytes() != fam3.ops.tobytes()


def test_block_orthogonal_cross_vanishes_exactly():
    _, fam, _ = generate(InstanceSpec("BlockOrthogonal", 7, 3, 5))
    off = fam.cross.copy()
    np.fill_diagonal(off, 0.0)
    # disjoint blocks: the products are the zero matrix, not merely small
    assert off.max() == 0.0


def test_orthonormal_rank_one_structure():
    w, fam, vf = generate(InstanceSpec("OrthonormalRankOne", 5, 4, 9))
    assert np.all(w == 1.0)
    assert vf is not None and vf.count == 4
    for op in fam.ops:
        assert np.allclose(op @ op, op, atol=1e-12)
        assert np.allclose(op.conj().T, op, atol=1e-12)
    off = fam.cross.copy()
    np.fill_diagonal(off, 0.0)
    assert off.max() == 0.0


def test_unitary_scaled_columns_are_orthogonal():
    _, fam, _ = generate(InstanceSpec("UnitaryScaled", 4, 3, 21))
    for i, op in enumerate(fam.ops):
        scale_sq = fam.norms[i] ** 2
        assert np.allclose(op.conj().T @ op, scale_sq * np.eye(4), atol=1e-9 * scale_sq)


def test_rank_one_kind_matches_vector_family():
    from opsumbounds.vectors import rank_one_family

    _, fam, vf = generate(InstanceSpec("RankOneFromVectors", 6, 4, 2))
    assert vf is not None
    assert np.allclose(fam.ops, rank_one_family(vf).ops)


def test_spec_validation():
    with pytest.raises(InvalidSpec):
        InstanceSpec("NoSuchKind", 3, 2, 0)
    with pytest.raises(InvalidSpec):
        InstanceSpec("GaussianDense", 0, 2, 0)
    with pytest.raises(InvalidSpec):
        InstanceSpec("GaussianDense", 3, 0, 0)
    with pytest.raises(InvalidSpec):
        InstanceSpec("GaussianDense", 3, 2, "0")
    with pytest.raises(InvalidSpec):
        InstanceSpec("BlockOrthogonal", 2, 3, 0)
    with pytest.raises(InvalidSpec):
        InstanceSpec("OrthonormalRankOne", 2, 3, 0)


def test_verify_instance_holds_and_names():
    res = verify_spec(InstanceSpec("GaussianDense", 4, 3, 11))
    assert res.all_hold
    assert res.worst_violation == 0.0
    names = [c.name for c in res.checks]
    assert names[:3] == ["psd_gap", "psd_gap_inner", "cbs_norm"]
    assert "cross_total" in names and "max_terms" in names
    assert "l2_cross(r=2,s=2)" in names and "l1_cross" in names
    assert sum(n.startswith("image_probe_") for n in names) == 9
    assert sum(n.startswith("bilinear_probe_") for n in names) == 9
    # 3 leading checks, 61 catalog entries, 18 probe checks
    assert len(res.checks) == 82


def test_verify_orthonormal_has_extra_checks():
    res = verify_spec(InstanceSpec("OrthonormalRankOne", 4, 4, 3))
    assert res.all_hold
    names = [c.name for c in res.checks]
    assert sum(n.startswith("orthogonal:") for n in names) == 7
    assert len(res.checks) == 89


def test_verify_single_operator_slack_is_unit():
    res = verify_spec(InstanceSpec("GaussianDense", 4, 1, 23))
    assert res.all_hold
    skip = ("psd_gap", "psd_gap_inner", "image_probe", "bilinear_probe")
    for c in res.checks:
        if c.name.startswith(skip):
            continue
        assert c.slack_ratio == pytest.approx(1.0, rel=1e-9), c.name


def test_verify_records_spec_and_validates_tol():
    spec = InstanceSpec("GaussianDense", 3, 2, 1)
    res = verify_spec(spec)
    assert res.spec == spec
    w, fam, _ = generate(spec)
    with pytest.raises(ValueError):
        verify_instance(w, fam, tol=0.0)


def test_sweep_shape_and_order():
    specs = [
        InstanceSpec("GaussianDense", 3, 2, 0),
        InstanceSpec("GaussianDense", 4, 3, 1),
        InstanceSpec("OrthonormalRankOne", 4, 4, 2),
    ]
    rows = slack_sweep(specs)
    assert len(rows) == 61 + 61 + 68
    assert rows[0][:6] == (0, "GaussianDense", 3, 2, "master:max_weight+max_pair", "")
    assert rows[61][:4] == (1, "GaussianDense", 4, 3)
    # per-instance minimum of the sweep equals the tightest report
    for spec, start, size in [(specs[0], 0, 61), (specs[1], 61, 61)]:
        w, fam, _ = generate(spec)
        tight = tightest_bound(w, fam).bound
        assert min(r[7] for r in rows[start : start + size]) == tight


def test_sweep_orthonormal_cross_total_row():
    rows = slack_sweep([InstanceSpec("OrthonormalRankOne", 4, 4, 8)])
    row = next(r for r in rows if r[4] == "cross_total")
    # the assembled sum is the identity, the cross table is the identity
    assert row[6] == pytest.approx(1.0, rel=1e-9)
    assert row[7] == pytest.approx(4.0, rel=1e-9)
    assert row[8] == pytest.approx(4.0, rel=1e-9)


def test_csv_round_trip(tmp_path):
    rows = slack_sweep([InstanceSpec("GaussianDense", 3, 2, 4)])
    path = tmp_path / "sweep.csv"
    write_slack_csv(rows, path)
    raw = path.read_bytes()
    assert b"\r" not in raw
    assert raw.endswith(b"\n")
    with open(path, newline="", encoding="utf-8") as fh:
        parsed = list(csv.reader(fh))
    assert tuple(parsed[0]) == CSV_HEADER
    assert len(parsed) == 1 + len(rows)
    for row, rec in zip(rows, parsed[1:]):
        # 17 significant digits survive the text round trip exactly
        assert float(rec[6]) == row[6]
        assert float(rec[7]) == row[7]
        assert float(rec[8]) == row[8]
