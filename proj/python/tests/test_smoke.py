import numpy as np
import pytest

import qnttnn


def test_hamilton_product():
    assert qnttnn.hamilton_product([0, 1, 0, 0], [0, 0, 1, 0]) == pytest.approx([0, 0, 0, 1])
    assert qnttnn.hamilton_product([0, 0, 1, 0], [0, 1, 0, 0]) == pytest.approx([0, 0, 0, -1])


def test_embedding_and_nuclear_norm():
    rng = np.random.default_rng(0)
    q = rng.standard_normal((3, 2, 4))
    e = qnttnn.embed_full(q)
    assert e.shape == (12, 8)
    assert np.linalg.norm(e) == pytest.approx(2 * np.linalg.norm(q))
    sv = np.linalg.svd(e, compute_uv=False)
    assert qnttnn.q_nuclear_norm(q) == pytest.approx(sv.sum() / 4, rel=1e-12)
    with pytest.raises(ValueError):
        qnttnn.q_nuclear_norm(np.zeros((2, 2, 3)))


def test_mask_and_synth_are_seeded():
    m = qnttnn.sample_mask((10, 10, 4), 0.5, seed=3)
    assert m.dtype == bool and m.shape == (10, 10, 4)
    assert np.array_equal(m, qnttnn.sample_mask((10, 10, 4), 0.5, seed=3))
    t = qnttnn.synth_lowrank(6, 5, 4, 2, seed=1)
    assert t.shape == (6, 5, 4, 4)
    assert t.min() >= 0.0 and t.max() <= 1.0
    with pytest.raises(qnttnn.InvalidArgument):
        qnttnn.sample_mask((2, 2, 2), 0.0)


def test_complete_recovers_synthetic_tensor():
    truth = qnttnn.synth_lowrank(12, 12, 6, 2, seed=0)
    mask = qnttnn.sample_mask(truth.shape[:3], 0.6, seed=1)
    observed = np.where(mask[..., None], truth, 0.0)
    out = qnttnn.complete(observed, mask, r=4, max_iters=60, diagnostics=True)
    x = out["x"]
    assert x.shape == truth.shape
    assert np.allclose(x[mask], truth[mask])
    assert qnttnn.rse(x, truth) < qnttnn.rse(observed, truth)
    assert all(row["decrease_margin"] >= 0 for row in out["history"])
    assert out["structure_dev"] < 1e-10
    assert np.isfinite(qnttnn.psnr(x, truth))
    assert qnttnn.ssim(x, truth) <= 1.0 + 1e-12


def test_errors_map_to_exceptions():
    truth = qnttnn.synth_lowrank(4, 4, 3, 1)
    mask = np.ones((4, 4, 3), dtype=bool)
    with pytest.raises(qnttnn.InvalidArgument):
        qnttnn.complete(truth, mask, r=5)
    with pytest.raises(ValueError):
        qnttnn.complete(truth, np.ones((4, 4, 2), dtype=bool), r=2)
