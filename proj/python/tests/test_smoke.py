import numpy as np
import pytest

import retina_fundus as rf


def fundus(size=300, disc=(210, 140), radius=22, seed=0):
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[:size, :size]
    img = np.zeros((size, size, 3), np.uint8)
    fov = (xx - size / 2) ** 2 + (yy - size / 2) ** 2 <= (0.48 * size) ** 2
    img[fov] = (150, 70, 30)
    d = (xx - disc[0]) ** 2 + (yy - disc[1]) ** 2 <= radius**2
    img[d] = (250, 220, 150)
    noise = rng.integers(-4, 5, img.shape)
    return np.clip(img.astype(int) + noise * fov[..., None], 0, 255).astype(np.uint8)


def test_optic_disc_found_on_synthetic_fundus():
    od = rf.locate_optic_disc(fundus())
    assert np.hypot(od.center_full.x - 210, od.center_full.y - 140) <= 5


def test_vessel_and_exudate_masks_have_input_shape():
    img = fundus(size=200, disc=(140, 90), radius=15)
    for mask in (rf.segment_vessels(img), rf.detect_exudates(img)):
        assert mask.shape == (200, 200)
        assert mask.dtype == np.uint8
        assert set(np.unique(mask)) <= {0, 255}


def test_confusion_and_metrics_match_numpy():
    rng = np.random.default_rng(3)
    pred = rng.integers(0, 2, (40, 30)).astype(np.uint8)
    gt = rng.integers(0, 2, (40, 30)).astype(np.uint8)
    c = rf.confusion(pred, gt)
    assert c["tp"] == int(np.sum((pred == 1) & (gt == 1)))
    assert c["fn"] == int(np.sum((pred == 0) & (gt == 1)))
    m = rf.metrics(**c)
    assert m["dice"] == pytest.approx(2 * c["tp"] / (2 * c["tp"] + c["fp"] + c["fn"]))
    assert rf.metrics(0, 5, 0, 0)["sensitivity"] is None


def test_median_matches_numpy_in_interior():
    rng = np.random.default_rng(7)
    g = rng.integers(0, 256, (25, 31)).astype(np.uint8)
    out = rf.median_filter(g, 3)
    win = np.lib.stride_tricks.sliding_window_view(g, (3, 3))
    np.testing.assert_array_equal(out[1:-1, 1:-1], np.median(win, axis=(2, 3)).astype(np.uint8))


def test_clahe_and_canny_shapes():
    g = np.tile(np.arange(64, dtype=np.uint8) * 4, (48, 1))
    assert rf.clahe(g, 2.0, (4, 4)).shape == g.shape
    assert rf.canny(np.zeros((20, 20), np.uint8)).sum() == 0


def test_reference_network_shapes():
    trace = rf.trace_shapes()
    spatial = [(h, w) for h, w, c, p in trace if c > 1 and h > 1]
    assert (150, 150) in spatial and (75, 75) in spatial and (37, 37) in spatial
    assert trace[-1][:3] == (1, 1, 1)
    assert rf.output_extent(300, 2, 2, "valid") == 150


def test_bad_architecture_raises():
    with pytest.raises(ValueError):
        rf.trace_shapes("4x4x1", "maxpool 2 2\nmaxpool 2 2\nmaxpool 2 2\n")


def test_config_roundtrip_and_validation():
    cfg = rf.PipelineConfig()
    assert cfg.asf_schedule == [(5, 5), (7, 7), (15, 15), (11, 11)]
    cfg.median_k = 4
    with pytest.raises(ValueError):
        cfg.validate()
