import pytest

from app.core.config import settings
from app.core.error_handling import PreconditionViolation, SamplingExhausted
from app.models.family import FamilyTag
from app.services.metrics import eval_metric, metric_inverse, signature, singular_distance
from app.services.sampling import default_box, parse_box, sample_points
from tests.helpers import ALL, load, variant


def test_same_seed_same_points():
    cfg = load("f2211_generic")
    assert sample_points(cfg, 8, seed=42) == sample_points(cfg, 8, seed=42)
    assert sample_points(cfg, 8, seed=42) != sample_points(cfg, 8, seed=43)


def test_prefix_stable_in_sample_size():
    cfg = load("f411_generic")
    assert sample_points(cfg, 10, seed=5)[:4] == sample_points(cfg, 4, seed=5)


@pytest.mark.parametrize("name", ALL)
def test_points_keep_clear_of_singular_locus(name):
    cfg = load(name)
    for p in sample_points(cfg, 10, seed=0):
        assert singular_distance(cfg, p) >= settings.SINGULAR_MARGIN


@pytest.mark.parametrize("n", [0, -3])
def test_non_positive_sample_size(n):
    with pytest.raises(PreconditionViolation):
        sample_points(load("f33_flat"), n, seed=0)


def test_exhaustion(monkeypatch):
    monkeypatch.setattr(settings, "MAX_REJECTIONS_PER_POINT", 5)
    # f5 = 0.5 sits inside the x^2 range, so f2 = f5 is always within the margin
    cfg = variant("f2211_eps", f5={"coeffs": [0.5]})
    with pytest.raises(SamplingExhausted):
        sample_points(cfg, 2, seed=0, box=parse_box("0.49:0.51"))


def test_custom_box_respected():
    box = parse_box("0.2:0.3")
    cfg = load("f51_eps")
    # f6 = 3 is far from f5 = x^5, so every draw in the box is accepted
    for p in sample_points(cfg, 5, seed=1, box=box):
        assert all(0.2 <= v <= 0.3 for v in p.x)


@pytest.mark.parametrize("text", ["1", "a:b", "0.5:0.1", "0:0", "1:2:3", "nan:1"])
def test_parse_box_rejects(text):
    with pytest.raises(PreconditionViolation):
        parse_box(text)


def test_default_box_shifts():
    box = default_box(FamilyTag.T2211)
    assert box[0] == (0.1, 0.9)
    assert box[4] == pytest.approx((2.1, 2.9))
    assert box[5] == pytest.approx((1.9, 2.7))
    assert default_box(FamilyTag.T51)[4] == (0.1, 0.9)


@pytest.mark.parametrize("name", ALL)
def test_sampled_metrics_pass_determinant_guard(name):
    cfg = load(name)
    for p in sample_points(cfg, 5, seed=0):
        m = eval_metric(cfg, p)
        metric_inverse(m)
        assert sum(signature(m)) == 6


def test_determinant_failures_count_as_rejections(monkeypatch):
    # Hadamard's bound caps |det g| at the row-norm product, so a relative tolerance of 2 rejects everything
    monkeypatch.setattr(settings, "DET_RTOL", 2.0)
    monkeypatch.setattr(settings, "MAX_REJECTIONS_PER_POINT", 3)
    with pytest.raises(SamplingExhausted):
        sample_points(load("f33_flat"), 2, seed=0)
