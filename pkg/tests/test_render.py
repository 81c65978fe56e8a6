import numpy as np
import pytest

from tms.numerics import FAMILIES
from tms.rational import RationalMap
from tms.render import RenderConfig, render_julia


@pytest.fixture(scope="module")
def square():
    cfg = RenderConfig(center=0j, scale=1.5, width=256, height=256, max_iter=200)
    return render_julia(RationalMap.monomial(2), cfg)


def test_circle_within_one_pixel(square):
    cfg = square.config
    z = cfg.grid()
    julia = square.labels < 0
    assert julia.any()
    assert float(np.max(np.abs(np.abs(z[julia]) - 1))) <= cfg.pixel
    # and every pixel far from the circle is captured
    far = np.abs(np.abs(z) - 1) > 2 * cfg.pixel
    assert not julia[far].any()


def test_two_colours(square):
    cfg = square.config
    z = cfg.grid()
    inside = square.labels[np.abs(z) < 0.9]
    outside = square.labels[np.abs(z) > 1.1]
    assert len(set(inside.tolist())) == 1 and len(set(outside.tolist())) == 1
    assert inside[0] != outside[0]


def test_thread_count_does_not_matter():
    R = FAMILIES["mcmullen"].rational(1e4)
    cfg = RenderConfig(scale=1.2, width=96, height=96, max_iter=150)
    a = render_julia(R, cfg, threads=1)
    b = render_julia(R, cfg, threads=4)
    assert np.array_equal(a.labels, b.labels) and np.array_equal(a.times, b.times)


def test_resolution_stable():
    R = FAMILIES["mcmullen"].rational(1e4)
    lo = render_julia(R, RenderConfig(scale=1.5, width=128, height=128, max_iter=300))
    hi = render_julia(R, RenderConfig(scale=1.5, width=256, height=256, max_iter=300))
    assert abs(lo.julia_fraction - hi.julia_fraction) < 0.05


def test_godillon_renders():
    R = FAMILIES["godillon-3"].rational(1e4)
    r = render_julia(R, RenderConfig(center=1 + 0j, scale=1.5, width=64, height=64, max_iter=200))
    assert 0 < r.julia_fraction < 1 and len(r.cycles) >= 1


def test_distance_estimate_can_be_switched_off():
    cfg = RenderConfig(width=64, height=64, max_iter=100, julia_width=0)
    r = render_julia(RationalMap.monomial(2), cfg)
    assert r.julia_fraction < 0.02


def test_save(tmp_path, square):
    written = square.save(tmp_path / "sq.png")
    assert [p.suffix for p in written] == [".png", ".ppm"]
    data = (tmp_path / "sq.ppm").read_bytes()
    assert data.startswith(b"P6\n256 256\n255\n") and len(data) == 15 + 256 * 256 * 3
    assert square.rgb().shape == (256, 256, 3)
