import numpy as np
import pytest
from PIL import Image as PILImage

from dejitter import Image, load_png, pnorm_pow, sample, save_png
from dejitter.image import warp_horizontal, warp_rows, warp_vector

from helpers import constant_image, random_image


def test_sample_in_range_constant():
    img = constant_image(4, 5, 0.5, channels=3)
    assert np.array_equal(sample(img, 2, 3), [0.5, 0.5, 0.5])


def test_sample_out_of_domain_is_zero():
    img = random_image(4, 5, seed=1)
    assert np.array_equal(sample(img, 0, 1), [0.0])
    assert np.array_equal(sample(img, 5 + 3, 4), [0.0])


def test_sample_is_total():
    img = random_image(3, 3, seed=2)
    for i in (-10, 0, 1, 3, 4, 100):
        for j in (-10, 0, 1, 3, 4, 100):
            v = sample(img, i, j)
            assert v.shape == (1,)


def test_pnorm_pow_examples():
    assert pnorm_pow(np.zeros(3), 0.7) == 0.0
    assert pnorm_pow(np.ones(3), 0.5) == 3.0
    assert pnorm_pow(np.array([0.25]), 0.5) == pytest.approx(0.5, rel=1e-12)


def test_pnorm_pow_zero_iff_zero_vector():
    rng = np.random.default_rng(3)
    for _ in range(20):
        v = rng.random(3) + 1e-6
        assert pnorm_pow(v, 0.5) > 0.0
    with pytest.raises(ValueError):
        pnorm_pow(np.ones(2), 0.0)


def test_image_validation():
    with pytest.raises(ValueError):
        Image(np.full((2, 2), 1.5))
    with pytest.raises(ValueError):
        Image(np.full((2, 2), -0.1))
    with pytest.raises(ValueError):
        Image(np.zeros((2, 2, 2)))  # only 1 or 3 channels
    with pytest.raises(ValueError):
        Image(np.zeros((0, 3, 1)))
    with pytest.raises(ValueError):
        Image(np.full((2, 2), np.nan))


def test_image_is_immutable():
    img = constant_image(2, 2)
    with pytest.raises(ValueError):
        img.data[0, 0, 0] = 1.0


def test_from_bytes_scale():
    raw = np.array([[0, 51, 255]], dtype=np.uint8)
    img = Image.from_bytes(raw)
    assert np.allclose(img.data[0, :, 0], [0.0, 0.2, 1.0])


def _warp_oracle(img, offset_fn):
    out = np.zeros_like(np.asarray(img.data))
    for j in range(1, img.height + 1):
        for i in range(1, img.width + 1):
            di, dj = offset_fn(i, j)
            out[j - 1, i - 1] = sample(img, i + di, j + dj)
    return out


def test_warp_rows_matches_sample():
    img = random_image(5, 7, channels=3, seed=4)
    shifts = np.array([-3, 0, 2, 7, -7])
    got = warp_rows(img, shifts)
    want = _warp_oracle(img, lambda i, j: (int(shifts[j - 1]), 0))
    assert np.array_equal(got.data, want)


def test_warp_horizontal_matches_sample():
    img = random_image(4, 6, seed=5)
    rng = np.random.default_rng(6)
    offs = rng.integers(-4, 5, size=(4, 6))
    got = warp_horizontal(img, offs)
    want = _warp_oracle(img, lambda i, j: (int(offs[j - 1, i - 1]), 0))
    assert np.array_equal(got.data, want)


def test_warp_vector_matches_sample():
    img = random_image(4, 6, channels=3, seed=7)
    rng = np.random.default_rng(8)
    dx = rng.integers(-3, 4, size=(4, 6))
    dy = rng.integers(-3, 4, size=(4, 6))
    got = warp_vector(img, dx, dy)
    want = _warp_oracle(img, lambda i, j: (int(dx[j - 1, i - 1]), int(dy[j - 1, i - 1])))
    assert np.array_equal(got.data, want)


def test_png_roundtrip_gray_and_color(tmp_path):
    rng = np.random.default_rng(9)
    for channels in (1, 3):
        raw = rng.integers(0, 256, size=(6, 5, channels), dtype=np.uint8)
        img = Image.from_bytes(raw)
        path = tmp_path / f"img{channels}.png"
        save_png(img, path)
        back = load_png(path)
        assert np.array_equal(back.data, img.data)


def test_png_rejects_alpha(tmp_path):
    path = tmp_path / "rgba.png"
    PILImage.new("RGBA", (4, 4)).save(path)
    with pytest.raises(ValueError, match="alpha"):
        load_png(path)


def test_png_rejects_other_modes(tmp_path):
    path = tmp_path / "p.png"
    PILImage.new("P", (4, 4)).save(path)
    with pytest.raises(ValueError):
        load_png(path)
    path16 = tmp_path / "i16.png"
    PILImage.new("I;16", (4, 4)).save(path16)
    with pytest.raises(ValueError):
        load_png(path16)
