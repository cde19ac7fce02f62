import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from edgehist.image import (
    ImageIOError,
    clamp,
    load_image,
    map_channels,
    merge_channels,
    round_half_away,
    save_image,
    split_channels,
)


def test_load_single_white_pixel(tmp_path):
    path = tmp_path / "white.pgm"
    path.write_bytes(b"P5\n1 1\n255\n\xff")
    img = load_image(path)
    assert img.shape == (1, 1)
    assert img.dtype == np.float64
    assert img[0, 0] == 255.0


def test_load_gray_128(tmp_path):
    path = tmp_path / "gray.pgm"
    path.write_bytes(b"P5\n2 2\n255\n" + bytes([128] * 4))
    np.testing.assert_array_equal(load_image(path), np.full((2, 2), 128.0))


def test_truncated_file_is_unreadable(tmp_path):
    good = tmp_path / "good.png"
    save_image(np.full((16, 16), 7.0), good)
    bad = tmp_path / "bad.png"
    bad.write_bytes(good.read_bytes()[:30])
    with pytest.raises(ImageIOError) as exc:
        load_image(bad)
    assert exc.value.reason == "unreadable"


def test_missing_file_is_unreadable(tmp_path):
    with pytest.raises(ImageIOError, match="unreadable"):
        load_image(tmp_path / "nope.png")


def test_sixteen_bit_rejected(tmp_path):
    path = tmp_path / "deep.pgm"
    path.write_bytes(b"P5\n1 1\n65535\n\x01\x00")
    with pytest.raises(ImageIOError) as exc:
        load_image(path)
    assert exc.value.reason == "unsupported bit depth"


def test_lossy_extension_rejected(tmp_path):
    with pytest.raises(ImageIOError, match="unsupported format"):
        save_image(np.zeros((2, 2)), tmp_path / "x.jpg")
    with pytest.raises(ImageIOError, match="unsupported format"):
        load_image(tmp_path / "x.jpeg")


@pytest.mark.parametrize("value, stored", [(254.5, 255), (0.0, 0), (0.5, 1), (127.49, 127)])
def test_save_rounding(tmp_path, value, stored):
    path = tmp_path / "r.pgm"
    save_image(np.array([[value]]), path)
    assert load_image(path)[0, 0] == stored


def test_round_half_away_from_zero():
    np.testing.assert_array_equal(
        round_half_away([-2.5, -0.5, 0.5, 1.5, 2.5]), [-3, -1, 1, 2, 3]
    )


@pytest.mark.parametrize("bad", [255.01, -0.01, np.nan])
def test_save_rejects_out_of_range(tmp_path, bad):
    path = tmp_path / "o.png"
    with pytest.raises(ImageIOError, match="out of range"):
        save_image(np.array([[0.0, bad]]), path)
    assert not path.exists()


def test_save_unwritable(tmp_path):
    with pytest.raises(ImageIOError, match="unwritable"):
        save_image(np.zeros((2, 2)), tmp_path / "missing-dir" / "x.png")


@settings(max_examples=30, deadline=None)
@given(
    arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12))),
    st.sampled_from([".png", ".pgm"]),
)
def test_roundtrip_gray(tmp_path_factory, data, ext):
    path = tmp_path_factory.mktemp("rt") / f"img{ext}"
    img = data.astype(float)
    save_image(img, path)
    np.testing.assert_array_equal(load_image(path), img)


@settings(max_examples=30, deadline=None)
@given(
    arrays(np.uint8, st.tuples(st.integers(1, 9), st.integers(1, 9), st.just(3))),
    st.sampled_from([".png", ".ppm"]),
)
def test_roundtrip_color(tmp_path_factory, data, ext):
    path = tmp_path_factory.mktemp("rt") / f"img{ext}"
    img = data.astype(float)
    save_image(img, path)
    np.testing.assert_array_equal(load_image(path), img)


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, (5, 4), elements=st.floats(0, 255)))
def test_save_load_equals_rounding(tmp_path_factory, img):
    path = tmp_path_factory.mktemp("rt") / "r.png"
    save_image(img, path)
    np.testing.assert_array_equal(load_image(path), round_half_away(img))


def test_clamp_examples():
    np.testing.assert_array_equal(clamp(np.array([300.0, -4.0, 100.0]), 0, 255), [255, 0, 100])


@given(arrays(np.float64, 10, elements=st.floats(-1e3, 1e3)))
def test_clamp_idempotent(x):
    once = clamp(x, 0, 255)
    np.testing.assert_array_equal(clamp(once, 0, 255), once)


def test_clamp_rejects_inverted_bounds():
    with pytest.raises(ValueError):
        clamp(np.zeros(3), 5, 1)


def test_channel_split_merge_roundtrip():
    rng = np.random.default_rng(1)
    img = rng.uniform(0, 255, (4, 6, 3))
    np.testing.assert_array_equal(merge_channels(split_channels(img)), img)


def test_merge_rejects_mismatched_channels():
    with pytest.raises(ValueError, match="do not match"):
        merge_channels([np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 3))])


def test_map_channels_gray_and_color():
    gray = np.arange(6.0).reshape(2, 3)
    np.testing.assert_array_equal(map_channels(lambda c: c + 1, gray), gray + 1)
    color = np.stack([gray, 2 * gray, 3 * gray], axis=-1)
    np.testing.assert_array_equal(map_channels(lambda c: -c, color), -color)
