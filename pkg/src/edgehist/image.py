"""Image values, channel handling and lossless raster I/O.

Images are plain ``float64`` numpy arrays on the 8-bit intensity scale
[0, 255]: a grayscale image has shape ``(m, n)`` and a color image has
shape ``(m, n, 3)`` with channels in R, G, B order. Quantization to
integers happens only in :func:`save_image`.

Supported files are PGM/PPM (binary portable graymap/pixmap) and PNG.
``load_image(save_image(x))`` equals ``round_half_away(x)`` exactly.
"""

import os

import numpy as np
from PIL import Image as _PILImage

LOSSLESS_FORMATS = {
    ".png": "PNG",
    ".pgm": "PPM",
    ".ppm": "PPM",
    ".pnm": "PPM",
}


class ImageIOError(OSError):
    """Raised when an image file cannot be read or written.

    ``reason`` is one of ``"unreadable"``, ``"unsupported bit depth"``,
    ``"unsupported format"``, ``"out of range"`` or ``"unwritable"``.
    """

    def __init__(self, reason, path, detail=""):
        self.reason = reason
        self.path = os.fspath(path)
        msg = f"{reason}: {self.path}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


def as_image(data):
    """Return ``data`` as a float64 grayscale or color image array."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim == 2 and arr.size > 0:
        return arr
    if arr.ndim == 3 and arr.shape[2] == 3 and arr.size > 0:
        return arr
    raise ValueError(
        f"expected an (m, n) or (m, n, 3) array with m, n >= 1, got shape {arr.shape}"
    )


def is_color(img):
    return np.ndim(img) == 3


def split_channels(img):
    """Split an ``(m, n, 3)`` color image into three ``(m, n)`` images."""
    img = as_image(img)
    if not is_color(img):
        raise ValueError("split_channels expects a color image")
    return [img[:, :, c].copy() for c in range(3)]


def merge_channels(channels):
    channels = [as_image(c) for c in channels]
    if len(channels) != 3:
        raise ValueError(f"expected 3 channels, got {len(channels)}")
    shape = channels[0].shape
    if any(c.shape != shape or c.ndim != 2 for c in channels):
        raise ValueError("channel dimensions do not match")
    return np.stack(channels, axis=-1)


def map_channels(func, img):
    """Apply ``func`` to a grayscale image, or to each channel of a color one."""
    img = as_image(img)
    if is_color(img):
        return merge_channels([func(c) for c in split_channels(img)])
    return func(img)


def clamp(img, lo=0.0, hi=255.0):
    """Elementwise ``min(max(v, lo), hi)``."""
    if lo > hi:
        raise ValueError(f"clamp bounds out of order: lo={lo} > hi={hi}")
    return np.clip(np.asarray(img, dtype=np.float64), lo, hi)


def round_half_away(x):
    """Round to the nearest integer, ties away from zero (254.5 -> 255)."""
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def _format_for(path):
    ext = os.path.splitext(os.fspath(path))[1].lower()
    fmt = LOSSLESS_FORMATS.get(ext)
    if fmt is None:
        raise ImageIOError(
            "unsupported format", path,
            f"extension {ext or '(none)'!r}; use one of {sorted(LOSSLESS_FORMATS)}",
        )
    return fmt


def load_image(path):
    """Read an 8-bit grayscale or RGB raster.

    Returns an ``(m, n)`` array for grayscale files and ``(m, n, 3)`` for
    color files, with pixel values mapped exactly to floats in 0..255.
    """
    _format_for(path)
    try:
        with _PILImage.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "P":
                im = im.convert("RGBA" if "transparency" in im.info else "RGB")
                mode = im.mode
            if mode not in ("L", "RGB"):
                raise ImageIOError(
                    "unsupported bit depth", path, f"mode {mode!r}; need 8-bit L or RGB"
                )
            arr = np.asarray(im, dtype=np.uint8)
    except ImageIOError:
        raise
    except (OSError, SyntaxError, ValueError) as exc:
        raise ImageIOError("unreadable", path, str(exc)) from exc
    return arr.astype(np.float64)


def save_image(img, path):
    """Quantize with :func:`round_half_away` and write losslessly.

    Values outside [0, 255] (or non-finite) raise :class:`ImageIOError`
    rather than being clipped silently: they indicate an upstream bug.
    """
    fmt = _format_for(path)
    img = as_image(img)
    if not np.all(np.isfinite(img)) or img.min() < 0.0 or img.max() > 255.0:
        raise ImageIOError(
            "out of range", path,
            f"values must lie in [0, 255], got [{np.nanmin(img)}, {np.nanmax(img)}]",
        )
    ext = os.path.splitext(os.fspath(path))[1].lower()
    if ext == ".pgm" and is_color(img):
        raise ImageIOError("unsupported format", path, "PGM cannot hold a color image")
    if ext == ".ppm" and not is_color(img):
        img = np.repeat(img[:, :, None], 3, axis=2)
    q = round_half_away(img).astype(np.uint8)
    im = _PILImage.fromarray(q)
    try:
        # fixed PNG settings keep output byte-identical across runs
        if fmt == "PNG":
            im.save(path, format=fmt, optimize=False, compress_level=6)
        else:
            im.save(path, format=fmt)
    except OSError as exc:
        raise ImageIOError("unwritable", path, str(exc)) from exc
