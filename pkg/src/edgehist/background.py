"""Multi-scale sliding-window estimate of a document's background level.

Background paper regions are flat, so the brightest window whose intensity
standard deviation is below ``sigma_hat`` gives the background level alpha.
The search starts at the largest power-of-two window that fits and halves
the window until some window qualifies. At window size 1 every pixel
qualifies, so alpha becomes the maximum intensity.
"""

import math
from dataclasses import dataclass

import numpy as np

from .image import as_image


@dataclass(frozen=True)
class BackgroundParams:
    sigma_hat: float = 3.0

    def __post_init__(self):
        if not self.sigma_hat > 0:
            raise ValueError(f"sigma_hat must be positive, got {self.sigma_hat}")


@dataclass(frozen=True)
class BackgroundResult:
    alpha: float
    window_origin: tuple  # (row, col) of the top-left corner
    window_size: int
    scale_used: int
    window_std: float

    def as_dict(self):
        return {
            "alpha": self.alpha,
            "window_row": self.window_origin[0],
            "window_col": self.window_origin[1],
            "window_size": self.window_size,
            "scale_used": self.scale_used,
            "window_std": self.window_std,
        }


def window_positions(length, w):
    """Start offsets with stride ``ceil(w/5)`` plus one flush with the far edge."""
    stride = math.ceil(w / 5)
    pos = list(range(0, length - w + 1, stride))
    if pos[-1] != length - w:
        pos.append(length - w)
    return np.asarray(pos)


def window_stats(img, w, rows, cols):
    """Mean and population std of every ``w x w`` window at ``rows x cols``."""
    # integer shift keeps sums exact for integer-valued images
    shift = np.round(img.mean())
    x = img - shift
    s1 = np.zeros((img.shape[0] + 1, img.shape[1] + 1))
    s2 = np.zeros_like(s1)
    s1[1:, 1:] = x.cumsum(0).cumsum(1)
    s2[1:, 1:] = (x * x).cumsum(0).cumsum(1)

    r0, c0 = rows[:, None], cols[None, :]
    r1, c1 = r0 + w, c0 + w

    def box(s):
        return s[r1, c1] - s[r0, c1] - s[r1, c0] + s[r0, c0]

    npx = float(w * w)
    mean = box(s1) / npx
    var = np.maximum(box(s2) / npx - mean * mean, 0.0)
    return mean + shift, np.sqrt(var)


def detect_background(img, params=None):
    """Estimate the background level of a grayscale or color document.

    Color images are reduced to the mean of their channels first. Ties in
    the maximal window mean go to the first window in row-major order.
    """
    params = params or BackgroundParams()
    img = as_image(img)
    if img.ndim == 3:
        img = img.mean(axis=2)
    m, n = img.shape

    w = 1 << int(math.floor(math.log2(min(m, n))))
    while w >= 1:
        rows, cols = window_positions(m, w), window_positions(n, w)
        mean, std = window_stats(img, w, rows, cols)
        ok = std < params.sigma_hat
        if w == 1:
            ok[:] = True
        if ok.any():
            cand = np.where(ok, mean, -np.inf)
            i, j = np.unravel_index(np.argmax(cand), cand.shape)
            alpha = float(img[rows[i], cols[j]]) if w == 1 else float(mean[i, j])
            return BackgroundResult(
                alpha=alpha,
                window_origin=(int(rows[i]), int(cols[j])),
                window_size=w,
                scale_used=w,
                window_std=float(std[i, j]) if w > 1 else 0.0,
            )
        w //= 2
    raise AssertionError("unreachable: a 1x1 window always qualifies")
