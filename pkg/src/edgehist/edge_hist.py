"""Target edge-histogram construction and Gaussian pre-smoothing."""

import csv
import math

import numpy as np
from scipy import ndimage

from .gradients import grad
from .image import as_image, map_channels


def threshold_field(g, lam):
    """Zero every gradient entry with ``|y| < lam``; keep the rest untouched.

    Entries with ``|y| == lam`` are kept. The same threshold applies to the
    horizontal and vertical components.
    """
    if lam < 0:
        raise ValueError(f"threshold must be nonnegative, got {lam}")
    g = np.asarray(g, dtype=np.float64)
    return np.where(np.abs(g) >= lam, g, 0.0)


def nnz(g):
    return int(np.count_nonzero(g))


def gaussian_kernel(sigma):
    """Sampled 1-D Gaussian of radius ``ceil(3*sigma)``, normalized to sum 1."""
    if sigma <= 0:
        return np.ones(1)
    radius = math.ceil(3.0 * sigma)
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-0.5 * (t / sigma) ** 2)
    return k / k.sum()


def gaussian_smooth(img, sigma):
    """Separable Gaussian blur with periodic boundary.

    ``sigma == 0`` returns the input unchanged. Works on grayscale or color
    arrays (each channel independently).
    """
    if sigma < 0:
        raise ValueError(f"sigma must be nonnegative, got {sigma}")
    img = as_image(img)
    if sigma == 0:
        return img.copy()
    k = gaussian_kernel(sigma)

    def _blur(x):
        lo, hi = x.min(), x.max()
        x = ndimage.correlate1d(x, k, axis=0, mode="grid-wrap")
        x = ndimage.correlate1d(x, k, axis=1, mode="grid-wrap")
        # a convex combination of [0, 255] values; clip only round-off
        return np.clip(x, lo, hi)

    return map_channels(_blur, img)


def gradient_histogram(g, max_value=255):
    """Histogram of pooled gradient magnitudes with unit-width bins.

    Returns ``(bin_low, bin_high, count)`` arrays. Bin ``k`` covers
    ``[k, k+1)``, so a magnitude of 255 lands in the last bin ``[255, 256)``.
    """
    mags = np.abs(np.asarray(g, dtype=np.float64)).ravel()
    edges = np.arange(0, max_value + 2, dtype=np.float64)
    count, _ = np.histogram(mags, bins=edges)
    return edges[:-1], edges[1:], count


def image_gradient_histograms(img, lam):
    """Magnitude histograms of ``grad(img)`` before and after thresholding.

    Horizontal and vertical components (and color channels) are pooled.
    """
    img = as_image(img)
    channels = [img[:, :, c] for c in range(3)] if img.ndim == 3 else [img]
    before = np.concatenate([grad(c).ravel() for c in channels])
    after = threshold_field(before, lam)
    return gradient_histogram(before), gradient_histogram(after)


def write_histogram_csv(hist, path):
    lows, highs, counts = hist
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bin_low", "bin_high", "count"])
        for lo, hi, c in zip(lows, highs, counts):
            w.writerow([int(lo), int(hi), int(c)])
