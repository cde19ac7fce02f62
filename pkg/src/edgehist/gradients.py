"""Periodic backward-difference operators.

A gradient field is stored as an array of shape ``(2, m, n)``: index 0 holds
the horizontal differences ``X[i, j] - X[i, j-1]`` and index 1 the vertical
differences ``X[i, j] - X[i-1, j]``, both wrapping around the image border.
Flattening a field in C order therefore gives the stacked vector
``(G_h x, G_v x)``.
"""

import numpy as np


def grad(img):
    """Backward differences of a 2-D image with periodic boundary."""
    x = np.asarray(img, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"grad expects a 2-D image, got shape {x.shape}")
    g = np.empty((2,) + x.shape)
    g[0] = x - np.roll(x, 1, axis=1)
    g[1] = x - np.roll(x, 1, axis=0)
    return g


def grad_adjoint(g):
    """Apply the transpose of :func:`grad` (a negative forward divergence).

    Satisfies ``<grad(x), g> == <x, grad_adjoint(g)>`` up to round-off.
    """
    g = np.asarray(g, dtype=np.float64)
    if g.ndim != 3 or g.shape[0] != 2:
        raise ValueError(f"expected a (2, m, n) gradient field, got shape {g.shape}")
    h, v = g
    return (h - np.roll(h, -1, axis=1)) + (v - np.roll(v, -1, axis=0))


def gram_eigenvalues(m, n):
    """Eigenvalues of ``G^T G`` in the 2-D DFT basis, as an ``(m, n)`` array.

    Entry ``[k, l]`` belongs to the Fourier mode with frequency ``k`` along
    rows and ``l`` along columns, so the array can divide an ``fft2``
    directly. The largest value is at most 8.
    """
    if m < 1 or n < 1:
        raise ValueError(f"image dimensions must be positive, got ({m}, {n})")
    row = 4.0 * np.sin(np.pi * np.arange(m) / m) ** 2
    col = 4.0 * np.sin(np.pi * np.arange(n) / n) ** 2
    return row[:, None] + col[None, :]


def grad_magnitude(img):
    """Pointwise ``sqrt(h**2 + v**2)`` of the periodic backward differences."""
    g = grad(img)
    return np.hypot(g[0], g[1])
