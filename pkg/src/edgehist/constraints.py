"""Feasible sets for the smoothing model and their Euclidean projections.

Two sets are used: the dynamic-range box ``[0, 255]`` and, for scan-through
removal, the box with background pixels pinned to their reference values.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class ConstraintSet:
    """Box ``[lo, hi]`` with an optional set of pinned pixels.

    ``pinned_mask`` is a boolean array over the image; where it is true the
    pixel must equal ``pinned_values`` at the same position. ``alpha`` is the
    background level that produced the pin set, if any.
    """

    lo: float = 0.0
    hi: float = 255.0
    pinned_mask: np.ndarray | None = None
    pinned_values: np.ndarray | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty box: lo={self.lo} > hi={self.hi}")
        if (self.pinned_mask is None) != (self.pinned_values is None):
            raise ValueError("pinned_mask and pinned_values go together")
        if self.pinned_mask is not None:
            if self.alpha is None:
                raise ValueError("a pin set requires a background level alpha")
            mask = np.asarray(self.pinned_mask, dtype=bool)
            vals = np.asarray(self.pinned_values, dtype=np.float64)
            if mask.shape != vals.shape:
                raise ValueError("pinned_mask and pinned_values shapes differ")
            pv = vals[mask]
            if pv.size and (pv.min() < self.lo or pv.max() > self.hi):
                raise ValueError("pinned values must lie inside the box")
            mask.setflags(write=False)
            vals.setflags(write=False)
            object.__setattr__(self, "pinned_mask", mask)
            object.__setattr__(self, "pinned_values", vals)

    @property
    def n_pinned(self):
        return 0 if self.pinned_mask is None else int(self.pinned_mask.sum())


def make_box(lo=0.0, hi=255.0):
    return ConstraintSet(lo=lo, hi=hi)


def make_scan(x0, alpha, lo=0.0, hi=255.0):
    """Box constraint plus ``x_i = x0_i`` for every pixel with ``x0_i >= alpha``."""
    x0 = np.asarray(x0, dtype=np.float64)
    mask = x0 >= alpha
    return ConstraintSet(lo=lo, hi=hi, pinned_mask=mask, pinned_values=x0.copy(),
                         alpha=float(alpha))


def _check_shape(c, x):
    if c.pinned_mask is not None and c.pinned_mask.shape != x.shape:
        raise ValueError(
            f"array shape {x.shape} does not match constraint shape {c.pinned_mask.shape}"
        )


def project(c, x):
    """Nearest point of ``c`` to ``x`` in the Euclidean norm."""
    x = np.asarray(x, dtype=np.float64)
    _check_shape(c, x)
    out = np.clip(x, c.lo, c.hi)
    if c.pinned_mask is not None:
        out = np.where(c.pinned_mask, c.pinned_values, out)
    return out


def membership(c, x):
    """True when ``x`` satisfies the box and every pin exactly."""
    x = np.asarray(x, dtype=np.float64)
    _check_shape(c, x)
    if not np.all((x >= c.lo) & (x <= c.hi)):
        return False
    if c.pinned_mask is not None:
        return bool(np.array_equal(x[c.pinned_mask], c.pinned_values[c.pinned_mask]))
    return True
