"""Outer smoothing loop and the four applications built on it.

Each outer iteration thresholds the gradients of the previous iterate and
re-solves the constrained fitting problem, starting from a Gaussian-blurred
copy of the input. Color images are processed one channel at a time.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .background import BackgroundParams, BackgroundResult, detect_background
from .constraints import make_box, make_scan
from .edge_hist import gaussian_smooth, threshold_field
from .gradients import grad, grad_magnitude
from .image import as_image, clamp, is_color, split_channels
from .solvers import SolverConfig, solve


@dataclass(frozen=True)
class PipelineConfig:
    """Parameters of the outer loop and applications.

    ``p=None`` picks the application default: 2 (FISTA) for abstraction,
    edges and exaggeration, 1 (ADMM) for scan-through removal. ``alpha``
    overrides automatic background detection in :func:`descan`. With
    ``warm_start=False`` every outer solve starts from the blurred input
    instead of the previous iterate.
    """

    lam: float = 15.0
    sigma: float = 0.0
    outer_iters: int = 3
    p: int | None = None
    solver: SolverConfig = field(default_factory=SolverConfig)
    s: float = 2.0
    background: BackgroundParams = field(default_factory=BackgroundParams)
    alpha: float | None = None
    warm_start: bool = True

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lambda must be nonnegative, got {self.lam}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        if self.outer_iters < 1:
            raise ValueError(f"outer_iters must be at least 1, got {self.outer_iters}")
        if self.p not in (None, 1, 2):
            raise ValueError(f"p must be 1 or 2, got {self.p}")
        if not self.s > 0:
            raise ValueError(f"s must be positive, got {self.s}")

    def solver_config(self, default_p):
        return replace(self.solver, p=self.p or default_p)


def _outer_loop(x0, c, cfg, solver_cfg):
    x = x0
    results = []
    for _ in range(cfg.outer_iters):
        d = threshold_field(grad(x), cfg.lam)
        start = x if cfg.warm_start else x0
        res = solve(d, c, start, solver_cfg, y_init=d)
        results.append(res)
        x = res.x
    return x, results


def smooth(img, cfg=None, full_output=False):
    """Edge-preserving smoothing of a grayscale image.

    Returns the smoothed image, or ``(image, solve_results)`` with one
    :class:`~edgehist.solvers.SolveResult` per outer iteration when
    ``full_output`` is true.
    """
    cfg = cfg or PipelineConfig()
    img = as_image(img)
    if is_color(img):
        raise ValueError("smooth expects a grayscale image; use smooth_color")
    x0 = gaussian_smooth(img, cfg.sigma)
    x, results = _outer_loop(x0, make_box(), cfg, cfg.solver_config(2))
    return (x, results) if full_output else x


def smooth_color(img, cfg=None, full_output=False):
    """:func:`smooth` applied to the R, G and B channels independently."""
    img = as_image(img)
    if not is_color(img):
        raise ValueError("smooth_color expects an (m, n, 3) image")
    outs = [smooth(ch, cfg, full_output=True) for ch in split_channels(img)]
    x = np.stack([o[0] for o in outs], axis=-1)
    return (x, [o[1] for o in outs]) if full_output else x


def smooth_any(img, cfg=None, full_output=False):
    """Dispatch to :func:`smooth` or :func:`smooth_color` by array shape.

    With ``full_output`` the second item is always a list of per-channel
    result lists.
    """
    img = as_image(img)
    if is_color(img):
        return smooth_color(img, cfg, full_output)
    out = smooth(img, cfg, full_output)
    return (out[0], [out[1]]) if full_output else out


def boost_details(img, base, s):
    """``clamp(base + s * (img - base))`` to [0, 255].

    Evaluated as ``img + (s - 1) * (img - base)`` so that ``s == 1`` returns
    ``img`` bit-exactly.
    """
    img = np.asarray(img, dtype=np.float64)
    return clamp(img + (s - 1.0) * (img - base), 0.0, 255.0)


def exaggerate(img, cfg=None, full_output=False):
    """Details exaggeration around the smoothed base layer, see :func:`boost_details`."""
    cfg = cfg or PipelineConfig()
    img = as_image(img)
    x, results = smooth_any(img, cfg, full_output=True)
    j = boost_details(img, x, cfg.s)
    return (j, results) if full_output else j


def edge_map(img, cfg=None, edge_threshold=30.0, full_output=False):
    """Binary edge map (0/255) of the smoothed image.

    A pixel is an edge where the gradient magnitude ``sqrt(h**2 + v**2)`` of
    the smoothed image reaches ``edge_threshold``. Color input is smoothed
    per channel and then averaged to gray before taking gradients.
    """
    if edge_threshold < 0:
        raise ValueError(f"edge_threshold must be nonnegative, got {edge_threshold}")
    x, results = smooth_any(img, cfg, full_output=True)
    if is_color(x):
        x = x.mean(axis=2)
    edges = np.where(grad_magnitude(x) >= edge_threshold, 255.0, 0.0)
    return (edges, results) if full_output else edges


def descan(img, cfg=None, full_output=False):
    """Blind scan-through (bleed-through) removal.

    Background pixels (blurred value at least alpha) are pinned to their
    blurred values; the rest is re-fitted to the thresholded gradients with
    the l1 model by default. Returns ``(image, BackgroundResult)``, plus the
    per-channel solve results when ``full_output`` is true. When
    ``cfg.alpha`` is set, detection is skipped and the result's window
    fields are empty.
    """
    cfg = cfg or PipelineConfig()
    img = as_image(img)
    x0 = gaussian_smooth(img, cfg.sigma)
    if cfg.alpha is None:
        bg = detect_background(x0, cfg.background)
    else:
        bg = BackgroundResult(alpha=float(cfg.alpha), window_origin=(-1, -1),
                              window_size=0, scale_used=0, window_std=float("nan"))
    solver_cfg = cfg.solver_config(1)

    channels = split_channels(x0) if is_color(x0) else [x0]
    outs, results = [], []
    for ch in channels:
        c = make_scan(ch, bg.alpha)
        x, res = _outer_loop(ch, c, cfg, solver_cfg)
        outs.append(x)
        results.append(res)
    x = np.stack(outs, axis=-1) if is_color(x0) else outs[0]
    return (x, bg, results) if full_output else (x, bg)


__all__ = [
    "PipelineConfig", "smooth", "smooth_color", "smooth_any", "boost_details", "exaggerate",
    "edge_map", "descan",
]
