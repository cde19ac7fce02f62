r"""Solvers for the constrained gradient-fitting problem

.. math::

    \min_x \; \|Gx - d\|_p^p + \iota_C(x), \qquad p \in \{1, 2\},

where ``G`` stacks the periodic horizontal and vertical backward
differences, ``d`` is a target gradient field and ``C`` a
:class:`~edgehist.constraints.ConstraintSet`.

``p = 2`` is handled by FISTA (projected accelerated gradient). ``p = 1`` is
handled by ADMM on the splitting

.. math::

    \min_{x, y, z} \|y - d\|_1 + \iota_C(z) \quad \text{s.t.} \quad
    Gx = y,\; x = z,

whose x-update is a periodic screened Poisson equation solved exactly with
the FFT.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .constraints import make_box, project
from .gradients import grad, grad_adjoint, gram_eigenvalues


class NonFiniteError(ArithmeticError):
    """A solver produced NaN or infinite values (usually from bad input)."""


@dataclass(frozen=True)
class SolverConfig:
    """Solver settings.

    ``tol`` is a relative-change threshold for FISTA and a scaled residual
    threshold for ADMM (multiplied by ``sqrt(m*n) * 255``). ``l_lipschitz``
    is the Lipschitz constant of the gradient of ``||Gx - d||^2``; the default
    16 is ``2 * max eig(G^T G)`` for the periodic operator.
    """

    p: int = 2
    max_iter: int = 500
    tol: float = 1e-4
    rho: float = 1.0
    l_lipschitz: float = 16.0

    def __post_init__(self):
        if self.p not in (1, 2):
            raise ValueError(f"p must be 1 or 2, got {self.p}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be positive, got {self.max_iter}")
        for name in ("tol", "rho", "l_lipschitz"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass
class SolveResult:
    """Output of a solver run.

    ``objective_trace[0]`` is the objective at the (projected) starting point
    and entry ``k`` the objective after iteration ``k``. ``objective`` is the
    value at the returned ``x``. ADMM additionally records its primal
    residual norms per iteration.
    """

    x: np.ndarray
    objective_trace: np.ndarray
    iterations_run: int
    converged: bool
    objective: float
    primal_residual_trace: np.ndarray = field(default_factory=lambda: np.empty(0))


def objective(x, d, p):
    """``sum |(Gx)_j - d_j|**p``."""
    r = grad(x) - d
    if p == 1:
        return float(np.abs(r).sum())
    if p == 2:
        return float(np.square(r).sum())
    raise ValueError(f"p must be 1 or 2, got {p}")


def _check_inputs(d, x_init):
    d = np.asarray(d, dtype=np.float64)
    x = np.asarray(x_init, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"x_init must be a 2-D image, got shape {x.shape}")
    if d.shape != (2,) + x.shape:
        raise ValueError(f"gradient field shape {d.shape} does not match image {x.shape}")
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(x))):
        raise NonFiniteError("non-finite values in solver input")
    return d, x


def _finite(value, it):
    if not math.isfinite(value):
        raise NonFiniteError(f"objective became non-finite at iteration {it}")
    return value


def solve_p2_fista(d, c=None, x_init=None, cfg=None):
    """Minimize ``||Gx - d||_2^2`` over ``c`` with FISTA.

    Uses a fixed step ``1 / cfg.l_lipschitz`` and the Beck-Teboulle momentum
    sequence. Iteration stops after ``cfg.max_iter`` steps or once the
    objective changes by less than ``cfg.tol`` (relative) across the last 5
    iterations. The best iterate seen is returned; it lies in ``c`` exactly.
    """
    cfg = cfg or SolverConfig(p=2)
    c = c or make_box()
    if x_init is None:
        x_init = np.zeros(np.shape(d)[1:])
    d, x = _check_inputs(d, x_init)
    step = 1.0 / cfg.l_lipschitz

    x = project(c, x)
    y = x
    t = 1.0
    best_x, best_f = x, _finite(objective(x, d, 2), 0)
    trace = [best_f]
    converged = False
    k = 0
    for k in range(1, cfg.max_iter + 1):
        x_prev = x
        g = 2.0 * grad_adjoint(grad(y) - d)
        x = project(c, y - step * g)
        t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        y = x + ((t - 1.0) / t_next) * (x - x_prev)
        t = t_next

        f = _finite(objective(x, d, 2), k)
        trace.append(f)
        if f < best_f:
            best_x, best_f = x, f
        if k >= 5:
            ref = trace[-6]
            if abs(ref - f) <= cfg.tol * max(abs(ref), 1e-300) or best_f == 0.0:
                converged = True
                break
    return SolveResult(best_x, np.asarray(trace), k, converged, best_f)


def _shrink(v, thresh):
    return np.sign(v) * np.maximum(np.abs(v) - thresh, 0.0)


def solve_p1_admm(d, c=None, x_init=None, y_init=None, cfg=None):
    """Minimize ``||Gx - d||_1`` over ``c`` with three-variable ADMM.

    Scaled-form updates with penalty ``rho``::

        x <- (G^T G + I)^{-1} (G^T (y - u) + (z - w))     # exact, via FFT
        y <- d + shrink(Gx + u - d, 1/rho)
        z <- project(c, x + w)
        u <- u + Gx - y
        w <- w + x - z

    Stops when both primal residuals ``||Gx - y||`` and ``||x - z||`` and the
    dual residual fall below ``tol * sqrt(m*n) * 255``, or after ``max_iter``
    iterations. The returned image is ``project(c, x)`` so it is always
    feasible.
    """
    cfg = cfg or SolverConfig(p=1)
    c = c or make_box()
    if x_init is None:
        x_init = np.zeros(np.shape(d)[1:])
    d, x = _check_inputs(d, x_init)
    m, n = x.shape
    y = np.array(d if y_init is None else y_init, dtype=np.float64)
    if y.shape != d.shape:
        raise ValueError(f"y_init shape {y.shape} does not match {d.shape}")
    rho = cfg.rho
    thresh = cfg.tol * math.sqrt(m * n) * 255.0

    # (G^T G + I) in the half-spectrum used by rfft2
    denom = gram_eigenvalues(m, n)[:, : n // 2 + 1] + 1.0
    z = project(c, x)
    u = np.zeros_like(y)
    w = np.zeros_like(x)

    trace = [_finite(objective(z, d, 1), 0)]
    res_trace = []
    converged = False
    k = 0
    for k in range(1, cfg.max_iter + 1):
        rhs = grad_adjoint(y - u) + (z - w)
        x = np.fft.irfft2(np.fft.rfft2(rhs) / denom, s=(m, n))
        gx = grad(x)

        y_prev, z_prev = y, z
        y = d + _shrink(gx + u - d, 1.0 / rho)
        z = project(c, x + w)
        r_y = gx - y
        r_z = x - z
        u = u + r_y
        w = w + r_z

        primal_y = float(np.linalg.norm(r_y))
        primal_z = float(np.linalg.norm(r_z))
        dual = rho * float(np.linalg.norm(grad_adjoint(y - y_prev) + (z - z_prev)))
        res_trace.append((primal_y, primal_z))
        trace.append(_finite(objective(project(c, x), d, 1), k))
        if primal_y < thresh and primal_z < thresh and dual < thresh:
            converged = True
            break

    x_final = project(c, x)
    if not np.all(np.isfinite(x_final)):
        raise NonFiniteError("ADMM iterate became non-finite")
    return SolveResult(x_final, np.asarray(trace), k, converged, trace[-1],
                       np.asarray(res_trace).reshape(-1, 2))


def solve(d, c, x_init, cfg, y_init=None):
    """Dispatch on ``cfg.p``: FISTA for 2, ADMM for 1."""
    if cfg.p == 2:
        return solve_p2_fista(d, c, x_init, cfg)
    return solve_p1_admm(d, c, x_init, y_init, cfg)


def write_trace_csv(results, path):
    """Write per-iteration objective and residuals of one or more solves.

    Columns: ``solve, iteration, objective, primal_residual_y,
    primal_residual_z``. Residual columns are empty for FISTA runs.
    """
    if isinstance(results, SolveResult):
        results = [results]
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["solve", "iteration", "objective",
                     "primal_residual_y", "primal_residual_z"])
        for s, res in enumerate(results):
            for it, f in enumerate(res.objective_trace):
                ry = rz = ""
                if it >= 1 and len(res.primal_residual_trace) >= it:
                    ry, rz = (repr(float(v)) for v in res.primal_residual_trace[it - 1])
                wr.writerow([s, it, repr(float(f)), ry, rz])
