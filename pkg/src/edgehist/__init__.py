"""Edge-preserving smoothing by fitting a thresholded gradient field.

Gradients of the input are thresholded to form a target gradient field
``d``, and the output image minimizes ``||Gx - d||_p^p`` subject to a
dynamic-range (and optionally background-pinning) constraint. See
:mod:`edgehist.pipeline` for the applications.
"""

__version__ = "0.1.0"

from .background import BackgroundParams, BackgroundResult, detect_background
from .constraints import ConstraintSet, make_box, make_scan, membership, project
from .edge_hist import gaussian_smooth, nnz, threshold_field
from .gradients import grad, grad_adjoint, gram_eigenvalues
from .image import ImageIOError, clamp, load_image, save_image
from .pipeline import (
    PipelineConfig,
    boost_details,
    descan,
    edge_map,
    exaggerate,
    smooth,
    smooth_any,
    smooth_color,
)
from .solvers import (
    NonFiniteError,
    SolveResult,
    SolverConfig,
    objective,
    solve_p1_admm,
    solve_p2_fista,
)
