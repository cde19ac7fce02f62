"""Command-line front end.

Usage::

    edgehist abstract   --lambda 15 --sigma 0 in.png out.png
    edgehist edges      --lambda 10 --sigma 0.7 --edge-threshold 30 in.png edges.png
    edgehist exaggerate --lambda 25 --sigma 0.4 --s 2 in.png out.png
    edgehist descan     --lambda 70 --alpha 255 in.png out.png
    edgehist histogram  --lambda 15 in.png hist       # hist_before.csv, hist_after.csv
    edgehist detect-bg  --sigma-hat 3 in.png bg.txt [--overlay bg.png]

Every run writes ``<output>.manifest``, a ``key=value`` sidecar with the
effective parameters, input checksum and per-solve iteration counts and
objectives. Exit status: 0 success, 2 bad arguments, 3 I/O failure,
4 non-finite values in a solver.
"""

import argparse
import hashlib
import os
import shlex
import sys

import numpy as np

from . import __version__
from .background import BackgroundParams, detect_background
from .edge_hist import gaussian_smooth, image_gradient_histograms, write_histogram_csv
from .image import ImageIOError, load_image, save_image
from .pipeline import PipelineConfig, descan, edge_map, exaggerate, smooth_any
from .solvers import NonFiniteError, SolverConfig, write_trace_csv

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NONFINITE = 0, 2, 3, 4

_defaults = PipelineConfig()
_solver_defaults = SolverConfig()


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _nonneg(text):
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def _pos(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return v


def _pos_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return v


def _add_io(p):
    p.add_argument("input", help="input image (PNG, PGM or PPM)")
    p.add_argument("output", help="output path")


def _add_model(p):
    p.add_argument("--lambda", dest="lam", type=_nonneg, default=_defaults.lam,
                   help="gradient threshold (default %(default)s)")
    p.add_argument("--sigma", type=_nonneg, default=_defaults.sigma,
                   help="Gaussian pre-smoothing std in pixels (default %(default)s)")
    p.add_argument("--iters", type=_pos_int, default=_defaults.outer_iters,
                   help="outer iterations (default %(default)s)")
    p.add_argument("--p", type=int, choices=(1, 2), default=None,
                   help="norm of the fitting term (default: application default)")
    p.add_argument("--max-iter", type=_pos_int, default=_solver_defaults.max_iter,
                   help="max inner solver iterations (default %(default)s)")
    p.add_argument("--tol", type=_pos, default=_solver_defaults.tol,
                   help="solver stopping tolerance (default %(default)s)")
    p.add_argument("--rho", type=_pos, default=_solver_defaults.rho,
                   help="ADMM penalty (default %(default)s)")
    p.add_argument("--cold-start", action="store_true",
                   help="start every outer solve from the blurred input")
    p.add_argument("--trace", metavar="CSV",
                   help="write per-iteration solver trace to this CSV file")


def build_parser():
    parser = _Parser(prog="edgehist", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("abstract", help="image abstraction (edge-preserving smoothing)")
    _add_model(p)
    _add_io(p)

    p = sub.add_parser("edges", help="edge map of the smoothed image")
    _add_model(p)
    p.add_argument("--edge-threshold", type=_nonneg, default=30.0,
                   help="gradient-magnitude threshold (default %(default)s)")
    _add_io(p)

    p = sub.add_parser("exaggerate", help="details exaggeration J = X + s(I - X)")
    _add_model(p)
    p.add_argument("--s", type=_pos, default=_defaults.s,
                   help="exaggeration factor (default %(default)s)")
    _add_io(p)

    p = sub.add_parser("descan", help="blind scan-through removal")
    _add_model(p)
    p.add_argument("--sigma-hat", type=_pos, default=_defaults.background.sigma_hat,
                   help="window std bound for background detection (default %(default)s)")
    p.add_argument("--alpha", type=_nonneg, default=None,
                   help="fixed background level; skips detection")
    _add_io(p)

    p = sub.add_parser("histogram", help="gradient-magnitude histograms as CSV")
    p.add_argument("--lambda", dest="lam", type=_nonneg, default=_defaults.lam,
                   help="gradient threshold (default %(default)s)")
    p.add_argument("input")
    p.add_argument("output", help="prefix; writes <prefix>_before.csv and <prefix>_after.csv")

    p = sub.add_parser("detect-bg", help="background level detection")
    p.add_argument("--sigma-hat", type=_pos, default=_defaults.background.sigma_hat,
                   help="window std bound (default %(default)s)")
    p.add_argument("--sigma", type=_nonneg, default=0.0,
                   help="Gaussian pre-smoothing std before detection (default %(default)s)")
    p.add_argument("--overlay", metavar="IMAGE",
                   help="also write the input with the selected window outlined in red")
    p.add_argument("input")
    p.add_argument("output", help="key=value text file")
    return parser


def _pipeline_config(args):
    solver = SolverConfig(max_iter=args.max_iter, tol=args.tol, rho=args.rho)
    return PipelineConfig(
        lam=args.lam, sigma=args.sigma, outer_iters=args.iters, p=args.p,
        solver=solver, s=getattr(args, "s", _defaults.s),
        background=BackgroundParams(getattr(args, "sigma_hat", _defaults.background.sigma_hat)),
        alpha=getattr(args, "alpha", None), warm_start=not args.cold_start,
    )


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return "none"
    return str(v)


def _write_kv(path, items):
    with open(path, "w", newline="\n") as fh:
        for k, v in items:
            fh.write(f"{k}={_fmt(v)}\n")


def _solve_items(results):
    items = []
    for c, per_channel in enumerate(results):
        for k, res in enumerate(per_channel, start=1):
            key = f"solve.channel{c}.outer{k}"
            items += [
                (f"{key}.iterations", res.iterations_run),
                (f"{key}.converged", res.converged),
                (f"{key}.objective", float(res.objective)),
            ]
    return items


def _run(args, argv):
    items = [
        ("version", __version__),
        ("command", args.command),
        ("argv", shlex.join(argv)),
        ("input", os.path.abspath(args.input)),
        ("input_sha256", None),
        ("output", os.path.abspath(args.output)),
    ]
    # fails early with exit 3 when the input is missing or unreadable
    img = load_image(args.input)
    items[4] = ("input_sha256", _sha256(args.input))
    items.append(("input_shape", "x".join(map(str, img.shape))))

    if args.command == "histogram":
        before, after = image_gradient_histograms(img, args.lam)
        write_histogram_csv(before, f"{args.output}_before.csv")
        write_histogram_csv(after, f"{args.output}_after.csv")
        items += [("lambda", args.lam),
                  ("nonzero_before", int(sum(before[2][1:]))),
                  ("nonzero_after", int(sum(after[2][1:])))]
        _write_kv(f"{args.output}.manifest", items)
        return EXIT_OK

    if args.command == "detect-bg":
        bg = detect_background(gaussian_smooth(img, args.sigma), BackgroundParams(args.sigma_hat))
        _write_kv(args.output, list(bg.as_dict().items()))
        if args.overlay:
            save_image(_overlay(img, bg), args.overlay)
        items += [("sigma_hat", args.sigma_hat), ("sigma", args.sigma),
                  ("overlay", args.overlay)] + list(bg.as_dict().items())
        _write_kv(f"{args.output}.manifest", items)
        return EXIT_OK

    cfg = _pipeline_config(args)
    items += [
        ("lambda", cfg.lam), ("sigma", cfg.sigma), ("outer_iters", cfg.outer_iters),
        ("p", cfg.solver_config(1 if args.command == "descan" else 2).p),
        ("max_iter", cfg.solver.max_iter), ("tol", cfg.solver.tol),
        ("rho", cfg.solver.rho), ("l_lipschitz", cfg.solver.l_lipschitz),
        ("warm_start", cfg.warm_start),
    ]
    if args.command == "abstract":
        out, results = smooth_any(img, cfg, full_output=True)
    elif args.command == "edges":
        out, results = edge_map(img, cfg, args.edge_threshold, full_output=True)
        items.append(("edge_threshold", args.edge_threshold))
    elif args.command == "exaggerate":
        out, results = exaggerate(img, cfg, full_output=True)
        items.append(("s", cfg.s))
    else:
        out, bg, results = descan(img, cfg, full_output=True)
        items += [("sigma_hat", cfg.background.sigma_hat),
                  ("alpha_fixed", cfg.alpha)]
        items += [(f"background.{k}", v) for k, v in bg.as_dict().items()]

    save_image(out, args.output)
    if args.trace:
        write_trace_csv([r for per_channel in results for r in per_channel], args.trace)
        items.append(("trace", os.path.abspath(args.trace)))
    items += _solve_items(results)
    _write_kv(f"{args.output}.manifest", items)
    return EXIT_OK


def _overlay(img, bg):
    rgb = np.repeat(img[:, :, None], 3, axis=2) if img.ndim == 2 else img.copy()
    if bg.window_size < 1:
        return rgb
    r, c = bg.window_origin
    w = bg.window_size
    red = np.array([255.0, 0.0, 0.0])
    rgb[r, c:c + w] = red
    rgb[r + w - 1, c:c + w] = red
    rgb[r:r + w, c] = red
    rgb[r:r + w, c + w - 1] = red
    return rgb


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        return _run(args, argv)
    except ImageIOError as exc:
        print(f"edgehist: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"edgehist: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NonFiniteError as exc:
        print(f"edgehist: solver failure: {exc}", file=sys.stderr)
        return EXIT_NONFINITE
    except ValueError as exc:
        print(f"edgehist: invalid argument: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
