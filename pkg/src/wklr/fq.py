"""F_p kernels: the compiled extension when available, else the pure-Python version.

Set ``WKLR_PURE_PYTHON=1`` to force the fallback.
"""
import os

BACKEND = "python"
if not os.environ.get("WKLR_PURE_PYTHON"):
    try:
        from ._fq import apply, count_flags, image_in, in_span, line_reps, reduce_vec, rref, subspaces
        BACKEND = "compiled"
    except ImportError:
        pass
if BACKEND == "python":
    from ._fq_py import apply, count_flags, image_in, in_span, line_reps, reduce_vec, rref, subspaces

__all__ = ["BACKEND", "apply", "count_flags", "image_in", "in_span", "line_reps", "reduce_vec",
           "rref", "subspaces"]
