"""Select the compiled kernels when built, else the pure-Python fallback.

Set ``QSCHUR_PURE_PYTHON=1`` to force the fallback.
"""

import os

BACKEND = "python"

if not os.environ.get("QSCHUR_PURE_PYTHON"):
    try:
        from qschur._kernels import intersection_dims, rank_mod_p, rref_mod_p  # noqa: F401

        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from qschur._kernels_py import intersection_dims, rank_mod_p, rref_mod_p  # noqa: F401

__all__ = ["BACKEND", "intersection_dims", "rank_mod_p", "rref_mod_p"]
