"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``COARSECYL_PURE=1`` to force the fallback.
"""
import os

BACKEND = "python"

if os.environ.get("COARSECYL_PURE", "") not in ("1", "true", "yes"):
    try:
        from ._kernels import apsp, bfs, near_counts  # noqa: F401
        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._pykernels import apsp, bfs, near_counts  # noqa: F401
