"""Backend selection for the cell kernels.

The compiled extension is used when it imports; setting ``JP_PURE_PYTHON=1``
forces the pure-Python module.  ``BACKEND`` names the active choice.
"""
import os

_impl = None
if os.environ.get("JP_PURE_PYTHON", "").lower() not in ("1", "true", "yes"):
    try:
        from . import _cell_kernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = None
if _impl is None:
    from . import _cell_kernel_py as _impl  # type: ignore[no-redef]
    BACKEND = "python"
else:
    BACKEND = "cython"

measure_nd = _impl.measure_nd
weighted_sum = _impl.weighted_sum
next_level = _impl.next_level
first_level = _impl.first_level
shoelace2 = _impl.shoelace2

__all__ = ["BACKEND", "measure_nd", "weighted_sum", "next_level", "first_level", "shoelace2"]
