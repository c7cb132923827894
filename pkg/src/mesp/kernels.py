"""Kernel backend selection.

The compiled extension is used when it was built; otherwise (or when the
environment variable ``MESP_PURE_PYTHON`` is set to a non-empty value) the
pure-Python module takes over.  Both expose ``advance_stage`` and
``min_index_counts`` with identical results.
"""
import os

from . import _kernels_py as python_backend

try:
    from . import _kernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if compiled_backend is not None and not os.environ.get("MESP_PURE_PYTHON"):
    backend = compiled_backend
    BACKEND = "compiled"
else:
    backend = python_backend
    BACKEND = "python"

# keys at or above this go through the arbitrary-precision Python path
INT64_KEY_LIMIT = 1 << 62


def advance_stage(keys, options, counts, base, T, max_count):
    limit = base ** len(options[0]) * (max(max_count, 0) + 1)
    if limit >= INT64_KEY_LIMIT:
        return python_backend.advance_stage(keys, options, counts, base, T, max_count)
    return backend.advance_stage(keys, options, counts, base, T, max_count)


def min_index_counts(raw, thresholds, d):
    return backend.min_index_counts(raw, thresholds, d)
