"""Hot kernels with a numba backend and a pure numpy fallback.

The backend is picked once at import time from the CE_TRACE_BACKEND
environment variable: "numba" insists on the jitted backend (ImportError
propagates if numba is missing), "numpy" forces the fallback, and unset
means numba when importable, numpy otherwise. Both backends expose the
same functions with bit-identical outputs.
"""

from __future__ import annotations

import os

_requested = os.environ.get("CE_TRACE_BACKEND", "").strip().lower()

if _requested not in ("", "numba", "numpy"):
    raise ValueError(
        f"CE_TRACE_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

if _requested == "numpy":
    from . import numpy_backend as _impl

    _BACKEND = "numpy"
elif _requested == "numba":
    from . import numba_backend as _impl

    _BACKEND = "numba"
else:
    try:
        from . import numba_backend as _impl

        _BACKEND = "numba"
    except ImportError:
        from . import numpy_backend as _impl

        _BACKEND = "numpy"

CONSIDER = _impl.CONSIDER
POTENTIAL = _impl.POTENTIAL
CONFLICT = _impl.CONFLICT

session_starts = _impl.session_starts
switch_points = _impl.switch_points
insertion_spans = _impl.insertion_spans
border_outcomes = _impl.border_outcomes
insertion_outcomes = _impl.insertion_outcomes
cluster_labels = _impl.cluster_labels


def backend_name() -> str:
    """Name of the backend selected at import time."""
    return _BACKEND
