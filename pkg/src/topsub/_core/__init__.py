"""Backend selection for the Howell-form kernels.

The compiled Cython extension is used when available; the pure-Python
reference implementation is the fallback.  Set ``TOPSUB_FORCE_PURE=1`` to
force the fallback (used by the benchmark and the backend-parity tests).
"""

import os

from . import howell_py

if os.environ.get("TOPSUB_FORCE_PURE") == "1":
    _impl = howell_py
    BACKEND = "pure"
else:
    try:
        from . import howell_cy as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = howell_py
        BACKEND = "pure"

howell = _impl.howell
howell_transform = _impl.howell_transform
solve_upper = _impl.solve_upper
