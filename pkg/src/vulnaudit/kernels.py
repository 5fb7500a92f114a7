"""Selects the scanning/verification backend at import time.

The compiled extension is used when it imported cleanly; otherwise the
pure-Python twin takes over with identical behaviour.  Set VULNAUDIT_PURE=1
to force the pure backend (useful for benchmarking and equivalence tests).
"""

from __future__ import annotations

import os

if os.environ.get("VULNAUDIT_PURE"):
    from . import _kernels_py as _impl

    BACKEND = "pure"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "pure"

scan = _impl.scan
verify_pairs = _impl.verify_pairs
