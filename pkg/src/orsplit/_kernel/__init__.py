"""Search kernel backend selection.

The compiled extension is preferred when importable; otherwise the
pure-Python fallback is used.  Set ORSPLIT_KERNEL=fallback (or =compiled)
to force a backend, e.g. for the benchmark script or parity tests.
"""

import os

from orsplit._kernel import fallback

_requested = os.environ.get("ORSPLIT_KERNEL", "")

if _requested == "fallback":
    _impl = fallback
    BACKEND = "fallback"
else:
    try:
        from orsplit._kernel import _fastcore as _impl

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        _impl = fallback
        BACKEND = "fallback"

enum_search = _impl.enum_search
