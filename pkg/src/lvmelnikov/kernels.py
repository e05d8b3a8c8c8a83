"""Kernel selection: compiled extension when available, Python otherwise.

Set ``LVMELNIKOV_PURE=1`` to force the pure-Python kernels.
"""

import os

from . import _kernels_py

if os.environ.get("LVMELNIKOV_PURE", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

ring_sums = _impl.ring_sums
return_map = _impl.return_map
IMPLEMENTATION = _impl.IMPLEMENTATION


def max_workers() -> int:
    """Worker cap from ``MEL_THREADS`` (default: CPU count)."""
    raw = os.environ.get("MEL_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1
