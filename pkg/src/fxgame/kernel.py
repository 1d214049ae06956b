"""Kernel selection: compiled core when available, pure Python otherwise.

Set FXGAME_KERNEL=python to force the fallback (used by the parity tests
and the benchmark).
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("FXGAME_KERNEL") == "python":
    _impl = _kernel_py
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernel_py

run_trades = _impl.run_trades
KERNEL_BACKEND: str = _impl.BACKEND
