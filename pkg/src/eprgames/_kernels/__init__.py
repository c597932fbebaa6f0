"""Backend selection for the hot loops.

The compiled extension is preferred when present; set EPRGAMES_PURE_PYTHON=1
to force the numpy fallback.  Both backends are bit-identical, so selection
never changes results, only speed.
"""

import os

from . import _fallback

BACKEND = "python"
_impl = _fallback

if not os.environ.get("EPRGAMES_PURE_PYTHON"):
    try:
        from . import _native

        BACKEND = "native"
        _impl = _native
    except ImportError:
        pass

mc_tally = _impl.mc_tally
complete_free_batch = _impl.complete_free_batch


def backend() -> str:
    """Name of the active backend: 'native' or 'python'."""
    return BACKEND


def available_backends() -> dict:
    """All importable backends, for benchmarks and parity tests."""
    impls = {"python": _fallback}
    try:
        from . import _native as nat

        impls["native"] = nat
    except ImportError:
        pass
    return impls
