"""Round-kernel backend selection.

The compiled kernel is used when the extension was built; otherwise the
pure-Python twin. Both produce identical trajectories.
"""

from __future__ import annotations

from . import _kernel_py

try:
    from . import _kernel as _kernel_c
except ImportError:  # extension not built
    _kernel_c = None

BACKENDS = {"python": _kernel_py.round_step}
if _kernel_c is not None:
    BACKENDS["cython"] = _kernel_c.round_step

DEFAULT_BACKEND = "cython" if _kernel_c is not None else "python"


def get_round_step(backend: str | None = None):
    name = backend or DEFAULT_BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"round kernel backend {name!r} unavailable; have {sorted(BACKENDS)}") from None
