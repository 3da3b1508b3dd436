"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-numpy
module is the fallback and the reference for correctness.  Set
``PHFLOW_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("PHFLOW_PURE_PYTHON", "") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND

state_quad = _impl.state_quad
thermo_quad = _impl.thermo_quad
dual_j = _impl.dual_j
dual_j_scale = _impl.dual_j_scale
dual_r = _impl.dual_r
dual_r_scale = _impl.dual_r_scale
local_j_blocks = _impl.local_j_blocks
local_r_blocks = _impl.local_r_blocks
functionals_quad = _impl.functionals_quad


def backend_name() -> str:
    return BACKEND
