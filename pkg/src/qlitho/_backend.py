"""Select the compiled kernel module, falling back to numpy.

Set ``QLITHO_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("QLITHO_PURE_PYTHON"):
    impl = _kernels_py
else:
    try:
        from . import _kernels as impl
    except ImportError:
        impl = _kernels_py

BACKEND = "python" if impl is _kernels_py else "cython"

dirichlet = impl.dirichlet
accumulate_grid = impl.accumulate_grid
accumulate_points = impl.accumulate_points
