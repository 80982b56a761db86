import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from qlitho import _kernels_py  # noqa: E402

try:
    from qlitho import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

KERNEL_MODULES = [_kernels_py] + ([_compiled] if _compiled is not None else [])


@pytest.fixture(params=KERNEL_MODULES, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def kernels(request):
    return request.param
