"""Kernel backend selection.

The compiled Cython kernel is used when it was built; otherwise the numpy
fallback takes over. Set KMERWAITS_PURE_PYTHON=1 to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("KMERWAITS_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

csr_vector_power = _impl.csr_vector_power
