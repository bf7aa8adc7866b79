"""Backend selection for the inner loops.

The compiled extension is used when it was built and ``POSETMU_PURE_PYTHON``
is unset; otherwise the pure-Python module is used. Both are importable
directly as ``kernels.python`` and ``kernels.compiled`` (``None`` if absent)
for benchmarking and cross-checks.
"""

import os

from . import _pykernels as python

try:
    from . import _ckernels as compiled
except ImportError:  # extension not built
    compiled = None

if compiled is not None and not os.environ.get("POSETMU_PURE_PYTHON"):
    _impl = compiled
    BACKEND = "cython"
else:
    _impl = python
    BACKEND = "python"

occurrence_masks = _impl.occurrence_masks
signed_face_sum = _impl.signed_face_sum
ez_subset_sum = _impl.ez_subset_sum

__all__ = [
    "BACKEND",
    "compiled",
    "python",
    "occurrence_masks",
    "signed_face_sum",
    "ez_subset_sum",
]
