"""Select the compiled kernels when available, else the pure-Python ones.

Set ``HUAPICKRELL_BACKEND=python`` to force the fallback.
"""
import os

from . import _pykernels

NAME = "python"
kernels = _pykernels

if os.environ.get("HUAPICKRELL_BACKEND", "").lower() != "python":
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        kernels = _ckernels
        NAME = "cython"

hyp2f1_terminating = kernels.hyp2f1_terminating
hyp1f1 = kernels.hyp1f1
ops_recurrence = kernels.ops_recurrence
