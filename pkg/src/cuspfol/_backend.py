"""Select the arithmetic kernel backend at import time.

The compiled Cython kernel is preferred when present; the pure-Python twin is
the fallback and can be forced with ``CUSPFOL_PURE=1`` in the environment
(useful for benchmarking and for debugging the compiled kernel against the
reference semantics).
"""

import os

if os.environ.get("CUSPFOL_PURE", "") not in ("", "0"):
    from . import _kernel_py as kernel
else:
    try:
        from . import _kernel as kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as kernel

BACKEND = kernel.BACKEND

QZERO = kernel.QZERO
QONE = kernel.QONE
qnorm = kernel.qnorm
qadd = kernel.qadd
qsub = kernel.qsub
qneg = kernel.qneg
qmul = kernel.qmul
qinv = kernel.qinv
qdiv = kernel.qdiv
jet1_mul = kernel.jet1_mul
jet2_mul = kernel.jet2_mul
rref = kernel.rref
