"""Select the reduction backend at import time.

The compiled Cython kernels are used when the extension was built; otherwise
(or when ``LPNS_BACKEND=python``) the pure-Python fallback is used.
"""
import os

from . import _kernels_py

if os.environ.get("LPNS_BACKEND", "").lower() == "python":
    kernels = _kernels_py
    name = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]

        name = "cython"
    except ImportError:  # extension not built
        kernels = _kernels_py
        name = "python"

neumaier_sum = kernels.neumaier_sum
magnitude_power_sum = kernels.magnitude_power_sum
magnitude_max = kernels.magnitude_max
