"""Float power iteration kernels.

The compiled extension is preferred when it was built; set the environment
variable ``ENTROPYGAMES_PURE=1`` to force the pure-Python fallback.
"""

import os

if os.environ.get("ENTROPYGAMES_PURE"):
    from ._power_py import power_enclosure

    KERNEL_IMPL = "pure-python (forced)"
else:
    try:
        from ._power import power_enclosure

        KERNEL_IMPL = "compiled"
    except ImportError:
        from ._power_py import power_enclosure

        KERNEL_IMPL = "pure-python"

__all__ = ["power_enclosure", "KERNEL_IMPL"]
