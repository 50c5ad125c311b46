"""Discrete-event simulation of an elderly-care alarm dispatch system."""

from .model.engine import HAVE_COMPILED, active_kernel_name

__version__ = "0.1.0"
__all__ = ["HAVE_COMPILED", "active_kernel_name", "__version__"]
