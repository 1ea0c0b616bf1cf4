"""Template-mode-of-variation analysis of sampled curves."""

try:
    from ._tmv import *  # noqa: F401,F403
    from . import _tmv as _impl
except ImportError:  # extension built outside the package (e.g. plain CMake build)
    from _tmv import *  # noqa: F401,F403
    import _tmv as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")]
__version__ = "0.1.0"
