"""Exact arithmetic for finite F_q-shtukas, local shtukas and divisible
local Anderson modules over Artinian local F_q-algebras."""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __doc__  # noqa: F401
except ImportError:  # build-tree layout: _core.so next to the package
    from _core import *  # noqa: F401,F403

__version__ = "0.1.0"
