"""Sidon set computations over Z^d + Z_p1 + ... + Z_pt.

Sets are given as element lists plus an optional group shape; results are
the same JSON reports the `sidonlab` command line writes, parsed to dicts.
"""

try:
    from . import _sidonlab as _core
except ImportError:
    import _sidonlab as _core

from ._api import *  # noqa: F401,F403
from ._api import __all__

StructuralError = _core.StructuralError
DomainError = _core.DomainError
ConfigError = _core.ConfigError
ResourceError = _core.ResourceError
IoError = _core.IoError

__version__ = "0.1.0"
