"""Numerical companion for trial-state energy bounds of charged Bose gases.

Submodules
----------
fock          truncated Fock space, coherent/squeezed/Bogolubov vectors
bogolubov     quasi-free data (gamma, xi), density matrices, Wick rule
berezin_lieb  Berezin-Lieb inequalities on finite frames
kernels       pairing function g, the constant I0, radial moments
packets       Gaussian packets and the smeared Coulomb kernel
dyson         two-component variational problem and bound assembly
jellium       one-component construction and bound assembly
config        run configuration and report serialization
verify        oracle and inequality suites
cli           command-line entry point

Submodules are imported on first attribute access so that the command-line
entry point can cap thread pools before numpy is loaded.
"""
from __future__ import annotations

import importlib

__version__ = "0.1.0"

_SUBMODULES = (
    "fock", "bogolubov", "berezin_lieb", "kernels", "packets",
    "dyson", "jellium", "report", "config", "verify", "cli",
)

__all__ = ["__version__", *_SUBMODULES]


def __getattr__(name):
    if name in _SUBMODULES:
        return importlib.import_module(f".{name}", __name__)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(__all__)
