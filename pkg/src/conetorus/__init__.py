"""Computations in the deformation space of hyperbolic cone tori."""

from mpmath import mp

# Working precision is a global configuration; operations that take a
# precision argument pin it themselves, this raises the ambient default.
if mp.prec < 256:
    mp.prec = 256

__version__ = "0.1.0"
