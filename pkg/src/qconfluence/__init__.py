"""p-adic q-difference and differential equations at capped precision.

Twisted Taylor expansions, generic Taylor solutions, generic radii of
convergence, deformation of differential equations into q-difference
families, confluence back to the differential limit, Frobenius pullback,
and rank-one pi-exponential kernels.
"""

from .padic import (
    FieldDescriptor,
    PAdicElement,
    PrecisionError,
    FieldError,
    make_field,
    q_membership,
)
from .affinoid import Affinoid, DomainError

__all__ = [
    "FieldDescriptor",
    "PAdicElement",
    "PrecisionError",
    "FieldError",
    "make_field",
    "q_membership",
    "Affinoid",
    "DomainError",
]
