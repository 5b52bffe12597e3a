"""Exact certificates for parabolic-coset contractions, Hecke algebras and small BN-pairs."""

from .complexes import Complex, VerificationError
from .coxeter import build_group
from .cosets import build_sigma, build_system
from .hecke import HeckeAlgebra
from .bnpair import build_bn
from .verify import verify_certificate

__version__ = "0.1.0"

__all__ = [
    "Complex",
    "HeckeAlgebra",
    "VerificationError",
    "build_bn",
    "build_group",
    "build_sigma",
    "build_system",
    "verify_certificate",
]
