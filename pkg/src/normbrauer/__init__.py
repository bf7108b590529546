"""Unramified Brauer groups of normic bundles via Galois lattice cohomology."""

from .config import Caps, CapError, get_caps, set_caps
from .exactlin import FinAb, AbHom, IntMatrix, smith_normal_form, cokernel, hom_analyze

__all__ = ["Caps", "CapError", "get_caps", "set_caps", "FinAb", "AbHom", "IntMatrix", "smith_normal_form",
           "cokernel", "hom_analyze"]
__version__ = "0.1.0"
