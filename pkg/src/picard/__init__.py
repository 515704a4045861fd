"""Picard groups of 2-blocks with abelian defect groups, realized on characters."""
from picard.kernels import BACKEND

__all__ = ["BACKEND"]
__version__ = "0.1.0"
