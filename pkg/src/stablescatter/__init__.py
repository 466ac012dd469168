"""Numerical laboratory for scattering lengths of additive functionals of
isotropic stable processes, their semiclassical capacity limits, and the
bottom of the spectrum of the fractional Laplacian with local and non-local
perturbations."""

from .model import StableModel, make_model, density, riesz_kernel

__all__ = ["StableModel", "make_model", "density", "riesz_kernel"]
__version__ = "0.1.0"
