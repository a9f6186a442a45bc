"""Exact finite-field incidence machinery.

Submodules: ``field`` (GF(p^ell) arithmetic), ``cyclo`` (Z[zeta_p] and Gauss
sums), ``geometry`` (cones, zero-spheres, spheres), ``spectrum`` (Cayley-graph
eigenvalues), ``incidence`` (point-sphere incidences and the mixing bound),
``sumproduct`` (sumsets and square sums) and ``cli``.
"""
from .field import FieldCtx, mk_field
from .cyclo import CycInt, ExactRadical, chi, gauss_direct, gauss_explicit
from .geometry import Form, Sphere, VarietySpec

__version__ = "0.1.0"

__all__ = [
    "CycInt",
    "ExactRadical",
    "FieldCtx",
    "Form",
    "Sphere",
    "VarietySpec",
    "chi",
    "gauss_direct",
    "gauss_explicit",
    "mk_field",
]
