"""Radii of starlikeness for analytic functions with fixed second coefficient."""
from starlike_radii.classbounds import ClassKind, ClassSpec, from_normalized, normalize
from starlike_radii.radius_poly import RadiusResult, polynomial_radius
from starlike_radii.regions import RegionKind, RegionTag

__version__ = "0.1.0"

__all__ = [
    "ClassKind",
    "ClassSpec",
    "RadiusResult",
    "RegionKind",
    "RegionTag",
    "from_normalized",
    "normalize",
    "polynomial_radius",
]
