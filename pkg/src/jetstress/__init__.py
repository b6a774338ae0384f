"""Stress as a linear functional on jets: forms, jets, stresses and virtual-work checks on boxes."""

from .forms import FormField, exterior_derivative, interior_product, pullback_to_face, wedge
from .geometry import QuadratureRule, Region, boundary_faces, integrate_face_form, integrate_top_form, make_box_region
from .jets import JetField, JetPoint, enumerate_sym, prolong, prolong_field
from .scalars import BlackBoxField, PolyField, ScalarField, random_poly
from .stress import (
    NonHolonomicStress,
    Stress,
    body_force,
    divergence,
    double_divergence,
    lift_second_order,
    nh_divergence,
    nh_traction,
    traction,
    variational_stress,
)

__version__ = "0.1.0"

__all__ = [
    "BlackBoxField",
    "FormField",
    "JetField",
    "JetPoint",
    "NonHolonomicStress",
    "PolyField",
    "QuadratureRule",
    "Region",
    "ScalarField",
    "Stress",
    "body_force",
    "boundary_faces",
    "divergence",
    "double_divergence",
    "enumerate_sym",
    "exterior_derivative",
    "integrate_face_form",
    "integrate_top_form",
    "interior_product",
    "lift_second_order",
    "make_box_region",
    "nh_divergence",
    "nh_traction",
    "prolong",
    "prolong_field",
    "pullback_to_face",
    "random_poly",
    "traction",
    "variational_stress",
    "wedge",
]
