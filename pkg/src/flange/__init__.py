"""Matlis duality, injective hulls and flat covers of finitely determined persistence modules."""

from .exactlinalg import Field, F2, NoSolution
from .gridmod import (
    FLAT,
    INJECTIVE,
    Box,
    GridModule,
    GridMorphism,
    Summand,
    cokernel_of,
    dimension_vector,
    direct_sum,
    extend_box,
    faces,
    is_iso,
    kernel_of,
    nat_hom_basis,
    rectangle_module,
    shift,
    standard_module,
    validate,
)
from .functors import (
    MultTable,
    colocalize,
    localize,
    matlis_dual,
    matlis_dual_morphism,
    soc_functor,
    soc_table,
    top_functor,
    top_table,
)
from .resolve import (
    flange_presentation,
    flat_cover,
    injective_hull,
    minimal_flat_resolution,
    minimal_injective_resolution,
    verify_flat_cover,
    verify_injective_hull,
    verify_minimal_resolution,
)

__version__ = "0.1.0"
