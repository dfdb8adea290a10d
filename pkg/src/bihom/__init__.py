"""Exact computer algebra for bihom-associative algebras.

Hochschild cochains and their operad structure, cohomology dimensions,
formal deformations, abelian extensions and 2-term A-infinity structures,
all over the rationals.
"""

from .algebra import (
    AlgebraMorphism,
    BihomAlgebra,
    Bimodule,
    adjoint_bimodule,
    algebra_violations,
    bimodule_violations,
    make_algebra,
    make_bimodule,
    validate_algebra,
    validate_bimodule,
    yau_twist,
)
from .cohomology import (
    coboundary,
    cohomology_dims,
    cup,
    find_primitive,
    is_cocycle,
    restricted_subcomplex_dims,
)
from .deformation import (
    FormalAutomorphism,
    TruncatedDeformation,
    check_equivalence,
    extend_deformation,
    obstruction,
    verify_deformation,
)
from .extensions import (
    AbelianExtension,
    cocycle_from_extension,
    extension_from_cocycle,
    find_compatible_splitting,
)
from .ainfty import (
    AInftyStructure,
    CrossedModule,
    crossed_module_to_strict,
    strict_to_crossed_module,
    triple_to_skeletal,
    validate_ainfty,
)
from .operad import (
    Cochain,
    brace,
    circ,
    cochain,
    cochain_space_basis,
    gamma,
    gerstenhaber_bracket,
    partial_composition,
)
from .qarray import QArray

__version__ = "0.1.0"
