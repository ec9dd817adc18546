"""
GroDiv - Groups Package
Pluggable finitely generated groups with canonical element forms.
"""

from .group_interface import (
    FinitelyGeneratedGroup,
    Generator,
    GroupElement,
    GroupFactory,
    Word,
    get_group,
)
from .concrete import (
    DirectProduct,
    FreeAbelianGroup,
    FreeGroup,
    HeisenbergGroup,
    MatrixGroup,
    factor_element,
    signed_permutation,
    sl2z_generators,
    sl2z_group,
    sl3z_generators,
    sl3z_group,
)

__all__ = [
    "FinitelyGeneratedGroup",
    "Generator",
    "GroupElement",
    "GroupFactory",
    "Word",
    "get_group",
    "DirectProduct",
    "FreeAbelianGroup",
    "FreeGroup",
    "HeisenbergGroup",
    "MatrixGroup",
    "factor_element",
    "signed_permutation",
    "sl2z_generators",
    "sl2z_group",
    "sl3z_generators",
    "sl3z_group",
]
