"""Counting and exactly-uniform sampling of solutions of x'Qx = t
modulo prime powers, with block diagonalization, value symbols, local
densities, and a brute-force oracle for testing."""

from .blockdiag import (
    BlockDiagForm,
    TypeI,
    TypeII,
    block_diagonalize,
    blocks_to_matrix,
    check_symmetric,
)
from .counting import (
    RepCounts,
    SingularForm,
    ZeroTarget,
    count_composite,
    count_form,
    form_counts_by_symbol,
    local_density,
)
from .modring import (
    INF,
    DomainError,
    NotAUnit,
    PrimePower,
    Valuation,
    is_probable_prime,
    kronecker2,
    legendre,
    sign_p,
    valuation,
)
from .sampling import (
    RepKind,
    sample_composite,
    sample_form,
    sample_split,
    sample_symbol_elem,
    sample_type1,
    sample_type2,
    split_rejection_stats,
)
from .sqroots import (
    LasVegasFail,
    NonResidue,
    NotASquare,
    lift_sqrt_odd,
    sqrt_unit_mod_2k,
    sqrt_unit_mod_p,
)
from .symbols import PkSymbol, class_size, enumerate_symbols, split_class_size, symbol_of

__version__ = "0.1.0"

__all__ = [
    "INF",
    "BlockDiagForm",
    "DomainError",
    "LasVegasFail",
    "NonResidue",
    "NotASquare",
    "NotAUnit",
    "PkSymbol",
    "PrimePower",
    "RepCounts",
    "RepKind",
    "SingularForm",
    "TypeI",
    "TypeII",
    "Valuation",
    "ZeroTarget",
    "block_diagonalize",
    "blocks_to_matrix",
    "check_symmetric",
    "class_size",
    "count_composite",
    "count_form",
    "enumerate_symbols",
    "form_counts_by_symbol",
    "is_probable_prime",
    "kronecker2",
    "legendre",
    "lift_sqrt_odd",
    "local_density",
    "sample_composite",
    "sample_form",
    "sample_split",
    "sample_symbol_elem",
    "sample_type1",
    "sample_type2",
    "sign_p",
    "split_class_size",
    "split_rejection_stats",
    "sqrt_unit_mod_2k",
    "sqrt_unit_mod_p",
    "symbol_of",
    "valuation",
]
