"""R-splitting level of mixed Hodge structures.

Exact subspace algebra over Q(i), filtrations and their graded dimensions,
Chern characters of Rees bundles, mixed Hodge structures with the invariant
α, and period-matrix computations of α₁ for nodal punctured curves.
"""

from .curves import (
    INF,
    Genus0Config,
    Genus1Config,
    alpha1_genus0,
    alpha1_genus0_rank,
    alpha1_genus1,
    alpha1_genus1_rank,
    cross_ratio,
    period_matrix_genus0,
    period_matrix_genus1,
    scan_m04,
    t11_from_periods,
    theta,
)
from .document import ParseError, dump_mhs, parse_mhs, parse_mhs_file
from .filtration import (
    Filtration,
    are_opposed,
    dec_shift,
    double_graded_dims,
    from_increasing,
    graded_dim,
    multifilt_dim_fn,
    simultaneous_bigrading,
    split_compatibility_check,
    triple_graded_dims,
    trivial,
)
from .linalg import (
    EXACT,
    I,
    GaussianRational,
    Matrix,
    Subspace,
    floating,
    rank,
    rref,
    subspace_conjugate,
    subspace_intersect,
    subspace_sum,
)
from .mhs import (
    ExtensionData,
    HodgeNumbers,
    InvalidStructure,
    MixedHodgeStructure,
    alpha,
    deligne_splitting,
    direct_sum,
    dual,
    extension_build,
    hodge_numbers,
    is_r_split,
    tate,
    tate_twist,
    tensor,
    validate,
)
from .rees_chern import (
    ChernBlowup,
    ChernP2,
    chern_line_blowup,
    chern_line_p2,
    chern_quotient_sheaf,
    chern_rees_blowup,
    chern_rees_p2,
    chern_rees_p2_opposed,
)

__version__ = "0.1.0"

__all__ = [
    "INF", "Genus0Config", "Genus1Config", "alpha1_genus0", "alpha1_genus0_rank",
    "alpha1_genus1", "alpha1_genus1_rank", "cross_ratio", "period_matrix_genus0",
    "period_matrix_genus1", "scan_m04", "t11_from_periods", "theta",
    "ParseError", "dump_mhs", "parse_mhs", "parse_mhs_file",
    "Filtration", "are_opposed", "dec_shift", "double_graded_dims", "from_increasing",
    "graded_dim", "multifilt_dim_fn", "simultaneous_bigrading", "split_compatibility_check",
    "triple_graded_dims", "trivial",
    "EXACT", "I", "GaussianRational", "Matrix", "Subspace", "floating", "rank", "rref",
    "subspace_conjugate", "subspace_intersect", "subspace_sum",
    "ExtensionData", "HodgeNumbers", "InvalidStructure", "MixedHodgeStructure", "alpha",
    "deligne_splitting", "direct_sum", "dual", "extension_build", "hodge_numbers",
    "is_r_split", "tate", "tate_twist", "tensor", "validate",
    "ChernBlowup", "ChernP2", "chern_line_blowup", "chern_line_p2", "chern_quotient_sheaf",
    "chern_rees_blowup", "chern_rees_p2", "chern_rees_p2_opposed",
]
