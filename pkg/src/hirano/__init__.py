"""Exact Drazin, strongly Drazin and Hirano inverses of rational matrices,
with mechanical checks of block-matrix invertibility results."""

from .blockthm import BlockInstance, TheoremId, Verdict, check_hypotheses, g_matrix, verify_conclusion, witness_split
from .decomp import idempotent_nilpotent, jordan_chevalley, tripotent_nilpotent
from .gendrazin import (
    cline_transfer,
    drazin_inverse,
    eigencheck_hirano,
    hirano_inverse,
    index,
    is_hirano_invertible,
    is_nilpotent,
    is_strongly_drazin_invertible,
    spectral_projections,
    strongly_drazin_inverse,
)
from .ratmat import Matrix, Poly, char_poly

__version__ = "0.1.0"

__all__ = [
    "BlockInstance",
    "Matrix",
    "Poly",
    "TheoremId",
    "Verdict",
    "char_poly",
    "check_hypotheses",
    "cline_transfer",
    "drazin_inverse",
    "eigencheck_hirano",
    "g_matrix",
    "hirano_inverse",
    "idempotent_nilpotent",
    "index",
    "is_hirano_invertible",
    "is_nilpotent",
    "is_strongly_drazin_invertible",
    "jordan_chevalley",
    "spectral_projections",
    "strongly_drazin_inverse",
    "tripotent_nilpotent",
    "verify_conclusion",
    "witness_split",
]
