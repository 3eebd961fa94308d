"""Evaluation of Saran's F_K, Humbert's Psi_1 and a Kampe de Feriet function."""

from .core import ConvergenceError, DomainError, EvalOutcome, PoleError, PrecisionContext
from .fk import FkParams, fk_asymptotic, fk_auto, fk_expansion, fk_laplace, fk_single_series, fk_triple_series
from .kdf import KdfParams, kdf
from .mellin import PsiFSpec, mellin_psiF_closed, mellin_psiF_direct
from .psi1 import Psi1Params, psi1

__all__ = [
    "ConvergenceError", "DomainError", "EvalOutcome", "PoleError", "PrecisionContext",
    "FkParams", "fk_asymptotic", "fk_auto", "fk_expansion", "fk_laplace", "fk_single_series", "fk_triple_series",
    "KdfParams", "kdf", "PsiFSpec", "mellin_psiF_closed", "mellin_psiF_direct", "Psi1Params", "psi1",
]
__version__ = "0.1.0"
