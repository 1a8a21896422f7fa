"""Active learning of probabilistic deterministic finite automata with quantized distributions."""
from .errors import ContractViolation, InputError, LearningStalled, PdfaError
from .kernels import BACKEND
from .lpstar import learn_lpstar, learn_lpstar_col
from .pdfa import Alphabet, Pdfa, compute_partition, quotient, validate
from .quant import learn_quant
from .quantize import quantize_distribution
from .teacher import PdfaTeacher, eq_quantized, eq_tolerance, oracle_bisim

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "BACKEND", "ContractViolation", "InputError", "LearningStalled", "Pdfa",
    "PdfaError", "PdfaTeacher", "compute_partition", "eq_quantized", "eq_tolerance",
    "learn_lpstar", "learn_lpstar_col", "learn_quant", "oracle_bisim", "quantize_distribution",
    "quotient", "validate",
]
