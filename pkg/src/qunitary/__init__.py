"""Exact unitarity computations for quantum groups at roots of unity."""

__version__ = "0.1.0"

from .frobenius import reality_preserving_algebra
from .gram import gram_block, module_report, verify_shift_equivalence
from .qfield import Cyclotomic, QRoot, embed_q, qbinomial, qint, sign_of_real
from .qspec import RealForm, RootOfUnitySpec, compute_spec
from .rootdata import RootSystem, build_root_system, parse_algebra

__all__ = [
    "__version__",
    "Cyclotomic",
    "QRoot",
    "embed_q",
    "qbinomial",
    "qint",
    "sign_of_real",
    "RealForm",
    "RootOfUnitySpec",
    "compute_spec",
    "RootSystem",
    "build_root_system",
    "parse_algebra",
    "gram_block",
    "module_report",
    "verify_shift_equivalence",
    "reality_preserving_algebra",
]
