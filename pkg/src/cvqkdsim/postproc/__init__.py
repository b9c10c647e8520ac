"""Secret-key extraction: multidimensional reverse reconciliation, LDPC
syndrome decoding, and Toeplitz privacy amplification."""

from .ldpc import LdpcCode, load_alist, save_alist, ldpc_syndrome, bp_decode
from .multidim import multidim_map, apply_map, compute_llrs
from .privacy import privacy_amplify
from .pipeline import KeyResult, key_pipeline

__all__ = [
    "LdpcCode", "load_alist", "save_alist", "ldpc_syndrome", "bp_decode",
    "multidim_map", "apply_map", "compute_llrs", "privacy_amplify",
    "KeyResult", "key_pipeline",
]
