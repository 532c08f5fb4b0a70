"""Denjoy-Carleman weight sequences, associated functions and C_M Lojasiewicz checks."""

from __future__ import annotations

__version__ = "0.1.0"

from .assoc import eta_bracket, find_rho, hm, hm_eval, hm_table, recover_mj  # noqa: E402
from .weights import Explicit, Gevrey, WeightSequence, check_regularity, make_weight_sequence  # noqa: E402

__all__ = [
    "Explicit",
    "Gevrey",
    "WeightSequence",
    "check_regularity",
    "eta_bracket",
    "find_rho",
    "hm",
    "hm_eval",
    "hm_table",
    "make_weight_sequence",
    "recover_mj",
]
