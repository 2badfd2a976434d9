"""Exact and numerical tools for simple loops on the bridge sphere of 2-bridge links."""

from .farey import INF, ONE, ZERO, Slope, cont_frac, fusion_intervals
from .words import Word, u_hat, u_word

__all__ = ["INF", "ONE", "ZERO", "Slope", "Word", "cont_frac", "fusion_intervals", "u_hat", "u_word"]
__version__ = "0.1.0"
