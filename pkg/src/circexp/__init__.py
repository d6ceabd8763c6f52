"""Circular critical exponents of automatic words, by brute force and by automata."""
from .oracle import circular_critical_exponent, critical_exponent, exponent, periods
from .sequences import pf_at, seq_window, tm_at

__all__ = ["circular_critical_exponent", "critical_exponent", "exponent", "periods",
           "pf_at", "seq_window", "tm_at"]
