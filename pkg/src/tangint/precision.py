"""Precision contexts and standard tolerances.

All numeric work in the package runs inside an explicit binary-precision
context.  Functions take a certification precision `prec` in bits and
internally compute with `GUARD` extra bits; quoted tolerances refer to the
certification precision.  The cheap correctness heuristic used throughout is
agreement between runs at precision b and 2b to within ~2^(-b/2).
"""

from __future__ import annotations

from mpmath import mp, mpf

GUARD = 32


def working(prec: int):
    """Context manager raising the working precision to prec + GUARD bits."""
    return mp.workprec(prec + GUARD)


def tol_residual(prec: int) -> mpf:
    """Generic residual tolerance 2^(-prec/2)."""
    return mpf(2) ** (-(prec // 2))


def tol_match(prec: int) -> mpf:
    """Near-equality tolerance for values of order one."""
    return mpf(2) ** (-(3 * prec // 4))


def int_round_tol(prec: int) -> mpf:
    """Tolerance for rounding real Betti combinations to integers.

    10^-8 at 128 bits, scaling exponentially with precision; always far
    below 1/4 (the lattice-spacing safety margin).
    """
    return mpf(10) ** (-(prec // 16))
