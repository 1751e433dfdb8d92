"""Betti coordinates u, v and their lambda-derivatives; the theta map to R^4n.

u and v come from the conjugate elimination u = (z conj(g) - conj(z) g)/Delta
with Delta = f conj(g) - conj(f) g (and the matching Cramer solution for v, so
that z = u f + v g holds); derivatives solve
dz - u df - v dg = du f + dv g by the same elimination.  Values are computed
as complex numbers and certified real; imaginary parts above tolerance abort,
because a branch error upstream surfaces exactly here.  No lattice reduction
happens in this module: the coordinates inherit the log representative, which
downstream integer rounding relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from mpmath import mp, mpc, mpf

from .ellog import SectionContext, conjugate_coords
from .periods import PeriodBasis
from .precision import tol_residual, working

__all__ = ["BettiPair", "ThetaPoint", "betti_coords", "betti_derivatives", "theta_map"]


def _certified_real(w, prec: int, what: str):
    if abs(w.imag) > tol_residual(prec) * max(mpf(1), abs(w)):
        raise ValueError(f"reality certification failed for {what}: Im = {w.imag}")
    return w.real


def betti_coords(z, basis: PeriodBasis, prec: int = 128):
    """Real (u, v) with z = u f + v g; no reduction applied."""
    if isinstance(z, mpc) is False and hasattr(z, "z"):
        z = z.z
    with working(prec):
        delta = basis.delta
        if abs(delta) <= tol_residual(prec) * abs(basis.f) * abs(basis.g):
            raise ValueError("degenerate basis")
        u, v = conjugate_coords(z, basis.f, basis.g)
        return _certified_real(u, prec, "u"), _certified_real(v, prec, "v")


def betti_derivatives(z, dz, basis: PeriodBasis, prec: int = 128):
    """Real (du, dv) solving dz - u df - v dg = du f + dv g."""
    if hasattr(z, "z"):
        z = z.z
    if hasattr(dz, "dz"):
        dz = dz.dz
    with working(prec):
        u, v = betti_coords(z, basis, prec)
        w = dz - u * basis.df - v * basis.dg
        du, dv = conjugate_coords(w, basis.f, basis.g)
        return _certified_real(du, prec, "du"), _certified_real(dv, prec, "dv")


@dataclass(frozen=True)
class BettiPair:
    u: mpf
    v: mpf
    du: mpf
    dv: mpf


@dataclass(frozen=True)
class ThetaPoint:
    """Image of one lambda under the map into R^{4n}.

    coords = (u_1, v_1, ..., u_n, v_n, du_1, dv_1, ..., du_n, dv_n).
    """

    coords: tuple
    at: mpc

    @property
    def n(self) -> int:
        return len(self.coords) // 4

    def pair(self, j: int) -> BettiPair:
        n = self.n
        return BettiPair(
            self.coords[2 * j],
            self.coords[2 * j + 1],
            self.coords[2 * n + 2 * j],
            self.coords[2 * n + 2 * j + 1],
        )

    def csv_row(self, digits: int = 32) -> str:
        vals = [self.at.real, self.at.imag, *self.coords]
        return ",".join(mp.nstr(v, digits, strip_zeros=False) for v in vals)

    @staticmethod
    def csv_header(n: int) -> str:
        cols = ["lambda_re", "lambda_im"]
        for j in range(1, n + 1):
            cols += [f"u{j}", f"v{j}"]
        for j in range(1, n + 1):
            cols += [f"du{j}", f"dv{j}"]
        return ",".join(cols)


def _good_locus_check(ctx: SectionContext, lam, prec: int):
    sec = ctx.section
    getx = getattr(sec, "x", None)
    if getx is None:
        return  # synthetic sections: nothing to check exactly
    with working(prec):
        tol = tol_residual(prec)
        denv = abs(sec.x.den.eval(mpc(lam)))
        if denv <= tol:
            raise ValueError("good-locus violation: x_j has a pole (x_j = infinity)")
        xv = sec.x.eval(mpc(lam))
        if sec.is_two_torsion:
            return  # identically 2-torsion sections are handled exactly
        for bad, name in ((mpc(0), "0"), (mpc(1), "1"), (mpc(lam), "lambda")):
            if abs(xv - bad) <= tol * max(mpf(1), abs(xv)):
                raise ValueError(f"good-locus violation: x_j = {name}")


def theta_map(contexts: Sequence[SectionContext], lam, prec: int = 128,
              levels: int = 3) -> ThetaPoint:
    """Assemble the 4n coordinates at lam from branch-coherent section contexts."""
    from .ellog import dz_dlambda

    if not contexts:
        raise ValueError("need at least one section")
    with working(prec):
        lam = mpc(lam)
        uv = []
        duv = []
        for ctx in contexts:
            _good_locus_check(ctx, lam, prec)
            z, b, _ = ctx.log_at(lam)
            d = dz_dlambda(ctx.section, lam, ctx.patch, prec, ctx, levels=levels)
            u, v = betti_coords(z, b, prec)
            du, dv = betti_derivatives(z, d, b, prec)
            uv += [u, v]
            duv += [du, dv]
        return ThetaPoint(tuple(uv + duv), lam)
