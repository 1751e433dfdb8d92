"""Elliptic logarithms of section values and their lambda-derivatives.

The log of an affine point (x, y) on y^2 = x(x-1)(x-lam) is computed by the
Carlson symmetric integral z = 2 R_F(x, x-1, x-lam), the sign resolved by
matching p'(z) = 2y, and the representative reduced into the fundamental
parallelogram of (f, g).  Every accepted log is certified against the
Weierstrass identity p(z) = x - (lam+1)/3, with p evaluated from the lattice
itself (Laurent series plus duplication; invariants g2, g3 recomputed from
(f, g) by Eisenstein series and cross-checked against their algebraic values
for the shifted cubic, so the lattice and the algebra test each other).

Derivatives along a section are Richardson-extrapolated central differences of
the branch-pinned log, with consecutive stencil samples forced onto the same
lattice representative; a jump bigger than |f|/4 is an error, never a silent
branch flip.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from mpmath import exp as mexp, mp, mpc, mpf, pi as mp_pi
from mpmath import elliprf

from .legendre import INFINITY, CurvePoint, on_curve
from .periods import PeriodBasis, TaylorPatch
from .precision import tol_residual, working

__all__ = [
    "EllipticLog",
    "LogDerivative",
    "SectionContext",
    "conjugate_coords",
    "gauss_reduce",
    "lattice_reduce",
    "lattice_distance",
    "weierstrass_p",
    "invariants_from_lattice",
    "invariants_from_lambda",
    "elliptic_log",
    "dz_dlambda",
]


def conjugate_coords(z, f, g):
    """Solve z = u f + v g over R by the conjugate elimination.

    u = (z conj(g) - conj(z) g) / Delta with Delta = f conj(g) - conj(f) g;
    v is the matching Cramer solution.  Returned as complex numbers; they are
    real up to rounding whenever the inputs are consistent.
    """
    fb, gb, zb = f.conjugate(), g.conjugate(), z.conjugate()
    delta = f * gb - fb * g
    if delta == 0:
        raise ValueError("degenerate basis")
    u = (z * gb - zb * g) / delta
    v = (f * zb - fb * z) / delta
    return u, v


def gauss_reduce(f, g):
    """Shortest basis of the lattice Zf + Zg (plain Gauss reduction)."""
    a, b = mpc(f), mpc(g)
    if abs(a) > abs(b):
        a, b = b, a
    for _ in range(64):
        mu = mp.nint((b * a.conjugate()).real / abs(a) ** 2)
        b = b - mu * a
        if abs(b) >= abs(a):
            return a, b
        a, b = b, a
    raise ValueError("lattice reduction failed")


def _nearest_zero(z, f, g):
    """Representative of z modulo Zf + Zg of (locally) minimal modulus."""
    u, v = conjugate_coords(z, f, g)
    m1, m2 = int(mp.nint(u.real)), int(mp.nint(v.real))
    best = z - m1 * f - m2 * g
    bm1, bm2 = m1, m2
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            cand = z - (m1 + i) * f - (m2 + j) * g
            if abs(cand) < abs(best):
                best, bm1, bm2 = cand, m1 + i, m2 + j
    return best, bm1, bm2


def lattice_reduce(z, f, g, prec: int = 128):
    """Reduce z into the fundamental parallelogram {uf + vg : u, v in [0, 1)}.

    Returns (z_reduced, (m1, m2)) with z = z_reduced + m1 f + m2 g.  A snap
    tolerance keeps coordinates within a rounding hair of an integer at 0
    rather than 1, making the reduction idempotent.
    """
    u, v = conjugate_coords(z, f, g)
    snap = tol_residual(prec)
    m1 = int(mp.floor(u.real + snap))
    m2 = int(mp.floor(v.real + snap))
    return z - m1 * f - m2 * g, (m1, m2)


def lattice_distance(z, f, g):
    """Distance from z to the lattice Zf + Zg."""
    w1, w2 = gauss_reduce(f, g)
    return abs(_nearest_zero(z, w1, w2)[0])


# ---------------------------------------------------------------------------
# lattice invariants and the Weierstrass function
# ---------------------------------------------------------------------------


def invariants_from_lambda(lam):
    """Algebraic g2, g3 of the cubic shifted by x = X + (lam+1)/3."""
    lam = mpc(lam)
    g2 = mpf(4) / 3 * (lam * lam - lam + 1)
    g3 = mpf(4) / 27 * (1 + lam) * (2 * lam - 1) * (lam - 2)
    return g2, g3


def invariants_from_lattice(f, g, prec: int = 128):
    """g2, g3 by Eisenstein q-series on the Gauss-reduced basis."""
    with working(prec):
        w1, w2 = gauss_reduce(f, g)
        tau = w2 / w1
        if tau.imag < 0:
            tau = -tau
            w2 = -w2
        q = mexp(2j * mp_pi * tau)
        aq = abs(q)
        if aq > mpf("0.07"):
            raise ValueError("lattice basis failed to reduce (Im tau too small)")
        eps = mpf(2) ** (-(prec + 16))
        e4 = mpc(0)
        e6 = mpc(0)
        qn = mpc(1)
        n = 0
        while True:
            n += 1
            qn *= q
            t = qn / (1 - qn)
            e4 += n**3 * t
            e6 += n**5 * t
            if n**5 * aq**n < eps and n > 4:
                break
            if n > 4 * prec:
                raise ValueError("Eisenstein series failed to converge")
        E4 = 1 + 240 * e4
        E6 = 1 - 504 * e6
        g2 = (4 * mp_pi**4 / 3) * E4 / w1**4
        g3 = (8 * mp_pi**6 / 27) * E6 / w1**6
        return g2, g3


def _laurent_coeffs(g2, g3, prec: int):
    """c_k with p(w) = w^-2 + sum_{k>=1} c_k w^{2k}; c1 = g2/20, c2 = g3/28."""
    K = int((prec + 96) / mpf("3.5")) + 10
    cs = [mpc(0), g2 / 20, g3 / 28]
    for k in range(3, K + 1):
        s = mpc(0)
        for m in range(1, k - 1):
            s += cs[m] * cs[k - 1 - m]
        cs.append(3 * s / ((2 * k + 3) * (k - 2)))
    return cs


def weierstrass_p(z, basis: PeriodBasis, prec: int = 128, invariants=None):
    """(p(z), p'(z)) for the lattice Z f + Z g of the basis.

    Laurent series after argument reduction and halving, then algebraic
    duplication back up; g2, g3 from the lattice unless supplied.
    """
    with working(prec):
        f, g = basis.f, basis.g
        w1, w2 = gauss_reduce(f, g)
        z0, _, _ = _nearest_zero(mpc(z), w1, w2)
        rho = abs(w1)
        if abs(z0) < tol_residual(prec) * rho:
            raise ValueError("p evaluated at a lattice point")
        if invariants is None:
            g2, g3 = invariants_from_lattice(f, g, prec)
            g2a, g3a = invariants_from_lambda(basis.at)
            scale = max(mpf(1), abs(g2a), abs(g3a))
            if abs(g2 - g2a) > tol_residual(prec) * scale or abs(
                g3 - g3a
            ) > tol_residual(prec) * scale:
                raise ValueError("lattice invariants disagree with the curve")
        else:
            g2, g3 = invariants
        halvings = 0
        w = z0
        while abs(w) > mpf("0.27") * rho:
            w /= 2
            halvings += 1
            if halvings > 8:
                raise ValueError("argument reduction failed")
        cs = _laurent_coeffs(g2, g3, prec)
        w2_ = w * w
        pv = 1 / w2_
        dv = -2 / (w2_ * w)
        t = mpc(1)
        for k in range(1, len(cs)):
            t *= w2_
            pv += cs[k] * t
            dv += 2 * k * cs[k] * t / w
        for _ in range(halvings):
            # duplication: A = p''/p', p(2w) = -2p + A^2/4,
            # p'(2w) = -p' + A (12 p - A^2)/4
            A = (6 * pv * pv - g2 / 2) / dv
            pv, dv = -2 * pv + A * A / 4, -dv + A * (12 * pv - A * A) / 4
        return pv, dv


# ---------------------------------------------------------------------------
# elliptic logarithms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EllipticLog:
    """A certified elliptic logarithm.

    `z` is the representative in the fundamental parallelogram; `reduction`
    is the lattice vector (m1, m2) subtracted from the raw Carlson value (the
    branch witness); `residual` is the Weierstrass-identity residual at
    acceptance.
    """

    z: mpc
    point: CurvePoint
    basis: PeriodBasis
    residual: mpf
    reduction: tuple[int, int]

    def unreduced(self) -> mpc:
        return self.z + self.reduction[0] * self.basis.f + self.reduction[1] * self.basis.g


def _raw_log(p: CurvePoint, lam, prec: int) -> mpc:
    # z = int_P^infty dx/(2y) = R_F(x - 0, x - 1, x - lam), up to sign
    return elliprf(p.x, p.x - 1, p.x - lam)


def _certify(z, p: CurvePoint, basis: PeriodBasis, prec: int, invariants=None):
    """Return (residual, sign) where sign orients z so that p'(z) = 2y."""
    lam = basis.at
    pv, dv = weierstrass_p(z, basis, prec, invariants=invariants)
    xw = p.x - (lam + 1) / 3
    scale = max(mpf(1), abs(xw), abs(p.y))
    res = abs(pv - xw)
    if res > tol_residual(prec) * scale:
        return res, 0
    two_y = 2 * p.y
    if abs(dv - two_y) <= abs(dv + two_y):
        return res, 1
    return res, -1


def elliptic_log(p: CurvePoint, basis: PeriodBasis, prec: int = 128) -> EllipticLog:
    """Certified log: exp_lam(z) = p, z reduced to the fundamental parallelogram."""
    if p.is_infinity:
        raise ValueError("log of the point at infinity")
    lam = basis.at
    if not on_curve(p, lam, prec):
        raise ValueError("not on curve")
    with working(prec):
        z = _raw_log(p, lam, prec)
        res, sign = _certify(z, p, basis, prec)
        if sign == 0:
            raise ValueError(f"log failed: Weierstrass residual {res}")
        z = sign * z
        zred, (m1, m2) = lattice_reduce(z, basis.f, basis.g, prec)
        return EllipticLog(zred, p, basis, res, (m1, m2))


# ---------------------------------------------------------------------------
# branch-coherent section evaluation on a disc
# ---------------------------------------------------------------------------


class SectionContext:
    """Branch bookkeeping for one section on one Taylor patch.

    Fixes the y-branch and the log branch at the disc center, then evaluates
    points and continuity-pinned logs anywhere on the disc.  `section` needs
    `value_at(lam, prec, ref)`; the reference pair is (center, y_center).
    """

    def __init__(self, section, patch: TaylorPatch, prec: int = 128):
        self.section = section
        self.patch = patch
        self.prec = prec
        self.center = patch.center
        with working(prec):
            self.center_basis = patch.base
            p0 = section.value_at(self.center, prec, None)
            self._ref = (self.center, p0.y)
            log0 = elliptic_log(p0, self.center_basis, prec)
            self.center_log = log0
            self._z0 = log0.unreduced()

    def point_at(self, lam) -> CurvePoint:
        return self.section.value_at(lam, self.prec, self._ref)

    def log_at(self, lam, pin_to: Optional[mpc] = None, certify: bool = False):
        """(z, basis, point): log pinned to the lattice representative nearest
        `pin_to` (default: the center log)."""
        prec = self.prec
        with working(prec):
            basis = self.patch.basis_at(lam)
            p = self.point_at(lam)
            target = self._z0 if pin_to is None else pin_to
            zr = _raw_log(p, basis.at, prec)
            if certify:
                res, sign = _certify(zr, p, basis, prec)
                if sign == 0:
                    raise ValueError("log failed on stencil")
                cands = [sign * zr]
            else:
                cands = [zr, -zr]
            best = None
            for zc in cands:
                shift, _, _ = _nearest_zero(zc - target, basis.f, basis.g)
                cand = target + shift
                if best is None or abs(cand - target) < abs(best - target):
                    best = cand
            return best, basis, p


@dataclass(frozen=True)
class LogDerivative:
    """d/dlam of a branch-consistent elliptic log along a section."""

    dz: mpc
    method: str = "richardson"
    diagnostics: dict = field(default_factory=dict)


def dz_dlambda(section, lam, patch: TaylorPatch, prec: int = 128,
               ctx: Optional[SectionContext] = None, levels: int = 3) -> LogDerivative:
    """Richardson-extrapolated central difference of lam -> z(P(lam)).

    `levels` Richardson levels at steps h, h/2, ... with
    h = 2^(-prec/4) * disc radius; the stencil is branch-pinned through the
    local log value, and a lattice jump above |f|/4 between samples aborts.
    """
    if levels < 1:
        raise ValueError("need at least one difference level")
    with working(prec):
        lam = mpc(lam)
        if ctx is None:
            ctx = SectionContext(section, patch, prec)
        h0 = mpf(2) ** (-(prec // 4)) * mpf(patch.disc.radius)
        zc, basis_c, _ = ctx.log_at(lam)
        jump_tol = abs(basis_c.f) / 4
        diffs = []
        for j in range(levels):
            h = h0 / 2**j
            zp, _, _ = ctx.log_at(lam + h, pin_to=zc)
            zm, _, _ = ctx.log_at(lam - h, pin_to=zc)
            if abs(zp - zc) > jump_tol or abs(zm - zc) > jump_tol:
                raise ValueError("stencil crosses cut")
            diffs.append((zp - zm) / (2 * h))
        table = [diffs]
        while len(table[-1]) > 1:
            prev = table[-1]
            fac = 4 ** len(table)
            table.append([(fac * prev[i + 1] - prev[i]) / (fac - 1) for i in range(len(prev) - 1)])
        best = table[-1][0]
        diag = {
            "h": h0,
            "d_levels": tuple(diffs),
            "r1_gap": abs(table[1][-1] - table[1][0]) if len(table) > 1 and len(table[1]) > 1 else mpf(0),
            "final_gap": abs(best - table[-2][-1]) if len(table) > 1 else mpf(0),
        }
        return LogDerivative(best, "richardson", diag)
