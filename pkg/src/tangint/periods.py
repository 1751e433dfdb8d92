"""Period basis of the Legendre scheme on discs in the lambda-line.

The basis is fixed as f(lam) = pi F(1/2,1/2;1;lam) and
g(lam) = i pi F(1/2,1/2;1;1-lam) at the reference point (a standard choice;
any basis differs from it by an integral unimodular transformation).  Both
solve the hypergeometric equation

    lam (1-lam) w'' + (1 - 2 lam) w' - w/4 = 0,

so transport along paths is Taylor stepping of this ODE in the state (w, w'),
with step size bounded by half the distance to the singularities {0, 1}.  The
Wronskian relation (f g' - g f') = k / (lam^2 - lam) pins the derivative
structure; for this normalization k = i*pi (cross-checked at construction).
AGM evaluation of the hypergeometric value is provided purely as an
independent oracle and is never on the primary path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from mpmath import mp, mpc, mpf, pi as mp_pi, sqrt as msqrt

from .precision import tol_residual, working

__all__ = [
    "Disc",
    "PeriodBasis",
    "TaylorPatch",
    "hyp_f",
    "hyp_f_agm",
    "agm",
    "period_basis",
    "reference_basis",
    "wronskian_constant",
    "transport",
    "ode_residuals",
]

_SINGULAR = (mpc(0), mpc(1))


def _dist_to_singular(a) -> mpf:
    return min(abs(a - s) for s in _SINGULAR)


# ---------------------------------------------------------------------------
# hypergeometric series and the AGM oracle
# ---------------------------------------------------------------------------


def _hyp_series(lam, prec: int):
    """(F, F') for F = F(1/2, 1/2; 1; lam) by direct summation; |lam| < 1."""
    lam = mpc(lam)
    r = abs(lam)
    if r >= 1:
        raise ValueError("outside domain of the direct hypergeometric series")
    eps = mpf(2) ** (-(prec + 16))
    # term_{k+1}/term_k = lam ((k+1/2)/(k+1))^2
    F = mpc(1)
    dF = mpc(0)
    term = mpc(1)
    k = 0
    tail_factor = r / (1 - r) if r > 0 else mpf(0)
    while True:
        ratio = ((k + mpf(1) / 2) / (k + 1)) ** 2
        term = term * ratio * lam if r > 0 else mpc(0)
        k += 1
        if r == 0:
            break
        F += term
        dF += k * term / lam
        if abs(term) * tail_factor < eps and k > 4:
            break
        if k > 64 * (prec + 64):
            raise ValueError("hypergeometric series failed to converge")
    return F, dF


def hyp_f(lam, prec: int = 128):
    """F(1/2, 1/2; 1; lam) with truncation error below 2^-prec."""
    with working(prec):
        return +_hyp_series(lam, prec)[0]


def agm(a, b, prec: int = 128):
    """Arithmetic-geometric mean; independent cross-check oracle."""
    with working(prec):
        a, b = mpc(a), mpc(b)
        eps = mpf(2) ** (-(prec + 8))
        for _ in range(prec + 64):
            a, b = (a + b) / 2, msqrt(a * b)
            # sqrt branch: keep b in the half-plane of a (standard AGM choice)
            if (a - b != 0) and abs(a - b) > abs(a + b):
                b = -b
            if abs(a - b) <= eps * abs(a):
                return +((a + b) / 2)
        raise ValueError("agm failed to converge")


def hyp_f_agm(lam, prec: int = 128):
    """Gauss identity F(1/2,1/2;1;m) = 1/AGM(1, sqrt(1-m)); oracle only."""
    with working(prec):
        return 1 / agm(mpc(1), msqrt(1 - mpc(lam)), prec)


# ---------------------------------------------------------------------------
# ODE Taylor machinery
# ---------------------------------------------------------------------------


def _taylor_coeffs(a, w0, w1, radius, prec: int) -> list:
    """Taylor coefficients of the ODE solution about a, valid to |t| <= radius.

    Recurrence (lam = a + t):
      c_{k+2} = [ (k+1/2)^2 c_k - (1-2a)(k+1)^2 c_{k+1} ] / (a(1-a)(k+2)(k+1))
    Enough terms are produced that the tail at |t| = radius is below
    2^-(prec+16), using the observed geometric decay rate |t|/dist(a, {0,1}).
    """
    a = mpc(a)
    dist = _dist_to_singular(a)
    if radius >= dist:
        raise ValueError("expansion radius reaches a singular fiber")
    theta = mpf(radius) / dist
    eps = mpf(2) ** (-(prec + 16))
    p0 = a * (1 - a)
    one_m_2a = 1 - 2 * a
    cs = [mpc(w0), mpc(w1)]
    k = 0
    quiet = 0
    cap = 64 * (prec + 64)
    tail_factor = theta / (1 - theta) if theta > 0 else mpf(0)
    while True:
        ck, ck1 = cs[k], cs[k + 1]
        c_next = ((k + mpf(1) / 2) ** 2 * ck - one_m_2a * (k + 1) ** 2 * ck1) / (
            p0 * (k + 2) * (k + 1)
        )
        cs.append(c_next)
        k += 1
        bound = abs(c_next) * mpf(radius) ** (k + 1)
        if bound * max(tail_factor, mpf(1)) < eps:
            quiet += 1
            if quiet >= 8:
                break
        else:
            quiet = 0
        if k > cap:
            raise ValueError("continuation failed: series did not converge")
    return cs


def _eval_series(cs: Sequence, t):
    val = mpc(0)
    dval = mpc(0)
    for k in range(len(cs) - 1, 0, -1):
        val = val * t + cs[k]
        dval = dval * t + k * cs[k]
    val = val * t + cs[0]
    return val, dval


def _step(a, states, target, prec: int):
    """Advance ODE states (list of (w, w') pairs) from a to target directly."""
    t = mpc(target) - mpc(a)
    out = []
    for w0, w1 in states:
        cs = _taylor_coeffs(a, w0, w1, abs(t), prec)
        out.append(_eval_series(cs, t))
    return out


def transport(states, start, end, prec: int):
    """Continue ODE states along the straight segment [start, end].

    Substeps never exceed half the distance to {0, 1}; a forced substep below
    2^-prec aborts (the segment grazes a singular fiber).
    """
    cur = mpc(start)
    end = mpc(end)
    states = [(mpc(w), mpc(dw)) for w, dw in states]
    floor = mpf(2) ** (-prec)
    guard_steps = 0
    while cur != end:
        dist = _dist_to_singular(cur)
        if dist <= floor:
            raise ValueError("continuation failed: path touches a singular fiber")
        remaining = end - cur
        h = min(abs(remaining), dist / 2)
        if h <= floor:
            raise ValueError("continuation failed: step-size underflow")
        target = end if h >= abs(remaining) else cur + remaining / abs(remaining) * h
        states = _step(cur, states, target, prec)
        cur = target
        guard_steps += 1
        if guard_steps > 4096:
            raise ValueError("continuation failed: too many steps")
    return states


# ---------------------------------------------------------------------------
# the basis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PeriodBasis:
    """Values (f, g) of the period basis and their lambda-derivatives at a point.

    `path` records the polyline of base points used to reach `at` from the
    reference point (branch provenance).
    """

    f: mpc
    g: mpc
    df: mpc
    dg: mpc
    at: mpc
    path: tuple = ()

    def check(self, prec: int = 128) -> "PeriodBasis":
        delta = self.f * self.g.conjugate() - self.f.conjugate() * self.g
        if not abs(delta) > 1e-6 * abs(self.f) * abs(self.g):
            raise ValueError("degenerate basis: f, g not R-independent")
        k = wronskian_constant(self)
        if abs(abs(k) - mp_pi) > tol_residual(prec) * mp_pi * 4:
            raise ValueError("basis fails the Wronskian-constant check")
        return self

    @property
    def delta(self) -> mpc:
        return self.f * self.g.conjugate() - self.f.conjugate() * self.g


def wronskian_constant(basis: PeriodBasis) -> mpc:
    """k = (f g' - g f') (lam^2 - lam); constant on a continuation domain."""
    lam = basis.at
    return (basis.f * basis.dg - basis.g * basis.df) * (lam * lam - lam)


DEFAULT_REFERENCE = Fraction(1, 2)

_reference_cache: dict = {}


def reference_basis(prec: int = 128, reference=DEFAULT_REFERENCE) -> PeriodBasis:
    """Basis at the reference point from the direct series."""
    key = (str(reference), prec)
    if key in _reference_cache:
        return _reference_cache[key]
    with working(prec):
        lam = mpc(reference) if not isinstance(reference, Fraction) else mpc(
            mpf(reference.numerator) / reference.denominator
        )
        F1, dF1 = _hyp_series(lam, prec + 16)
        F2, dF2 = _hyp_series(1 - lam, prec + 16)
        i = mpc(0, 1)
        basis = PeriodBasis(
            f=mp_pi * F1,
            g=i * mp_pi * F2,
            df=mp_pi * dF1,
            dg=-i * mp_pi * dF2,
            at=lam,
            path=(complex(lam),),
        ).check(prec)
    _reference_cache[key] = basis
    return basis


def period_basis(lam, path: Sequence = (), prec: int = 128, reference=DEFAULT_REFERENCE) -> PeriodBasis:
    """Basis at lam, continued from the reference point along `path` + [lam]."""
    with working(prec):
        base = reference_basis(prec, reference)
        route = [base.at] + [mpc(p) for p in path] + [mpc(lam)]
        states = [(base.f, base.df), (base.g, base.dg)]
        for a, b in zip(route, route[1:]):
            if a == b:
                continue
            states = transport(states, a, b, prec)
        (f, df), (g, dg) = states
        return PeriodBasis(f, g, df, dg, mpc(lam), tuple(complex(p) for p in route)).check(prec)


# ---------------------------------------------------------------------------
# discs and cached Taylor patches
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Disc:
    """Closed disc in the lambda-line avoiding the singular fibers {0, 1}."""

    center: complex
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("disc radius must be positive")
        c = mpc(self.center)
        for s, name in ((mpc(0), "0"), (mpc(1), "1")):
            if abs(c - s) <= self.radius:
                raise ValueError(f"disc must avoid lambda = {name}")

    def contains(self, lam, slack: float = 0.0) -> bool:
        return abs(mpc(lam) - mpc(self.center)) <= self.radius + slack

    def grid(self, n: int) -> list:
        """Deterministic n x n grid covering the disc (points inside only)."""
        pts = []
        c = mpc(self.center)
        for i in range(n):
            for j in range(n):
                re = -1 + (2 * i + 1) / n
                im = -1 + (2 * j + 1) / n
                if re * re + im * im <= 1:
                    pts.append(c + self.radius * mpc(re, im))
        return pts


class TaylorPatch:
    """Taylor expansions of (f, g) about a disc center.

    One series evaluation per point replaces a full ODE continuation; valid on
    the closed disc (requires radius < 0.95 * distance to {0, 1}).
    """

    def __init__(self, disc: Disc, prec: int = 128, reference=DEFAULT_REFERENCE,
                 route: Sequence = ()):
        self.disc = disc
        self.prec = prec
        self.route = tuple(route)
        center = mpc(disc.center)
        if disc.radius >= 0.95 * _dist_to_singular(center):
            raise ValueError("disc too large for a single Taylor patch")
        with working(prec):
            base = period_basis(center, self.route, prec, reference)
            self.center = center
            self.base = base
            rad = mpf(disc.radius) * mpf("1.05")
            self._cf = _taylor_coeffs(center, base.f, base.df, rad, prec)
            self._cg = _taylor_coeffs(center, base.g, base.dg, rad, prec)
        self._memo: dict = {}

    def basis_at(self, lam) -> PeriodBasis:
        lam = mpc(lam)
        key = (lam.real._mpf_, lam.imag._mpf_)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if not self.disc.contains(lam, slack=0.05 * self.disc.radius):
            raise ValueError("point outside the patch disc")
        with working(self.prec):
            t = lam - self.center
            f, df = _eval_series(self._cf, t)
            g, dg = _eval_series(self._cg, t)
            out = PeriodBasis(f, g, df, dg, lam, self.base.path)
        if len(self._memo) > 300000:
            self._memo.clear()
        self._memo[key] = out
        return out


_patch_cache: dict = {}


def patch_for(disc: Disc, prec: int, reference=DEFAULT_REFERENCE,
              route: Sequence = ()) -> TaylorPatch:
    key = (str(disc.center), str(disc.radius), prec, str(reference),
           tuple(str(p) for p in route))
    if key not in _patch_cache:
        _patch_cache[key] = TaylorPatch(disc, prec, reference, route)
    return _patch_cache[key]


# ---------------------------------------------------------------------------
# independent residual checks
# ---------------------------------------------------------------------------


def ode_residuals(basis_at: Callable, lam, prec: int = 128, h=None):
    """Finite-difference hypergeometric-ODE residuals of f and g at lam.

    Uses Richardson-extrapolated central differences of the carried derivative
    fields, entirely from `basis_at` evaluations, so the check is independent
    of how those fields were produced.  Returns (res_f, res_g).
    """
    with working(prec + 64):
        lam = mpc(lam)
        if h is None:
            h = mpf(2) ** (-(prec // 6))
        b0 = basis_at(lam)

        def second(att):
            bp, bm = basis_at(lam + att), basis_at(lam - att)
            return (
                (bp.df - bm.df) / (2 * att),
                (bp.dg - bm.dg) / (2 * att),
            )

        d1f, d1g = second(h)
        d2f, d2g = second(h / 2)
        ddf = (4 * d2f - d1f) / 3
        ddg = (4 * d2g - d1g) / 3
        p = lam * (1 - lam)
        q = 1 - 2 * lam
        res_f = abs(p * ddf + q * b0.df - b0.f / 4)
        res_g = abs(p * ddg + q * b0.dg - b0.g / 4)
        return res_f, res_g
