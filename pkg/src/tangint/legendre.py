"""The Legendre curve y^2 = x(x-1)(x-lam) as a group.

Numeric chord-tangent arithmetic at a fixed complex lam, sections given by an
exact x-coordinate in Q(lam) with a tracked square-root branch for y, and the
division-polynomial layer giving multiplication maps exactly over Q(lam).

Conventions.  The cubic is kept in the form y^2 = x^3 - (1+lam) x^2 + lam x
throughout (no Weierstrass shift; the shift x = p + (lam+1)/3 lives in the
elliptic-log module only).  Even-index division polynomials are stored divided
by 2y, so every stored entry is y-free; squared forms are provided whenever a
pure (x, lam) expression is required.  The base entries psi_3 and psit_4 are
derived in code from the tangent-line duplication formula rather than typed in
as literals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from mpmath import mp, mpc, mpf, sqrt as msqrt

from .exactalg import BivarPoly, RatFunc, RatPoly
from .precision import tol_residual, working

__all__ = [
    "CurvePoint",
    "Section",
    "DivisionPolySystem",
    "validate_lambda",
    "curve_rhs",
    "on_curve",
    "neg",
    "add",
    "mul",
    "division_poly",
    "division_poly_squared",
    "x_of_multiple",
    "y_ratio_of_multiple",
]


def validate_lambda(lam) -> mpc:
    lam = mpc(lam)
    if not (mp.isfinite(lam.real) and mp.isfinite(lam.imag)):
        raise ValueError("lambda must be finite")
    if lam == 0 or lam == 1:
        raise ValueError("lambda must avoid {0, 1}")
    return lam


def curve_rhs(x, lam):
    """x (x - 1) (x - lam)."""
    return x * (x - 1) * (x - lam)


@dataclass(frozen=True)
class CurvePoint:
    """Affine point (x, y) or the point at infinity (both fields None)."""

    x: Optional[mpc] = None
    y: Optional[mpc] = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self):
        if self.is_infinity:
            return "CurvePoint(O)"
        return f"CurvePoint({self.x}, {self.y})"


INFINITY = CurvePoint()


def _scale(p: CurvePoint, lam) -> mpf:
    ax = abs(p.x)
    return max(mpf(1), abs(p.y) ** 2, ax**3, ax**2 * abs(lam))


def on_curve(p: CurvePoint, lam, prec: int = 128) -> bool:
    """Defining-equation residual check within the precision context."""
    if p.is_infinity:
        return True
    lam = validate_lambda(lam)
    with working(prec):
        res = abs(p.y**2 - curve_rhs(p.x, lam))
        return res <= tol_residual(prec) * _scale(p, lam)


def _require_on_curve(p: CurvePoint, lam, prec: int):
    if not on_curve(p, lam, prec):
        raise ValueError("not on curve")


def neg(p: CurvePoint) -> CurvePoint:
    if p.is_infinity:
        return p
    return CurvePoint(p.x, -p.y)


def add(p: CurvePoint, q: CurvePoint, lam, prec: int = 128, *, checked: bool = True) -> CurvePoint:
    """Chord-tangent sum on y^2 = x^3 - (1+lam) x^2 + lam x."""
    lam = validate_lambda(lam)
    if checked:
        _require_on_curve(p, lam, prec)
        _require_on_curve(q, lam, prec)
    if p.is_infinity:
        return q
    if q.is_infinity:
        return p
    with working(prec):
        eq = tol_residual(prec) * max(mpf(1), abs(p.x), abs(p.y), abs(q.x), abs(q.y))
        if abs(p.x - q.x) <= eq:
            if abs(p.y + q.y) <= eq:
                # p + (-p); includes doubling a 2-torsion point (y = 0)
                return INFINITY
            m = (3 * p.x**2 - 2 * (1 + lam) * p.x + lam) / (2 * p.y)
        else:
            m = (q.y - p.y) / (q.x - p.x)
        x3 = m**2 + (1 + lam) - p.x - q.x
        y3 = m * (p.x - x3) - p.y
        return CurvePoint(x3, y3)


def mul(n: int, p: CurvePoint, lam, prec: int = 128) -> CurvePoint:
    """n-fold sum via double-and-add; mul(-n, p) = mul(n, -p)."""
    lam = validate_lambda(lam)
    _require_on_curve(p, lam, prec)
    if n == 0 or p.is_infinity:
        return INFINITY
    if n < 0:
        n, p = -n, neg(p)
    out = INFINITY
    acc = p
    while n:
        if n & 1:
            out = add(out, acc, lam, prec, checked=False)
        acc = add(acc, acc, lam, prec, checked=False)
        n >>= 1
    return out


# ---------------------------------------------------------------------------
# division polynomials, generically over a commutative ring
# ---------------------------------------------------------------------------


class PsiTable:
    """Lazy table of division polynomials over a commutative ring.

    Stored entries: psi_n itself for odd n, psi_n / (2y) for even n; every
    entry is then a ring element (no y).  The ring is Q[x, lam] for the
    symbolic table and Q(lam) for a table specialized at a section
    x-coordinate.  Base entries derive from the duplication formula
    x(2P) = (f'^2 - 4 f (2x - 1 - lam)) / (4 f) with f the cubic.
    """

    def __init__(self, x, lam, one, zero):
        self.x = x
        self.lam = lam
        self.one = one
        self.zero = zero
        f = x * x * x - (one + lam) * x * x + lam * x
        fp = 3 * x * x - 2 * (one + lam) * x + lam
        self.f = f
        self.fp = fp
        qdup = fp * fp - 4 * f * (2 * x - one - lam)
        self.qdup = qdup
        psi3 = 4 * f * x - qdup
        psit4 = 8 * f * fp * x - 2 * fp * qdup - 16 * f * f
        self._cache = {-1: -one, 0: zero, 1: one, 2: one, 3: psi3, 4: psit4}

    def get(self, n: int):
        """psi_n for odd n, psi_n/(2y) for even n."""
        if n < -1:
            raise ValueError("index out of range")
        c = self._cache
        if n in c:
            return c[n]
        g = self.get
        m = n // 2
        if n % 2 == 1:
            # psi_{2m+1} = psi_{m+2} psi_m^3 - psi_{m-1} psi_{m+1}^3;
            # the product whose factors are both even-index picks up (2y)^4 = 16 f^2
            if m % 2 == 0:
                val = 16 * self.f * self.f * g(m + 2) * g(m) ** 3 - g(m - 1) * g(m + 1) ** 3
            else:
                val = g(m + 2) * g(m) ** 3 - 16 * self.f * self.f * g(m - 1) * g(m + 1) ** 3
        else:
            # psit_{2m} = psi_m (psi_{m+2} psi_{m-1}^2 - psi_{m-2} psi_{m+1}^2) / (4 y^2);
            # in stored entries the (2y) factors cancel identically for both parities
            val = g(m) * (g(m + 2) * g(m - 1) ** 2 - g(m - 2) * g(m + 1) ** 2)
        c[n] = val
        return val

    def psi_squared(self, n: int):
        """psi_n^2 as a genuine ring element (even n picks up 4f)."""
        g = self.get(n)
        if n % 2 == 0:
            return 4 * self.f * g * g
        return g * g

    def pair_product(self, i: int, j: int):
        """psi_i psi_j for i = j (mod 2), as a ring element."""
        if (i - j) % 2 != 0:
            raise ValueError("pair_product needs indices of equal parity")
        p = self.get(i) * self.get(j)
        if i % 2 == 0:
            return 4 * self.f * p
        return p

    def x_multiple_parts(self, n: int):
        """(numerator, denominator) of x(nP) = x - psi_{n-1} psi_{n+1} / psi_n^2."""
        if n < 1:
            raise ValueError("n must be >= 1")
        if n == 1:
            return self.x, self.one
        den = self.psi_squared(n)
        num = self.x * den - self.pair_product(n - 1, n + 1)
        return num, den

    def y_ratio_parts(self, n: int):
        """(numerator, denominator) of y(nP)/y as a ring element pair."""
        if n < 1:
            raise ValueError("n must be >= 1")
        g = self.get
        num = g(n + 2) * g(n - 1) ** 2 - g(n - 2) * g(n + 1) ** 2
        if n % 2 == 1:
            return num, g(n) ** 3
        return num, 16 * self.f * self.f * g(n) ** 3


def _bivar_table() -> PsiTable:
    return PsiTable(BivarPoly.x(), BivarPoly.lam(), BivarPoly.one(), BivarPoly.zero())


_SYMBOLIC = _bivar_table()


@dataclass
class DivisionPolySystem:
    """Division-polynomial data, symbolic and specialized at a section."""

    table: PsiTable = field(default_factory=_bivar_table)

    def psi(self, n: int) -> BivarPoly:
        return self.table.get(n)

    def psi_squared(self, n: int) -> BivarPoly:
        return self.table.psi_squared(n)


def division_poly(n: int) -> BivarPoly:
    """psi_n for odd n; psi_n / (2y) for even n (documented normalization)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _SYMBOLIC.get(n)


def division_poly_squared(n: int) -> BivarPoly:
    """psi_n^2 as a polynomial in (x, lam)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _SYMBOLIC.psi_squared(n)


def _section_table(x: RatFunc) -> PsiTable:
    x = RatFunc._coerce(x)
    return PsiTable(x, RatFunc.t(), RatFunc.const(1), RatFunc.const(0))


def x_of_multiple(n: int, x: RatFunc) -> RatFunc:
    """Exact x-coordinate of nP in Q(lam) for a section with x-coordinate x."""
    if n < 1:
        raise ValueError("n must be >= 1")
    t = _section_table(x)
    num, den = t.x_multiple_parts(n)
    if den.is_zero():
        raise ValueError("multiple is identically infinity")
    return num / den


def y_ratio_of_multiple(n: int, x: RatFunc) -> RatFunc:
    """Exact y(nP)/y in Q(lam); y(nP) = y * this ratio."""
    if n < 1:
        raise ValueError("n must be >= 1")
    t = _section_table(x)
    num, den = t.y_ratio_parts(n)
    if den.is_zero():
        raise ValueError("multiple is identically infinity")
    return num / den


# ---------------------------------------------------------------------------
# sections
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Section:
    """A point of the Legendre scheme with exact x-coordinate in Q(lam).

    y is the branch `sign * sqrt(x(x-1)(x-lam))` fixed at the reference base
    point and transported by continuity; continuations that would cross a zero
    of y^2 raise instead of silently flipping the branch.
    """

    x: RatFunc
    sign: int = 1
    basepoint: complex = 0.5

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign selector must be +1 or -1")

    def y_squared(self) -> RatFunc:
        x = self.x
        return x * (x - 1) * (x - RatFunc.t())

    @property
    def is_two_torsion(self) -> bool:
        """y identically zero: the section takes values in the 2-torsion."""
        return self.y_squared().is_zero()

    def negated(self) -> "Section":
        return Section(self.x, -self.sign, self.basepoint)

    def y_at(self, lam, prec: int = 128, ref: Optional[tuple] = None) -> mpc:
        """y value with the branch continued from `ref` (default: basepoint).

        ref is a pair (lam0, y0) with y0 the already-established branch value
        at lam0.
        """
        lam = validate_lambda(lam)
        with working(prec):
            y2 = self.y_squared()
            if y2.is_zero():
                return mpc(0)
            if ref is None:
                lam0 = mpc(self.basepoint)
                y0 = self.sign * msqrt(y2.eval(lam0))
            else:
                lam0, y0 = mpc(ref[0]), mpc(ref[1])
            return _continue_sqrt(y2, lam0, y0, lam, prec)

    def value_at(self, lam, prec: int = 128, ref: Optional[tuple] = None) -> CurvePoint:
        lam = validate_lambda(lam)
        with working(prec):
            return CurvePoint(self.x.eval(lam), self.y_at(lam, prec, ref))


def _continue_sqrt(w_func: RatFunc, lam0, y0, lam1, prec: int, depth: int = 0) -> mpc:
    """Continue y = sqrt(w(lam)) from a known value along a straight segment.

    Each accepted step keeps the relative change of w below 1/2, which traps
    w inside a disc excluding 0, so the branch cannot jump.
    """
    if depth > 40:
        raise ValueError("branch continuation failed: section approaches 2-torsion")
    w0 = y0 * y0
    w1 = w_func.eval(lam1)
    floor = tol_residual(prec)
    if abs(w1) <= floor or abs(w0) <= floor:
        raise ValueError("branch continuation crossed a zero of y^2")
    if abs(w1 - w0) <= mpf("0.5") * min(abs(w0), abs(w1)):
        s = msqrt(w1)
        return s if abs(s - y0) <= abs(s + y0) else -s
    mid = (mpc(lam0) + mpc(lam1)) / 2
    ymid = _continue_sqrt(w_func, lam0, y0, mid, prec, depth + 1)
    return _continue_sqrt(w_func, mid, ymid, lam1, prec, depth + 1)
