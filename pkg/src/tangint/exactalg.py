"""Exact arithmetic over Q: univariate polynomials, rational functions, and
bivariate polynomials in (x, lam).

Everything here is exact big-rational arithmetic (`fractions.Fraction`); no
floating point enters this module.  Polynomial gcds run through a subresultant
polynomial remainder sequence over Z to keep coefficient growth under control,
and the resultant is the Sylvester-matrix determinant computed fraction-free
(Bareiss).  Sign convention for resultants: ``res(p, q) = det(Syl(p, q))`` with
the block of p-coefficient rows on top; it is used consistently and only up to
sign downstream.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd as _int_gcd
from typing import Iterable, Sequence

Rat = Fraction

__all__ = [
    "Rat",
    "RatPoly",
    "RatFunc",
    "BivarPoly",
    "poly_gcd",
    "squarefree_decompose",
    "resultant",
    "ratfunc_arith",
    "irreducible_factors",
    "is_irreducible",
]


def _as_rat(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


class RatPoly:
    """Univariate polynomial over Q, coefficients lowest degree first.

    Immutable; the zero polynomial has an empty coefficient tuple and
    degree -1 by convention.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("RatPoly is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "RatPoly":
        return cls(())

    @classmethod
    def one(cls) -> "RatPoly":
        return cls((1,))

    @classmethod
    def const(cls, c) -> "RatPoly":
        return cls((_as_rat(c),))

    @classmethod
    def x(cls) -> "RatPoly":
        return cls((0, 1))

    @classmethod
    def monomial(cls, k: int, c=1) -> "RatPoly":
        return cls((0,) * k + (_as_rat(c),))

    # -- basic structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (Fraction(1),)

    def lc(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("leading coefficient of zero polynomial")
        return self.coeffs[-1]

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatPoly.const(other)
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other) -> "RatPoly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "RatPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatPoly":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "RatPoly":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return RatPoly.zero()
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RatPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = RatPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other) -> tuple["RatPoly", "RatPoly"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        db, lb = other.degree, other.lc()
        while len(r) - 1 >= db and any(r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < db:
                break
            k = len(r) - 1 - db
            c = r[-1] / lb
            q[k] = c
            for j, bc in enumerate(other.coeffs):
                r[k + j] -= c * bc
            r.pop()
        return RatPoly(q), RatPoly(r)

    def __floordiv__(self, other) -> "RatPoly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "RatPoly":
        return divmod(self, other)[1]

    def exact_div(self, other) -> "RatPoly":
        q, r = divmod(self, self._coerce(other))
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    @staticmethod
    def _coerce(v) -> "RatPoly":
        if isinstance(v, RatPoly):
            return v
        if isinstance(v, (int, Fraction)):
            return RatPoly.const(v)
        raise TypeError(f"cannot coerce {v!r} to RatPoly")

    # -- derived operations --------------------------------------------------

    def monic(self) -> "RatPoly":
        if self.is_zero():
            return self
        l = self.lc()
        return RatPoly(c / l for c in self.coeffs)

    def derivative(self) -> "RatPoly":
        return RatPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def eval(self, v):
        """Horner evaluation; works for Fraction, int, float, mpmath types."""
        if isinstance(v, (int, Fraction)):
            out = Fraction(0)
            for c in reversed(self.coeffs):
                out = out * v + c
            return out
        # numeric domain: inject exact coefficients via integer ops only
        zero = v * 0
        out = zero
        for c in reversed(self.coeffs):
            cv = c.numerator if c.denominator == 1 else (zero + c.numerator) / c.denominator
            out = out * v + cv
        return out

    def compose(self, inner: "RatPoly") -> "RatPoly":
        out = RatPoly.zero()
        for c in reversed(self.coeffs):
            out = out * inner + RatPoly.const(c)
        return out

    def shift(self, k: int) -> "RatPoly":
        """Multiply by t^k."""
        if self.is_zero():
            return self
        return RatPoly((Fraction(0),) * k + self.coeffs)

    def content_primitive(self) -> tuple[Fraction, list[int]]:
        """Return (content, primitive integer coefficients) with content*prim == self.

        The primitive part has integer coefficients with gcd 1 and positive
        leading coefficient.
        """
        if self.is_zero():
            return Fraction(0), []
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // _int_gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = _int_gcd(g, abs(v))
        sign = -1 if ints[-1] < 0 else 1
        prim = [v // (g * sign) for v in ints]
        return Fraction(g * sign, den), prim

    # -- text form (CLI / fixtures interface) --------------------------------

    def to_string(self, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*{var}")
            else:
                parts.append(f"{c}*{var}^{k}")
        return " + ".join(parts)

    @classmethod
    def parse(cls, text: str, var: str = "t") -> "RatPoly":
        """Parse ``c0 + c1*t + c2*t^2`` style text, whitespace-insensitive."""
        s = re.sub(r"\s+", "", text)
        if not s:
            raise ValueError("empty polynomial string")
        if s == "0":
            return cls.zero()
        # split into signed terms
        terms = re.findall(r"[+-]?[^+-]+", s)
        coeffs: dict[int, Fraction] = {}
        term_re = re.compile(
            r"^([+-]?)(?:(\d+(?:/\d+)?)\*?)?(?:%s(?:\^(\d+))?)?$" % re.escape(var)
        )
        for t in terms:
            m = term_re.match(t)
            if not m or (m.group(2) is None and var not in t):
                raise ValueError(f"cannot parse polynomial term {t!r}")
            sign = -1 if m.group(1) == "-" else 1
            coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            if var in t:
                k = int(m.group(3)) if m.group(3) else 1
            else:
                k = 0
            coeffs[k] = coeffs.get(k, Fraction(0)) + sign * coeff
        n = max(coeffs) + 1
        return cls(coeffs.get(k, Fraction(0)) for k in range(n))

    def __repr__(self):
        return f"RatPoly({self.to_string()!r})"


# ---------------------------------------------------------------------------
# gcd / squarefree machinery
# ---------------------------------------------------------------------------


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of integer coefficient lists (low first)."""
    da, db = len(a) - 1, len(b) - 1
    r = list(a)
    lb = b[-1]
    for _ in range(da - db + 1):
        if len(r) - 1 < db or not any(r):
            break
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db:
            break
        k = len(r) - 1 - db
        lr = r[-1]
        r = [c * lb for c in r]
        for j, bc in enumerate(b):
            r[k + j] -= lr * bc
        r.pop()
    while r and r[-1] == 0:
        r.pop()
    return r


def _int_primitive(v: list[int]) -> list[int]:
    g = 0
    for c in v:
        g = _int_gcd(g, abs(c))
    if g == 0:
        return []
    if v[-1] < 0:
        g = -g
    return [c // g for c in v]


def poly_gcd(p: RatPoly, q: RatPoly) -> RatPoly:
    """Monic gcd via a primitive subresultant-style PRS over Z."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd undefined for two zero polynomials")
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    _, a = p.content_primitive()
    _, b = q.content_primitive()
    if len(a) < len(b):
        a, b = b, a
    while True:
        r = _int_prem(a, b)
        if not r:
            break
        if len(r) == 1:
            return RatPoly.one()
        a, b = b, _int_primitive(r)
    return RatPoly(b).monic()


def squarefree_decompose(p: RatPoly) -> list[tuple[RatPoly, int]]:
    """Yun's algorithm: p = lc * prod f_i^i with f_i monic squarefree coprime.

    Returns the list of (f_i, i) with nontrivial f_i, in increasing i.
    """
    if p.is_zero():
        raise ValueError("squarefree decomposition of zero")
    if p.degree == 0:
        return []
    f = p.monic()
    df = f.derivative()
    g = poly_gcd(f, df)
    out: list[tuple[RatPoly, int]] = []
    if g.degree == 0:
        return [(f, 1)]
    c = f.exact_div(g)
    d = df.exact_div(g) - c.derivative()
    i = 1
    while c.degree > 0:
        h = poly_gcd(c, d) if not d.is_zero() else c.monic()
        if h.degree > 0:
            out.append((h, i))
            c = c.exact_div(h)
        d = d.exact_div(h) - c.derivative()
        i += 1
    return out


def reconstruct_from_squarefree(lc: Fraction, parts: Sequence[tuple[RatPoly, int]]) -> RatPoly:
    out = RatPoly.const(lc)
    for f, m in parts:
        out = out * f**m
    return out


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


class RatFunc:
    """Element of Q(t) in canonical form: coprime, monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = RatPoly._coerce(num)
        den = RatPoly.one() if den is None else RatPoly._coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = RatPoly.zero(), RatPoly.one()
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            l = den.lc()
            if l != 1:
                num = num * RatPoly.const(1 / l)
                den = den.monic()
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(RatPoly.const(c))

    @classmethod
    def t(cls) -> "RatFunc":
        return cls(RatPoly.x())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_one()

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    @staticmethod
    def _coerce(v):
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, (int, Fraction, RatPoly)):
            return RatFunc(v)
        return NotImplemented

    def __add__(self, other) -> "RatFunc":
        other = self._coerce(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RatFunc":
        other = self._coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFunc":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return RatFunc(self.den, self.num) ** (-n)
        return RatFunc(self.num**n, self.den**n)

    def derivative(self) -> "RatFunc":
        return RatFunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def eval(self, v):
        return self.num.eval(v) / self.den.eval(v)

    def to_string(self, var: str = "t") -> str:
        if self.is_poly():
            return self.num.to_string(var)
        return f"({self.num.to_string(var)}) / ({self.den.to_string(var)})"

    @classmethod
    def parse(cls, text: str, var: str = "t") -> "RatFunc":
        s = text.strip()
        m = re.match(r"^\((.*)\)\s*/\s*\((.*)\)$", s)
        if m:
            return cls(RatPoly.parse(m.group(1), var), RatPoly.parse(m.group(2), var))
        return cls(RatPoly.parse(s, var))

    def __repr__(self):
        return f"RatFunc({self.to_string()!r})"


def ratfunc_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    """Arithmetic on rational functions; result is canonical by construction."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# bivariate polynomials in (x, lam); x is the outer variable
# ---------------------------------------------------------------------------


class BivarPoly:
    """Polynomial in Q[lam][x]: tuple of RatPoly-in-lam coefficients, by x-degree."""

    __slots__ = ("xcoeffs",)

    def __init__(self, xcoeffs: Iterable = ()):
        cs = []
        for c in xcoeffs:
            if isinstance(c, RatPoly):
                cs.append(c)
            else:
                cs.append(RatPoly._coerce(c))
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "xcoeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("BivarPoly is immutable")

    @classmethod
    def zero(cls) -> "BivarPoly":
        return cls(())

    @classmethod
    def one(cls) -> "BivarPoly":
        return cls((RatPoly.one(),))

    @classmethod
    def const(cls, c) -> "BivarPoly":
        return cls((RatPoly._coerce(c),))

    @classmethod
    def x(cls) -> "BivarPoly":
        return cls((RatPoly.zero(), RatPoly.one()))

    @classmethod
    def lam(cls) -> "BivarPoly":
        return cls((RatPoly.x(),))

    @classmethod
    def from_grid(cls, grid: Sequence[Sequence]) -> "BivarPoly":
        """grid[i][j] = coefficient of x^i * lam^j."""
        return cls(RatPoly(row) for row in grid)

    def grid(self) -> list[list[Fraction]]:
        return [list(c.coeffs) for c in self.xcoeffs]

    @property
    def xdegree(self) -> int:
        return len(self.xcoeffs) - 1

    @property
    def lamdegree(self) -> int:
        return max((c.degree for c in self.xcoeffs), default=-1)

    def is_zero(self) -> bool:
        return not self.xcoeffs

    def coeff(self, i: int) -> RatPoly:
        if 0 <= i < len(self.xcoeffs):
            return self.xcoeffs[i]
        return RatPoly.zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, RatPoly)):
            other = BivarPoly((other,))
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.xcoeffs == other.xcoeffs

    def __hash__(self):
        return hash(self.xcoeffs)

    @staticmethod
    def _coerce(v) -> "BivarPoly":
        if isinstance(v, BivarPoly):
            return v
        if isinstance(v, (int, Fraction, RatPoly)):
            return BivarPoly((v,))
        raise TypeError(f"cannot coerce {v!r} to BivarPoly")

    def __add__(self, other) -> "BivarPoly":
        other = self._coerce(other)
        n = max(len(self.xcoeffs), len(other.xcoeffs))
        return BivarPoly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "BivarPoly":
        return BivarPoly(-c for c in self.xcoeffs)

    def __sub__(self, other) -> "BivarPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "BivarPoly":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "BivarPoly":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return BivarPoly.zero()
        out = [RatPoly.zero()] * (len(self.xcoeffs) + len(other.xcoeffs) - 1)
        for i, a in enumerate(self.xcoeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.xcoeffs):
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + a * b
        return BivarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BivarPoly":
        if n < 0:
            raise ValueError("negative power")
        out = BivarPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def exact_div(self, other) -> "BivarPoly":
        """Exact division in Q[lam][x]; raises if not exact."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero")
        rem = list(self.xcoeffs)
        db = other.xdegree
        lead = other.xcoeffs[-1]
        q = [RatPoly.zero()] * max(0, len(rem) - db)
        while rem and len(rem) - 1 >= db:
            while rem and rem[-1].is_zero():
                rem.pop()
            if not rem or len(rem) - 1 < db:
                break
            k = len(rem) - 1 - db
            # divide leading lam-coefficients exactly
            num, r = divmod(rem[-1], lead)
            if not r.is_zero():
                raise ValueError("division is not exact (leading term)")
            q[k] = num
            for j in range(db + 1):
                rem[k + j] = rem[k + j] - num * other.xcoeffs[j]
            rem.pop()
        if any(not c.is_zero() for c in rem):
            raise ValueError("division is not exact (remainder)")
        return BivarPoly(q)

    def derivative_x(self) -> "BivarPoly":
        return BivarPoly(i * c for i, c in enumerate(self.xcoeffs) if i > 0)

    def derivative_lam(self) -> "BivarPoly":
        return BivarPoly(c.derivative() for c in self.xcoeffs)

    def subs_x(self, v: RatFunc) -> RatFunc:
        """Substitute x -> v(lam); returns an element of Q(lam)."""
        v = RatFunc._coerce(v)
        out = RatFunc.const(0)
        for c in reversed(self.xcoeffs):
            out = out * v + RatFunc(c)
        return out

    def eval(self, xval, lamval):
        """Numeric (or exact) evaluation at a point."""
        out = None
        for c in reversed(self.xcoeffs):
            cv = c.eval(lamval)
            out = cv if out is None else out * xval + cv
        if out is None:
            return 0 * xval
        return out

    def swap_vars(self) -> "BivarPoly":
        """Exchange the roles of x and lam."""
        nx = self.lamdegree + 1
        rows = []
        for j in range(nx):
            rows.append(RatPoly(c[j] for c in self.xcoeffs))
        return BivarPoly(rows)

    def to_string(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.xcoeffs):
            if c.is_zero():
                continue
            cs = c.to_string("lam")
            if i == 0:
                parts.append(f"({cs})")
            elif i == 1:
                parts.append(f"({cs})*x")
            else:
                parts.append(f"({cs})*x^{i}")
        return " + ".join(parts)

    def __repr__(self):
        return f"BivarPoly({self.to_string()!r})"


def _bareiss_det(m: list[list[RatPoly]]) -> RatPoly:
    """Fraction-free determinant of a matrix over Q[lam]."""
    n = len(m)
    if n == 0:
        return RatPoly.one()
    m = [row[:] for row in m]
    sign = 1
    prev = RatPoly.one()
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return RatPoly.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num.exact_div(prev)
            m[i][k] = RatPoly.zero()
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def resultant(p: BivarPoly, q: BivarPoly, eliminate: str = "x") -> RatPoly:
    """Resultant with respect to `eliminate` ('x' or 'lam'), as an exact
    polynomial in the other variable.

    Degenerate inputs of degree 0 in the eliminated variable follow the
    standard convention res(a, q) = a^deg(q) (and res(a, b) = 1 when both are
    constant in that variable).
    """
    if eliminate == "lam":
        return resultant(p.swap_vars(), q.swap_vars(), "x")
    if eliminate != "x":
        raise ValueError("eliminate must be 'x' or 'lam'")
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of the zero polynomial")
    dp, dq = p.xdegree, q.xdegree
    if dp == 0 and dq == 0:
        return RatPoly.one()
    if dp == 0:
        return p.xcoeffs[0] ** dq
    if dq == 0:
        return q.xcoeffs[0] ** dp
    n = dp + dq
    rows: list[list[RatPoly]] = []
    pc = list(reversed(p.xcoeffs))  # highest degree first
    qc = list(reversed(q.xcoeffs))
    for i in range(dq):
        rows.append([RatPoly.zero()] * i + pc + [RatPoly.zero()] * (n - dp - 1 - i))
    for i in range(dp):
        rows.append([RatPoly.zero()] * i + qc + [RatPoly.zero()] * (n - dq - 1 - i))
    return _bareiss_det(rows)


# ---------------------------------------------------------------------------
# irreducible factorization over Q (delegated to sympy; used for divisor
# places and minimal-polynomial validation only -- all other polynomial
# arithmetic in this package is the hand-built machinery above)
# ---------------------------------------------------------------------------


def _to_sympy(p: RatPoly):
    import sympy

    t = sympy.Symbol("t")
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)], t)


def _from_sympy(sp) -> RatPoly:
    cs = [Fraction(c.p, c.q) for c in sp.all_coeffs()]
    return RatPoly(reversed(cs))


def irreducible_factors(p: RatPoly) -> list[tuple[RatPoly, int]]:
    """Monic irreducible factors of p over Q with multiplicities."""
    if p.is_zero():
        raise ValueError("factorization of zero")
    if p.degree == 0:
        return []
    import sympy

    _, factors = _to_sympy(p).factor_list()
    out = []
    for f, m in factors:
        out.append((_from_sympy(f).monic(), int(m)))
    out.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return out


def is_irreducible(p: RatPoly) -> bool:
    if p.degree < 1:
        return False
    fs = irreducible_factors(p)
    return len(fs) == 1 and fs[0][1] == 1
