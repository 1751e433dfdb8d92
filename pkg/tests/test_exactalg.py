from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tangint.exactalg import (
    BivarPoly,
    RatFunc,
    RatPoly,
    irreducible_factors,
    is_irreducible,
    poly_gcd,
    ratfunc_arith,
    reconstruct_from_squarefree,
    resultant,
    squarefree_decompose,
)

X = RatPoly.x()

rationals = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=20
)
small_polys = st.lists(rationals, min_size=0, max_size=6).map(RatPoly)
nonzero_polys = small_polys.filter(lambda p: not p.is_zero())


def poly(*coeffs):
    return RatPoly(coeffs)


class TestPolyGcd:
    def test_common_factor_by_construction(self):
        assert poly_gcd(X**2 - 1, X - 1) == X - 1

    def test_gcd_with_zero(self):
        p = 3 * X**2 + 6
        assert poly_gcd(p, RatPoly.zero()) == p.monic()

    def test_planted_double_factor(self):
        p = (X - 2) ** 2 * (X - 3)
        q = (X - 2) * (X - 5)
        g = poly_gcd(p, q)
        assert g == X - 2
        assert (p % g).is_zero() and (q % g).is_zero()

    def test_both_zero_errors(self):
        with pytest.raises(ValueError, match="gcd undefined"):
            poly_gcd(RatPoly.zero(), RatPoly.zero())

    @given(nonzero_polys, nonzero_polys)
    @settings(max_examples=60, deadline=None)
    def test_divides_both(self, p, q):
        g = poly_gcd(p, q)
        assert (p % g).is_zero()
        assert (q % g).is_zero()
        assert g.lc() == 1

    @given(nonzero_polys, nonzero_polys, nonzero_polys)
    @settings(max_examples=40, deadline=None)
    def test_common_factor_detected(self, p, q, c):
        if c.degree < 1:
            c = c * X + 1
        g = poly_gcd(p * c, q * c)
        assert (g % c.monic()).is_zero()


class TestSquarefree:
    def test_perfect_square(self):
        assert squarefree_decompose(X**2 - 2 * X + 1) == [(X - 1, 2)]

    def test_linear(self):
        assert squarefree_decompose(X) == [(X, 1)]

    def test_mixed(self):
        p = (X - 2) ** 3 * (X**2 + 1)
        parts = squarefree_decompose(p)
        assert sorted(parts, key=lambda fm: fm[1]) == [(X**2 + 1, 1), (X - 2, 3)]
        assert reconstruct_from_squarefree(p.lc(), parts) == p

    def test_zero_errors(self):
        with pytest.raises(ValueError):
            squarefree_decompose(RatPoly.zero())

    @given(nonzero_polys, nonzero_polys, st.integers(min_value=1, max_value=3))
    @settings(max_examples=40, deadline=None)
    def test_reconstructs(self, p, q, m):
        f = p * q**m
        if f.degree < 1:
            f = f * (X + 1)
        parts = squarefree_decompose(f)
        assert reconstruct_from_squarefree(f.lc(), parts) == f
        # parts are squarefree and pairwise coprime
        for g, _ in parts:
            assert poly_gcd(g, g.derivative()).degree == 0
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                assert poly_gcd(parts[i][0], parts[j][0]).degree == 0


BX = BivarPoly.x()
BL = BivarPoly.lam()


class TestResultant:
    def test_linear_case(self):
        r = resultant(BX - BL, BX - 1, "x")
        assert r in (RatPoly((-1, 1)), RatPoly((1, -1)))  # +-(lam - 1)

    def test_equal_inputs_vanish(self):
        p = BX**2 - BL * BX + 3
        assert resultant(p, p, "x").is_zero()

    def test_substitute_and_check(self):
        # res_x(x^2 - lam, x - 3): x = 3 forces lam = 9
        r = resultant(BX**2 - BL, BX - 3, "x")
        assert r in (RatPoly((9, -1)), RatPoly((-9, 1)))

    def test_degree_zero_convention(self):
        a = BivarPoly((RatPoly((0, 1)),))  # lam, constant in x
        q = BX**3 - 2
        assert resultant(a, q, "x") == RatPoly((0, 1)) ** 3

    def test_eliminate_lam(self):
        # res_lam(lam - x, lam - 1) = +-(x - 1)
        r = resultant(BL - BX, BL - 1, "lam")
        assert r in (RatPoly((-1, 1)), RatPoly((1, -1)))

    @given(small_polys, small_polys, rationals)
    @settings(max_examples=30, deadline=None)
    def test_planted_common_root(self, pu, qu, root):
        # (x - root) divides both => resultant in x vanishes identically
        p = BivarPoly(pu.coeffs) if not pu.is_zero() else BivarPoly.one()
        q = BivarPoly(qu.coeffs) if not qu.is_zero() else BivarPoly.one()
        f = (BX - BivarPoly.const(root)) * (p + BL)
        g = (BX - BivarPoly.const(root)) * (q + BL**2 + 1)
        assert resultant(f, g, "x").is_zero()

    def test_zero_input_errors(self):
        with pytest.raises(ValueError):
            resultant(BivarPoly.zero(), BX, "x")


class TestRatFunc:
    def test_add(self):
        invx = RatFunc(1, RatPoly.x())
        s = ratfunc_arith(invx, invx, "add")
        assert s == RatFunc(2, RatPoly.x())

    def test_inverse_pair(self):
        a = RatFunc(X, X - 1)
        b = RatFunc(X - 1, X)
        assert ratfunc_arith(a, b, "mul") == RatFunc.const(1)

    def test_division(self):
        a = RatFunc(X**2 - 1, X + 2)
        b = RatFunc(X - 1, X + 2)
        q = ratfunc_arith(a, b, "div")
        assert q == RatFunc(X + 1)
        for v in (Fraction(3), Fraction(7, 2), Fraction(-5, 3)):
            assert a.eval(v) / b.eval(v) == q.eval(v)

    def test_div_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            ratfunc_arith(RatFunc.const(1), RatFunc.const(0), "div")

    @given(small_polys, nonzero_polys, small_polys, nonzero_polys)
    @settings(max_examples=40, deadline=None)
    def test_canonical_form(self, a, b, c, d):
        x, y = RatFunc(a, b), RatFunc(c, d)
        for op in ("add", "mul"):
            r = ratfunc_arith(x, y, op)
            assert r.den.lc() == 1
            if not r.num.is_zero():
                assert poly_gcd(r.num, r.den).degree == 0


class TestTextFormat:
    def test_spec_shape(self):
        p = RatPoly((Fraction(1, 2), 0, -3))
        s = p.to_string()
        assert s == "1/2 + -3*t^2"
        assert RatPoly.parse(s) == p

    def test_whitespace_insensitive(self):
        assert RatPoly.parse(" 1/2+  3 * t - t ^2 ".replace(" ", "")) == RatPoly(
            (Fraction(1, 2), 3, -1)
        )
        assert RatPoly.parse("1/2 + 3*t - t^2") == RatPoly((Fraction(1, 2), 3, -1))

    @given(small_polys)
    @settings(max_examples=60, deadline=None)
    def test_roundtrip(self, p):
        assert RatPoly.parse(p.to_string()) == p

    def test_ratfunc_roundtrip(self):
        f = RatFunc(X**2 - 1, X**3 + 2)
        assert RatFunc.parse(f.to_string()) == f


class TestFactorization:
    def test_irreducible_factors(self):
        p = (X**2 + 1) * (X - 2) ** 2 * 3
        fs = irreducible_factors(p)
        assert (X - 2, 2) in fs and (X**2 + 1, 1) in fs

    def test_is_irreducible(self):
        assert is_irreducible(X**2 - 2)
        assert not is_irreducible(X**2 - 1)


class TestBivarBasics:
    def test_grid_roundtrip(self):
        p = BX**2 * BL - 3 * BX + BivarPoly.const(Fraction(1, 2))
        assert BivarPoly.from_grid(p.grid()) == p

    def test_subs_x(self):
        f = BX**3 - (1 + BL) * BX**2 + BL * BX
        two = RatFunc.const(2)
        # f(2) = 8 - 4(1+lam) + 2 lam = 4 - 2 lam
        assert f.subs_x(two) == RatFunc(RatPoly((4, -2)))

    def test_exact_div(self):
        a = (BX - BL) * (BX**2 + 3)
        assert a.exact_div(BX - BL) == BX**2 + 3
        with pytest.raises(ValueError):
            (BX**2 + 1).exact_div(BX - BL)
