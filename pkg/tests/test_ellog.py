import random

import pytest
from mpmath import mp, mpc, mpf, sqrt as msqrt

from tangint.exactalg import RatFunc
from tangint.legendre import INFINITY, CurvePoint, Section, add, curve_rhs, mul
from tangint.periods import Disc, PeriodBasis, patch_for, period_basis
from tangint.ellog import (
    EllipticLog,
    SectionContext,
    conjugate_coords,
    dz_dlambda,
    elliptic_log,
    gauss_reduce,
    invariants_from_lambda,
    invariants_from_lattice,
    lattice_distance,
    lattice_reduce,
    weierstrass_p,
)

PREC = 128
mp.prec = PREC + 32
rng = random.Random(55511)

DISC = Disc(0.5, 0.2)


def random_lambda():
    return mpc(0.5 + rng.uniform(-0.13, 0.13), rng.uniform(-0.13, 0.13))


def random_point(lam):
    x = mpc(1.5 + 2 * rng.random(), rng.uniform(-1, 1))
    y = msqrt(curve_rhs(x, lam))
    return CurvePoint(x, y if rng.random() < 0.5 else -y)


class SyntheticSection:
    """Section defined by exponentiating z(lam) = a(lam) f + b(lam) g."""

    def __init__(self, coeff_fn, patch, prec=PREC):
        self.coeff_fn = coeff_fn
        self.patch = patch
        self.prec = prec

    def value_at(self, lam, prec=None, ref=None):
        prec = prec or self.prec
        basis = self.patch.basis_at(lam)
        a, b = self.coeff_fn(lam)
        z = a * basis.f + b * basis.g
        pv, dv = weierstrass_p(z, basis, prec)
        return CurvePoint(pv + (mpc(lam) + 1) / 3, dv / 2)


@pytest.fixture(scope="module")
def patch():
    return patch_for(DISC, PREC)


class TestWeierstrassP:
    def test_invariants_cross_check(self):
        b = period_basis(mpc(0.47, 0.06), (), PREC)
        g2l, g3l = invariants_from_lattice(b.f, b.g, PREC)
        g2a, g3a = invariants_from_lambda(b.at)
        assert abs(g2l - g2a) < mpf(2) ** (-PREC + 16)
        assert abs(g3l - g3a) < mpf(2) ** (-PREC + 16)

    def test_p_at_half_periods_hits_roots(self):
        b = period_basis(mpf("0.43"), (), PREC)
        lam = b.at
        shift = (lam + 1) / 3
        roots = sorted([-shift, 1 - shift, lam - shift], key=lambda r: abs(r))
        for w in (b.f / 2, b.g / 2, (b.f + b.g) / 2):
            pv, dv = weierstrass_p(w, b, PREC)
            assert min(abs(pv - r) for r in roots) < mpf(2) ** (-PREC // 2)
            assert abs(dv) < mpf(2) ** (-PREC // 2)

    def test_pole_rejected(self):
        b = period_basis(mpf("0.5"), (), PREC)
        with pytest.raises(ValueError, match="lattice point"):
            weierstrass_p(b.f + b.g, b, PREC)


class TestEllipticLog:
    def test_two_torsion_half_periods(self):
        lam = mpc(0.52, -0.04)
        b = period_basis(lam, (), PREC)
        halves = (b.f / 2, b.g / 2, (b.f + b.g) / 2)
        for x0 in (mpc(0), mpc(1), lam):
            L = elliptic_log(CurvePoint(x0, mpc(0)), b, PREC)
            assert min(lattice_distance(L.z - h, b.f, b.g) for h in halves) < mpf(2) ** (
                -PREC // 2
            )

    def test_weierstrass_identity(self):
        for _ in range(5):
            lam = random_lambda()
            b = period_basis(lam, (), PREC)
            p = random_point(lam)
            L = elliptic_log(p, b, PREC)
            assert L.residual < mpf(2) ** (-(PREC // 2))

    def test_additivity(self):
        lam = random_lambda()
        b = period_basis(lam, (), PREC)
        for _ in range(4):
            p, q = random_point(lam), random_point(lam)
            zs = elliptic_log(add(p, q, lam, PREC), b, PREC).z
            zp = elliptic_log(p, b, PREC).z
            zq = elliptic_log(q, b, PREC).z
            assert lattice_distance(zs - zp - zq, b.f, b.g) < mpf(2) ** (-PREC // 2)

    def test_reduction_idempotent(self):
        lam = random_lambda()
        b = period_basis(lam, (), PREC)
        L = elliptic_log(random_point(lam), b, PREC)
        z2, (m1, m2) = lattice_reduce(L.z, b.f, b.g, PREC)
        assert (m1, m2) == (0, 0)
        assert z2 == L.z

    def test_infinity_rejected(self):
        b = period_basis(mpf("0.5"), (), PREC)
        with pytest.raises(ValueError, match="infinity"):
            elliptic_log(INFINITY, b, PREC)

    def test_corrupt_basis_fails_loudly(self):
        b = period_basis(mpf("0.5"), (), PREC)
        bad = PeriodBasis(b.f * mpf("1.01"), b.g, b.df, b.dg, b.at, b.path)
        p = random_point(b.at)
        with pytest.raises(ValueError):
            elliptic_log(p, bad, PREC)


class TestDzDlambda:
    def test_constant_betti_synthetic(self, patch):
        # z(lam) = 0.3 f + 0.2 g identically: dz = 0.3 df + 0.2 dg
        sec = SyntheticSection(lambda lam: (mpf("0.3"), mpf("0.2")), patch)
        lam = mpc(0.53, 0.05)
        d = dz_dlambda(sec, lam, patch, PREC)
        b = patch.basis_at(lam)
        expect = mpf("0.3") * b.df + mpf("0.2") * b.dg
        assert abs(d.dz - expect) < mpf(2) ** (-(PREC // 2))

    def test_two_torsion_section_derivative(self, patch):
        # the section (lam, 0): its pinned log is a constant half-lattice
        # combination z = u f + v g, so dz = u df + v dg with the same (u, v)
        sec = Section(RatFunc.t(), 1, 0.5)
        lam = mpc(0.48, -0.06)
        ctx = SectionContext(sec, patch, PREC)
        b = patch.basis_at(lam)
        z, _, _ = ctx.log_at(lam)
        u, v = conjugate_coords(z, b.f, b.g)
        assert abs(2 * u - mp.nint(2 * u.real)) < mpf(2) ** (-PREC // 2)
        assert abs(2 * v - mp.nint(2 * v.real)) < mpf(2) ** (-PREC // 2)
        d = dz_dlambda(sec, lam, patch, PREC, ctx)
        expect = u.real * b.df + v.real * b.dg
        assert abs(d.dz - expect) < mpf(2) ** (-(PREC // 2))

    def test_richardson_convergence_order(self, patch):
        sec = Section(RatFunc.const(2), 1, 0.5)
        lam = mpc(0.51, 0.03)
        ctx = SectionContext(sec, patch, PREC)
        d = dz_dlambda(sec, lam, patch, PREC, ctx)
        # successive Richardson corrections must shrink by roughly 2^order
        levels = d.diagnostics["d_levels"]
        e0 = abs(levels[0] - d.dz)
        e1 = abs(levels[1] - d.dz)
        e2 = abs(levels[2] - d.dz)
        assert e1 < e0 / 3 and e2 < e1 / 3
        assert d.diagnostics["final_gap"] <= d.diagnostics["r1_gap"]

    def test_integer_linearity_of_multiples(self, patch):
        # dz of nP minus n dz of P is a Z-combination of (df, dg) with the
        # same integers as the log relation
        n = 3
        sec = Section(RatFunc.const(2), 1, 0.5)
        secn = Section(
            __import__("tangint.legendre", fromlist=["x_of_multiple"]).x_of_multiple(
                n, RatFunc.const(2)
            ),
            1,
            0.5,
        )
        lam = mpc(0.5, 0.08)
        ctx1 = SectionContext(sec, patch, PREC)
        ctxn = SectionContext(secn, patch, PREC)
        b = patch.basis_at(lam)
        z1, _, _ = ctx1.log_at(lam)
        zn, _, p_n = ctxn.log_at(lam)
        # branch of sec-n at lam may be either sign of y(nP); align via the
        # group law point
        pn_direct = mul(n, ctx1.point_at(lam), lam, PREC)
        if abs(p_n.y - pn_direct.y) > abs(p_n.y + pn_direct.y):
            zn = -zn
            ctxn_sign = -1
        else:
            ctxn_sign = 1
        u, v = conjugate_coords(zn - n * z1, b.f, b.g)
        m1, m2 = int(mp.nint(u.real)), int(mp.nint(v.real))
        assert abs(u - m1) < mpf(2) ** (-PREC // 2)
        assert abs(v - m2) < mpf(2) ** (-PREC // 2)
        d1 = dz_dlambda(sec, lam, patch, PREC, ctx1).dz
        dn = ctxn_sign * dz_dlambda(secn, lam, patch, PREC, ctxn).dz
        expect = n * d1 + m1 * b.df + m2 * b.dg
        assert abs(dn - expect) < mpf(2) ** (-(PREC // 2))


class TestGaussReduce:
    def test_shortest_first(self):
        a, b = gauss_reduce(mpc(10, 0), mpc(9.5, 0.1))
        assert abs(a) <= abs(b)
        assert abs(a) < 2
