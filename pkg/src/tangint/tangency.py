"""Relation lattices, the tangential-point detector, and the D(a) scanner.

A relation vector a = (a_1, ..., a_n, a_{n+1}, a_{n+2}) encodes
sum a_i z_i = a_{n+1} f + a_{n+2} g.  Writing z_j = u_j f + v_j g, the
locally defined holomorphic relation function and its derivative are

    h  = (S_u - a_{n+1}) f + (S_v - a_{n+2}) g,      S_u = sum a_i u_i, ...
    h' = (sum a_i du_i) f + (sum a_i dv_i) g + (S_u - a_{n+1}) df + (S_v - a_{n+2}) dg,

and a tangential point is a common zero of (h, h'), found by grid-screened
seeding plus damped Gauss-Newton on the overdetermined real system
(Re h, Im h, Re h', Im h') in (Re lam, Im lam).  Every accepted hit is
re-polished at doubled precision.

Relation search is lattice-reduction (exact-arithmetic LLL) over the rows
(u_1..u_n, 1, 0), (v_1..v_n, 0, 1), with exhaustive verification of the
reported short vectors; exhaustive enumeration replaces LLL outright when the
window is small enough to sweep.  Lattice saturation is exact integer linear
algebra (Hermite normal forms and integer kernels).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from mpmath import mp, mpc, mpf

from .betti import ThetaPoint, betti_coords, betti_derivatives, theta_map
from .ellog import SectionContext, dz_dlambda
from .periods import Disc, TaylorPatch, patch_for
from .precision import int_round_tol, tol_residual, working

__all__ = [
    "RelationVector",
    "RelationLattice",
    "TangencyHit",
    "ScanOptions",
    "ScanSystem",
    "ScanResult",
    "lll_reduce",
    "relation_candidates",
    "tangency_residual",
    "find_tangential_points",
    "scan_D_a",
    "hnf_rows",
    "int_left_kernel",
    "lattice_membership",
    "saturation_in_ambient",
    "saturation_check",
    "small_generator_audit",
]


# ---------------------------------------------------------------------------
# relation vectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class RelationVector:
    """Integer relation a with the paper's norm max(|a_1|, ..., |a_n|)."""

    a: tuple
    an1: Optional[int] = None
    an2: Optional[int] = None

    def __post_init__(self):
        if not self.a or all(c == 0 for c in self.a):
            raise ValueError("relation vector needs a nonzero section part")

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def norm(self) -> int:
        return max(abs(c) for c in self.a)

    def canonical(self) -> "RelationVector":
        """Sign-normalize: first nonzero of (a_1..a_n) positive."""
        for c in self.a:
            if c != 0:
                if c < 0:
                    return RelationVector(
                        tuple(-x for x in self.a),
                        None if self.an1 is None else -self.an1,
                        None if self.an2 is None else -self.an2,
                    )
                return self
        raise ValueError("zero vector")


@dataclass(frozen=True)
class RelationLattice:
    """Lattice of relation vectors projected to Z^n."""

    generators: tuple
    kind: str = "full"  # or "singular"

    @property
    def rank(self) -> int:
        return len(hnf_rows([list(g) for g in self.generators]))


# ---------------------------------------------------------------------------
# exact LLL
# ---------------------------------------------------------------------------


def lll_reduce(basis: Sequence[Sequence], delta=Fraction(3, 4)):
    """Textbook LLL over exact rationals; returns the reduced basis rows."""
    b = [[Fraction(x) for x in row] for row in basis]
    n = len(b)
    if n == 0:
        return []

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gram():
        mu = [[Fraction(0)] * n for _ in range(n)]
        bstar = []
        norms = []
        for i in range(n):
            w = list(b[i])
            for j in range(i):
                if norms[j] == 0:
                    mu[i][j] = Fraction(0)
                    continue
                mu[i][j] = Fraction(dot(b[i], bstar[j]), 1) / norms[j]
                w = [wi - mu[i][j] * bj for wi, bj in zip(w, bstar[j])]
            bstar.append(w)
            norms.append(dot(w, w))
        return mu, norms

    mu, norms = gram()
    k = 1
    guard = 0
    while k < n:
        guard += 1
        if guard > 20000:
            raise ValueError("LLL failed to terminate")
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q != 0:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                mu, norms = gram()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, norms = gram()
            k = max(k - 1, 1)
    return b


# ---------------------------------------------------------------------------
# relation candidate search
# ---------------------------------------------------------------------------


def _dist_to_int(x) -> mpf:
    return abs(x - mp.nint(x))


def _canonical_a_vectors(n: int, T: int):
    """All canonical sign representatives a in Z^n with 1 <= max|a_i| <= T."""
    for raw in itertools.product(range(-T, T + 1), repeat=n):
        if all(c == 0 for c in raw):
            continue
        for c in raw:
            if c != 0:
                lead = c
                break
        if lead < 0:
            continue
        yield raw


def _verified(theta: ThetaPoint, raw: tuple, tol) -> Optional[RelationVector]:
    n = theta.n
    su = mpf(0)
    sv = mpf(0)
    for i in range(n):
        su += raw[i] * theta.coords[2 * i]
        sv += raw[i] * theta.coords[2 * i + 1]
    if _dist_to_int(su) <= tol and _dist_to_int(sv) <= tol:
        return RelationVector(raw, int(mp.nint(su)), int(mp.nint(sv)))
    return None


def relation_candidates(theta: ThetaPoint, T: int, prec: int = 128,
                        method: str = "auto") -> list:
    """All a with |a| <= T whose (u, v)-combinations round to integers.

    Small windows are swept exhaustively; otherwise candidates come from LLL
    short vectors (plus their pairwise sums and differences) and each one is
    verified against the rounding tolerance before being reported.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    n = theta.n
    tol = int_round_tol(prec)
    out = {}
    with working(prec):
        if method == "enumerate" or (method == "auto" and (2 * T + 1) ** n <= 300_000):
            for raw in _canonical_a_vectors(n, T):
                rv = _verified(theta, raw, tol)
                if rv is not None:
                    out[rv.a] = rv
        else:
            scale = 1 << (prec // 2)
            rows = []
            for i in range(n):
                e = [0] * n
                e[i] = 1
                u = theta.coords[2 * i]
                v = theta.coords[2 * i + 1]
                rows.append(e + [int(mp.nint(u * scale)), int(mp.nint(v * scale))])
            rows.append([0] * n + [scale, 0])
            rows.append([0] * n + [0, scale])
            red = lll_reduce(rows)
            cands = [tuple(int(x) for x in r[:n]) for r in red]
            for r1, r2 in itertools.combinations(red, 2):
                cands.append(tuple(int(x + y) for x, y in zip(r1[:n], r2[:n])))
                cands.append(tuple(int(x - y) for x, y in zip(r1[:n], r2[:n])))
            for raw in cands:
                if all(c == 0 for c in raw) or max(abs(c) for c in raw) > T:
                    continue
                rv_raw = RelationVector(raw).canonical()
                rv = _verified(theta, rv_raw.a, tol)
                if rv is not None:
                    out[rv.a] = rv
    return sorted(out.values(), key=lambda r: (r.norm, r.a))


# ---------------------------------------------------------------------------
# the production scan system
# ---------------------------------------------------------------------------


@dataclass
class ScanOptions:
    grid_n: int = 32
    screen_tol: float = 0.05
    screen_levels: int = 2
    newton_levels: int = 2
    max_newton: int = 40
    merge_radius: float = 1e-9
    max_seeds_per_a: int = 6
    reverify: bool = True


class ScanSystem:
    """Sections + disc + precision, with cached grids for screening.

    Presents theta data and the relation pair (h, h') to the detector; all
    branch bookkeeping is delegated to the per-section contexts.
    """

    def __init__(self, sections: Sequence, disc: Disc, prec: int = 128,
                 reference=None, route: Sequence = ()):
        from .periods import DEFAULT_REFERENCE

        self.sections = list(sections)
        self.disc = disc
        self.prec = prec
        self.reference = DEFAULT_REFERENCE if reference is None else reference
        self.route = tuple(route)
        self.patch = patch_for(disc, prec, self.reference, self.route)
        self.contexts = [SectionContext(s, self.patch, prec) for s in self.sections]
        self._uv_grid = None
        self._doubled = None

    @property
    def n(self) -> int:
        return len(self.sections)

    def scales(self, lam=None):
        b = self.patch.base if lam is None else self.patch.basis_at(lam)
        return max(abs(b.f), abs(b.g)), max(abs(b.df), abs(b.dg))

    def theta(self, lam, levels: int = 3) -> ThetaPoint:
        return theta_map(self.contexts, lam, self.prec, levels=levels)

    def uv_at(self, lam):
        """(u_j, v_j) per section, logs only (no derivatives)."""
        out = []
        with working(self.prec):
            for ctx in self.contexts:
                z, b, _ = ctx.log_at(lam)
                out.append(betti_coords(z, b, self.prec))
        return out

    def uv_grid(self, grid_n: int):
        """Cached [(lam, [(u, v), ...])] over the deterministic disc grid."""
        if self._uv_grid is None or self._uv_grid[0] != grid_n:
            pts = self.disc.grid(grid_n)
            rows = [(lam, self.uv_at(lam)) for lam in pts]
            self._uv_grid = (grid_n, rows)
        return self._uv_grid[1]

    def h_dh(self, a: RelationVector, lam, an_ints=None, levels: int = 3):
        """(h, dh, an1, an2) at lam; integers fixed by caller or rounded here."""
        th = self.theta(lam, levels=levels)
        return _assemble_h(th, self.patch.basis_at(lam), a, an_ints)

    def doubled(self) -> "ScanSystem":
        if self._doubled is None:
            self._doubled = ScanSystem(self.sections, self.disc, 2 * self.prec,
                                       self.reference, self.route)
        return self._doubled


def _assemble_h(th: ThetaPoint, basis, a: RelationVector, an_ints=None):
    n = th.n
    su = mpf(0)
    sv = mpf(0)
    dsu = mpf(0)
    dsv = mpf(0)
    for i in range(n):
        su += a.a[i] * th.coords[2 * i]
        sv += a.a[i] * th.coords[2 * i + 1]
        dsu += a.a[i] * th.coords[2 * n + 2 * i]
        dsv += a.a[i] * th.coords[2 * n + 2 * i + 1]
    if an_ints is None:
        an1, an2 = int(mp.nint(su)), int(mp.nint(sv))
    else:
        an1, an2 = an_ints
    ru = su - an1
    rv = sv - an2
    h = ru * basis.f + rv * basis.g
    dh = dsu * basis.f + dsv * basis.g + ru * basis.df + rv * basis.dg
    return h, dh, an1, an2


def tangency_residual(a: RelationVector, lam, system: ScanSystem,
                      an_ints=None, levels: int = 3):
    """The relation function and its derivative, (h, dh), at lam."""
    h, dh, _, _ = system.h_dh(a, lam, an_ints=an_ints, levels=levels)
    return h, dh


# ---------------------------------------------------------------------------
# the detector
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TangencyHit:
    """An accepted common zero of (h, h')."""

    lam: mpc
    a: RelationVector
    res_h: mpf
    res_dh: mpf
    multiplicity_certified: bool
    provenance: str = "analytic"

    def sort_key(self):
        return (self.a.norm, self.a.a, float(self.lam.real), float(self.lam.imag))


def _gauss_newton(system: ScanSystem, a: RelationVector, an_ints, seed,
                  opts: ScanOptions, prec: int):
    """Damped Gauss-Newton on (Re h, Im h, Re h', Im h') in (Re lam, Im lam).

    Returns (lam, h, dh, converged, decreasing) -- `decreasing` reports
    whether the residual was still improving when iteration stopped.
    """
    with working(prec):
        lam = mpc(seed)
        radius = mpf(system.disc.radius)
        dprobe = mpf(2) ** (-(prec // 8)) * radius
        h, dh, _, _ = system.h_dh(a, lam, an_ints, levels=opts.newton_levels)
        rnorm = abs(h) ** 2 + abs(dh) ** 2
        scale_h, scale_dh = system.scales()
        accept_h = tol_residual(prec) * scale_h
        accept_dh = tol_residual(prec) * scale_dh
        step_floor = mpf(2) ** (-(prec * 3 // 5)) * radius
        stalls = 0
        decreasing = True
        for _ in range(opts.max_newton):
            if abs(h) <= accept_h and abs(dh) <= accept_dh:
                return lam, h, dh, True, True
            try:
                h2, dh2, _, _ = system.h_dh(a, lam + dprobe, an_ints,
                                            levels=opts.newton_levels)
            except ValueError:
                return lam, h, dh, False, False
            hpp = (dh2 - dh) / dprobe
            denom = abs(dh) ** 2 + abs(hpp) ** 2
            if denom == 0:
                return lam, h, dh, False, False
            step = -(dh.conjugate() * h + hpp.conjugate() * dh) / denom
            if abs(step) > radius / 4:
                step *= (radius / 4) / abs(step)
            improved = False
            for _ in range(8):
                cand = lam + step
                if not system.disc.contains(cand, slack=0.2 * float(radius)):
                    step /= 2
                    continue
                try:
                    hc, dhc, _, _ = system.h_dh(a, cand, an_ints,
                                                levels=opts.newton_levels)
                except ValueError:
                    step /= 2
                    continue
                rc = abs(hc) ** 2 + abs(dhc) ** 2
                if rc < rnorm:
                    lam, h, dh, rnorm = cand, hc, dhc, rc
                    improved = True
                    break
                step /= 2
            if not improved:
                stalls += 1
                decreasing = False
                if stalls >= 2:
                    return lam, h, dh, False, False
            elif abs(step) < step_floor:
                converged = abs(h) <= accept_h and abs(dh) <= accept_dh
                return lam, h, dh, converged, True
        return lam, h, dh, False, decreasing


def _seeds_for(system: ScanSystem, a: RelationVector, opts: ScanOptions):
    """Screen the cached (u, v) grid for near-relations; always include the
    best grid point so every vector gets at least one Newton start."""
    rows = system.uv_grid(opts.grid_n)
    tol = mpf(opts.screen_tol)
    seeds = []
    best = None
    best_metric = None
    for lam, uv in rows:
        su = mpf(0)
        sv = mpf(0)
        for coeff, (u, v) in zip(a.a, uv):
            su += coeff * u
            sv += coeff * v
        du_ = _dist_to_int(su)
        dv_ = _dist_to_int(sv)
        metric = du_**2 + dv_**2
        if best_metric is None or metric < best_metric:
            best_metric, best = metric, lam
        if du_ <= tol and dv_ <= tol:
            seeds.append((float(metric), lam))
    seeds.sort(key=lambda t: t[0])
    out = [lam for _, lam in seeds[: opts.max_seeds_per_a]]
    if best is not None and all(best != s for s in out):
        out.append(best)
    return out


def find_tangential_points(a: RelationVector, system: ScanSystem,
                           opts: Optional[ScanOptions] = None):
    """Isolated common zeros of (h, h') for one relation vector on the disc.

    Grid-screened seeds, damped Gauss-Newton, merge-radius deduplication,
    and re-verification at doubled precision.  Returns (hits, warnings).
    """
    opts = opts or ScanOptions()
    prec = system.prec
    hits = []
    warnings = []
    boundary_suspect = False
    for seed in _seeds_for(system, a, opts):
        # fix the integer pair at the seed so h is one holomorphic function
        try:
            _, _, an1, an2 = system.h_dh(a, seed, levels=opts.screen_levels)
        except ValueError:
            continue
        lam, h, dh, ok, decreasing = _gauss_newton(system, a, (an1, an2), seed,
                                                   opts, prec)
        if not ok:
            if decreasing and not system.disc.contains(lam, slack=0.0):
                boundary_suspect = True
            continue
        if not system.disc.contains(lam, slack=0.0):
            boundary_suspect = True
            continue
        if any(abs(lam - hlam) <= opts.merge_radius for hlam, _ in hits):
            continue
        hits.append((lam, (an1, an2)))
    if boundary_suspect:
        warnings.append(f"a={a.a}: possible boundary hit")

    out = []
    for lam, an_ints in hits:
        res = _certify_hit(system, a, an_ints, lam, opts)
        if res is not None:
            out.append(res)
    out.sort(key=lambda h: h.sort_key())
    return out, warnings


def _certify_hit(system: ScanSystem, a: RelationVector, an_ints, lam,
                 opts: ScanOptions) -> Optional[TangencyHit]:
    """Re-verify at doubled precision; keep the polished location."""
    prec = system.prec
    if not opts.reverify:
        h, dh, an1, an2 = system.h_dh(a, lam, an_ints, levels=3)
        return TangencyHit(lam, RelationVector(a.a, an1, an2), abs(h), abs(dh), False)
    sys2 = system.doubled()
    lam2, h2, dh2, ok, _ = _gauss_newton(sys2, a, an_ints, lam, opts, sys2.prec)
    if not ok or not system.disc.contains(lam2, slack=0.0):
        return None
    if abs(lam2 - mpc(lam)) > mpf(2) ** (-(prec // 4)):
        return None  # doubled-precision zero is not the same point
    an1, an2 = an_ints
    return TangencyHit(lam2, RelationVector(a.a, an1, an2), abs(h2), abs(dh2), True)


# ---------------------------------------------------------------------------
# the scanner
# ---------------------------------------------------------------------------


@dataclass
class ScanResult:
    T: int
    hits: list
    count_table: dict
    warnings: list

    def csv_rows(self, digits: int = 30):
        n = self.hits[0].a.n if self.hits else 0
        for h in sorted(self.hits, key=lambda x: x.sort_key()):
            vals = [str(c) for c in h.a.a]
            vals += [str(h.a.an1), str(h.a.an2)]
            vals += [
                mp.nstr(h.lam.real, digits, strip_zeros=False),
                mp.nstr(h.lam.imag, digits, strip_zeros=False),
                mp.nstr(h.res_h, 8),
                mp.nstr(h.res_dh, 8),
                h.provenance,
            ]
            yield ",".join(vals)

    @staticmethod
    def csv_header(n: int) -> str:
        cols = [f"a{i}" for i in range(1, n + 1)] + ["an1", "an2"]
        cols += ["lambda_re", "lambda_im", "res_h", "res_dh", "provenance"]
        return ",".join(cols)


def _check_degenerate(system: ScanSystem, T: int, opts: ScanOptions):
    """Refuse identically related section tuples (hypothesis of the detector)."""
    center = system.patch.center
    th = system.theta(center, levels=opts.screen_levels)
    cands = relation_candidates(th, T, system.prec)
    if not cands:
        return
    probes = [
        center + mpf(system.disc.radius) * mpc("0.61", "0.23"),
        center - mpf(system.disc.radius) * mpc("0.37", "0.52"),
    ]
    tol = int_round_tol(system.prec)
    for rv in cands:
        everywhere = True
        for p in probes:
            th_p_uv = system.uv_at(p)
            su = mpf(0)
            sv = mpf(0)
            for c, (u, v) in zip(rv.a, th_p_uv):
                su += c * u
                sv += c * v
            if _dist_to_int(su) > tol or _dist_to_int(sv) > tol:
                everywhere = False
                break
        if everywhere:
            raise ValueError(
                f"section pair identically related: a={rv.a} holds across the disc"
            )


def _scan_one(args):
    system, raw, opts = args
    a = RelationVector(raw)
    hits, warnings = find_tangential_points(a, system, opts)
    return raw, hits, warnings


def scan_D_a(system: ScanSystem, T: int, opts: Optional[ScanOptions] = None,
             threads: int = 1) -> ScanResult:
    """Cumulative tangential-point counts over all |a| <= T on the disc.

    Deterministic: the hit list and count table are independent of the worker
    count; results merge in canonical (norm, lexicographic) order.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    opts = opts or ScanOptions()
    _check_degenerate(system, T, opts)
    system.uv_grid(opts.grid_n)  # build the shared cache before any fork
    vectors = sorted(_canonical_a_vectors(system.n, T))
    tasks = [(system, raw, opts) for raw in vectors]
    if threads > 1:
        import multiprocessing as mp_proc

        with mp_proc.Pool(threads) as pool:
            results = pool.map(_scan_one, tasks, chunksize=4)
    else:
        results = [_scan_one(t) for t in tasks]
    all_hits = []
    warnings = []
    per_norm: dict = {}
    for raw, hits, warns in results:
        norm = max(abs(c) for c in raw)
        per_norm[norm] = per_norm.get(norm, 0) + len(hits)
        all_hits.extend(hits)
        warnings.extend(warns)
    count_table = {}
    run = 0
    for t in range(1, T + 1):
        run += per_norm.get(t, 0)
        count_table[t] = run
    all_hits.sort(key=lambda h: h.sort_key())
    return ScanResult(T, all_hits, count_table, sorted(warnings))


def attach_oracle_provenance(hits: Sequence[TangencyHit], oracle_roots,
                             radius: float = 1e-10):
    """Mark hits matching exact-oracle roots; provenance becomes 'both'."""
    out = []
    for h in hits:
        matched = any(abs(h.lam - mpc(r)) <= radius for r in oracle_roots)
        out.append(replace(h, provenance="both" if matched else h.provenance))
    return out


# ---------------------------------------------------------------------------
# exact integer lattice algebra
# ---------------------------------------------------------------------------


def hnf_rows(rows: Sequence[Sequence[int]]) -> list:
    """Row-style Hermite normal form; zero rows dropped, pivots positive,
    entries above each pivot reduced into [0, pivot)."""
    h, _ = hnf_with_transform(rows)
    return h


def hnf_with_transform(rows: Sequence[Sequence[int]]):
    """(H, U) with U unimodular, U * M = [H; 0], H the HNF of the row lattice."""
    m = [list(map(int, r)) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    row = 0
    for col in range(nc):
        # Euclidean elimination below position `row` in this column
        while True:
            nz = [i for i in range(row, nr) if m[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(m[i][col]))
            if piv != row:
                m[row], m[piv] = m[piv], m[row]
                u[row], u[piv] = u[piv], u[row]
            done = True
            for i in range(row + 1, nr):
                if m[i][col] != 0:
                    q = m[i][col] // m[row][col]
                    m[i] = [x - q * y for x, y in zip(m[i], m[row])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[row])]
                    if m[i][col] != 0:
                        done = False
            if done:
                break
        if row < nr and m[row][col] != 0:
            if m[row][col] < 0:
                m[row] = [-x for x in m[row]]
                u[row] = [-x for x in u[row]]
            p = m[row][col]
            for i in range(row):
                q = m[i][col] // p
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[row])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[row])]
            row += 1
            if row == nr:
                break
    h = [r for r in m[:row] if any(r)]
    return h, u


def int_left_kernel(rows: Sequence[Sequence[int]]) -> list:
    """Basis of {x in Z^m : x * M = 0} for the m x n matrix M."""
    m = [list(map(int, r)) for r in rows]
    if not m:
        return []
    h, u = hnf_with_transform(m)
    rank = len(h)
    return [u[i] for i in range(rank, len(m))]


def lattice_membership(vec: Sequence[int], basis_rows: Sequence[Sequence[int]]):
    """Integer coefficients expressing vec over the basis rows, or None."""
    if not basis_rows:
        return [] if not any(vec) else None
    h, u = hnf_with_transform(basis_rows)
    v = list(map(int, vec))
    nc = len(v)
    coeffs_h = [0] * len(h)
    for r, hrow in enumerate(h):
        col = next(i for i, x in enumerate(hrow) if x != 0)
        if v[col] % hrow[col] != 0:
            return None
        c = v[col] // hrow[col]
        coeffs_h[r] = c
        v = [x - c * y for x, y in zip(v, hrow)]
    if any(v):
        return None
    out = [0] * len(basis_rows)
    for r, c in enumerate(coeffs_h):
        for j in range(len(basis_rows)):
            out[j] += c * u[r][j]
    return out


def saturation_in_ambient(rows: Sequence[Sequence[int]]) -> list:
    """Basis of (Q-span of the rows) intersected with Z^k."""
    rows = [list(map(int, r)) for r in rows if any(r)]
    if not rows:
        return []
    k = len(rows[0])
    # right kernel of M = left kernel of M^T
    mt = [[rows[i][j] for i in range(len(rows))] for j in range(k)]
    kern = int_left_kernel(mt)  # rows y with y * M^T = 0, i.e. M y^T = 0
    if not kern:
        return [[int(i == j) for j in range(k)] for i in range(k)]
    # saturation = {x : x . y = 0 for all kernel rows y} = left kernel of kern^T
    kt = [[kern[i][j] for i in range(len(kern))] for j in range(k)]
    return int_left_kernel(kt)


def saturation_check(L: RelationLattice, Lsing: RelationLattice) -> bool:
    """True iff the saturation of Lsing inside L equals Lsing (exact)."""
    bl = [list(g) for g in L.generators]
    bs = [list(g) for g in Lsing.generators]
    bl_h = hnf_rows(bl)
    coords = []
    for s in bs:
        c = lattice_membership(s, bl_h)
        if c is None:
            raise ValueError("not a sublattice")
        coords.append(c)
    coords = [c for c in coords if any(c)]
    if not coords:
        return True
    sat = saturation_in_ambient(coords)
    return hnf_rows(sat) == hnf_rows(coords)


# ---------------------------------------------------------------------------
# small-generator audit
# ---------------------------------------------------------------------------


def small_generator_audit(hit: TangencyHit, d: int, h_lambda, q,
                          rank_full: int = 1, rank_sing: int = 1,
                          delta1: float = 1.0, delta2: float = 10.0) -> dict:
    """Compare the hit's generator norm against the existential bound shape
    delta1 * d^delta2 * (h(lam) + 1)^(2n) * q^((n-1)/2)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if rank_full != rank_sing:
        return {
            "applicable": False,
            "reason": "corollary inapplicable: rk(L_sing) != rk(L)",
        }
    n = hit.a.n
    bound = mpf(delta1) * mpf(d) ** delta2 * (mpf(h_lambda) + 1) ** (2 * n) * mpf(q) ** (
        mpf(n - 1) / 2
    )
    norm = hit.a.norm
    return {
        "applicable": True,
        "n": n,
        "norm": norm,
        "bound": float(bound),
        "satisfied": mpf(norm) <= bound,
        "delta1": delta1,
        "delta2": delta2,
        "d": d,
        "h_lambda": float(h_lambda),
        "q": float(q),
    }
