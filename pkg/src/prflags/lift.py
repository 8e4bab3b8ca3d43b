"""Deformation over truncated power series: polynomial flags and lifts.

Everything generic is computed with exact polynomial arithmetic over
F_p[X]: the special fiber is evaluation at X = 0, generic dimensions
are ranks over the rational-function field obtained by fraction-free
elimination.  Submodules of R^n (R the series ring) are represented by
saturated polynomial bases, normalized to a Hermite form so equal
modules have identical bases.

The lift of a subspace along a flag follows the inductive basis
construction: a basis vector of the special subspace either lifts
constantly or picks up an X-multiple of a completion vector from a
deeper flag member, which pushes it out of the shallow members in the
generic fiber.  The isotropic variant constrains every choice by the
pairing; the stratum degeneration chains three such lifts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .gf import Matrix, Subspace
from .e3 import StrataPoint, in_Ypol, normal_form
from .strat import leq
from .tmodule import jordan_type


# --- polynomial arithmetic over F_p[X] (coefficient tuples) ---------------


def pnorm(t):
    t = tuple(t)
    while t and not t[-1]:
        t = t[:-1]
    return t


def padd(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return pnorm(out)


def pneg(a, p):
    return tuple((-c) % p for c in a)


def psub(a, b, p):
    return padd(a, pneg(b, p), p)


def pscale(a, c, p):
    c %= p
    if c == 0:
        return ()
    if c == 1:
        return pnorm(a)
    return pnorm(tuple((x * c) % p for x in a))


def pmul(a, b, p):
    a, b = pnorm(a), pnorm(b)
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return pnorm(out)


def pdivmod(a, b, p):
    a, b = list(pnorm(a)), pnorm(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [0] * max(0, len(a) - len(b) + 1)
    inv = pow(b[-1], p - 2, p)
    for i in range(len(a) - len(b), -1, -1):
        c = (a[i + len(b) - 1] * inv) % p
        if c:
            q[i] = c
            for j, y in enumerate(b):
                a[i + j] = (a[i + j] - c * y) % p
    return pnorm(q), pnorm(a)


def pgcd(a, b, p):
    a, b = pnorm(a), pnorm(b)
    while b:
        a, b = b, pdivmod(a, b, p)[1]
    if a and a[-1] != 1:
        a = pscale(a, pow(a[-1], p - 2, p), p)
    return a


def pconst(c, p):
    c %= p
    return (c,) if c else ()


def peval0(a):
    return a[0] if a else 0


def pshift(a):
    """Multiplication by X."""
    a = pnorm(a)
    return (0,) + a if a else ()


def _row_content(row, p):
    g = ()
    for e in row:
        g = pgcd(g, e, p)
        if g == (1,):
            break
    return g


def _strip_content(row, p):
    g = _row_content(row, p)
    if not g or g == (1,):
        return tuple(pnorm(e) for e in row)
    return tuple(pdivmod(e, g, p)[0] for e in row)


# --- polynomial matrices ---------------------------------------------------


class PolyMatrix:
    """A matrix with entries in F_p[X]; rows are vectors of R^ncols."""

    __slots__ = ("field", "ncols", "rows")

    def __init__(self, field, ncols, rows):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(
            self, "rows", tuple(tuple(pnorm(e) for e in r) for r in rows)
        )
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError("row width mismatch")

    def __setattr__(self, *a):
        raise AttributeError("PolyMatrix is immutable")

    @property
    def nrows(self):
        return len(self.rows)

    @classmethod
    def from_const(cls, field, coord_rows, ncols=None):
        coord_rows = [tuple(r) for r in coord_rows]
        if ncols is None:
            ncols = len(coord_rows[0]) if coord_rows else 0
        return cls(
            field, ncols, [[pconst(c, field.p) for c in r] for r in coord_rows]
        )

    @classmethod
    def from_packed(cls, field, n, packed_rows):
        return cls.from_const(field, [field.unpack(r, n) for r in packed_rows], n)

    def stack(self, other):
        if self.ncols != other.ncols or self.field != other.field:
            raise ValueError("stack shape mismatch")
        return PolyMatrix(self.field, self.ncols, self.rows + other.rows)

    def eval0_coords(self):
        return [tuple(peval0(e) for e in r) for r in self.rows]

    def eval0_subspace(self):
        return Subspace.span(self.field, self.ncols, self.eval0_coords())

    def apply_const(self, T):
        """Row-wise image under a constant operator: each row v becomes T v."""
        p = self.field.p
        Tc = T.coord_rows()
        rows = []
        for v in self.rows:
            new = []
            for i in range(T.nrows):
                acc = ()
                for j in range(self.ncols):
                    c = Tc[i][j]
                    if c:
                        acc = padd(acc, pscale(v[j], c, p), p)
                new.append(acc)
            rows.append(new)
        return PolyMatrix(self.field, T.nrows, rows)

    def gram(self, pairing):
        """Matrix of pairings <row_i, row_j> as polynomials."""
        rows = [
            [poly_bilinear(u, w, pairing) for w in self.rows] for u in self.rows
        ]
        return PolyMatrix(self.field, self.nrows, rows) if self.nrows else self

    def max_degree(self):
        return max((len(e) - 1 for r in self.rows for e in r if e), default=-1)

    def to_coeff_lists(self):
        return [[list(e) for e in r] for r in self.rows]

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.field == other.field
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field.p, self.ncols, self.rows))

    def __repr__(self):
        return "PolyMatrix(F%d[X], %dx%d)" % (self.field.p, self.nrows, self.ncols)


def poly_bilinear(u, w, pairing):
    """<u, w> = u * Phi * w^T for polynomial rows and a constant form Phi."""
    p = pairing.field.p
    Phi = pairing.coord_rows()
    acc = ()
    for i, ui in enumerate(u):
        if not ui:
            continue
        tmp = ()
        for j, wj in enumerate(w):
            c = Phi[i][j]
            if c and wj:
                tmp = padd(tmp, pscale(wj, c, p), p)
        acc = padd(acc, pmul(ui, tmp, p), p)
    return acc


def generic_rank(pm):
    """Rank over F_p(X), by fraction-free elimination."""
    p = pm.field.p
    rows = [list(r) for r in pm.rows]
    m = len(rows)
    rank = 0
    for col in range(pm.ncols):
        piv = None
        for i in range(rank, m):
            if rows[i][col] and (
                piv is None or len(rows[i][col]) < len(rows[piv][col])
            ):
                piv = i
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][col]
        for i in range(m):
            if i == rank or not rows[i][col]:
                continue
            c = rows[i][col]
            rows[i] = [
                psub(pmul(pv, x, p), pmul(c, y, p), p)
                for x, y in zip(rows[i], rows[rank])
            ]
            rows[i] = list(_strip_content(rows[i], p))
        rank += 1
    return rank


def poly_right_kernel(field, rows, ncols):
    """Polynomial spanning set of {u : A u = 0} over F_p(X)."""
    p = field.p
    A = [[pnorm(e) for e in r] for r in rows]
    m = len(A)
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, m):
            if A[i][col] and (piv is None or len(A[i][col]) < len(A[piv][col])):
                piv = i
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pv = A[r][col]
        for i in range(m):
            if i == r or not A[i][col]:
                continue
            c = A[i][col]
            A[i] = [
                psub(pmul(pv, x, p), pmul(c, y, p), p) for x, y in zip(A[i], A[r])
            ]
            A[i] = list(_strip_content(A[i], p))
        pivots.append((r, col))
        r += 1
    pivot_cols = {c for _, c in pivots}
    basis = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        u = [() for _ in range(ncols)]
        L = (1,)
        for rr, cc in pivots:
            L = pmul(L, A[rr][cc], p)
        u[f] = L
        for rr, cc in pivots:
            if A[rr][f]:
                others = (1,)
                for r2, c2 in pivots:
                    if r2 != rr:
                        others = pmul(others, A[r2][c2], p)
                u[cc] = pneg(pmul(A[rr][f], others, p), p)
        basis.append(_strip_content(u, p))
    return basis


def poly_left_kernel(field, rows, ncols):
    """Polynomial spanning set of {x : x A = 0} over F_p(X)."""
    m = len(rows)
    transposed = [[rows[i][j] for i in range(m)] for j in range(ncols)]
    return poly_right_kernel(field, transposed, m)


def _hermite(field, n, rows):
    """Canonical Hermite basis of the k[X]-lattice spanned by `rows`."""
    p = field.p
    work = [list(r) for r in rows if any(pnorm(e) for e in r)]
    result = []
    for col in range(n):
        cand = [r for r in work if r[col]]
        rest = [r for r in work if not r[col]]
        while len(cand) > 1:
            cand.sort(key=lambda r: len(r[col]))
            piv = cand[0]
            nxt = [piv]
            for r in cand[1:]:
                q, _ = pdivmod(r[col], piv[col], p)
                r2 = [psub(x, pmul(q, y, p), p) for x, y in zip(r, piv)]
                if r2[col]:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            cand = nxt
        if cand:
            piv = cand[0]
            lead = piv[col][-1]
            if lead != 1:
                inv = pow(lead, p - 2, p)
                piv = [pscale(x, inv, p) for x in piv]
            for b in result:
                if b[col]:
                    q, _ = pdivmod(b[col], piv[col], p)
                    if q:
                        for j in range(n):
                            b[j] = psub(b[j], pmul(q, piv[j], p), p)
            result.append(list(piv))
        work = rest
    return tuple(tuple(pnorm(e) for e in r) for r in result)


def _snf_saturated_rows(field, n, gen_rows):
    """Saturated basis of the k(X)-span of the rows, inside k[X]^n.

    Diagonalize A = U^{-1} D V^{-1} by row and column operations while
    tracking W = V^{-1}; the saturation is spanned by the first rank(A)
    rows of W.
    """
    p = field.p
    A = [[pnorm(e) for e in r] for r in gen_rows]
    A = [r for r in A if any(r)]
    m = len(A)
    if m == 0:
        return ()
    W = [[pconst(1 if i == j else 0, p) for j in range(n)] for i in range(n)]
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j]:
                    d = len(A[i][j])
                    if best is None or d < best[0]:
                        best = (d, i, j)
        if best is None:
            break
        _, bi, bj = best
        A[t], A[bi] = A[bi], A[t]
        if bj != t:
            for row in A:
                row[t], row[bj] = row[bj], row[t]
            W[t], W[bj] = W[bj], W[t]
        while True:
            dirty = False
            for i in range(m):
                if i != t and A[i][t]:
                    q, rem = pdivmod(A[i][t], A[t][t], p)
                    A[i] = [psub(x, pmul(q, y, p), p) for x, y in zip(A[i], A[t])]
                    if rem:
                        A[t], A[i] = A[i], A[t]
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    q, rem = pdivmod(A[t][j], A[t][t], p)
                    if q:
                        for row in A:
                            row[j] = psub(row[j], pmul(q, row[t], p), p)
                        W[t] = [
                            padd(x, pmul(q, y, p), p) for x, y in zip(W[t], W[j])
                        ]
                    if rem:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        W[t], W[j] = W[j], W[t]
                        dirty = True
                        break
            if not dirty:
                break
        t += 1
    return _hermite(field, n, W[:t])


class PolyModule:
    """A saturated R-submodule of R^n, by a canonical polynomial basis."""

    __slots__ = ("field", "n", "basis")

    def __init__(self, field, n, basis):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, *a):
        raise AttributeError("PolyModule is immutable")

    @classmethod
    def from_rows(cls, field, n, rows):
        return cls(field, n, _snf_saturated_rows(field, n, rows))

    @classmethod
    def constant(cls, S):
        rows = [
            [pconst(c, S.field.p) for c in coords] for coords in S.basis_coords()
        ]
        return cls.from_rows(S.field, S.n, rows)

    @property
    def rank(self):
        return len(self.basis)

    def to_polymatrix(self):
        return PolyMatrix(self.field, self.n, self.basis)

    def fiber(self):
        """Special fiber: reductions of the basis (full rank by saturation)."""
        S = self.to_polymatrix().eval0_subspace()
        assert S.dim == self.rank, "saturated basis degenerated at X = 0"
        return S

    def sum(self, other):
        return PolyModule.from_rows(self.field, self.n, self.basis + other.basis)

    def intersect(self, other):
        stacked = list(self.basis) + list(other.basis)
        combos = poly_left_kernel(self.field, stacked, self.n)
        p = self.field.p
        gens = []
        for combo in combos:
            vec = [() for _ in range(self.n)]
            for c, row in zip(combo[: self.rank], self.basis):
                if c:
                    for j in range(self.n):
                        vec[j] = padd(vec[j], pmul(c, row[j], p), p)
            gens.append(vec)
        return PolyModule.from_rows(self.field, self.n, gens)

    def preimage_const(self, T):
        """{v : T v lies in this module generically}, saturated."""
        p = self.field.p
        Tt = T.transpose().coord_rows()
        rows = [[pconst(c, p) for c in r] for r in Tt]  # row j = T^T row j
        rows += [[pneg(e, p) for e in r] for r in self.basis]
        combos = poly_left_kernel(self.field, rows, self.n)
        gens = [combo[: T.nrows] for combo in combos]
        return PolyModule.from_rows(self.field, self.n, gens)

    def generic_intersection_dim(self, other):
        stacked = PolyMatrix(self.field, self.n, list(self.basis) + list(other.basis))
        return self.rank + other.rank - generic_rank(stacked)

    def contains_generic(self, pm):
        """Whether every row of the PolyMatrix lies in the generic span."""
        stacked = PolyMatrix(self.field, self.n, list(self.basis) + list(pm.rows))
        return generic_rank(stacked) == self.rank

    def __eq__(self, other):
        return (
            isinstance(other, PolyModule)
            and self.field == other.field
            and self.n == other.n
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.field.p, self.n, self.basis))

    def __repr__(self):
        return "PolyModule(F%d[[X]]^%d, rank=%d)" % (self.field.p, self.n, self.rank)


# --- the lifting lemma ------------------------------------------------------


INEQ_TOP = "d'_l == d_l"
INEQ_MONOTONE = "0 <= d'_{i+1} - d'_i"
INEQ_STEP = "d'_{i+1} - d'_i <= h_{i+1} - h_i"
INEQ_LE_SPECIAL = "d'_i <= d_i"
POL_TOP = "d'_l == g"
POL_PERP = "M_i^perp == M_{l-i}"
POL_SYM = "d'_{l-i} == g - h_i + d'_i"
POL_LBAR = "Lbar maximal totally isotropic"
POL_PERFECT = "pairing is perfect"


class LiftInfeasibleError(ValueError):
    """A lift problem violates one of the named feasibility inequalities."""

    def __init__(self, constraint, detail=""):
        msg = "infeasible lift: %s" % constraint
        if detail:
            msg += " (%s)" % detail
        super().__init__(msg)
        self.constraint = constraint


class LiftConstructionError(RuntimeError):
    """No choice of lift vectors satisfied all side constraints."""


@dataclass(frozen=True)
class LiftProblem:
    """A flag of direct summands, a special subspace, and generic targets."""

    flag: tuple  # ascending Subspaces, last = full ambient
    special: Subspace
    targets: tuple
    pairing: Matrix | None = None

    def __post_init__(self):
        object.__setattr__(self, "flag", tuple(self.flag))
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if not self.flag:
            raise ValueError("empty flag")
        amb = self.flag[-1]
        if amb.dim != amb.n:
            raise ValueError("last flag member must be the full ambient")
        for a, b in zip(self.flag, self.flag[1:]):
            if not b.contains(a):
                raise ValueError("flag members are not nested")
        if not amb.contains(self.special):
            raise ValueError("special subspace outside the ambient")
        if len(self.targets) != len(self.flag):
            raise ValueError("one target per flag member required")

    def special_dims(self):
        return tuple(self.special.intersect(F).dim for F in self.flag)


def check_lift_feasible(problem):
    """Validate the lifting-lemma inequalities; raise with the violated name."""
    d = problem.special_dims()
    dp = problem.targets
    hs = tuple(F.dim for F in problem.flag)
    l = len(hs)
    # automatic for genuine flags; kept as a sanity assertion
    for i in range(l - 1):
        assert 0 <= d[i + 1] - d[i] <= hs[i + 1] - hs[i]
    if dp[-1] != d[-1]:
        raise LiftInfeasibleError(INEQ_TOP, "d'_%d = %d != %d" % (l, dp[-1], d[-1]))
    prev = 0
    for i in range(l):
        if dp[i] - prev < 0:
            raise LiftInfeasibleError(
                INEQ_MONOTONE, "at i = %d: %d < %d" % (i + 1, dp[i], prev)
            )
        prev = dp[i]
    prev_d, prev_h = 0, 0
    for i in range(l):
        if dp[i] - prev_d > hs[i] - prev_h:
            raise LiftInfeasibleError(
                INEQ_STEP,
                "at i = %d: %d - %d > %d - %d" % (i + 1, dp[i], prev_d, hs[i], prev_h),
            )
        prev_d, prev_h = dp[i], hs[i]
    for i in range(l):
        if dp[i] > d[i]:
            raise LiftInfeasibleError(
                INEQ_LE_SPECIAL, "at i = %d: %d > %d" % (i + 1, dp[i], d[i])
            )


def perp(S, pairing):
    """Orthogonal complement of a subspace under a constant perfect form."""
    if S.is_zero():
        return Subspace.full(S.field, S.n)
    Pt = pairing.transpose()
    rows = [Pt.apply(r) for r in S.rows]
    return Matrix(S.field, len(rows), S.n, rows).kernel()


def check_isotropic_feasible(problem):
    """Polarized feasibility on top of the plain lifting inequalities."""
    if problem.pairing is None:
        raise LiftInfeasibleError(POL_PERFECT, "no pairing given")
    pairing = problem.pairing
    n = problem.special.n
    if pairing.rank() != n:
        raise LiftInfeasibleError(POL_PERFECT)
    if n % 2:
        raise LiftInfeasibleError(POL_PERFECT, "odd-dimensional ambient")
    g = n // 2
    hs = tuple(F.dim for F in problem.flag)
    l = len(hs)
    for i, F in enumerate(problem.flag):
        mate = problem.flag[l - 2 - i] if i < l - 1 else None
        # flag convention: M_l = ambient has perp M_0 = 0, omitted from the list
        pp = perp(F, pairing)
        expect = mate if mate is not None else Subspace.zero(F.field, n)
        if i == l - 1:
            continue
        if pp != expect:
            raise LiftInfeasibleError(
                POL_PERP, "member %d has perp of dim %d" % (i + 1, pp.dim)
            )
    L = problem.special
    if L.dim != g or not perp(L, pairing).contains(L):
        raise LiftInfeasibleError(POL_LBAR)
    dp = problem.targets
    if dp[-1] != g:
        raise LiftInfeasibleError(POL_TOP, "d'_l = %d != g = %d" % (dp[-1], g))
    for i in range(l - 1):
        mate = l - 2 - i
        if dp[mate] != g - hs[i] + dp[i]:
            raise LiftInfeasibleError(
                POL_SYM,
                "i = %d: d'_{l-i} = %d != %d" % (i + 1, dp[mate], g - hs[i] + dp[i]),
            )
    check_lift_feasible(problem)


def _lift_const_row(field, module, target_packed):
    """A module element with constant coefficients reducing to the target."""
    n = module.n
    fiber_rows = [field.pack(tuple(peval0(e) for e in r)) for r in module.basis]
    coeffs = _express(field, fiber_rows, target_packed)
    if coeffs is None:
        return None
    p = field.p
    out = [() for _ in range(n)]
    for c, row in zip(coeffs, module.basis):
        if c:
            for j in range(n):
                out[j] = padd(out[j], pscale(row[j], c, p), p)
    return tuple(out)


def _express(field, rows, target):
    """Coefficients writing target as a combination of the given packed rows."""
    ech = []  # (pivot, row, comb), sorted by pivot
    m = len(rows)
    for idx, row in enumerate(rows):
        comb = [0] * m
        comb[idx] = 1
        for piv, b, bc in ech:
            c = field.row_get(row, piv)
            if c:
                row = field.row_sub(row, field.row_scale(b, c))
                comb = [(x - c * y) % field.p for x, y in zip(comb, bc)]
        if field.row_is_zero(row):
            continue
        piv = field.row_support_min(row)
        lead = field.row_get(row, piv)
        if lead != 1:
            inv = field.inv(lead)
            row = field.row_scale(row, inv)
            comb = [(x * inv) % field.p for x in comb]
        ech.append((piv, row, comb))
        ech.sort(key=lambda t: t[0])
    acc = [0] * m
    for piv, b, bc in ech:
        c = field.row_get(target, piv)
        if c:
            target = field.row_sub(target, field.row_scale(b, c))
            acc = [(x + c * y) % field.p for x, y in zip(acc, bc)]
    if not field.row_is_zero(target):
        return None
    return acc


def _lift_solutions(mods, special, targets, pair_check=None, node_cap=500000):
    """All lifts of `special` along the module flag, lazily, backtrackably.

    Yields lists of polynomial rows.  `pair_check(f, g)` filters pairs of
    finalized rows (used for isotropy); the first yielded solution is the
    plain greedy one.
    """
    field = special.field
    n = special.n
    fibers = [m.fiber() for m in mods]
    l = len(mods)
    zero = Subspace.zero(field, n)
    budget = [node_cap]

    def pair_ok(f, finals):
        if pair_check is None:
            return True
        return all(pair_check(f, g) for g in finals)

    def rec(i, rows, pending, finals):
        # rows: list of [base, pert]; pending: row ids awaiting a perturbation
        if budget[0] <= 0:
            raise LiftConstructionError("search budget exhausted")
        budget[0] -= 1
        if i == l:
            if pending:
                return
            yield [r for r in rows]
            return
        fib = fibers[i]
        prev_cut = special.intersect(fibers[i - 1]) if i else zero
        cur_cut = special.intersect(fib)
        news = prev_cut.complement_in(cur_cut)
        k_i = len(news)
        keep = targets[i] - (targets[i - 1] if i else 0)
        if keep < 0:
            return
        bases = []
        for w in news:
            b = _lift_const_row(field, mods[i], w)
            if b is None:
                return
            bases.append(b)
        if keep <= k_i:
            for subset in itertools.combinations(range(k_i), keep):
                chosen = set(subset)
                rows2 = list(rows)
                pending2 = list(pending)
                finals2 = list(finals)
                ok = True
                for idx in range(k_i):
                    base = bases[idx]
                    if idx in chosen:
                        if not pair_ok(base, finals2):
                            ok = False
                            break
                        rows2.append(base)
                        finals2.append(base)
                    else:
                        pending2.append(len(rows2))
                        rows2.append(base)  # perturbation appended later
                if ok:
                    yield from rec(i + 1, rows2, pending2, finals2)
        else:
            q = keep - k_i
            if q > len(pending):
                return
            rows2 = list(rows)
            finals_base = list(finals)
            ok = True
            for base in bases:
                if not pair_ok(base, finals_base):
                    ok = False
                    break
                rows2.append(base)
                finals_base.append(base)
            if not ok:
                return
            avoid0 = fibers[i - 1].sum(cur_cut) if i else cur_cut

            def assign(j, rows3, finals3, avoid):
                if j == q:
                    yield from rec(i + 1, rows3, list(pending[q:]), finals3)
                    return
                rid = pending[j]
                for v in fib.vectors():
                    if avoid.contains_row(v):
                        continue
                    vrow = _lift_const_row(field, mods[i], v)
                    if vrow is None:
                        continue
                    p = field.p
                    f = tuple(
                        padd(b, pshift(x), p) for b, x in zip(rows3[rid], vrow)
                    )
                    if not pair_ok(f, finals3):
                        continue
                    rows4 = list(rows3)
                    rows4[rid] = f
                    yield from assign(
                        j + 1,
                        rows4,
                        finals3 + [f],
                        Subspace(field, n, avoid.rows + (v,)),
                    )

            yield from assign(0, rows2, finals_base, avoid0)

    yield from rec(0, [], [], [])


def lift_subspace(problem):
    """A polynomial basis of the lift prescribed by a (plain) LiftProblem."""
    check_lift_feasible(problem)
    mods = [PolyModule.constant(F) for F in problem.flag]
    for rows in _lift_solutions(mods, problem.special, problem.targets):
        return PolyMatrix(problem.special.field, problem.special.n, rows)
    raise LiftConstructionError("no lift found for a feasible problem")


def lift_isotropic(problem):
    """An isotropic lift: plain posts plus an identically-zero Gram matrix."""
    check_isotropic_feasible(problem)
    pairing = problem.pairing

    def pair_check(f, g):
        return not poly_bilinear(f, g, pairing)

    mods = [PolyModule.constant(F) for F in problem.flag]
    for rows in _lift_solutions(
        mods, problem.special, problem.targets, pair_check=pair_check
    ):
        pm = PolyMatrix(problem.special.field, problem.special.n, rows)
        if all(not e for r in pm.gram(pairing).rows for e in r):
            return pm
    raise LiftConstructionError("no isotropic lift found")


@dataclass(frozen=True)
class LiftReport:
    ok: bool
    special_fiber_ok: bool
    direct_summand_ok: bool
    generic_dims: tuple
    expected: tuple
    gram_zero: bool | None = None

    def __bool__(self):
        return self.ok


def verify_lift(problem, pm):
    """Independent verification of the three lift post-conditions.

    (a) the reduction at X = 0 spans the special subspace; (b) the lift
    is a direct summand (full-rank reduction, hence a maximal minor with
    unit constant term); (c) every generic intersection dimension,
    computed by fraction-free rank, equals its target.
    """
    fiber = pm.eval0_subspace()
    a = fiber == problem.special
    b = fiber.dim == pm.nrows
    dims = []
    for F in problem.flag:
        const = PolyMatrix.from_packed(pm.field, pm.ncols, F.rows)
        r = generic_rank(pm.stack(const))
        dims.append(pm.nrows + F.dim - r)
    dims = tuple(dims)
    c = dims == problem.targets
    gram_zero = None
    if problem.pairing is not None:
        gram_zero = all(not e for r in pm.gram(problem.pairing).rows for e in r)
    ok = a and b and c and (gram_zero is None or gram_zero)
    return LiftReport(ok, a, b, dims, problem.targets, gram_zero)


# --- stratum degeneration ---------------------------------------------------


class StratOrderError(ValueError):
    """The requested pair is not ordered in the stratification poset."""


class TheoremGapError(RuntimeError):
    """A dimension inequality the theorems guarantee failed at desk scale."""


@dataclass(frozen=True)
class Degeneration:
    y_from: StrataPoint
    y_to: StrataPoint
    ambient_dim: int
    op: Matrix
    omega1: PolyMatrix
    omega2: PolyMatrix
    omega: PolyMatrix
    generic: StrataPoint

    def to_json_dict(self):
        return {
            "h": self.y_from.h,
            "mu": list(self.y_from.mu),
            "from": self.y_from.to_json_dict(),
            "to": self.y_to.to_json_dict(),
            "ambient_dim": self.ambient_dim,
            "omega1": self.omega1.to_coeff_lists(),
            "omega2": self.omega2.to_coeff_lists(),
            "omega": self.omega.to_coeff_lists(),
        }


def _free_module_op(field, h):
    """T on (k[T]/T^3)^h: coordinates 3b+t, T sends slot t to t+1."""
    n = 3 * h
    rows = [[0] * n for _ in range(n)]
    for b in range(h):
        for t in range(2):
            rows[3 * b + t + 1][3 * b + t] = 1
    return Matrix.from_rows(field, rows, n)


def embed_normal_form(D, h):
    """Embed a PR datum into the free module of rank h over k[T]/T^3.

    Block j of size s lands in free block j starting at depth 3 - s, so
    the image is the span of e_1..e_{delta_3}, T e_{delta_3+1}, ...,
    T^2 e_{delta_1} in the free module.
    """
    M = D.module
    field = M.field
    parts = [a for a in jordan_type(M).parts if a]
    if len(parts) > h:
        raise ValueError("module needs more than h generators")
    n = 3 * h
    iota_rows = [[0] * M.dim for _ in range(n)]
    off = 0
    for j, s in enumerate(parts):
        for k in range(s):
            iota_rows[3 * j + 2 - k][off + k] = 1
        off += s
    iota = Matrix.from_rows(field, iota_rows, M.dim)
    T = _free_module_op(field, h)
    images = []
    for S in D.flag:
        images.append(Subspace(field, n, [iota.apply(r) for r in S.rows]))
    return T, images[1], images[2], images[3]


def _stage_b_solutions(field, T, w1bar, w2bar, kerT, alpha1_target, pair=None):
    """Lifts of omega_2 inside T^{-1} omega_{1,R} (omega_1 lifted constantly)."""
    from .gf import preimage

    Pw1 = PolyModule.constant(w1bar)
    amb = preimage(T, w1bar)
    mods = [Pw1, PolyModule.constant(kerT.intersect(amb)), PolyModule.constant(amb)]
    d1 = w1bar.dim
    targets = (d1, alpha1_target, w2bar.dim)
    pair_check = None
    if pair is not None:
        def pair_check(f, g):
            return not poly_bilinear(f, g, pair)

    yield from _lift_solutions(mods, w2bar, targets, pair_check=pair_check)


def degenerate_step(y_from, y_to, field, polarized=False):
    """Deform the normal form of y_from so its generic invariants equal y_to.

    Requires y_to <= y_from in the stratification order (refused
    otherwise).  Successively lifts the three flag steps inside a free
    module over (truncated series)[T]/T^3, asserting the three dimension
    inequalities before the final lift; the generic fiber of the result
    is recomputed independently and must equal y_to.
    """
    from .gf import preimage

    if (y_from.h, y_from.mu) != (y_to.h, y_to.mu):
        raise StratOrderError("points live over different (h, mu)")
    if not leq(y_to, y_from):
        raise StratOrderError(
            "degeneration requires y_to <= y_from; pair is not so ordered"
        )
    if polarized:
        if not (in_Ypol(y_from) and in_Ypol(y_to)):
            raise StratOrderError("polarized degeneration requires points of Y^pol")
        T, pairing, w1bar, w2bar, wbar = polarized_normal_form(y_from, field)
    else:
        D = normal_form(y_from, field)
        T, w1bar, w2bar, wbar = embed_normal_form(D, y_from.h)
        pairing = None

    h = y_from.h
    n = 3 * h  # free of rank h over the truncated ring (h = 2g when polarized)
    d1, d2, d3 = y_from.mu
    delta, alpha, beta = y_to.delta, y_to.alpha, y_to.beta
    deltap, alphap, betap = y_from.delta, y_from.alpha, y_from.beta

    # the three inequalities that make the final lift feasible
    if not (delta[0] + alpha[1] <= min(deltap[0] + alpha[1], betap[0] + d1)):
        raise TheoremGapError("delta1 + alpha2 <= min(delta1' + alpha2, beta1' + d1)")
    if not (beta[0] + d1 <= betap[0] + d1):
        raise TheoremGapError("beta1 + d1 <= beta1' + d1")
    if not (delta[0] + delta[1] <= min(deltap[0] + deltap[1], alpha[0] + betap[0])):
        raise TheoremGapError(
            "delta1 + delta2 <= min(delta1' + delta2', alpha1 + beta1')"
        )

    kerT = T.kernel()
    kerT2 = T.power(2).kernel()
    Pw1 = PolyModule.constant(w1bar)
    PkerT = PolyModule.constant(kerT)
    PkerT2 = PolyModule.constant(kerT2)
    Pinv_w1 = PolyModule.constant(preimage(T, w1bar))

    def cross_pair_zero(A, B):
        return all(
            not poly_bilinear(u, w, pairing) for u in A.basis for w in B.basis
        )

    def drained(gen):
        while True:
            try:
                yield next(gen)
            except (StopIteration, LiftConstructionError):
                return

    for rows_b in drained(
        _stage_b_solutions(field, T, w1bar, w2bar, kerT, alpha[0], pair=pairing)
    ):
        Pw2 = PolyModule.from_rows(field, n, rows_b)
        if Pw2.rank != d1 + d2 or Pw2.fiber() != w2bar:
            continue
        if Pw2.generic_intersection_dim(PkerT) != alpha[0]:
            continue
        Pinv_w2 = Pw2.preimage_const(T)
        if pairing is not None:
            pmat = Pw2.to_polymatrix()
            if any(e for r in pmat.gram(pairing).rows for e in r):
                continue
            if not cross_pair_zero(Pw2, Pinv_w2):
                continue
        F_mod = PkerT.sum(Pw2)
        G_mod = PkerT2.intersect(Pinv_w2)
        fF = F_mod.fiber()
        fG = G_mod.fiber()
        # the maximal-intersection choice of the second lift
        if wbar.intersect(fF).dim < delta[0] + alpha[1]:
            continue
        if wbar.intersect(fG).dim < delta[0] + delta[1]:
            continue
        mods_c = [Pw2, F_mod, Pinv_w1, G_mod, Pinv_w2]
        targets_c = (
            d1 + d2,
            delta[0] + alpha[1],
            d1 + beta[0],
            delta[0] + delta[1],
            d1 + d2 + d3,
        )
        pc = None
        if pairing is not None:
            def pc(f, g):
                return not poly_bilinear(f, g, pairing)

        for rows_c in drained(
            _lift_solutions(mods_c, wbar, targets_c, pair_check=pc)
        ):
            Pw = PolyModule.from_rows(field, n, rows_c)
            if Pw.rank != d1 + d2 + d3 or Pw.fiber() != wbar:
                continue
            if pairing is not None:
                wm = Pw.to_polymatrix()
                if any(e for r in wm.gram(pairing).rows for e in r):
                    continue
            generic = _generic_point(h, y_from.mu, T, Pw1, Pw2, Pw, PkerT, PkerT2)
            if generic != y_to:
                continue
            return Degeneration(
                y_from,
                y_to,
                n,
                T,
                Pw1.to_polymatrix(),
                Pw2.to_polymatrix(),
                Pw.to_polymatrix(),
                generic,
            )
    raise TheoremGapError(
        "no lift realized the generic invariants %r from %r"
        % (y_to.sort_key(), y_from.sort_key())
    )


def _generic_point(h, mu, T, Pw1, Pw2, Pw, PkerT, PkerT2):
    """Generic invariants of a lifted flag, via fraction-free ranks."""
    d1 = Pw1.rank
    total = Pw.rank
    k1 = Pw.generic_intersection_dim(PkerT)
    k2 = Pw.generic_intersection_dim(PkerT2)
    delta = (k1, k2 - k1, total - k2)
    a1 = Pw2.generic_intersection_dim(PkerT)
    alpha = (a1, Pw2.rank - a1)
    Pinv1 = Pw1.preimage_const(T)
    b1 = Pw.generic_intersection_dim(Pinv1) - d1
    beta = (b1, total - d1 - b1)
    # generic PR-datum sanity: the chain stays T-stable over k((X))
    assert Pw2.contains_generic(Pw1.to_polymatrix())
    assert Pw.contains_generic(Pw2.to_polymatrix())
    assert Pw1.contains_generic(Pw2.to_polymatrix().apply_const(T))
    assert Pw2.contains_generic(Pw.to_polymatrix().apply_const(T))
    return StrataPoint(h, mu, delta, alpha, beta)


# --- polarized normal forms -------------------------------------------------


def standard_symplectic(field, g):
    """T and the pairing tau(b(x, y)) on (k[T]/T^3)^{2g}, T self-adjoint.

    Hyperbolic R-bilinear form b(e_i, f_i) = 1 = -b(f_i, e_i), read off
    through the T^2-coefficient functional, so <E_{i,a}, E_{g+i,c}> = 1
    exactly when a + c = 2.
    """
    n = 6 * g
    T = _free_module_op(field, 2 * g)
    rows = [[0] * n for _ in range(n)]
    for i in range(g):
        for a in range(3):
            c = 2 - a
            rows[3 * i + a][3 * (g + i) + c] = 1
            rows[3 * (g + i) + c][3 * i + a] = (-1) % field.p
    return T, Matrix.from_rows(field, rows, n)


def polarized_normal_form(y, field):
    """A flag inside the polarized free module realizing y in Y^pol.

    The module is pinned by delta = (r, g, 2g - r): full blocks on the
    first 2g - r hyperbolic pairs, a depth-1 and a depth-2 truncation
    sharing each remaining pair.  The two flag steps are found by
    deterministic search subject to the pairing compatibilities
    omega_1^perp = T^{-2} omega_1 and omega_2^perp = T^{-1} omega_2.
    """
    from .gf import preimage, subspaces_between

    if not in_Ypol(y):
        raise StratOrderError("point is not in Y^pol")
    g = y.h // 2
    r = y.delta[0]
    T, pairing = standard_symplectic(field, g)
    n = 6 * g
    gens = []
    for b in range(2 * g - r):
        for t in range(3):
            gens.append(3 * b + t)
    for j in range(2 * g - r, g):
        gens.append(3 * j + 1)
        gens.append(3 * j + 2)
        gens.append(3 * (g + j) + 2)
    coords = []
    for idx in gens:
        v = [0] * n
        v[idx] = 1
        coords.append(v)
    wbar = Subspace.span(field, n, coords)
    assert wbar.dim == 3 * g

    Tw = Subspace(field, n, [T.apply(v) for v in wbar.rows])
    T2w = Subspace(field, n, [T.power(2).apply(v) for v in wbar.rows])
    kerT = T.kernel()
    wkT = wbar.intersect(kerT)
    cut1 = y.beta[0] + g - y.delta[0]

    for w1 in subspaces_between(T2w, wkT, g):
        if w1.intersect(Tw).dim != cut1:
            continue
        if perp(w1, pairing) != preimage(T.power(2), w1):
            continue
        floor = w1.sum(Tw)
        ceil = preimage(T, w1).intersect(wbar)
        found = None
        for w2 in subspaces_between(floor, ceil, 2 * g):
            if w2.intersect(kerT).dim != y.alpha[0]:
                continue
            if perp(w2, pairing) != preimage(T, w2):
                continue
            found = w2
            break
        if found is not None:
            return T, pairing, w1, found, wbar
    raise TheoremGapError("no polarized flag matched %r" % (y.sort_key(),))
