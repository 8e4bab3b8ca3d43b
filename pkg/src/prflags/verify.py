"""Verification sweeps: the regression harness behind `prflags verify all`.

Each criterion function returns a CriterionResult whose `detail` string
is deterministic for a fixed seed (timings never reach stdout), so two
runs of the full battery print byte-identical reports.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .gf import F2, F3, Matrix, Subspace
from .polygon import Polygon
from .tmodule import JordanType, delta_vector, realize, torsion_flag, power_image
from . import pr as prmod
from . import e3 as e3mod
from .strat import StrataPoset, leq
from . import lift as liftmod


@dataclass(frozen=True)
class CriterionResult:
    key: str
    ok: bool
    detail: str
    elapsed: float


def _timed(key, fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    return CriterionResult(key, ok, detail, time.perf_counter() - t0)


# --- helpers ----------------------------------------------------------------


def _eval_definition(h, d, x):
    """The defining sum (1/N) * sum_i max(0, x + d_i - h), independently."""
    return Fraction(sum(max(0, x + di - h) for di in d), len(d))


def _pointwise_dominates(h, d1, d2):
    return all(
        _eval_definition(h, d1, x) >= _eval_definition(h, d2, x)
        for x in range(h + 1)
    )


def _all_d_lists(h, max_n):
    for n in range(1, max_n + 1):
        yield from itertools.product(range(h + 1), repeat=n)


def _partitions(total, max_part):
    if total == 0:
        yield ()
        return
    for a in range(min(total, max_part), 0, -1):
        for rest in _partitions(total - a, a):
            yield (a,) + rest


def _jordan_types(e, max_dim):
    for n in range(max_dim + 1):
        for parts in _partitions(n, e):
            yield JordanType(e, parts if parts else (0,))


def _sorted_mus(h):
    for mu in itertools.product(range(h, -1, -1), repeat=3):
        if list(mu) == sorted(mu, reverse=True):
            yield mu


def _random_subspace(rng, field, n, dim):
    S = Subspace.zero(field, n)
    guard = 0
    while S.dim < dim:
        v = field.pack([rng.randrange(field.p) for _ in range(n)])
        S2 = Subspace(field, n, S.rows + (v,))
        if S2.dim > S.dim:
            S = S2
        guard += 1
        if guard > 200:
            raise RuntimeError("random subspace generation stalled")
    return S


# --- criterion 1: dominance -------------------------------------------------


def criterion_dominance(seed):
    rng = random.Random((seed, "dominance").__repr__())
    checked = bad = 0
    for _ in range(10000):
        h = rng.randint(1, 6)
        d1 = [rng.randint(0, h) for _ in range(rng.randint(1, 4))]
        d2 = [rng.randint(0, h) for _ in range(rng.randint(1, 4))]
        got = Polygon.from_d(h, d1).dominates(Polygon.from_d(h, d2))
        want = _pointwise_dominates(h, d1, d2)
        checked += 1
        if got != want:
            bad += 1
    for h in (1, 2, 3):
        all_d = list(_all_d_lists(h, 3))
        polys = [(d, Polygon.from_d(h, d)) for d in all_d]
        for d1, P1 in polys:
            for d2, P2 in polys:
                got = P1.dominates(P2)
                want = _pointwise_dominates(h, d1, d2)
                checked += 1
                if got != want:
                    bad += 1
    return bad == 0, "pairs=%d mismatches=%d" % (checked, bad)


# --- criterion 2: Hodge polygon identity -------------------------------------


def criterion_hodge_identity():
    checked = bad = 0
    for e in (1, 2, 3):
        for dim in range(0, 9):
            for parts in _partitions(dim, e):
                for pad in (0, 1):
                    h = max(1, len(parts)) + pad
                    full = parts + (0,) * (h - len(parts))
                    mults = {}
                    for a in full:
                        s = Fraction(a, e)
                        mults[s] = mults.get(s, 0) + 1
                    from_parts = Polygon.from_slopes(h, mults.items(), e)
                    delta = tuple(
                        sum(1 for a in full if a >= i) for i in range(1, e + 1)
                    )
                    from_delta = Polygon.from_d(h, delta, e)
                    checked += 1
                    if from_parts != from_delta:
                        bad += 1
    return bad == 0, "types=%d mismatches=%d" % (checked, bad)


# --- criterion 3: PR existence, both directions -------------------------------


def criterion_pr_existence(max_dim):
    cases = bad = 0
    for J in _jordan_types(3, max_dim):
        M = realize(J, F2)
        delta = delta_vector(M).entries
        for mu in itertools.product(range(4), repeat=3):
            a = prmod.pr_exists(J, mu, F2)
            b = prmod.pr_oracle_exists(M, mu)
            cases += 1
            if a != b:
                bad += 1
                continue
            if a:
                D = prmod.pr_construct(M, mu)
                if not prmod.validate_pr(D, mu):
                    bad += 1
                mu_sorted = tuple(sorted(mu, reverse=True))
                Ds = prmod.pr_construct(M, mu_sorted)
                alpha = prmod.alpha_table(delta, mu_sorted)
                for i in range(4):
                    for j in range(4):
                        got = Ds.flag[i].intersect(power_image(M, j)).dim
                        if got != alpha[i][j]:
                            bad += 1
    for J in _jordan_types(2, 6):
        M = realize(J, F2)
        for mu in itertools.product(range(7), repeat=2):
            a = prmod.pr_exists(J, mu, F2)
            b = prmod.pr_oracle_exists(M, mu)
            cases += 1
            if a != b:
                bad += 1
            elif a and not prmod.validate_pr(prmod.pr_construct(M, mu), mu):
                bad += 1
    return bad == 0, "cases=%d failures=%d" % (cases, bad)


# --- criterion 4: the e=3 bijection ------------------------------------------


def criterion_bijection(max_dim):
    bad = []
    if len(e3mod.enum_Yadm(1, (1, 1, 1))) != 1:
        bad.append("enum(1,(1,1,1))")
    if len(e3mod.enum_Yadm(2, (1, 1, 1))) != 4:
        bad.append("enum(2,(1,1,1))")
    roundtrips = oracle_cases = 0
    for h in (1, 2, 3):
        for mu in _sorted_mus(h):
            pts = e3mod.enum_Yadm(h, mu)
            for y in pts:
                D = e3mod.normal_form(y, F2)
                if e3mod.phi(D, h) != y:
                    bad.append("roundtrip h=%d mu=%r" % (h, mu))
                roundtrips += 1
            if sum(mu) <= max_dim:
                res = e3mod.iso_classes_oracle(h, mu, F2, max_total_dim=max_dim)
                phis = sorted(c[2].sort_key() for c in res.classes)
                if len(phis) != len(set(phis)):
                    bad.append("phi not injective h=%d mu=%r" % (h, mu))
                if phis != sorted(p.sort_key() for p in pts):
                    bad.append("image mismatch h=%d mu=%r" % (h, mu))
                oracle_cases += 1
    detail = "roundtrips=%d oracle_cases=%d failures=%d" % (
        roundtrips,
        oracle_cases,
        len(bad),
    )
    if bad:
        detail += " [" + "; ".join(bad[:4]) + "]"
    return not bad, detail


# --- criterion 5: the filtration dominance ------------------------------------


def _random_valid_filtration(rng, field, max_dim):
    e = rng.randint(1, 3)
    dim = rng.randint(0, max_dim)
    parts = []
    left = dim
    while left > 0:
        a = rng.randint(1, min(e, left))
        parts.append(a)
        left -= a
    J = JordanType(e, tuple(parts) if parts else (0,))
    M = realize(J, field)
    i = rng.randint(0, e)
    N = power_image(M, e - i)
    tor = torsion_flag(M, i)
    for _ in range(rng.randint(0, 3)):
        if tor.dim == 0:
            break
        coeffs = [rng.randrange(field.p) for _ in range(tor.dim)]
        v = field.zero_row(M.dim)
        for c, b in zip(coeffs, tor.rows):
            if c:
                v = field.row_add(v, field.row_scale(b, c))
        vecs = [v]
        for _ in range(e - 1):
            v = M.op.apply(v)
            vecs.append(v)
        N = N.sum(Subspace(field, M.dim, vecs))
    return M, N, i


def criterion_filtration_dominance(seed):
    rng = random.Random((seed, "filtration").__repr__())
    checked = bad = 0
    for k in range(1000):
        field = F2 if k % 2 == 0 else F3
        M, N, i = _random_valid_filtration(rng, field, 6)
        if not prmod.check_hdg_filt(M, N, i):
            bad += 1
        checked += 1
    return bad == 0, "instances=%d failures=%d" % (checked, bad)


# --- criterion 6: the lifting lemma ------------------------------------------


def _random_flag(rng, field, n, length):
    dims = sorted(rng.sample(range(0, n), k=length - 1)) + [n]
    dims = [d for d in dims]
    spaces = []
    cur = Subspace.zero(field, n)
    for d in dims:
        while cur.dim < d:
            v = field.pack([rng.randrange(field.p) for _ in range(n)])
            nxt = Subspace(field, n, cur.rows + (v,))
            if nxt.dim > cur.dim:
                cur = nxt
        spaces.append(cur)
    return spaces


def _random_feasible_targets(rng, hs, ds):
    l = len(hs)
    dp = [0] * l
    dp[-1] = ds[-1]
    for i in range(l - 2, -1, -1):
        lo = max(0, dp[i + 1] - (hs[i + 1] - hs[i]))
        hi = min(ds[i], dp[i + 1])
        dp[i] = rng.randint(lo, hi)
    return tuple(dp)


def _random_lift_problem(rng, field):
    l = rng.randint(2, 4)
    n = rng.randint(l, 6)
    flag = _random_flag(rng, field, n, l)
    L = _random_subspace(rng, field, n, rng.randint(0, n))
    prob_ds = tuple(L.intersect(F).dim for F in flag)
    targets = _random_feasible_targets(rng, [F.dim for F in flag], prob_ds)
    return liftmod.LiftProblem(tuple(flag), L, targets)


def _corrupt_targets(rng, problem, kind):
    """Return corrupted targets violating exactly the named inequality."""
    hs = [F.dim for F in problem.flag]
    ds = list(problem.special_dims())
    dp = list(problem.targets)
    l = len(dp)
    if kind == liftmod.INEQ_TOP:
        dp[-1] = ds[-1] + 1
        return tuple(dp)
    if kind == liftmod.INEQ_MONOTONE:
        # need an index with room to dip below the previous value
        for i in range(1, l - 1):
            if dp[i - 1] > 0:
                dp[i] = dp[i - 1] - 1
                if dp[i - 1] - dp[i] >= 0:
                    return tuple(dp)
        return None
    if kind == liftmod.INEQ_STEP:
        for i in range(l - 1):
            prev = dp[i - 1] if i else 0
            prev_h = hs[i - 1] if i else 0
            want = prev + (hs[i] - prev_h) + 1
            if want <= dp[i + 1] if i + 1 < l else False:
                dp[i] = want
                return tuple(dp)
        return None
    if kind == liftmod.INEQ_LE_SPECIAL:
        for i in range(l - 1):
            prev = dp[i - 1] if i else 0
            prev_h = hs[i - 1] if i else 0
            cand = ds[i] + 1
            if cand <= prev + (hs[i] - prev_h) and cand <= dp[i + 1] and cand >= prev:
                dp[i] = cand
                return tuple(dp)
        return None
    raise ValueError(kind)


def criterion_lifting_lemma(seed):
    rng = random.Random((seed, "lifting").__repr__())
    good = bad = 0
    while good < 500:
        field = F2 if good % 2 == 0 else F3
        prob = _random_lift_problem(rng, field)
        pm = liftmod.lift_subspace(prob)
        report = liftmod.verify_lift(prob, pm)
        if not report.ok:
            bad += 1
        good += 1
    rejected = 0
    kinds = [
        liftmod.INEQ_TOP,
        liftmod.INEQ_MONOTONE,
        liftmod.INEQ_STEP,
        liftmod.INEQ_LE_SPECIAL,
    ]
    attempts = 0
    while rejected < 100:
        attempts += 1
        if attempts > 10000:
            return False, "could not build 100 infeasible cases"
        field = F2 if attempts % 2 == 0 else F3
        prob = _random_lift_problem(rng, field)
        kind = kinds[rejected % len(kinds)]
        corrupted = _corrupt_targets(rng, prob, kind)
        if corrupted is None:
            continue
        try:
            liftmod.check_lift_feasible(
                liftmod.LiftProblem(prob.flag, prob.special, corrupted)
            )
            bad += 1
        except liftmod.LiftInfeasibleError as err:
            if err.constraint != kind:
                bad += 1
        rejected += 1
    return bad == 0, "feasible=%d infeasible=%d failures=%d" % (good, rejected, bad)


# --- criterion 7: isotropic lifting ------------------------------------------


def _symplectic_form(field, g):
    n = 2 * g
    rows = [[0] * n for _ in range(n)]
    for i in range(g):
        rows[i][g + i] = 1
        rows[g + i][i] = (-1) % field.p
    return Matrix.from_rows(field, rows, n)


def _pairing_value(field, Phi, u, w):
    return sum(
        field.row_get(u, i) * field.row_get(Phi.apply(w), i) for i in range(Phi.nrows)
    ) % field.p


def _random_isotropic_extension(rng, field, Phi, S, inside):
    """A vector of `inside`, orthogonal to S and outside S, or None."""
    n = S.n
    perp_rows = [Phi.transpose().apply(r) for r in S.rows]
    constraint = Matrix(field, len(perp_rows), n, perp_rows) if perp_rows else None
    cand = constraint.kernel().intersect(inside) if constraint else inside
    choices = [v for v in cand.vectors() if not S.contains_row(v)]
    if not choices:
        return None
    return choices[rng.randrange(len(choices))]


def _random_lagrangian(rng, field, Phi, g):
    n = 2 * g
    S = Subspace.zero(field, n)
    full = Subspace.full(field, n)
    while S.dim < g:
        v = _random_isotropic_extension(rng, field, Phi, S, full)
        S = Subspace(field, n, S.rows + (v,))
    return S


def _extend_isotropic_to(rng, field, Phi, cur, dim):
    n = cur.n
    while cur.dim < dim:
        v = _random_isotropic_extension(rng, field, Phi, cur, liftmod.perp(cur, Phi))
        if v is None:
            return None
        cur = Subspace(field, n, cur.rows + (v,))
    return cur


def _random_isotropic_flag(rng, field, Phi, g, l):
    """A flag M_1 <= ... <= M_l = full with M_i^perp = M_{l-i}.

    Members below the middle are random nested isotropics; when l is
    even the self-paired middle member is a Lagrangian; the upper half
    is forced by taking orthogonal complements.
    """
    n = 2 * g
    k0 = (l - 1) // 2
    lower = []
    cur = Subspace.zero(field, n)
    dims = sorted(rng.choices(range(0, g + 1), k=k0)) if k0 else []
    for d in dims:
        cur = _extend_isotropic_to(rng, field, Phi, cur, d)
        if cur is None:
            return None
        lower.append(cur)
    flag = list(lower)
    if l % 2 == 0:
        lag = _extend_isotropic_to(
            rng, field, Phi, lower[-1] if lower else Subspace.zero(field, n), g
        )
        if lag is None:
            return None
        flag.append(lag)
    for S in reversed(lower):
        flag.append(liftmod.perp(S, Phi))
    flag.append(Subspace.full(field, n))
    if len(flag) != l:
        return None
    for a, b in zip(flag, flag[1:]):
        if not b.contains(a):
            return None
    return tuple(flag)


def _random_polarized_targets(rng, flag, L, g):
    """Candidate targets honoring d'_l = g and the mirror constraint."""
    hs = [F.dim for F in flag]
    ds = [L.intersect(F).dim for F in flag]
    l = len(flag)
    dp = [None] * l
    dp[-1] = g
    for i in range(l - 1):
        mate = l - 2 - i
        if dp[i] is not None:
            continue
        lo = dp[i - 1] if i and dp[i - 1] is not None else 0
        choices = []
        for v in range(lo, min(ds[i], g) + 1):
            mv = g - hs[i] + v
            if mate == i and mv != v:
                continue
            if not 0 <= mv <= ds[mate]:
                continue
            choices.append(v)
        if not choices:
            return None
        v = choices[rng.randrange(len(choices))]
        dp[i] = v
        dp[mate] = g - hs[i] + v
    if any(v is None for v in dp):
        return None
    return tuple(dp)


def criterion_isotropic(seed):
    rng = random.Random((seed, "isotropic").__repr__())
    done = bad = attempts = 0
    while done < 200:
        attempts += 1
        if attempts > 20000:
            return False, "could not build 200 symplectic cases"
        field = F2 if attempts % 2 == 0 else F3
        g = rng.randint(1, 2)
        Phi = _symplectic_form(field, g)
        l = rng.randint(2, 4)
        flag = _random_isotropic_flag(rng, field, Phi, g, l)
        if flag is None:
            continue
        L = _random_lagrangian(rng, field, Phi, g)
        targets = _random_polarized_targets(rng, flag, L, g)
        if targets is None:
            continue
        prob = liftmod.LiftProblem(flag, L, targets, pairing=Phi)
        try:
            liftmod.check_isotropic_feasible(prob)
        except liftmod.LiftInfeasibleError:
            continue
        try:
            pm = liftmod.lift_isotropic(prob)
        except liftmod.LiftConstructionError:
            bad += 1
            done += 1
            continue
        report = liftmod.verify_lift(prob, pm)
        if not (report.ok and report.gram_zero):
            bad += 1
        done += 1
    return bad == 0, "instances=%d failures=%d" % (done, bad)


# --- criterion 8: the stratification engine -----------------------------------


def criterion_strat_engine():
    ordered = refused = bad = 0
    for h in (1, 2):
        for mu in _sorted_mus(h):
            pts = e3mod.enum_Yadm(h, mu)
            if not pts:
                continue
            for y1 in pts:
                for y2 in pts:
                    if leq(y2, y1):
                        try:
                            res = liftmod.degenerate_step(y1, y2, F2)
                            if res.generic != y2:
                                bad += 1
                        except Exception:
                            bad += 1
                        ordered += 1
                    else:
                        try:
                            liftmod.degenerate_step(y1, y2, F2)
                            bad += 1
                        except liftmod.StratOrderError:
                            refused += 1
                        except Exception:
                            bad += 1
    pol = e3mod.enum_Ypol(1)
    for y1 in pol:
        for y2 in pol:
            if leq(y2, y1):
                try:
                    res = liftmod.degenerate_step(y1, y2, F2, polarized=True)
                    if res.generic != y2:
                        bad += 1
                except Exception:
                    bad += 1
                ordered += 1
            else:
                try:
                    liftmod.degenerate_step(y1, y2, F2, polarized=True)
                    bad += 1
                except liftmod.StratOrderError:
                    refused += 1
                except Exception:
                    bad += 1
    # closure consistency: every Hasse covering pair degenerates (h <= 2)
    covers = 0
    for h in (1, 2):
        for mu in _sorted_mus(h):
            pts = e3mod.enum_Yadm(h, mu)
            if not pts:
                continue
            poset = StrataPoset(pts)
            for lo, hi in poset.hasse():
                res = liftmod.degenerate_step(hi, lo, F2)
                if res.generic != lo:
                    bad += 1
                covers += 1
    return bad == 0, "ordered=%d refused=%d covers=%d failures=%d" % (
        ordered,
        refused,
        covers,
        bad,
    )


# --- the battery --------------------------------------------------------------


def run_all(max_dim=5, seed=7):
    """Run criteria 1-8; returns the list of CriterionResult."""
    return [
        _timed("criterion-1-dominance", lambda: criterion_dominance(seed)),
        _timed("criterion-2-hodge-identity", lambda: criterion_hodge_identity()),
        _timed("criterion-3-pr-existence", lambda: criterion_pr_existence(max_dim)),
        _timed("criterion-4-bijection", lambda: criterion_bijection(max_dim)),
        _timed("criterion-5-filtration-dominance", lambda: criterion_filtration_dominance(seed)),
        _timed("criterion-6-lifting-lemma", lambda: criterion_lifting_lemma(seed)),
        _timed("criterion-7-isotropic", lambda: criterion_isotropic(seed)),
        _timed("criterion-8-stratification", lambda: criterion_strat_engine()),
    ]
