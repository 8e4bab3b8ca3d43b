"""Pappas-Rapoport data: validation, existence, greedy construction, oracle.

A PR datum of type mu = (d_1, ..., d_e) on a k[T]/T^e-module M is a
flag 0 = M_0 <= M_1 <= ... <= M_e = M with T M_i <= M_{i-1} and
dim M_i/M_{i-1} = d_i.  One exists iff Hdg(M) dominates P(mu); the
constructive direction builds the flag greedily so that every
intersection with the T-power flag achieves the extreme value

    alpha_i^j = min over l of (delta_{j+1} + ... + delta_{j+l})
                             + (d_{l+1} + ... + d_i).
"""

from __future__ import annotations

from dataclasses import dataclass

from .gf import Subspace, preimage, subspaces_between
from .polygon import Polygon
from .tmodule import ConcreteModule, delta_vector, hodge_polygon, jordan_type


class PRError(ValueError):
    pass


class InfeasiblePRError(PRError):
    """The requested PR type is not dominated by the Hodge polygon."""

    def __init__(self, prefix_index, lhs, rhs):
        super().__init__(
            "prefix %d fails: d_1+...+d_%d = %d > %d = delta_1+...+delta_%d"
            % (prefix_index, prefix_index, lhs, rhs, prefix_index)
        )
        self.prefix_index = prefix_index


class InfeasibleTargetError(PRError):
    """subspace_in_flag received unattainable intersection targets."""

    def __init__(self, constraint, detail=""):
        msg = "infeasible targets: %s" % constraint
        if detail:
            msg += " (%s)" % detail
        super().__init__(msg)
        self.constraint = constraint


@dataclass(frozen=True)
class PRDatum:
    """A flag 0 = M_0 <= ... <= M_e = M with T M_i <= M_{i-1}."""

    module: ConcreteModule
    flag: tuple

    def __post_init__(self):
        object.__setattr__(self, "flag", tuple(self.flag))
        if len(self.flag) != self.module.e + 1:
            raise PRError("flag must have e+1 = %d members" % (self.module.e + 1))

    @property
    def mu(self):
        dims = [s.dim for s in self.flag]
        return tuple(b - a for a, b in zip(dims, dims[1:]))

    def to_json_dict(self):
        return {
            "e": self.module.e,
            "dim": self.module.dim,
            "T": [list(r) for r in self.module.op.coord_rows()],
            "flag": [[list(v) for v in s.basis_coords()] for s in self.flag],
        }


@dataclass(frozen=True)
class PRValidation:
    ok: bool
    violation: str | None = None
    level: int | None = None

    def __bool__(self):
        return self.ok


def validate_pr(D, mu=None):
    """Check the three defining bullets; report the first violation."""
    M = D.module
    n = M.dim
    flag = D.flag
    if not flag[0].is_zero():
        return PRValidation(False, "M_0 != 0", 0)
    if flag[-1].dim != n:
        return PRValidation(False, "M_e != M", M.e)
    for i in range(1, len(flag)):
        if not flag[i].contains(flag[i - 1]):
            return PRValidation(False, "M_%d not inside M_%d" % (i - 1, i), i)
    for i in range(1, len(flag)):
        for r in flag[i].rows:
            if not flag[i - 1].contains_row(M.op.apply(r)):
                return PRValidation(False, "T M_%d not inside M_%d" % (i, i - 1), i)
    if mu is not None:
        mu = tuple(mu)
        if len(mu) != M.e:
            return PRValidation(False, "type has wrong length", None)
        for i in range(1, len(flag)):
            jump = flag[i].dim - flag[i - 1].dim
            if jump != mu[i - 1]:
                return PRValidation(
                    False,
                    "dim M_%d/M_%d = %d, expected d_%d = %d" % (i, i - 1, jump, i, mu[i - 1]),
                    i,
                )
    return PRValidation(True)


def _hodge_context(J, mu):
    """Common domain endpoint for comparing Hdg(M) with P(mu)."""
    nonzero = sum(1 for a in J.parts if a)
    return max(1, nonzero, max(mu, default=0))


def pr_exists(J_or_M, mu, field=None):
    """Existence of a PR datum of type mu (Hodge-dominance criterion)."""
    if isinstance(J_or_M, ConcreteModule):
        J = jordan_type(J_or_M)
    else:
        J = J_or_M
    mu = tuple(int(d) for d in mu)
    if len(mu) != J.e:
        raise PRError("type length %d != e = %d" % (len(mu), J.e))
    if any(d < 0 for d in mu):
        raise PRError("negative graded dimension")
    if sum(mu) != J.dim:
        return False
    h = _hodge_context(J, mu)
    return hodge_polygon(J, h=h).dominates(Polygon.from_d(h, mu, J.e))


def alpha_table(delta, mu_sorted):
    """alpha[i][j] = forced dim(M_i  T^j M) for the greedy flag, 0<=i,j<=e."""
    e = len(mu_sorted)
    dsum = [0]
    for d in mu_sorted:
        dsum.append(dsum[-1] + d)

    def delta_at(t):
        return delta[t - 1] if 1 <= t <= e else 0

    table = []
    for i in range(e + 1):
        row = []
        for j in range(e + 1):
            best = None
            for l in range(i + 1):
                val = sum(delta_at(j + t) for t in range(1, l + 1)) + (dsum[i] - dsum[l])
                if best is None or val < best:
                    best = val
            row.append(best)
        table.append(row)
    return table


def subspace_in_flag(flag, floor, target_dim, target_intersections):
    """A subspace S with floor <= S <= flag top and dim(S  F_j) as targeted.

    `flag` is an ascending chain of subspaces whose last member bounds S;
    `target_intersections` aligns with the flag members and must end with
    `target_dim`.  Vectors are added greedily from the smallest flag
    member outwards, always avoiding the previous member, so settled
    intersection counts never move again.
    """
    spaces = list(flag)
    targets = [int(t) for t in target_intersections]
    if len(targets) != len(spaces):
        raise InfeasibleTargetError("one target per flag member required")
    if targets[-1] != target_dim:
        raise InfeasibleTargetError(
            "top target must equal target_dim",
            "%d != %d" % (targets[-1], target_dim),
        )
    top = spaces[-1]
    if not top.contains(floor):
        raise InfeasibleTargetError("floor not inside flag top")
    # feasibility: monotone, step-bounded, floor-forced growth
    prev_space = None
    prev_target = None
    prev_floor_cut = None
    for space, t in zip(spaces, targets):
        floor_cut = floor.intersect(space).dim
        if t < floor_cut:
            raise InfeasibleTargetError(
                "target below floor",
                "target %d < dim(floor  F) = %d" % (t, floor_cut),
            )
        if t > space.dim:
            raise InfeasibleTargetError(
                "target exceeds flag member dimension",
                "target %d > %d" % (t, space.dim),
            )
        if prev_space is not None:
            if t < prev_target:
                raise InfeasibleTargetError("non-monotone targets")
            if t - prev_target > space.dim - prev_space.dim:
                raise InfeasibleTargetError(
                    "step exceeds flag step",
                    "%d - %d > %d - %d" % (t, prev_target, space.dim, prev_space.dim),
                )
            if t - prev_target < floor_cut - prev_floor_cut:
                raise InfeasibleTargetError(
                    "floor forces a larger step",
                    "%d - %d < %d - %d" % (t, prev_target, floor_cut, prev_floor_cut),
                )
        prev_space, prev_target, prev_floor_cut = space, t, floor_cut

    S = floor
    f = floor.field
    prev = None
    for space, t in zip(spaces, targets):
        need = t - S.intersect(space).dim
        assert need >= 0, "settled intersection overshot its target"
        avoid = S.sum(prev) if prev is not None else S
        while need > 0:
            picked = None
            for r in space.rows:
                if not avoid.contains_row(r):
                    picked = r
                    break
            if picked is None:
                raise InfeasibleTargetError(
                    "flag member exhausted", "no vector of F left outside S + F_prev"
                )
            S = Subspace(f, S.n, S.rows + (picked,))
            avoid = Subspace(f, S.n, avoid.rows + (picked,))
            need -= 1
        prev = space
    assert S.dim == target_dim
    return S


def pr_construct(M, mu):
    """A PR datum of type mu built greedily (Hodge dominance required).

    For sorted mu the constructed flag hits every alpha_i^j exactly;
    unsorted types are produced from the sorted flag by exchange moves.
    """
    mu = tuple(int(d) for d in mu)
    e = M.e
    if len(mu) != e:
        raise PRError("type length %d != e = %d" % (len(mu), e))
    delta = delta_vector(M).entries
    mu_sorted = tuple(sorted(mu, reverse=True))
    if sum(mu) != M.dim:
        raise InfeasiblePRError(e, sum(mu), M.dim)
    dacc = sacc = 0
    for i in range(e):
        dacc += mu_sorted[i]
        sacc += delta[i]
        if dacc > sacc:
            raise InfeasiblePRError(i + 1, dacc, sacc)

    alpha = alpha_table(delta, mu_sorted)
    power_flags = []
    full = Subspace.full(M.field, M.dim)
    for j in range(e + 1):
        Tj = M.op.power(j)
        power_flags.append(Subspace(M.field, M.dim, [Tj.apply(r) for r in full.rows]))

    flag = [Subspace.zero(M.field, M.dim)]
    for i in range(1, e + 1):
        U = preimage(M.op, flag[-1])
        members = [power_flags[j].intersect(U) for j in range(e, -1, -1)]
        targets = [alpha[i][j] for j in range(e, -1, -1)]
        nxt = subspace_in_flag(members, flag[-1], alpha[i][0], targets)
        flag.append(nxt)
    datum = PRDatum(M, flag)
    assert validate_pr(datum, mu_sorted)

    # exchange back to the caller's ordering
    order = list(mu_sorted)
    swaps = []
    work = list(mu)
    for i in range(len(work)):
        for j in range(len(work) - 1 - i):
            if work[j] < work[j + 1]:
                work[j], work[j + 1] = work[j + 1], work[j]
                swaps.append(j)
    for j in reversed(swaps):
        if order[j] != order[j + 1]:
            datum = pr_permute(datum, j + 1)
        order[j], order[j + 1] = order[j + 1], order[j]
    assert validate_pr(datum, mu)
    return datum


def pr_permute(D, i):
    """Exchange d_i and d_{i+1} of the datum (1-indexed level i)."""
    M = D.module
    e = M.e
    if not 1 <= i <= e - 1:
        raise PRError("swap level %d outside [1, %d]" % (i, e - 1))
    lower = D.flag[i - 1]
    upper = D.flag[i + 1]
    d_next = upper.dim - D.flag[i].dim
    floor = lower.sum(
        Subspace(M.field, M.dim, [M.op.apply(r) for r in upper.rows])
    )
    ceiling = upper.intersect(preimage(M.op, lower))
    target = lower.dim + d_next
    mid = subspace_in_flag([ceiling], floor, target, [target])
    flag = list(D.flag)
    flag[i] = mid
    out = PRDatum(M, flag)
    assert validate_pr(out)
    return out


def pr_oracle_exists(M, mu, cap=None):
    """Exhaustive search for a PR datum of type mu (depth-first, pruned).

    Independent of the Hodge-dominance criterion: enumerates nested
    chains M_1 <= ... <= M_{e-1} with the defining constraints only.
    """
    from .gf import DEFAULT_ENUM_CAP

    if cap is None:
        cap = DEFAULT_ENUM_CAP
    mu = tuple(int(d) for d in mu)
    e = M.e
    if len(mu) != e:
        raise PRError("type length %d != e = %d" % (len(mu), e))
    if any(d < 0 for d in mu):
        return False
    if sum(mu) != M.dim:
        return False
    dims = [0]
    for d in mu:
        dims.append(dims[-1] + d)

    def search(level, current):
        # current = M_level; the top member M_e = M is forced, so at
        # level e-1 only T M <= M_{e-1} remains to check.
        if level == e - 1:
            return preimage(M.op, current).dim == M.dim
        ceiling = preimage(M.op, current)
        want = dims[level + 1]
        if want > ceiling.dim:
            return False
        for cand in subspaces_between(current, ceiling, want, cap=cap):
            if search(level + 1, cand):
                return True
        return False

    return search(0, Subspace.zero(M.field, M.dim))


def pr_all_data(M, mu, cap=None):
    """Every PR datum of type mu on M (for the isomorphism oracle)."""
    from .gf import DEFAULT_ENUM_CAP

    if cap is None:
        cap = DEFAULT_ENUM_CAP
    mu = tuple(int(d) for d in mu)
    e = M.e
    if sum(mu) != M.dim or any(d < 0 for d in mu):
        return
    full = Subspace.full(M.field, M.dim)
    dims = [0]
    for d in mu:
        dims.append(dims[-1] + d)

    def search(level, chain):
        current = chain[-1]
        if level == e - 1:
            if preimage(M.op, current).dim == M.dim:
                yield PRDatum(M, tuple(chain) + (full,))
            return
        ceiling = preimage(M.op, current)
        want = dims[level + 1]
        if want > ceiling.dim:
            return
        for cand in subspaces_between(current, ceiling, want, cap=cap):
            yield from search(level + 1, chain + [cand])

    yield from search(0, [Subspace.zero(M.field, M.dim)])


def check_hdg_filt(M, N, i):
    """Dominance Hdg(M) >= Hdg(N) * Hdg(M/N) for a T^i-torsion piece N.

    Preconditions: N is T-stable, T^i N = 0 and T^{e-i} M <= N; the
    verdict must be True for every such triple.  At the degenerate ends
    (i = 0 forces N = 0, i = e forces N = M) the star factor is empty
    and the claim collapses to Hdg(M) >= Hdg(M).
    """
    from .tmodule import restrict_module, quotient_module
    from .tmodule import torsion_flag, power_image

    e = M.e
    if not 0 <= i <= e:
        raise PRError("index %d outside [0, %d]" % (i, e))
    if not all(N.contains_row(M.op.apply(r)) for r in N.rows):
        raise PRError("N is not T-stable")
    if not torsion_flag(M, i).contains(N):
        raise PRError("T^%d N != 0" % i)
    if not N.contains(power_image(M, e - i)):
        raise PRError("T^%d M not inside N" % (e - i))
    if i == 0 or i == e:
        return True
    sub = restrict_module(M, N, e=i)
    quo = quotient_module(M, N, e=e - i)
    h = max(1, delta_vector(M).entries[0] if e else 1)
    big = hodge_polygon(M, h=h)
    left = hodge_polygon(sub, h=h)
    right = hodge_polygon(quo, h=h)
    return big.dominates(left.star(right))
