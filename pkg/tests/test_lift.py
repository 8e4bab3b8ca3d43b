"""Polynomial flags, the lifting lemma, its isotropic variant, degeneration."""

import pytest

from prflags.gf import F2, F3, Matrix, Subspace
from prflags.e3 import enum_Yadm, enum_Ypol
from prflags.lift import (
    INEQ_LE_SPECIAL,
    INEQ_MONOTONE,
    INEQ_STEP,
    INEQ_TOP,
    POL_LBAR,
    POL_PERP,
    POL_TOP,
    Degeneration,
    LiftInfeasibleError,
    LiftProblem,
    PolyMatrix,
    PolyModule,
    StratOrderError,
    check_isotropic_feasible,
    check_lift_feasible,
    degenerate_step,
    generic_rank,
    lift_isotropic,
    lift_subspace,
    pconst,
    pdivmod,
    pgcd,
    pmul,
    perp,
    poly_bilinear,
    polarized_normal_form,
    standard_symplectic,
    verify_lift,
)


def test_poly_arithmetic():
    assert pmul((1, 1), (1, 1), 2) == (1, 0, 1)
    assert pdivmod((1, 0, 1), (1, 1), 2) == ((1, 1), ())
    assert pdivmod((1, 0, 1), (1, 1), 3) == ((2, 1), (2,))
    assert pgcd((1, 0, 1), (1, 1), 2) == (1, 1)
    assert pgcd((2,), (0, 1), 3) == (1,)


def test_generic_rank_examples():
    const = PolyMatrix.from_const(F2, [[1, 0], [1, 1]])
    assert generic_rank(const) == 2
    diag = PolyMatrix(F2, 2, [[(0, 1), ()], [(), (1,)]])
    assert generic_rank(diag) == 2
    assert diag.eval0_subspace().dim == 1
    zero = PolyMatrix(F2, 3, [[(), (), ()]])
    assert generic_rank(zero) == 0
    # a genuinely rational-function-rank case over F_3
    A = PolyMatrix(F3, 2, [[(1,), (0, 1)], [(0, 1), (0, 0, 1)]])
    assert generic_rank(A) == 1  # second row = X * first row


def test_poly_module_saturation():
    M = PolyModule.from_rows(F2, 2, [[(0, 1), ()]])
    assert M.basis == (((1,), ()),)
    M2 = PolyModule.from_rows(F2, 2, [[(1,), (0, 1)], [(0, 1), (1,)]])
    assert M2.rank == 2
    assert M2.fiber().dim == 2
    # (1+X) * (1, X) generates the same generic line; saturation recovers it
    M3 = PolyModule.from_rows(F2, 2, [[(1,), (0, 1)], [(1, 1), (0, 1, 1)]])
    assert M3.rank == 1
    assert M3.basis == (((1,), (0, 1)),)
    assert M3 == PolyModule.from_rows(F2, 2, [[(1,), (0, 1)]])


def test_poly_module_operations():
    T = Matrix.from_rows(F2, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    W = PolyModule.constant(Subspace.span(F2, 3, [[1, 0, 0]]))
    pre = W.preimage_const(T)
    assert pre.rank == 2
    assert pre.fiber() == Subspace.span(F2, 3, [[1, 0, 0], [0, 1, 0]])
    inter = pre.intersect(PolyModule.constant(Subspace.span(F2, 3, [[0, 1, 0], [0, 0, 1]])))
    assert inter.rank == 1
    total = W.sum(pre)
    assert total.rank == 2


def test_lift_trivial_no_deformation():
    flag = (Subspace.span(F2, 2, [[1, 0]]), Subspace.full(F2, 2))
    L = Subspace.span(F2, 2, [[1, 0]])
    prob = LiftProblem(flag, L, (1, 1))
    pm = lift_subspace(prob)
    assert pm.max_degree() == 0
    assert verify_lift(prob, pm).ok


def test_lift_hand_derived_case():
    # l=2, h=(1,2), Lbar=span{e1}, d=(1,1), d'=(0,1): basis {e1 + X e2}
    flag = (Subspace.span(F2, 2, [[1, 0]]), Subspace.full(F2, 2))
    L = Subspace.span(F2, 2, [[1, 0]])
    prob = LiftProblem(flag, L, (0, 1))
    pm = lift_subspace(prob)
    assert pm.rows == (((1,), (0, 1)),)
    report = verify_lift(prob, pm)
    assert report.ok
    assert report.generic_dims == (0, 1)


def test_lift_feasibility_names():
    flag = (
        Subspace.span(F2, 3, [[1, 0, 0]]),
        Subspace.span(F2, 3, [[1, 0, 0], [0, 1, 0]]),
        Subspace.full(F2, 3),
    )
    L12 = Subspace.span(F2, 3, [[1, 0, 0], [0, 1, 0]])  # dims (1, 2, 2)
    L13 = Subspace.span(F2, 3, [[1, 0, 0], [0, 0, 1]])  # dims (1, 1, 2)

    with pytest.raises(LiftInfeasibleError) as err:
        check_lift_feasible(LiftProblem(flag, L12, (1, 2, 1)))
    assert err.value.constraint == INEQ_TOP
    with pytest.raises(LiftInfeasibleError) as err:
        check_lift_feasible(LiftProblem(flag, L12, (1, 0, 2)))
    assert err.value.constraint == INEQ_MONOTONE
    with pytest.raises(LiftInfeasibleError) as err:
        check_lift_feasible(LiftProblem(flag, L13, (0, 2, 2)))
    assert err.value.constraint == INEQ_STEP
    with pytest.raises(LiftInfeasibleError) as err:
        check_lift_feasible(LiftProblem(flag, L13, (1, 2, 2)))
    assert err.value.constraint == INEQ_LE_SPECIAL


def test_lift_longer_flag_with_verifier():
    flag = (
        Subspace.span(F3, 4, [[1, 0, 0, 0]]),
        Subspace.span(F3, 4, [[1, 0, 0, 0], [0, 1, 0, 0]]),
        Subspace.span(F3, 4, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]),
        Subspace.full(F3, 4),
    )
    L = Subspace.span(F3, 4, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    # drop the two lower intersections as far as the step bounds allow
    prob = LiftProblem(flag, L, (0, 1, 2, 3))
    pm = lift_subspace(prob)
    assert verify_lift(prob, pm).ok


def test_isotropic_trivial_and_hand_case():
    # g=2, hyperbolic F_2^4: e1,e2,f1,f2 with <e_i, f_i> = 1
    Phi = Matrix.from_rows(
        F2,
        [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]],
    )
    M1 = Subspace.span(F2, 4, [[1, 0, 0, 0], [0, 1, 0, 0]])  # Lagrangian
    flag = (M1, Subspace.full(F2, 4))
    # d' = d: constant Lagrangian lift
    L = M1
    prob = LiftProblem(flag, L, (2, 2), pairing=Phi)
    pm = lift_isotropic(prob)
    assert pm.max_degree() == 0
    rep = verify_lift(prob, pm)
    assert rep.ok and rep.gram_zero

    # Lbar = span{e1, f2}, drop the M1-intersection from 1 to 0
    L = Subspace.span(F2, 4, [[1, 0, 0, 0], [0, 0, 0, 1]])
    prob = LiftProblem(flag, L, (0, 2), pairing=Phi)
    pm = lift_isotropic(prob)
    rep = verify_lift(prob, pm)
    assert rep.ok and rep.gram_zero
    assert pm.max_degree() == 1


def test_isotropic_feasibility_names():
    Phi = Matrix.from_rows(
        F2,
        [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]],
    )
    M1 = Subspace.span(F2, 4, [[1, 0, 0, 0], [0, 1, 0, 0]])
    flag = (M1, Subspace.full(F2, 4))
    L = M1
    with pytest.raises(LiftInfeasibleError) as err:
        check_isotropic_feasible(LiftProblem(flag, L, (2, 2)))
    # no pairing at all
    assert err.value.constraint == "pairing is perfect"
    with pytest.raises(LiftInfeasibleError) as err:
        check_isotropic_feasible(LiftProblem(flag, L, (1, 1), pairing=Phi))
    assert err.value.constraint == POL_TOP
    not_lagrangian = Subspace.span(F2, 4, [[1, 0, 0, 0], [0, 0, 1, 0]])
    with pytest.raises(LiftInfeasibleError) as err:
        check_isotropic_feasible(LiftProblem(flag, not_lagrangian, (1, 2), pairing=Phi))
    assert err.value.constraint == POL_LBAR
    bad_flag = (Subspace.span(F2, 4, [[1, 0, 0, 0]]), Subspace.full(F2, 4))
    with pytest.raises(LiftInfeasibleError) as err:
        check_isotropic_feasible(LiftProblem(bad_flag, L, (1, 2), pairing=Phi))
    assert err.value.constraint == POL_PERP


def test_perp():
    Phi = Matrix.from_rows(
        F2,
        [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]],
    )
    e1 = Subspace.span(F2, 4, [[1, 0, 0, 0]])
    assert perp(e1, Phi) == Subspace.span(
        F2, 4, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
    )
    assert perp(Subspace.zero(F2, 4), Phi).dim == 4


def test_standard_symplectic_compatibilities():
    for g in (1, 2):
        T, Phi = standard_symplectic(F2, g)
        n = 6 * g
        assert Phi.rank() == n
        for i in range(n):
            assert Phi.entry(i, i) == 0  # alternating
        # T is self-adjoint for the form
        def as_polys(packed):
            return [pconst(c, 2) for c in F2.unpack(packed, n)]

        for i in range(n):
            for j in range(n):
                u, w = F2.unit_row(n, i), F2.unit_row(n, j)
                assert poly_bilinear(as_polys(T.apply(u)), as_polys(w), Phi) == \
                    poly_bilinear(as_polys(u), as_polys(T.apply(w)), Phi)


def test_polarized_normal_forms_g1():
    for y in enum_Ypol(1):
        T, Phi, w1, w2, w = polarized_normal_form(y, F2)
        assert w.dim == 3 and w1.dim == 1 and w2.dim == 2
        assert perp(w1, Phi).contains(w1)
        assert perp(w, Phi) == w  # maximal isotropic
        from prflags.gf import preimage

        assert perp(w1, Phi) == preimage(T.power(2), w1)
        assert perp(w2, Phi) == preimage(T, w2)


def test_degenerate_step_worked_example():
    pts = enum_Yadm(2, (1, 1, 1))
    y_from = next(
        p for p in pts if p.delta == (2, 1, 0) and p.alpha[0] == 2 and p.beta[0] == 2
    )
    y_to = next(p for p in pts if p.delta == (1, 1, 1))
    res = degenerate_step(y_from, y_to, F2)
    assert isinstance(res, Degeneration)
    assert res.generic == y_to
    assert res.omega.eval0_subspace().dim == 3
    data = res.to_json_dict()
    assert data["to"] == y_to.to_json_dict()


def test_degenerate_step_trivial_is_constant():
    pts = enum_Yadm(2, (1, 1, 1))
    y = next(p for p in pts if p.delta == (2, 1, 0) and p.alpha[0] == 2 and p.beta[0] == 2)
    res = degenerate_step(y, y, F2)
    assert res.omega.max_degree() <= 0
    assert res.generic == y


def test_degenerate_step_refuses_incomparable():
    pts = enum_Yadm(2, (1, 1, 1))
    m1 = next(p for p in pts if p.alpha[0] == 2 and p.beta[0] == 1)
    m2 = next(p for p in pts if p.alpha[0] == 1 and p.beta[0] == 2)
    with pytest.raises(StratOrderError):
        degenerate_step(m1, m2, F2)
    bottom = next(p for p in pts if p.delta == (1, 1, 1))
    with pytest.raises(StratOrderError):
        degenerate_step(bottom, m1, F2)  # wrong direction


def test_degenerate_step_polarized_g1():
    pol = enum_Ypol(1)
    from prflags.strat import leq

    _, Phi = standard_symplectic(F2, 1)
    for y1 in pol:
        for y2 in pol:
            if leq(y2, y1):
                res = degenerate_step(y1, y2, F2, polarized=True)
                assert res.generic == y2
                gram = res.omega.gram(Phi)
                assert all(not e for r in gram.rows for e in r)
