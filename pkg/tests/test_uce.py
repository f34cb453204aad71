from secalg.coeffs import CoeffK
from secalg.kahler import DiffClass
from secalg.ring import RingElem, RingParams, p_laurent
from secalg.uce import (
    CurrentElem,
    SL2Elem,
    UCEElem,
    formula_vs_oracle,
    killing,
    lie_axiom_check,
    sl2_bracket,
    uce_bracket_formula,
    uce_bracket_oracle,
)

P32 = RingParams(3, 2)


def cur(gen, t, l, params=P32):
    return UCEElem(CurrentElem.monomial(params, gen, t, l))


def test_sl2_bracket_and_killing():
    e, h, f = (SL2Elem.gen(g) for g in "ehf")
    assert sl2_bracket(e, f) == h
    assert sl2_bracket(h, e).e_coef == CoeffK.from_int(2)
    assert sl2_bracket(h, f).f_coef == CoeffK.from_int(-2)
    assert sl2_bracket(h, h) == SL2Elem(CoeffK.zero(), CoeffK.zero(), CoeffK.zero())
    assert sl2_bracket(e, e).h_coef.is_zero()
    assert killing(e, f).is_one() and killing(f, e).is_one()
    assert killing(h, h) == CoeffK.from_int(2)
    assert killing(e, h).is_zero()


def test_oracle_bracket_loop_cocycle():
    # [e (x) t, f (x) t^-1] = h (x) 1 - w0
    b = uce_bracket_oracle(cur("e", 1, 0), cur("f", -1, 0))
    assert b.current == CurrentElem.monomial(P32, "h", 0, 0)
    assert b.central == DiffClass(P32, omega0=CoeffK.from_int(-1))
    # [e (x) 1, f (x) 1] = h (x) 1
    b = uce_bracket_oracle(cur("e", 0, 0), cur("f", 0, 0))
    assert b.current == CurrentElem.monomial(P32, "h", 0, 0)
    assert b.central.is_zero()
    # sector-0 restriction: central of [e x t^i, f x t^j] = j delta_{i+j,0} w0
    for i in range(-3, 4):
        for j in range(-3, 4):
            b = uce_bracket_oracle(cur("e", i, 0), cur("f", j, 0))
            expected = (
                DiffClass(P32, omega0=CoeffK.from_int(j)) if i + j == 0
                else DiffClass.zero(P32)
            )
            assert b.central == expected


def test_oracle_bracket_type_ii_pair():
    # [e (x) u, f (x) u^2] = h (x) p(t); the central class (2/3) d(p) is exact
    b = uce_bracket_oracle(cur("e", 0, 1), cur("f", 0, 2))
    assert b.current == CurrentElem(P32, {"h": RingElem(P32, {0: p_laurent(P32)})})
    assert b.central.is_zero()


def test_central_elements_are_central():
    center = UCEElem(
        CurrentElem.zero(P32), DiffClass(P32, omega0=CoeffK.one(),
                                         odd={(1, 2): CoeffK.c()})
    )
    x = cur("e", 2, 1)
    assert uce_bracket_oracle(x, center).is_zero()
    assert uce_bracket_oracle(center, x).is_zero()


def test_formula_type_i_example_pair():
    """The printed Type I central coefficient j disagrees with the oracle
    on the worked pair i=0, l1=l2=1, j=2: the formula yields twice the
    oracle class (documented audit finding)."""
    A, B = cur("e", 0, 1), cur("f", 2, 1)
    formula = uce_bracket_formula(A, B)
    oracle = uce_bracket_oracle(A, B)
    assert formula.current == oracle.current
    assert formula.central == oracle.central.scale(CoeffK.from_int(2))
    assert formula.central != oracle.central


def test_formula_type_ii_example_pair():
    # [e x t u, f x t u^2]: printed central j(i+j) w0 = 2 w0; oracle gives 0
    A, B = cur("e", 1, 1), cur("f", 1, 2)
    formula = uce_bracket_formula(A, B)
    oracle = uce_bracket_oracle(A, B)
    assert formula.central == DiffClass(P32, omega0=CoeffK.from_int(2))
    assert oracle.central.is_zero()
    assert formula.current == oracle.current


def test_formula_vs_oracle_pass_pattern():
    rep = formula_vs_oracle(P32, exp_bound=2)
    assert all(e["current_match"] for e in rep)
    for e in rep:
        p = e["pair"]
        if e["type"] == "I" and p["l2"] * (p["i"] + p["j"]) == 0:
            assert e["central_match"], e


def test_lie_axioms_small_grid():
    rep = lie_axiom_check(P32, exp_bound=2, direct_exp_bound=1)
    assert rep["ok"], {k: v for k, v in rep.items() if v and k != "counts"}
    assert rep["counts"]["antisymmetry_pairs"] > 0
    assert rep["counts"]["jacobi_direct_triples"] > 0
