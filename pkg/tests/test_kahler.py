import random
from fractions import Fraction as F

import pytest

from secalg.coeffs import CoeffK
from secalg.kahler import (
    DiffClass,
    DiffForm,
    PivotError,
    ReductionWindow,
    basis_dim,
    differential,
    eliminate_du,
    reduce_monomial_class,
    reduce_oracle,
    reduce_recurrence,
    structure_constants,
    verify_recurrence,
)
from secalg.ring import RingElem, RingParams, dp_laurent

P32 = RingParams(3, 2)
P22 = RingParams(2, 2)


def mono(params, coef, t, u):
    return RingElem.monomial(params, CoeffK.from_rat(coef), t, u)


def dt_form(params, elem):
    return DiffForm(elem, RingElem.zero(params))


def test_differential_examples():
    d = differential(mono(P32, 1, 3, 0))
    assert d.dt_part == mono(P32, 3, 2, 0) and d.du_part.is_zero()
    d = differential(mono(P32, 1, 0, 1))
    assert d.dt_part.is_zero() and d.du_part == mono(P32, 1, 0, 0)
    d = differential(mono(P32, 1, 2, 1))
    assert d.dt_part == mono(P32, 2, 1, 1)
    assert d.du_part == mono(P32, 1, 2, 0)


def test_eliminate_du_defining_relation():
    # u^2 du -> (1/3) p'(t) dt in sector 0
    form = DiffForm(RingElem.zero(P32), mono(P32, 1, 0, 2))
    terms = eliminate_du(form)
    got = {(n, l): v for n, l, v in terms}
    for e, a in dp_laurent(P32).items():
        assert got[(e + 1, 0)] == a * F(1, 3)


def test_eliminate_du_exactness_rule():
    # t^2 u^0 du == -2 t u dt (mod dA)
    form = DiffForm(RingElem.zero(P32), mono(P32, 1, 2, 0))
    assert eliminate_du(form) == [(2, 1, CoeffK.from_int(-2))]
    # u^0 du = d(u) is exact
    form = DiffForm(RingElem.zero(P32), mono(P32, 1, 0, 0))
    assert eliminate_du(form) == []


def test_reduce_basis_elements():
    # t^-1 dt is w0
    cls = reduce_oracle(dt_form(P32, mono(P32, 1, -1, 0)))
    assert cls.omega0.is_one() and not cls.odd
    # t^(n-1) dt for n != 0 is exact
    for n in (3, -2, 5):
        cls = reduce_oracle(dt_form(P32, mono(P32, 1, n - 1, 0)))
        assert cls.is_zero()
    # basis monomials map to unit vectors (idempotence)
    for l in (1, 2):
        for j in range(1, 5):
            cls = reduce_monomial_class(P32, -j, l)
            assert cls.omega0.is_zero()
            assert cls.odd == {(l, j): CoeffK.one()}


def test_reduce_linearity_randomized():
    rng = random.Random(5)
    for _ in range(6):
        a = mono(P32, F(rng.randint(-4, 4), rng.randint(1, 3)), rng.randint(-4, 4),
                 rng.randint(0, 2))
        b = mono(P32, F(rng.randint(-4, 4), rng.randint(1, 3)), rng.randint(-4, 4),
                 rng.randint(0, 2))
        fa, fb = dt_form(P32, a), dt_form(P32, b)
        fab = dt_form(P32, a + b)
        assert reduce_oracle(fab) == reduce_oracle(fa) + reduce_oracle(fb)


def test_reduce_exactness():
    rng = random.Random(6)
    for _ in range(8):
        elem = mono(P32, F(rng.randint(-4, 4), rng.randint(1, 3)),
                    rng.randint(-4, 4), rng.randint(0, 2))
        cls = reduce_oracle(differential(elem))
        assert cls.is_zero()


def test_basis_dims():
    assert basis_dim(P32) == 9
    assert basis_dim(P22) == 5
    assert basis_dim(RingParams(2, 3)) == 7
    assert basis_dim(RingParams(3, 3)) == 13


def test_window_invariant_checked():
    with pytest.raises(Exception):
        reduce_oracle(dt_form(P32, mono(P32, 1, 40, 1)),
                      ReductionWindow(-5, 5))


def test_stated_recurrence_vs_oracle():
    """Theorem check: the stated three-term recurrence coefficients
    (mn, 2c(mn+rl), mn+2rl) annihilate oracle classes only at n = 0; the
    corrected coefficients (mn, 2c(mn+r(m+l)), mn+2r(m+l)) hold for all n.
    This is the documented verification finding, pinned here."""
    for params in (P32, P22):
        for l in range(1, params.m):
            rep = verify_recurrence(params, l, range(-2, 6))
            for row in rep:
                assert row["corrected_holds"], row
                assert row["stated_holds"] == (row["n"] == 0), row


def test_reduce_recurrence_basis_and_flags():
    red = reduce_recurrence(-1, 1, P32)  # class t^-2 u dt, already basis
    assert red.cls == DiffClass(P32, odd={(1, 2): CoeffK.one()})
    assert red.instances == []
    # reducing t^0 u dt requires instances outside the stated range n >= 1
    red = reduce_recurrence(1, 1, P32)
    assert any(not inst.within_stated_range for inst in red.instances)


def test_reduce_recurrence_cross_check_disagrees():
    """The stated-recurrence fast path disagrees with the oracle on
    positive-exponent classes (documented discrepancy; the oracle is
    normative)."""
    red = reduce_recurrence(2, 1, P32)
    oracle = reduce_monomial_class(P32, 1, 1)
    assert red.cls != oracle


def test_reduce_recurrence_degenerate_pivot():
    # m=2, r=2, l=1: pivot mn + 2rl = 2n + 4 vanishes at instance n = -2
    with pytest.raises(PivotError):
        reduce_recurrence(2, 1, P22)


def test_structure_constants_parity():
    # contract requires k >= 1; basis unit-vector behavior is covered via
    # reduce_monomial_class above (t^(k-1) = t^(-j) needs k = 1 - j < 1)
    vec = structure_constants(1, 2, P32)
    assert set(vec) == {1, 2, 3, 4}
    # parity: class(t^1 u dt) expands over odd exponents only (j in {1, 3})
    assert vec[2].is_zero() and vec[4].is_zero()
    assert not vec[1].is_zero() and not vec[3].is_zero()


def test_structure_constants_djkm_row():
    vec = structure_constants(1, 1, P22)
    assert set(vec) == {1, 2, 3, 4}
    assert not all(v.is_zero() for v in vec.values())


def test_basis_dim_stabilizes_wider_grid():
    for m in (2, 3, 4):
        for r in (2, 3, 4):
            assert basis_dim(RingParams(m, r)) == 2 * r * (m - 1) + 1
