import random
from fractions import Fraction as F

from secalg.coeffs import PolyC
from secalg.families import (
    INDEX_RECONCILIATION_NOTE,
    FamilySpec,
    eval_family,
    eval_family_chain,
    family_table,
    reconcile_with_kahler,
    rescaling_check,
    sector_recurrence_value,
)
from secalg.ring import RingParams


def poly(d):
    return PolyC({e: F(v) for e, v in d.items()})


def spec(j, mp, r=2, l=1):
    return FamilySpec(l=l, j=j, m_prime=F(mp), r=r)


def test_initial_conditions():
    for j in range(1, 5):
        s = spec(j, 3)
        for jj in range(1, 5):
            expected = PolyC.const(1) if jj == j else PolyC.zero()
            assert eval_family(s, -jj) == expected


def test_printed_even_j_values():
    s = spec(2, 3)
    assert eval_family(s, 0) == poly({1: 1})                      # c
    assert eval_family(s, 2) == poly({2: F(8, 5), 0: F(-3, 5)})   # (8c^2-3)/5
    assert eval_family(s, 4) == poly({3: F(14, 5), 1: F(-9, 5)})  # (14c^3-9c)/5


def test_printed_rational_parameter_value():
    # the m' = 3/2 evaluation: P_2 = (10c^2 - 3)/7
    assert eval_family(spec(2, F(3, 2), l=2), 2) == poly({2: F(10, 7), 0: F(-3, 7)})


def test_printed_odd_j_values_at_odd_indices():
    s1, s3 = spec(1, 3), spec(3, 3)
    assert eval_family(s1, 1) == poly({1: F(10, 7)})
    assert eval_family(s1, 3) == poly({2: F(220, 91), 0: F(-63, 91)})
    assert eval_family(s3, 1) == poly({0: F(-3, 7)})
    assert eval_family(s3, 3) == poly({1: F(-66, 91)})
    # and they vanish at the even indices the printed table labels them by
    assert eval_family(s1, 0).is_zero() and eval_family(s1, 2).is_zero()
    assert "odd-j families vanish at even k" in INDEX_RECONCILIATION_NOTE


def test_j4_families_vanish():
    for mp in (F(3), F(3, 2), F(5, 3)):
        s = spec(4, mp)
        for k in range(0, 12):
            assert eval_family(s, k).is_zero()


def test_uniqueness_two_evaluators_agree():
    rng = random.Random(314)
    for _ in range(8):
        mp = F(rng.randint(1, 12), rng.randint(1, 4))
        if mp <= 0:
            continue
        j = rng.randint(1, 4)
        s = spec(j, mp)
        for k in range(-4, 61):
            assert eval_family(s, k) == eval_family_chain(s, k)


def test_parity_residue_classes():
    # the recurrence couples k, k-r, k-2r only: families are supported on
    # the residue class of -j mod r
    for j in range(1, 5):
        s = spec(j, 3)
        for k in range(0, 20):
            if (k - (-j)) % 2 != 0:
                assert eval_family(s, k).is_zero()


def test_degree_bound():
    # deg_c P_k <= floor(k/r) + 1 for k >= 0; the tighter stated value
    # floor(k/r) fails at even k (reported, not silently accepted)
    tight_violations = []
    for j in range(1, 5):
        s = spec(j, 3)
        for k in range(0, 24):
            p = eval_family(s, k)
            assert p.degree() <= k // 2 + 1
            if p.degree() > k // 2:
                tight_violations.append((j, k))
    assert tight_violations  # the stated tighter bound does fail


def test_rescaling_small():
    rep = rescaling_check(4, 2, k_max=20)
    assert all(e["equal"] for e in rep)
    # spot value: sector-2 recurrence at m=4 equals the m'=2 family
    lhs = sector_recurrence_value(4, 2, 2, 2, 8)
    rhs = eval_family(FamilySpec(l=2, j=2, m_prime=F(2), r=2), 8)
    assert lhs == rhs


def test_family_table_render():
    t = family_table(spec(2, 3), 4)
    md = t.to_markdown()
    assert "(8*c^2 - 3)/5" in md and "(14*c^3 - 9*c)/5" in md
    doc = t.to_json_dict()
    assert doc["spec"]["m_prime"] == "3"
    assert {"k": 0, "poly": "c"} in doc["values"]


def test_reconcile_with_kahler_reports_no_verbatim_match():
    """The oracle structure constants do not equal the family values at the
    candidate indices k-1, k, k+1 (parity alone forbids it); the
    reconciliation is a report, and this pins its documented outcome."""
    rep = reconcile_with_kahler(RingParams(3, 2), 1, range(1, 5))
    assert all(not e["any_match"] for e in rep)
