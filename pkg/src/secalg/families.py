"""Structure-constant polynomial families defined by a three-term recurrence.

For a positive rational step parameter m' and r >= 2, the family P^(l,j)_k
is the unique sequence of polynomials in c with

    (m'k + 2r) P_k = 2c (m'k + r) P_{k-r} - m'k P_{k-2r},      k >= 0,
    P_{-j} = 1,   P_{-s} = 0  for s in {1..2r}, s != j.

The sequence exists and is unique because the recurrence couples only one
residue class of k mod r at a time and the leading coefficient m'k + 2r is
positive for every k >= 0.  The sector-l families at integer m coincide with
the sector-1 families at the rational parameter m/l (rescaling identity);
``rescaling_check`` verifies this by running both recurrences independently.

The recurrence (not any closed form, and not the Kahler oracle) is the
normative definition here; agreement with oracle-reduced classes is a
verification *output*, produced by ``reconcile_with_kahler``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .coeffs import CoeffK, PolyC
from . import kahler
from .ring import RingParams

#: Documented indexing note for stated-table comparisons: families whose
#: nonzero initial condition sits at an odd offset -j have their nonzero
#: values at odd recurrence indices k (for r = 2), while the printed table
#: lists them under even column labels.  Reproduction tests therefore read
#: odd-j table entries at recurrence indices k = 1, 3, ...
INDEX_RECONCILIATION_NOTE = (
    "index reconciliation: odd-j families vanish at even k under the defining "
    "recurrence; printed even-indexed column labels for odd-j rows "
    "correspond to recurrence indices k = 1, 3, ... (reported, not guessed)"
)


@dataclass(frozen=True)
class FamilySpec:
    """Family label: sector label l, initial-condition slot j, parameter m', r."""

    l: int
    j: int
    m_prime: Fraction
    r: int

    def __post_init__(self):
        object.__setattr__(self, "m_prime", Fraction(self.m_prime))
        if self.l < 1:
            raise ValueError("sector label l must be >= 1")
        if not 1 <= self.j <= 2 * self.r:
            raise ValueError(f"j must lie in 1..{2*self.r}")
        if self.m_prime <= 0:
            raise ValueError("m' must be positive")
        if self.r < 2:
            raise ValueError("r must be >= 2")


class _FamilyMemo:
    """Per-spec memoized evaluator (confined; no cross-spec sharing)."""

    def __init__(self, spec: FamilySpec):
        self.spec = spec
        self.values: dict[int, PolyC] = {}
        for s in range(1, 2 * spec.r + 1):
            self.values[-s] = PolyC.const(1) if s == spec.j else PolyC.zero()

    def get(self, k: int) -> PolyC:
        if k < -2 * self.spec.r:
            raise ValueError(f"family index {k} below -2r")
        if k in self.values:
            return self.values[k]
        mp, r = self.spec.m_prime, self.spec.r
        lead = mp * k + 2 * r
        assert lead > 0
        prev_r = self.get(k - r)
        prev_2r = self.get(k - 2 * r)
        val = (prev_r * (2 * (mp * k + r)) * PolyC.c() - prev_2r * (mp * k)).scale(
            Fraction(1) / lead
        )
        self.values[k] = val
        return val


_memos: dict[FamilySpec, _FamilyMemo] = {}


def eval_family(spec: FamilySpec, k: int) -> PolyC:
    """The unique family value P^(l,j)_k as a polynomial in c."""
    memo = _memos.get(spec)
    if memo is None:
        memo = _memos[spec] = _FamilyMemo(spec)
    return memo.get(k)


def eval_family_chain(spec: FamilySpec, k: int) -> PolyC:
    """Independent evaluator: iterate one residue class of k mod r forward.

    Used to confirm uniqueness of the recurrence solution against the
    memoized recursion.
    """
    if k < -2 * spec.r:
        raise ValueError(f"family index {k} below -2r")
    mp, r = spec.m_prime, spec.r
    seed = {-s: (PolyC.const(1) if s == spec.j else PolyC.zero())
            for s in range(1, 2 * r + 1)}
    if k < 0:
        return seed[k]
    rho = k % r
    start = rho if rho >= 0 else rho + r
    older, newer = seed[start - 2 * r], seed[start - r]
    kk = start
    while True:
        lead = mp * kk + 2 * r
        val = (newer * (2 * (mp * kk + r)) * PolyC.c() - older * (mp * kk)).scale(
            Fraction(1) / lead
        )
        if kk == k:
            return val
        older, newer = newer, val
        kk += r


def sector_recurrence_value(m: int, r: int, l: int, j: int, k: int) -> PolyC:
    """Sector-l recurrence evaluated directly: coefficients (mk+2rl, mk+rl, mk).

    This is the left-hand side of the rescaling identity, computed without
    dividing through by l.
    """
    if not 1 <= l <= m - 1:
        raise ValueError("sector l must lie in 1..m-1")
    if k < -2 * r:
        raise ValueError(f"index {k} below -2r")
    values: dict[int, PolyC] = {
        -s: (PolyC.const(1) if s == j else PolyC.zero()) for s in range(1, 2 * r + 1)
    }

    def get(kk: int) -> PolyC:
        if kk in values:
            return values[kk]
        lead = Fraction(m * kk + 2 * r * l)
        assert lead > 0
        val = (
            get(kk - r) * (2 * (m * kk + r * l)) * PolyC.c()
            - get(kk - 2 * r) * (m * kk)
        ).scale(Fraction(1) / lead)
        values[kk] = val
        return val

    return get(k)


def rescaling_check(
    m: int, r: int, l_range=None, j_range=None, k_max: int = 20
) -> list[dict]:
    """Exact equality of the sector-l recurrence and the m' = m/l family.

    Returns one report entry per (l, j, k); failures are entries, not errors.
    """
    if l_range is None:
        l_range = range(1, m)
    if j_range is None:
        j_range = range(1, 2 * r + 1)
    out = []
    for l in l_range:
        for j in j_range:
            spec = FamilySpec(l=l, j=j, m_prime=Fraction(m, l), r=r)
            for k in range(-2 * r, k_max + 1):
                lhs = sector_recurrence_value(m, r, l, j, k)
                rhs = eval_family(spec, k)
                out.append(
                    {"l": l, "j": j, "k": k, "equal": lhs == rhs,
                     "lhs": lhs.render(), "rhs": rhs.render()}
                )
    return out


@dataclass
class FamilyTable:
    spec: FamilySpec
    values: dict[int, PolyC] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "spec": {
                "l": self.spec.l,
                "j": self.spec.j,
                "m_prime": str(self.spec.m_prime),
                "r": self.spec.r,
            },
            "values": [
                {"k": k, "poly": self.values[k].render()} for k in sorted(self.values)
            ],
        }

    def to_markdown(self) -> str:
        spec = self.spec
        ks = sorted(self.values)
        head = f"| family (l={spec.l}, j={spec.j}, m'={spec.m_prime}, r={spec.r}) |"
        head += "".join(f" P_{k} |" for k in ks)
        sep = "|" + " --- |" * (len(ks) + 1)
        row = "| values |" + "".join(
            f" {self.values[k].render_ratio()} |" for k in ks
        )
        return "\n".join([head, sep, row])


def family_table(spec: FamilySpec, k_max: int) -> FamilyTable:
    """All family values for -2r <= k <= k_max."""
    return FamilyTable(
        spec, {k: eval_family(spec, k) for k in range(-2 * spec.r, k_max + 1)}
    )


def reconcile_with_kahler(
    params: RingParams, l: int, k_range=None
) -> list[dict]:
    """Compare oracle structure constants with family values (reported).

    For each k the oracle coordinates of class(t^(k-1) u^l dt) are compared
    with family values at the candidate indices k-1, k, k+1.  No match is
    asserted; the report records what holds.
    """
    m, r = params.m, params.r
    if k_range is None:
        k_range = range(1, 7)
    out = []
    for k in k_range:
        oracle = kahler.structure_constants(l, k, params)
        entry = {
            "l": l,
            "k": k,
            "oracle": {j: oracle[j].render() for j in sorted(oracle)},
            "matches": {},
        }
        for cand in (k - 1, k, k + 1):
            if cand < -2 * r:
                continue
            ok = True
            for j in range(1, 2 * r + 1):
                fam = eval_family(FamilySpec(l=l, j=j, m_prime=Fraction(m, l), r=r), cand)
                if CoeffK.from_polyc(fam) != oracle[j]:
                    ok = False
                    break
            entry["matches"][cand] = ok
        entry["any_match"] = any(entry["matches"].values())
        out.append(entry)
    return out
