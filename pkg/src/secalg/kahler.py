"""Kahler differentials of A and the quotient Omega^1 / dA.

The quotient has the basis

    w0 = class(t^-1 dt),    w(l, -j) = class(t^-j u^l dt),
    l = 1..m-1, j = 1..2r,

of dimension 2r(m-1) + 1.  Two reducers are provided:

* ``reduce_oracle`` -- the normative reducer.  It assembles the full space of
  relations among monomial classes ``t^n u^l dt`` over a t-exponent window
  (images of exact forms and of the module relation ``m u^(m-1) du = p' dt``
  under du-elimination), runs exact Gauss-Jordan over Frac(Q[c, s]), and
  expresses any class in the basis.  Results are accepted only when a re-run
  on an enlarged window reproduces them (stabilization check).

* ``reduce_recurrence`` -- the stated three-term recurrence, kept as a
  fast path.  Every applied instance is logged with a validity flag, and
  outputs are meant to be cross-checked against the oracle; see
  ``verify_recurrence`` which evaluates candidate recurrences on
  oracle-reduced classes and reports which ones actually hold.

Everything is pure and immutable; reduction tables are cached per
(parameters, window) and never mutated after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .coeffs import CoeffK
from .ring import RingElem, RingParams, dp_laurent, p_laurent


class WindowError(ValueError):
    """Raised when a reduction window fails to stabilize."""


class PivotError(ValueError):
    """Raised on a degenerate pivot in the recurrence fast path."""


@dataclass(frozen=True)
class ReductionWindow:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty reduction window")

    def enlarged(self, amount: int) -> "ReductionWindow":
        return ReductionWindow(self.lo - amount, self.hi + amount)


@dataclass(frozen=True)
class DiffForm:
    """a*dt + b*du with a, b in A."""

    dt_part: RingElem
    du_part: RingElem

    def __post_init__(self):
        if self.dt_part.params != self.du_part.params:
            raise ValueError("dt and du parts disagree on ring parameters")

    @property
    def params(self) -> RingParams:
        return self.dt_part.params


class DiffClass:
    """Coordinates over the basis {w0; w(l)_(-j)} of Omega^1/dA."""

    __slots__ = ("params", "omega0", "odd")

    def __init__(self, params: RingParams, omega0: CoeffK | None = None,
                 odd: dict[tuple[int, int], CoeffK] | None = None):
        self.params = params
        self.omega0 = omega0 if omega0 is not None else CoeffK.zero()
        clean: dict[tuple[int, int], CoeffK] = {}
        if odd:
            for (l, j), v in odd.items():
                if not (1 <= l <= params.m - 1 and 1 <= j <= 2 * params.r):
                    raise ValueError(f"basis label (l={l}, j={j}) out of range")
                if not v.is_zero():
                    clean[(l, j)] = v
        self.odd = clean

    @staticmethod
    def zero(params: RingParams) -> "DiffClass":
        return DiffClass(params)

    def is_zero(self) -> bool:
        return self.omega0.is_zero() and not self.odd

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DiffClass)
            and self.params == other.params
            and self.omega0 == other.omega0
            and self.odd == other.odd
        )

    def __add__(self, other: "DiffClass") -> "DiffClass":
        if self.params != other.params:
            raise ValueError("parameter mismatch")
        odd = dict(self.odd)
        for key, v in other.odd.items():
            w = odd.get(key)
            w = v if w is None else w + v
            if w.is_zero():
                odd.pop(key, None)
            else:
                odd[key] = w
        return DiffClass(self.params, self.omega0 + other.omega0, odd)

    def scale(self, q: CoeffK) -> "DiffClass":
        if q.is_zero():
            return DiffClass.zero(self.params)
        return DiffClass(
            self.params, self.omega0 * q, {key: v * q for key, v in self.odd.items()}
        )

    def __neg__(self) -> "DiffClass":
        return self.scale(CoeffK.from_int(-1))

    def __sub__(self, other: "DiffClass") -> "DiffClass":
        return self + (-other)

    def coeff(self, l: int, j: int) -> CoeffK:
        return self.odd.get((l, j), CoeffK.zero())

    def to_json_dict(self) -> dict:
        return {
            "omega0": self.omega0.render(),
            "odd": [
                {"l": l, "j": j, "coef": self.odd[(l, j)].render()}
                for (l, j) in sorted(self.odd)
            ],
        }

    def render(self) -> str:
        parts = []
        if not self.omega0.is_zero():
            parts.append(f"({self.omega0.render()})*w0")
        for (l, j) in sorted(self.odd):
            parts.append(f"({self.odd[(l, j)].render()})*w({l},-{j})")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"DiffClass({self.render()})"


# ---------------------------------------------------------------------------
# Differential and du-elimination
# ---------------------------------------------------------------------------


def differential(a: RingElem) -> DiffForm:
    """Leibniz differential: d(t^n u^l) = n t^(n-1) u^l dt + l t^n u^(l-1) du."""
    params = a.params
    dt = RingElem.zero(params)
    du = RingElem.zero(params)
    for e, l, v in a.monomials():
        if e:
            dt = dt + RingElem.monomial(params, v * e, e - 1, l)
        if l:
            du = du + RingElem.monomial(params, v * l, e, l - 1)
    return DiffForm(dt, du)


def _du_monomial_classes(
    n: int, j: int, params: RingParams, coef: CoeffK
) -> dict[tuple[int, int], CoeffK]:
    """coef * t^n u^j du as dt-monomial classes {(t_exp, sector): coef}, mod dA.

    j <= m-2 uses exactness of d(t^n u^(j+1)); j = m-1 uses the module
    relation m u^(m-1) du = p'(t) dt, which is exact in Omega^1 itself.
    """
    m = params.m
    out: dict[tuple[int, int], CoeffK] = {}
    if j <= m - 2:
        if n != 0:
            out[(n - 1, j + 1)] = coef * Fraction(-n, j + 1)
    else:
        for e, a in dp_laurent(params).items():
            key = (n + e, 0)
            w = out.get(key)
            add = coef * a * Fraction(1, m)
            w = add if w is None else w + add
            if w.is_zero():
                out.pop(key, None)
            else:
                out[key] = w
    return out


def eliminate_du(f: DiffForm) -> list[tuple[int, int, CoeffK]]:
    """Rewrite f as a combination of monomial classes t^(n-1) u^l dt mod dA.

    Returns triples (n, l, coef) meaning coef * class(t^(n-1) u^l dt).
    """
    params = f.params
    acc: dict[tuple[int, int], CoeffK] = {}

    def add(key, v):
        w = acc.get(key)
        w = v if w is None else w + v
        if w.is_zero():
            acc.pop(key, None)
        else:
            acc[key] = w

    for e, l, v in f.dt_part.monomials():
        add((e, l), v)
    for e, j, v in f.du_part.monomials():
        for key, w in _du_monomial_classes(e, j, params, v).items():
            add(key, w)
    return [(e + 1, l, acc[(e, l)]) for (e, l) in sorted(acc)]


# ---------------------------------------------------------------------------
# The oracle: relation rows, elimination, reduction table
# ---------------------------------------------------------------------------


def _relation_rows(params: RingParams, lo: int, hi: int) -> list[dict]:
    """All relation rows among monomial classes with support inside [lo, hi].

    Sector 0: images of d(t^n) kill every class(t^j dt) with j != -1.
    Sector l >= 1: images of the module-relation generators
    t^n u^l (m u^(m-1) du - p'(t) dt); images of d(t^n u^l) vanish
    identically because du-elimination is built from exactly those forms.
    """
    m, r = params.m, params.r
    rows: list[dict] = []
    one = CoeffK.one()
    p = p_laurent(params)
    dp = dp_laurent(params)

    for n in range(lo + 1, hi + 2):
        if n != 0 and lo <= n - 1 <= hi:
            rows.append({(n - 1, 0): CoeffK.from_int(n)})

    for l in range(1, m):
        for n in range(lo - 2 * r - 2, hi + 2):
            row: dict[tuple[int, int], CoeffK] = {}

            def add(key, v):
                w = row.get(key)
                w = v if w is None else w + v
                if w.is_zero():
                    row.pop(key, None)
                else:
                    row[key] = w

            # m * t^n * p(t) * u^(l-1) du, eliminated
            for e, a in p.items():
                for key, w in _du_monomial_classes(n + e, l - 1, params, a * m).items():
                    add(key, w)
            # - t^n p'(t) u^l dt
            for e, a in dp.items():
                add((n + e, l), -a)
            if row and all(lo <= e <= hi for (e, _l) in row):
                rows.append(row)
    return rows


class ReductionTable:
    """Row-reduced relation system over a window; maps monomial classes to basis."""

    def __init__(self, params: RingParams, window: ReductionWindow):
        self.params = params
        self.window = window
        m, r = params.m, params.r
        lo, hi = window.lo, window.hi
        self.basis_cols = {(-1, 0)} | {
            (-j, l) for l in range(1, m) for j in range(1, 2 * r + 1)
        }
        if not all(lo <= e <= hi for (e, _l) in self.basis_cols):
            raise WindowError("window does not cover the basis exponents")
        all_cols = [(e, l) for l in range(m) for e in range(lo, hi + 1)]
        nonbasis = [cd for cd in all_cols if cd not in self.basis_cols]
        nonbasis.sort(key=lambda t: (-abs(t[0]), t[0], t[1]))
        order = nonbasis + sorted(self.basis_cols)

        rows = _relation_rows(params, lo, hi)
        pivots: dict[tuple[int, int], dict] = {}
        for col in order:
            piv = None
            for row in rows:
                if col in row:
                    piv = row
                    break
            if piv is None:
                continue
            rows.remove(piv)
            pc = piv[col]
            piv = {kk: vv / pc for kk, vv in piv.items()}
            for row in rows:
                f = row.get(col)
                if f is not None:
                    for kk, vv in piv.items():
                        w = row.get(kk)
                        w = -f * vv if w is None else w - f * vv
                        if w.is_zero():
                            row.pop(kk, None)
                        else:
                            row[kk] = w
            for pcol, prow in pivots.items():
                f = prow.get(col)
                if f is not None:
                    nr = dict(prow)
                    for kk, vv in piv.items():
                        w = nr.get(kk)
                        w = -f * vv if w is None else w - f * vv
                        if w.is_zero():
                            nr.pop(kk, None)
                        else:
                            nr[kk] = w
                    pivots[pcol] = nr
            pivots[col] = piv
            rows = [row for row in rows if row]

        self.pivots = pivots
        self.rank = len(pivots)
        self.n_cols = len(all_cols)
        self.basis_pivots = sorted(cd for cd in pivots if cd in self.basis_cols)

    @property
    def dim(self) -> int:
        return self.n_cols - self.rank

    def reduce_monomial(self, t_exp: int, sector: int) -> DiffClass:
        """Expand class(t^t_exp u^sector dt) over the basis."""
        cd = (t_exp, sector)
        if not (self.window.lo <= t_exp <= self.window.hi):
            raise WindowError(f"monomial exponent {t_exp} outside window {self.window}")
        params = self.params
        if cd in self.basis_cols and cd not in self.pivots:
            if sector == 0:
                return DiffClass(params, omega0=CoeffK.one())
            return DiffClass(params, odd={(sector, -t_exp): CoeffK.one()})
        row = self.pivots.get(cd)
        if row is None:
            raise WindowError(
                f"monomial {cd} is unresolved over window {self.window}"
            )
        omega0 = CoeffK.zero()
        odd: dict[tuple[int, int], CoeffK] = {}
        for col, v in row.items():
            if col == cd:
                continue
            if col not in self.basis_cols:
                raise WindowError(
                    f"reduction of {cd} references non-basis monomial {col}; "
                    "window too small"
                )
            e, l = col
            if l == 0:
                omega0 = omega0 - v
            else:
                odd[(l, -e)] = -v
        return DiffClass(params, omega0=omega0, odd=odd)


@lru_cache(maxsize=None)
def _table(params: RingParams, lo: int, hi: int) -> ReductionTable:
    return ReductionTable(params, ReductionWindow(lo, hi))


def default_window(params: RingParams, exponents: list[int]) -> ReductionWindow:
    r = params.r
    lo = min(exponents, default=0)
    hi = max(exponents, default=0)
    lo = min(lo, -2 * r)
    hi = max(hi, 0)
    return ReductionWindow(lo - 2 * r - 1, hi + 2 * r + 1)


def reduce_oracle(f: DiffForm, window: Optional[ReductionWindow] = None) -> DiffClass:
    """Reduce the class of f to the basis by exact elimination.

    Runs on the given (or default) window and again on the window enlarged by
    2r; the two results must agree, else the window is enlarged (buffer
    doubled) and the pair is retried.  Persistent disagreement raises
    ``WindowError``.
    """
    params = f.params
    terms = eliminate_du(f)
    exps = [n - 1 for (n, _l, _v) in terms]
    if window is None:
        window = default_window(params, exps)
    else:
        if exps and (window.lo > min(exps) - 1 or window.hi < max(exps) + 1):
            raise WindowError("window does not cover the input exponents")

    def run(w: ReductionWindow) -> DiffClass:
        table = _table(params, w.lo, w.hi)
        out = DiffClass.zero(params)
        for n, l, v in terms:
            out = out + table.reduce_monomial(n - 1, l).scale(v)
        return out

    buffer = 2 * params.r
    for _attempt in range(5):
        try:
            first = run(window)
            second = run(window.enlarged(2 * params.r))
        except WindowError:
            window = window.enlarged(buffer)
            buffer *= 2
            continue
        if first == second:
            return first
        window = window.enlarged(buffer)
        buffer *= 2
    raise WindowError("window too small: reduction failed to stabilize")


def reduce_monomial_class(params: RingParams, t_exp: int, sector: int) -> DiffClass:
    """Oracle reduction of the single class t^t_exp u^sector dt."""
    form = DiffForm(
        RingElem.monomial(params, CoeffK.one(), t_exp, sector), RingElem.zero(params)
    )
    return reduce_oracle(form)


def basis_dim(params: RingParams, window: Optional[ReductionWindow] = None) -> int:
    """Dimension of the quotient on the window; must stabilize under enlargement."""
    if window is None:
        window = default_window(params, [])
    for _attempt in range(5):
        d1 = _table(params, window.lo, window.hi).dim
        w2 = window.enlarged(2 * params.r)
        d2 = _table(params, w2.lo, w2.hi).dim
        if d1 == d2:
            return d1
        window = window.enlarged(4 * params.r)
    raise WindowError("basis dimension failed to stabilize")


# ---------------------------------------------------------------------------
# The stated recurrence as a fast path (logged and cross-checked)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RecurrenceInstance:
    """One application of the stated three-term recurrence at index n."""

    n: int
    sector: int
    within_stated_range: bool  # stated validity range: n >= 1


@dataclass
class RecurrenceReduction:
    cls: DiffClass
    instances: list


def _paper_coeffs(n: int, l: int, params: RingParams) -> tuple[Fraction, CoeffK, Fraction]:
    """Stated coefficients: (mn, 2c(mn+rl), mn+2rl) at instance n, sector l."""
    m, r = params.m, params.r
    return (
        Fraction(m * n),
        CoeffK.from_int(2 * (m * n + r * l)) * CoeffK.c(),
        Fraction(m * n + 2 * r * l),
    )


def reduce_recurrence(n: int, l: int, params: RingParams) -> RecurrenceReduction:
    """Reduce class(t^(n-1) u^l dt) using the stated recurrence only.

    Instances with index < 1 fall outside the stated validity range; they
    are still applied but flagged, so callers can audit the reachability of
    the result.  Degenerate pivots raise ``PivotError``.
    """
    if l < 1:
        raise ValueError("recurrence applies to sectors l >= 1")
    m, r = params.m, params.r
    instances: list[RecurrenceInstance] = []
    # work vector over monomial exponents, then fold into basis coordinates
    vec: dict[int, CoeffK] = {n - 1: CoeffK.one()}

    def top_exponent():
        return max(vec)

    def bottom_exponent():
        return min(vec)

    guard = 0
    while vec and (top_exponent() > -1 or bottom_exponent() < -2 * r):
        guard += 1
        if guard > 10_000:
            raise PivotError("recurrence reduction did not terminate")
        if top_exponent() > -1:
            j = top_exponent()
            inst = j + 1 - 2 * r  # solve the instance whose top term is X_j
            c_bot, c_mid, c_top = _paper_coeffs(inst, l, params)
            if c_top == 0:
                raise PivotError(
                    f"recurrence pivot degenerate: m*n+2rl = 0 at (n={inst}, l={l})"
                )
            instances.append(RecurrenceInstance(inst, l, inst >= 1))
            coef = vec.pop(j)
            # X_j = [2c(mn+rl) X_{j-r} - mn X_{j-2r}] / (mn+2rl)
            for e, w in ((j - r, c_mid * (1 / Fraction(c_top))),):
                cur = vec.get(e)
                add = coef * w
                cur = add if cur is None else cur + add
                if cur.is_zero():
                    vec.pop(e, None)
                else:
                    vec[e] = cur
            e = j - 2 * r
            add = coef * CoeffK.from_rat(Fraction(-c_bot, c_top))
            cur = vec.get(e)
            cur = add if cur is None else cur + add
            if cur.is_zero():
                vec.pop(e, None)
            else:
                vec[e] = cur
        else:
            j = bottom_exponent()
            inst = j + 1  # solve the instance whose bottom term is X_j
            c_bot, c_mid, c_top = _paper_coeffs(inst, l, params)
            if c_bot == 0:
                raise PivotError(
                    f"recurrence pivot degenerate: m*n = 0 at (n={inst}, l={l})"
                )
            instances.append(RecurrenceInstance(inst, l, inst >= 1))
            coef = vec.pop(j)
            # X_j = [2c(mn+rl) X_{j+r} - (mn+2rl) X_{j+2r}] / (mn)
            cur = vec.get(j + r)
            add = coef * c_mid * (1 / Fraction(c_bot))
            cur = add if cur is None else cur + add
            if cur.is_zero():
                vec.pop(j + r, None)
            else:
                vec[j + r] = cur
            cur = vec.get(j + 2 * r)
            add = coef * CoeffK.from_rat(Fraction(-c_top, c_bot))
            cur = add if cur is None else cur + add
            if cur.is_zero():
                vec.pop(j + 2 * r, None)
            else:
                vec[j + 2 * r] = cur

    odd = {(l, -e): v for e, v in vec.items()}
    return RecurrenceReduction(DiffClass(params, odd=odd), instances)


def verify_recurrence(
    params: RingParams, l: int, n_range: range, table: Optional[ReductionTable] = None
) -> list[dict]:
    """Evaluate recurrence candidates on oracle-reduced classes.

    For each instance n, reports whether (a) the stated coefficients
    (mn, 2c(mn+rl), mn+2rl) and (b) the corrected coefficients
    (mn, 2c(mn+r(m+l)), mn+2r(m+l)) annihilate the oracle classes.  This is
    a theorem check run against first principles, not an assumption.
    """
    m, r = params.m, params.r
    if table is None:
        lo = min(n_range) - 2 * r - 2
        hi = max(n_range) + 2 * r + 2
        lo = min(lo, -2 * r - 1)
        table = _table(params, lo - 2 * r, hi + 2 * r)
    out = []
    for n in n_range:
        X = {
            d: table.reduce_monomial(n + d - 1, l)
            for d in (0, r, 2 * r)
        }
        c = CoeffK.c()

        def residual(mid_shift: int) -> DiffClass:
            acc = X[0].scale(CoeffK.from_int(m * n))
            acc = acc + X[r].scale(CoeffK.from_int(-2 * (m * n + r * mid_shift)) * c)
            acc = acc + X[2 * r].scale(CoeffK.from_int(m * n + 2 * r * mid_shift))
            return acc

        out.append(
            {
                "n": n,
                "sector": l,
                "stated_holds": residual(l).is_zero(),
                "corrected_holds": residual(m + l).is_zero(),
            }
        )
    return out


# ---------------------------------------------------------------------------
# Structure constants
# ---------------------------------------------------------------------------


def structure_constants(l: int, k: int, params: RingParams) -> dict[int, CoeffK]:
    """Oracle coordinates of class(t^(k-1) u^l dt) in the w(l)_(-j) basis."""
    if l < 1 or k < 1:
        raise ValueError("structure constants need l >= 1 and k >= 1")
    cls = reduce_monomial_class(params, k - 1, l)
    if not cls.omega0.is_zero():
        raise AssertionError("sector-l class acquired an omega0 component")
    bad = [key for key in cls.odd if key[0] != l]
    if bad:
        raise AssertionError(f"sector-l class leaked into sectors {bad}")
    return {j: cls.coeff(l, j) for j in range(1, 2 * params.r + 1)}
