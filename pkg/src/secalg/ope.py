"""Symbolic free-field OPE engine.

Fields: one bosonic beta/gamma ghost pair and one Heisenberg field b per
sector, plus a single sector-0 exponential exp(a*phi0) carrying momentum a
(phi0 is the scalar with b0 = 2*d(phi0)).  A normally ordered monomial is a
coefficient, a canonically sorted factor list, and one momentum.

Contraction rules (z first, w second):

    beta_l(z)  gamma_l(w)   ->  1/(z-w)
    gamma_l(z) beta_l(w)    ->  sigma_rev/(z-w)        (convention parameter)
    b_l(z)     b_l(w)       ->  2/(z-w)^2
    b_0(z or w) vs exp(a*phi0) at the other point -> 2a/(z-w), exp survives
    exp(a, z) exp(b, w)     ->  (z-w)^(a*b) * merged exponential at w

Derivatives dress propagators with the exact d/dz, d/dw factors.  A nested
normal ordering written :(AB)C: differs from the flat Fock ordering by
derivative corrections; the ``nesting`` convention parameter selects how
displayed triple products are read (see ``nested_product``).

``wick_ope`` sums over all cross-contraction subsets (no self contractions),
Taylor-shifts surviving z-factors to w to the order needed for every kept
singular coefficient, and returns a generalized Laurent result: finitely
many sectors, each a fractional prefactor exponent epsilon with an integer
pole-order map (coefficient of (z-w)^(epsilon - d) at order d).  Ordinary
OPEs have the single sector epsilon = 0.

Everything is immutable and pure; conventions are explicit arguments.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .coeffs import CoeffK, is_integer_constant, specialize

KINDS = ("beta", "gamma", "heis")
_KIND_RANK = {"beta": 0, "gamma": 1, "heis": 2}


@dataclass(frozen=True)
class ConventionConfig:
    """The two undetermined engine conventions."""

    sigma_rev: int = -1  # sign of gamma(z) beta(w)
    nesting: str = "right"  # reading of displayed triple products

    def __post_init__(self):
        if self.sigma_rev not in (1, -1):
            raise ValueError("sigma_rev must be +1 or -1")
        if self.nesting not in ("left", "right"):
            raise ValueError("nesting must be 'left' or 'right'")


ALL_CONFIGS = tuple(
    ConventionConfig(sigma_rev=s, nesting=n)
    for s in (1, -1)
    for n in ("left", "right")
)


@dataclass(frozen=True)
class FieldGen:
    kind: str
    sector: int
    deriv: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.sector < 0 or self.deriv < 0:
            raise ValueError("sector and derivative order must be non-negative")

    def dz(self) -> "FieldGen":
        return FieldGen(self.kind, self.sector, self.deriv + 1)

    def sort_key(self):
        return (self.sector, _KIND_RANK[self.kind], self.deriv)

    def render(self) -> str:
        name = {"beta": "beta", "gamma": "gamma", "heis": "b"}[self.kind]
        body = f"{name}[{self.sector}]"
        return body if self.deriv == 0 else f"D({body},{self.deriv})"


@dataclass(frozen=True)
class ExpFactor:
    """Sector-0 exponential with the given momentum; momentum 0 means absent."""

    momentum: CoeffK

    def is_absent(self) -> bool:
        return self.momentum.is_zero()


class NOMono:
    """coef * :factors... exp(momentum*phi0):, factors canonically sorted."""

    __slots__ = ("coef", "factors", "momentum")

    def __init__(self, coef: CoeffK, factors: Iterable[FieldGen] = (),
                 momentum: Optional[CoeffK] = None):
        self.coef = coef
        self.factors = tuple(sorted(factors, key=FieldGen.sort_key))
        self.momentum = momentum if momentum is not None else CoeffK.zero()

    def key(self):
        return (self.factors, self.momentum.key())

    def render(self) -> str:
        parts = [g.render() for g in self.factors]
        if not self.momentum.is_zero():
            parts.append(f"exp({self.momentum.render()}, phi0)")
        if not parts:
            return self.coef.render()
        body = "*".join(parts)
        body = f"no({body})" if len(parts) > 1 else body
        cs = self.coef.render()
        if cs == "1":
            return body
        if cs == "-1":
            return f"-{body}"
        if "+" in cs or (cs.count("-") and not cs.startswith("-")) or "/" in cs:
            cs = f"({cs})"
        return f"{cs}*{body}"


class FieldExpr:
    """Finite sum of normally ordered monomials; like terms merged."""

    __slots__ = ("terms",)

    def __init__(self, monos: Iterable[NOMono] = ()):
        terms: dict = {}
        for mo in monos:
            if mo.coef.is_zero():
                continue
            k = mo.key()
            cur = terms.get(k)
            if cur is None:
                terms[k] = mo
            else:
                s = cur.coef + mo.coef
                if s.is_zero():
                    del terms[k]
                else:
                    terms[k] = NOMono(s, cur.factors, cur.momentum)
        self.terms = terms

    # -- constructors
    @staticmethod
    def zero() -> "FieldExpr":
        return FieldExpr()

    @staticmethod
    def generator(kind: str, sector: int, deriv: int = 0) -> "FieldExpr":
        return FieldExpr([NOMono(CoeffK.one(), [FieldGen(kind, sector, deriv)])])

    @staticmethod
    def exponential(momentum: CoeffK) -> "FieldExpr":
        return FieldExpr([NOMono(CoeffK.one(), [], momentum)])

    @staticmethod
    def const(q: CoeffK) -> "FieldExpr":
        return FieldExpr([NOMono(q, [])])

    # -- queries
    def is_zero(self) -> bool:
        return not self.terms

    def monomials(self) -> list[NOMono]:
        return [self.terms[k] for k in sorted(self.terms, key=_term_sort_key)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldExpr):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[k].coef == other.terms[k].coef for k in self.terms)

    def __hash__(self):
        return hash(frozenset((k, self.terms[k].coef.key()) for k in self.terms))

    # -- algebra
    def __add__(self, other: "FieldExpr") -> "FieldExpr":
        return FieldExpr(list(self.terms.values()) + list(other.terms.values()))

    def scale(self, q: CoeffK) -> "FieldExpr":
        if q.is_zero():
            return FieldExpr()
        return FieldExpr(
            [NOMono(mo.coef * q, mo.factors, mo.momentum) for mo in self.terms.values()]
        )

    def __neg__(self) -> "FieldExpr":
        return self.scale(CoeffK.from_int(-1))

    def __sub__(self, other: "FieldExpr") -> "FieldExpr":
        return self + (-other)

    def __mul__(self, other: "FieldExpr") -> "FieldExpr":
        """Same-point normally ordered product (no contractions)."""
        out = []
        for a in self.terms.values():
            for b in other.terms.values():
                out.append(
                    NOMono(a.coef * b.coef, a.factors + b.factors, a.momentum + b.momentum)
                )
        return FieldExpr(out)

    def derivative(self) -> "FieldExpr":
        """Formal d/dz by the Leibniz rule; d(exp) = momentum * d(phi0) * exp."""
        out = []
        for mo in self.terms.values():
            for idx, g in enumerate(mo.factors):
                fs = list(mo.factors)
                fs[idx] = g.dz()
                out.append(NOMono(mo.coef, fs, mo.momentum))
            if not mo.momentum.is_zero():
                # d exp(a phi) = a * dphi * exp = (a/2) * b0 * exp
                out.append(
                    NOMono(
                        mo.coef * mo.momentum * Fraction(1, 2),
                        mo.factors + (FieldGen("heis", 0, 0),),
                        mo.momentum,
                    )
                )
        return FieldExpr(out)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = [mo.render() for mo in self.monomials()]
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text

    def __repr__(self):
        return f"FieldExpr({self.render()})"


def _term_sort_key(key):
    factors, mom = key
    return (len(factors), tuple(g.sort_key() for g in factors), sorted(mom[0]) or [], sorted(mom[1]) or [])


def nested_product(factors: list[FieldGen], conv: ConventionConfig) -> FieldExpr:
    """Read a displayed multi-factor normal product under the nesting convention.

    ``right`` nests from the right, :A(:B C:):, which for these free fields
    coincides with the flat Fock ordering.  ``left`` nests from the left,
    :(:A B:)C:, which picks up derivative corrections: contracting inside the
    point-split pair :A B:(x) against C(w) leaves a field at x whose Taylor
    coefficient at first order survives the x -> w limit.
    """
    if conv.nesting == "right" or len(factors) < 3:
        return FieldExpr([NOMono(CoeffK.one(), factors)])
    # Left nesting: fold from the left.  Appending C(w) to the point-split
    # composite :A1..An:(x) adds, per inner factor Ai contracting C with
    # propagator coef/(x-w)^q, the (x-w)^0 coefficient of
    # coef/(x-w)^q * (product of the other inner factors)(x), i.e. coef
    # times the q-th Taylor coefficient of the surviving inner product.
    acc = FieldExpr([NOMono(CoeffK.one(), factors[:1])])
    for g in factors[1:]:
        flat = []
        for mo in acc.terms.values():
            flat.append(NOMono(mo.coef, mo.factors + (g,), mo.momentum))
            for idx, inner in enumerate(mo.factors):
                pr = contract_pair(inner, g, conv)
                if pr is None:
                    continue
                q, coef = pr
                others = mo.factors[:idx] + mo.factors[idx + 1 :]
                if q > 0:
                    for derived, dcoef in _taylor_coeff_of_product(others, q):
                        flat.append(
                            NOMono(mo.coef * coef * dcoef, derived, mo.momentum)
                        )
        acc = FieldExpr(flat)
    return acc


def _taylor_coeff_of_product(
    factors: tuple, n: int
) -> list[tuple[tuple, Fraction]]:
    """Distributions of n derivatives over the factors with 1/n_i! weights."""
    if n == 0:
        return [(factors, Fraction(1))]
    if not factors:
        return []
    out = []
    head, tail = factors[0], factors[1:]
    fact = 1
    for n_head in range(n + 1):
        if n_head:
            fact *= n_head
        bumped = FieldGen(head.kind, head.sector, head.deriv + n_head)
        for rest, coef in _taylor_coeff_of_product(tail, n - n_head):
            out.append(((bumped,) + rest, coef * Fraction(1, fact)))
    return out


# ---------------------------------------------------------------------------
# Propagators
# ---------------------------------------------------------------------------


def _pair_base(a: FieldGen, b: FieldGen, conv: ConventionConfig):
    """Base propagator <a(z) b(w)> ignoring derivatives: (order, coef) or None."""
    if a.sector != b.sector:
        return None
    ka, kb = a.kind, b.kind
    if ka == "beta" and kb == "gamma":
        return (1, CoeffK.one())
    if ka == "gamma" and kb == "beta":
        return (1, CoeffK.from_int(conv.sigma_rev))
    if ka == "heis" and kb == "heis":
        return (2, CoeffK.from_int(2))
    return None


def _dress(order: int, coef: CoeffK, dz: int, dw: int) -> tuple[int, CoeffK]:
    """Apply d/dw^dw then d/dz^dz to C/(z-w)^order."""
    q = order
    for _ in range(dw):
        coef = coef * q
        q += 1
    for _ in range(dz):
        coef = coef * (-q)
        q += 1
    return q, coef


def contract_pair(a: FieldGen, b: FieldGen, conv: ConventionConfig):
    """Full propagator <a(z) b(w)> with derivative dressing, or None."""
    base = _pair_base(a, b, conv)
    if base is None:
        return None
    order, coef = _dress(base[0], base[1], a.deriv, b.deriv)
    return order, coef


def contract_exp(g: FieldGen, e: ExpFactor, heis_at: str = "z"):
    """Sector-0 Heisenberg against the exponential: 2a/(z-w), either order.

    The exponential survives the contraction (it is an eigen-operator of the
    Heisenberg current); only the b-generator is consumed.
    """
    if g.kind != "heis" or g.sector != 0 or e.is_absent():
        return None
    two_a = CoeffK.from_int(2) * e.momentum
    if heis_at == "z":
        return _dress(1, two_a, g.deriv, 0)
    return _dress(1, two_a, 0, g.deriv)


def merge_exponentials(e1: ExpFactor, e2: ExpFactor) -> tuple[CoeffK, ExpFactor]:
    """Exponent contribution a*b and the merged exponential at w."""
    return e1.momentum * e2.momentum, ExpFactor(e1.momentum + e2.momentum)


# ---------------------------------------------------------------------------
# Taylor re-expansion at the second point
# ---------------------------------------------------------------------------


def _factor_shift(g: FieldGen, max_order: int) -> list[tuple[int, FieldGen, Fraction]]:
    """g(z) = sum_n (z-w)^n/n! * d^n g(w)."""
    out = []
    fact = 1
    for n in range(max_order + 1):
        if n:
            fact *= n
        out.append((n, FieldGen(g.kind, g.sector, g.deriv + n), Fraction(1, fact)))
    return out


def _exp_corrections(momentum: CoeffK, max_order: int) -> list[tuple[int, tuple, CoeffK]]:
    """Re-expansion corrections of :exp(a phi0(z)): around w.

    Returns (n, extra_factors, coef) with the momentum itself handled by the
    caller (it moves to w).  Corrections are products of derivative fields
    d^p phi0 = (1/2) d^(p-1) b0, one term per multiset of positive parts.
    """
    out: list[tuple[int, tuple, CoeffK]] = [(0, (), CoeffK.one())]
    if momentum.is_zero() or max_order == 0:
        return out

    def parts_of(n: int, max_part: int):
        if n == 0:
            yield []
            return
        for p in range(min(n, max_part), 0, -1):
            for rest in parts_of(n - p, p):
                yield [p] + rest

    for n in range(1, max_order + 1):
        for partition in parts_of(n, n):
            coef = CoeffK.one()
            factors = []
            counts: dict[int, int] = {}
            for p in partition:
                counts[p] = counts.get(p, 0) + 1
            for p, mult in counts.items():
                fact_p = 1
                for i in range(2, p + 1):
                    fact_p *= i
                single = momentum * Fraction(1, 2 * fact_p)
                term = CoeffK.one()
                for _ in range(mult):
                    term = term * single
                denom = 1
                for i in range(2, mult + 1):
                    denom *= i
                coef = coef * term * Fraction(1, denom)
                factors.extend([FieldGen("heis", 0, p - 1)] * mult)
            out.append((n, tuple(factors), coef))
    return out


def taylor_shift(mono: NOMono, order: int) -> dict[int, FieldExpr]:
    """Re-expand a z-located monomial at w, graded by the displacement power.

    Returns {n: coefficient of (z-w)^n}, n = 0..order.
    """
    if order < 0:
        raise ValueError("Taylor order must be non-negative")
    graded: dict[int, list[NOMono]] = {n: [] for n in range(order + 1)}
    factor_options = [_factor_shift(g, order) for g in mono.factors]
    exp_options = _exp_corrections(mono.momentum, order)
    for combo in itertools.product(*factor_options):
        n_f = sum(n for n, _g, _c in combo)
        if n_f > order:
            continue
        coef_f = mono.coef
        gens = []
        for n, g, cfrac in combo:
            coef_f = coef_f * cfrac
            gens.append(g)
        for n_e, extra, coef_e in exp_options:
            n = n_f + n_e
            if n > order:
                continue
            graded[n].append(
                NOMono(coef_f * coef_e, tuple(gens) + tuple(extra), mono.momentum)
            )
    return {n: FieldExpr(monos) for n, monos in graded.items()}


# ---------------------------------------------------------------------------
# Generalized Laurent result
# ---------------------------------------------------------------------------


@dataclass
class OPESector:
    epsilon: CoeffK
    poles: dict  # order d (int; d >= 1 singular, d <= 0 optional) -> FieldExpr

    def max_pole(self) -> int:
        return max(self.poles, default=0)

    def to_json_dict(self) -> dict:
        return {
            "epsilon": self.epsilon.render(),
            "poles": [
                {"order": d, "field": self.poles[d].render()}
                for d in sorted(self.poles, reverse=True)
            ],
        }


class OPEResult:
    """Finitely many epsilon-sectors, each with an integer pole-order map.

    Pole order d holds the coefficient of (z-w)^(epsilon - d).  For ordinary
    OPEs there is a single sector with epsilon = 0.  Mixed sums of
    exponential-bearing and exponential-free monomials produce one sector
    per distinct pairwise exponent.
    """

    def __init__(self, sectors: Iterable[OPESector] = ()):
        self.sectors: dict = {}
        for sec in sectors:
            poles = {d: fe for d, fe in sec.poles.items() if not fe.is_zero()}
            if not poles:
                continue
            k = sec.epsilon.key()
            if k in self.sectors:
                merged = self.sectors[k].poles
                for d, fe in poles.items():
                    merged[d] = merged.get(d, FieldExpr.zero()) + fe
                    if merged[d].is_zero():
                        del merged[d]
            else:
                self.sectors[k] = OPESector(sec.epsilon, dict(poles))
        for k in [k for k, sec in self.sectors.items() if not sec.poles]:
            del self.sectors[k]

    def sector_list(self) -> list[OPESector]:
        return [self.sectors[k] for k in sorted(self.sectors, key=repr)]

    def is_trivial(self) -> bool:
        return not self.sectors

    @property
    def laurent(self) -> bool:
        return all(
            is_integer_constant(sec.epsilon) is not None
            for sec in self.sectors.values()
        )

    def single(self) -> OPESector:
        if len(self.sectors) != 1:
            raise ValueError(
                f"result has {len(self.sectors)} epsilon-sectors, not 1"
            )
        return next(iter(self.sectors.values()))

    def zero_sector_pole(self, d: int) -> FieldExpr:
        """Pole coefficient at order d in the epsilon = 0 sector."""
        k = CoeffK.zero().key()
        sec = self.sectors.get(k)
        if sec is None:
            return FieldExpr.zero()
        return sec.poles.get(d, FieldExpr.zero())

    def fractional_sectors(self) -> list[OPESector]:
        return [
            sec
            for sec in self.sector_list()
            if not sec.epsilon.is_zero()
        ]

    def to_json_dict(self) -> dict:
        secs = [sec.to_json_dict() for sec in self.sector_list()]
        out: dict = {"laurent": self.laurent}
        if len(secs) == 1:
            out.update(secs[0])
        else:
            out["sectors"] = secs
        return out

    def render(self) -> str:
        if not self.sectors:
            return "regular"
        chunks = []
        for sec in self.sector_list():
            eps = sec.epsilon.render()
            for d in sorted(sec.poles, reverse=True):
                chunks.append(f"[eps={eps}, d={d}] {sec.poles[d].render()}")
        return "\n".join(chunks)


def wick_ope(
    E: FieldExpr,
    F: FieldExpr,
    conv: ConventionConfig,
    extra_orders: int = 0,
) -> OPEResult:
    """Generalized Wick OPE of E(z) F(w).

    Sums over all cross-contraction subsets between z-factors and w-factors
    (and between sector-0 Heisenberg factors and the opposite exponential;
    exponentials have unlimited contraction capacity and always survive).
    Surviving z-content is Taylor-shifted to w so that every kept order is
    exact.  Orders d >= 1 - extra_orders are kept per sector; the default
    keeps exactly the singular orders.
    """
    sectors: dict = {}

    def emit(eps: CoeffK, d: int, monos: list[NOMono]):
        k = eps.key()
        sec = sectors.get(k)
        if sec is None:
            sec = sectors[k] = OPESector(eps, {})
        sec.poles[d] = sec.poles.get(d, FieldExpr.zero()) + FieldExpr(monos)

    d_min = 1 - extra_orders
    for mE in E.terms.values():
        for mF in F.terms.values():
            a, b = mE.momentum, mF.momentum
            eps, merged = merge_exponentials(ExpFactor(a), ExpFactor(b))
            zf = list(mE.factors)
            wf = list(mF.factors)

            # options per z-factor: uncontracted / w-factor j / w-exponential
            z_opts = []
            for g in zf:
                opts: list = [None]
                for jdx, h in enumerate(wf):
                    pr = contract_pair(g, h, conv)
                    if pr is not None:
                        opts.append(("w", jdx, pr))
                pe = contract_exp(g, ExpFactor(b), heis_at="z")
                if pe is not None:
                    opts.append(("exp", None, pe))
                z_opts.append(opts)

            w_exp_candidates = [
                (jdx, contract_exp(h, ExpFactor(a), heis_at="w"))
                for jdx, h in enumerate(wf)
            ]
            w_exp_candidates = [(j, pr) for j, pr in w_exp_candidates if pr is not None]

            for choice in itertools.product(*z_opts):
                used_w = set()
                ok = True
                base_order = 0
                base_coef = mE.coef * mF.coef
                surv_z = []
                for g, opt in zip(zf, choice):
                    if opt is None:
                        surv_z.append(g)
                        continue
                    tag, jdx, (order, coef) = opt
                    if tag == "w":
                        if jdx in used_w:
                            ok = False
                            break
                        used_w.add(jdx)
                    base_order += order
                    base_coef = base_coef * coef
                if not ok:
                    continue
                free_w_exp = [(j, pr) for j, pr in w_exp_candidates if j not in used_w]
                for subset in itertools.chain.from_iterable(
                    itertools.combinations(free_w_exp, rr)
                    for rr in range(len(free_w_exp) + 1)
                ):
                    D = base_order
                    coef = base_coef
                    used2 = set(used_w)
                    for j, (order, pcoef) in subset:
                        used2.add(j)
                        D += order
                        coef = coef * pcoef
                    if coef.is_zero():
                        continue
                    n_max = D - d_min
                    if n_max < 0:
                        continue
                    surv_w = [h for jdx, h in enumerate(wf) if jdx not in used2]
                    shifted = taylor_shift(
                        NOMono(coef, surv_z, a), n_max
                    )
                    for n, fe in shifted.items():
                        d = D - n
                        if d < d_min:
                            continue
                        monos = [
                            NOMono(mo.coef, mo.factors + tuple(surv_w), mo.momentum + b)
                            for mo in fe.terms.values()
                        ]
                        if monos:
                            emit(eps, d, monos)

    return OPEResult(sectors.values())


# ---------------------------------------------------------------------------
# Charges and Laurent classification
# ---------------------------------------------------------------------------


def charge_of(
    probe: FieldExpr, F: FieldExpr, conv: ConventionConfig
) -> Optional[CoeffK]:
    """The scalar lam with first-order pole of probe(z) F(w) = lam * F(w).

    Returns None if the first-order pole is not a scalar multiple of F.
    Prerequisite: the probe carries no exponential, so the OPE stays in the
    epsilon = 0 sector.
    """
    if F.is_zero():
        return None
    res = wick_ope(probe, F, conv)
    pole1 = res.zero_sector_pole(1)
    if pole1.is_zero():
        return CoeffK.zero()
    # candidate scalar from any shared monomial of F
    lam = None
    for k, mo in F.terms.items():
        other = pole1.terms.get(k)
        if other is not None:
            lam = other.coef / mo.coef
            break
    if lam is None:
        return None
    return lam if pole1 == F.scale(lam) else None


def is_laurent(result: OPEResult, k_val: Optional[Fraction] = None):
    """Classify the singular structure (generalized Laurent arithmetic).

    Returns one of: ("laurent",), ("branch_cut",), ("integer_pole", n),
    ("regular",) following the arithmetic of the fractional prefactor
    exponent, optionally after specializing k.  A non-integer exponent is a
    branch cut; exponent -n with n >= 1 guarantees an integer-order pole of
    order at least n; a non-negative integer exponent makes the prefactor
    regular (poles from other contractions, if any, are reported by the
    callers alongside, not folded into this arithmetic classification).  A
    result whose sectors all carry integer-zero exponents is an ordinary
    Laurent series.
    """
    if result.is_trivial():
        return ("regular",)
    fracs = result.fractional_sectors()
    if not fracs:
        has_pole = any(
            d >= 1 for sec in result.sector_list() for d in sec.poles
        )
        return ("laurent",) if has_pole else ("regular",)
    # classify by the (unique, in all uses here) fractional exponent
    eps = fracs[0].epsilon
    if k_val is not None:
        eps = specialize(eps, None, Fraction(k_val))
    n = is_integer_constant(eps)
    if n is None:
        return ("branch_cut",)
    if n <= -1:
        return ("integer_pole", -n)
    return ("regular",)
