"""The superelliptic ring A = C[t, t^-1, u] / (u^m - p(t)).

Here p(t) = 1 - 2c*t^r + t^(2r) with m >= 2 and r >= 2.  Elements are graded
by u-degree mod m: one Laurent polynomial in t per sector l in {0, .., m-1}.
Multiplication eagerly rewrites u^m -> p(t), so every element has a unique
normal form and equality is structural.

Values are immutable; all operations return fresh elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .coeffs import CoeffK

# A Laurent polynomial in t: finite map exponent -> CoeffK, no zero entries.
LaurentT = dict


@dataclass(frozen=True)
class RingParams:
    m: int
    r: int

    def __post_init__(self):
        if self.m < 2 or self.r < 2:
            raise ValueError("superelliptic parameters require m >= 2 and r >= 2")


def laurent_clean(d: dict[int, CoeffK]) -> dict[int, CoeffK]:
    return {e: v for e, v in d.items() if not v.is_zero()}

def laurent_add(a: dict[int, CoeffK], b: dict[int, CoeffK]) -> dict[int, CoeffK]:
    out = dict(a)
    for e, v in b.items():
        w = out.get(e)
        w = v if w is None else w + v
        if w.is_zero():
            out.pop(e, None)
        else:
            out[e] = w
    return out

def laurent_scale(a: dict[int, CoeffK], q: CoeffK) -> dict[int, CoeffK]:
    if q.is_zero():
        return {}
    return {e: v * q for e, v in a.items()}

def laurent_mul(a: dict[int, CoeffK], b: dict[int, CoeffK]) -> dict[int, CoeffK]:
    out: dict[int, CoeffK] = {}
    for e1, v1 in a.items():
        for e2, v2 in b.items():
            e = e1 + e2
            w = out.get(e)
            w = v1 * v2 if w is None else w + v1 * v2
            if w.is_zero():
                out.pop(e, None)
            else:
                out[e] = w
    return out

def laurent_render(a: dict[int, CoeffK]) -> str:
    if not a:
        return "0"
    parts = []
    for e in sorted(a):
        coef = a[e].render()
        if "+" in coef or (coef.count("-") and not coef.startswith("-")):
            coef = f"({coef})"
        if e == 0:
            parts.append(coef)
        else:
            te = "t" if e == 1 else f"t^{e}"
            parts.append(te if coef == "1" else f"{coef}*{te}")
    return " + ".join(parts)


def p_laurent(params: RingParams) -> dict[int, CoeffK]:
    """p(t) = 1 - 2c t^r + t^(2r) as a Laurent polynomial."""
    c2 = CoeffK.from_int(-2) * CoeffK.c()
    return {0: CoeffK.one(), params.r: c2, 2 * params.r: CoeffK.one()}

def dp_laurent(params: RingParams) -> dict[int, CoeffK]:
    """p'(t) = -2cr t^(r-1) + 2r t^(2r-1)."""
    r = params.r
    return {
        r - 1: CoeffK.from_int(-2 * r) * CoeffK.c(),
        2 * r - 1: CoeffK.from_int(2 * r),
    }


class RingElem:
    """Graded element of A: map sector l -> Laurent polynomial in t."""

    __slots__ = ("params", "sectors")

    def __init__(self, params: RingParams, sectors: dict[int, dict[int, CoeffK]] | None = None):
        self.params = params
        clean: dict[int, dict[int, CoeffK]] = {}
        if sectors:
            for l, lt in sectors.items():
                if not 0 <= l < params.m:
                    raise ValueError(f"sector {l} out of range for m={params.m}")
                lt = laurent_clean(lt)
                if lt:
                    clean[l] = lt
        self.sectors = clean

    # -- constructors
    @staticmethod
    def zero(params: RingParams) -> "RingElem":
        return RingElem(params)

    @staticmethod
    def monomial(params: RingParams, coef: CoeffK, t_exp: int, u_exp: int) -> "RingElem":
        """coef * t^t_exp * u^u_exp, with u_exp >= 0 reduced mod the relation."""
        if u_exp < 0:
            raise ValueError("u exponent must be non-negative")
        elem = RingElem(params, {0: {t_exp: coef}})
        p = p_laurent(params)
        while u_exp >= params.m:
            elem = RingElem(
                params, {l: laurent_mul(lt, p) for l, lt in elem.sectors.items()}
            )
            u_exp -= params.m
        if u_exp:
            elem = RingElem(params, {u_exp: elem.sectors.get(0, {})})
        return elem

    @staticmethod
    def one(params: RingParams) -> "RingElem":
        return RingElem.monomial(params, CoeffK.one(), 0, 0)

    def is_zero(self) -> bool:
        return not self.sectors

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RingElem)
            and self.params == other.params
            and self.sectors == other.sectors
        )

    def __hash__(self):
        return hash(
            (
                self.params,
                frozenset((l, frozenset(lt.items())) for l, lt in self.sectors.items()),
            )
        )

    def __add__(self, other: "RingElem") -> "RingElem":
        self._check(other)
        out = {l: dict(lt) for l, lt in self.sectors.items()}
        for l, lt in other.sectors.items():
            out[l] = laurent_add(out.get(l, {}), lt)
        return RingElem(self.params, out)

    def __neg__(self) -> "RingElem":
        none = CoeffK.from_int(-1)
        return RingElem(
            self.params, {l: laurent_scale(lt, none) for l, lt in self.sectors.items()}
        )

    def __sub__(self, other: "RingElem") -> "RingElem":
        return self + (-other)

    def scale(self, q: CoeffK) -> "RingElem":
        return RingElem(
            self.params, {l: laurent_scale(lt, q) for l, lt in self.sectors.items()}
        )

    def _check(self, other: "RingElem"):
        if self.params != other.params:
            raise ValueError("ring parameter mismatch")

    def monomials(self) -> Iterable[tuple[int, int, CoeffK]]:
        """Yield (t_exp, sector, coef) over all stored monomials."""
        for l in sorted(self.sectors):
            for e in sorted(self.sectors[l]):
                yield e, l, self.sectors[l][e]

    def render(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for e, l, v in self.monomials():
            coef = v.render()
            if "+" in coef or (coef.count("-") and not coef.startswith("-")):
                coef = f"({coef})"
            factors = []
            if e:
                factors.append("t" if e == 1 else f"t^{e}")
            if l:
                factors.append("u" if l == 1 else f"u^{l}")
            body = "*".join(factors) if factors else "1"
            parts.append(body if coef == "1" and factors else
                         coef if not factors else f"{coef}*{body}")
        return " + ".join(parts)

    def __repr__(self):
        return f"RingElem({self.render()})"


def ring_mul(a: RingElem, b: RingElem) -> RingElem:
    """Graded product in A with eager reduction u^m -> p(t)."""
    a._check(b)
    m = a.params.m
    p = p_laurent(a.params)
    out: dict[int, dict[int, CoeffK]] = {}
    for l1, lt1 in a.sectors.items():
        for l2, lt2 in b.sectors.items():
            prod = laurent_mul(lt1, lt2)
            l = l1 + l2
            if l >= m:
                l -= m
                prod = laurent_mul(prod, p)
            out[l] = laurent_add(out.get(l, {}), prod)
    return RingElem(a.params, out)


def decompose_sectors(a: RingElem) -> list[tuple[int, dict[int, CoeffK]]]:
    """Nonzero graded components, ascending sector."""
    return [(l, dict(a.sectors[l])) for l in sorted(a.sectors)]
