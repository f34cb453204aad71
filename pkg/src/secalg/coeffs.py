"""Exact coefficient arithmetic.

Three layers, all over arbitrary-precision rationals (``fractions.Fraction``):

* ``PolyC``   -- sparse univariate polynomials in the curve parameter ``c``.
* ``Poly2``   -- sparse bivariate polynomials in ``c`` and ``s``.
* ``CoeffK``  -- the coefficient field Frac(Q[c, s]), stored as a canonical
  reduced fraction of two ``Poly2`` values.

``s`` is the primitive level variable; the level itself is ``k = s**2`` and
is rewritten into ``s`` on input and out of ``s`` only for display or
specialization.  Canonical form: gcd-reduced fraction whose denominator has
leading coefficient 1 under graded-lex order with ``c < s``.  Equality of
canonical forms is structural, so it is decidable and unique.

All values are immutable after construction and every operation is a pure
function, so values can be shared freely across threads.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

Rat = Fraction  # arbitrary-precision rational: gcd-reduced, positive denominator


class SpecializationError(ValueError):
    """Raised when a substitution would leave the rational field."""


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def rat_sqrt(q: Fraction) -> Optional[Fraction]:
    """Exact square root of a rational, or None if irrational/negative."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        return None
    return Fraction(rn, rd)


# ---------------------------------------------------------------------------
# Univariate polynomials in c
# ---------------------------------------------------------------------------


class PolyC:
    """Sparse polynomial in ``c`` with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[dict[int, Fraction]] = None):
        clean: dict[int, Fraction] = {}
        if coeffs:
            for e, v in coeffs.items():
                v = Fraction(v)
                if v != 0:
                    if e < 0:
                        raise ValueError("PolyC exponents must be non-negative")
                    clean[e] = v
        self.coeffs = clean

    # -- constructors
    @staticmethod
    def zero() -> "PolyC":
        return PolyC()

    @staticmethod
    def const(v) -> "PolyC":
        return PolyC({0: Fraction(v)})

    @staticmethod
    def c(power: int = 1) -> "PolyC":
        return PolyC({power: Fraction(1)})

    # -- queries
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return max(self.coeffs) if self.coeffs else -1

    def leading(self) -> Fraction:
        return self.coeffs[self.degree()] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyC) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    # -- arithmetic
    def __add__(self, other: "PolyC") -> "PolyC":
        out = dict(self.coeffs)
        for e, v in other.coeffs.items():
            w = out.get(e, Fraction(0)) + v
            if w:
                out[e] = w
            else:
                out.pop(e, None)
        return PolyC(out)

    def __neg__(self) -> "PolyC":
        return PolyC({e: -v for e, v in self.coeffs.items()})

    def __sub__(self, other: "PolyC") -> "PolyC":
        return self + (-other)

    def __mul__(self, other) -> "PolyC":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return PolyC({e: v * q for e, v in self.coeffs.items()}) if q else PolyC()
        out: dict[int, Fraction] = {}
        for e1, v1 in self.coeffs.items():
            for e2, v2 in other.coeffs.items():
                e = e1 + e2
                w = out.get(e, Fraction(0)) + v1 * v2
                if w:
                    out[e] = w
                else:
                    out.pop(e, None)
        return PolyC(out)

    __rmul__ = __mul__

    def scale(self, q) -> "PolyC":
        return self * Fraction(q)

    def divmod(self, other: "PolyC") -> tuple["PolyC", "PolyC"]:
        if other.is_zero():
            raise ZeroDivisionError("PolyC division by zero")
        rem = dict(self.coeffs)
        quo: dict[int, Fraction] = {}
        dob, lob = other.degree(), other.leading()
        while rem and max(rem) >= dob:
            e = max(rem)
            f = rem[e] / lob
            quo[e - dob] = f
            for eo, vo in other.coeffs.items():
                ee = e - dob + eo
                w = rem.get(ee, Fraction(0)) - f * vo
                if w:
                    rem[ee] = w
                else:
                    rem.pop(ee, None)
        return PolyC(quo), PolyC(rem)

    def divexact(self, other: "PolyC") -> "PolyC":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact PolyC division")
        return q

    def monic(self) -> "PolyC":
        if self.is_zero():
            return self
        return self * (1 / self.leading())

    @staticmethod
    def gcd(a: "PolyC", b: "PolyC") -> "PolyC":
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def eval(self, c_val) -> Fraction:
        q = Fraction(c_val)
        return sum((v * q**e for e, v in self.coeffs.items()), Fraction(0))

    # -- rendering
    def render(self) -> str:
        """Canonical text, e.g. ``8/5*c^2 - 3/5``."""
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            v = self.coeffs[e]
            mag = abs(v)
            if e == 0:
                body = _frac_str(mag)
            elif mag == 1:
                body = "c" if e == 1 else f"c^{e}"
            else:
                body = f"{_frac_str(mag)}*c" + (f"^{e}" if e > 1 else "")
            parts.append(("-" if v < 0 else "+", body))
        sign0, body0 = parts[0]
        text = ("-" if sign0 == "-" else "") + body0
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def render_ratio(self) -> str:
        """Common-denominator display, e.g. ``(8*c^2 - 3)/5``."""
        if self.is_zero():
            return "0"
        den = 1
        for v in self.coeffs.values():
            den = den * v.denominator // math.gcd(den, v.denominator)
        num = PolyC({e: v * den for e, v in self.coeffs.items()})
        text = num.render()
        if den == 1:
            return text
        if len(num.coeffs) > 1:
            text = f"({text})"
        return f"{text}/{den}"

    def __repr__(self) -> str:
        return f"PolyC({self.render()})"


# ---------------------------------------------------------------------------
# Bivariate polynomials in c and s
# ---------------------------------------------------------------------------


def _grlex_key(mono: tuple[int, int]) -> tuple[int, int]:
    ec, es = mono
    return (ec + es, es)  # total degree, then s-exponent (c < s)


class Poly2:
    """Sparse polynomial in ``c`` and ``s``; monomials keyed ``(ec, es)``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[dict[tuple[int, int], Fraction]] = None):
        clean: dict[tuple[int, int], Fraction] = {}
        if coeffs:
            for m, v in coeffs.items():
                v = Fraction(v)
                if v != 0:
                    if m[0] < 0 or m[1] < 0:
                        raise ValueError("Poly2 exponents must be non-negative")
                    clean[m] = v
        self.coeffs = clean

    @staticmethod
    def zero() -> "Poly2":
        return Poly2()

    @staticmethod
    def const(v) -> "Poly2":
        return Poly2({(0, 0): Fraction(v)})

    @staticmethod
    def var_c() -> "Poly2":
        return Poly2({(1, 0): Fraction(1)})

    @staticmethod
    def var_s(power: int = 1) -> "Poly2":
        return Poly2({(0, power): Fraction(1)})

    @staticmethod
    def from_polyc(p: PolyC) -> "Poly2":
        return Poly2({(e, 0): v for e, v in p.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return not self.coeffs or set(self.coeffs) == {(0, 0)}

    def const_value(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        if not self.is_const():
            raise ValueError("not a constant polynomial")
        return self.coeffs[(0, 0)]

    def leading_mono(self) -> tuple[int, int]:
        return max(self.coeffs, key=_grlex_key)

    def leading_coeff(self) -> Fraction:
        return self.coeffs[self.leading_mono()] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly2) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "Poly2") -> "Poly2":
        out = dict(self.coeffs)
        for m, v in other.coeffs.items():
            w = out.get(m, Fraction(0)) + v
            if w:
                out[m] = w
            else:
                out.pop(m, None)
        return Poly2(out)

    def __neg__(self) -> "Poly2":
        return Poly2({m: -v for m, v in self.coeffs.items()})

    def __sub__(self, other: "Poly2") -> "Poly2":
        return self + (-other)

    def __mul__(self, other) -> "Poly2":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return Poly2({m: v * q for m, v in self.coeffs.items()}) if q else Poly2()
        out: dict[tuple[int, int], Fraction] = {}
        for (c1, s1), v1 in self.coeffs.items():
            for (c2, s2), v2 in other.coeffs.items():
                m = (c1 + c2, s1 + s2)
                w = out.get(m, Fraction(0)) + v1 * v2
                if w:
                    out[m] = w
                else:
                    out.pop(m, None)
        return Poly2(out)

    __rmul__ = __mul__

    def scale(self, q) -> "Poly2":
        return self * Fraction(q)

    # -- structure as a polynomial in s over Q[c]
    def s_coeffs(self) -> dict[int, PolyC]:
        out: dict[int, PolyC] = {}
        for (ec, es), v in self.coeffs.items():
            out.setdefault(es, PolyC())  # placeholder, replaced below
        tmp: dict[int, dict[int, Fraction]] = {}
        for (ec, es), v in self.coeffs.items():
            tmp.setdefault(es, {})[ec] = v
        return {es: PolyC(d) for es, d in tmp.items()}

    @staticmethod
    def from_s_coeffs(sc: dict[int, PolyC]) -> "Poly2":
        out: dict[tuple[int, int], Fraction] = {}
        for es, p in sc.items():
            for ec, v in p.coeffs.items():
                out[(ec, es)] = v
        return Poly2(out)

    def s_degree(self) -> int:
        return max((es for (_ec, es) in self.coeffs), default=-1)

    def divexact_polyc(self, d: PolyC) -> "Poly2":
        sc = self.s_coeffs()
        return Poly2.from_s_coeffs({es: p.divexact(d) for es, p in sc.items()})

    def divexact(self, other: "Poly2") -> "Poly2":
        """Exact multivariate division (raises if not divisible)."""
        if other.is_zero():
            raise ZeroDivisionError("Poly2 division by zero")
        rem = Poly2(dict(self.coeffs))
        quo: dict[tuple[int, int], Fraction] = {}
        lm, lc = other.leading_mono(), other.leading_coeff()
        while not rem.is_zero():
            rm, rv = rem.leading_mono(), rem.leading_coeff()
            dm = (rm[0] - lm[0], rm[1] - lm[1])
            if dm[0] < 0 or dm[1] < 0:
                raise ArithmeticError("inexact Poly2 division")
            f = rv / lc
            quo[dm] = f
            rem = rem - Poly2({dm: f}) * other
        return Poly2(quo)

    def content_c(self) -> PolyC:
        """Monic gcd in Q[c] of the s-coefficients (1 for the zero poly)."""
        g = PolyC()
        for p in self.s_coeffs().values():
            g = PolyC.gcd(g, p)
            if g.degree() == 0:
                break
        return g if not g.is_zero() else PolyC.const(1)

    @staticmethod
    def gcd(a: "Poly2", b: "Poly2") -> "Poly2":
        """gcd in Q[c, s], primitive-PRS on s over Q[c]; unit-normalized monic."""
        if a.is_zero():
            return Poly2(dict(b.coeffs)) * (1 / b.leading_coeff()) if not b.is_zero() else Poly2()
        if b.is_zero():
            return Poly2(dict(a.coeffs)) * (1 / a.leading_coeff())
        ca, cb = a.content_c(), b.content_c()
        pa, pb = a.divexact_polyc(ca), b.divexact_polyc(cb)
        cg = PolyC.gcd(ca, cb)
        A, B = pa.s_coeffs(), pb.s_coeffs()

        def sdeg(P):
            return max(P, default=-1)

        if sdeg(A) < sdeg(B):
            A, B = B, A
        while True:
            if not B:
                G = Poly2.from_s_coeffs(A)
                gc = G.content_c()
                G = G.divexact_polyc(gc)
                break
            da, db = sdeg(A), sdeg(B)
            if db == 0:
                # primitive degree-0 in s: gcd of primitive parts is a unit
                G = Poly2.const(1)
                break
            # pseudo-remainder of A by B in (Q[c])[s]
            lb = B[db]
            R = {e: PolyC(dict(p.coeffs)) for e, p in A.items()}
            for _ in range(da - db + 1):
                dr = sdeg(R)
                if dr < db:
                    break
                lr = R[dr]
                R = {e: p * lb for e, p in R.items()}
                for eb, pb2 in B.items():
                    ee = dr - db + eb
                    q = R.get(ee, PolyC()) - lr * pb2
                    if q.is_zero():
                        R.pop(ee, None)
                    else:
                        R[ee] = q
                R = {e: p for e, p in R.items() if not p.is_zero()}
            if sdeg(R) >= db:
                raise ArithmeticError("pseudo-division failed to reduce degree")
            Rp = Poly2.from_s_coeffs(R)
            if Rp.is_zero():
                A, B = B, {}
            else:
                Rp = Rp.divexact_polyc(Rp.content_c())
                A, B = B, Rp.s_coeffs()
        G = G * Poly2.from_polyc(cg)
        if G.is_zero():
            return Poly2.const(1)
        return G * (1 / G.leading_coeff())

    def eval(self, c_val: Fraction, s_val: Fraction) -> Fraction:
        tot = Fraction(0)
        for (ec, es), v in self.coeffs.items():
            tot += v * c_val**ec * s_val**es
        return tot

    # -- rendering
    @staticmethod
    def _mono_text(ec: int, es: int, coef: Fraction, k_style: bool) -> str:
        factors = []
        mag = abs(coef)
        if ec:
            factors.append("c" if ec == 1 else f"c^{ec}")
        if es:
            if k_style:
                kk, rr = divmod(es, 2)
                if kk:
                    factors.append("k" if kk == 1 else f"k^{kk}")
                if rr:
                    factors.append("s")
            else:
                factors.append("s" if es == 1 else f"s^{es}")
        if not factors:
            return _frac_str(mag)
        body = "*".join(factors)
        return body if mag == 1 else f"{_frac_str(mag)}*{body}"

    def render(self, k_style: bool = False) -> str:
        if not self.coeffs:
            return "0"
        monos = sorted(self.coeffs, key=_grlex_key, reverse=True)
        first = monos[0]
        v0 = self.coeffs[first]
        text = ("-" if v0 < 0 else "") + self._mono_text(first[0], first[1], v0, k_style)
        for m in monos[1:]:
            v = self.coeffs[m]
            text += f" {'-' if v < 0 else '+'} {self._mono_text(m[0], m[1], v, k_style)}"
        return text

    def __repr__(self) -> str:
        return f"Poly2({self.render()})"


_P2_ONE = Poly2.const(1)


# ---------------------------------------------------------------------------
# The coefficient field Frac(Q[c, s])
# ---------------------------------------------------------------------------


class CoeffK:
    """Element of Frac(Q[c, s]) in canonical reduced form.

    Canonicalization: numerator and denominator coprime in Q[c, s], the
    denominator's graded-lex leading coefficient equal to 1.  Structural
    equality of canonical forms decides equality in the field.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly2, den: Poly2 = _P2_ONE, _canonical: bool = False):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator in CoeffK")
        if _canonical:
            self.num, self.den = num, den
            return
        if num.is_zero():
            self.num, self.den = Poly2.zero(), _P2_ONE
            return
        if den == _P2_ONE:
            self.num, self.den = num, den
            return
        if den.is_const():
            self.num, self.den = num * (1 / den.const_value()), _P2_ONE
            return
        g = Poly2.gcd(num, den)
        if not (g.is_const() and g.const_value() == 1):
            num, den = num.divexact(g), den.divexact(g)
        lc = den.leading_coeff()
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        self.num, self.den = num, den

    # -- constructors
    @staticmethod
    def zero() -> "CoeffK":
        return CoeffK(Poly2.zero(), _P2_ONE, _canonical=True)

    @staticmethod
    def one() -> "CoeffK":
        return CoeffK(_P2_ONE, _P2_ONE, _canonical=True)

    @staticmethod
    def from_int(n: int) -> "CoeffK":
        return CoeffK(Poly2.const(n))

    @staticmethod
    def from_rat(q) -> "CoeffK":
        return CoeffK(Poly2.const(Fraction(q)))

    @staticmethod
    def from_polyc(p: PolyC) -> "CoeffK":
        return CoeffK(Poly2.from_polyc(p))

    @staticmethod
    def c() -> "CoeffK":
        return CoeffK(Poly2.var_c())

    @staticmethod
    def s(power: int = 1) -> "CoeffK":
        if power >= 0:
            return CoeffK(Poly2.var_s(power))
        return CoeffK(_P2_ONE, Poly2.var_s(-power))

    @staticmethod
    def k() -> "CoeffK":
        return CoeffK.s(2)

    @staticmethod
    def alpha() -> "CoeffK":
        """The charge-normalizing momentum 1/s."""
        return CoeffK.s(-1)

    # -- queries
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == _P2_ONE and self.den == _P2_ONE

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = CoeffK.from_int(other)
        return isinstance(other, CoeffK) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(self.key())

    def key(self):
        """Hashable canonical key (usable as a dict key for like-term merging)."""
        return (frozenset(self.num.coeffs.items()), frozenset(self.den.coeffs.items()))

    # -- field arithmetic
    def __add__(self, other: "CoeffK") -> "CoeffK":
        if isinstance(other, int):
            other = CoeffK.from_int(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return CoeffK(self.num + other.num, self.den)
        return CoeffK(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "CoeffK":
        return CoeffK(-self.num, self.den, _canonical=True)

    def __sub__(self, other: "CoeffK") -> "CoeffK":
        if isinstance(other, int):
            other = CoeffK.from_int(other)
        return self + (-other)

    def __rsub__(self, other) -> "CoeffK":
        return (-self) + other

    def __mul__(self, other) -> "CoeffK":
        if isinstance(other, (int, Fraction)):
            other = CoeffK.from_rat(other)
        if self.is_zero() or other.is_zero():
            return CoeffK.zero()
        return CoeffK(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inv(self) -> "CoeffK":
        if self.is_zero():
            raise ZeroDivisionError("inverting zero CoeffK")
        return CoeffK(self.den, self.num)

    def __truediv__(self, other) -> "CoeffK":
        if isinstance(other, (int, Fraction)):
            other = CoeffK.from_rat(other)
        return self * other.inv()

    def __pow__(self, n: int) -> "CoeffK":
        if n < 0:
            return self.inv() ** (-n)
        out = CoeffK.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- constants
    def as_rational(self) -> Optional[Fraction]:
        """The value as a rational constant, or None."""
        if self.num.is_const() and self.den == _P2_ONE:
            return self.num.const_value()
        return None

    def render(self, k_style: bool = False) -> str:
        if self.den == _P2_ONE:
            return self.num.render(k_style)
        ns = self.num.render(k_style)
        ds = self.den.render(k_style)
        if len(self.num.coeffs) > 1:
            ns = f"({ns})"
        if len(self.den.coeffs) > 1:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self) -> str:
        return f"CoeffK({self.render()})"


# ---------------------------------------------------------------------------
# Spec operations
# ---------------------------------------------------------------------------


def field_ops(a: CoeffK, b: CoeffK, op: str) -> CoeffK:
    """Field arithmetic dispatch; op in {add, sub, mul, div}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise ZeroDivisionError("field_ops: division by zero")
        return a / b
    raise ValueError(f"unknown field op {op!r}")


def specialize(
    x: CoeffK, c_val: Optional[Fraction] = None, k_val: Optional[Fraction] = None
) -> CoeffK:
    """Substitute c -> c_val and/or k = s**2 -> k_val.

    Odd powers of s require k_val to be the square of a rational; otherwise
    the specialization is refused (the result would be irrational).
    """
    s_sqrt: Optional[Fraction] = None
    if k_val is not None:
        k_val = Fraction(k_val)
        has_odd = any(
            es % 2 for (_ec, es) in list(x.num.coeffs) + list(x.den.coeffs)
        )
        if has_odd:
            s_sqrt = rat_sqrt(k_val)
            if s_sqrt is None:
                raise SpecializationError(
                    f"irrational specialization: sqrt({k_val}) is not rational "
                    "and odd powers of s are present"
                )
    if c_val is not None:
        c_val = Fraction(c_val)

    def sub_poly(p: Poly2) -> Poly2:
        out = Poly2.zero()
        for (ec, es), v in p.coeffs.items():
            term = Poly2.const(v)
            if c_val is None:
                if ec:
                    term = term * Poly2({(ec, 0): Fraction(1)})
            else:
                term = term * (c_val**ec)
            if k_val is None:
                if es:
                    term = term * Poly2({(0, es): Fraction(1)})
            else:
                q, rem = divmod(es, 2)
                factor = k_val**q
                if rem:
                    factor *= s_sqrt
                term = term * factor
            out = out + term
        return out

    den = sub_poly(x.den)
    if den.is_zero():
        raise ZeroDivisionError("specialization makes the denominator vanish")
    return CoeffK(sub_poly(x.num), den)


def is_integer_constant(x: CoeffK) -> Optional[int]:
    """The value as a plain integer if x is a constant integer, else None."""
    q = x.as_rational()
    if q is not None and q.denominator == 1:
        return int(q)
    return None
