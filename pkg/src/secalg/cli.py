"""Command-line surface: expression parsers, subcommands, report emitters.

Subcommands wrap the verification operations one-to-one; every command takes
its parameters explicitly (no config files), output is deterministic, and
the exit status is nonzero exactly when an asserted check fails.

Grammar (shared tokens; byte offsets reported on error):

    coefficient := rational | "c" | "s" | "k" | "(" coef ")"
                   combined with "+", "-", "*", "/", and "^" int
    ring elem   := term ("+"|"-" term)*,
                   term := item ("*" item)*, item := coefficient | "t"["^"int]
                   | "u"["^"int]
    field expr  := term ("+"|"-" term)*,
                   term := item ("*" item)*,
                   item := coefficient | gen | "no(" term ")"
                   | "exp(" coef "," "phi0" ")" | "D(" factor "," int ")",
                   gen := ("beta"|"gamma"|"b") "[" int "]"
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .coeffs import CoeffK
from .families import (
    INDEX_RECONCILIATION_NOTE,
    FamilySpec,
    family_table,
    rescaling_check,
)
from .kahler import DiffForm, RingParams, basis_dim, reduce_oracle
from .ope import FieldExpr, is_laurent, wick_ope
from .ring import RingElem
from .uce import CurrentElem, UCEElem, formula_vs_oracle, uce_bracket_formula, uce_bracket_oracle
from . import wakimoto


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at byte offset {pos})")
        self.pos = pos


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_PUNCT = ("+", "-", "*", "/", "^", "(", ")", "[", "]", ",")


def _tokenize(src: str):
    toks = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(("int", src[i:j], i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(("name", src[i:j], i))
            i = j
            continue
        if ch in _PUNCT:
            toks.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str):
        t = self.next()
        if t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[1]!r}", t[2])
        return t

    def fail(self, msg: str):
        t = self.peek()
        raise ParseError(msg + f", found {t[1]!r}", t[2])

    # -- coefficient expressions ------------------------------------------
    def coef_expr(self) -> CoeffK:
        val = self.coef_term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.coef_term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def coef_term(self) -> CoeffK:
        val = self.coef_power()
        while self.peek()[0] in ("*", "/"):
            op = self.next()[0]
            rhs = self.coef_power()
            if op == "*":
                val = val * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by zero", self.peek()[2])
                val = val / rhs
        return val

    def coef_power(self) -> CoeffK:
        val = self.coef_atom()
        while self.peek()[0] == "^":
            self.next()
            neg = False
            if self.peek()[0] == "-":
                self.next()
                neg = True
            t = self.expect("int")
            e = int(t[1])
            val = val ** (-e if neg else e)
        return val

    def coef_item(self) -> CoeffK:
        """A coefficient factor with power/division chains; '*' not consumed."""
        val = self.coef_power()
        while self.peek()[0] == "/":
            self.next()
            rhs = self.coef_power()
            if rhs.is_zero():
                raise ParseError("division by zero", self.peek()[2])
            val = val / rhs
        return val

    def coef_atom(self) -> CoeffK:
        t = self.peek()
        if t[0] == "-":
            self.next()
            return CoeffK.zero() - self.coef_power()
        if t[0] == "int":
            self.next()
            return CoeffK.from_int(int(t[1]))
        if t[0] == "(":
            self.next()
            val = self.coef_expr()
            self.expect(")")
            return val
        if t[0] == "name":
            if t[1] == "c":
                self.next()
                return CoeffK.c()
            if t[1] == "s":
                self.next()
                return CoeffK.s()
            if t[1] == "k":
                self.next()
                return CoeffK.k()
        self.fail("expected a coefficient")

    # -- ring elements -----------------------------------------------------
    def ring_expr(self, params: RingParams) -> RingElem:
        val = self.ring_term(params)
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.ring_term(params)
            val = val + rhs if op == "+" else val - rhs
        return val

    def ring_term(self, params: RingParams) -> RingElem:
        coef = CoeffK.one()
        t_exp = 0
        u_exp = 0
        neg = False
        if self.peek()[0] == "-":
            self.next()
            neg = True
        while True:
            t = self.peek()
            if t[0] == "name" and t[1] in ("t", "u"):
                self.next()
                e = 1
                if self.peek()[0] == "^":
                    self.next()
                    sign = 1
                    if self.peek()[0] == "-":
                        self.next()
                        sign = -1
                    e = sign * int(self.expect("int")[1])
                if t[1] == "t":
                    t_exp += e
                else:
                    if e < 0:
                        raise ParseError("u exponent must be non-negative", t[2])
                    u_exp += e
            else:
                coef = coef * self.coef_item()
            if self.peek()[0] == "*":
                self.next()
                continue
            break
        if neg:
            coef = CoeffK.zero() - coef
        return RingElem.monomial(params, coef, t_exp, u_exp)

    # -- field expressions ---------------------------------------------------
    def field_expr(self, m: int) -> FieldExpr:
        val = self.field_term(m)
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.field_term(m)
            val = val + rhs if op == "+" else val - rhs
        return val

    def field_term(self, m: int) -> FieldExpr:
        neg = False
        if self.peek()[0] == "-":
            self.next()
            neg = True
        val = self.field_item(m)
        while self.peek()[0] == "*":
            self.next()
            val = val * self.field_item(m)
        return val.scale(CoeffK.from_int(-1)) if neg else val

    def field_item(self, m: int) -> FieldExpr:
        t = self.peek()
        if t[0] == "name" and t[1] in ("beta", "gamma", "b"):
            return self.field_gen(m)
        if t[0] == "name" and t[1] == "no":
            self.next()
            self.expect("(")
            inner = self.field_term(m)
            self.expect(")")
            return inner
        if t[0] == "name" and t[1] == "exp":
            self.next()
            self.expect("(")
            mom = self.coef_expr()
            self.expect(",")
            nm = self.expect("name")
            if nm[1] != "phi0":
                raise ParseError("only the sector-0 scalar 'phi0' is supported", nm[2])
            self.expect(")")
            return FieldExpr.exponential(mom)
        if t[0] == "name" and t[1] == "D":
            self.next()
            self.expect("(")
            inner = self.field_item(m)
            self.expect(",")
            order = int(self.expect("int")[1])
            self.expect(")")
            for _ in range(order):
                inner = inner.derivative()
            return inner
        # otherwise a coefficient item: power/division chains bind here,
        # "*" returns to the enclosing field term
        return FieldExpr.const(self.coef_item())

    def field_gen(self, m: int) -> FieldExpr:
        t = self.expect("name")
        kind = {"beta": "beta", "gamma": "gamma", "b": "heis"}[t[1]]
        self.expect("[")
        st = self.expect("int")
        sector = int(st[1])
        self.expect("]")
        if not 0 <= sector < m:
            raise ParseError(f"sector {sector} out of range for m={m}", st[2])
        return FieldExpr.generator(kind, sector)

    def done(self):
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"trailing input {t[1]!r}", t[2])


def parse_coef(src: str) -> CoeffK:
    p = _Parser(src)
    val = p.coef_expr()
    p.done()
    return val


def parse_ring_elem(src: str, params: RingParams) -> RingElem:
    p = _Parser(src)
    val = p.ring_expr(params)
    p.done()
    return val


def parse_field_expr(src: str, m: int) -> FieldExpr:
    """Parse the field-expression grammar; sector indices range-checked."""
    p = _Parser(src)
    val = p.field_expr(m)
    p.done()
    return val


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

COMMANDS = (
    "families",
    "rescaling",
    "kahler-reduce",
    "dim",
    "bracket",
    "bracket-audit",
    "ope",
    "charges",
    "obstructions",
    "critical-levels",
    "calibrate",
)


@dataclass
class Command:
    name: str
    params: dict = field(default_factory=dict)


def emit_report(report, fmt: str = "json") -> str:
    """Stable rendering: sorted keys, two-space indent; markdown passthrough."""
    if fmt == "md":
        if isinstance(report, str):
            return report
        return "```json\n" + json.dumps(report, indent=2, sort_keys=True) + "\n```"
    return json.dumps(report, indent=2, sort_keys=True)


def _parse_k(text: Optional[str]) -> Optional[Fraction]:
    if text in (None, "symbolic"):
        return None
    return Fraction(text)


def run_command(cmd: Command, out=None) -> int:
    """Dispatch a validated command; returns the exit status."""
    out = out if out is not None else sys.stdout
    p = cmd.params
    fmt = p.get("format", "json")

    if cmd.name == "families":
        m, r, j = p["m"], p["r"], p["j"]
        l = p.get("l") or 1
        spec = FamilySpec(l=l, j=j, m_prime=Fraction(m, l), r=r)
        table = family_table(spec, p.get("kmax", 4))
        if fmt == "md":
            out.write(table.to_markdown() + "\n\nnote: " + INDEX_RECONCILIATION_NOTE + "\n")
        else:
            doc = table.to_json_dict()
            doc["note"] = INDEX_RECONCILIATION_NOTE
            out.write(emit_report(doc) + "\n")
        return 0

    if cmd.name == "rescaling":
        rep = rescaling_check(p["m"], p["r"], k_max=p.get("kmax", 20))
        failures = [e for e in rep if not e["equal"]]
        doc = {
            "m": p["m"], "r": p["r"], "k_max": p.get("kmax", 20),
            "checked": len(rep), "failures": failures,
        }
        out.write(emit_report(doc, fmt) + "\n")
        return 0 if not failures else 1

    if cmd.name == "kahler-reduce":
        params = RingParams(p["m"], p["r"])
        dt = parse_ring_elem(p.get("dt", "0"), params) if p.get("dt") else RingElem.zero(params)
        du = parse_ring_elem(p.get("du", "0"), params) if p.get("du") else RingElem.zero(params)
        cls = reduce_oracle(DiffForm(dt, du))
        out.write(emit_report(cls.to_json_dict(), fmt) + "\n")
        return 0

    if cmd.name == "dim":
        params = RingParams(p["m"], p["r"])
        d = basis_dim(params)
        expected = 2 * p["r"] * (p["m"] - 1) + 1
        out.write(emit_report({"m": p["m"], "r": p["r"], "dim": d,
                               "expected": expected, "ok": d == expected}, fmt) + "\n")
        return 0 if d == expected else 1

    if cmd.name == "bracket":
        params = RingParams(p["m"], p["r"])
        fa = parse_ring_elem(p["a"], params)
        fb = parse_ring_elem(p["b"], params)
        A = UCEElem(CurrentElem(params, {p["x"]: fa}))
        B = UCEElem(CurrentElem(params, {p["y"]: fb}))
        oracle = uce_bracket_oracle(A, B)
        formula = uce_bracket_formula(A, B)
        doc = {
            "oracle": {"current": oracle.current.render(),
                       "central": oracle.central.to_json_dict()},
            "formula": {"current": formula.current.render(),
                        "central": formula.central.to_json_dict()},
            "match": oracle == formula,
        }
        out.write(emit_report(doc, fmt) + "\n")
        return 0

    if cmd.name == "bracket-audit":
        params = RingParams(p["m"], p["r"])
        rep = formula_vs_oracle(params, exp_bound=p.get("expbound", 3))
        summary: dict = {}
        for e in rep:
            st = summary.setdefault(e["type"], {"pass": 0, "fail": 0})
            st["pass" if e["match"] else "fail"] += 1
        doc = {"summary": summary, "pairs": rep}
        out.write(emit_report(doc, fmt) + "\n")
        return 0

    if cmd.name == "calibrate":
        res = wakimoto.calibrate_conventions(strict=False)
        out.write(emit_report(res.to_json_dict(), fmt) + "\n")
        return 0 if len(res.passing) == 1 else 1

    if cmd.name == "ope":
        m = p["m"]
        conv, status = wakimoto.working_config()
        E = parse_field_expr(p["e"], m)
        Fx = parse_field_expr(p["f"], m)
        res = wick_ope(E, Fx, conv, extra_orders=p.get("extra_orders", 0))
        cls = is_laurent(res, _parse_k(p.get("k")))
        doc = res.to_json_dict()
        doc["classification"] = cls[0] + (f"({cls[1]})" if len(cls) > 1 else "")
        doc["conventions"] = status
        out.write(emit_report(doc, fmt) + "\n")
        return 0

    if cmd.name == "charges":
        conv, status = wakimoto.working_config()
        ops = wakimoto.build_operators(p["m"], conv)
        rep = wakimoto.verify_charge_relations(ops)
        rep["calibration"] = status
        out.write(emit_report(rep, fmt) + "\n")
        return 0 if rep["ok"] else 1

    if cmd.name == "obstructions":
        rep = wakimoto.obstruction_report(p["m"], _parse_k(p.get("k")))
        if fmt == "md":
            out.write(rep.to_markdown() + "\n")
        else:
            out.write(emit_report(rep.to_json_dict()) + "\n")
        return 0

    if cmd.name == "critical-levels":
        mmax = p.get("mmax", 12)
        rows = []
        ok = True
        for m in range(2, mmax + 1):
            for l in range(1, m):
                kc = wakimoto.critical_level(l, m)
                sym = kc == wakimoto.critical_level(m - l, m)
                expq = wakimoto.critical_level_exponent_check(l, m)
                ok = ok and sym and expq
                rows.append({"m": m, "l": l, "k_crit": str(kc),
                             "symmetry": sym, "exponent_identity": expq})
        out.write(emit_report({"rows": rows, "ok": ok}, fmt) + "\n")
        return 0 if ok else 1

    raise ValueError(f"unknown command {cmd.name!r}")


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="secalg",
        description="Exact verification engine for superelliptic current-algebra "
        "structure constants and free-field operator products.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, *flags):
        sp = sub.add_parser(name)
        sp.add_argument("--format", choices=("json", "md"), default="json")
        for fl, kw in flags:
            sp.add_argument(fl, **kw)
        return sp

    intf = {"type": int, "required": True}
    intopt = {"type": int}
    add("families", ("--m", intf), ("--r", intf), ("--j", intf),
        ("--l", intopt), ("--kmax", {"type": int, "default": 4}))
    add("rescaling", ("--m", intf), ("--r", intf),
        ("--kmax", {"type": int, "default": 20}))
    add("kahler-reduce", ("--m", intf), ("--r", intf),
        ("--dt", {"type": str}), ("--du", {"type": str}))
    add("dim", ("--m", intf), ("--r", intf))
    add("bracket", ("--m", intf), ("--r", intf),
        ("--x", {"choices": ("e", "h", "f"), "required": True}),
        ("--a", {"type": str, "required": True}),
        ("--y", {"choices": ("e", "h", "f"), "required": True}),
        ("--b", {"type": str, "required": True}))
    add("bracket-audit", ("--m", intf), ("--r", intf),
        ("--expbound", {"type": int, "default": 3}))
    add("ope", ("--m", intf), ("--e", {"type": str, "required": True}),
        ("--f", {"type": str, "required": True}), ("--k", {"type": str}),
        ("--extra-orders", {"type": int, "default": 0, "dest": "extra_orders"}))
    add("charges", ("--m", intf))
    add("obstructions", ("--m", intf), ("--k", {"type": str}))
    add("critical-levels", ("--mmax", {"type": int, "default": 12}))
    add("calibrate")
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_arg_parser()
    ns = ap.parse_args(argv)
    params = {k: v for k, v in vars(ns).items() if k != "command" and v is not None}
    try:
        return run_command(Command(ns.command, params))
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
