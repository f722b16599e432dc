"""Text format for problem instances, and report serialization.

Instance files are line oriented::

    # the A2 cusp
    n = 2
    branch b1 (t): x1 = t^2, x2 = t^3
    ideal: f = x2^2 - x1^3

Polynomials are sums of terms ``<rational> <var>^<int>``; ``*`` between
factors is optional and rationals are written ``p/q``.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any, Mapping, Optional

from .germ import Branch, IdealSpec, Options, Parametrization, ProblemInstance

MAX_EXPONENT = 10**6
MAX_DIMENSION = 1000

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([-+*/^=(),:]))")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


def _tokenize(text: str, lineno: int) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", lineno, pos + 1)
        col = m.start(m.lastindex) + 1
        if m.group(1) is not None:
            out.append(("num", m.group(1), col))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), col))
        else:
            out.append(("op", m.group(3), col))
        pos = m.end()
    return out


class _Line:
    def __init__(self, tokens, lineno: int, length: int):
        self.tokens = tokens
        self.pos = 0
        self.lineno = lineno
        self.end_col = length + 1

    def peek(self, ahead: int = 0):
        i = self.pos + ahead
        return self.tokens[i] if i < len(self.tokens) else ("eol", "", self.end_col)

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        return ParseError(message, self.lineno, tok[2])

    def take(self, kind: str, value: Optional[str] = None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of line"
            raise self.error(f"expected {want!r}, found {got!r}", tok)
        self.pos += 1
        return tok

    def at(self, kind: str, value: Optional[str] = None) -> bool:
        tok = self.peek()
        return tok[0] == kind and (value is None or tok[1] == value)

    def integer(self, what: str) -> int:
        tok = self.take("num")
        try:
            return int(tok[1])
        except ValueError:
            raise self.error(f"{what} is too large", tok) from None

    def poly(self, variables: Mapping[str, int]) -> dict[tuple[int, ...], Fraction]:
        """sum of terms; returns {exponent vector: coefficient}."""
        nvars = len(variables)
        terms: dict[tuple[int, ...], Fraction] = {}
        first = True
        while True:
            sign = 1
            if self.at("op", "+") or self.at("op", "-"):
                sign = -1 if self.take("op")[1] == "-" else 1
            elif not first:
                break
            coef, expo = self._term(variables, nvars)
            terms[expo] = terms.get(expo, Fraction(0)) + sign * coef
            first = False
            if not (self.at("op", "+") or self.at("op", "-")):
                break
        return {e: c for e, c in terms.items() if c}

    def _term(self, variables, nvars):
        start = self.peek()
        coef = Fraction(1)
        seen = False
        if self.at("num"):
            num = self.integer("coefficient")
            den = 1
            if self.at("op", "/"):
                self.take("op")
                tok = self.peek()
                den = self.integer("denominator")
                if den == 0:
                    raise self.error("zero denominator", tok)
            coef = Fraction(num, den)
            seen = True
            if self.at("op", "*"):
                self.take("op")
                if not self.at("name"):
                    raise self.error("expected a variable after '*'")
        expo = [0] * nvars
        while self.at("name"):
            tok = self.take("name")
            if tok[1] not in variables:
                raise self.error(f"unknown variable {tok[1]!r}", tok)
            e = 1
            if self.at("op", "^"):
                self.take("op")
                etok = self.peek()
                e = self.integer("exponent")
                if e > MAX_EXPONENT:
                    raise self.error(f"exponent exceeds the limit {MAX_EXPONENT}", etok)
            expo[variables[tok[1]]] += e
            if expo[variables[tok[1]]] > MAX_EXPONENT:
                raise self.error(f"exponent exceeds the limit {MAX_EXPONENT}", tok)
            seen = True
            if self.at("op", "*"):
                self.take("op")
                if not self.at("name"):
                    raise self.error("expected a variable after '*'")
        if not seen:
            raise self.error("expected a term", start)
        return coef, tuple(expo)


def parse_instance(text: str, options: Optional[Options] = None) -> ProblemInstance:
    """Parse an instance file; every failure is a ParseError with a location."""
    n: Optional[int] = None
    branches: list[Branch] = []
    ideal_names: list[str] = []
    ideal_polys: list[dict] = []
    first_branch_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = _tokenize(body, lineno)
        if not tokens:
            continue
        line = _Line(tokens, lineno, len(body.rstrip()))
        head = line.peek()
        if head[0] == "name" and head[1] == "n" and line.peek(1)[1] == "=":
            if n is not None:
                raise line.error("n declared twice", head)
            line.take("name")
            line.take("op", "=")
            tok = line.peek()
            n = line.integer("n")
            if n < 2:
                raise line.error("ambient dimension n must be at least 2", tok)
            if n > MAX_DIMENSION:
                raise line.error(f"ambient dimension exceeds the limit {MAX_DIMENSION}", tok)
        elif head[0] == "name" and head[1] == "branch":
            if n is None:
                raise line.error("declare 'n = <int>' before any branch", head)
            first_branch_line = first_branch_line or lineno
            branches.append(_branch(line, n, branches))
        elif head[0] == "name" and head[1] == "ideal":
            if n is None:
                raise line.error("declare 'n = <int>' before the ideal", head)
            line.take("name")
            line.take("op", ":")
            tok = line.take("name")
            if tok[1] in ideal_names:
                raise line.error(f"duplicate generator name {tok[1]!r}", tok)
            line.take("op", "=")
            pstart = line.peek()
            poly = line.poly({f"x{j + 1}": j for j in range(n)})
            if poly.get((0,) * n, 0) != 0:
                raise line.error("ideal generator has a nonzero constant term", pstart)
            if not poly:
                raise line.error("ideal generator is zero", pstart)
            ideal_names.append(tok[1])
            ideal_polys.append(poly)
        else:
            raise line.error("expected 'n =', 'branch' or 'ideal'", head)
        if not line.at("eol"):
            raise line.error(f"unexpected {line.peek()[1]!r}")
    total = text.count("\n") + 1
    if n is None:
        raise ParseError("missing 'n = <int>' declaration", total, 1)
    if not branches:
        raise ParseError("at least one branch is required", total, 1)
    phi = Parametrization(n, tuple(branches))
    ideal = IdealSpec(tuple(ideal_names), tuple(ideal_polys)) if ideal_polys else None
    return ProblemInstance(phi, ideal, options or Options())


def _branch(line: _Line, n: int, previous: list[Branch]) -> Branch:
    line.take("name", "branch")
    name_tok = line.take("name")
    if any(b.name == name_tok[1] for b in previous):
        raise line.error(f"duplicate branch name {name_tok[1]!r}", name_tok)
    line.take("op", "(")
    param = line.take("name")[1]
    line.take("op", ")")
    line.take("op", ":")
    coords: list[Optional[dict[int, Fraction]]] = [None] * n
    while True:
        tok = line.take("name")
        m = re.fullmatch(r"x([1-9][0-9]*)", tok[1])
        j = int(m.group(1)) - 1 if m else -1
        if not 0 <= j < n:
            raise line.error(f"expected a coordinate x1..x{n}, found {tok[1]!r}", tok)
        if coords[j] is not None:
            raise line.error(f"coordinate {tok[1]} assigned twice", tok)
        line.take("op", "=")
        pstart = line.peek()
        poly = line.poly({param: 0})
        if poly.get((0,), 0) != 0:
            raise line.error(f"nonzero constant term in {tok[1]} of branch {name_tok[1]}", pstart)
        coords[j] = {e[0]: c for e, c in sorted(poly.items())}
        if line.at("eol"):
            break
        if not line.at("op", ","):
            raise line.error(f"unexpected {line.peek()[1]!r}")
        line.take("op", ",")
    missing = [f"x{j + 1}" for j, c in enumerate(coords) if c is None]
    if missing:
        raise line.error(f"branch {name_tok[1]} lacks {', '.join(missing)}")
    return Branch(name_tok[1], param, tuple(coords))


# writing ------------------------------------------------------------------------


def _coef_prefix(c: Fraction, has_var: bool) -> str:
    mag = abs(c)
    if has_var and mag == 1:
        return ""
    return f"{mag.numerator}/{mag.denominator} " if mag.denominator != 1 else f"{mag.numerator} "


def format_poly(terms: Mapping[tuple[int, ...], Fraction], names: list[str]) -> str:
    if not terms:
        return "0"
    parts = []
    for expo, c in sorted(terms.items(), key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0]))):
        factors = [name if e == 1 else f"{name}^{e}" for name, e in zip(names, expo) if e]
        body = _coef_prefix(c, bool(factors)) + " ".join(factors)
        body = body.strip()
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def render_instance(instance: ProblemInstance) -> str:
    phi = instance.phi
    lines = [f"n = {phi.n}"]
    for b in phi.branches:
        coords = ", ".join(
            f"x{j + 1} = " + format_poly({(e,): c for e, c in terms.items()}, [b.param])
            for j, terms in enumerate(b.coords)
        )
        lines.append(f"branch {b.name} ({b.param}): {coords}")
    if instance.ideal is not None:
        names = [f"x{j + 1}" for j in range(phi.n)]
        for name, f in zip(instance.ideal.names, instance.ideal.generators):
            lines.append(f"ideal: {name} = {format_poly(f, names)}")
    return "\n".join(lines) + "\n"


def _plain(v: Any) -> Any:
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return v


def render_report(report, fmt: str = "table") -> str:
    """Serialize a report document (or anything with ``to_document()``) deterministically."""
    doc = report.to_document() if hasattr(report, "to_document") else report
    doc = _plain(doc)
    if fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    return _table(doc)


def _fmt_value(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def _table(doc: Mapping[str, Any]) -> str:
    rows = []
    for key, entry in doc.items():
        if isinstance(entry, dict) and {"value", "status"} <= set(entry):
            rows.append((key, _fmt_value(entry["value"]), entry["status"], entry.get("method", "")))
    width = [max((len(r[i]) for r in rows), default=0) for i in range(3)]
    out = []
    for key, val, status, method in rows:
        out.append(f"{key:<{width[0]}}  {val:<{width[1]}}  {status:<{width[2]}}  {method}".rstrip())
    checks = doc.get("checks") or []
    if checks:
        out.append("")
        out.append("checks:")
        for c in checks:
            mark = "pass" if c["passed"] else "FAIL"
            out.append(f"  {mark}  {c['name']}  ({c['detail']})")
    for d in doc.get("diagnostics") or []:
        out.append(f"note: {d}")
    if "reason" in doc and doc["reason"]:
        out.append(f"reason: {doc['reason']}")
    if "exit_code" in doc:
        out.append(f"exit code: {doc['exit_code']}")
    return "\n".join(out) + "\n"
