"""Scenario files: declarations plus analysis requests, and their runner.

A scenario is a small script of statements, each ended by `;`:

    scenario "name";                       # optional, first
    basis B = basis(1, sqrt(2), sqrt(3));
    domain D = lattice[(1,0,0), (0,1,0), (0,0,1)] over B;
    function f = sgn(sqrt(3)) on D;
    function h = f + f;                    # domain inferred from references
    pattern P mod 1 = (0, 1/4) u (1/2, 3/4);
    analyze period_module f;

Names are resolved while parsing, so a parsed scenario is a closed list
of ready-to-run analyses.  Running produces a Report whose JSON region
is a pure function of the scenario text: deterministic ordering, exact
values rendered as canonical round-trippable text, decimals carried
only as tagged non-authoritative extras, and timing kept outside the
comparison region.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import approx as approxmod
from . import funcalg, lattice, pointsets
from .errors import (
    AnalysisError,
    NonIntegralShift,
    NotFound,
    ScenarioError,
    ScenarioNameError,
    ScenarioSyntaxError,
    ShiftNotInDomain,
)
from .exactreal import ExactReal, RadicalBasis
from .funcalg import CanonicalForm, _real_mul
from .lattice import CoeffLattice, Discrete
from .pointsets import IntervalPattern

ANALYSIS_KINDS = (
    "period_module",
    "commensurable",
    "classify",
    "intersect",
    "fundamental_period",
    "dirichlet",
    "kronecker",
    "cfrac",
    "discrepancy",
    "composition_check",
    "counterexample",
)

_RESERVED = {
    "scenario", "basis", "domain", "function", "pattern", "analyze",
    "lattice", "over", "on", "mod", "wrap", "u", "one", "sqrt",
    "abs1", "recip", "sgn", "target", "eps", "delta", "depth",
    "bound", "n", "slope", "t", "l", "shift",
} | set(ANALYSIS_KINDS)


# -- tokens ------------------------------------------------------------------


@dataclass(frozen=True)
class _Tok:
    kind: str  # num | name | str | op | end
    value: Any
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i = 0
    line = 1
    start = 0  # offset of current line start
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            start = i
            continue
        if ch.isspace():
            i += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        col = i - start + 1
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("num", int(text[i:j]), line, col))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("name", text[i:j], line, col))
            i = j
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    raise ScenarioSyntaxError("unterminated string", line, col)
                j += 1
            if j >= n:
                raise ScenarioSyntaxError("unterminated string", line, col)
            toks.append(_Tok("str", text[i + 1 : j], line, col))
            i = j + 1
            continue
        if ch in "+-*/^()[],=;":
            toks.append(_Tok("op", ch, line, col))
            i += 1
            continue
        raise ScenarioSyntaxError(f"unexpected character {ch!r}", line, col)
    toks.append(_Tok("end", "", line, n - start + 1))
    return toks


# -- parsed objects ----------------------------------------------------------


@dataclass
class Analysis:
    kind: str
    args: dict[str, Any]
    line: int


@dataclass
class Scenario:
    name: str
    bases: dict[str, RadicalBasis] = field(default_factory=dict)
    domains: dict[str, CoeffLattice] = field(default_factory=dict)
    functions: dict[str, CanonicalForm] = field(default_factory=dict)
    patterns: dict[str, IntervalPattern] = field(default_factory=dict)
    analyses: list[Analysis] = field(default_factory=list)


class _ScenarioParser:
    def __init__(self, text: str, default_name: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.sc = Scenario(name=default_name)

    # token helpers

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ScenarioSyntaxError(message, tok.line, tok.col)

    def accept_op(self, *ops):
        tok = self.peek()
        if tok.kind == "op" and tok.value in ops:
            self.i += 1
            return tok.value
        return None

    def expect_op(self, op: str):
        tok = self.peek()
        if tok.kind != "op" or tok.value != op:
            self.fail(f"expected {op!r}")
        self.i += 1

    def accept_keyword(self, word: str) -> bool:
        tok = self.peek()
        if tok.kind == "name" and tok.value == word:
            self.i += 1
            return True
        return False

    def expect_keyword(self, word: str):
        if not self.accept_keyword(word):
            self.fail(f"expected keyword {word!r}")

    def expect_name(self) -> str:
        tok = self.peek()
        if tok.kind != "name":
            self.fail("expected a name")
        self.i += 1
        return tok.value

    def expect_num(self) -> int:
        tok = self.peek()
        if tok.kind != "num":
            self.fail("expected an integer")
        self.i += 1
        return tok.value

    def expect_int(self) -> int:
        if self.accept_op("-"):
            return -self.expect_num()
        return self.expect_num()

    def fresh_name(self) -> str:
        name = self.expect_name()
        if name in _RESERVED:
            raise ScenarioNameError(f"{name!r} is a reserved word")
        for space in (self.sc.bases, self.sc.domains, self.sc.functions, self.sc.patterns):
            if name in space:
                raise ScenarioNameError(f"{name!r} is already bound")
        return name

    def lookup(self, space: dict, what: str) -> Any:
        tok = self.peek()
        name = self.expect_name()
        if name not in space:
            raise ScenarioNameError(
                f"unknown {what} {name!r} at line {tok.line}"
            )
        return space[name]

    # real expressions (same grammar as the funcalg text format)

    def real_expr(self) -> ExactReal:
        v = self.real_term()
        while True:
            op = self.accept_op("+", "-")
            if not op:
                return v
            rhs = self.real_term()
            v = v + rhs if op == "+" else v - rhs

    def real_term(self) -> ExactReal:
        v = self.real_factor()
        while True:
            op = self.accept_op("*", "/")
            if not op:
                return v
            rhs = self.real_factor()
            v = _real_mul(v, rhs) if op == "*" else v / rhs

    def real_factor(self) -> ExactReal:
        if self.accept_op("-"):
            return -self.real_factor()
        if self.accept_op("+"):
            return self.real_factor()
        tok = self.peek()
        if tok.kind == "num":
            self.i += 1
            return ExactReal.rational(tok.value)
        if tok.kind == "name" and tok.value == "sqrt":
            self.i += 1
            self.expect_op("(")
            d = self.expect_num()
            self.expect_op(")")
            if d <= 0:
                self.fail("sqrt needs a positive integer", tok)
            return ExactReal.sqrt(d)
        if self.accept_op("("):
            v = self.real_expr()
            self.expect_op(")")
            return v
        self.fail("expected a number or sqrt(...)")

    # formula expressions (funcalg grammar plus function references)

    def form_expr(self, domain: CoeffLattice) -> CanonicalForm:
        v = self.form_term(domain)
        while True:
            op = self.accept_op("+", "-")
            if not op:
                return v
            rhs = self.form_term(domain)
            v = v + rhs if op == "+" else v - rhs

    def form_term(self, domain: CoeffLattice) -> CanonicalForm:
        v = self.form_factor(domain)
        while True:
            op = self.accept_op("*", "/")
            if not op:
                return v
            rhs = self.form_factor(domain)
            v = v * rhs if op == "*" else v / rhs

    def form_factor(self, domain: CoeffLattice) -> CanonicalForm:
        if self.accept_op("-"):
            return -self.form_factor(domain)
        if self.accept_op("+"):
            return self.form_factor(domain)
        v = self.form_primary(domain)
        while self.accept_op("^"):
            v = v ** self.expect_int()
        return v

    def form_primary(self, domain: CoeffLattice) -> CanonicalForm:
        tok = self.peek()
        if tok.kind == "num":
            self.i += 1
            return CanonicalForm.constant(tok.value, domain)
        if tok.kind == "name":
            if tok.value in self.sc.functions:
                self.i += 1
                return self.sc.functions[tok.value]
            if tok.value in ("abs1", "recip", "sgn"):
                self.i += 1
                return self.form_atom(tok.value, domain)
            self.fail(f"unknown function {tok.value!r}", tok)
        if self.accept_op("("):
            v = self.form_expr(domain)
            self.expect_op(")")
            return v
        self.fail("expected a formula term")

    def form_atom(self, name: str, domain: CoeffLattice) -> CanonicalForm:
        tok = self.peek()
        self.expect_op("(")
        if self.accept_keyword("one"):
            d = 1
        elif self.accept_keyword("sqrt"):
            self.expect_op("(")
            d = self.expect_num()
            self.expect_op(")")
        else:
            self.fail("expected 'one' or 'sqrt(<int>)'")
        s = 0
        if self.accept_op("+"):
            s = self.expect_num()
        elif self.accept_op("-"):
            s = -self.expect_num()
        self.expect_op(")")
        basis = domain.basis
        if basis is None or d not in basis:
            self.fail(f"sqrt({d}) is not a coordinate of the domain basis", tok)
        if name == "sgn":
            mono = funcalg.Monomial([(funcalg.Atom(funcalg.SGN, d, 0), 1)])
            coeff = Fraction(-1 if s % 2 else 1)
        else:
            exp = 1 if name == "abs1" else -1
            mono = funcalg.Monomial([(funcalg.Atom(funcalg.ABS1, d, s), exp)])
            coeff = Fraction(1)
        return CanonicalForm(domain, {mono: coeff})

    # statements

    def parse(self) -> Scenario:
        first = True
        while self.peek().kind != "end":
            tok = self.peek()
            if tok.kind != "name":
                self.fail("expected a statement keyword")
            word = tok.value
            if word == "scenario":
                if not first:
                    self.fail("'scenario' must be the first statement", tok)
                self.i += 1
                name_tok = self.peek()
                if name_tok.kind != "str":
                    self.fail("expected a quoted scenario name")
                self.i += 1
                self.sc.name = name_tok.value
            elif word == "basis":
                self.i += 1
                self.stmt_basis()
            elif word == "domain":
                self.i += 1
                self.stmt_domain()
            elif word == "function":
                self.i += 1
                self.stmt_function()
            elif word == "pattern":
                self.i += 1
                self.stmt_pattern()
            elif word == "analyze":
                self.i += 1
                self.stmt_analyze(tok)
            else:
                self.fail(f"unknown statement {word!r}", tok)
            self.expect_op(";")
            first = False
        return self.sc

    def parse_basis_literal(self) -> RadicalBasis:
        self.expect_keyword("basis")
        self.expect_op("(")
        rads = []
        while True:
            tok = self.peek()
            if tok.kind == "num":
                self.i += 1
                rads.append(tok.value)
            elif self.accept_keyword("sqrt"):
                self.expect_op("(")
                rads.append(self.expect_num())
                self.expect_op(")")
            else:
                self.fail("expected 1 or sqrt(<int>)")
            if not self.accept_op(","):
                break
        self.expect_op(")")
        try:
            return RadicalBasis(rads)
        except ValueError as exc:
            self.fail(str(exc), tok)

    def stmt_basis(self):
        name = self.fresh_name()
        self.expect_op("=")
        self.sc.bases[name] = self.parse_basis_literal()

    def stmt_domain(self):
        name = self.fresh_name()
        self.expect_op("=")
        self.expect_keyword("lattice")
        self.expect_op("[")
        vectors = []
        while True:
            self.expect_op("(")
            vec = [self.expect_int()]
            while self.accept_op(","):
                vec.append(self.expect_int())
            self.expect_op(")")
            vectors.append(tuple(vec))
            if not self.accept_op(","):
                break
        self.expect_op("]")
        self.expect_keyword("over")
        tok = self.peek()
        if tok.kind == "name" and tok.value == "basis":
            basis = self.parse_basis_literal()
        else:
            basis = self.lookup(self.sc.bases, "basis")
        for vec in vectors:
            if len(vec) != len(basis):
                self.fail(
                    f"vector {list(vec)} has {len(vec)} coordinates, "
                    f"basis has {len(basis)}",
                    tok,
                )
        self.sc.domains[name] = CoeffLattice(vectors, basis=basis)

    def stmt_function(self):
        name = self.fresh_name()
        self.expect_op("=")
        # the domain is declared after the expression; scan ahead for it
        domain = None
        depth = 0
        for j in range(self.i, len(self.toks)):
            tok = self.toks[j]
            if tok.kind == "op" and tok.value in "([":
                depth += 1
            elif tok.kind == "op" and tok.value in ")]":
                depth -= 1
            elif tok.kind == "op" and tok.value == ";" and depth == 0:
                break
            elif tok.kind == "name" and tok.value == "on" and depth == 0:
                ref = self.toks[j + 1]
                if ref.kind != "name" or ref.value not in self.sc.domains:
                    raise ScenarioNameError(
                        f"unknown domain after 'on' at line {ref.line}"
                    )
                domain = self.sc.domains[ref.value]
                break
        if domain is None:
            for j in range(self.i, len(self.toks)):
                tok = self.toks[j]
                if tok.kind == "op" and tok.value == ";":
                    break
                if tok.kind == "name" and tok.value in self.sc.functions:
                    domain = self.sc.functions[tok.value].domain
                    break
        if domain is None:
            self.fail("the formula needs 'on <domain>' or a function reference")
        form = self.form_expr(domain)
        if self.accept_keyword("on"):
            self.expect_name()  # already resolved by the scan above
        self.sc.functions[name] = form

    def stmt_pattern(self):
        name = self.fresh_name()
        self.expect_keyword("mod")
        modulus = self.real_expr()
        self.expect_op("=")
        intervals = []
        while True:
            self.expect_op("(")
            lo = self.real_expr()
            self.expect_op(",")
            hi = self.real_expr()
            self.expect_op(")")
            intervals.append((lo, hi))
            if not self.accept_keyword("u"):
                break
        wrap = self.accept_keyword("wrap")
        tok = self.peek()
        try:
            self.sc.patterns[name] = IntervalPattern(modulus, intervals, wrap_point=wrap)
        except ValueError as exc:
            self.fail(str(exc), tok)

    def named_function(self) -> tuple[str, CanonicalForm]:
        tok = self.peek()
        name = self.expect_name()
        if name not in self.sc.functions:
            raise ScenarioNameError(f"unknown function {name!r} at line {tok.line}")
        return name, self.sc.functions[name]

    def stmt_analyze(self, tok: _Tok):
        kind = self.expect_name()
        if kind not in ANALYSIS_KINDS:
            self.fail(f"unknown analysis kind {kind!r}", tok)
        args: dict[str, Any] = {}
        if kind == "period_module":
            args["name"], args["function"] = self.named_function()
        elif kind == "commensurable":
            args["x"] = self.real_expr()
            self.expect_op(",")
            args["y"] = self.real_expr()
        elif kind == "classify":
            periods = [self.real_expr()]
            while self.accept_op(","):
                periods.append(self.real_expr())
            args["periods"] = periods
        elif kind == "intersect":
            tok1 = self.peek()
            name1 = self.expect_name()
            self.expect_op(",")
            tok2 = self.peek()
            name2 = self.expect_name()
            for nm, tk in ((name1, tok1), (name2, tok2)):
                if nm not in self.sc.domains:
                    raise ScenarioNameError(f"unknown domain {nm!r} at line {tk.line}")
            args["names"] = (name1, name2)
            args["domains"] = (self.sc.domains[name1], self.sc.domains[name2])
        elif kind == "fundamental_period":
            tokp = self.peek()
            namep = self.expect_name()
            if namep not in self.sc.patterns:
                raise ScenarioNameError(
                    f"unknown pattern {namep!r} at line {tokp.line}"
                )
            args["name"] = namep
            args["pattern"] = self.sc.patterns[namep]
        elif kind == "dirichlet":
            args["T1"] = self.real_expr()
            self.expect_op(",")
            args["T2"] = self.real_expr()
            self.expect_keyword("target")
            args["target"] = self.real_expr()
            args["eps"] = self.real_expr() if self.accept_keyword("eps") else None
        elif kind == "kronecker":
            args["T"] = self.real_expr()
            self.expect_keyword("over")
            self.expect_op("[")
            ts = [self.real_expr()]
            while self.accept_op(","):
                ts.append(self.real_expr())
            self.expect_op("]")
            args["Ts"] = ts
            self.expect_keyword("delta")
            args["delta"] = self.real_expr()
            args["eps"] = self.real_expr() if self.accept_keyword("eps") else None
            args["bound"] = self.expect_num() if self.accept_keyword("bound") else None
        elif kind == "cfrac":
            args["x"] = self.real_expr()
            args["depth"] = self.expect_num() if self.accept_keyword("depth") else None
        elif kind == "discrepancy":
            args["alpha"] = self.real_expr()
            self.expect_keyword("n")
            args["N"] = self.expect_num()
        elif kind == "composition_check":
            self.expect_keyword("slope")
            args["slope"] = self.real_expr()
            self.expect_keyword("t")
            args["T"] = self.real_expr()
            self.expect_keyword("l")
            args["L"] = self.real_expr()
        elif kind == "counterexample":
            args["name"], args["function"] = self.named_function()
            self.expect_keyword("shift")
            args["shift"] = self.real_expr()
            args["bound"] = self.expect_num() if self.accept_keyword("bound") else None
        self.sc.analyses.append(Analysis(kind=kind, args=args, line=tok.line))


def parse_scenario(text: str, default_name: str = "scenario") -> Scenario:
    return _ScenarioParser(text, default_name).parse()


# -- execution ---------------------------------------------------------------


@dataclass
class RunOptions:
    """CLI-level defaults for analyses that omit optional arguments."""

    bound: int | None = None  # counterexample box bound
    depth: int | None = None  # continued fraction depth
    eps: ExactReal | None = None  # dirichlet / kronecker tolerance


@dataclass
class Report:
    scenario_name: str
    version: str
    results: list[dict]
    timings: list[tuple[str, float]]  # outside the comparison region

    def to_json_dict(self) -> dict:
        return {
            "scenario": self.scenario_name,
            "version": self.version,
            "approx_policy": "approx fields are 12-significant-digit decimals, "
            "non-authoritative; exact fields are the ground truth",
            "results": self.results,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"scenario: {self.scenario_name}", f"version: {self.version}"]
        for idx, res in enumerate(self.results, 1):
            lines.append("")
            lines.append(f"[{idx}] {res['kind']}")
            for section in ("inputs", "exact", "approx", "witness"):
                if section not in res:
                    continue
                for key, value in res[section].items():
                    lines.append(f"    {section[:-1] if section == 'inputs' else section} {key}: {_plain(value)}")
            lines.append(f"    verdict: {res['verdict']}")
        return "\n".join(lines) + "\n"


def _plain(value) -> str:
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_plain(v)}" for k, v in value.items()) + "}"
    if isinstance(value, list):
        return "[" + ", ".join(_plain(v) for v in value) + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    return str(value)


def _real_out(x: ExactReal) -> str:
    return str(x)


def _approx_out(x: ExactReal) -> str:
    return x.approx_str(12)


def _frac_out(q: Fraction) -> str:
    return str(q)


def _basis_out(basis: RadicalBasis) -> str:
    return "basis(" + ", ".join(
        "1" if d == 1 else f"sqrt({d})" for d in basis.radicands
    ) + ")"


def _lattice_out(lat: CoeffLattice) -> dict:
    return {
        "basis": _basis_out(lat.basis),
        "rows": [list(r) for r in lat.hnf],
    }


_VERSION = "0.1.0"

_DEFAULT_CE_BOUND = 25
_DEFAULT_CF_DEPTH = 10
_DEFAULT_KRON_BOUND = 10**6


def _validate_options(sc: Scenario, options: RunOptions):
    for idx, an in enumerate(sc.analyses, 1):
        if an.kind in ("dirichlet", "kronecker"):
            if an.args["eps"] is None and options.eps is None:
                raise ScenarioError(
                    f"analysis #{idx} ({an.kind}) has no eps and no --eps "
                    f"was given"
                )


def run_scenario(sc: Scenario, options: RunOptions | None = None) -> Report:
    options = options or RunOptions()
    _validate_options(sc, options)
    results: list[dict] = []
    timings: list[tuple[str, float]] = []
    for idx, an in enumerate(sc.analyses, 1):
        t0 = time.perf_counter()
        try:
            results.append(_RUNNERS[an.kind](an.args, options))
        except ScenarioError:
            raise
        except Exception as exc:
            raise AnalysisError(idx, an.kind, exc) from exc
        timings.append((an.kind, time.perf_counter() - t0))
    return Report(
        scenario_name=sc.name,
        version=_VERSION,
        results=results,
        timings=timings,
    )


def _run_period_module(args, options) -> dict:
    f: CanonicalForm = args["function"]
    pm = funcalg.period_module(f)
    return {
        "kind": "period_module",
        "inputs": {
            "function": args["name"],
            "formula": f.text(),
            "domain": _lattice_out(f.domain),
        },
        "exact": {
            "zero_coords": sorted(pm.zero_coords),
            "parity_constraints": [sorted(s) for s in pm.parity_constraints],
            "lattice": _lattice_out(pm.as_lattice),
            "generators": [_real_out(g) for g in pm.generators_real],
        },
        "approx": {"generators": [_approx_out(g) for g in pm.generators_real]},
        "verdict": f"period module of rank {pm.as_lattice.rank}",
    }


def _run_commensurable(args, options) -> dict:
    x, y = args["x"], args["y"]
    ratio = lattice.commensurable(x, y)
    out = {
        "kind": "commensurable",
        "inputs": {"x": _real_out(x), "y": _real_out(y)},
        "exact": {"commensurable": ratio is not None},
        "approx": {"x": _approx_out(x), "y": _approx_out(y)},
        "verdict": "commensurable" if ratio is not None else "incommensurable",
    }
    if ratio is not None:
        out["witness"] = {"ratio": _frac_out(ratio)}
    return out


def _run_classify(args, options) -> dict:
    periods = args["periods"]
    outcome = lattice.classify_group(periods)
    exact: dict[str, Any] = {}
    if isinstance(outcome, Discrete):
        exact["classification"] = "discrete"
        exact["T0"] = _real_out(outcome.T0)
        approx = {"T0": _approx_out(outcome.T0)}
        verdict = f"discrete: T0 = {_real_out(outcome.T0)}"
    else:
        exact["classification"] = "dense"
        exact["T0"] = None
        approx = {"T0": None}
        verdict = "dense in the reals"
    return {
        "kind": "classify",
        "inputs": {"periods": [_real_out(t) for t in periods]},
        "exact": exact,
        "approx": approx,
        "verdict": verdict,
    }


def _run_intersect(args, options) -> dict:
    d1, d2 = args["domains"]
    meet = lattice.intersect(d1, d2)
    gens = [meet.to_real(row) for row in meet.hnf]
    return {
        "kind": "intersect",
        "inputs": {
            "first": args["names"][0],
            "second": args["names"][1],
        },
        "exact": {
            "lattice": _lattice_out(meet),
            "generators": [_real_out(g) for g in gens],
        },
        "approx": {"generators": [_approx_out(g) for g in gens]},
        "verdict": f"intersection of rank {meet.rank}",
    }


def _pattern_out(p: IntervalPattern) -> str:
    body = " u ".join(f"({_real_out(a)}, {_real_out(b)})" for a, b in p.intervals)
    if p.wrap_point:
        body += " wrap"
    return f"{body or 'empty'} mod {_real_out(p.modulus)}"


def _run_fundamental_period(args, options) -> dict:
    p: IntervalPattern = args["pattern"]
    t0 = pointsets.fundamental_period(p)
    return {
        "kind": "fundamental_period",
        "inputs": {"pattern": args["name"], "definition": _pattern_out(p)},
        "exact": {"period": _real_out(t0)},
        "approx": {"period": _approx_out(t0)},
        "verdict": f"fundamental period {_real_out(t0)}",
    }


def _run_dirichlet(args, options) -> dict:
    eps = args["eps"] if args["eps"] is not None else options.eps
    m, n = approxmod.dirichlet_find(args["T1"], args["T2"], args["target"], eps)
    value = args["T1"].scale(m) + args["T2"].scale(n)
    err = value - args["target"]
    return {
        "kind": "dirichlet",
        "inputs": {
            "T1": _real_out(args["T1"]),
            "T2": _real_out(args["T2"]),
            "target": _real_out(args["target"]),
            "eps": _real_out(eps),
        },
        "exact": {
            "combination": _real_out(value),
            "error": _real_out(err),
        },
        "approx": {"error": _approx_out(err)},
        "witness": {"m": m, "n": n},
        "verdict": "witness verified by exact sign tests",
    }


def _run_kronecker(args, options) -> dict:
    eps = args["eps"] if args["eps"] is not None else options.eps
    bound = args["bound"] if args["bound"] is not None else _DEFAULT_KRON_BOUND
    got = approxmod.kronecker_find(args["T"], args["Ts"], args["delta"], eps, bound=bound)
    out = {
        "kind": "kronecker",
        "inputs": {
            "T": _real_out(args["T"]),
            "Ts": [_real_out(t) for t in args["Ts"]],
            "delta": _real_out(args["delta"]),
            "eps": _real_out(eps),
            "bound": bound,
        },
    }
    if isinstance(got, NotFound):
        out["exact"] = {"found": False}
        out["approx"] = {}
        out["verdict"] = f"no witness up to q = {got.bound}"
        return out
    q, ps = got
    residuals = [
        args["T"].scale(q) - t.scale(p) - args["delta"]
        for t, p in zip(args["Ts"], ps)
    ]
    out["exact"] = {
        "found": True,
        "residuals": [_real_out(r) for r in residuals],
    }
    out["approx"] = {"residuals": [_approx_out(r) for r in residuals]}
    out["witness"] = {"q": q, "ps": list(ps)}
    out["verdict"] = "witness verified by exact sign tests"
    return out


def _run_cfrac(args, options) -> dict:
    depth = args["depth"] if args["depth"] is not None else (
        options.depth if options.depth is not None else _DEFAULT_CF_DEPTH
    )
    cf = approxmod.continued_fraction(args["x"], depth)
    verdict = f"{len(cf.quotients)} quotients"
    if cf.terminated:
        verdict += " (rational, expansion complete)"
    return {
        "kind": "cfrac",
        "inputs": {"x": _real_out(args["x"]), "depth": depth},
        "exact": {
            "quotients": list(cf.quotients),
            "convergents": [[p, q] for p, q in cf.convergents],
            "terminated": cf.terminated,
        },
        "approx": {"x": _approx_out(args["x"])},
        "verdict": verdict,
    }


def _run_discrepancy(args, options) -> dict:
    dstar = approxmod.orbit_discrepancy(args["alpha"], args["N"])
    as_real = ExactReal.rational(dstar)
    return {
        "kind": "discrepancy",
        "inputs": {"alpha": _real_out(args["alpha"]), "N": args["N"]},
        "exact": {"dstar_upper_bound": _frac_out(dstar)},
        "approx": {"dstar_upper_bound": _approx_out(as_real)},
        "verdict": f"star discrepancy at most {_frac_out(dstar)}",
    }


def _run_composition_check(args, options) -> dict:
    res = funcalg.composition_check(args["slope"], args["T"], args["L"])
    return {
        "kind": "composition_check",
        "inputs": {
            "slope": _real_out(args["slope"]),
            "T": _real_out(args["T"]),
            "L": _real_out(args["L"]),
        },
        "exact": {"holds": res.holds, "n": res.n},
        "approx": {},
        "verdict": (
            f"holds: slope*L = {res.n}*T" if res.holds else "does not hold"
        ),
    }


def _run_counterexample(args, options) -> dict:
    f: CanonicalForm = args["function"]
    bound = args["bound"] if args["bound"] is not None else (
        options.bound if options.bound is not None else _DEFAULT_CE_BOUND
    )
    got = funcalg.find_counterexample(f, args["shift"], bound)
    out = {
        "kind": "counterexample",
        "inputs": {
            "function": args["name"],
            "formula": f.text(),
            "shift": _real_out(args["shift"]),
            "bound": bound,
        },
    }
    if isinstance(got, NotFound):
        out["exact"] = {"found": False}
        out["approx"] = {}
        out["verdict"] = f"no counterexample in the search box (bound {got.bound})"
        return out
    x = got
    exact: dict[str, Any] = {"found": True}
    try:
        vec = funcalg._shift_vector(args["shift"], f.domain)
    except (ShiftNotInDomain, NonIntegralShift):
        vec = None
    shifted = tuple(a + b for a, b in zip(x, vec)) if vec is not None else None
    if shifted is not None and lattice.member(f.domain, shifted):
        exact["f_at_x"] = _frac_out(funcalg.evaluate(f, x))
        exact["f_at_x_plus_shift"] = _frac_out(funcalg.evaluate(f, shifted))
    else:
        exact["domain_invariant"] = False
    out["exact"] = exact
    out["approx"] = {}
    out["witness"] = {"x": list(x)}
    out["verdict"] = "counterexample found: the shift is not a period"
    return out


_RUNNERS: dict[str, Callable[[dict, RunOptions], dict]] = {
    "period_module": _run_period_module,
    "commensurable": _run_commensurable,
    "classify": _run_classify,
    "intersect": _run_intersect,
    "fundamental_period": _run_fundamental_period,
    "dirichlet": _run_dirichlet,
    "kronecker": _run_kronecker,
    "cfrac": _run_cfrac,
    "discrepancy": _run_discrepancy,
    "composition_check": _run_composition_check,
    "counterexample": _run_counterexample,
}
