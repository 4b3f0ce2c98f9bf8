"""Symbolic algebra of coordinate formulas on a lattice domain.

A function is entered as a formula over two atom shapes, each reading a
single coordinate of the point x = sum(x_d * sqrt(d)):

    abs1(sqrt(d))   ->  |x_d| + 1          (always >= 1)
    recip(sqrt(d))  ->  1 / (|x_d| + 1)    (same atom, exponent -1)
    sgn(sqrt(d))    ->  (-1) ** x_d

combined with rationals and + - * / ^.  Formulas normalize into a
canonical term map (monomial -> coefficient), which makes sums cancel
literally, products collapse literally, and the shift action x -> x + s
computable: abs1 atoms pick up an integer shift tag, sgn atoms a sign.

Because a shift strictly translates every abs1 tag and flips signs by
parity, formal invariance under a shift is decidable, and the full
module of formal periods is an explicit lattice: zero on every abs1
coordinate, even parity on each term's sgn support.  The bounded
counterexample search complements this with direct exact evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import (
    DivisionByZero,
    NonIntegralShift,
    NonMonomialDivisor,
    NotFound,
    NotInDomain,
    ParseError,
    ShiftNotInDomain,
    UnknownRadicand,
)
from .exactreal import ExactReal
from .lattice import CoeffLattice, intersect, member

ABS1 = "abs1"
SGN = "sgn"


@dataclass(frozen=True, order=True)
class Atom:
    """One coordinate reader; (kind, radicand, shift) is its identity.

    sgn atoms keep shift 0: a shifted sgn folds into the coefficient
    sign, so the tag carries no information.
    """

    kind: str
    radicand: int
    shift: int = 0

    def text(self) -> str:
        arg = "one" if self.radicand == 1 else f"sqrt({self.radicand})"
        if self.shift > 0:
            arg += f"+{self.shift}"
        elif self.shift < 0:
            arg += str(self.shift)
        return f"{self.kind}({arg})"


class Monomial:
    """Product of atoms with integer exponents, canonically ordered.

    sgn exponents live mod 2 (the atom squares to 1), abs1 exponents are
    arbitrary nonzero integers.  The empty product is the constant 1.
    """

    __slots__ = ("factors", "_hash")

    def __init__(self, items: Iterable[tuple[Atom, int]] = ()):
        acc: dict[Atom, int] = {}
        for atom, e in items:
            acc[atom] = acc.get(atom, 0) + int(e)
        out = []
        for atom in sorted(acc):
            e = acc[atom]
            if atom.kind == SGN:
                if e % 2:
                    out.append((atom, 1))
            elif e:
                out.append((atom, e))
        self.factors: tuple[tuple[Atom, int], ...] = tuple(out)
        self._hash = hash(self.factors)

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self.factors == other.factors

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.factors + other.factors)

    def __pow__(self, n: int) -> "Monomial":
        return Monomial((a, e * n) for a, e in self.factors)

    def invert(self) -> "Monomial":
        return Monomial((a, -e) for a, e in self.factors)

    def is_constant(self) -> bool:
        return not self.factors

    def sort_key(self):
        return tuple((a.kind, a.radicand, a.shift, e) for a, e in self.factors)

    def text(self) -> str:
        return "*".join(
            a.text() + (f"^{e}" if e != 1 else "") for a, e in self.factors
        )

    def __repr__(self) -> str:
        return f"Monomial({self.text() or '1'})"

    def evaluate(self, coords: Sequence[int], index: Mapping[int, int]) -> Fraction:
        val = Fraction(1)
        for atom, e in self.factors:
            x = coords[index[atom.radicand]]
            if atom.kind == SGN:
                if x % 2:
                    val = -val
            else:
                val *= Fraction(abs(x + atom.shift) + 1) ** e
        return val


_ONE = Monomial()


class CanonicalForm:
    """Normalized formula: domain lattice plus monomial -> coefficient map."""

    __slots__ = ("domain", "terms", "_ordered")

    def __init__(self, domain: CoeffLattice, terms: Mapping[Monomial, Fraction]):
        if domain.basis is None:
            raise ValueError("a formula domain needs a radical basis")
        clean = {m: Fraction(c) for m, c in terms.items() if c != 0}
        self.domain = domain
        self.terms = clean
        self._ordered: tuple[tuple[Monomial, Fraction], ...] = tuple(
            sorted(clean.items(), key=lambda mc: mc[0].sort_key())
        )

    # -- construction --------------------------------------------------

    @classmethod
    def zero(cls, domain: CoeffLattice) -> "CanonicalForm":
        return cls(domain, {})

    @classmethod
    def constant(cls, q, domain: CoeffLattice) -> "CanonicalForm":
        return cls(domain, {_ONE: Fraction(q)})

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m.is_constant() for m in self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CanonicalForm)
            and self.domain == other.domain
            and self._ordered == other._ordered
        )

    def __hash__(self) -> int:
        return hash((self.domain, self._ordered))

    # -- ring structure ---------------------------------------------------

    def _aligned(self, other: "CanonicalForm") -> tuple[CoeffLattice, "CanonicalForm", "CanonicalForm"]:
        if self.domain == other.domain:
            return self.domain, self, other
        d1, d2 = self.domain, other.domain
        if d1.basis != d2.basis:
            merged = d1.basis.merge(d2.basis)
            d1, d2 = d1.embed(merged), d2.embed(merged)
        dom = intersect(d1, d2)
        return dom, CanonicalForm(dom, self.terms), CanonicalForm(dom, other.terms)

    def __add__(self, other) -> "CanonicalForm":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        dom, f, g = self._aligned(other)
        acc = dict(f.terms)
        for m, c in g.terms.items():
            acc[m] = acc.get(m, Fraction(0)) + c
        return CanonicalForm(dom, acc)

    def __radd__(self, other) -> "CanonicalForm":
        return self.__add__(other)

    def __neg__(self) -> "CanonicalForm":
        return CanonicalForm(self.domain, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "CanonicalForm":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "CanonicalForm":
        return (-self).__add__(other)

    def __mul__(self, other) -> "CanonicalForm":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CanonicalForm(self.domain, {m: c * q for m, c in self.terms.items()})
        if not isinstance(other, CanonicalForm):
            return NotImplemented
        dom, f, g = self._aligned(other)
        acc: dict[Monomial, Fraction] = {}
        for m1, c1 in f.terms.items():
            for m2, c2 in g.terms.items():
                m = m1 * m2
                acc[m] = acc.get(m, Fraction(0)) + c1 * c2
        return CanonicalForm(dom, acc)

    def __rmul__(self, other) -> "CanonicalForm":
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return NotImplemented

    def _monomial_inverse(self) -> "CanonicalForm":
        if self.is_zero():
            raise DivisionByZero("division by the zero formula")
        if len(self.terms) != 1:
            raise NonMonomialDivisor(
                f"divisor has {len(self.terms)} terms; only single-monomial "
                f"denominators are invertible"
            )
        ((m, c),) = self.terms.items()
        return CanonicalForm(self.domain, {m.invert(): 1 / c})

    def __truediv__(self, other) -> "CanonicalForm":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                raise DivisionByZero("division by rational zero")
            return self * (1 / q)
        if not isinstance(other, CanonicalForm):
            return NotImplemented
        return self * other._monomial_inverse()

    def __pow__(self, n: int) -> "CanonicalForm":
        n = int(n)
        if n < 0:
            return self._monomial_inverse() ** (-n)
        out = CanonicalForm.constant(1, self.domain)
        for _ in range(n):
            out = out * self
        return out

    def _coerce(self, other):
        if isinstance(other, CanonicalForm):
            return other
        if isinstance(other, (int, Fraction)):
            return CanonicalForm.constant(other, self.domain)
        return NotImplemented

    # -- rendering ---------------------------------------------------------

    def text(self) -> str:
        """Deterministic canonical text; parse(text(f), dom) == f."""
        if not self.terms:
            return "0"
        parts: list[str] = []
        for m, c in self._ordered:
            body = m.text()
            mag = abs(c)
            if not body:
                piece = str(mag)
            elif mag == 1:
                piece = body
            else:
                piece = f"{mag}*{body}"
            if not parts:
                parts.append(piece if c > 0 else f"-{piece}")
            else:
                parts.append(f"+ {piece}" if c > 0 else f"- {piece}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"CanonicalForm({self.text()})"


@dataclass(frozen=True)
class PeriodModule:
    """Exact description of all formal periods of a formula.

    Admissible shift vectors s satisfy s_d = 0 for d in zero_coords and,
    for each parity constraint S, sum(s_d for d in S) even; as_lattice
    is that solution set inside the domain, generators_real its rows as
    real numbers.
    """

    zero_coords: frozenset[int]
    parity_constraints: tuple[frozenset[int], ...]
    as_lattice: CoeffLattice
    generators_real: tuple[ExactReal, ...]


@dataclass(frozen=True)
class CompositionResult:
    """Whether slope*L is an integer multiple n of T (exactly)."""

    holds: bool
    n: int | None = None


# -- parsing ---------------------------------------------------------------


def _tokenize(text: str):
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("num", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^()":
            toks.append(("op", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def advance(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def accept_op(self, *ops):
        kind, val, _ = self.peek()
        if kind == "op" and val in ops:
            self.i += 1
            return val
        return None

    def expect_op(self, op: str):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)
        self.i += 1

    def expect_num(self) -> int:
        kind, val, pos = self.peek()
        if kind != "num":
            raise ParseError("expected an integer", pos)
        self.i += 1
        return val

    def signed_num(self) -> int:
        if self.accept_op("-"):
            return -self.expect_num()
        return self.expect_num()

    def done(self):
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError("unexpected trailing input", pos)


class _FormParser(_Parser):
    """expr := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*;
    factor := ('-'|'+') factor | primary ('^' int)*;
    primary := INT | call | '(' expr ')';
    call := ('abs1'|'recip'|'sgn') '(' ('one' | 'sqrt' '(' INT ')')
            (('+'|'-') INT)? ')'"""

    def __init__(self, text: str, domain: CoeffLattice):
        super().__init__(text)
        self.domain = domain

    def parse(self) -> CanonicalForm:
        v = self.expr()
        self.done()
        return v

    def expr(self) -> CanonicalForm:
        v = self.term()
        while True:
            op = self.accept_op("+", "-")
            if not op:
                return v
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs

    def term(self) -> CanonicalForm:
        v = self.factor()
        while True:
            op = self.accept_op("*", "/")
            if not op:
                return v
            rhs = self.factor()
            v = v * rhs if op == "*" else v / rhs

    def factor(self) -> CanonicalForm:
        if self.accept_op("-"):
            return -self.factor()
        if self.accept_op("+"):
            return self.factor()
        v = self.primary()
        while self.accept_op("^"):
            v = v ** self.signed_num()
        return v

    def primary(self) -> CanonicalForm:
        kind, val, pos = self.peek()
        if kind == "num":
            self.i += 1
            return CanonicalForm.constant(val, self.domain)
        if kind == "name":
            if val in (ABS1, "recip", SGN):
                self.i += 1
                return self.call(val, pos)
            raise ParseError(f"unknown function {val!r}", pos)
        if self.accept_op("("):
            v = self.expr()
            self.expect_op(")")
            return v
        raise ParseError("expected a term", pos)

    def call(self, name: str, pos: int) -> CanonicalForm:
        self.expect_op("(")
        kind, val, apos = self.peek()
        if kind == "name" and val == "one":
            self.i += 1
            d = 1
        elif kind == "name" and val == "sqrt":
            self.i += 1
            self.expect_op("(")
            d = self.expect_num()
            self.expect_op(")")
        else:
            raise ParseError("expected 'one' or 'sqrt(<int>)'", apos)
        s = 0
        if self.accept_op("+"):
            s = self.expect_num()
        elif self.accept_op("-"):
            s = -self.expect_num()
        self.expect_op(")")
        basis = self.domain.basis
        if basis is None or d not in basis:
            raise UnknownRadicand(
                f"sqrt({d}) is not a coordinate of the domain basis"
            )
        if name == SGN:
            mono = Monomial([(Atom(SGN, d, 0), 1)])
            coeff = Fraction(-1 if s % 2 else 1)
        else:
            exp = 1 if name == ABS1 else -1
            mono = Monomial([(Atom(ABS1, d, s), exp)])
            coeff = Fraction(1)
        return CanonicalForm(self.domain, {mono: coeff})


class _RealParser(_Parser):
    """Same infix grammar over rational literals and sqrt(<int>)."""

    def parse(self) -> ExactReal:
        v = self.expr()
        self.done()
        return v

    def expr(self) -> ExactReal:
        v = self.term()
        while True:
            op = self.accept_op("+", "-")
            if not op:
                return v
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs

    def term(self) -> ExactReal:
        v = self.factor()
        while True:
            op = self.accept_op("*", "/")
            if not op:
                return v
            rhs = self.factor()
            v = _real_mul(v, rhs) if op == "*" else v / rhs

    def factor(self) -> ExactReal:
        if self.accept_op("-"):
            return -self.factor()
        if self.accept_op("+"):
            return self.factor()
        return self.primary()

    def primary(self) -> ExactReal:
        kind, val, pos = self.peek()
        if kind == "num":
            self.i += 1
            return ExactReal.rational(val)
        if kind == "name" and val == "sqrt":
            self.i += 1
            self.expect_op("(")
            n = self.expect_num()
            self.expect_op(")")
            if n <= 0:
                raise ParseError("sqrt needs a positive integer", pos)
            return ExactReal.sqrt(n)
        if self.accept_op("("):
            v = self.expr()
            self.expect_op(")")
            return v
        raise ParseError("expected a number or sqrt(...)", pos)


def _real_mul(x: ExactReal, y: ExactReal) -> ExactReal:
    basis = x.basis.merge(y.basis)
    if not basis.is_closed():
        basis = basis.closure()
    return x.with_basis(basis) * y.with_basis(basis)


def parse(expr: str, domain: CoeffLattice) -> CanonicalForm:
    """Parse a formula over the domain's coordinates into canonical form."""
    return _FormParser(expr, domain).parse()


def parse_real(text: str) -> ExactReal:
    """Parse exact-real text like `1 + 2*sqrt(3) - (1/2)*sqrt(5)`."""
    return _RealParser(text).parse()


# -- operations --------------------------------------------------------------


def add(f: CanonicalForm, g: CanonicalForm) -> CanonicalForm:
    return f + g


def mul(f: CanonicalForm, g: CanonicalForm) -> CanonicalForm:
    return f * g


def shift(f: CanonicalForm, s: Sequence[int]) -> CanonicalForm:
    """The formula of x -> f(x + s), exactly.

    abs1 atoms absorb s into their shift tag; each sgn atom contributes
    a factor (-1)**s_d to its term's coefficient.
    """
    basis = f.domain.basis
    s = tuple(int(x) for x in s)
    if not member(f.domain, s):
        raise ShiftNotInDomain(f"{list(s)} is not in the domain lattice")
    index = {d: i for i, d in enumerate(basis.radicands)}
    acc: dict[Monomial, Fraction] = {}
    for m, c in f.terms.items():
        items = []
        flips = 0
        for atom, e in m.factors:
            move = s[index[atom.radicand]]
            if atom.kind == ABS1:
                items.append((Atom(ABS1, atom.radicand, atom.shift + move), e))
            else:
                items.append((atom, e))
                flips += move
        mono = Monomial(items)
        coeff = -c if flips % 2 else c
        acc[mono] = acc.get(mono, Fraction(0)) + coeff
    return CanonicalForm(f.domain, acc)


def _shift_vector(T: ExactReal, domain: CoeffLattice) -> tuple[int, ...]:
    basis = domain.basis
    if basis is None:
        raise ValueError("domain carries no radical basis")
    for d, c in T.coords.items():
        if d not in basis:
            raise ShiftNotInDomain(
                f"shift has a sqrt({d}) component outside the domain basis"
            )
        if c.denominator != 1:
            raise NonIntegralShift(f"coordinate of sqrt({d}) is {c}, not an integer")
    return tuple(int(T.coords.get(d, 0)) for d in basis.radicands)


def shift_difference(f: CanonicalForm, T: ExactReal) -> CanonicalForm:
    """f(x + T) - f(x); identically zero IFF T is a formal period."""
    vec = _shift_vector(T, f.domain)
    return shift(f, vec) - f


def _gf2_kernel(rows: list[int], n: int) -> list[int]:
    """Kernel basis (as bitmasks over n unknowns) of GF(2) constraint rows."""
    pivots: dict[int, int] = {}
    for row in rows:
        for col, prow in pivots.items():
            if (row >> col) & 1:
                row ^= prow
        if row:
            col = (row & -row).bit_length() - 1
            for c2 in list(pivots):
                if (pivots[c2] >> col) & 1:
                    pivots[c2] ^= row
            pivots[col] = row
    basis = []
    for j in range(n):
        if j in pivots:
            continue
        v = 1 << j
        for col, prow in pivots.items():
            if (prow >> j) & 1:
                v |= 1 << col
        basis.append(v)
    return basis


def period_module(f: CanonicalForm) -> PeriodModule:
    """All formal periods of f, as an explicit sublattice of the domain.

    A shift by s maps each abs1(d, t) to abs1(d, t + s_d): the multiset
    of tags strictly translates unless s_d = 0, so every abs1-bearing
    coordinate is forced to zero.  Each term's sgn atoms multiply the
    coefficient by (-1) to the sum of their s_d, forcing even parity per
    term.  Those conditions are also sufficient, term by term.
    """
    basis = f.domain.basis
    k = len(basis)
    zero_coords = frozenset(
        a.radicand for m, _ in f._ordered for a, _e in m.factors if a.kind == ABS1
    )
    parity = sorted(
        {
            frozenset(a.radicand for a, _e in m.factors if a.kind == SGN)
            for m, _ in f._ordered
        }
        - {frozenset()},
        key=sorted,
    )
    if zero_coords:
        units = [
            tuple(1 if j == i else 0 for j in range(k))
            for i, d in enumerate(basis.radicands)
            if d not in zero_coords
        ]
        lat = intersect(f.domain, CoeffLattice(units, basis=basis, dim=k))
    else:
        lat = f.domain
    if parity and lat.rank:
        gens = lat.hnf
        r = len(gens)
        index = {d: i for i, d in enumerate(basis.radicands)}
        masks = []
        for S in parity:
            mask = 0
            for i, g in enumerate(gens):
                if sum(g[index[d]] for d in S) % 2:
                    mask |= 1 << i
            masks.append(mask)
        points = []
        for vmask in _gf2_kernel(masks, r):
            point = [0] * k
            for i in range(r):
                if (vmask >> i) & 1:
                    point = [x + y for x, y in zip(point, gens[i])]
            points.append(tuple(point))
        for g in gens:
            points.append(tuple(2 * x for x in g))
        lat = CoeffLattice(points, basis=basis, dim=k)
    gens_real = tuple(lat.to_real(row) for row in lat.hnf)
    return PeriodModule(
        zero_coords=zero_coords,
        parity_constraints=tuple(parity),
        as_lattice=lat,
        generators_real=gens_real,
    )


def _compile(f: CanonicalForm):
    """Closure evaluating f at an integer vector as an unreduced (num, den)."""
    index = {d: i for i, d in enumerate(f.domain.basis.radicands)}
    spec = []
    for m, c in f._ordered:
        atoms = tuple(
            (a.kind == SGN, index[a.radicand], a.shift, e) for a, e in m.factors
        )
        spec.append((c.numerator, c.denominator, atoms))

    def ev(x) -> tuple[int, int]:
        tn, td = 0, 1
        for cn, cd, atoms in spec:
            n, d = cn, cd
            for is_sgn, i, sh, e in atoms:
                if is_sgn:
                    if x[i] & 1:
                        n = -n
                else:
                    b = abs(x[i] + sh) + 1
                    if e >= 0:
                        n *= b**e
                    else:
                        d *= b**(-e)
            tn = tn * d + n * td
            td *= d
        return tn, td

    return ev


def _axis_values(bound: int) -> list[int]:
    vals = [0]
    for v in range(1, bound + 1):
        vals.append(v)
        vals.append(-v)
    return vals


def find_counterexample(
    f: CanonicalForm, T: ExactReal, bound: int = 25
) -> tuple[int, ...] | NotFound:
    """Bounded exact refutation of "T is a period of f".

    Enumerates lattice points x = sum(a_i * h_i) over the domain's HNF
    rows with every a_i in 0, 1, -1, ..., bound, -bound (so witnesses
    near the origin surface first) and returns the first x where
    f(x + T) != f(x), by exact rational evaluation.  A shift that leaves
    the domain lattice itself breaks D + T = D, witnessed at the origin.
    """
    s = _shift_vector(T, f.domain)
    if not member(f.domain, s):
        return tuple([0] * len(s))
    rows = f.domain.hnf
    if not rows:
        return NotFound(bound)
    ev = _compile(f)
    k = len(s)
    r = len(rows)
    vals = _axis_values(bound)
    for a in product(vals, repeat=r):
        x = [0] * k
        for ai, row in zip(a, rows):
            if ai:
                for j in range(k):
                    x[j] += ai * row[j]
        pn, pd = ev(x)
        for j in range(k):
            x[j] += s[j]
        qn, qd = ev(x)
        if pn * qd != qn * pd:
            for j in range(k):
                x[j] -= s[j]
            return tuple(x)
    return NotFound(bound)


def evaluate(f: CanonicalForm, v: Sequence[int]) -> Fraction:
    """Exact rational value of f at a domain point."""
    v = tuple(int(x) for x in v)
    if not member(f.domain, v):
        raise NotInDomain(f"{list(v)} is not in the domain lattice")
    index = {d: i for i, d in enumerate(f.domain.basis.radicands)}
    return sum((c * m.evaluate(v, index) for m, c in f._ordered), Fraction(0))


def composition_check(slope: ExactReal, T: ExactReal, L: ExactReal) -> CompositionResult:
    """Does an affine map with this slope push period L onto a multiple of T?

    Exactly when slope * L / T is an integer n, every function with
    period T composes with the affine map to an L-periodic function.
    """
    if T.is_zero():
        raise DivisionByZero("zero period T")
    if L.is_zero():
        raise ValueError("zero period L")
    ratio = _real_mul(slope, L) / T
    if ratio.is_rational():
        q = ratio.as_rational()
        if q.denominator == 1:
            return CompositionResult(holds=True, n=int(q))
    return CompositionResult(holds=False, n=None)
