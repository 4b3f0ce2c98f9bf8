"""Exact arithmetic in multiquadratic fields Q(sqrt(d1), ..., sqrt(dr)).

Elements are finite rational combinations of square roots of distinct
squarefree positive integers.  Because those roots are linearly
independent over Q, an element is zero exactly when every coordinate is
zero, which makes equality, sign, floor, and commensurability decidable
with no floating point anywhere in a decision path.  Nonzero signs are
determined by adaptive dyadic interval refinement with an exact
zero short-circuit.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Mapping, Union

from .errors import (
    BasisNotClosed,
    DivisionByZero,
    IncompatibleBasis,
    PrecisionExhausted,
)

RationalLike = Union[int, Fraction]

INITIAL_PRECISION = 64
PRECISION_CAP = 4096


def _squarefree_part(n: int) -> int:
    """Largest squarefree divisor d of n with n/d a perfect square."""
    if n <= 0:
        raise ValueError("radicand must be positive")
    out = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e % 2:
                out *= p
        p += 1 if p == 2 else 2
    return out * n


def _is_squarefree(n: int) -> bool:
    return n >= 1 and _squarefree_part(n) == n


@lru_cache(maxsize=None)
def _sqrt_floor_scaled(d: int, prec: int) -> int:
    # s with s <= sqrt(d) * 2^prec < s + 1
    return isqrt(d << (2 * prec))


class RadicalBasis:
    """Ordered tuple of distinct squarefree radicands, always starting at 1.

    The basis is purely additive by default; `closure()` produces the
    multiplicatively closed extension (all squarefree subset products),
    which costs up to 2^r entries and is only paid on request.
    """

    __slots__ = ("radicands", "_index")

    def __init__(self, radicands: Iterable[int]):
        rads = sorted(set(int(d) for d in radicands) | {1})
        for d in rads:
            if not _is_squarefree(d):
                raise ValueError(f"radicand {d} is not squarefree")
        self.radicands: tuple[int, ...] = tuple(rads)
        self._index = {d: i for i, d in enumerate(self.radicands)}

    def __len__(self) -> int:
        return len(self.radicands)

    def __iter__(self):
        return iter(self.radicands)

    def __contains__(self, d: int) -> bool:
        return d in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, RadicalBasis) and self.radicands == other.radicands

    def __hash__(self) -> int:
        return hash(self.radicands)

    def __repr__(self) -> str:
        return f"RadicalBasis({list(self.radicands)})"

    def index(self, d: int) -> int:
        return self._index[d]

    def merge(self, other: "RadicalBasis") -> "RadicalBasis":
        if self == other:
            return self
        try:
            return RadicalBasis(self.radicands + other.radicands)
        except ValueError as exc:  # defensive; valid bases always merge
            raise IncompatibleBasis(str(exc)) from exc

    def closure(self) -> "RadicalBasis":
        """Smallest basis containing this one and closed under products."""
        rads = {1}
        for d in self.radicands:
            rads |= {_squarefree_part(d * r) for r in rads} | {d}
        return RadicalBasis(rads)

    def is_closed(self) -> bool:
        rs = self.radicands
        return all(
            _squarefree_part(a * b) in self._index for a in rs for b in rs if a <= b
        )


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


class ExactReal:
    """Immutable element of a multiquadratic field.

    `coords` maps radicand -> rational coefficient; absent keys mean 0.
    The represented value is sum(coords[d] * sqrt(d)).
    """

    __slots__ = ("basis", "coords")

    def __init__(self, basis: RadicalBasis, coords: Mapping[int, RationalLike]):
        clean: dict[int, Fraction] = {}
        for d, c in coords.items():
            if d not in basis:
                raise ValueError(f"radicand {d} not in basis {basis.radicands}")
            f = _as_fraction(c)
            if f != 0:
                clean[int(d)] = f
        self.basis = basis
        self.coords: dict[int, Fraction] = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def rational(cls, q: RationalLike, basis: RadicalBasis | None = None) -> "ExactReal":
        b = basis if basis is not None else RadicalBasis([1])
        return cls(b, {1: _as_fraction(q)})

    @classmethod
    def sqrt(cls, n: int, basis: RadicalBasis | None = None) -> "ExactReal":
        """sqrt(n) for a positive integer, normalized: sqrt(8) = 2*sqrt(2)."""
        n = int(n)
        d = _squarefree_part(n)
        m = isqrt(n // d)
        b = basis if basis is not None else RadicalBasis([1, d])
        return cls(b, {d: Fraction(m)})

    def with_basis(self, basis: RadicalBasis) -> "ExactReal":
        """Embed into a larger basis (coords unchanged)."""
        return ExactReal(basis, self.coords)

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coords

    def is_rational(self) -> bool:
        return all(d == 1 for d in self.coords)

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.coords.get(1, Fraction(0))

    # -- ring operations -----------------------------------------------

    def __add__(self, other) -> "ExactReal":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        basis = self.basis.merge(other.basis)
        coords = dict(self.coords)
        for d, c in other.coords.items():
            coords[d] = coords.get(d, Fraction(0)) + c
        return ExactReal(basis, coords)

    def __radd__(self, other) -> "ExactReal":
        return self.__add__(other)

    def __neg__(self) -> "ExactReal":
        return ExactReal(self.basis, {d: -c for d, c in self.coords.items()})

    def __sub__(self, other) -> "ExactReal":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ExactReal":
        return (-self).__add__(other)

    def scale(self, q: RationalLike) -> "ExactReal":
        """Multiply by a rational scalar (never needs basis closure)."""
        f = _as_fraction(q)
        return ExactReal(self.basis, {d: c * f for d, c in self.coords.items()})

    def __mul__(self, other) -> "ExactReal":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, ExactReal):
            return NotImplemented
        basis = self.basis.merge(other.basis)
        coords: dict[int, Fraction] = {}
        for a, ca in self.coords.items():
            for b, cb in other.coords.items():
                g = gcd(a, b)
                d = (a // g) * (b // g)
                if d not in basis:
                    raise BasisNotClosed(
                        f"sqrt({a})*sqrt({b}) needs radicand {d}; "
                        f"extend the basis via closure() first"
                    )
                coords[d] = coords.get(d, Fraction(0)) + ca * cb * g
        return ExactReal(basis, coords)

    def __rmul__(self, other) -> "ExactReal":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def invert(self) -> "ExactReal":
        """Exact reciprocal, by conjugation over one prime at a time.

        Split x = a + b where b collects the radicands divisible by a
        prime q and a the rest; then x * (a - b) = a^2 - b^2 has no
        radicand divisible by q, so recursion strips one prime per level
        and bottoms out at a rational.  Works inside the closure of the
        element's basis, and the result is expressed over that closure.
        """
        if self.is_zero():
            raise DivisionByZero("invert of zero element")
        closed = self.basis if self.basis.is_closed() else self.basis.closure()
        return _invert_in(self.with_basis(closed))

    def __truediv__(self, other) -> "ExactReal":
        if isinstance(other, (int, Fraction)):
            f = _as_fraction(other)
            if f == 0:
                raise DivisionByZero("division by rational zero")
            return self.scale(1 / f)
        if not isinstance(other, ExactReal):
            return NotImplemented
        basis = self.basis.merge(other.basis)
        if not basis.is_closed():
            basis = basis.closure()
        return self.with_basis(basis) * other.with_basis(basis).invert()

    def __rtruediv__(self, other) -> "ExactReal":
        inv = self.invert()
        return inv.scale(other) if isinstance(other, (int, Fraction)) else NotImplemented

    # -- order ----------------------------------------------------------

    def sign(self) -> int:
        """-1, 0, or +1; exact.

        Zero is decided structurally (all coordinates zero).  Otherwise a
        dyadic enclosure is refined, doubling precision from 64 up to a
        4096-bit cap, until it excludes zero.  The cap is unreachable for
        nonzero elements of sane height and exists to guard misuse.
        """
        if not self.coords:
            return 0
        if self.is_rational():
            c = self.coords[1]
            return -1 if c < 0 else 1
        prec = INITIAL_PRECISION
        while prec <= PRECISION_CAP:
            lo, hi = self._enclosure_scaled(prec)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            prec *= 2
        raise PrecisionExhausted(f"sign of {self!r} undecided at {PRECISION_CAP} bits")

    def _enclosure_scaled(self, prec: int) -> tuple[int, int]:
        """Integers (lo, hi) with lo <= value * 2^prec <= hi."""
        lo = 0
        hi = 0
        for d, c in self.coords.items():
            if d == 1:
                n = c.numerator << prec
                q = c.denominator
                lo += n // q
                hi += -((-n) // q)
                continue
            s = _sqrt_floor_scaled(d, prec)
            # s <= sqrt(d)*2^prec < s+1
            if c > 0:
                lo += (c.numerator * s) // c.denominator
                hi += -((-(c.numerator * (s + 1))) // c.denominator)
            else:
                lo += (c.numerator * (s + 1)) // c.denominator
                hi += -((-(c.numerator * s)) // c.denominator)
        return lo, hi

    def enclosure(self, prec: int) -> tuple[Fraction, Fraction]:
        """Rational interval [lo, hi] containing the value, width ~2^-prec."""
        lo, hi = self._enclosure_scaled(prec)
        unit = Fraction(1, 1 << prec)
        return lo * unit, hi * unit

    def floor(self) -> int:
        """Unique n with n <= x < n+1; exact.

        Rational values floor directly; irrational values refine the
        dyadic enclosure until it contains no integer (an irrational is
        never an integer, so this terminates).
        """
        if self.is_rational():
            c = self.coords.get(1, Fraction(0))
            return c.numerator // c.denominator
        prec = INITIAL_PRECISION
        while prec <= PRECISION_CAP:
            lo, hi = self._enclosure_scaled(prec)
            flo = lo >> prec
            fhi = hi >> prec
            if flo == fhi:
                return flo
            prec *= 2
        raise PrecisionExhausted(f"floor of {self!r} undecided at {PRECISION_CAP} bits")

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.coords.items())))

    def __lt__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() >= 0

    def __abs__(self) -> "ExactReal":
        return -self if self.sign() < 0 else self

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- rendering -------------------------------------------------------

    def __repr__(self) -> str:
        return f"ExactReal({self})"

    def __str__(self) -> str:
        if not self.coords:
            return "0"
        parts: list[str] = []
        for d in sorted(self.coords):
            c = self.coords[d]
            mag = abs(c)
            if d == 1:
                body = str(mag)
            elif mag == 1:
                body = f"sqrt({d})"
            elif mag.denominator == 1:
                body = f"{mag}*sqrt({d})"
            else:
                body = f"({mag})*sqrt({d})"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def approx_str(self, digits: int = 12) -> str:
        """Decimal rendering, correct to `digits` significant digits.

        Display only; never feeds back into any decision.
        """
        if self.is_zero():
            return "0"
        prec = INITIAL_PRECISION
        while True:
            lo, hi = self._enclosure_scaled(prec)
            if lo * hi > 0 and (hi - lo) * 10 ** (digits + 2) < abs(lo):
                break
            prec *= 2
        mid = Fraction(lo + hi, 1 << (prec + 1))
        neg = mid < 0
        m = abs(mid)
        # place m in [1/10, 1): exp is the count of digits left of the point
        exp = 0
        while m >= 1:
            m /= 10
            exp += 1
        while m < Fraction(1, 10):
            m *= 10
            exp -= 1
        scaled = m * 10**digits
        q, r = divmod(scaled.numerator, scaled.denominator)
        if 2 * r >= scaled.denominator:
            q += 1
        s = str(q)
        if len(s) > digits:  # carry from rounding 0.999... up
            exp += 1
            s = s[:digits]
        if exp <= 0:
            text = "0." + "0" * (-exp) + s
        elif exp >= len(s):
            text = s + "0" * (exp - len(s))
        else:
            text = s[:exp] + "." + s[exp:]
        if "." in text:
            text = text.rstrip("0").rstrip(".")
        return f"-{text}" if neg else text


def _coerce(x) -> "ExactReal":
    if isinstance(x, ExactReal):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactReal.rational(x)
    return NotImplemented


def _smallest_prime_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    p = 3
    while p * p <= n:
        if n % p == 0:
            return p
        p += 2
    return n


def _invert_in(x: ExactReal) -> ExactReal:
    # pre: x nonzero, x.basis multiplicatively closed
    if x.is_rational():
        return ExactReal.rational(1 / x.as_rational(), x.basis)
    q = _smallest_prime_factor(max(d for d in x.coords if d != 1))
    a_coords: dict[int, Fraction] = {}
    b_coords: dict[int, Fraction] = {}
    for d, c in x.coords.items():
        (b_coords if d % q == 0 else a_coords)[d] = c
    a = ExactReal(x.basis, a_coords)
    b = ExactReal(x.basis, b_coords)
    # x * (a - b) = a^2 - b^2, whose radicands are all coprime to q:
    # for q | d1, q | d2 the squarefree part of d1*d2 loses the q^2.
    denom = a * a - b * b
    return (a - b) * _invert_in(denom)


# -- module-level operation surface -------------------------------------


def add(x: ExactReal, y: ExactReal) -> ExactReal:
    return x + y


def mul(x: ExactReal, y: ExactReal) -> ExactReal:
    return x * y


def invert(x: ExactReal) -> ExactReal:
    return x.invert()


def sign(x: ExactReal) -> int:
    return x.sign()


def floor(x: ExactReal) -> int:
    return x.floor()


def commensurable(x: ExactReal, y: ExactReal) -> Fraction | None:
    """Rational ratio x/y in lowest terms, or None if x/y is irrational.

    Exact: x/y is rational iff the coordinate vectors are parallel over Q,
    which reduces to support equality plus one common ratio.
    """
    if x.is_zero() or y.is_zero():
        raise DivisionByZero("commensurability is undefined for zero")
    if set(x.coords) != set(y.coords):
        return None
    d0 = next(iter(y.coords))
    r = x.coords[d0] / y.coords[d0]
    for d, c in y.coords.items():
        if x.coords[d] != r * c:
            return None
    return r
