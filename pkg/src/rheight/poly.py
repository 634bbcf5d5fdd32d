"""Bivariate polynomials with nonnegative rational exponents and exact rational coefficients.

Coefficients and exponents are :class:`fractions.Fraction` throughout, so every
algebraic operation here is exact.  Floating point only enters through
:func:`evaluate` and :func:`evaluate_array`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Mapping, Union

import numpy as np

RationalLike = Union[int, Fraction, str]
Exponent2 = tuple[Fraction, Fraction]


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and strings like ``"3/4"`` to a Fraction.

    Floats are refused on purpose: silently turning 0.1 into a 3602879701896397/36028797018963968
    would defeat the exactness contract.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def _is_integer(q: Fraction) -> bool:
    return q.denominator == 1


def _int_root(n: int, k: int) -> int | None:
    """Exact ``k``-th root of ``n >= 0`` or ``None``."""
    if n < 2:
        return n
    r = 1 << (n.bit_length() // k + 1)  # strictly above the root
    # integer Newton iteration decreases monotonically to floor(n^(1/k))
    while True:
        nxt = ((k - 1) * r + n // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None


def exact_power(r: RationalLike, q: RationalLike) -> Fraction:
    """``r**q`` for rational ``r > 0`` and rational ``q``, when the result is rational.

    Raises ``ValueError`` if ``r**q`` is irrational.
    """
    r = as_fraction(r)
    q = as_fraction(q)
    if r <= 0:
        raise ValueError("base must be positive")
    k = q.denominator
    num, den = _int_root(r.numerator, k), _int_root(r.denominator, k)
    if num is None or den is None:
        raise ValueError(f"{r}^{q} is not rational")
    return Fraction(num, den) ** q.numerator


class PuiseuxPoly:
    """Finite sum ``sum c * x1^e1 * x2^e2`` with rational ``e1, e2 >= 0`` and rational ``c != 0``.

    Instances are immutable.  Terms are kept sorted lexicographically by
    exponent, and zero coefficients are never stored, so two equal polynomials
    always have identical term tuples.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, RationalLike] | Iterable[tuple[tuple, RationalLike]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent2, Fraction] = {}
        for exp, coeff in items:
            e1, e2 = (as_fraction(e) for e in exp)
            if e1 < 0 or e2 < 0:
                raise ValueError(f"negative exponent {(e1, e2)} not allowed")
            key = (e1, e2)
            acc[key] = acc.get(key, Fraction(0)) + as_fraction(coeff)
        self._terms: tuple[tuple[Exponent2, Fraction], ...] = tuple(
            (k, acc[k]) for k in sorted(acc) if acc[k] != 0
        )
        self._hash = hash(self._terms)

    # -- container protocol -------------------------------------------------
    @property
    def terms(self) -> dict[Exponent2, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponent2, Fraction]]:
        return iter(self._terms)

    def support(self) -> list[Exponent2]:
        return [k for k, _ in self._terms]

    def coefficient(self, e1: RationalLike, e2: RationalLike) -> Fraction:
        return self.terms.get((as_fraction(e1), as_fraction(e2)), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PuiseuxPoly):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"PuiseuxPoly({render_poly(self)!r})"

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def constant(c: RationalLike) -> "PuiseuxPoly":
        return PuiseuxPoly({(0, 0): as_fraction(c)})

    @staticmethod
    def monomial(e1: RationalLike, e2: RationalLike, c: RationalLike = 1) -> "PuiseuxPoly":
        return PuiseuxPoly({(e1, e2): c})

    def _coerce(self, other) -> "PuiseuxPoly":
        if isinstance(other, PuiseuxPoly):
            return other
        return PuiseuxPoly.constant(other)

    def __add__(self, other) -> "PuiseuxPoly":
        other = self._coerce(other)
        return PuiseuxPoly(list(self._terms) + list(other._terms))

    __radd__ = __add__

    def __neg__(self) -> "PuiseuxPoly":
        return PuiseuxPoly((k, -c) for k, c in self._terms)

    def __sub__(self, other) -> "PuiseuxPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PuiseuxPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PuiseuxPoly":
        other = self._coerce(other)
        out = []
        for (a1, a2), c in self._terms:
            for (b1, b2), d in other._terms:
                out.append(((a1 + b1, a2 + b2), c * d))
        return PuiseuxPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "PuiseuxPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = PuiseuxPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structural queries -------------------------------------------------
    def is_polynomial(self) -> bool:
        """True when every exponent is an integer."""
        return all(_is_integer(e1) and _is_integer(e2) for (e1, e2), _ in self._terms)

    def degree_x2(self) -> Fraction:
        return max((e2 for (_, e2), _ in self._terms), default=Fraction(0))

    def map_terms(self, fn) -> "PuiseuxPoly":
        """Apply ``fn(exp, coeff) -> (exp, coeff)`` termwise."""
        return PuiseuxPoly(fn(k, c) for k, c in self._terms)


def substitute_shear(p: PuiseuxPoly, c: RationalLike, a: RationalLike) -> PuiseuxPoly:
    """Replace ``x2`` by ``x2 + c * x1^a`` and expand exactly.

    Every ``x2`` exponent of ``p`` has to be a nonnegative integer so that the
    binomial expansion is finite.
    """
    c = as_fraction(c)
    a = as_fraction(a)
    if a <= 0:
        raise ValueError("shear exponent a must be positive")
    out: list[tuple[Exponent2, Fraction]] = []
    for (e1, e2), coeff in p.items():
        if not _is_integer(e2):
            raise ValueError(f"x2 exponent {e2} is not an integer; shear expansion would be infinite")
        k = int(e2)
        for j in range(k + 1):
            # choose j copies of c*x1^a and k-j copies of x2
            out.append(((e1 + j * a, Fraction(k - j)), coeff * comb(k, j) * c**j))
    return PuiseuxPoly(out)


def evaluate(p: PuiseuxPoly, x1: float, x2: float) -> float:
    """Floating point value of ``p`` at ``(x1, x2)``, summed with :func:`math.fsum`."""
    parts = []
    for (e1, e2), c in p.items():
        parts.append(float(c) * _pow(x1, e1, "x1") * _pow(x2, e2, "x2"))
    return math.fsum(parts)


def _pow(x: float, e: Fraction, name: str) -> float:
    if e == 0:
        return 1.0
    if _is_integer(e):
        return float(x) ** int(e)
    if x < 0:
        raise ValueError(f"{name} = {x} < 0 with fractional exponent {e}")
    return float(x) ** float(e)


def evaluate_array(p: PuiseuxPoly, x1, x2) -> np.ndarray:
    """Vectorised :func:`evaluate` over broadcastable numpy arrays."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    out = np.zeros(np.broadcast(x1, x2).shape)
    for (e1, e2), c in p.items():
        term = float(c) * _pow_array(x1, e1, "x1") * _pow_array(x2, e2, "x2")
        out = out + term
    return out


def _pow_array(x: np.ndarray, e: Fraction, name: str) -> np.ndarray:
    if e == 0:
        return np.ones_like(x)
    if _is_integer(e):
        return x ** int(e)
    if np.any(x < 0):
        raise ValueError(f"{name} takes negative values but has fractional exponent {e}")
    return x ** float(e)


def evaluate_exact(p: PuiseuxPoly, x1: RationalLike, x2: RationalLike) -> Fraction:
    """Exact value at a rational point; only integer exponents are allowed."""
    x1 = as_fraction(x1)
    x2 = as_fraction(x2)
    total = Fraction(0)
    for (e1, e2), c in p.items():
        if not (_is_integer(e1) and _is_integer(e2)):
            raise ValueError("exact evaluation needs integer exponents")
        total += c * x1 ** int(e1) * x2 ** int(e2)
    return total


# ---------------------------------------------------------------------------
# rendering and parsing
# ---------------------------------------------------------------------------

def _render_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"({q.numerator}/{q.denominator})"


def _render_exp(var: str, e: Fraction) -> str:
    if e == 0:
        return ""
    if e == 1:
        return var
    return f"{var}^{_render_rational(e)}"


def render_poly(p: PuiseuxPoly) -> str:
    """Canonical text form, terms in lexicographic exponent order."""
    if not p:
        return "0"
    chunks = []
    for (e1, e2), c in p.items():
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        factors = [f for f in (_render_exp("x1", e1), _render_exp("x2", e2)) if f]
        if mag != 1 or not factors:
            factors.insert(0, _render_rational(mag))
        chunks.append((sign, "*".join(factors)))
    head_sign, head = chunks[0]
    text = ("-" if head_sign == "-" else "") + head
    for sign, body in chunks[1:]:
        text += f" {sign} {body}"
    return text


class PolySyntaxError(ValueError):
    """Raised by :func:`parse_poly`; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class _Parser:
    # grammar (whitespace ignored):
    #   poly   := ['+'|'-'] term (('+'|'-') term)*
    #   term   := factor ('*' factor)*
    #   factor := number | '(' number ['/' number] ')' | number '/' number | var ['^' exp]
    #   exp    := uint | '(' ['-'] uint ['/' uint] ')'
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise PolySyntaxError(msg, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def uint(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a number")
        return int(self.text[start:self.pos])

    def ratio_body(self, allow_sign: bool) -> Fraction:
        sign = 1
        if allow_sign and self.peek() in "+-":
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        num = self.uint()
        den = 1
        if self.peek() == "/":
            self.pos += 1
            where = self.pos
            den = self.uint()
            if den == 0:
                self.pos = where
                self.error("zero denominator")
        return Fraction(sign * num, den)

    def parse(self) -> PuiseuxPoly:
        if not self.text.strip():
            self.error("empty input")
        terms: list[tuple[Exponent2, Fraction]] = []
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        while True:
            exp, coeff = self.term()
            terms.append((exp, sign * coeff))
            ch = self.peek()
            if ch == "":
                break
            if ch not in "+-":
                self.error(f"unexpected character {ch!r}")
            sign = -1 if ch == "-" else 1
            self.pos += 1
        return PuiseuxPoly(terms)

    def term(self) -> tuple[Exponent2, Fraction]:
        e1 = Fraction(0)
        e2 = Fraction(0)
        coeff = Fraction(1)
        while True:
            ch = self.peek()
            if ch == "x":
                var = self.var()
                e = Fraction(1)
                if self.peek() == "^":
                    self.pos += 1
                    e = self.exponent()
                if var == 1:
                    e1 += e
                else:
                    e2 += e
            elif ch == "(":
                self.pos += 1
                coeff *= self.ratio_body(allow_sign=True)
                self.expect(")")
            elif ch.isdigit():
                coeff *= self.ratio_body(allow_sign=False)
            else:
                self.error("expected a coefficient or variable")
            if self.peek() == "*":
                self.pos += 1
                continue
            return (e1, e2), coeff

    def var(self) -> int:
        start = self.pos
        if self.text.startswith("x1", self.pos):
            self.pos += 2
            return 1
        if self.text.startswith("x2", self.pos):
            self.pos += 2
            return 2
        self.pos = start
        self.error("unknown variable (expected x1 or x2)")

    def exponent(self) -> Fraction:
        where = self.pos
        if self.peek() == "(":
            self.pos += 1
            value = self.ratio_body(allow_sign=True)
            self.expect(")")
        else:
            value = Fraction(self.uint())
        if value < 0:
            self.pos = where
            self.error("negative exponent")
        return value


def parse_poly(text: str) -> PuiseuxPoly:
    """Parse ``c * x1^(p/q) * x2^(r/s) + ...`` into a canonical :class:`PuiseuxPoly`.

    >>> render_poly(parse_poly("x2^3 + x1^9"))
    'x2^3 + x1^9'
    """
    return _Parser(text).parse()
