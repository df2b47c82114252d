"""Sparse exact multivariate polynomial arithmetic over the rationals.

A polynomial is a map from exponent tuples to nonzero Fractions, tied to a
fixed ordered variable set.  The zero polynomial is the empty map.  All
operations are pure; values are never mutated after construction.

Monomial orders (lex, graded lex, weighted with lex tie-break) drive
deterministic printing, division and normal forms.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

Exponent = tuple[int, ...]

DEFAULT_STEP_BUDGET = 10**6


class PolyError(Exception):
    """Base class for polynomial-domain errors."""


class VarSetMismatch(PolyError):
    pass


class UnknownVariable(PolyError):
    pass


class MissingImage(PolyError):
    pass


class DivisionByZero(PolyError):
    pass


class NotDivisible(PolyError):
    """Exact division failed; carries the nonzero remainder as witness."""

    def __init__(self, remainder: "Polynomial"):
        super().__init__(f"not exactly divisible; remainder {remainder}")
        self.remainder = remainder


class DimensionMismatch(PolyError):
    pass


class NonTerminatingOrder(PolyError):
    """Reduction exceeded its step budget; the order is not a well-order here."""


class ParseError(PolyError):
    pass


@dataclass(frozen=True)
class VarSet:
    """An ordered tuple of distinct variable names; exponents index into it."""

    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        if any(not n for n in self.names):
            raise ValueError("empty variable name")

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariable(f"{name!r} not in variables {self.names}") from None

    def extend(self, extra: Iterable[str]) -> "VarSet":
        """A new VarSet with extra names appended (must be fresh)."""
        return VarSet(self.names + tuple(extra))

    def fresh_name(self, stem: str) -> str:
        """A name based on stem that does not collide with existing names."""
        if stem not in self.names:
            return stem
        k = 1
        while f"{stem}{k}" in self.names:
            k += 1
        return f"{stem}{k}"


def varset(*names: str) -> VarSet:
    return VarSet(tuple(names))


# ---------------------------------------------------------------------------
# monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """Total multiplicative order on exponent tuples.

    kind is one of "lex", "grlex", "weighted"; weighted orders carry an
    integer weight per variable and break ties by lex.  Weighted orders are
    well-orders only when all weights are nonnegative; normal_form guards
    against the rest with a step budget.
    """

    kind: str
    weights: tuple[int, ...] | None = None

    def key(self, e: Exponent):
        if self.kind == "lex":
            return e
        if self.kind == "grlex":
            return (sum(e), e)
        if self.kind == "weighted":
            w = self.weights
            if w is None or len(w) != len(e):
                raise DimensionMismatch("weight vector does not match exponent length")
            return (sum(wi * ei for wi, ei in zip(w, e)), e)
        raise ValueError(f"unknown order kind {self.kind!r}")

    def is_well_order_certain(self) -> bool:
        if self.kind in ("lex", "grlex"):
            return True
        return all(w >= 0 for w in (self.weights or ()))


LEX = MonomialOrder("lex")
GRLEX = MonomialOrder("grlex")


def weighted_order(weights: Iterable[int]) -> MonomialOrder:
    return MonomialOrder("weighted", tuple(weights))


# ---------------------------------------------------------------------------
# polynomials


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial: exponent tuple -> nonzero Fraction coefficient."""

    varset: VarSet
    terms: dict[Exponent, Fraction] = field(default_factory=dict)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(vs: VarSet) -> "Polynomial":
        return Polynomial(vs, {})

    @staticmethod
    def constant(vs: VarSet, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return Polynomial(vs, {})
        return Polynomial(vs, {(0,) * len(vs): c})

    @staticmethod
    def variable(vs: VarSet, name: str) -> "Polynomial":
        i = vs.index(name)
        e = [0] * len(vs)
        e[i] = 1
        return Polynomial(vs, {tuple(e): Fraction(1)})

    @staticmethod
    def monomial(vs: VarSet, exponents: Exponent, c=1) -> "Polynomial":
        c = Fraction(c)
        if len(exponents) != len(vs):
            raise DimensionMismatch("exponent vector length does not match varset")
        if any(e < 0 for e in exponents):
            raise ValueError("negative exponent")
        if c == 0:
            return Polynomial(vs, {})
        return Polynomial(vs, {tuple(exponents): c})

    @staticmethod
    def from_terms(vs: VarSet, terms: Mapping[Exponent, Fraction]) -> "Polynomial":
        clean = {tuple(e): Fraction(c) for e, c in terms.items() if c != 0}
        return Polynomial(vs, clean)

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.varset), Fraction(0))

    def total_degree(self) -> int:
        """Max total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.varset.index(name)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def min_exponent_of(self, name: str) -> int:
        """Smallest exponent of name across monomials (0 for zero poly)."""
        i = self.varset.index(name)
        if not self.terms:
            return 0
        return min(e[i] for e in self.terms)

    def variables_used(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, ei in enumerate(e):
                if ei:
                    used.add(self.varset.names[i])
        return used

    def leading_monomial(self, order: MonomialOrder = GRLEX) -> Exponent:
        if not self.terms:
            raise DivisionByZero("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = GRLEX) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def _check_same_varset(self, other: "Polynomial"):
        if self.varset != other.varset:
            raise VarSetMismatch(
                f"variable sets differ: {self.varset.names} vs {other.varset.names}"
            )

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_same_varset(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial(self.varset, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.varset, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_same_varset(other)
        if not self.terms or not other.terms:
            return Polynomial.zero(self.varset)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Polynomial(self.varset, out)

    def __rmul__(self, other) -> "Polynomial":
        return self.__mul__(other)

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return Polynomial.zero(self.varset)
        return Polynomial(self.varset, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(self.varset, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- calculus / mapping ------------------------------------------------

    def partial(self, name: str) -> "Polynomial":
        i = self.varset.index(name)
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            ne = tuple(ne)
            s = out.get(ne, Fraction(0)) + c * e[i]
            if s:
                out[ne] = s
            else:
                out.pop(ne, None)
        return Polynomial(self.varset, out)

    def substitute(self, images: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Compose with the map sending each used variable to its image.

        Every variable actually occurring in self must have an image; all
        images must share one VarSet, which becomes the result's VarSet.
        """
        used = self.variables_used()
        missing = sorted(used - set(images))
        if missing:
            raise MissingImage(f"no image for variable(s) {missing}")
        if images:
            target = next(iter(images.values())).varset
            for img in images.values():
                if img.varset != target:
                    raise VarSetMismatch("substitution images use different varsets")
        else:
            target = self.varset
        result = Polynomial.zero(target)
        powers: dict[tuple[str, int], Polynomial] = {}

        def power_of(name: str, k: int) -> Polynomial:
            key = (name, k)
            if key not in powers:
                powers[key] = images[name] ** k
            return powers[key]

        for e, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for i, ei in enumerate(e):
                if ei:
                    term = term * power_of(self.varset.names[i], ei)
            result = result + term
        return result

    def rename_into(self, vs: VarSet) -> "Polynomial":
        """Reinterpret in a larger varset containing all used variables."""
        positions = []
        for name in self.varset.names:
            positions.append(vs.index(name) if name in vs else None)
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            ne = [0] * len(vs)
            for i, ei in enumerate(e):
                if ei:
                    if positions[i] is None:
                        raise UnknownVariable(
                            f"{self.varset.names[i]!r} missing from target varset"
                        )
                    ne[positions[i]] = ei
            out[tuple(ne)] = out.get(tuple(ne), Fraction(0)) + c
        return Polynomial.from_terms(vs, out)

    # -- printing ----------------------------------------------------------

    def sorted_terms(self, order: MonomialOrder = GRLEX) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def to_string(self, order: MonomialOrder = GRLEX) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms(order):
            factors = []
            for i, ei in enumerate(e):
                if ei == 1:
                    factors.append(self.varset.names[i])
                elif ei > 1:
                    factors.append(f"{self.varset.names[i]}^{ei}")
            mono = "*".join(factors)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"Polynomial({self.to_string()!r}, vars={self.varset.names})"


# ---------------------------------------------------------------------------
# module-level operations


def arith(a: Polynomial, b: Polynomial | None, op: str, n: int | None = None) -> Polynomial:
    """Dispatch add/sub/mul/pow; pow ignores b and uses the exponent n."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        if n is None or n < 0:
            raise ValueError("pow needs a non-negative integer exponent")
        return a**n
    raise ValueError(f"unknown op {op!r}")


def substitute(p: Polynomial, images: Mapping[str, Polynomial]) -> Polynomial:
    return p.substitute(images)


def partial_derivative(p: Polynomial, name: str) -> Polynomial:
    return p.partial(name)


def divmod_poly(
    p: Polynomial, d: Polynomial, order: MonomialOrder = GRLEX
) -> tuple[Polynomial, Polynomial]:
    """Division with remainder by a single divisor under the given order.

    Returns (q, r) with p = q*d + r and no monomial of r divisible by the
    leading monomial of d.
    """
    if d.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    p._check_same_varset(d)
    lm = d.leading_monomial(order)
    lc = d.terms[lm]
    q = Polynomial.zero(p.varset)
    r = Polynomial.zero(p.varset)
    work = p
    while not work.is_zero():
        wm = work.leading_monomial(order)
        if all(a >= b for a, b in zip(wm, lm)):
            shift = tuple(a - b for a, b in zip(wm, lm))
            coeff = work.terms[wm] / lc
            t = Polynomial.monomial(p.varset, shift, coeff)
            q = q + t
            work = work - t * d
        else:
            t = Polynomial.monomial(p.varset, wm, work.terms[wm])
            r = r + t
            work = work - t
    return q, r


def exact_divide(p: Polynomial, d: Polynomial) -> Polynomial:
    """Quotient p/d when the division is exact; NotDivisible otherwise.

    The witness remainder reported on failure is computed under gradedlex.
    """
    q, r = divmod_poly(p, d, GRLEX)
    if not r.is_zero():
        raise NotDivisible(r)
    return q


def normal_form(
    p: Polynomial,
    d: Polynomial,
    order: MonomialOrder = GRLEX,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> Polynomial:
    """Reduce p modulo the principal ideal (d): remainder of full reduction.

    A single polynomial is a Groebner basis of the ideal it generates, so the
    result is the unique canonical form for the fixed (d, order).  A step
    budget converts non-well-orders into NonTerminatingOrder.
    """
    if d.is_zero():
        raise DivisionByZero("normal form modulo the zero polynomial")
    p._check_same_varset(d)
    lm = d.leading_monomial(order)
    lc = d.terms[lm]
    work = p
    steps = 0
    while True:
        reducible = [e for e in work.terms if all(a >= b for a, b in zip(e, lm))]
        if not reducible:
            return work
        e = max(reducible, key=order.key)
        steps += 1
        if steps > step_budget:
            raise NonTerminatingOrder(
                f"reduction exceeded {step_budget} steps; order is not a well-order here"
            )
        shift = tuple(a - b for a, b in zip(e, lm))
        t = Polynomial.monomial(work.varset, shift, work.terms[e] / lc)
        work = work - t * d


def jacobian_matrix(fs: list[Polynomial]) -> list[list[Polynomial]]:
    vs = fs[0].varset
    return [[f.partial(name) for name in vs.names] for f in fs]


def poly_det(rows: list[list[Polynomial]]) -> Polynomial:
    """Determinant of a square matrix of polynomials by cofactor expansion."""
    n = len(rows)
    vs = rows[0][0].varset
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    result = Polynomial.zero(vs)
    for j in range(n):
        entry = rows[0][j]
        if entry.is_zero():
            continue
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        cof = entry * poly_det(minor)
        result = result + (cof if j % 2 == 0 else -cof)
    return result


def jacobian_det(fs: list[Polynomial]) -> Polynomial:
    """Determinant of the matrix of partials of n polynomials in n variables."""
    if not fs:
        raise DimensionMismatch("empty polynomial list")
    vs = fs[0].varset
    for f in fs:
        if f.varset != vs:
            raise VarSetMismatch("jacobian entries use different varsets")
    if len(fs) != len(vs):
        raise DimensionMismatch(
            f"need {len(vs)} polynomials for variables {vs.names}, got {len(fs)}"
        )
    return poly_det(jacobian_matrix(fs))


# ---------------------------------------------------------------------------
# parsing and JSON


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*|\+|-|\(|\)|/))")


def _tokenize(text: str) -> list[str]:
    text = text.replace("−", "-").replace("·", "*")
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r} at {pos}")
            break
        tokens.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    return tokens


class _Parser:
    """Recursive-descent parser for `3/2*x^2*y - 1` style input."""

    def __init__(self, tokens: list[str], vs: VarSet):
        self.tokens = tokens
        self.pos = 0
        self.vs = vs

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.pos += 1
        return tok

    def parse(self) -> Polynomial:
        p = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing input at token {self.peek()!r}")
        return p

    def expr(self) -> Polynomial:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        p = self.term().scale(sign)
        while self.peek() in ("+", "-"):
            op = self.take()
            sign = 1 if op == "+" else -1
            while self.peek() in ("+", "-"):
                if self.take() == "-":
                    sign = -sign
            p = p + self.term().scale(sign)
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek() == "*":
            self.take()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        base = self.atom()
        while self.peek() == "^":
            self.take()
            tok = self.take()
            if not tok.isdigit():
                raise ParseError(f"exponent must be a nonnegative integer, got {tok!r}")
            base = base ** int(tok)
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        if tok == "(":
            p = self.expr()
            if self.take() != ")":
                raise ParseError("missing closing parenthesis")
            return p
        if tok.isdigit():
            num = int(tok)
            if self.peek() == "/":
                self.take()
                den = self.take()
                if not den.isdigit() or int(den) == 0:
                    raise ParseError(f"bad denominator {den!r}")
                return Polynomial.constant(self.vs, Fraction(num, int(den)))
            return Polynomial.constant(self.vs, num)
        if tok in self.vs:
            return Polynomial.variable(self.vs, tok)
        raise ParseError(f"unknown token {tok!r} (variables are {self.vs.names})")


def parse_polynomial(text: str, vs: VarSet) -> Polynomial:
    return _Parser(_tokenize(text), vs).parse()


def _fraction_to_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def poly_to_json(p: Polynomial, order: MonomialOrder = GRLEX) -> dict:
    return {
        "vars": list(p.varset.names),
        "terms": [
            {"c": _fraction_to_str(c), "e": list(e)} for e, c in p.sorted_terms(order)
        ],
    }


def poly_from_json(data: Mapping) -> Polynomial:
    vs = VarSet(tuple(data["vars"]))
    terms: dict[Exponent, Fraction] = {}
    for entry in data["terms"]:
        e = tuple(int(x) for x in entry["e"])
        if len(e) != len(vs):
            raise ParseError("exponent vector length does not match vars")
        if any(x < 0 for x in e):
            raise ParseError("negative exponent in JSON polynomial")
        c = Fraction(entry["c"])
        if c:
            terms[e] = terms.get(e, Fraction(0)) + c
    return Polynomial.from_terms(vs, terms)


def binomial(n: int, k: int) -> int:
    return math.comb(n, k)
