"""Binomials ``x^plus - x^minus`` over a positional variable set, plus text I/O."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from ..errors import ValidationError
from .orders import MonomialOrder


@dataclass(frozen=True)
class VariableSet:
    """Ordered variable names, optionally tagged with a group label each."""

    names: tuple[str, ...]
    groups: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValidationError("variable names must be unique")
        if self.groups is not None and len(self.groups) != len(self.names):
            raise ValidationError("one group tag per variable required")

    def __len__(self) -> int:
        return len(self.names)

    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.names)}

    @classmethod
    def indexed(cls, n: int, prefix: str = "x") -> "VariableSet":
        return cls(tuple(f"{prefix}{i + 1}" for i in range(n)))


@dataclass(frozen=True, slots=True)
class Binomial:
    """The binomial ``x^plus - x^minus`` with coefficients +1 and -1.

    Lattice binomials have disjoint supports; general binomial ideals (before
    saturation) may carry a common monomial factor, which is allowed here.
    """

    plus: tuple[int, ...]
    minus: tuple[int, ...]

    @classmethod
    def from_vector(cls, v: Sequence[int]) -> "Binomial":
        return cls(tuple(max(x, 0) for x in v), tuple(max(-x, 0) for x in v))

    @classmethod
    def from_terms(cls, plus: Mapping[int, int] | Sequence[int], minus, nvars: int | None = None):
        if isinstance(plus, Mapping):
            p, m = [0] * nvars, [0] * nvars
            for i, e in plus.items():
                p[i] += e
            for i, e in minus.items():
                m[i] += e
            return cls(tuple(p), tuple(m))
        return cls(tuple(plus), tuple(minus))

    @property
    def nvars(self) -> int:
        return len(self.plus)

    @property
    def degree(self) -> int:
        return max(sum(self.plus), sum(self.minus))

    def is_zero(self) -> bool:
        return self.plus == self.minus

    def is_homogeneous(self) -> bool:
        return sum(self.plus) == sum(self.minus)

    def vector(self) -> tuple[int, ...]:
        return tuple(a - b for a, b in zip(self.plus, self.minus))

    def negate(self) -> "Binomial":
        return Binomial(self.minus, self.plus)

    def cancel(self) -> "Binomial":
        """Divide out the common monomial factor of both terms."""
        g = [min(a, b) for a, b in zip(self.plus, self.minus)]
        return Binomial(tuple(a - c for a, c in zip(self.plus, g)),
                        tuple(b - c for b, c in zip(self.minus, g)))

    def oriented(self, order: MonomialOrder) -> "Binomial":
        """Same binomial up to sign with the leading term first."""
        return self if order.greater(self.plus, self.minus) else self.negate()

    def sign_key(self) -> tuple:
        """Key identifying the binomial up to sign."""
        return (self.plus, self.minus) if self.plus >= self.minus else (self.minus, self.plus)

    def to_text(self, names: Sequence[str] | None = None) -> str:
        return f"{format_monomial(self.plus, names)} - {format_monomial(self.minus, names)}"

    def __str__(self) -> str:
        return self.to_text()


def format_monomial(exps: Sequence[int], names: Sequence[str] | None = None) -> str:
    if names is None:
        names = [f"x{i + 1}" for i in range(len(exps))]
    factors = []
    for name, e in zip(names, exps):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors) if factors else "1"


_NAME = r"[A-Za-z_][A-Za-z0-9_]*(?:\[[^\]]*\])?"
_FACTOR = re.compile(rf"\s*({_NAME})\s*(?:\^\s*(\d+))?\s*")
_TERM_SPLIT = re.compile(r"([+-])")


def _parse_term(text: str, index: Mapping[str, int], nvars: int) -> tuple[int, tuple[int, ...]]:
    """Parse ``[coef*]name[^k]*name...`` into (coefficient, exponent tuple)."""
    exps = [0] * nvars
    coef = 1
    parts = [p for p in _split_factors(text)]
    if not parts:
        raise ValidationError(f"empty term in {text!r}")
    for p in parts:
        p = p.strip()
        if re.fullmatch(r"\d+", p):
            coef *= int(p)
            continue
        m = _FACTOR.fullmatch(p)
        if not m:
            raise ValidationError(f"cannot parse factor {p!r}")
        name, power = m.group(1), int(m.group(2) or 1)
        if name not in index:
            raise ValidationError(f"unknown variable {name!r}")
        exps[index[name]] += power
    return coef, tuple(exps)


def _split_factors(term: str) -> list[str]:
    # '*' inside brackets never occurs in variable names, so a plain split is safe
    out, depth, cur = [], 0, ""
    for ch in term:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "*" and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur)
    return out


def _split_terms(text: str) -> list[tuple[int, str]]:
    terms, sign, cur, depth = [], 1, "", 0
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch in "+-" and depth == 0:
            if cur.strip():
                terms.append((sign, cur))
            sign = 1 if ch == "+" else -1
            cur = ""
        else:
            cur += ch
    if cur.strip():
        terms.append((sign, cur))
    return terms


def parse_polynomial(text: str, names: Sequence[str]) -> dict[tuple[int, ...], int]:
    """Parse a polynomial with integer coefficients into ``{exponents: coefficient}``."""
    index = {v: i for i, v in enumerate(names)}
    poly: dict[tuple[int, ...], int] = {}
    for sign, term in _split_terms(text):
        term = term.strip()
        if term == "1":
            coef, exps = 1, (0,) * len(names)
        else:
            coef, exps = _parse_term(term, index, len(names))
        poly[exps] = poly.get(exps, 0) + sign * coef
    return {e: c for e, c in poly.items() if c != 0}


def parse_binomial(text: str, names: Sequence[str]) -> Binomial:
    """Parse ``"m1 - m2"`` in the text format (e.g. ``x[(1,1)]*x[(2,2)] - x[(1,2)]*x[(2,1)]``)."""
    terms = _split_terms(text)
    index = {v: i for i, v in enumerate(names)}
    parsed = []
    for sign, term in terms:
        term = term.strip()
        if term == "1":
            parsed.append((sign, 1, (0,) * len(names)))
        else:
            coef, exps = _parse_term(term, index, len(names))
            parsed.append((sign, coef, exps))
    if len(parsed) != 2 or {s * c for s, c, _ in parsed} != {1, -1}:
        raise ValidationError(f"not a difference of two monomials: {text!r}")
    plus = next(e for s, c, e in parsed if s * c == 1)
    minus = next(e for s, c, e in parsed if s * c == -1)
    return Binomial(plus, minus)


def polynomial_as_binomial(poly: Mapping[tuple[int, ...], int]) -> Binomial | None:
    """Return the binomial if ``poly`` is a difference of two monomials, else None."""
    if len(poly) != 2:
        return None
    (e1, c1), (e2, c2) = poly.items()
    if (c1, c2) == (1, -1):
        return Binomial(e1, e2)
    if (c1, c2) == (-1, 1):
        return Binomial(e2, e1)
    return None


def dedupe(gens: Iterable[Binomial]) -> list[Binomial]:
    """Drop zeros and duplicates up to sign, keeping first occurrences."""
    seen, out = set(), []
    for g in gens:
        if g.is_zero():
            continue
        k = g.sign_key()
        if k not in seen:
            seen.add(k)
            out.append(g)
    return out
