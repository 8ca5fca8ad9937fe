"""Monomial orders on exponent tuples.

An order is represented by a sort key: ``a > b`` in the order iff
``key(a) > key(b)`` as Python tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import ValidationError

KINDS = ("grevlex", "lex", "block")


@dataclass(frozen=True)
class MonomialOrder:
    """Graded reverse lex, lex, or a two-block elimination order.

    ``perm`` lists variable indices from most to least significant. For
    ``block`` orders, variables in ``first_block`` dominate and grevlex is used
    inside each block.
    """

    kind: str
    nvars: int
    perm: tuple[int, ...] = ()
    first_block: frozenset = frozenset()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown monomial order kind {self.kind!r}")
        perm = tuple(self.perm) if self.perm else tuple(range(self.nvars))
        if sorted(perm) != list(range(self.nvars)):
            raise ValidationError("variable permutation must list every variable once")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "first_block", frozenset(self.first_block))
        object.__setattr__(self, "_key", self._make_key())

    def _make_key(self):
        perm = self.perm
        if self.kind == "lex":
            return lambda a: tuple(a[i] for i in perm)
        if self.kind == "grevlex":
            rev = perm[::-1]
            return lambda a: (sum(a), tuple(-a[i] for i in rev))
        b1 = [i for i in perm if i in self.first_block]
        b2 = [i for i in perm if i not in self.first_block]
        r1, r2 = b1[::-1], b2[::-1]
        return lambda a: (sum(a[i] for i in b1), tuple(-a[i] for i in r1),
                          sum(a[i] for i in b2), tuple(-a[i] for i in r2))

    def key(self, a: Sequence[int]):
        return self._key(a)

    def compare(self, a: Sequence[int], b: Sequence[int]) -> int:
        ka, kb = self._key(a), self._key(b)
        return (ka > kb) - (ka < kb)

    def greater(self, a: Sequence[int], b: Sequence[int]) -> bool:
        return self._key(a) > self._key(b)

    def packing(self, width: int = 16) -> "Packing":
        return Packing(self, width)

    def describe(self) -> str:
        if self.kind == "block":
            return f"block(first={sorted(self.first_block)}, inner=grevlex)"
        return self.kind


def grevlex(nvars: int, last: int | None = None, perm: Sequence[int] = ()) -> MonomialOrder:
    """Graded reverse lex; ``last`` moves one variable to the cheapest position."""
    if last is not None:
        perm = [i for i in range(nvars) if i != last] + [last]
    return MonomialOrder("grevlex", nvars, tuple(perm))


def lex(nvars: int, perm: Sequence[int] = ()) -> MonomialOrder:
    return MonomialOrder("lex", nvars, tuple(perm))


def block_elimination(nvars: int, first_block, perm: Sequence[int] = ()) -> MonomialOrder:
    return MonomialOrder("block", nvars, tuple(perm), frozenset(first_block))


class Packing:
    """Exponent vectors packed into one integer, ``width`` bits per variable.

    The top bit of every field is a guard bit that must stay clear; it turns
    divisibility, lcm and gcd into a handful of big-integer operations. Field
    positions follow the order so that the packed value sorts like the order:
    for grevlex the cheapest variable sits in the most significant field.
    """

    def __init__(self, order: MonomialOrder, width: int = 16):
        n = order.nvars
        self.order = order
        self.nvars = n
        self.width = w = width
        perm = order.perm
        if order.kind == "grevlex":
            pos = {v: k for k, v in enumerate(perm)}
        elif order.kind == "lex":
            pos = {v: n - 1 - k for k, v in enumerate(perm)}
        else:
            b1 = [v for v in perm if v in order.first_block]
            b2 = [v for v in perm if v not in order.first_block]
            pos = {v: k for k, v in enumerate(b2)}
            pos.update({v: len(b2) + k for k, v in enumerate(b1)})
            self.n1, self.n2 = len(b1), len(b2)
        self.shift = [pos[i] * w for i in range(n)]
        self.field = (1 << w) - 1
        self.max_exponent = (1 << (w - 1)) - 1
        self.guards = sum(1 << (k * w + w - 1) for k in range(n))
        self.fill = sum(self.max_exponent << (k * w) for k in range(n))
        self.ones = sum(1 << (k * w) for k in range(n))
        self.all = (1 << (n * w)) - 1
        self.key = self._make_key()

    def _make_key(self):
        w, n = self.width, self.nvars
        kind = self.order.kind
        if kind == "lex":
            return lambda x: x
        if kind == "grevlex":
            top = max(n - 1, 0) * w
            ones, field, nw = self.ones, self.field, n * w
            return lambda x: ((((x * ones) >> top) & field) << nw) - x
        n1, n2 = self.n1, self.n2
        ones1 = sum(1 << (k * w) for k in range(n1))
        ones2 = sum(1 << (k * w) for k in range(n2))
        field = self.field
        s2, m2 = n2 * w, (1 << (n2 * w)) - 1
        t1, t2 = max(n1 - 1, 0) * w, max(n2 - 1, 0) * w
        n1w = n1 * w

        def key(x):
            x1, x2 = x >> s2, x & m2
            return (((((x1 * ones1) >> t1) & field) << n1w) - x1,
                    ((((x2 * ones2) >> t2) & field) << s2) - x2)
        return key

    def pack(self, a) -> int:
        x = 0
        for e, s in zip(a, self.shift):
            if e:
                if e > self.max_exponent or e < 0:
                    raise OverflowError(f"exponent {e} outside the packed range")
                x |= e << s
        return x

    def unpack(self, x: int) -> tuple[int, ...]:
        f = self.field
        return tuple((x >> s) & f for s in self.shift)

    def degree(self, x: int) -> int:
        return ((x * self.ones) >> (max(self.nvars - 1, 0) * self.width)) & self.field

    def support(self, x: int) -> int:
        """Guard-bit mask of the nonzero fields."""
        return (x + self.fill) & self.guards

    def divides(self, a: int, b: int) -> bool:
        h = self.guards
        return ((b | h) - a) & h == h

    def ge_mask(self, a: int, b: int) -> int:
        """Full-field mask of the positions where ``a >= b``."""
        return ((((a | self.guards) - b) & self.guards) >> (self.width - 1)) * self.field

    def lcm(self, a: int, b: int) -> int:
        m = self.ge_mask(a, b)
        return (a & m) | (b & ~m & self.all)

    def gcd(self, a: int, b: int) -> int:
        m = self.ge_mask(a, b)
        return (b & m) | (a & ~m & self.all)

    def variable_mask(self, variables) -> int:
        return sum(self.field << self.shift[v] for v in variables)
