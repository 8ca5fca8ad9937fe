"""Buchberger's algorithm specialised to pure-difference binomial ideals.

S-polynomials and reductions of binomials ``x^a - x^b`` stay binomials, so the
whole computation is exponent-vector arithmetic with implicit coefficients
+1/-1. Pair selection uses the normal strategy (smallest lcm degree first) and
the Gebauer-Moeller criteria.
"""

from __future__ import annotations

import contextlib
import contextvars
import heapq
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..errors import ResourceError, ValidationError
from .binomial import Binomial
from .orders import MonomialOrder, grevlex

_DEADLINE: contextvars.ContextVar[float | None] = contextvars.ContextVar("deadline", default=None)


@contextlib.contextmanager
def time_budget(seconds: float | None):
    """Abort Groebner computations with ResourceError once ``seconds`` elapse."""
    if seconds is None:
        yield
        return
    token = _DEADLINE.set(time.monotonic() + seconds)
    try:
        yield
    finally:
        _DEADLINE.reset(token)


def _divides(a: Sequence[int], b: Sequence[int]) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


class BinomialEngine:
    """Incremental Groebner basis state over packed exponent vectors.

    ``cancel_mask`` (bit i = variable i) selects variables whose common powers
    may be divided out of new elements. That computes a basis of a larger
    ideal ``J`` with ``I <= J <= I : (prod of those variables)^inf`` and is only
    valid when the caller wants (a superset inside) that saturation.

    ``weights`` only changes the pair selection: S-pairs are processed by
    weighted lcm degree, which pays off when the input is homogeneous for
    those weights but not for the standard grading.
    """

    def __init__(self, order: MonomialOrder, cancel_mask: int = 0, width: int = 16,
                 weights: Sequence[int] | None = None):
        self.order = order
        self.nvars = order.nvars
        self.pk = pk = order.packing(width)
        self.pkey = pk.key
        self.cancel_fields = pk.variable_mask(i for i in range(self.nvars) if cancel_mask >> i & 1)
        self.leads: list[int] = []
        self.tails: list[int] = []
        self.sups: list[int] = []
        self.alive: list[int] = []
        self._buckets: dict[int, list[int]] = {}
        self._pairs: dict[int, tuple[int, int, int]] = {}
        self._heap: list = []
        self._pair_seq = 0
        self.steps = 0
        self._deadline = _DEADLINE.get()
        self._weights = None
        if weights is not None:
            if len(weights) != self.nvars or any(int(x) < 1 for x in weights):
                raise ValidationError("weights must be positive, one per variable")
            shift, field = self.pk.shift, self.pk.field
            ws = [(int(x), shift[i]) for i, x in enumerate(weights)]
            self._weights = lambda t: sum(x * ((t >> s) & field) for x, s in ws)

    # -- reduction -------------------------------------------------------
    def _reduce(self, t: int) -> int:
        pk = self.pk
        guards, fill = pk.guards, pk.fill
        leads, tails, buckets = self.leads, self.tails, self._buckets
        while True:
            m = (t + fill) & guards
            best = -1
            tg = t | guards
            while m:
                b = m & -m
                m ^= b
                lst = buckets.get(b)
                if lst:
                    for idx in lst:
                        if best >= 0 and idx >= best:
                            break
                        if (tg - leads[idx]) & guards == guards:
                            best = idx
                            break
            if best < 0:
                return t
            t = t - leads[best] + tails[best]
            if t & guards:
                raise ResourceError("exponent overflow during reduction")

    def reduce_monomial(self, t: Sequence[int]) -> tuple[int, ...]:
        return self.pk.unpack(self._reduce(self.pk.pack(t)))

    def _cancel(self, a: int, b: int) -> tuple[int, int]:
        if self.cancel_fields:
            g = self.pk.gcd(a, b) & self.cancel_fields
            if g:
                return a - g, b - g
        return a, b

    def _normal_form(self, a: int, b: int):
        a = self._reduce(a)
        b = self._reduce(b)
        # divisors of standard monomials are standard, so cancelling keeps both reduced
        a, b = self._cancel(a, b)
        if a == b:
            return None
        key = self.pkey
        return (a, b) if key(a) > key(b) else (b, a)

    def normal_form(self, plus, minus):
        """Oriented normal form ``(lead, tail)`` of ``x^plus - x^minus``, or None if zero."""
        nf = self._normal_form(self.pk.pack(plus), self.pk.pack(minus))
        if nf is None:
            return None
        return self.pk.unpack(nf[0]), self.pk.unpack(nf[1])

    # -- basis maintenance -----------------------------------------------
    def add(self, plus, minus) -> bool:
        """Reduce and insert a generator; returns False if it reduced to zero."""
        return self._add(self.pk.pack(plus), self.pk.pack(minus))

    def _add(self, a: int, b: int) -> bool:
        nf = self._normal_form(a, b)
        if nf is None:
            return False
        self._insert(*nf)
        return True

    def _attach(self, lead: int, tail: int) -> int:
        h = len(self.leads)
        self.leads.append(lead)
        self.tails.append(tail)
        sup = self.pk.support(lead)
        self.sups.append(sup)
        self.alive.append(h)
        if sup:
            self._buckets.setdefault(sup & -sup, []).append(h)
        return h

    def _detach(self, g: int) -> None:
        sup = self.sups[g]
        if sup:
            self._buckets[sup & -sup].remove(g)

    def _dominated(self, q: int, qset: dict) -> bool:
        pk = self.pk
        w, field = pk.width, pk.field
        m = pk.support(q)
        parts = []
        count = 1
        while m:
            b = m & -m
            m ^= b
            s = b.bit_length() - w
            e = (q >> s) & field
            parts.append((s, e))
            count *= e + 1
        if count > 512:
            return any(q2 != q and pk.divides(q2, q) for q2 in qset)
        subs = [0]
        for s, e in parts:
            subs = [x + (k << s) for x in subs for k in range(e + 1)]
        return any(x != q and x in qset for x in subs)

    def _insert(self, lead: int, tail: int) -> None:
        pk = self.pk
        guards = pk.guards
        leads = self.leads
        sup = pk.support(lead)

        # Gebauer-Moeller: new pairs (g, h) keyed by q = lcm(lead_g, lead_h) - lead_h
        qset: dict[int, list] = {}
        for g in self.alive:
            lg = leads[g]
            q = lg - pk.gcd(lg, lead)
            coprime = not (self.sups[g] & sup)
            entry = qset.get(q)
            if entry is None:
                qset[q] = [coprime, g]
            elif coprime:
                entry[0] = True
        # old pairs whose lcm is properly covered through the new element
        for pid, (i, j, lcm) in list(self._pairs.items()):
            if ((lcm | guards) - lead) & guards != guards:
                continue
            if pk.lcm(leads[i], lead) != lcm and pk.lcm(leads[j], lead) != lcm:
                del self._pairs[pid]
        h = len(leads)
        for q, (coprime, g) in qset.items():
            if coprime or self._dominated(q, qset):
                continue
            lcm = lead + q
            if lcm & guards:
                raise ResourceError("exponent overflow in S-pair")
            pid = self._pair_seq
            self._pair_seq += 1
            self._pairs[pid] = (g, h, lcm)
            deg = self._weights(lcm) if self._weights else pk.degree(lcm)
            heapq.heappush(self._heap, (deg, self.pkey(lcm), pid))
        survivors = []
        for g in self.alive:
            if ((leads[g] | guards) - lead) & guards == guards:
                self._detach(g)
            else:
                survivors.append(g)
        self.alive = survivors
        self._attach(lead, tail)

    def _check_deadline(self) -> None:
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise ResourceError("time limit exceeded during Groebner basis computation")

    def complete(self, degree_limit: int | None = None) -> bool:
        """Process S-pairs (those with lcm degree <= ``degree_limit``). Returns True if truncated.

        With ``weights`` set, the limit applies to the weighted degree.
        """
        heap, pairs = self._heap, self._pairs
        leads, tails = self.leads, self.tails
        while heap:
            deg, _, pid = heap[0]
            if pid not in pairs:
                heapq.heappop(heap)
                continue
            if degree_limit is not None and deg > degree_limit:
                return True
            heapq.heappop(heap)
            i, j, lcm = pairs.pop(pid)
            self.steps += 1
            if self.steps & 63 == 0:
                self._check_deadline()
            s1 = lcm - leads[i] + tails[i]
            s2 = lcm - leads[j] + tails[j]
            if (s1 | s2) & self.pk.guards:
                raise ResourceError("exponent overflow in S-polynomial")
            self._add(s1, s2)
        return False

    def pending_pairs(self) -> int:
        return len(self._pairs)

    # -- output ----------------------------------------------------------
    def reduced(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """Interreduce the live basis; re-completes if cancellation changed anything."""
        while True:
            changed = []
            out = []
            for g in list(self.alive):
                # a lead term never divides its own (smaller) tail
                lead, tail = self.leads[g], self._reduce(self.tails[g])
                cl, ct = self._cancel(lead, tail)
                if cl != lead:
                    changed.append((cl, ct))
                else:
                    out.append((g, tail))
            if not changed:
                for g, tail in out:
                    self.tails[g] = tail
                key = self.pkey
                ordered = sorted((self.leads[g] for g, _ in out), key=key, reverse=True)
                tails = {self.leads[g]: t for g, t in out}
                unpack = self.pk.unpack
                return [(unpack(l), unpack(tails[l])) for l in ordered]
            for lead, tail in changed:
                self._add(lead, tail)
            self.complete()


@dataclass
class GroebnerBasis:
    """Reduced Groebner basis; every element's leading term is ``plus``."""

    order: MonomialOrder
    elements: list[Binomial] = field(default_factory=list)
    truncated: bool = False
    degree_limit: int | None = None

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def leading_terms(self) -> list[tuple[int, ...]]:
        return [b.plus for b in self.elements]

    def engine(self) -> BinomialEngine:
        """Engine preloaded with the basis (no pending pairs), usable for reduction."""
        eng = BinomialEngine(self.order)
        pack = eng.pk.pack
        for b in self.elements:
            eng._attach(pack(b.plus), pack(b.minus))
        return eng

    def reduce_monomial(self, t: Sequence[int]) -> tuple[int, ...]:
        return self.engine().reduce_monomial(tuple(t))

    def contains(self, b: Binomial) -> bool:
        return normal_form(b, self).is_zero()

    def sorted_key(self) -> frozenset:
        return frozenset((b.plus, b.minus) for b in self.elements)


def _check_gens(gens: Sequence[Binomial], nvars: int) -> None:
    for g in gens:
        if len(g.plus) != nvars or len(g.minus) != nvars:
            raise ValidationError(f"generator {g} does not live in a {nvars}-variable ring")


def buchberger(gens: Iterable[Binomial], order: MonomialOrder | None = None, *,
               nvars: int | None = None, degree_limit: int | None = None,
               cancel_mask: int = 0, weights: Sequence[int] | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    ``degree_limit`` truncates the computation (S-pairs of higher lcm degree are
    skipped); the result is then flagged ``truncated``. ``weights`` sets the
    grading used to schedule S-pairs.
    """
    gens = list(gens)
    if order is None:
        if nvars is None:
            if not gens:
                raise ValidationError("need nvars or an order for an empty generator set")
            nvars = gens[0].nvars
        order = grevlex(nvars)
    _check_gens(gens, order.nvars)
    eng = BinomialEngine(order, cancel_mask, weights=weights)
    if weights is None:
        wdeg = lambda b: b.degree  # noqa: E731
    else:
        wdeg = lambda b: max(sum(w * e for w, e in zip(weights, b.plus)),  # noqa: E731
                             sum(w * e for w, e in zip(weights, b.minus)))
    for g in sorted(gens, key=lambda b: (wdeg(b), order.key(b.oriented(order).plus))):
        eng.add(g.plus, g.minus)
    truncated = eng.complete(degree_limit)
    elems = [Binomial(a, b) for a, b in eng.reduced()]
    return GroebnerBasis(order, elems, truncated, degree_limit)


def normal_form(b: Binomial | Sequence[int], gb: GroebnerBasis):
    """Remainder of a binomial (returned as a possibly-zero Binomial) or of a monomial."""
    eng = gb.engine()
    if isinstance(b, Binomial):
        return Binomial(eng.reduce_monomial(tuple(b.plus)), eng.reduce_monomial(tuple(b.minus)))
    return eng.reduce_monomial(tuple(b))


def s_polynomial(f: Binomial, g: Binomial) -> Binomial:
    lcm = _lcm(f.plus, g.plus)
    return Binomial(tuple(m - x + y for m, x, y in zip(lcm, f.plus, f.minus)),
                    tuple(m - x + y for m, x, y in zip(lcm, g.plus, g.minus)))


def is_groebner(gb: GroebnerBasis) -> bool:
    """Check that every S-polynomial reduces to zero (exhaustive)."""
    elems = gb.elements
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            if not normal_form(s_polynomial(elems[i], elems[j]), gb).is_zero():
                return False
    return True


def is_reduced(gb: GroebnerBasis) -> bool:
    leads = gb.leading_terms()
    for k, b in enumerate(gb.elements):
        if not gb.order.greater(b.plus, b.minus):
            return False
        for k2, lead in enumerate(leads):
            if k2 != k and (_divides(lead, b.plus) or _divides(lead, b.minus)):
                return False
        if _divides(b.plus, b.minus):
            return False
    return True
