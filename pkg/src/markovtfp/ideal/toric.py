"""Saturation, toric ideals / Markov bases, minimal generators and ideal equality."""

from __future__ import annotations

import itertools
from collections import Counter
from typing import Iterable, Sequence

from ..errors import ResourceError, ValidationError
from .binomial import Binomial, dedupe
from .groebner import BinomialEngine, GroebnerBasis, buchberger
from .lattice import integer_kernel, is_saturated_lattice, lattice_basis, unit_pivot_form
from .orders import MonomialOrder, block_elimination, grevlex


def is_homogeneous(gens: Iterable[Binomial]) -> bool:
    return all(g.is_homogeneous() for g in gens)


def _nvars(gens: Sequence[Binomial], nvars: int | None) -> int:
    if nvars is not None:
        return nvars
    if not gens:
        raise ValidationError("cannot infer the number of variables from an empty generator set")
    return gens[0].nvars


def eliminate(gens: Iterable[Binomial], eliminated: Iterable[int], nvars: int | None = None,
              *, degree_limit: int | None = None) -> GroebnerBasis:
    """Groebner basis of ``I`` in a block order with ``eliminated`` dominant.

    Elements free of the eliminated variables (see :func:`elimination_part`)
    form a Groebner basis of the elimination ideal.
    """
    gens = list(gens)
    n = _nvars(gens, nvars)
    order = block_elimination(n, frozenset(eliminated))
    return buchberger(gens, order, degree_limit=degree_limit)


def elimination_part(gb: GroebnerBasis, eliminated: Iterable[int]) -> list[Binomial]:
    elim = list(eliminated)
    return [b for b in gb.elements if not any(b.plus[i] or b.minus[i] for i in elim)]


def saturate(gens: Iterable[Binomial], var: int, nvars: int | None = None) -> list[Binomial]:
    """Generators of ``I : x_var^inf``.

    Homogeneous input uses grevlex with ``x_var`` cheapest (then ``x_var``
    divides a basis element iff it divides its lead term, and stripping those
    powers gives a basis of the saturation). Otherwise ``x_var`` is inverted by
    eliminating an extra variable ``t`` from ``I + (t*x_var - 1)``.
    """
    gens = dedupe(gens)
    n = _nvars(gens, nvars)
    if not 0 <= var < n:
        raise ValidationError(f"variable index {var} out of range")
    if not gens:
        return []
    if is_homogeneous(gens):
        gb = buchberger(gens, grevlex(n, last=var), cancel_mask=1 << var)
        return list(gb.elements)
    return _saturate_by_elimination(gens, [var], n)


def _saturate_by_elimination(gens: list[Binomial], variables: Sequence[int], n: int) -> list[Binomial]:
    ext = [Binomial(g.plus + (0,), g.minus + (0,)) for g in gens]
    inv = [0] * (n + 1)
    for v in variables:
        inv[v] = 1
    inv[n] = 1
    ext.append(Binomial(tuple(inv), (0,) * (n + 1)))
    gb = eliminate(ext, [n], n + 1)
    return [Binomial(b.plus[:n], b.minus[:n]) for b in elimination_part(gb, [n])]


def saturate_all(gens: Iterable[Binomial], nvars: int | None = None) -> list[Binomial]:
    """Generators of ``I : (x_1 ... x_n)^inf``."""
    gens = dedupe(gens)
    n = _nvars(gens, nvars)
    if not gens:
        return []
    if is_homogeneous(gens):
        return _sweep(gens, n, cancel_all=False)[0]
    return _saturate_by_elimination(gens, range(n), n)


def _sweep(gens: list[Binomial], n: int, cancel_all: bool,
           variables: Sequence[int] | None = None, degree_limit: int | None = None) -> tuple[list[Binomial], bool]:
    full = (1 << n) - 1
    truncated = False
    for v in (range(n) if variables is None else variables):
        mask = full if cancel_all else 1 << v
        gb = buchberger(gens, grevlex(n, last=v), cancel_mask=mask, degree_limit=degree_limit)
        gens = list(gb.elements)
        truncated |= gb.truncated
    return gens, truncated


def is_saturated(gens: Iterable[Binomial], nvars: int | None = None) -> bool:
    """True iff ``I : x_v^inf = I`` for every variable (homogeneous ideals only).

    For each v, the reduced basis in grevlex with ``x_v`` cheapest contains an
    element divisible by ``x_v`` exactly when the saturation is strictly larger.
    """
    gens = dedupe(gens)
    n = _nvars(gens, nvars)
    if not is_homogeneous(gens):
        raise ValidationError("saturation check implemented for homogeneous ideals only")
    for v in range(n):
        gb = buchberger(gens, grevlex(n, last=v))
        if any(b.plus[v] and b.minus[v] for b in gb.elements):
            return False
    return True


def lattice_ideal_groebner(vectors: Iterable[Sequence[int]], nvars: int,
                           order: MonomialOrder | None = None, *, verify: bool = False,
                           degree_limit: int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the lattice ideal spanned by ``vectors`` (a saturated lattice).

    Starts from the lattice-basis binomials and saturates variable by variable.
    Every intermediate binomial lies in the lattice ideal, so common factors in
    any variable are cancelled as soon as they appear. When the basis can be
    brought to a form with an identity block on columns P, inverting the
    variables outside P already makes the quotient a Laurent polynomial ring,
    so only those variables need a saturation step.

    With ``degree_limit`` every Buchberger run is truncated; the result then
    generates a sub-ideal and is flagged ``truncated``.
    """
    order = order or grevlex(nvars)
    vectors = [list(v) for v in vectors]
    to_saturate: Sequence[int] = range(nvars)
    pivoted = unit_pivot_form(vectors)
    if pivoted is not None:
        vectors, pivots = pivoted
        to_saturate = [v for v in range(nvars) if v not in set(pivots)]
    gens = dedupe(Binomial.from_vector(v) for v in vectors)
    if not gens:
        return GroebnerBasis(order, [])
    full = (1 << nvars) - 1
    truncated = False
    if is_homogeneous(gens):
        gens, truncated = _sweep(gens, nvars, cancel_all=True, variables=to_saturate,
                                 degree_limit=degree_limit)
    else:
        gens = _saturate_by_elimination(gens, to_saturate, nvars)
    gb = buchberger(gens, order, cancel_mask=full, degree_limit=degree_limit)
    gb.truncated |= truncated
    if gb.truncated:
        gb.degree_limit = degree_limit
        return gb
    if verify and is_homogeneous(gb.elements) and not is_saturated(gb.elements, nvars):
        raise AssertionError("saturation sweep did not reach a fixed point")
    return gb


def toric_groebner(A, order: MonomialOrder | None = None, *, verify: bool = False,
                   max_variables: int | None = None, degree_limit: int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the toric ideal of the nonnegative integer matrix ``A``."""
    L = integer_kernel(A)
    if max_variables is not None and L.ncols > max_variables:
        raise ResourceError(f"{L.ncols} variables exceed the limit of {max_variables}")
    return lattice_ideal_groebner(L.vectors, L.ncols, order, verify=verify, degree_limit=degree_limit)


def markov_basis(A, *, verify: bool = False, max_variables: int | None = None) -> list[Binomial]:
    """Minimal binomial generating set of the toric ideal of ``A``."""
    gb = toric_groebner(A, verify=verify, max_variables=max_variables)
    basis, _ = minimalize(gb.elements, gb.order)
    return basis


def markov_basis_report(A, *, max_variables: int | None = None,
                        degree_limit: int | None = None) -> tuple[list[Binomial], bool]:
    """Like :func:`markov_basis` but optionally truncated; returns ``(basis, truncated)``.

    A truncated run only sees binomials up to ``degree_limit`` and returns
    minimal generators of a sub-ideal, so its histogram is a lower bound.
    """
    gb = toric_groebner(A, max_variables=max_variables, degree_limit=degree_limit)
    basis, _ = minimalize(gb.elements, gb.order)
    return basis, gb.truncated


def degree_histogram(gens: Iterable[Binomial]) -> dict[int, int]:
    return dict(sorted(Counter(g.degree for g in gens).items()))


def minimalize(gens: Iterable[Binomial], order: MonomialOrder | None = None,
               nvars: int | None = None) -> tuple[list[Binomial], dict[int, int]]:
    """Drop generators that lie in the ideal of the others.

    Generators are processed by increasing degree (ties broken by the order of
    their lead terms) and kept only if they are not in the ideal of those kept
    before. For homogeneous input this yields a minimal generating set, whose
    degree histogram is an invariant of the ideal.
    """
    gens = dedupe(gens)
    if not gens:
        return [], {}
    n = _nvars(gens, nvars)
    order = order or grevlex(n)
    gens = [g.oriented(order) for g in gens]
    gens.sort(key=lambda g: (g.degree, order.key(g.plus), order.key(g.minus)))
    homog = is_homogeneous(gens)
    eng = BinomialEngine(order)
    kept: list[Binomial] = []
    for d, group in itertools.groupby(gens, key=lambda g: g.degree):
        eng.complete(d if homog else None)
        for g in group:
            if eng.add(g.plus, g.minus):
                kept.append(g)
                eng.complete(d if homog else None)
    if not homog:
        kept = _prune_inhomogeneous(kept, order)
    return kept, degree_histogram(kept)


def _prune_inhomogeneous(kept: list[Binomial], order: MonomialOrder) -> list[Binomial]:
    out = list(kept)
    for g in sorted(kept, key=lambda b: -b.degree):
        rest = [h for h in out if h is not g]
        if rest and buchberger(rest, order).contains(g):
            out = rest
    return out


def reduced_basis(gens: Iterable[Binomial], order: MonomialOrder | None = None,
                  nvars: int | None = None) -> GroebnerBasis:
    gens = dedupe(gens)
    n = order.nvars if order is not None else _nvars(gens, nvars)
    return buchberger(gens, order or grevlex(n), nvars=n)


def ideal_equal(g1: Iterable[Binomial], g2: Iterable[Binomial], order: MonomialOrder | None = None,
                nvars: int | None = None) -> bool:
    """True iff both generator sets have the same reduced Groebner basis."""
    g1, g2 = dedupe(g1), dedupe(g2)
    if order is None:
        if nvars is None:
            nvars = (g1 or g2)[0].nvars if (g1 or g2) else 0
        order = grevlex(nvars)
    b1 = buchberger(g1, order)
    b2 = buchberger(g2, order)
    return b1.sorted_key() == b2.sorted_key()


def is_lattice_prime(gens: Iterable[Binomial], nvars: int | None = None) -> bool:
    """True iff the binomials generate the prime lattice ideal of their own lattice.

    That holds exactly when the spanned lattice is saturated and the ideal
    equals the full lattice ideal (no further saturation needed).
    """
    gens = dedupe(gens)
    if not gens:
        return True
    n = _nvars(gens, nvars)
    vecs = [g.vector() for g in gens]
    if not is_saturated_lattice(vecs):
        return False
    full = lattice_ideal_groebner(lattice_basis(vecs), n)
    return ideal_equal(gens, full.elements, full.order)
