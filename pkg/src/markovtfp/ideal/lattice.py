"""Integer kernels of integer matrices via exact row-style Hermite reduction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ValidationError


@dataclass(frozen=True)
class LatticeBasis:
    vectors: tuple[tuple[int, ...], ...]
    ncols: int

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


def _as_int_rows(A) -> list[list[int]]:
    if hasattr(A, "entries"):
        A = A.entries
    arr = np.asarray(A)
    if arr.ndim != 2:
        raise ValidationError("expected a 2-d integer matrix")
    if arr.dtype.kind not in "iu" and not np.all(np.equal(np.mod(arr, 1), 0)):
        raise ValidationError("matrix entries must be integers")
    return [[int(x) for x in row] for row in arr.tolist()]


def hermite_transform(A) -> tuple[list[list[int]], list[list[int]], int]:
    """Row-reduce ``A^T`` by unimodular integer row operations.

    Returns ``(H, U, rank)`` with ``U @ A^T = H`` and ``H`` in row echelon
    form; rows ``rank..`` of ``H`` vanish, so the matching rows of ``U`` span
    the integer kernel of ``A``.
    """
    rows = _as_int_rows(A)
    m = len(rows)
    n = len(rows[0]) if m else 0
    work = [[rows[i][j] for i in range(m)] + [int(k == j) for k in range(n)] for j in range(n)]
    r = _echelon(work, range(m))
    H = [row[:m] for row in work]
    U = [row[m:] for row in work]
    return H, U, r


def _echelon(work: list[list[int]], columns) -> int:
    """In-place integer row echelon form on the given columns; returns the rank."""
    n = len(work)
    r = 0
    for c in columns:
        if r == n:
            break
        while True:
            nz = [k for k in range(r, n) if work[k][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda k: (abs(work[k][c]), k))
            work[r], work[piv] = work[piv], work[r]
            prow = work[r]
            clean = True
            for k in range(r + 1, n):
                if work[k][c]:
                    q = work[k][c] // prow[c]
                    work[k] = [x - q * y for x, y in zip(work[k], prow)]
                    if work[k][c]:
                        clean = False
            if clean:
                if prow[c] < 0:
                    work[r] = [-x for x in prow]
                r += 1
                break
    return r


def coordinate_section(vectors: Sequence[Sequence[int]], eliminated: Sequence[int],
                       reduce: bool = True) -> list[list[int]]:
    """Basis of ``L ∩ {v : v_i = 0 for i in eliminated}`` where ``L`` is spanned by ``vectors``.

    Row echelon form with the eliminated coordinates first: rows past the
    rank of that block vanish there and span the intersection.
    """
    work = [list(v) for v in vectors if any(v)]
    if not work:
        return []
    r = _echelon(work, list(eliminated))
    drop = set(eliminated)
    keep = [j for j in range(len(work[0])) if j not in drop]
    rest = [[row[j] for j in keep] for row in work[r:]]
    # the remaining rows may be dependent; a second pass yields a basis
    k = _echelon(rest, range(len(keep)))
    basis = rest[:k]
    if reduce and basis:
        basis = _lll(basis)
    return [_normalise_sign(v) for v in basis]


def _lll(vectors: list[list[int]]) -> list[list[int]]:
    from sympy.polys.domains import ZZ
    from sympy.polys.matrices import DomainMatrix

    dm = DomainMatrix([[ZZ(x) for x in v] for v in vectors], (len(vectors), len(vectors[0])), ZZ)
    return [[int(x) for x in row] for row in dm.lll().to_list()]


def integer_kernel(A, reduce: bool = True) -> LatticeBasis:
    """Basis of ``{v in Z^n : A v = 0}``; LLL-reduced when ``reduce`` is set."""
    rows = _as_int_rows(A)
    n = len(rows[0]) if rows else np.asarray(getattr(A, "entries", A)).shape[1]
    if not rows:
        return LatticeBasis(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)
    _, U, rank = hermite_transform(rows)
    basis = [list(u) for u in U[rank:]]
    if reduce and basis:
        basis = _lll(basis)
    basis = [_normalise_sign(v) for v in basis]
    for v in basis:
        if any(sum(a * x for a, x in zip(row, v)) for row in rows):
            raise AssertionError("kernel vector check failed")
    return LatticeBasis(tuple(tuple(v) for v in basis), n)


def _normalise_sign(v: Sequence[int]) -> list[int]:
    for x in v:
        if x:
            return list(v) if x > 0 else [-y for y in v]
    return list(v)


def unit_pivot_form(vectors: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]] | None:
    """Unimodular row operations that put an identity block into the basis.

    Repeatedly picks an entry equal to +-1 (preferring sparse columns), scales
    its row to +1 and clears the column in every other row. Returns the new
    rows and the pivot columns, or None when some step finds no unit entry.
    """
    rows = [list(v) for v in vectors]
    if not rows:
        return [], []
    n = len(rows[0])
    done: list[int] = []
    pivots: list[int] = []
    for _ in range(len(rows)):
        best = None
        for i, row in enumerate(rows):
            if i in done:
                continue
            for c, x in enumerate(row):
                if x in (1, -1):
                    cost = sum(1 for r in rows if r[c])
                    if best is None or cost < best[0]:
                        best = (cost, i, c)
        if best is None:
            return None
        _, i, c = best
        if rows[i][c] < 0:
            rows[i] = [-x for x in rows[i]]
        for k, row in enumerate(rows):
            if k != i and row[c]:
                f = row[c]
                rows[k] = [a - f * b for a, b in zip(row, rows[i])]
        done.append(i)
        pivots.append(c)
    assert all(sum(1 for r in rows if r[c]) == 1 for c in pivots) and len(set(pivots)) == len(pivots) <= n
    return rows, pivots


def lattice_basis(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Echelon basis of the lattice spanned by ``vectors`` (zero vectors dropped)."""
    work = [list(v) for v in vectors if any(v)]
    if not work:
        return []
    r = _echelon(work, range(len(work[0])))
    return work[:r]


def in_lattice(v: Sequence[int], echelon_basis: Sequence[Sequence[int]]) -> bool:
    """Membership test against a basis in row echelon form (see :func:`lattice_basis`)."""
    v = list(v)
    for row in echelon_basis:
        c = next(j for j, x in enumerate(row) if x)
        if v[c] % row[c]:
            return False
        q = v[c] // row[c]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def is_saturated_lattice(vectors: Sequence[Sequence[int]]) -> bool:
    """True iff ``L = (L ⊗ Q) ∩ Z^n`` for the lattice spanned by ``vectors``."""
    basis = lattice_basis(vectors)
    if not basis:
        return True
    ortho = integer_kernel(basis, reduce=False)
    n = len(basis[0])
    if ortho.vectors:
        sat = integer_kernel([list(v) for v in ortho.vectors], reduce=False).vectors
    else:
        sat = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return all(in_lattice(s, basis) for s in sat)
