"""Fibers ``{t >= 0 : A t = b}``: enumeration, connectivity under moves, and a random walk."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ResourceError, ValidationError
from .ideal.binomial import Binomial

DEFAULT_FIBER_LIMIT = 10**5


def _matrix(A) -> np.ndarray:
    arr = np.asarray(getattr(A, "entries", A), dtype=np.int64)
    if arr.ndim != 2:
        raise ValidationError("model matrix must be 2-dimensional")
    if (arr < 0).any():
        raise ValidationError("model matrix must be nonnegative")
    return arr


def margins(A, table: Sequence[int]) -> tuple[int, ...]:
    A = _matrix(A)
    t = np.asarray(table, dtype=np.int64)
    if t.shape != (A.shape[1],):
        raise ValidationError(f"table needs {A.shape[1]} entries, got {t.shape}")
    if (t < 0).any():
        raise ValidationError("table entries must be nonnegative")
    return tuple(int(x) for x in A @ t)


def enumerate_fiber(A, b: Sequence[int], limit: int = DEFAULT_FIBER_LIMIT) -> list[tuple[int, ...]]:
    """All nonnegative integer ``t`` with ``A t = b`` (depth-first, lexicographic order).

    Each coordinate is bounded by the smallest margin of a row it appears in,
    and the partial sums are pruned against ``b``. Columns of ``A`` that are
    zero make the fiber infinite and are rejected.
    """
    A = _matrix(A)
    b = np.asarray(b, dtype=np.int64)
    m, n = A.shape
    if b.shape != (m,):
        raise ValidationError(f"margins need {m} entries")
    if (b < 0).any():
        return []
    if n and (A.sum(axis=0) == 0).any():
        raise ValidationError("a zero column makes every fiber infinite")
    cols = [A[:, j] for j in range(n)]
    # rows still able to change after column j; a row must be met exactly once it is closed
    last_use = [max((j for j in range(n) if A[i, j]), default=-1) for i in range(m)]
    closes = [[i for i in range(m) if last_use[i] == j] for j in range(n)]
    out: list[tuple[int, ...]] = []
    t = [0] * n
    rem = b.copy()
    if any(last_use[i] < 0 and b[i] for i in range(m)):
        return []

    def rec(j: int) -> None:
        if j == n:
            out.append(tuple(t))
            if len(out) > limit:
                raise ResourceError(f"fiber has more than {limit} elements")
            return
        col = cols[j]
        nz = col > 0
        cap = int((rem[nz] // col[nz]).min())
        for v in range(cap, -1, -1):
            t[j] = v
            if v:
                rem[:] -= v * col
            if all(rem[i] == 0 for i in closes[j]):
                rec(j + 1)
            if v:
                rem[:] += v * col
        t[j] = 0

    rec(0)
    return sorted(out)


def _move_vectors(moves: Iterable[Binomial | Sequence[int]]) -> list[tuple[int, ...]]:
    out = []
    for mv in moves:
        v = mv.vector() if isinstance(mv, Binomial) else tuple(int(x) for x in mv)
        if any(v):
            out.append(tuple(v))
    return out


def _check_moves(A: np.ndarray, vecs: list[tuple[int, ...]]) -> None:
    for v in vecs:
        if len(v) != A.shape[1]:
            raise ValidationError("move length does not match the number of columns")
        if (A @ np.asarray(v, dtype=np.int64)).any():
            raise ValidationError(f"move {v} changes the margins")


@dataclass
class Connectivity:
    connected: bool
    components: int
    size: int

    def __bool__(self) -> bool:
        return self.connected


def fiber_connected(A, b: Sequence[int], moves, limit: int = DEFAULT_FIBER_LIMIT) -> Connectivity:
    """Breadth-first search over the fiber with steps ``t -> t ± m`` that stay nonnegative."""
    A = _matrix(A)
    vecs = _move_vectors(moves)
    _check_moves(A, vecs)
    members = enumerate_fiber(A, b, limit)
    index = {t: k for k, t in enumerate(members)}
    seen = [False] * len(members)
    comps = 0
    signed = vecs + [tuple(-x for x in v) for v in vecs]
    for start in range(len(members)):
        if seen[start]:
            continue
        comps += 1
        seen[start] = True
        queue = deque([members[start]])
        while queue:
            t = queue.popleft()
            for v in signed:
                u = tuple(a + d for a, d in zip(t, v))
                if min(u) < 0:
                    continue
                k = index[u]
                if not seen[k]:
                    seen[k] = True
                    queue.append(u)
    return Connectivity(comps <= 1, comps, len(members))


def mcmc_walk(A, start: Sequence[int], moves, steps: int, seed: int | None = 0,
              thin: int = 1) -> list[tuple[int, ...]]:
    """Symmetric random walk on the fiber of ``start``.

    Each step draws a move and a sign uniformly and applies it when the table
    stays nonnegative; otherwise the chain stays put. The proposal is
    symmetric, so the stationary law is uniform on the connected component of
    ``start``. Returns every ``thin``-th state, starting with ``start``.
    """
    A = _matrix(A)
    vecs = _move_vectors(moves)
    _check_moves(A, vecs)
    if steps < 0 or thin < 1:
        raise ValidationError("steps must be >= 0 and thin >= 1")
    t = np.asarray(start, dtype=np.int64)
    if t.shape != (A.shape[1],) or (t < 0).any():
        raise ValidationError("start must be a nonnegative table of the right size")
    rng = np.random.Generator(np.random.PCG64(seed))
    out = [tuple(int(x) for x in t)]
    if not vecs:
        return out * (steps // thin + 1)
    mv = np.asarray(vecs, dtype=np.int64)
    picks = rng.integers(0, len(vecs), size=steps)
    signs = rng.integers(0, 2, size=steps) * 2 - 1
    for k in range(steps):
        u = t + signs[k] * mv[picks[k]]
        if (u >= 0).all():
            t = u
        if (k + 1) % thin == 0:
            out.append(tuple(int(x) for x in t))
    return out


def random_table(rng: np.random.Generator, ncols: int, total: int) -> tuple[int, ...]:
    """A uniformly random table of the given sample size (multinomial with equal cell weights)."""
    return tuple(int(x) for x in rng.multinomial(total, [1 / ncols] * ncols))
