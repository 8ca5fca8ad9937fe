"""Independent reference computations used to freeze expected values.

Nothing here calls the Groebner engine or the lattice code of the package.
"""

from __future__ import annotations

import itertools
from collections import defaultdict

import numpy as np
import sympy
from sympy.matrices.normalforms import smith_normal_form


def brute_force_maximal_cliques(nodes, edges):
    adj = {v: set() for v in nodes}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    cliques = []
    for k in range(1, len(nodes) + 1):
        for sub in itertools.combinations(nodes, k):
            if all(b in adj[a] for a, b in itertools.combinations(sub, 2)):
                cliques.append(frozenset(sub))
    return {c for c in cliques if not any(c < d for d in cliques)}


def direct_model_matrix(dims, cliques):
    """Rows (clique, local config) in the given clique order; columns last-node-fastest."""
    configs = list(itertools.product(*[range(1, d + 1) for d in dims]))
    rows = []
    for c in cliques:
        for local in itertools.product(*[range(1, dims[j] + 1) for j in c]):
            rows.append((tuple(c), local))
    A = np.zeros((len(rows), len(configs)), dtype=np.int64)
    for i, (c, local) in enumerate(rows):
        for j, beta in enumerate(configs):
            if tuple(beta[v] for v in c) == local:
                A[i, j] = 1
    return A


def kernel_rank(A) -> int:
    M = sympy.Matrix(np.asarray(A).tolist())
    return M.cols - M.rank()


def spans_integer_kernel(A, vectors) -> bool:
    """True iff the vectors form a basis of ker_Z(A).

    They must lie in the kernel, have full rank count, and generate a
    saturated lattice (all Smith invariants equal to one).
    """
    A = np.asarray(A, dtype=object)
    if any(any(x != 0 for x in A.dot(np.asarray(v, dtype=object))) for v in vectors):
        return False
    if len(vectors) != kernel_rank(A):
        return False
    if not vectors:
        return True
    M = sympy.Matrix([list(v) for v in vectors])
    if M.rank() != len(vectors):
        return False
    snf = smith_normal_form(M, domain=sympy.ZZ)
    return all(abs(snf[i, i]) == 1 for i in range(len(vectors)))


def _monomials(n: int, d: int) -> np.ndarray:
    out = np.zeros((sum(1 for _ in itertools.combinations_with_replacement(range(n), d)), n),
                   dtype=np.int16)
    for row, combo in enumerate(itertools.combinations_with_replacement(range(n), d)):
        for i in combo:
            out[row, i] += 1
    return out


def minimal_generator_degrees(A, max_degree: int) -> dict[int, int]:
    """Degree histogram of a minimal generating set of the toric ideal of A, up to max_degree.

    In degree d the count equals the sum over fibers of (components - 1),
    where components are taken in the graph whose edges are moves of
    strictly lower degree. Requires constant column sums (homogeneous ideal).
    """
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    moves: list[np.ndarray] = []
    hist: dict[int, int] = {}
    for d in range(1, max_degree + 1):
        U = _monomials(n, d)
        index = {row.tobytes(): k for k, row in enumerate(U)}
        parent = list(range(len(U)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for v in moves:
            for mv in (v, -v):
                need = np.maximum(-mv, 0)
                for k in np.nonzero((U >= need).all(axis=1))[0]:
                    t = (U[k] + mv).astype(np.int16)
                    a, b = find(int(k)), find(index[t.tobytes()])
                    if a != b:
                        parent[a] = b
        fibers: dict[bytes, dict[int, int]] = defaultdict(dict)
        margins = U.astype(np.int64) @ A.T
        for k in range(len(U)):
            root = find(k)
            fibers[margins[k].tobytes()].setdefault(root, k)
        new = 0
        for reps in fibers.values():
            reps = list(reps.values())
            for r in reps[1:]:
                moves.append(U[reps[0]].astype(np.int64) - U[r].astype(np.int64))
                new += 1
        if new:
            hist[d] = new
    return hist


def segre_matrix(n: int, s: int) -> np.ndarray:
    """Rows (position j, letter a); column of word w has a one where w_j = a."""
    words = list(itertools.product(range(n), repeat=s))
    A = np.zeros((n * s, len(words)), dtype=np.int64)
    for c, w in enumerate(words):
        for j, a in enumerate(w):
            A[j * n + a, c] = 1
    return A
