"""Matrices with constant column sums, pull-backs along finite maps, and division.

``M_n(S)`` is the monoid (under addition) of nonnegative integer
``n x |S|`` matrices whose columns all have the same sum. A map
``pi: S -> T`` pulls ``alpha`` over ``T`` back to the matrix over ``S`` whose
column ``j`` is column ``pi(j)`` of ``alpha``. The polynomial ring ``A_n(S)``
has one variable ``x_a`` per word ``a in [n]^S``; states are 1-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterator, Mapping, Sequence

import numpy as np

from .errors import ResourceError, ValidationError
from .ideal.binomial import Binomial, dedupe
from .ideal.orders import MonomialOrder, lex
from .ideal.toric import ideal_equal

DEFAULT_DIVIDES_LIMIT = 10


@dataclass(frozen=True)
class OrderedFiniteSet:
    labels: tuple[Hashable, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(set(labels)) != len(labels):
            raise ValidationError("ordered set labels must be distinct")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def range(cls, k: int) -> "OrderedFiniteSet":
        """The ordered set ``[k] = {1 < ... < k}``."""
        return cls(tuple(range(1, k + 1)))

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def index(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValidationError(f"{label!r} is not an element of the set") from None


def _as_set(s) -> OrderedFiniteSet:
    if isinstance(s, OrderedFiniteSet):
        return s
    if isinstance(s, int):
        return OrderedFiniteSet.range(s)
    return OrderedFiniteSet(tuple(s))


@dataclass(frozen=True)
class FinMap:
    """A map of finite sets, stored as the image of each source element in order."""

    source: OrderedFiniteSet
    target: OrderedFiniteSet
    values: tuple

    def __post_init__(self):
        values = tuple(self.values)
        if len(values) != len(self.source):
            raise ValidationError("a map needs one value per source element")
        allowed = set(self.target.labels)
        bad = [v for v in values if v not in allowed]
        if bad:
            raise ValidationError(f"values {bad} are not in the target set")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_sequence(cls, values: Sequence[int], target_size: int | None = None) -> "FinMap":
        """Map ``[len(values)] -> [target_size]`` with 1-based ``values``."""
        values = tuple(int(v) for v in values)
        t = target_size if target_size is not None else max(values, default=0)
        return cls(OrderedFiniteSet.range(len(values)), OrderedFiniteSet.range(t), values)

    @classmethod
    def identity(cls, s) -> "FinMap":
        s = _as_set(s)
        return cls(s, s, s.labels)

    def __call__(self, x):
        return self.values[self.source.index(x)]

    def positions(self) -> tuple[int, ...]:
        """0-based target position of each source element."""
        idx = {v: k for k, v in enumerate(self.target.labels)}
        return tuple(idx[v] for v in self.values)

    def compose(self, inner: "FinMap") -> "FinMap":
        """``self ∘ inner`` (apply ``inner`` first)."""
        if inner.target != self.source:
            raise ValidationError("maps are not composable")
        return FinMap(inner.source, self.target, tuple(self(v) for v in inner.values))

    def is_surjective(self) -> bool:
        return set(self.values) == set(self.target.labels)


def is_os_morphism(pi: FinMap) -> bool:
    """Surjective, with ``j -> min pi^{-1}(j)`` strictly increasing on the target."""
    if not pi.is_surjective():
        return False
    first: dict = {}
    for k, v in enumerate(pi.values):
        first.setdefault(v, k)
    mins = [first[t] for t in pi.target.labels]
    return all(a < b for a, b in zip(mins, mins[1:]))


def os_morphisms(s: int, t: int) -> Iterator[tuple[int, ...]]:
    """All OS-morphisms ``[s] -> [t]`` as 0-based value tuples.

    These are the restricted growth strings: each value is at most one more
    than the largest value so far, and every target value occurs.
    """
    if t > s or (t == 0) != (s == 0):
        return
    vals = [0] * s

    def rec(k: int, top: int) -> Iterator[tuple[int, ...]]:
        if k == s:
            if top == t - 1:
                yield tuple(vals)
            return
        if t - 1 - top > s - k:
            return
        for v in range(min(top + 2, t)):
            vals[k] = v
            yield from rec(k + 1, max(top, v))

    if s == 0:
        yield ()
        return
    vals[0] = 0
    yield from rec(1, 0)


@dataclass(frozen=True)
class ColumnSumMatrix:
    """An element of ``M_n(S)``: ``columns[j]`` is the length-``n`` column for label ``j``."""

    n: int
    cols: OrderedFiniteSet
    columns: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        cols = _as_set(self.cols)
        columns = tuple(tuple(int(x) for x in c) for c in self.columns)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "columns", columns)
        if self.n < 0:
            raise ValidationError("row count must be nonnegative")
        if len(columns) != len(cols):
            raise ValidationError(f"{len(columns)} columns for {len(cols)} labels")
        for c in columns:
            if len(c) != self.n:
                raise ValidationError(f"column {c} does not have {self.n} entries")
            if any(x < 0 for x in c):
                raise ValidationError(f"column {c} has a negative entry")
        if len({sum(c) for c in columns}) > 1:
            raise ValidationError(f"column sums differ: {[sum(c) for c in columns]}")

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], cols=None) -> "ColumnSumMatrix":
        columns = [tuple(c) for c in columns]
        n = len(columns[0]) if columns else 0
        return cls(n, _as_set(cols if cols is not None else len(columns)), tuple(columns))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols=None) -> "ColumnSumMatrix":
        rows = [list(r) for r in rows]
        m = len(rows[0]) if rows else 0
        return cls(len(rows), _as_set(cols if cols is not None else m),
                   tuple(tuple(r[j] for r in rows) for j in range(m)))

    @classmethod
    def zero(cls, n: int, cols) -> "ColumnSumMatrix":
        cols = _as_set(cols)
        return cls(n, cols, tuple((0,) * n for _ in cols))

    @property
    def column_sum(self) -> int:
        return sum(self.columns[0]) if self.columns else 0

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(c[i] for c in self.columns) for i in range(self.n))

    def to_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(self.n, len(self.cols))

    def __add__(self, other: "ColumnSumMatrix") -> "ColumnSumMatrix":
        self._check_shape(other)
        return ColumnSumMatrix(self.n, self.cols, tuple(
            tuple(a + b for a, b in zip(c1, c2)) for c1, c2 in zip(self.columns, other.columns)))

    def __sub__(self, other: "ColumnSumMatrix") -> "ColumnSumMatrix":
        self._check_shape(other)
        return ColumnSumMatrix(self.n, self.cols, tuple(
            tuple(a - b for a, b in zip(c1, c2)) for c1, c2 in zip(self.columns, other.columns)))

    def _check_shape(self, other: "ColumnSumMatrix") -> None:
        if self.n != other.n or self.cols != other.cols:
            raise ValidationError("matrices live over different shapes")

    def to_json(self) -> list[list[int]]:
        return [list(c) for c in self.columns]

    @classmethod
    def from_json(cls, data) -> "ColumnSumMatrix":
        """Accept a list of columns or ``{"columns": [...], "labels": [...]}``."""
        if isinstance(data, Mapping):
            return cls.from_columns(data["columns"], data.get("labels"))
        if not isinstance(data, list) or not all(isinstance(c, list) for c in data):
            raise ValidationError("a matrix is a JSON array of columns")
        return cls.from_columns(data)

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.rows)


def pullback(pi: FinMap, alpha: ColumnSumMatrix) -> ColumnSumMatrix:
    """Column ``j`` of the result is column ``pi(j)`` of ``alpha``."""
    if alpha.cols != pi.target:
        raise ValidationError("matrix columns do not match the map's target")
    pos = pi.positions()
    return ColumnSumMatrix(alpha.n, pi.source, tuple(alpha.columns[p] for p in pos))


# -- the order on M_n(S) -------------------------------------------------

def compare(alpha: ColumnSumMatrix, beta: ColumnSumMatrix, base: MonomialOrder | None = None) -> int:
    """Sign of ``alpha - beta`` in the column-wise order.

    The first column (in the set's order) where the two differ decides, using
    the monomial order ``base`` on ``Z^n`` (lex with row 1 dominant by default).
    """
    alpha._check_shape(beta)
    base = base or lex(alpha.n)
    for a, b in zip(alpha.columns, beta.columns):
        if a != b:
            return base.compare(a, b)
    return 0


# -- division --------------------------------------------------------------

@dataclass(frozen=True)
class DivisionWitness:
    pi: FinMap
    gamma: ColumnSumMatrix


def divides(alpha: ColumnSumMatrix, beta: ColumnSumMatrix, *,
            limit: int = DEFAULT_DIVIDES_LIMIT) -> DivisionWitness | None:
    """Find an OS-morphism ``pi: S -> T`` and ``gamma`` with ``beta = gamma + pi^* alpha``.

    ``alpha`` lives over ``T``, ``beta`` over ``S``. Values are assigned to
    ``S`` in order as a restricted growth string, pruning as soon as a column
    of ``beta - pi^* alpha`` turns negative.
    """
    if alpha.n != beta.n:
        return None
    s, t = len(beta.cols), len(alpha.cols)
    if s > limit or t > limit:
        raise ResourceError(f"division search limited to sets of size {limit}")
    if t > s or (t == 0) != (s == 0) or alpha.column_sum > beta.column_sum:
        return None
    # fits[k][v]: column k of beta dominates column v of alpha
    fits = [[all(b >= a for a, b in zip(ac, bc)) for ac in alpha.columns] for bc in beta.columns]
    vals = [0] * s

    def rec(k: int, top: int) -> bool:
        if k == s:
            return top == t - 1
        if t - 1 - top > s - k:
            return False
        for v in range(min(top + 2, t)):
            if fits[k][v]:
                vals[k] = v
                if rec(k + 1, max(top, v)):
                    return True
        return False

    if s and not (fits[0][0] and rec(1, 0)):
        return None
    pi = FinMap(beta.cols, alpha.cols, tuple(alpha.cols.labels[v] for v in vals))
    gamma = beta - pullback(pi, alpha)
    assert gamma.column_sum == beta.column_sum - alpha.column_sum
    return DivisionWitness(pi, gamma)


def wqo_search(seq: Sequence[ColumnSumMatrix], *,
               limit: int = DEFAULT_DIVIDES_LIMIT) -> tuple[int, int, DivisionWitness] | None:
    """First ``(i, j)`` (1-based, ``i < j``, scanning ``j`` then ``i``) with ``seq[i] | seq[j]``."""
    for j in range(1, len(seq)):
        for i in range(j):
            w = divides(seq[i], seq[j], limit=limit)
            if w is not None:
                return i + 1, j + 1, w
    return None


# -- the polynomial ring A_n(S) and the rank-one ideal -----------------------

def words(n: int, s: int) -> list[tuple[int, ...]]:
    """Variable labels of ``A_n([s])``: all words in ``[n]^s``, last letter fastest."""
    return list(itertools.product(range(1, n + 1), repeat=s))


def word_index(word: Sequence[int], n: int) -> int:
    idx = 0
    for a in word:
        idx = idx * n + (a - 1)
    return idx


def variable_names(n: int, s: int) -> list[str]:
    return [f"x[{''.join(map(str, w))}]" if n < 10 else f"x[{','.join(map(str, w))}]"
            for w in words(n, s)]


def variable_pullback(pi: FinMap, word: Sequence[int]) -> tuple[int, ...]:
    """``x_a -> x_{a ∘ pi}`` for a word ``a`` on the target of ``pi``."""
    if len(word) != len(pi.target):
        raise ValidationError("word length must match the map's target")
    return tuple(word[p] for p in pi.positions())


def monomial_pullback(pi: FinMap, exps: Sequence[int], n: int) -> tuple[int, ...]:
    """Pull back a monomial of ``A_n(T)`` (exponent vector over :func:`words`)."""
    t, s = len(pi.target), len(pi.source)
    out = [0] * n ** s
    for w, e in zip(words(n, t), exps):
        if e:
            out[word_index(variable_pullback(pi, w), n)] += e
    return tuple(out)


def binomial_pullback(pi: FinMap, b: Binomial, n: int) -> Binomial:
    return Binomial(monomial_pullback(pi, b.plus, n), monomial_pullback(pi, b.minus, n))


def det_binomials(n: int, s: int, part: Sequence[int]) -> list[Binomial]:
    """Binomials ``x_{a1||a2} x_{b1||b2} - x_{a1||b2} x_{b1||a2}`` for the split ``part | rest``.

    ``part`` lists 1-based elements of ``[s]`` forming ``S_1``. Zero binomials
    are dropped and the rest deduplicated up to sign.
    """
    s1 = sorted(set(int(x) for x in part))
    if not s1 or len(s1) >= s or s1[0] < 1 or s1[-1] > s:
        raise ValidationError("need a partition of [s] into two nonempty parts")
    s2 = [j for j in range(1, s + 1) if j not in s1]
    nv = n ** s

    def join(u, v):
        w = [0] * s
        for j, x in zip(s1, u):
            w[j - 1] = x
        for j, x in zip(s2, v):
            w[j - 1] = x
        return word_index(w, n)

    left = list(itertools.product(range(1, n + 1), repeat=len(s1)))
    right = list(itertools.product(range(1, n + 1), repeat=len(s2)))
    out = []
    for a1, b1 in itertools.combinations(left, 2):
        for a2, b2 in itertools.combinations(right, 2):
            p, m = [0] * nv, [0] * nv
            p[join(a1, a2)] += 1
            p[join(b1, b2)] += 1
            m[join(a1, b2)] += 1
            m[join(b1, a2)] += 1
            out.append(Binomial(tuple(p), tuple(m)))
    return _canonical(out)


def _canonical(gens) -> list[Binomial]:
    out = [g if g.plus >= g.minus else g.negate() for g in dedupe(gens)]
    return sorted(out, key=lambda g: (g.plus, g.minus), reverse=True)


def two_part_partitions(s: int) -> list[tuple[int, ...]]:
    """Subsets ``S_1`` of ``[s]`` containing 1, one per unordered split into nonempty parts."""
    rest = range(2, s + 1)
    out = []
    for k in range(0, s - 1):
        for c in itertools.combinations(rest, k):
            out.append((1,) + c)
    return out


def rank_one_ideal(n: int, s: int) -> list[Binomial]:
    """Generators of the ideal of rank-one tensors in ``A_n([s])``: all 2x2 'minors' over all splits."""
    if s < 2:
        return []
    gens = []
    for part in two_part_partitions(s):
        gens.extend(det_binomials(n, s, part))
    return _canonical(gens)


def fin_maps(s: int, t: int) -> Iterator[FinMap]:
    src, tgt = OrderedFiniteSet.range(s), OrderedFiniteSet.range(t)
    for vals in itertools.product(range(1, t + 1), repeat=s):
        yield FinMap(src, tgt, vals)


@dataclass
class GenerationReport:
    n: int
    s: int
    bound: int
    equal: bool
    generated_by_smaller: bool
    generators: int
    pulled_back: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def generation_bound_check(n: int, s: int) -> GenerationReport:
    """Compare the rank-one ideal on ``[s]`` with pull-backs from smaller index sets.

    ``equal`` pulls back along all maps ``[s] -> [s']`` with
    ``s' <= min(s, 2n^2 - 1)``; ``generated_by_smaller`` repeats the test with
    ``s' < s`` only, which is the stronger statement.
    """
    bound = 2 * n * n - 1
    target = rank_one_ideal(n, s)
    nv = n ** s
    if s <= 2:
        return GenerationReport(n, s, bound, True, s < 2, len(target), len(target))
    pulled: dict[int, list[Binomial]] = {}
    for sp in range(2, min(s, bound) + 1):
        base = rank_one_ideal(n, sp)
        acc = []
        for pi in fin_maps(s, sp):
            acc.extend(binomial_pullback(pi, b, n) for b in base)
        pulled[sp] = dedupe(acc)
    everything = dedupe(b for v in pulled.values() for b in v)
    smaller = dedupe(b for sp, v in pulled.items() if sp < s for b in v)
    eq = ideal_equal(target, everything, nvars=nv)
    eq_small = ideal_equal(target, smaller, nvars=nv) if smaller else not target
    return GenerationReport(n, s, bound, eq, eq_small, len(target), len(everything))


def phi_iso(exps: Sequence[int], n: int, s: int) -> ColumnSumMatrix:
    """Image of a monomial of ``A_n([s])`` in ``M_n([s])``.

    Each variable ``x_a`` contributes ones at the positions ``(a_j, j)``.
    """
    if len(exps) != n ** s:
        raise ValidationError(f"expected {n ** s} exponents, got {len(exps)}")
    cols = [[0] * n for _ in range(s)]
    for w, e in zip(words(n, s), exps):
        if e:
            for j, a in enumerate(w):
                cols[j][a - 1] += e
    return ColumnSumMatrix(n, OrderedFiniteSet.range(s), tuple(tuple(c) for c in cols))


def phi_iso_word(word: Sequence[int], n: int) -> ColumnSumMatrix:
    exps = [0] * n ** len(word)
    exps[word_index(word, n)] = 1
    return phi_iso(exps, n, len(word))


def fin_monomial_divides(u: Sequence[int], t: int, v: Sequence[int], s: int, n: int) -> FinMap | None:
    """Some map ``pi: [s] -> [t]`` with ``pi^* u`` dividing ``v`` in ``A_n([s])``, else None."""
    for pi in fin_maps(s, t):
        pu = monomial_pullback(pi, u, n)
        if all(a <= b for a, b in zip(pu, v)):
            return pi
    return None


def constant_partial_column_sums(blocks: Sequence) -> ColumnSumMatrix:
    """Stack matrices over one column set, each block with its own constant column sum."""
    mats = [b if isinstance(b, ColumnSumMatrix) else ColumnSumMatrix.from_columns(b) for b in blocks]
    if not mats:
        raise ValidationError("need at least one block")
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ValidationError("blocks live over different column sets")
    columns = tuple(tuple(x for m in mats for x in m.columns[j]) for j in range(len(cols)))
    return ColumnSumMatrix(sum(m.n for m in mats), cols, columns)


def split_blocks(alpha: ColumnSumMatrix, sizes: Sequence[int]) -> list[ColumnSumMatrix] | None:
    """Inverse of :func:`constant_partial_column_sums`; None if a block has uneven sums."""
    if sum(sizes) != alpha.n:
        raise ValidationError("block sizes do not add up to the row count")
    out, start = [], 0
    for k in sizes:
        cols = tuple(c[start:start + k] for c in alpha.columns)
        if len({sum(c) for c in cols}) > 1:
            return None
        out.append(ColumnSumMatrix(k, alpha.cols, cols))
        start += k
    return out


# -- random instances for experiments ------------------------------------

def random_column(rng: np.random.Generator, n: int, total: int, max_entry: int | None = None) -> tuple[int, ...]:
    """Uniform-ish random composition of ``total`` into ``n`` parts, each at most ``max_entry``."""
    cap = total if max_entry is None else max_entry
    if n * cap < total:
        raise ValidationError("column sum too large for the entry bound")
    while True:
        cuts = np.sort(rng.integers(0, total + 1, size=n - 1)) if n > 1 else np.array([], dtype=int)
        parts = np.diff(np.concatenate(([0], cuts, [total])))
        if (parts <= cap).all():
            return tuple(int(x) for x in parts)


def random_matrix(rng: np.random.Generator, n: int, m: int, total: int,
                  max_entry: int | None = None) -> ColumnSumMatrix:
    return ColumnSumMatrix(n, OrderedFiniteSet.range(m),
                           tuple(random_column(rng, n, total, max_entry) for _ in range(m)))


def random_os_morphism(rng: np.random.Generator, s: int, t: int) -> FinMap:
    """Random OS-morphism ``[s] -> [t]``; requires ``1 <= t <= s``."""
    if not 1 <= t <= s:
        raise ValidationError("need 1 <= t <= s")
    # first occurrences at sorted random positions, starting with position 0
    firsts = [0] + sorted(int(x) for x in rng.choice(np.arange(1, s), size=t - 1, replace=False))
    vals = [0] * s
    nxt = 0
    for k in range(s):
        if nxt < t and k == firsts[nxt]:
            vals[k] = nxt
            nxt += 1
        else:
            vals[k] = int(rng.integers(0, nxt))
    return FinMap.from_sequence([v + 1 for v in vals], t)
