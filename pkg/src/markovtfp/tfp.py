"""Toric fibre products of binomial ideals, computed by elimination."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError
from .graphs import GlueSpec, StateGraph, copy_node_name, glue
from .ideal.binomial import Binomial, dedupe, parse_polynomial, polynomial_as_binomial
from .ideal.groebner import buchberger
from .ideal.lattice import coordinate_section
from .ideal.orders import block_elimination, grevlex
from .ideal.toric import (degree_histogram, ideal_equal, is_lattice_prime, lattice_ideal_groebner,
                          markov_basis, minimalize)
from .model import GroupedLayout, config_index, configurations, grouped_layout, model_matrix


@dataclass(frozen=True)
class GroupedIdeal:
    """A binomial ideal whose variables are split into ``r`` ordered groups.

    Variables are numbered group-major: group ``j`` occupies positions
    ``offsets[j] .. offsets[j] + sizes[j] - 1``. ``labels[j][i]`` tags variable
    ``i`` of group ``j``; for products it is the tuple of factor indices.
    """

    sizes: tuple[int, ...]
    gens: tuple[Binomial, ...]
    labels: tuple[tuple, ...] = ()
    layout: GroupedLayout | None = None

    def __post_init__(self):
        sizes = tuple(int(d) for d in self.sizes)
        if any(d < 0 for d in sizes):
            raise ValidationError("group sizes must be nonnegative")
        object.__setattr__(self, "sizes", sizes)
        n = sum(sizes)
        gens = tuple(self.gens)
        for g in gens:
            if g.nvars != n:
                raise ValidationError(f"generator has {g.nvars} variables, the grouping has {n}")
        object.__setattr__(self, "gens", gens)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(tuple((i,) for i in range(d)) for d in sizes))
        elif tuple(len(lab) for lab in self.labels) != sizes:
            raise ValidationError("labels do not match the group sizes")

    @property
    def r(self) -> int:
        return len(self.sizes)

    @property
    def nvars(self) -> int:
        return sum(self.sizes)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for d in self.sizes:
            out.append(acc)
            acc += d
        return tuple(out)

    def variable_names(self, prefix: str = "x") -> list[str]:
        return [f"{prefix}[{j + 1};{','.join(str(t + 1) for t in lab)}]"
                for j, labs in enumerate(self.labels) for lab in labs]

    def to_dict(self) -> dict:
        names = self.variable_names()
        return {"sizes": list(self.sizes),
                "variables": names,
                "generators": [g.to_text(names) for g in self.gens]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "GroupedIdeal":
        """Read ``{"sizes": [...], "generators": [...], "variables": [...]?}``.

        Without ``variables`` the default names ``x[j;i]`` are expected.
        """
        try:
            sizes = tuple(int(d) for d in data["sizes"])
            texts = list(data.get("generators", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed grouped ideal: {exc!r}") from exc
        names = data.get("variables") or cls(sizes, ()).variable_names()
        if len(names) != sum(sizes):
            raise ValidationError("number of variable names does not match the group sizes")
        gens = []
        for t in texts:
            b = polynomial_as_binomial(parse_polynomial(t, names))
            if b is None:
                raise ValidationError(f"generator is not a binomial with coefficients +-1: {t!r}")
            gens.append(b)
        return cls(sizes, tuple(gens))

    @classmethod
    def from_graph(cls, g: StateGraph, shared: Sequence[str]) -> "GroupedIdeal":
        """Markov basis of a graphical model, variables regrouped by the shared nodes."""
        layout = grouped_layout(g, shared)
        basis = markov_basis(model_matrix(g))
        perm = layout.permutation()
        gens = tuple(Binomial(tuple(b.plus[c] for c in perm), tuple(b.minus[c] for c in perm))
                     for b in basis)
        return cls(layout.group_sizes, gens, layout=layout)


@dataclass(frozen=True)
class TfpResult:
    """Generators of a toric fibre product in the ``z`` variables.

    ``ideal.labels[j]`` holds ``(i, k)`` pairs, flattened to tuples of
    original factor indices for iterated products.
    """

    ideal: GroupedIdeal
    factors: int
    trace: dict = field(default_factory=dict)

    @property
    def gens(self) -> tuple[Binomial, ...]:
        return self.ideal.gens


def _pad(g: Binomial, before: int, after: int) -> Binomial:
    z0, z1 = (0,) * before, (0,) * after
    return Binomial(z0 + g.plus + z1, z0 + g.minus + z1)


METHODS = ("auto", "buchberger", "lattice")


def tfp_presentation(X: GroupedIdeal, Y: GroupedIdeal) -> tuple[list[Binomial], tuple, tuple]:
    """Generators of ``I_X + I_Y + (z - x*y)`` in variables ``x, y, z``, plus z sizes and labels."""
    if X.r != Y.r:
        raise ValidationError(f"group counts differ: {X.r} vs {Y.r}")
    nx, ny = X.nvars, Y.nvars
    zsizes = tuple(a * b for a, b in zip(X.sizes, Y.sizes))
    n = nx + ny + sum(zsizes)
    gens = [_pad(g, 0, n - nx) for g in X.gens]
    gens += [_pad(g, nx, n - nx - ny) for g in Y.gens]
    xo, yo = X.offsets, Y.offsets
    z = nx + ny
    labels = []
    for j in range(X.r):
        lab = []
        for i in range(X.sizes[j]):
            for k in range(Y.sizes[j]):
                plus = [0] * n
                minus = [0] * n
                plus[z] = 1
                minus[xo[j] + i] += 1
                minus[nx + yo[j] + k] += 1
                gens.append(Binomial(tuple(plus), tuple(minus)))
                lab.append(tuple(X.labels[j][i]) + tuple(Y.labels[j][k]))
                z += 1
        labels.append(tuple(lab))
    return gens, zsizes, tuple(labels)


def _both_prime(X: GroupedIdeal, Y: GroupedIdeal) -> bool:
    return is_lattice_prime(X.gens, X.nvars) and is_lattice_prime(Y.gens, Y.nvars)


def tfp_lattice(X: GroupedIdeal, Y: GroupedIdeal, *, check: bool = True) -> list[list[int]]:
    """Basis of the lattice whose lattice ideal is the fibre product of two prime lattice ideals.

    The combined ideal ``I_X + I_Y + (z - x*y)`` is then the lattice ideal
    of the span of its exponent vectors, and eliminating ``x, y`` amounts to
    intersecting that lattice with the z-coordinates. ``check`` verifies the
    primality assumption first.
    """
    if check and not _both_prime(X, Y):
        raise ValidationError("lattice elimination needs prime lattice ideals as inputs")
    gens, _, _ = tfp_presentation(X, Y)
    return coordinate_section([g.vector() for g in gens], range(X.nvars + Y.nvars))


def tfp_ideal(X: GroupedIdeal, Y: GroupedIdeal, *, method: str = "auto") -> TfpResult:
    """Kernel of ``K[z] -> K[x, y] / (I_X + I_Y)`` with ``z^j_{ik} -> x^j_i y^j_k``.

    The x and y variables are eliminated from ``I_X + I_Y + (z - x*y)``.
    ``z`` indices run group-major, then X index, then Y index.

    ``method="buchberger"`` computes a Groebner basis in a block order with
    x, y dominant and keeps the z-part. ``method="lattice"`` requires both
    inputs to be prime lattice ideals and goes through :func:`tfp_lattice`;
    the result is the lattice ideal of that lattice. ``"auto"`` picks the
    lattice route whenever both inputs pass :func:`is_lattice_prime`.
    """
    if method not in METHODS:
        raise ValidationError(f"unknown elimination method {method!r}")
    t0 = time.perf_counter()
    gens, zsizes, labels = tfp_presentation(X, Y)
    nx, ny = X.nvars, Y.nvars
    nz = sum(zsizes)
    n = nx + ny + nz
    if method == "auto":
        method = "lattice" if _both_prime(X, Y) else "buchberger"
    elif method == "lattice" and not _both_prime(X, Y):
        raise ValidationError("lattice elimination needs prime lattice ideals as inputs")
    trace = {"method": method, "eliminated": nx + ny, "z_variables": nz}
    if method == "lattice":
        section = tfp_lattice(X, Y, check=False)
        gb = lattice_ideal_groebner(section, nz)
        zgens = list(gb.elements)
        trace["lattice_rank"] = len(section)
    else:
        order = block_elimination(n, range(nx + ny))
        # with z of weight 2 every input binomial is homogeneous
        weights = [1] * (nx + ny) + [2] * nz
        full = buchberger(dedupe(gens), order, nvars=n, weights=weights)
        zgens = [Binomial(b.plus[nx + ny:], b.minus[nx + ny:]) for b in full.elements
                 if not any(b.plus[:nx + ny]) and not any(b.minus[:nx + ny])]
        trace["order"] = order.describe()
        trace["elimination_basis_size"] = len(full.elements)
    trace["seconds"] = time.perf_counter() - t0
    return TfpResult(GroupedIdeal(zsizes, tuple(zgens), labels), 2, trace)


def iterated_tfp(models: Sequence[GroupedIdeal], multiplicities: Sequence[int] | None = None,
                 *, method: str = "auto") -> TfpResult:
    """Left fold ``((X1 * X1) * X2) * ...`` over the factors expanded by multiplicity."""
    if multiplicities is None:
        multiplicities = [1] * len(models)
    if len(multiplicities) != len(models):
        raise ValidationError("one multiplicity per model required")
    if any(a < 0 for a in multiplicities):
        raise ValidationError("multiplicities must be nonnegative")
    factors = [m for m, a in zip(models, multiplicities) for _ in range(a)]
    if not factors:
        raise ValidationError("at least one factor with positive multiplicity is needed")
    r = factors[0].r
    if any(f.r != r for f in factors):
        raise ValidationError("all models must have the same number of groups")
    acc = TfpResult(factors[0], 1, {"steps": []})
    steps = []
    for f in factors[1:]:
        res = tfp_ideal(acc.ideal, f, method=method)
        steps.append(res.trace)
        acc = TfpResult(res.ideal, acc.factors + 1)
    return TfpResult(acc.ideal, acc.factors, {"steps": steps})


def is_hadamard_stable(gens: Iterable) -> tuple[bool, object | None]:
    """Check that every generator is a difference of two monomials.

    Accepts :class:`Binomial` objects or polynomials given as
    ``{exponents: coefficient}`` mappings. Returns ``(ok, witness)`` with the
    first offending generator as witness.
    """
    for g in gens:
        if isinstance(g, Binomial):
            continue
        poly = dict(g)
        if not poly:
            continue
        if polynomial_as_binomial(poly) is None:
            return False, g
    return True, None


def glued_index_map(spec: GlueSpec, glued: StateGraph | None = None) -> list[int]:
    """Glued-graph column index for each z variable of the iterated product.

    Factor order follows the multiplicity expansion; inside each group the
    product index is the tuple of per-factor private configurations.
    """
    glued = glued or glue(spec)
    pos = glued.position
    dims = [glued.states[v] for v in glued.nodes]
    layouts = [(g, grouped_layout(g, spec.shared)) for g, a in spec.components for _ in range(a)]
    copy_no = []
    count: dict[str, int] = {}
    for g, _ in layouts:
        count[g.name] = count.get(g.name, 0) + 1
        copy_no.append(count[g.name])
    rests = [configurations([g.states[v] for v in lay.private]) for g, lay in layouts]
    keys = layouts[0][1].keys
    out = []

    def rec(f: int, beta: list[int]) -> None:
        if f == len(layouts):
            out.append(config_index(beta, dims))
            return
        g, lay = layouts[f]
        for b1 in rests[f]:
            nb = list(beta)
            for v, s in zip(lay.private, b1):
                nb[pos[copy_node_name(g, copy_no[f], v)]] = s
            rec(f + 1, nb)

    for b0 in keys:
        beta = [0] * len(glued.nodes)
        for v, s in zip(spec.shared, b0):
            beta[pos[v]] = s
        rec(0, beta)
    return out


@dataclass
class GlueReport:
    equal: bool
    glued_histogram: dict[int, int]
    tfp_histogram: dict[int, int]
    glued_generators: int
    tfp_generators: int
    nvars: int
    seconds: dict[str, float]
    # fibre product in z coordinates, before renaming; kept for reuse, not serialised
    tfp: TfpResult | None = field(default=None, repr=False, compare=False)
    glued_basis: list[Binomial] | None = field(default=None, repr=False, compare=False)

    @property
    def max_degree(self) -> tuple[int, int]:
        return (max(self.glued_histogram, default=0), max(self.tfp_histogram, default=0))

    def to_dict(self) -> dict:
        return {"status": "EQUAL" if self.equal else "DIFFERENT",
                "equal": self.equal,
                "nvars": self.nvars,
                "glued": {"generators": self.glued_generators,
                          "degree_histogram": {str(k): v for k, v in self.glued_histogram.items()}},
                "tfp": {"generators": self.tfp_generators,
                        "degree_histogram": {str(k): v for k, v in self.tfp_histogram.items()}},
                "seconds": self.seconds}

    def to_text(self) -> str:
        return (f"{'EQUAL' if self.equal else 'DIFFERENT'}: glued {self.glued_generators} generators "
                f"{self.glued_histogram}, tfp {self.tfp_generators} generators {self.tfp_histogram} "
                f"({self.nvars} variables)")


def glue_vs_tfp(spec: GlueSpec, *, method: str = "auto") -> GlueReport:
    """Compare the glued graph's toric ideal with the iterated TFP of the components.

    Side (a) is the Markov basis of the glued graph's model matrix. Side (b)
    folds the component ideals with :func:`iterated_tfp` and renames each z
    variable to the glued configuration it stands for.
    """
    t0 = time.perf_counter()
    g = glue(spec)
    A = model_matrix(g)
    direct = markov_basis(A)
    t1 = time.perf_counter()
    comps = [(GroupedIdeal.from_graph(c, spec.shared), a) for c, a in spec.components if a > 0]
    res = iterated_tfp([c for c, _ in comps], [a for _, a in comps], method=method)
    index = glued_index_map(spec, g)
    n = len(index)
    if n != A.shape[1] or sorted(index) != list(range(n)):
        raise AssertionError("z variables do not biject onto glued configurations")
    mapped = []
    for b in res.gens:
        plus, minus = [0] * n, [0] * n
        for zi, c in enumerate(index):
            plus[c] = b.plus[zi]
            minus[c] = b.minus[zi]
        mapped.append(Binomial(tuple(plus), tuple(minus)))
    t2 = time.perf_counter()
    order = grevlex(n)
    equal = ideal_equal(direct, mapped, order)
    tfp_min, tfp_hist = minimalize(mapped, order)
    t3 = time.perf_counter()
    return GlueReport(equal, degree_histogram(direct), tfp_hist, len(direct), len(tfp_min), n,
                      {"glued": t1 - t0, "tfp": t2 - t1, "compare": t3 - t2}, res, direct)
