"""Acceptance suite: one group of tests per criterion, summarised as PASS/FAIL lines.

Tolerances and sizes are pinned below. Heavy results (the K_{3,2} comparison)
are computed once per session and shared between criteria.
"""

import itertools
import time

import numpy as np
import pytest

from markovtfp.fiberwalk import enumerate_fiber, fiber_connected, margins, mcmc_walk, random_table
from markovtfp.graphs import StateGraph, glue, k3n_glue_spec, path_glue_spec, star_glue_spec
from markovtfp.ideal.binomial import Binomial
from markovtfp.ideal.groebner import buchberger
from markovtfp.ideal.lattice import in_lattice, integer_kernel, is_saturated_lattice, lattice_basis
from markovtfp.ideal.orders import grevlex
from markovtfp.ideal.toric import ideal_equal, markov_basis
from markovtfp.model import model_matrix
from markovtfp.monoid import (compare, generation_bound_check, phi_iso, pullback, random_matrix,
                              random_os_morphism, rank_one_ideal, wqo_search)
from markovtfp.tfp import (GroupedIdeal, glue_vs_tfp, glued_index_map, is_hadamard_stable, tfp_ideal,
                           tfp_lattice, tfp_presentation)
from markovtfp.cli import stabilize

from oracles import segre_matrix, spans_integer_kernel
from remap import permute, permute_vector, swap_perm

INDEPENDENCE_SECONDS = 1.0
SMALL_GLUE_SECONDS = 10.0
K32_GLUE_SECONDS = 600.0
DEGREE_BOUND = 12
RANK_ONE_SECONDS = 60.0
ORDER_TRIALS = 10_000
WQO_SEQUENCES, WQO_LENGTH, WQO_SECONDS = 100, 200, 300.0
FIBER_SIZE_CAP = 10_000
FIBERS_PER_MODEL = 5
WALK_STEPS, WALK_SIGMAS = 10_000, 3.0


def criterion(cid, title):
    return pytest.mark.criterion(cid, title)


@pytest.fixture(scope="session")
def k32_report():
    return glue_vs_tfp(k3n_glue_spec(2))


def edge_factor(name="e", leaf="l"):
    g = StateGraph.build(["0", leaf], [("0", leaf)], 2, name)
    return GroupedIdeal.from_graph(g, ["0"])


def path_factors():
    spec = path_glue_spec()
    return [GroupedIdeal.from_graph(g, spec.shared) for g, _ in spec.components]


def k31_factor():
    spec = k3n_glue_spec(1)
    return GroupedIdeal.from_graph(spec.components[0][0], spec.shared)


# 1. independence model

@criterion(1, "independence model has a single quadric Markov basis")
def test_independence_markov_basis(record_property):
    A = model_matrix(StateGraph.build("12"))
    t0 = time.perf_counter()
    basis = markov_basis(A)
    elapsed = time.perf_counter() - t0
    record_property("seconds", round(elapsed, 3))
    quad = Binomial((1, 0, 0, 1), (0, 1, 1, 0))
    assert [b.sign_key() for b in basis] == [quad.sign_key()]
    assert elapsed < INDEPENDENCE_SECONDS
    assert spans_integer_kernel(A.entries, [b.vector() for b in basis])


@criterion(1, "independence model has a single quadric Markov basis")
def test_independence_all_small_fibers_connected(record_property):
    A = model_matrix(StateGraph.build("12"))
    basis = markov_basis(A)
    seen = set()
    for total in range(7):
        for t in itertools.product(range(total + 1), repeat=4):
            if sum(t) == total:
                seen.add(margins(A, t))
    record_property("fibers", len(seen))
    assert all(fiber_connected(A, b, basis).connected for b in seen)


# 2. glued ideal equals the iterated fibre product

@criterion(2, "glue_vs_tfp is EQUAL on path, star K_{1,3} and K_{3,2}")
@pytest.mark.parametrize("name", ["path", "star3"])
def test_glue_equals_tfp_small(name, record_property):
    spec = path_glue_spec() if name == "path" else star_glue_spec(3)
    t0 = time.perf_counter()
    rep = glue_vs_tfp(spec)
    elapsed = time.perf_counter() - t0
    record_property(f"{name}_seconds", round(elapsed, 2))
    assert rep.equal
    assert elapsed < SMALL_GLUE_SECONDS


@criterion(2, "glue_vs_tfp is EQUAL on path, star K_{1,3} and K_{3,2}")
def test_glue_equals_tfp_k32(k32_report, record_property):
    elapsed = sum(k32_report.seconds.values())
    record_property("k32_seconds", round(elapsed, 1))
    record_property("k32_histogram", k32_report.glued_histogram)
    assert k32_report.equal
    assert k32_report.glued_histogram == k32_report.tfp_histogram
    assert elapsed < K32_GLUE_SECONDS


# 3. degree bound for K_{3,N}

@criterion(3, "K_{3,N} minimal generators have degree at most 12 for N = 1, 2")
def test_k3n_degree_bound(record_property):
    report = stabilize(k3n_glue_spec(1), [1, 2], time_limit=None)
    rows = report["instances"]
    record_property("max_degrees", [r["max_degree"] for r in rows])
    assert [r["status"] for r in rows] == ["ok", "ok"]
    assert all(isinstance(r["max_degree"], int) and r["max_degree"] <= DEGREE_BOUND for r in rows)


# 4. rank-one ideal

@criterion(4, "rank-one ideal matches the Segre Markov basis and pull-back generation")
def test_rank_one_consistency(record_property):
    t0 = time.perf_counter()
    for s in (2, 3):
        assert ideal_equal(rank_one_ideal(2, s), markov_basis(segre_matrix(2, s)), grevlex(2 ** s))
    for s in (3, 4):
        rep = generation_bound_check(2, s)
        assert rep.equal, rep
    elapsed = time.perf_counter() - t0
    record_property("seconds", round(elapsed, 2))
    assert elapsed < RANK_ONE_SECONDS


# 5. pull-backs preserve the order

@criterion(5, "pull-back along OS-morphisms preserves the column-wise order")
def test_pullback_monotonicity(record_property):
    rng = np.random.default_rng(20240605)
    violations = 0
    for _ in range(ORDER_TRIALS):
        n = int(rng.integers(1, 4))
        t = int(rng.integers(1, 6))
        s = int(rng.integers(t, 6))
        while True:
            a = random_matrix(rng, n, t, int(rng.integers(0, 4)))
            b = random_matrix(rng, n, t, int(rng.integers(0, 4)))
            if a != b:
                break
        if compare(a, b) < 0:
            a, b = b, a
        pi = random_os_morphism(rng, s, t)
        if compare(pullback(pi, a), pullback(pi, b)) <= 0:
            violations += 1
    record_property("violations", violations)
    assert violations == 0


# 6. divisible pairs in random sequences

@criterion(6, "wqo_search finds a divisible pair in every random sequence")
def test_wqo_search_random_sequences(record_property):
    rng = np.random.default_rng(11)
    t0 = time.perf_counter()
    misses, latest = 0, 0
    for _ in range(WQO_SEQUENCES):
        n = int(rng.integers(1, 4))
        seq = []
        for _ in range(WQO_LENGTH):
            total = int(rng.integers(0, 3 * n + 1))
            seq.append(random_matrix(rng, n, int(rng.integers(1, 5)), total, max_entry=3))
        hit = wqo_search(seq)
        if hit is None:
            misses += 1
        else:
            latest = max(latest, hit[1])
    elapsed = time.perf_counter() - t0
    record_property("misses", misses)
    record_property("latest_j", latest)
    record_property("seconds", round(elapsed, 2))
    assert misses == 0
    assert elapsed < WQO_SECONDS


# 7. kernel of the monomial map

@criterion(7, "rank-one ideal membership agrees with equal monoid images")
def test_phi_iso_kernel_exhaustive(record_property):
    n, disagreements, checked = 2, 0, 0
    for s in (1, 2, 3):
        nv = n ** s
        gb = buchberger(rank_one_ideal(n, s), grevlex(nv), nvars=nv)
        monos = [m for d in range(4) for m in itertools.product(range(d + 1), repeat=nv) if sum(m) == d]
        nf = {m: gb.reduce_monomial(m) for m in monos}
        img = {m: phi_iso(m, n, s) for m in monos}
        for u, v in itertools.combinations(monos, 2):
            checked += 1
            if (nf[u] == nf[v]) != (img[u] == img[v]):
                disagreements += 1
    record_property("pairs", checked)
    record_property("disagreements", disagreements)
    assert disagreements == 0


# 8. fibers

def _fiber_models(k32_report):
    """(name, matrix, moves, sample size); sizes chosen so fibers stay below the cap."""
    ind = model_matrix(StateGraph.build("12"))
    yield "independence", ind, markov_basis(ind), 60
    for name, spec, total in (("path", path_glue_spec(), 20), ("star3", star_glue_spec(3), 12),
                              ("k31", k3n_glue_spec(1), 16)):
        A = model_matrix(glue(spec))
        yield name, A, markov_basis(A), total
    yield "k32", model_matrix(glue(k3n_glue_spec(2))), k32_report.glued_basis, 12


@criterion(8, "Markov bases connect random fibers; the walk is uniform on a small fiber")
def test_random_fibers_connected(k32_report, record_property):
    sizes = {}
    for name, A, moves, total in _fiber_models(k32_report):
        rng = np.random.default_rng(8)
        got = []
        for _ in range(FIBERS_PER_MODEL):
            b = margins(A, random_table(rng, A.shape[1], total))
            res = fiber_connected(A, b, moves, limit=FIBER_SIZE_CAP)
            assert res.connected, (name, b)
            got.append(res.size)
        sizes[name] = got
    record_property("fiber_sizes", sizes)


@criterion(8, "Markov bases connect random fibers; the walk is uniform on a small fiber")
def test_walk_uniform(record_property):
    A = model_matrix(StateGraph.build("12"))
    start = (1, 1, 1, 1)
    fiber = enumerate_fiber(A, margins(A, start))
    assert len(fiber) == 3
    states = mcmc_walk(A, start, markov_basis(A), WALK_STEPS, seed=7)[1:]
    p = 1 / len(fiber)
    sigma = (WALK_STEPS * p * (1 - p)) ** 0.5
    worst = max(abs(states.count(t) - WALK_STEPS * p) / sigma for t in fiber)
    record_property("max_deviation_sigma", round(worst, 2))
    assert worst <= WALK_SIGMAS


# 9. algebraic laws of the fibre product

def _symmetric(X, Y, xy=None):
    xy = xy or tfp_ideal(X, Y)
    yx = tfp_ideal(Y, X) if Y is not X else xy
    return ideal_equal(permute(xy.gens, swap_perm(X, Y)), yx.gens, grevlex(xy.ideal.nvars))


@criterion(9, "fibre product is symmetric, associative and keeps Hadamard stability")
def test_symmetry(k32_report):
    X, Y = path_factors()
    assert _symmetric(X, Y)
    e = edge_factor()
    assert _symmetric(e, e)
    k = k31_factor()
    assert _symmetric(k, k, k32_report.tfp)


@criterion(9, "fibre product is symmetric, associative and keeps Hadamard stability")
def test_associativity_path_and_star():
    X, Y = path_factors()
    Z = edge_factor("f", "m")
    for a, b, c in ((X, Y, Z), (Z, Z, Z)):
        left = tfp_ideal(tfp_ideal(a, b).ideal, c)
        right = tfp_ideal(a, tfp_ideal(b, c).ideal)
        assert left.ideal.labels == right.ideal.labels
        assert ideal_equal(left.gens, right.gens, grevlex(left.ideal.nvars))


@criterion(9, "fibre product is symmetric, associative and keeps Hadamard stability")
def test_associativity_k31_lattices(k32_report, record_property):
    # The three-factor ideal lives in 64 variables; its Groebner basis is out of
    # reach, so compare the defining lattices, which determine the lattice ideals.
    X = k31_factor()
    XX = k32_report.tfp.ideal
    assert tfp_presentation(XX, X)[2] == tfp_presentation(X, XX)[2]
    left = tfp_lattice(XX, X, check=False)
    right = tfp_lattice(X, XX, check=False)
    bl, br = lattice_basis(left), lattice_basis(right)
    record_property("lattice_rank", len(bl))
    assert len(bl) == len(br)
    assert all(in_lattice(v, br) for v in left)
    assert all(in_lattice(v, bl) for v in right)
    assert is_saturated_lattice(left)


@criterion(9, "fibre product is symmetric, associative and keeps Hadamard stability")
def test_hadamard_stability_preserved(k32_report):
    X, Y = path_factors()
    e, k = edge_factor(), k31_factor()
    cases = [(X, Y, tfp_ideal(X, Y)), (e, e, tfp_ideal(e, e)), (k, k, k32_report.tfp)]
    for a, b, prod in cases:
        assert is_hadamard_stable(a.gens)[0] and is_hadamard_stable(b.gens)[0]
        assert is_hadamard_stable(prod.gens)[0]


# supplementary: three copies of K_{3,1}, compared with K_{3,3} at lattice level

def test_three_copies_of_k31_span_the_k33_kernel(k32_report):
    X = k31_factor()
    section = tfp_lattice(k32_report.tfp.ideal, X, check=False)
    spec = k3n_glue_spec(3)
    g = glue(spec)
    index = glued_index_map(spec, g)
    mapped = [permute_vector(v, index) for v in section]
    kernel = [list(v) for v in integer_kernel(model_matrix(g), reduce=False).vectors]
    bm, bk = lattice_basis(mapped), lattice_basis(kernel)
    assert len(bm) == len(bk) == 48
    assert all(in_lattice(v, bk) for v in mapped)
    assert all(in_lattice(v, bm) for v in kernel)
