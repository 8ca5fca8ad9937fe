import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from markovtfp.errors import ResourceError, ValidationError
from markovtfp.graphs import StateGraph, complete_bipartite, glue, path_glue_spec
from markovtfp.model import (ModelMatrix, config_index, configurations, grouped_layout,
                             model_matrix, parse_matrix_text)

from oracles import direct_model_matrix


def test_independence_matrix():
    A = model_matrix(StateGraph.build("12"))
    assert A.rows == ((("1",), (1,)), (("1",), (2,)), (("2",), (1,)), (("2",), (2,)))
    assert A.cols == ((1, 1), (1, 2), (2, 1), (2, 2))
    expected_columns = [(1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1)]
    assert [tuple(c) for c in A.entries.T] == expected_columns


def test_single_node_and_saturated_edge():
    assert np.array_equal(model_matrix(StateGraph.build("1")).entries, np.eye(2, dtype=int))
    assert np.array_equal(model_matrix(StateGraph.build("12", [("1", "2")])).entries,
                          np.eye(4, dtype=int))


def test_mixed_radix_last_node_fastest():
    dims = [2, 3, 2]
    confs = configurations(dims)
    assert confs[:3] == [(1, 1, 1), (1, 1, 2), (1, 2, 1)]
    assert [config_index(c, dims) for c in confs] == list(range(12))


@st.composite
def small_graphs(draw):
    k = draw(st.integers(1, 4))
    nodes = [str(i) for i in range(k)]
    pairs = list(itertools.combinations(nodes, 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    states = {v: draw(st.integers(1, 3)) for v in nodes}
    return StateGraph.build(nodes, [p for p, m in zip(pairs, mask) if m], states)


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_matrix_matches_direct_expansion(g):
    A = model_matrix(g)
    pos = g.position
    cliques = sorted({c for c, _ in A.rows}, key=lambda c: [pos[v] for v in c])
    ref = direct_model_matrix([g.states[v] for v in g.nodes], [[pos[v] for v in c] for c in cliques])
    assert np.array_equal(A.entries, ref)
    ncl = len(cliques)
    assert (A.entries.sum(axis=0) == ncl).all()


@settings(max_examples=40, deadline=None)
@given(small_graphs(), st.data())
def test_hadamard_compatibility_and_all_one_point(g, data):
    A = model_matrix(g)
    m = len(A.rows)
    frac = st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=7)
    th = data.draw(st.lists(frac, min_size=m, max_size=m))
    et = data.draw(st.lists(frac, min_size=m, max_size=m))
    prod = [a * b for a, b in zip(th, et)]
    lhs = A.evaluate(prod)
    rhs = [a * b for a, b in zip(A.evaluate(th), A.evaluate(et))]
    assert lhs == rhs
    assert A.evaluate([1] * m) == [1] * A.shape[1]


def test_column_limit():
    g = StateGraph.build([str(i) for i in range(5)], states=3)
    with pytest.raises(ResourceError):
        model_matrix(g, max_columns=100)


def test_text_round_trip():
    A = model_matrix(complete_bipartite(1, 2))
    assert np.array_equal(parse_matrix_text(A.to_text()), A.entries)
    B = ModelMatrix.from_dict(A.to_dict())
    assert B.rows == A.rows and B.cols == A.cols
    with pytest.raises(ValidationError):
        parse_matrix_text("2 2\n1 0 1")


def test_grouped_layout_path():
    g = glue(path_glue_spec())
    lay = grouped_layout(g, ["0"])
    assert lay.group_sizes == (4, 4)
    assert lay.keys == ((1,), (2,))
    assert sorted(lay.permutation()) == list(range(8))
    for key, grp in zip(lay.keys, lay.groups):
        assert all(model_matrix(g).cols[c][0] == key[0] for c in grp)


def test_grouped_layout_extremes():
    g = StateGraph.build("abc", [("a", "b")], states={"a": 2, "b": 3, "c": 2})
    assert grouped_layout(g, []).groups == (tuple(range(12)),)
    full = grouped_layout(g, list(g.nodes))
    assert full.group_sizes == (1,) * 12
    assert full.r == 12
