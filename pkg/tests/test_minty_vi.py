import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import graph_1d
from mintykit.errors import DimensionError
from mintykit.gamma_map import build_gamma_system, check_fip
from mintykit.minty_vi import (MVIProblem, classify_via_mvi, construct_witness,
                               solve_finite_mvi, solve_mvi)
from mintykit.operator_graph import OperatorGraph, is_monotone
from mintykit.polyhedra import DEFAULT_TOL, VPolytope
from mintykit.randgen import GenSpec, generate

UNIT = VPolytope([[0.0], [1.0]])


def _pair(x, xs, y, ys):
    return ((np.array([x], float), np.array([xs], float)),
            (np.array([y], float), np.array([ys], float)))


def test_mvi_identity_feasible(identity01):
    r = solve_mvi(MVIProblem(identity01, [0.0], UNIT))
    assert r.feasible and -1e-9 <= r.witness[0] <= 1 + 1e-9


def test_mvi_witness_infeasible(witness_graph):
    r = solve_mvi(MVIProblem(witness_graph, [-0.5], UNIT))
    assert not r.feasible
    assert set(r.certificate) == {(0, 0), (1, 0)}


def test_mvi_empty_restriction_is_vacuous(identity01):
    K = VPolytope([[5.0], [6.0]])
    r = solve_mvi(MVIProblem(identity01, [0.0], K))
    assert r.feasible and r.witness.tolist() == [5.0]


def test_mvi_dimension_mismatch(identity01):
    with pytest.raises(DimensionError):
        MVIProblem(identity01, [0.0, 1.0], UNIT)


def test_finite_mvi_examples(witness_graph):
    assert not solve_finite_mvi(witness_graph, [0, 1], [-0.5]).feasible
    r = solve_finite_mvi(witness_graph, [1], [3.0])
    assert r.feasible and r.witness.tolist() == [1.0]
    with pytest.raises(IndexError):
        solve_finite_mvi(witness_graph, [4], [0.0])
    with pytest.raises(ValueError):
        solve_finite_mvi(witness_graph, [], [0.0])


def test_finite_mvi_uses_every_dual():
    T = OperatorGraph([([0.0], [[0.0], [0.2]]), ([1.0], [[-1.0], [3.0]])])
    # the (1 -> -1) dual alone makes x* = -0.5 infeasible
    r = solve_finite_mvi(T, [0, 1], [-0.5])
    assert not r.feasible and (1, 0) in r.certificate


@pytest.mark.parametrize("pair, delta, zstar, a", [
    (_pair(0, 0, 1, -1), 1.0, -0.5, 0.5),
    (_pair(-1, 3, 0, 0), 3.0, 1.5, 1.5),
    (_pair(0, 0, 2, -2), 4.0, -1.0, 2.0),
])
def test_witness_examples(pair, delta, zstar, a):
    w = construct_witness(pair)
    assert w.delta == delta
    assert w.zstar.tolist() == [zstar]
    assert w.a == pytest.approx(a, abs=1e-12) and w.b == pytest.approx(-a, abs=1e-12)
    assert not solve_mvi(w.problem()).feasible


def test_witness_errors():
    with pytest.raises(ValueError):
        construct_witness(_pair(0, 0, 1, 1))       # monotone pair
    with pytest.raises(ValueError):
        construct_witness(_pair(1, 0, 1, -1))      # coincident points


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10**6))
def test_witness_identities_random(dim, seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    x, y = rng.normal(size=(2, dim))
    xs = rng.normal(size=dim)
    # choose y* so that <y* - x*, y - x> = -delta
    d = y - x
    delta = rng.uniform(0.01, 5)
    ys = xs - delta * d / (d @ d)
    w = construct_witness(((x, xs), (y, ys)))
    assert abs(w.a - w.delta / 2) <= 1e-9
    assert abs(w.b + w.delta / 2) <= 1e-9
    assert not solve_mvi(w.problem()).feasible


def test_classify_examples(cubic3, rng):
    T = generate(GenSpec(3, 6, "psd_linear", 0.0, 17))
    assert classify_via_mvi(T, 20, rng).holds
    v = classify_via_mvi(cubic3, 5, rng)
    assert not v.holds and v.violation.entries == (0, 1)
    assert classify_via_mvi(OperatorGraph([], dim=2), 3, rng).holds
    assert classify_via_mvi(graph_1d([(0.5, 2.0)]), 3, rng).holds
    with pytest.raises(ValueError):
        classify_via_mvi(cubic3, 0, rng)


@pytest.mark.parametrize("seed", range(10))
def test_mvi_fip_bridge(seed):
    """solve_finite_mvi and check_fip decide the same set by different code."""
    fam = ["psd_linear", "convex_gradient", "cubic_like", "perturbed"][seed % 4]
    T = generate(GenSpec(1 + seed % 4, 6, fam, 2.0, 700 + seed))
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(5):
        subset = sorted(rng.choice(len(T), size=3, replace=False).tolist())
        xstar = rng.normal(scale=2, size=T.dim)
        a = solve_finite_mvi(T, subset, xstar).feasible
        b = check_fip(build_gamma_system(T, subset, xstar)).feasible
        assert a == b


@pytest.mark.parametrize("seed", range(6))
def test_forward_direction_on_monotone(seed):
    T = generate(GenSpec(2 + seed % 3, 6, ("psd_linear", "convex_gradient")[seed % 2],
                         0.0, 300 + seed))
    assert is_monotone(T).holds
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(10):
        size = int(rng.integers(1, 7))
        subset = rng.choice(len(T), size=size, replace=False).tolist()
        xstar = rng.normal(scale=3, size=T.dim)
        r = solve_finite_mvi(T, subset, xstar)
        assert r.feasible
        for i in subset:
            for d in T.duals[i]:
                assert (d - xstar) @ (T.points[i] - r.witness) >= -DEFAULT_TOL.eq_tol - 1e-12
