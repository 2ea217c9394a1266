import numpy as np
import pytest

from conftest import graph_1d
from mintykit.errors import ConvergenceError, SelectionCapExceeded
from mintykit.gamma_map import (build_gamma_system, check_fip, check_kkm,
                                constructive_fip, fip_objective, fip_property,
                                gamma_polyhedron, kkm_property)
from mintykit.operator_graph import OperatorGraph
from mintykit.polyhedra import DEFAULT_TOL, contains
from mintykit.randgen import GenSpec, generate, linear_graph

ROT = np.array([[0.0, 1.0], [-1.0, 0.0]])


def halfspaces(poly):
    return [(h.normal.tolist(), h.offset) for h in poly]


# --- gamma_polyhedron / build_gamma_system --------------------------------

def test_gamma_identity_at_one(identity01):
    # x <= 1, stored as <-1, x> >= -1
    assert halfspaces(gamma_polyhedron(identity01, [1.0], [0.0])) == [([-1.0], -1.0)]


def test_gamma_off_domain_is_whole_space(identity01):
    assert len(gamma_polyhedron(identity01, [7.0], [0.0])) == 0
    T = OperatorGraph([([0.0], []), ([1.0], [[1.0]])])
    assert len(gamma_polyhedron(T, [0.0], [0.0])) == 0


def test_gamma_shifted_witness_point():
    T = graph_1d([(0, 0.5), (1, -0.5)])
    assert halfspaces(gamma_polyhedron(T, [0.0], [0.0])) == [([-0.5], -0.0)]


def test_system_identity(identity01):
    sys = build_gamma_system(identity01, [0, 1], [0.0])
    assert sys.polyhedra[0].constraints[0].is_degenerate
    assert halfspaces(sys.polyhedra[1]) == [([-1.0], -1.0)]
    assert sys.hull.vertices.tolist() == [[0.0], [1.0]]


def test_system_witness(witness_graph):
    sys = build_gamma_system(witness_graph, [0, 1], [-0.5])
    # x <= 0 and x >= 1
    assert halfspaces(sys.polyhedra[0]) == [([-0.5], -0.0)]
    assert halfspaces(sys.polyhedra[1]) == [([0.5], 0.5)]


def test_system_errors():
    T = OperatorGraph([([0.0], []), ([1.0], [[1.0]])])
    with pytest.raises(ValueError):
        build_gamma_system(T, [0], [0.0])
    with pytest.raises(IndexError):
        build_gamma_system(T, [5], [0.0])


def test_base_point_in_own_gamma():
    T = generate(GenSpec(3, 6, "perturbed", 2.0, 3))
    sys = build_gamma_system(T, T.domain_indices(), [0.4, -1.0, 2.0])
    for x, poly in zip(sys.base_points, sys.polyhedra):
        assert poly.min_slack(x) >= -1e-12


# --- check_kkm / check_fip -------------------------------------------------

def test_kkm_identity(identity01):
    sys = build_gamma_system(identity01, [0, 1], [0.0])
    assert check_kkm(sys).holds
    r = check_fip(sys)
    assert r.feasible and 0 <= r.witness[0] <= 1


def test_kkm_witness_counterexample(witness_graph):
    sys = build_gamma_system(witness_graph, [0, 1], [-0.5])
    v = check_kkm(sys)
    assert not v.holds
    assert v.point[0] == pytest.approx(0.5)
    assert v.selection == (0, 0)
    assert not check_fip(sys).feasible


def test_single_base_point():
    T = generate(GenSpec(2, 5, "perturbed", 3.0, 11))
    sys = build_gamma_system(T, [2], [5.0, -5.0])
    assert check_kkm(sys).holds
    r = check_fip(sys)
    assert r.feasible
    np.testing.assert_allclose(r.witness, T.points[2])
    np.testing.assert_allclose(constructive_fip(sys), T.points[2], atol=1e-9)


def test_selection_cap(monkeypatch):
    duals = [[[float(k)] for k in range(10)]] * 3
    T = OperatorGraph([([float(i)], d) for i, d in enumerate(duals)])
    sys = build_gamma_system(T, [0, 1, 2], [0.0])
    with pytest.raises(SelectionCapExceeded) as exc:
        check_kkm(sys, cap=999)
    assert exc.value.product == 1000 and exc.value.cap == 999
    monkeypatch.setenv("MINTYKIT_SELECTION_CAP", "10")
    with pytest.raises(SelectionCapExceeded):
        check_kkm(sys)


def test_multivalued_counterexample_escapes_selected_duals():
    # point 1 carries a harmless dual and a bad one; KKM needs the bad one
    T = OperatorGraph([([0.0], [[0.0]]), ([1.0], [[2.0], [-1.0]])])
    sys = build_gamma_system(T, [0, 1], [-0.5])
    v = check_kkm(sys)
    assert not v.holds and v.selection == (0, 1)
    for poly, a in zip(sys.polyhedra, v.selection):
        assert poly.constraints[a].slack(v.point) <= -DEFAULT_TOL.strict_margin


def test_per_system_equivalence_needs_subcollections():
    """Samples of -x at x* = 0.

    Gamma(0) is the whole line, so [A] is covered, yet Gamma(-1) and Gamma(1)
    are disjoint rays: the single-A checks disagree, and the failure of
    (KKM) shows up on the sub-collection {-1, 1}.
    """
    T = graph_1d([(-1, 1), (0, 0), (1, -1)])
    sys = build_gamma_system(T, [0, 1, 2], [0.0])
    assert check_kkm(sys).holds
    assert not check_fip(sys).feasible
    k, f = kkm_property(sys), fip_property(sys)
    assert not k.holds and k.subset == (0, 2)
    assert not f.holds


@pytest.mark.parametrize("seed", range(12))
def test_hereditary_equivalence_random(seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    fam = ["psd_linear", "convex_gradient", "cubic_like", "perturbed"][seed % 4]
    T = generate(GenSpec(1 + seed % 3, 5, fam, 2.0, 500 + seed))
    A = sorted(rng.choice(len(T), size=4, replace=False).tolist())
    sys = build_gamma_system(T, A, rng.normal(size=T.dim))
    assert kkm_property(sys).holds == fip_property(sys).holds


def test_counterexample_refutes_fip_on_some_subcollection():
    seen = 0
    for seed in range(8):
        T = generate(GenSpec(2, 6, "perturbed", 2.0, 40 + seed))
        rng = np.random.Generator(np.random.PCG64(seed))
        for _ in range(10):
            sys = build_gamma_system(T, T.domain_indices()[:4], rng.normal(scale=3, size=2))
            if not check_kkm(sys).holds:
                seen += 1
                assert not fip_property(sys).holds
    assert seen > 0


# --- constructive FIP ------------------------------------------------------

def test_constructive_identity(identity01):
    sys = build_gamma_system(identity01, [0, 1], [0.0])
    y = constructive_fip(sys)
    assert 0 <= y[0] <= 1
    assert fip_objective(sys, y) <= DEFAULT_TOL.fip_tol


def test_constructive_rotation_finds_zero():
    """For x -> Sx - x* the Gamma sets meet only at the zero S^{-1} x*."""
    pts = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=float)
    T = linear_graph(pts, ROT)
    xstar = np.array([0.3, -0.2])
    sys = build_gamma_system(T, [0, 1, 2, 3], xstar)
    stats = {}
    y = constructive_fip(sys, stats=stats)
    assert stats["iterations"] > 0
    np.testing.assert_allclose(y, np.linalg.solve(ROT, xstar), atol=1e-5)
    assert contains(sys.hull, sys.all_constraints(), y)


@pytest.mark.parametrize("seed", range(6))
def test_constructive_matches_lp(seed):
    T = generate(GenSpec(2 + seed % 3, 6, ("psd_linear", "convex_gradient")[seed % 2],
                         0.0, 900 + seed))
    rng = np.random.Generator(np.random.PCG64(seed))
    sys = build_gamma_system(T, [0, 1, 2, 3, 4], rng.normal(size=T.dim))
    y = constructive_fip(sys)
    assert fip_objective(sys, y) <= DEFAULT_TOL.fip_tol
    assert contains(sys.hull, sys.all_constraints(), y)
    assert check_fip(sys).feasible


def test_constructive_fails_without_kkm(witness_graph):
    sys = build_gamma_system(witness_graph, [0, 1], [-0.5])
    with pytest.raises(ConvergenceError) as exc:
        constructive_fip(sys, max_iters=50)
    assert exc.value.value > DEFAULT_TOL.fip_tol
