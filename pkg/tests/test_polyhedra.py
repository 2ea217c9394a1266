import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mintykit import oracles
from mintykit.errors import DimensionError, EmptySetError
from mintykit.polyhedra import (DEFAULT_TOL, HalfSpace, HPolyhedron, Tolerance,
                                VPolytope, contains, feasible_in_hull,
                                project_onto, strictly_feasible_in_hull)

UNIT = VPolytope([[0.0], [1.0]])


def le(a, b):
    """{x : <a, x> <= b} as a closed half-space."""
    return HalfSpace(-np.asarray(a, dtype=float), -b)


def ge(a, b, strict=False):
    return HalfSpace(np.asarray(a, dtype=float), b, strict=strict)


# --- types ---------------------------------------------------------------

def test_tolerance_validation():
    assert DEFAULT_TOL.eq_tol == 1e-9 and DEFAULT_TOL.strict_margin == 1e-7
    assert DEFAULT_TOL.qp_tol == 1e-8
    with pytest.raises(ValueError):
        Tolerance(eq_tol=1e-6, strict_margin=1e-7)
    with pytest.raises(ValueError):
        Tolerance(qp_tol=0.0)


def test_halfspace_degenerate_rules():
    assert HalfSpace([0.0, 0.0], 0.0).is_degenerate
    with pytest.raises(ValueError):
        HalfSpace([0.0], 1.0)
    with pytest.raises(ValueError):
        HalfSpace([0.0], 0.0, strict=True)


def test_hpolyhedron_rejects_strict_and_mixed_dims():
    with pytest.raises(ValueError):
        HPolyhedron([ge([1], 0, strict=True)], 1)
    with pytest.raises(DimensionError):
        HPolyhedron([ge([1, 0], 0)], 1)


def test_vpolytope_nonempty():
    with pytest.raises(ValueError):
        VPolytope(np.zeros((0, 2)))


# --- feasible_in_hull ----------------------------------------------------

def test_feasible_interval():
    r = feasible_in_hull(UNIT, [le([1], 1)])
    assert r.feasible and 0 <= r.witness[0] <= 1


def test_infeasible_interval_with_certificate():
    r = feasible_in_hull(UNIT, [le([1], 0), ge([1], 1)])
    assert not r.feasible and r.witness is None
    assert set(r.certificate) == {0, 1}


def test_no_constraints_singleton():
    r = feasible_in_hull(VPolytope([[5.0]]), [])
    assert r.feasible and r.witness.tolist() == [5.0]


def test_certificate_is_irreducible():
    cons = [ge([1], -10), le([1], 0.2), ge([1], 0.6), le([1], 5)]
    r = feasible_in_hull(UNIT, cons)
    assert not r.feasible and r.certificate == (1, 2)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        feasible_in_hull(UNIT, [ge([1, 1], 0)])


def test_degenerate_constraint_is_whole_space():
    r = feasible_in_hull(UNIT, [HalfSpace([0.0], 0.0), le([1], 0.5)])
    assert r.feasible


# --- strict --------------------------------------------------------------

def test_strict_half_interval():
    r = strictly_feasible_in_hull(UNIT, [ge([1], 0.5, strict=True)])
    assert r.feasible and r.slack >= DEFAULT_TOL.strict_margin
    assert r.witness[0] > 0.5


def test_strict_disjoint():
    assert not strictly_feasible_in_hull(UNIT, [ge([1], 2, strict=True)]).feasible


def test_strict_interior():
    cons = [ge([1], 0, strict=True), HalfSpace([-1.0], -1.0, strict=True)]
    r = strictly_feasible_in_hull(UNIT, cons)
    assert r.feasible
    assert r.witness[0] == pytest.approx(0.5) and r.slack == pytest.approx(0.5)


def test_strict_band_is_infeasible_and_flagged():
    # optimum slack 5e-8 lies between eq_tol and strict_margin
    cons = [ge([1], 1 - 5e-8, strict=True)]
    r = strictly_feasible_in_hull(UNIT, cons)
    assert not r.feasible and r.meta["near_degenerate"]


# --- projection ----------------------------------------------------------

def test_project_outside():
    d, p = project_onto([2.0], UNIT, [])
    assert d == pytest.approx(1, abs=1e-8) and p[0] == pytest.approx(1, abs=1e-8)


def test_project_inside():
    d, p = project_onto([0.5], UNIT, [])
    assert d <= 1e-8 and p[0] == pytest.approx(0.5, abs=1e-8)


def test_project_segment_foot():
    d, p = project_onto([1.0, 1.0], VPolytope([[0, 0], [2, 0]]), [])
    assert d == pytest.approx(1, abs=1e-8)
    np.testing.assert_allclose(p, [1, 0], atol=1e-8)


def test_project_with_constraints():
    d, p = project_onto([0.0], UNIT, [ge([1], 0.75)])
    assert d == pytest.approx(0.75, abs=1e-8)


def test_project_empty():
    with pytest.raises(EmptySetError):
        project_onto([0.0], UNIT, [ge([1], 2)])


# --- contains ------------------------------------------------------------

def test_contains_examples():
    assert contains(UNIT, [], [0.3])
    assert not contains(UNIT, [], [1.5])
    tri = VPolytope([[0, 0], [1, 0], [0, 1]])
    assert contains(tri, [ge([1, 1], 0.5)], [0.4, 0.4])
    assert not contains(tri, [ge([1, 1], 0.9)], [0.4, 0.4])


# --- properties ----------------------------------------------------------

def _random_problem(seed, n=2, k=4, m=3):
    rng = np.random.Generator(np.random.PCG64(seed))
    V = VPolytope(rng.uniform(-1, 1, size=(k, n)))
    anchor = rng.uniform(-1.2, 1.2, size=n)
    cons = []
    for _ in range(m):
        a = rng.standard_normal(n)
        cons.append(HalfSpace(a, float(a @ anchor) - rng.uniform(-0.3, 0.3)))
    return V, cons


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 4))
def test_monotone_in_constraints(seed, n):
    V, cons = _random_problem(seed, n=n, m=4)
    prev = True
    for j in range(len(cons) + 1):
        now = feasible_in_hull(V, cons[:j]).feasible
        assert prev or not now
        prev = now


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 4))
def test_witness_is_contained(seed, n):
    V, cons = _random_problem(seed, n=n)
    r = feasible_in_hull(V, cons)
    if r.feasible:
        assert contains(V, cons, r.witness)
        assert min(h.slack(r.witness) for h in cons) >= -DEFAULT_TOL.eq_tol


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31))
def test_projection_zero_iff_contained(seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    V, _ = _random_problem(seed)
    y = rng.uniform(-1.5, 1.5, size=2)
    d, p = project_onto(y, V, [])
    assert contains(V, [], p)
    assert (d <= DEFAULT_TOL.qp_tol) == contains(V, [], y)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31))
def test_strict_implies_relaxed(seed):
    V, cons = _random_problem(seed)
    strict = [HalfSpace(h.normal, h.offset, strict=True) for h in cons]
    if strictly_feasible_in_hull(V, strict).feasible:
        assert feasible_in_hull(V, cons).feasible


@pytest.mark.parametrize("seed", range(25))
def test_grid_oracle_2d(seed):
    """Agreement with a dense sample of the hull (step about 1e-3)."""
    V, cons = _random_problem(1000 + seed, k=3 + seed % 3, m=2 + seed % 3)
    X, radius = oracles.hull_samples(V.vertices, 250_000)
    grid_ok = oracles.min_raw_slack(cons, X) >= -DEFAULT_TOL.eq_tol
    r = feasible_in_hull(V, cons)
    if grid_ok.any():
        assert r.feasible
    if r.feasible and r.slack > radius:
        # the max-slack ball around the witness contains a grid point
        assert oracles.min_normalized_slack(cons, X).max() >= -DEFAULT_TOL.eq_tol
