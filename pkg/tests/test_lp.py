import numpy as np
import pytest

from isidetect.lp import INFEASIBLE, OPTIMAL, LinearProgram, solve_lp
from oracles import random_lp, vertex_lp

METHODS = ["simplex", "highs"]


@pytest.mark.parametrize("method", METHODS)
def test_single_variable(method):
    sol = solve_lp(LinearProgram([1.0], np.zeros((0, 1)), [], 0, 1), method)
    assert sol.status == OPTIMAL and sol.objective == 0.0 and sol.x[0] == 0.0


@pytest.mark.parametrize("method", METHODS)
def test_simplex_corner(method):
    lp = LinearProgram([-1.0, -1.0], [[1.0, 1.0]], [1.0], 0, 1)
    sol = solve_lp(lp, method)
    assert sol.objective == pytest.approx(-1.0, abs=1e-12)
    assert sorted(np.round(sol.x, 12).tolist()) == [0.0, 1.0]


@pytest.mark.parametrize("method", METHODS)
def test_infeasible(method):
    lp = LinearProgram([1.0, 1.0], [[1.0, 1.0], [-1.0, -1.0]], [0.5, -1.5], 0, 1)
    assert solve_lp(lp, method).status == INFEASIBLE


def test_negative_rhs_needs_phase_one():
    # x + y >= 1.5 written as -x - y <= -1.5
    lp = LinearProgram([1.0, 2.0], [[-1.0, -1.0]], [-1.5], 0, 1)
    sol = solve_lp(lp)
    assert sol.objective == pytest.approx(2.0, abs=1e-12)
    np.testing.assert_allclose(sol.x, [1.0, 0.5], atol=1e-12)


def test_degenerate_parity_polytope():
    # z in the parity polytope of (a, b), maximise z with a = b = 1/2 forced
    rows = [([0, 1, 2], [1, -1, -1], 0), ([0, 1, 2], [-1, 1, -1], 0),
            ([0, 1, 2], [-1, -1, 1], 0), ([0, 1, 2], [1, 1, 1], 2)]
    lp = LinearProgram.from_rows(3, [0, 0, -1], rows, lo=[0.5, 0.5, 0], hi=[0.5, 0.5, 1])
    sol = solve_lp(lp)
    assert sol.objective == pytest.approx(-1.0, abs=1e-12)


def test_bad_shapes():
    with pytest.raises(ValueError):
        LinearProgram([1.0, 1.0], [[1.0]], [1.0], 0, 1)
    with pytest.raises(ValueError):
        LinearProgram([1.0], [[1.0]], [1.0, 2.0], 0, 1)
    with pytest.raises(ValueError):
        LinearProgram([1.0], [[1.0]], [1.0], 1, 0)
    with pytest.raises(ValueError):
        LinearProgram.from_rows(2, [0, 0], [([3], [1.0], 1.0)])


@pytest.mark.parametrize("seed", range(40))
def test_random_small_lp_matches_vertex_enumeration(seed):
    rng = np.random.default_rng(1000 + seed)
    c, A, b, lo, hi = random_lp(rng, max_vars=5, max_rows=7)
    best, _ = vertex_lp(c, A, b, lo, hi)
    lp = LinearProgram(c, A, b, lo, hi)
    for method in METHODS:
        sol = solve_lp(lp, method)
        if best is None:
            assert sol.status == INFEASIBLE
        else:
            assert sol.status == OPTIMAL
            assert sol.objective == pytest.approx(best, abs=1e-8)
            assert lp.violation(sol.x) < 1e-8


def test_perturbation_probe():
    # tiny objective perturbations must not change the optimum by more than they move it
    rng = np.random.default_rng(7)
    c, A, b, lo, hi = random_lp(rng, max_vars=6, max_rows=8)
    base = solve_lp(LinearProgram(c, A, b, lo, hi))
    for _ in range(10):
        eps = rng.normal(scale=1e-7, size=len(c))
        sol = solve_lp(LinearProgram(c + eps, A, b, lo, hi))
        if base.status == OPTIMAL:
            bound = np.abs(eps) @ np.maximum(np.abs(lo), np.abs(hi))
            assert abs(sol.objective - base.objective) <= bound + 1e-9


def test_deterministic():
    rng = np.random.default_rng(11)
    lp = LinearProgram(*random_lp(rng))
    a, b = solve_lp(lp), solve_lp(lp)
    assert np.array_equal(a.x, b.x) and a.iterations == b.iterations


def test_unknown_method():
    with pytest.raises(ValueError):
        solve_lp(LinearProgram([1.0], np.zeros((0, 1)), [], 0, 1), "magic")
