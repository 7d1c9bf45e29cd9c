import math

import pytest

from kpeigen.gate import ConditionViolation
from kpeigen.oracle import find_eigenvalue
from kpeigen.perturbation import SeriesConfig, g_n
from kpeigen.potential import from_pieces
from kpeigen.solver import NoConvergence, solve, solve_many, worker_count

# fixed points of the r = s = 5 truncated map for a = -1/2, b = 1/2, c = pi/2,
# cross-checked against the plain tuple enumeration of the series
TRUNCATED_FIXED_POINTS = [0.93890658, 4.045575623, 8.99587309, 16.008138071, 24.999845111, 36.003371548]


def test_zero_potential(zero):
    for n in range(1, 6):
        est = solve(zero, SeriesConfig(n))
        assert est.value == n * n and est.iterations == 1 and est.residual == 0.0
        assert est.total_bound == 0.0


@pytest.mark.parametrize("n", range(1, 7))
def test_reference_example_fixed_points(half_kp, n):
    est = solve(half_kp, SeriesConfig(n))
    assert est.value == pytest.approx(TRUNCATED_FIXED_POINTS[n - 1], abs=1e-8)
    assert est.iterations <= 12
    assert est.residual < 1e-14
    lo, hi = est.window
    assert lo <= est.value <= hi


def test_fixed_point_property(third_kp):
    cfg = SeriesConfig(3)
    est = solve(third_kp, cfg)
    assert 9 + g_n(third_kp, est.value, cfg) == pytest.approx(est.value, abs=1e-13)


def test_start_value_irrelevant(third_kp):
    cfg = SeriesConfig(4)
    a = solve(third_kp, cfg)
    b = solve(third_kp, cfg, x0=16 + 0.9 * third_kp.M)
    assert a.value == pytest.approx(b.value, abs=1e-12)


def test_steps_contract(half_kp):
    est = solve(half_kp, SeriesConfig(1))
    steps = est.steps
    L = est.budget.lipschitz
    for s0, s1 in zip(steps, steps[1:]):
        if s0 > 1e-14:
            assert s1 <= L * s0 * (1 + 1e-9)


def test_deeper_series_approaches_truth(third_kp):
    truth = find_eigenvalue(third_kp, 5).value
    coarse = abs(solve(third_kp, SeriesConfig(5, r=5, s=3)).value - truth)
    fine = abs(solve(third_kp, SeriesConfig(5, r=12, s=5)).value - truth)
    assert fine < coarse


def test_gate(third_kp):
    with pytest.raises(ConditionViolation, match="smallest admissible n = 2"):
        solve(third_kp, SeriesConfig(1))


def test_no_convergence(half_kp):
    with pytest.raises(NoConvergence) as info:
        solve(half_kp, SeriesConfig(1, max_iter=2))
    assert len(info.value.history) == 3


def test_multi_piece_has_no_budget():
    q = from_pieces([[1.0, 0.3], [2.2, -0.4], [math.pi, (0.4 * 1.2 - 0.3) / (math.pi - 2.2)]])
    est = solve(q, SeriesConfig(2))
    assert est.budget is None and est.total_bound is None
    assert est.value == pytest.approx(find_eigenvalue(q, 2).value, abs=1e-3)


def test_solve_many_order(half_kp, monkeypatch):
    monkeypatch.setenv("KP_THREADS", "3")
    assert worker_count() <= 3
    ests = solve_many(half_kp, [3, 1, 2])
    assert [e.n for e in ests] == [3, 1, 2]
    assert ests[1].value == solve(half_kp, SeriesConfig(1)).value


def test_worker_count_bad_env(monkeypatch):
    monkeypatch.setenv("KP_THREADS", "lots")
    assert worker_count() >= 1
