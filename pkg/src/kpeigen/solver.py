"""Fixed-point iteration x_{i+1} = n^2 + g_n(x_i) for Dirichlet eigenvalues."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .gate import ConditionReport, ConditionViolation, check_condition, require_condition
from .perturbation import ErrorBudget, SeriesConfig, error_budget, evaluate, window
from .potential import StepPotential

__all__ = [
    "ConditionViolation",
    "ConditionReport",
    "NoConvergence",
    "IterateOutsideWindow",
    "EigenvalueEstimate",
    "check_condition",
    "solve",
    "solve_many",
    "worker_count",
]

_EPS = np.finfo(float).eps


class NoConvergence(RuntimeError):
    def __init__(self, max_iter: int, history):
        self.max_iter = max_iter
        self.history = tuple(history)
        super().__init__(
            f"no convergence in {max_iter} iterations "
            f"(last step {abs(history[-1] - history[-2]):.3e}); "
            "tol may be below attainable precision"
        )


class IterateOutsideWindow(RuntimeError):
    """An iterate left I_n; the contraction argument no longer applies."""


@dataclass(frozen=True)
class EigenvalueEstimate:
    n: int
    value: float
    iterations: int
    residual: float
    window: tuple[float, float]
    budget: ErrorBudget | None
    history: tuple[float, ...]

    @property
    def total_bound(self) -> float | None:
        if self.budget is None:
            return None
        return self.budget.total_bound(self.iterations)

    @property
    def steps(self) -> np.ndarray:
        return np.abs(np.diff(self.history))


def solve(q: StepPotential, cfg: SeriesConfig, x0: float | None = None) -> EigenvalueEstimate:
    """Iterate to the fixed point rho_n of n^2 + g_n in I_n.

    Starts from n^2 unless ``x0`` is given. Stops when the step is at most
    max(tol, 4 eps |x|).
    """
    n = cfg.n
    require_condition(q, n)
    lo, hi = window(q, n)
    x = float(n * n if x0 is None else x0)
    history = [x]
    for i in range(1, cfg.max_iter + 1):
        x_new = n * n + evaluate(q, x, cfg).g
        history.append(x_new)
        slack = 4 * _EPS * max(1.0, abs(x_new))
        if not lo - slack <= x_new <= hi + slack:
            raise IterateOutsideWindow(
                f"iterate {i} = {x_new!r} left I_{n} = [{lo!r}, {hi!r}]"
            )
        if abs(x_new - x) <= max(cfg.tol, 4 * _EPS * abs(x_new)):
            x = x_new
            break
        x = x_new
    else:
        raise NoConvergence(cfg.max_iter, history)

    residual = abs(evaluate(q, x, cfg).K)
    budget = error_budget(q, cfg) if (q.is_two_piece or q.is_zero) else None
    return EigenvalueEstimate(n, x, i, residual, (lo, hi), budget, tuple(history))


def worker_count() -> int:
    env = os.environ.get("KP_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), cap))
        except ValueError:
            pass
    return cap


def solve_many(q: StepPotential, ns, base: SeriesConfig | None = None):
    """Solve for each n in order; results are returned in the order of ``ns``."""
    base = base or SeriesConfig(1)
    ns = list(ns)
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        return list(pool.map(lambda n: solve(q, base.with_n(n)), ns))
