"""Truncated perturbation series, the fixed-point map g_n and its error budget.

The depth-k term is a sum over index tuples (n_1, ..., n_k) in [-r, r]^k
whose partial sums T_j = n_1 + ... + n_j avoid {0, -2n}:

    a_{r,k,n}(lam) = sum  C_{n_1} ... C_{n_k} (C_{T_k} - C_{T_k + 2n})
                          / prod_j (lam - (n + T_j)^2)

It is evaluated by propagating a weight vector over the partial sum T, one
depth at a time. Pruning a forbidden prefix is then a single zeroed entry,
and all (2r+1)^k tuples are covered exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .gate import require_condition
from .potential import StepPotential, cosine_coeffs

__all__ = [
    "SeriesConfig",
    "SeriesValue",
    "ErrorBudget",
    "WindowError",
    "window",
    "series_terms",
    "a_trunc",
    "evaluate",
    "g_n",
    "k_n",
    "error_budget",
]

_SQRT2 = math.sqrt(2.0)


class WindowError(ValueError):
    """lam lies outside I_n = [n^2 - M, n^2 + M]."""


@dataclass(frozen=True)
class SeriesConfig:
    n: int
    r: int = 5
    s: int = 5
    tol: float = 1e-15
    max_iter: int = 50

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.r < 1 or self.s < 1:
            raise ValueError("r and s must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")

    def with_n(self, n: int) -> "SeriesConfig":
        return SeriesConfig(n, self.r, self.s, self.tol, self.max_iter)


def window(q: StepPotential, n: int) -> tuple[float, float]:
    return (n * n - q.M, n * n + q.M)


def _check_window(q, lam, n):
    lo, hi = window(q, n)
    slack = 4 * np.finfo(float).eps * max(1.0, n * n)
    if not lo - slack <= lam <= hi + slack:
        raise WindowError(f"lam={lam!r} outside I_{n} = [{lo!r}, {hi!r}]")


class SeriesValue(NamedTuple):
    g: float
    K: float
    terms: tuple[float, ...]  # a_{r,k,n}(lam), k = 1..s
    min_denominator: float


def series_terms(q: StepPotential, lam: float, n: int, r: int, s: int):
    """Return ([a_{r,1,n}, ..., a_{r,s,n}], smallest |denominator| used)."""
    span = s * r
    T = np.arange(-span, span + 1)
    C_step = cosine_coeffs(q, np.arange(-r, r + 1))
    # C at the closing indices T and T + 2n
    closing = cosine_coeffs(q, T) - cosine_coeffs(q, T + 2 * n)
    denom = lam - (n + T).astype(float) ** 2
    allowed = (T != 0) & (T != -2 * n)
    inv = np.zeros_like(denom)
    inv[allowed] = 1.0 / denom[allowed]

    weight = np.zeros(T.shape)
    weight[span] = 1.0  # empty prefix sits at T = 0
    terms = []
    min_den = math.inf
    for k in range(1, s + 1):
        # new[T] = sum_m weight[T - m] C_m, reachable T within [-k r, k r]
        weight = np.convolve(weight, C_step, mode="same") * inv
        reach = np.abs(T) <= k * r
        live = allowed & reach & (weight != 0)
        if live.any():
            min_den = min(min_den, float(np.abs(denom[live]).min()))
        terms.append(math.fsum(weight * closing))
    return terms, min_den


def evaluate(q: StepPotential, lam: float, cfg: SeriesConfig) -> SeriesValue:
    """g_n(lam) = -C_{2n} + sum_k a_{r,k,n}(lam), with K_n = lam - n^2 - g_n."""
    n = cfg.n
    require_condition(q, n)
    _check_window(q, lam, n)
    terms, min_den = series_terms(q, lam, n, cfg.r, cfg.s)
    floor = 2 * n - 1 - q.M
    if min_den < floor * (1 - 1e-12):
        raise AssertionError(
            f"denominator {min_den} below 2n-1-M = {floor}; window logic broken"
        )
    c2n = float(cosine_coeffs(q, [2 * n])[0])
    g = math.fsum([-c2n, *terms])
    return SeriesValue(g, lam - n * n - g, tuple(terms), min_den)


def a_trunc(q: StepPotential, lam: float, cfg: SeriesConfig, k: int) -> float:
    if not 1 <= k <= cfg.s:
        raise ValueError(f"k must lie in [1, {cfg.s}], got {k}")
    return evaluate(q, lam, cfg).terms[k - 1]


def g_n(q: StepPotential, lam: float, cfg: SeriesConfig) -> float:
    return evaluate(q, lam, cfg).g


def k_n(q: StepPotential, lam: float, cfg: SeriesConfig) -> float:
    return evaluate(q, lam, cfg).K


@dataclass(frozen=True)
class ErrorBudget:
    """A priori bounds for the truncated fixed-point scheme.

    ``truncation_bound`` bounds |lambda_n - rho_n| (rho_n the fixed point of
    the truncated map); ``iteration_bound(i)`` bounds |x_{n,i} - rho_n|.
    ``None`` marks a bound whose denominator is not positive.

    ``radius_premise_holds`` is False when r + 1 < 2n. The radius term then
    assumes every omitted first-order index has |lam - (n+k)^2| at least
    (r+1)|r+1-2n| - M, but the index k = 1 - 2n has only 2n - 1 - M. The
    term is reported literally; it is not a rigorous bound in that regime.
    """

    n: int
    r: int
    s: int
    lipschitz: float
    depth_term: float
    radius_term: float | None
    start_bound: float
    condition_ok: bool = True
    radius_premise_holds: bool = True
    notes: tuple[str, ...] = field(default=())

    @property
    def truncation_bound(self) -> float | None:
        if self.radius_term is None:
            return None
        return self.depth_term + self.radius_term

    @property
    def truncation_applicable(self) -> bool:
        return self.radius_term is not None

    def iteration_bound(self, i: int) -> float:
        return self.lipschitz**i * self.start_bound

    def total_bound(self, i: int) -> float | None:
        t = self.truncation_bound
        return None if t is None else t + self.iteration_bound(i)


def error_budget(q: StepPotential, cfg: SeriesConfig) -> ErrorBudget:
    """Lipschitz constant, truncation bound and iteration bound for (q, cfg).

    Defined for two-piece potentials (and the zero potential, where every
    bound vanishes).
    """
    n, r, s = cfg.n, cfg.r, cfg.s
    require_condition(q, n)
    premise = r + 1 > 2 * n
    if q.is_zero:
        return ErrorBudget(n, r, s, 0.0, 0.0, 0.0, 0.0, radius_premise_holds=premise)
    if not q.is_two_piece:
        raise ValueError("error bounds are available for two-piece potentials only")

    M = q.M
    ba = q.b - q.a
    d = 2 * n - 1 - M
    pi = math.pi

    L = 9 * ba**2 / (4 * pi * d * (4 * pi * d - 3 * ba))
    one_minus_L = 1 - L

    depth = ba ** (s + 2) / (
        2 * M * _SQRT2**s * pi ** (s + 1) * d**s * (_SQRT2 * pi * d - ba) * one_minus_L
    )
    radius_den = (r + 1) * abs(r + 1 - 2 * n) - M
    notes = []
    if radius_den > 0:
        radius = 8 * ba**2 / (pi**2 * (r + 1) ** 2 * radius_den * one_minus_L)
    else:
        radius = None
        notes.append(f"(r+1)|r+1-2n| - M = {radius_den:g} <= 0: truncation bound not applicable")
    if not premise:
        notes.append(f"r + 1 = {r + 1} < 2n = {2 * n}: radius term omits near-resonant indices")

    m = 2 * n - 1
    start = (
        ba / (2 * pi * n)
        + ba**2 / (M * pi**2 * m)
        + ba**3 / (2 * _SQRT2 * M * pi**2 * m * (_SQRT2 * pi * m - ba))
    ) / one_minus_L
    return ErrorBudget(
        n, r, s, L, depth, radius, start,
        radius_premise_holds=premise, notes=tuple(notes),
    )
