"""Exact Dirichlet eigenvalues of -y'' + q y on [0, pi] for step potentials.

On a piece where q = v the solution is propagated by the 2x2 matrix

    [[ cc(z, t),     s(z, t) ],
     [ -z s(z, t),   cc(z, t) ]],   z = lam - v, t = piece length,

with s = sin(sqrt(z) t)/sqrt(z), cc = cos(sqrt(z) t) continued through z <= 0.
The characteristic function is y(pi) for y(0) = 0, y'(0) = 1.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .gate import check_condition, require_condition, smallest_admissible_n
from .perturbation import window
from .potential import StepPotential

__all__ = [
    "OracleResult",
    "NoRootInWindow",
    "MultipleRoots",
    "kernels",
    "propagator",
    "characteristic",
    "find_eigenvalue",
    "spectrum_up_to",
    "Spectrum",
]

_SERIES_CUTOFF = 1e-8
_SAMPLES = 64
_INFLATE = 1e-9


class NoRootInWindow(RuntimeError):
    pass


class MultipleRoots(RuntimeError):
    pass


def kernels(z: float, t: float) -> tuple[float, float, float]:
    """Return (cc, s, -z s) for the piece propagator."""
    u = z * t * t
    if abs(u) < _SERIES_CUTOFF:
        # cos/sinh series through the branch point z = 0
        cc = 1.0 - u / 2 + u * u / 24
        s = t * (1.0 - u / 6 + u * u / 120)
    elif z > 0:
        w = math.sqrt(z)
        cc = math.cos(w * t)
        s = math.sin(w * t) / w
    else:
        w = math.sqrt(-z)
        cc = math.cosh(w * t)
        s = math.sinh(w * t) / w
    return cc, s, -z * s


def propagator(z: float, t: float) -> np.ndarray:
    cc, s, ds = kernels(z, t)
    return np.array([[cc, s], [ds, cc]])


def characteristic(q: StepPotential, lam: float) -> float:
    y, dy = 0.0, 1.0
    for v, lo, hi in zip(q.values, q.breakpoints, q.breakpoints[1:]):
        cc, s, ds = kernels(lam - v, hi - lo)
        y, dy = cc * y + s * dy, ds * y + cc * dy
    return y


@dataclass(frozen=True)
class OracleResult:
    n: int
    value: float
    bracket: tuple[float, float]
    residual: float
    bisection_steps: int


def _bisect(f, lo, hi, flo, tol):
    steps = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        steps += 1
        if fm == 0.0:
            return mid, mid, steps
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi, steps


def find_eigenvalue(q: StepPotential, n: int, tol: float = 1e-13) -> OracleResult:
    """Bisect the unique sign change of the characteristic function in I_n."""
    require_condition(q, n)
    lo, hi = window(q, n)
    lo -= _INFLATE
    hi += _INFLATE
    f = lambda lam: characteristic(q, lam)
    xs = np.linspace(lo, hi, _SAMPLES)
    fs = np.array([f(x) for x in xs])
    zeros = np.flatnonzero(fs == 0.0)
    changes = np.flatnonzero(np.sign(fs[:-1]) * np.sign(fs[1:]) < 0)
    found = len(zeros) + len(changes)
    if found == 0:
        raise NoRootInWindow(f"no sign change of y(pi; lam) in I_{n} = [{lo!r}, {hi!r}]")
    if found > 1:
        raise MultipleRoots(f"{found} sign changes in I_{n}; expected exactly one")
    if len(zeros):
        x = float(xs[zeros[0]])
        return OracleResult(n, x, (x, x), 0.0, 0)
    j = changes[0]
    a, b, steps = _bisect(f, float(xs[j]), float(xs[j + 1]), float(fs[j]), tol)
    value = 0.5 * (a + b)
    return OracleResult(n, value, (a, b), abs(f(value)), steps)


@dataclass(frozen=True)
class Spectrum:
    results: tuple[OracleResult, ...]
    skipped: tuple[int, ...]
    diagnostic: str

    @property
    def values(self) -> list[float]:
        return [r.value for r in self.results]


def spectrum_up_to(q: StepPotential, N: int, tol: float = 1e-13) -> Spectrum:
    """Eigenvalues for every admissible n <= N, in increasing order."""
    n_min = smallest_admissible_n(q.M)
    ns = [n for n in range(n_min, N + 1) if check_condition(q, n)]
    skipped = tuple(range(1, min(n_min, N + 1)))
    diag = ""
    if skipped:
        diag = check_condition(q, skipped[0]).diagnostic
    with ThreadPoolExecutor() as pool:
        results = tuple(pool.map(lambda n: find_eigenvalue(q, n, tol), ns))
    for prev, cur in zip(results, results[1:]):
        if not cur.value > prev.value:
            raise MultipleRoots(f"eigenvalues not increasing at n={cur.n}")
    return Spectrum(results, skipped, diag)
