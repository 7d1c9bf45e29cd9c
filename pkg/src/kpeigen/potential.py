"""Mean-zero piecewise-constant potentials on [0, pi].

A potential is stored as its exact breakpoint/value lists. Every Fourier
quantity is computed from per-piece closed forms; nothing here integrates
numerically. Trigonometric factors are evaluated through the breakpoint's
fraction of pi so that c = pi/2 makes sin(2 n c) vanish exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MEAN_ZERO_TOL",
    "StepPotential",
    "make_kronig_penney",
    "from_levels",
    "from_pieces",
    "zero_potential",
    "cosine_coeff",
    "cosine_coeffs",
    "sine_coeff",
    "exp_coeff",
    "exp_coeffs",
    "primitive",
    "reflect",
    "sinpi",
    "cospi",
]

MEAN_ZERO_TOL = 1e-12


def sinpi(x):
    """sin(pi * x), exact at multiples of 1/2 and exactly odd."""
    x = np.asarray(x, dtype=float)
    r = np.remainder(np.abs(x), 2.0)
    sign = np.where(r >= 1.0, -1.0, 1.0)
    r = np.where(r >= 1.0, r - 1.0, r)
    # r in [0, 1); fold about 1/2 (1 - r is exact there)
    r = np.minimum(r, 1.0 - r)
    out = np.copysign(1.0, x) * sign * np.sin(np.pi * r)
    return out if out.ndim else float(out)


def cospi(x):
    """cos(pi * x), exact at multiples of 1/2 and exactly even."""
    return sinpi(np.abs(np.asarray(x, dtype=float)) + 0.5)


def _cispi(x):
    return cospi(x) + 1j * sinpi(x)


@dataclass(frozen=True)
class StepPotential:
    """Piecewise-constant potential with ``values[j]`` on
    ``[breakpoints[j], breakpoints[j+1]]``.

    The constructor enforces 0 = x_0 < ... < x_m = pi and a vanishing mean.
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        bp = tuple(float(x) for x in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        if len(vals) < 1 or len(bp) != len(vals) + 1:
            raise ValueError("need m values and m + 1 breakpoints")
        if bp[0] != 0.0 or bp[-1] != math.pi:
            raise ValueError("breakpoints must start at 0 and end at pi exactly")
        if any(b <= a for a, b in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("values must be finite")
        residual = self.mean_residual
        if abs(residual) > MEAN_ZERO_TOL:
            raise ValueError(
                f"potential is not mean-zero: sum v_j dx_j = {residual:.3e}"
            )

    @property
    def mean_residual(self) -> float:
        return math.fsum(
            v * (hi - lo)
            for v, lo, hi in zip(self.values, self.breakpoints, self.breakpoints[1:])
        )

    @property
    def phases(self) -> np.ndarray:
        """Breakpoints as fractions of pi."""
        return np.array(self.breakpoints) / math.pi

    @property
    def pieces(self) -> int:
        return len(self.values)

    @property
    def M(self) -> float:
        return max(abs(v) for v in self.values)

    @property
    def is_zero(self) -> bool:
        return all(v == 0.0 for v in self.values)

    @property
    def is_two_piece(self) -> bool:
        return self.pieces == 2

    def _require_two_piece(self):
        if not self.is_two_piece:
            raise ValueError("this quantity is defined for two-piece potentials only")

    @property
    def a(self) -> float:
        self._require_two_piece()
        return self.values[0]

    @property
    def b(self) -> float:
        self._require_two_piece()
        return self.values[1]

    @property
    def c(self) -> float:
        self._require_two_piece()
        return self.breakpoints[1]

    @property
    def jump(self) -> float:
        """b - a for the two-piece case, 0 for the zero potential."""
        if self.is_zero:
            return 0.0
        return self.b - self.a

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        idx = np.clip(idx, 0, self.pieces - 1)
        out = np.asarray(self.values)[idx]
        return out if out.ndim else float(out)


def zero_potential() -> StepPotential:
    return StepPotential((0.0, math.pi), (0.0,))


def make_kronig_penney(jump: float, c: float) -> StepPotential:
    """Two-piece mean-zero potential with b - a = jump and the step at c."""
    if not jump > 0:
        raise ValueError(f"jump must be positive, got {jump}")
    if not 0 < c < math.pi:
        raise ValueError(f"c must lie in (0, pi), got {c}")
    a = -jump * (math.pi - c) / math.pi
    b = jump * c / math.pi
    return StepPotential((0.0, c, math.pi), (a, b))


def from_levels(a: float, b: float, c: float) -> StepPotential:
    """Two-piece potential from explicit levels; rejects a >= b or nonzero mean."""
    if not a < 0 < b:
        raise ValueError(f"need a < 0 < b, got a={a}, b={b}")
    if not 0 < c < math.pi:
        raise ValueError(f"c must lie in (0, pi), got {c}")
    return StepPotential((0.0, c, math.pi), (a, b))


def from_pieces(pieces) -> StepPotential:
    """Build from ``[[x1, v1], [x2, v2], ...]`` where x_j ends piece j."""
    pieces = [(float(x), float(v)) for x, v in pieces]
    if not pieces:
        raise ValueError("at least one piece is required")
    xs = [0.0] + [x for x, _ in pieces]
    if abs(xs[-1] - math.pi) <= 1e-12:
        xs[-1] = math.pi
    return StepPotential(tuple(xs), tuple(v for _, v in pieces))


def _jumps(q: StepPotential):
    """Interior breakpoint phases and the value jump (left - right) there."""
    vals = q.values
    return q.phases[1:-1], np.array([vals[j] - vals[j + 1] for j in range(len(vals) - 1)])


def cosine_coeffs(q: StepPotential, ks) -> np.ndarray:
    """C_k = (1/pi) int q(x) cos(kx) dx for an array of integers k."""
    ks = np.asarray(ks, dtype=np.int64)
    out = np.zeros(ks.shape, dtype=float)
    t, dv = _jumps(q)
    nz = ks != 0
    k = ks[nz].astype(float)
    acc = np.zeros(k.shape)
    for tj, dj in zip(t, dv):
        acc += dj * sinpi(k * tj)
    out[nz] = acc / (np.pi * k)
    return out


def cosine_coeff(q: StepPotential, k: int) -> float:
    return float(cosine_coeffs(q, [k])[0])


def sine_coeff(q: StepPotential, k: int) -> float:
    """S_k = (1/pi) int q(x) sin(kx) dx, so that q_k = C_k - i S_k."""
    if k == 0:
        return 0.0
    t, dv = _jumps(q)
    vals = q.values
    # antiderivative -cos(kx)/k, endpoints 0 and pi handled exactly
    acc = vals[0] - vals[-1] * (1.0 if k % 2 == 0 else -1.0)
    acc += math.fsum(-dj * float(cospi(k * tj)) for tj, dj in zip(t, dv))
    return acc / (math.pi * k)


def exp_coeffs(q: StepPotential, ks) -> np.ndarray:
    """q_k = (1/pi) int q(x) exp(-ikx) dx for an array of integers k."""
    ks = np.asarray(ks, dtype=np.int64)
    out = np.zeros(ks.shape, dtype=complex)
    t, dv = _jumps(q)
    vals = q.values
    nz = ks != 0
    k = ks[nz]
    parity = np.where(k % 2 == 0, 1.0, -1.0)
    acc = (vals[0] - vals[-1] * parity).astype(complex)
    kf = k.astype(float)
    for tj, dj in zip(t, dv):
        acc += -dj * _cispi(-kf * tj)
    out[nz] = acc / (1j * np.pi * kf)
    return out


def exp_coeff(q: StepPotential, k: int) -> complex:
    return complex(exp_coeffs(q, [k])[0])


def primitive(q: StepPotential, x: float) -> float:
    """Q(x) = int_0^x q, exact and piecewise linear."""
    if not 0.0 <= x <= math.pi:
        raise ValueError(f"x must lie in [0, pi], got {x}")
    terms = []
    for v, lo, hi in zip(q.values, q.breakpoints, q.breakpoints[1:]):
        if x <= lo:
            break
        terms.append(v * (min(x, hi) - lo))
    return math.fsum(terms)


def reflect(q: StepPotential) -> StepPotential:
    """p(x) = q(pi - x): pieces mirrored about pi/2, so p_k = q_{-k}."""
    bp = tuple(math.pi - x for x in reversed(q.breakpoints))
    bp = (0.0,) + bp[1:-1] + (math.pi,)
    return StepPotential(bp, tuple(reversed(q.values)))
