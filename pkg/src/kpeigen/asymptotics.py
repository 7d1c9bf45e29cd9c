"""Second-order asymptotics of the Dirichlet eigenvalues of step potentials.

Notation (n fixed, omega = 2n):

    I(x)    = int_0^x q(t) exp(i omega t) dt
    Q(x, n) = I(x) - q_{-2n} x,           Q_{n,0} = (1/pi) int_0^pi Q(x, n) dx
    G(x, n) = I(x) + (pi/2) q_{-2n} (exp(ix) - 1)
    D(n, f) = i/(4 pi n) int_0^pi f(x) [(Q(x, n) - Q_{n,0}) + G(x, n)] exp(-i omega x) dx

with q_k = (1/pi) int q exp(-ikx). The weight f is q itself or its mirror image
p(x) = q(pi - x). The mean-zero primitive int_0^x q enters through
B(n) = -(1/pi) int_0^pi (int_0^x q)^2 cos(omega x) dx.

Everything is closed form except D, which uses Gauss-Legendre panels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .potential import (
    StepPotential,
    cosine_coeff,
    cosine_coeffs,
    cospi,
    exp_coeff,
    reflect,
    sinpi,
)

__all__ = [
    "AuxFunctions",
    "aux_functions",
    "eval_aux",
    "DValue",
    "D_functional",
    "B_integral",
    "KPClosedForms",
    "kp_closed_forms",
    "direct_series_A1B1",
    "a_series_closed_form",
    "sharp_estimate",
    "second_order_kp",
    "second_order_kp_corrected",
    "series_second_order_estimate",
    "GL_NODES",
]

GL_NODES = 64
PI = math.pi


@lru_cache(maxsize=None)
def _gauss_legendre(m: int):
    return np.polynomial.legendre.leggauss(m)


def _cis_phase(phase):
    """exp(i pi phase), exact where phase is a multiple of 1/2."""
    return cospi(phase) + 1j * sinpi(phase)


@dataclass(frozen=True)
class AuxFunctions:
    """Q(., n), G(., n) and Q_{n,0} for a fixed potential and index."""

    q: StepPotential
    n: int
    q_minus_2n: complex
    Q_mean: complex

    def integral(self, x):
        """I(x) = int_0^x q(t) exp(2int) dt, vectorised over x."""
        x = np.asarray(x, dtype=float)
        w = 2 * self.n
        out = np.zeros(x.shape, dtype=complex)
        for v, lo, hi in zip(self.q.values, self.q.breakpoints, self.q.breakpoints[1:]):
            if v == 0.0:
                continue
            top = np.clip(x, lo, hi)
            out += v * (_cis_phase(w * top / PI) - _cis_phase(w * lo / PI)) / (1j * w)
        return out

    def Q(self, x):
        x = np.asarray(x, dtype=float)
        return self.integral(x) - self.q_minus_2n * x

    def G(self, x):
        x = np.asarray(x, dtype=float)
        return self.integral(x) + (PI / 2) * self.q_minus_2n * (np.exp(1j * x) - 1.0)


def _mean_of_integral(q: StepPotential, n: int) -> complex:
    """(1/pi) int_0^pi I(x) dx = (1/pi) int_0^pi q(t) (pi - t) exp(i w t) dt."""
    w = 2 * n
    total = 0j
    for v, lo, hi in zip(q.values, q.breakpoints, q.breakpoints[1:]):
        if v == 0.0:
            continue
        # antiderivative of (pi - t) e^{iwt}: (pi - t) e^{iwt}/(iw) - e^{iwt}/w^2
        def F(t):
            e = complex(_cis_phase(w * t / PI))
            return (PI - t) * e / (1j * w) - e / (w * w)

        total += v * (F(hi) - F(lo))
    return total / PI


def aux_functions(q: StepPotential, n: int) -> AuxFunctions:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    qm = exp_coeff(q, -2 * n)
    mean = _mean_of_integral(q, n) - qm * PI / 2
    return AuxFunctions(q, n, qm, mean)


def eval_aux(q: StepPotential, n: int, x: float) -> tuple[complex, complex]:
    """(Q(x, n), G(x, n)) from per-piece closed forms."""
    if not 0.0 <= x <= PI:
        raise ValueError(f"x must lie in [0, pi], got {x}")
    aux = aux_functions(q, n)
    return complex(aux.Q(x)), complex(aux.G(x))


@dataclass(frozen=True)
class DValue:
    d1: complex
    d2: complex

    @property
    def total(self) -> complex:
        return self.d1 + self.d2


def _panels(q: StepPotential, f: StepPotential, n: int) -> np.ndarray:
    cuts = sorted(set(q.breakpoints) | set(f.breakpoints))
    h = PI / (2 * n)
    edges = [cuts[0]]
    for lo, hi in zip(cuts, cuts[1:]):
        m = max(1, math.ceil((hi - lo) / h))
        edges.extend(np.linspace(lo, hi, m + 1)[1:])
    return np.asarray(edges)


def D_functional(q: StepPotential, f: StepPotential, n: int, nodes: int = GL_NODES) -> DValue:
    """D(n, f) split into its Q-part and G-part, by panel Gauss-Legendre.

    Panels follow the breakpoints of both q and f and are at most pi/(2n) long.
    """
    aux = aux_functions(q, n)
    if q.is_zero or f.is_zero:
        return DValue(0j, 0j)
    t, wt = _gauss_legendre(nodes)
    edges = _panels(q, f, n)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = (hi - lo) / 2
    x = (lo + hi) / 2 + half * t[None, :]
    w = (half * wt[None, :]).ravel()
    x = x.ravel()
    kernel = np.asarray(f(x)) * np.exp(-2j * n * x) * w
    scale = 1j / (4 * n * PI)
    d1 = scale * np.sum(kernel * (aux.Q(x) - aux.Q_mean))
    d2 = scale * np.sum(kernel * aux.G(x))
    return DValue(complex(d1), complex(d2))


def B_integral(q: StepPotential, n: int) -> float:
    """-(1/pi) int_0^pi P(x)^2 cos(2nx) dx with P(x) = int_0^x q, exactly.

    P is linear on each piece, so each piece integrates a quadratic against
    cos: int p cos(wx) = p sin/w + p' cos/w^2 - p'' sin/w^3.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    w = 2 * n
    terms = []
    start = 0.0  # P at the left end of the piece
    for v, lo, hi in zip(q.values, q.breakpoints, q.breakpoints[1:]):
        # p(x) = (start + v (x - lo))^2
        for x, sign in ((hi, 1.0), (lo, -1.0)):
            y = start + v * (x - lo)
            p, dp, ddp = y * y, 2 * v * y, 2 * v * v
            s = float(sinpi(w * x / PI))
            c = float(cospi(w * x / PI))
            terms += [sign * p * s / w, sign * dp * c / w**2, -sign * ddp * s / w**3]
        start += v * (hi - lo)
    return -math.fsum(terms) / PI


@dataclass(frozen=True)
class KPClosedForms:
    """Term-by-term closed forms for the two-piece potential.

    ``combined`` approximates lambda_n - n^2 and is complex as written.
    """

    n: int
    d1q: complex
    d2q: complex
    Dq: complex
    d1p: complex
    d2p: complex
    Dp: complex
    B: float
    combined: complex


def kp_closed_forms(q: StepPotential, n: int) -> KPClosedForms:
    if not q.is_two_piece:
        raise ValueError("closed forms exist for two-piece potentials only")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    a, b = q.a, q.b
    phase = q.phases[1]  # c / pi
    pi = PI
    m = 2 * n - 1
    s2 = float(sinpi(2 * n * phase))
    c2 = float(cospi(2 * n * phase))
    c4 = float(cospi(4 * n * phase))
    e2 = complex(_cis_phase(2 * n * phase))  # e^{i 2nc}
    em2 = e2.conjugate()  # e^{-i 2nc}
    e1 = complex(_cis_phase(phase))  # e^{ic}
    em = complex(_cis_phase(m * phase))  # e^{i(2n-1)c}
    s_m = float(sinpi(m * phase))
    s_4m = float(sinpi((4 * n - 1) * phase))
    c_4m = float(cospi((4 * n - 1) * phase))
    ba, b2a2 = b - a, b * b - a * a

    d1q = -a * b / (8 * n**2) + b2a2 * s2 / (16 * pi * n**3) - ba**2 * (1 - c2) / (8 * pi**2 * n**4)
    d2q = (
        -a * b / (8 * n**2)
        + 1j * b2a2 * (em2 - 1) / (16 * pi * n**3)
        - 1j * b * ba * (1 - em2) * (e2 + e1) / (16 * n**2 * m)
        + 1j * b * ba * (c2 - 1) / (16 * n**3)
        + ba**2 * (c2 - 1) / (32 * pi * n**4)
        + ba * (em2 - 1) * ((b + a) * e2 + ba * e1) / (16 * pi * n**2 * m**2)
    )
    Dq = (
        -a * b / (4 * n**2)
        + b2a2 * s2 / (8 * pi * n**3)
        - ba**2 * (1 - c2) / (8 * pi**2 * n**4)
        + 1j * b2a2 * (c2 - 1) / (16 * pi * n**3)
        + 1j * b * ba * (c2 - 1) / (16 * n**3)
        - 1j * b * ba * (1 - em2) * (e2 + e1) / (16 * n**2 * m)
        + ba**2 * (c2 - 1) / (32 * pi * n**4)
        + ba * (em2 - 1) * ((b + a) * e2 + ba * e1) / (16 * pi * n**2 * m**2)
    )
    sq = (e2 - 1) ** 2
    d1p = a * b / (8 * n**2) - 1j * ba * (b + 3 * a) * sq / (32 * pi * n**3) + ba**2 * sq / (16 * pi**2 * n**4)
    d2p = (
        a * b / (8 * n**2)
        + 1j * ba * (1 - em) * (e2 - 1) / (16 * n**2 * m)
        + (b2a2 + ba**2 * em) * (e2 - 1) / (16 * pi * n**2 * m**2)
        - 1j * a * ba * sq / (32 * n**3)
        + ba**2 * sq / (64 * pi * n**4)
        + 1j * a * ba * sq / (16 * pi * n**3)
    )
    Dp = (
        a * b / (4 * n**2)
        + 1j * (a * a - b * b) * sq / (32 * pi * n**3)
        + 1j * ba * (1 - em) * (e2 - 1) / (16 * n**2 * m)
        - 1j * a * ba * sq / (32 * n**3)
        + ba**2 * sq / (64 * pi * n**4)
        + ba**2 * sq / (16 * pi**2 * n**4)
        + (b2a2 + ba**2 * em) * (e2 - 1) / (16 * pi * n**2 * m**2)
    )
    B = a * b * c2 / (2 * n**2) - b2a2 * s2 / (4 * pi * n**3)
    combined = (
        ba * s2 / (2 * pi * n)
        + a * b * (1 - 2 * c2) / (4 * n**2)
        + ba * (c2 - 1) * (2 * a * s2 + 1j * b) / (16 * n**3)
        + b2a2 * (2 * s2 * (2 + c2) + 1j * (c2 - 1)) / (16 * pi * n**3)
        + ba**2 * c2 * (c2 - 1) / (16 * pi**2 * n**4)
        - (-ba * (2 * (s2 + s_m - s_4m) + 1j * b * (1 - em2) * (e2 + e1))) / (16 * n**2 * m)
        + ba**2 * (c4 - c2) / (32 * pi * n**4)
        + (b2a2 * (em2 - 1) - ba**2 * (e1 + em - 2 * c_4m)) / (16 * pi * n**2 * m**2)
    )
    return KPClosedForms(n, d1q, d2q, Dq, d1p, d2p, Dp, B, combined)


def direct_series_A1B1(q: StepPotential, n: int, cutoff: int = 10**6) -> tuple[float, float]:
    """Partial sums over 0 < |k| <= cutoff, k != -2n, of

        A = sum C_k^2 / (n^2 - (n+k)^2),   B = sum C_k C_{k+2n} / (n^2 - (n+k)^2).
    """
    if cutoff < 10 * n:
        raise ValueError(f"cutoff must be >= 10 n = {10 * n}")
    k = np.arange(-cutoff, cutoff + 1, dtype=np.int64)
    k = k[(k != 0) & (k != -2 * n)]
    den = (-k * (2 * n + k)).astype(float)
    Ck = cosine_coeffs(q, k)
    Cs = cosine_coeffs(q, k + 2 * n)
    return math.fsum(Ck * Ck / den), math.fsum(Ck * Cs / den)


def a_series_closed_form(q: StepPotential, n: int) -> complex:
    """C_{2n}^2/(4n^2) + D(n, q) + 2 Re D(n, p), as stated for the A-series."""
    c2n = cosine_coeff(q, 2 * n)
    Dq = D_functional(q, q, n).total
    Dp = D_functional(q, reflect(q), n).total
    return c2n**2 / (4 * n * n) + Dq + 2 * Dp.real


def sharp_estimate(q: StepPotential, n: int) -> float:
    """n^2 - C_{2n} + (1/pi) int P^2 cos 2nx + Re D(n, q) + 2 Re D(n, p).

    The integral term is -B_integral; the direct series fixes this sign.
    """
    if q.is_zero:
        return float(n * n)
    Dq = D_functional(q, q, n).total
    Dp = D_functional(q, reflect(q), n).total
    return math.fsum([n * n, -cosine_coeff(q, 2 * n), -B_integral(q, n), Dq.real, 2 * Dp.real])


def _levels(q: StepPotential):
    if q.is_zero:
        return None
    if not q.is_two_piece:
        raise ValueError("two-piece potential required")
    phase = q.phases[1]
    return q.a, q.b, phase


def second_order_kp(q: StepPotential, n: int) -> float:
    """n^2 + (b-a) sin(2nc)/(2 pi n) + ab (1 - 2 cos 2nc)/(4 n^2)."""
    lv = _levels(q)
    if lv is None:
        return float(n * n)
    a, b, phase = lv
    s2 = float(sinpi(2 * n * phase))
    c2 = float(cospi(2 * n * phase))
    return n * n + (b - a) * s2 / (2 * PI * n) + a * b * (1 - 2 * c2) / (4 * n * n)


def second_order_kp_corrected(q: StepPotential, n: int) -> float:
    """n^2 + (b-a) sin(2nc)/(2 pi n) - ab (1 + 2 cos 2nc)/(4 n^2).

    The A-series is -ab/(4n^2) + O(n^-3) since sum_k |q_k|^2 = -2ab.
    """
    lv = _levels(q)
    if lv is None:
        return float(n * n)
    a, b, phase = lv
    s2 = float(sinpi(2 * n * phase))
    c2 = float(cospi(2 * n * phase))
    return n * n + (b - a) * s2 / (2 * PI * n) - a * b * (1 + 2 * c2) / (4 * n * n)


def series_second_order_estimate(q: StepPotential, n: int, cutoff: int = 10**6) -> float:
    """n^2 - C_{2n} + A - B with A, B the truncated direct series."""
    A, B = direct_series_A1B1(q, n, cutoff)
    return math.fsum([n * n, -cosine_coeff(q, 2 * n), A, -B])
