import cmath
import math

import numpy as np
import pytest
from scipy.integrate import quad

from kpeigen.asymptotics import (
    B_integral,
    D_functional,
    a_series_closed_form,
    aux_functions,
    direct_series_A1B1,
    eval_aux,
    kp_closed_forms,
    second_order_kp,
    second_order_kp_corrected,
    series_second_order_estimate,
    sharp_estimate,
)
from kpeigen.oracle import find_eigenvalue
from kpeigen.potential import cosine_coeff, exp_coeff, exp_coeffs, from_pieces, primitive, reflect

PI = math.pi


def cquad(f, lo, hi, points=None):
    kw = dict(points=points, limit=800, epsabs=1e-14, epsrel=1e-13)
    return quad(lambda x: f(x).real, lo, hi, **kw)[0] + 1j * quad(lambda x: f(x).imag, lo, hi, **kw)[0]


@pytest.fixture
def three_piece():
    return from_pieces([[1.0, 0.3], [2.2, -0.4], [PI, (0.4 * 1.2 - 0.3) / (PI - 2.2)]])


class TestAux:
    @pytest.mark.parametrize("fixture", ["half_kp", "third_kp", "three_piece"])
    def test_endpoints_vanish(self, fixture, request):
        q = request.getfixturevalue(fixture)
        for n in (1, 2, 5, 17):
            for x in (0.0, PI):
                Q, G = eval_aux(q, n, x)
                assert abs(Q) < 1e-12 and abs(G) < 1e-12

    def test_step_form_at_midpoint(self, half_kp):
        n, x = 1, PI / 2
        a = half_kp.a
        expect = a / (2j * n) * (cmath.exp(2j * n * x) - 1) - exp_coeff(half_kp, -2 * n) * x
        integrand = cquad(lambda t: half_kp(t) * cmath.exp(2j * n * t), 0, x)
        Q, _ = eval_aux(half_kp, n, x)
        assert abs(Q - expect) < 1e-14
        assert abs(Q - (integrand - exp_coeff(half_kp, -2 * n) * x)) < 1e-12

    @pytest.mark.parametrize("x", [0.3, 1.1, 2.0, 2.9])
    def test_against_adaptive_quadrature(self, three_piece, x):
        n = 3
        qm = exp_coeff(three_piece, -2 * n)
        pts = [p for p in three_piece.breakpoints[1:-1] if p < x]
        I = cquad(lambda t: three_piece(t) * cmath.exp(2j * n * t), 0, x, pts or None)
        G_direct = cquad(lambda t: three_piece(t) * cmath.exp(2j * n * t) + 1j * PI / 2 * cmath.exp(1j * t) * qm,
                         0, x, pts or None)
        Q, G = eval_aux(three_piece, n, x)
        assert abs(Q - (I - qm * x)) < 1e-12
        assert abs(G - G_direct) < 1e-12

    def test_mean(self, third_kp):
        aux = aux_functions(third_kp, 2)
        mean = cquad(lambda x: complex(aux.Q(x)), 0, PI, [third_kp.c]) / PI
        assert abs(aux.Q_mean - mean) < 1e-12


class TestDFunctional:
    def test_zero(self, zero, half_kp):
        assert D_functional(zero, zero, 3).total == 0
        assert D_functional(half_kp, zero, 3).total == 0

    @pytest.mark.parametrize("n", [2, 4, 6, 10])
    def test_even_index_at_half(self, half_kp, n):
        assert abs(D_functional(half_kp, half_kp, n).total - 1 / (16 * n * n)) < 1e-12

    @pytest.mark.parametrize("n", [1, 3, 8])
    def test_against_adaptive_quadrature(self, third_kp, n):
        aux = aux_functions(third_kp, n)
        for f in (third_kp, reflect(third_kp)):
            pts = sorted(set(third_kp.breakpoints[1:-1]) | set(f.breakpoints[1:-1]))
            k = lambda x: f(x) * cmath.exp(-2j * n * x) * 1j / (4 * n * PI)
            d1 = cquad(lambda x: k(x) * (complex(aux.Q(x)) - aux.Q_mean), 0, PI, pts)
            d2 = cquad(lambda x: k(x) * complex(aux.G(x)), 0, PI, pts)
            got = D_functional(third_kp, f, n)
            assert abs(got.d1 - d1) < 1e-11 and abs(got.d2 - d2) < 1e-11

    @pytest.mark.parametrize("fixture", ["half_kp", "third_kp", "three_piece"])
    def test_series_representation(self, fixture, request):
        # D(n, f) = (1/4n) sum_{k != 0, -2n} q_k f_{-k}/(2n+k) + (i pi/8n) q_{-2n} f_{2n-1}
        q = request.getfixturevalue(fixture)
        K = 100000
        for n in (1, 2, 3):
            k = np.arange(-K, K + 1)
            k = k[(k != 0) & (k != -2 * n)]
            for f in (q, reflect(q)):
                tail = 1j * PI / (8 * n) * exp_coeff(q, -2 * n) * exp_coeff(f, 2 * n - 1)
                series = np.sum(exp_coeffs(q, k) * exp_coeffs(f, -k) / (2 * n + k)) / (4 * n) + tail
                assert abs(D_functional(q, f, n).total - series) < 1e-9

    @pytest.mark.parametrize("fixture", ["half_kp", "third_kp"])
    def test_first_part_matches_closed_form(self, fixture, request):
        q = request.getfixturevalue(fixture)
        for n in range(1, 41):
            assert abs(D_functional(q, q, n).d1 - kp_closed_forms(q, n).d1q) < 1e-10

    @pytest.mark.xfail(strict=True, reason="closed form for the G-part disagrees with quadrature; see ledger")
    def test_total_matches_closed_form_n3(self, half_kp):
        assert abs(D_functional(half_kp, half_kp, 3).total - kp_closed_forms(half_kp, 3).Dq) < 1e-10

    @pytest.mark.xfail(strict=True, reason="closed form for the mirrored weight disagrees with quadrature; see ledger")
    def test_mirror_matches_closed_form_n1(self, third_kp):
        assert abs(D_functional(third_kp, reflect(third_kp), 1).total - kp_closed_forms(third_kp, 1).Dp) < 1e-10


class TestBIntegral:
    def test_half_n1(self, half_kp):
        assert B_integral(half_kp, 1) == pytest.approx(1 / 8, abs=1e-15)

    def test_zero(self, zero):
        assert B_integral(zero, 4) == 0.0

    @pytest.mark.parametrize("n", range(1, 9))
    def test_closed_form(self, third_kp, n):
        assert B_integral(third_kp, n) == pytest.approx(kp_closed_forms(third_kp, n).B, abs=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_against_quadrature(self, three_piece, n):
        val = quad(lambda x: primitive(three_piece, x) ** 2 * math.cos(2 * n * x), 0, PI,
                   points=three_piece.breakpoints[1:-1], limit=400, epsabs=1e-15)[0]
        assert B_integral(three_piece, n) == pytest.approx(-val / PI, abs=1e-12)

    @pytest.mark.parametrize("fixture", ["half_kp", "third_kp"])
    def test_direct_series(self, fixture, request):
        q = request.getfixturevalue(fixture)
        for n in range(1, 7):
            assert abs(direct_series_A1B1(q, n, 10**6)[1] - B_integral(q, n)) < 2e-6


class TestDirectSeries:
    def test_zero(self, zero):
        assert direct_series_A1B1(zero, 2, 100) == (0.0, 0.0)

    def test_cutoff_guard(self, half_kp):
        with pytest.raises(ValueError):
            direct_series_A1B1(half_kp, 5, 20)

    def test_mean_square_limit(self, half_kp):
        # sum_k |q_k|^2 = -2ab, so the A-series tends to -ab/(4n^2)
        n = 40
        A, _ = direct_series_A1B1(half_kp, n, 10**6)
        assert n**3 * abs(A - 1 / (16 * n * n)) < 0.05

    @pytest.mark.parametrize("fixture", ["half_kp", "third_kp", "three_piece"])
    def test_exponential_form(self, fixture, request):
        # A = -C_2n^2/(4n^2) + (1/4n) sum |q_k|^2/(2n+k) + (1/4n) Re sum q_k^2/(2n+k)
        q = request.getfixturevalue(fixture)
        K = 10**5
        for n in (1, 2, 5):
            k = np.arange(-K, K + 1)
            k = k[(k != 0) & (k != -2 * n)]
            qk = exp_coeffs(q, k)
            rhs = (-cosine_coeff(q, 2 * n) ** 2 / (4 * n * n)
                   + math.fsum((np.abs(qk) ** 2 / (2 * n + k)).tolist()) / (4 * n)
                   + np.sum(qk**2 / (2 * n + k)).real / (4 * n))
            assert direct_series_A1B1(q, n, K)[0] == pytest.approx(rhs, abs=1e-15)

    @pytest.mark.xfail(strict=True, reason="stated closed expression for the A-series is off by ~0.06 at n=1; see ledger")
    def test_a_series_closed_form(self, half_kp):
        A, _ = direct_series_A1B1(half_kp, 1, 10**6)
        assert abs(A - a_series_closed_form(half_kp, 1)) < 2e-6


class TestClosedForms:
    def test_rejects_multi_piece(self, three_piece):
        with pytest.raises(ValueError):
            kp_closed_forms(three_piece, 2)

    @pytest.mark.parametrize("n", [2, 4, 8])
    def test_even_index_at_half(self, half_kp, n):
        kp = kp_closed_forms(half_kp, n)
        assert kp.Dq == pytest.approx(1 / (16 * n * n), abs=1e-16)
        assert kp.B == pytest.approx(-1 / (8 * n * n), abs=1e-16)

    def test_B_n1(self, half_kp):
        assert kp_closed_forms(half_kp, 1).B == 1 / 8

    @pytest.mark.xfail(strict=True, reason="combined closed form disagrees with the direct series by ~0.02; see ledger")
    def test_combined_vs_direct_series(self, third_kp):
        n = 4
        A, B = direct_series_A1B1(third_kp, n, 10**6)
        direct = -cosine_coeff(third_kp, 2 * n) + A - B
        assert abs(kp_closed_forms(third_kp, n).combined - direct) < 1e-5

    @pytest.mark.xfail(strict=True, reason="combined closed form carries imaginary terms; see ledger")
    def test_combined_is_real(self, third_kp):
        assert abs(kp_closed_forms(third_kp, 1).combined.imag) <= 1e-10


class TestEstimates:
    def test_zero(self, zero):
        for n in (1, 3):
            assert sharp_estimate(zero, n) == n * n
            assert second_order_kp(zero, n) == n * n
            assert second_order_kp_corrected(zero, n) == n * n
            assert series_second_order_estimate(zero, n, 100) == n * n

    def test_two_term_exact_values(self, half_kp):
        assert second_order_kp(half_kp, 10) == 100.000625
        assert second_order_kp(half_kp, 1) == 0.8125

    def test_two_term_requires_two_pieces(self, three_piece):
        with pytest.raises(ValueError):
            second_order_kp(three_piece, 3)

    def test_series_estimate_identity(self, half_kp):
        A, B = direct_series_A1B1(half_kp, 1, 10**6)
        expect = 1 - cosine_coeff(half_kp, 2) + A - B
        assert series_second_order_estimate(half_kp, 1, 10**6) == pytest.approx(expect, abs=1e-15)

    @pytest.mark.xfail(strict=True, reason="integral form disagrees with the direct series; see ledger")
    def test_series_estimate_vs_sharp(self, half_kp):
        assert abs(series_second_order_estimate(half_kp, 5, 10**6) - sharp_estimate(half_kp, 5)) <= 5e-6

    @pytest.mark.xfail(strict=True, reason="integral form and closed form disagree; see ledger")
    def test_sharp_vs_combined(self, third_kp):
        n = 5
        assert abs(sharp_estimate(third_kp, n) - (n * n + kp_closed_forms(third_kp, n).combined)) < 1e-9

    @pytest.mark.parametrize("fixture", ["half_kp", "third_kp"])
    def test_corrected_two_term_cubic_residual(self, fixture, request):
        q = request.getfixturevalue(fixture)
        worst = [max(n**3 * abs(find_eigenvalue(q, n).value - second_order_kp_corrected(q, n))
                     for n in range(lo, 2 * lo + 1)) for lo in (8, 16, 32)]
        assert max(worst) < 0.5
        assert worst[-1] <= 1.25 * worst[0]

    def test_series_estimate_tracks_truth(self, half_kp):
        for n in range(2, 7):
            truth = find_eigenvalue(half_kp, n).value
            assert abs(series_second_order_estimate(half_kp, n, 10**5) - truth) < 2 / n**3
