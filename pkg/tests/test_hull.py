import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from isoeof.hull import (
    conjectured_knee,
    conjectured_slope,
    knee_scan,
    lower_hull,
    numeric_envelope,
    piecewise_eof,
    second_derivative_probe,
    tangency_residual,
    tangent_knee,
    verify_conjecture,
)
from isoeof.rcurve import r1, r1_derivative


def chord_slope_oracle(d):
    """Smallest slope of a line through (1, log2 d) that stays below R.

    That is the maximum over F of (log2 d - R(F)) / (1 - F), found by a dense
    scan followed by bounded Brent refinement.
    """
    L = np.log2(d)
    f = lambda F: -(L - r1(d, F)) / (1 - F)  # noqa: E731
    grid = np.linspace(1 / d + 1e-6, 1 - 1e-6, 20001)
    i = int(np.argmin([f(F) for F in grid]))
    res = minimize_scalar(f, bounds=(grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]),
                          method="bounded", options={"xatol": 1e-12})
    return res.x, -res.fun


class TestTangentKnee:
    def test_d3(self):
        knee, slope = tangent_knee(3, 1e-8)
        assert knee == pytest.approx(8 / 9, abs=1e-8)
        assert slope == pytest.approx(3.0, abs=1e-8)

    def test_d4(self):
        knee, slope = tangent_knee(4, 1e-8)
        assert knee == pytest.approx(0.75, abs=1e-8)
        assert slope == pytest.approx(2 * np.log2(3), abs=1e-8)

    def test_d5(self):
        knee, slope = tangent_knee(5, 1e-8)
        assert knee == pytest.approx(16 / 25, abs=1e-8)
        assert slope == pytest.approx(10 / 3, abs=1e-8)

    @pytest.mark.parametrize("d", range(3, 9))
    def test_agrees_with_chord_oracle(self, d):
        knee, slope = tangent_knee(d, 1e-8)
        knee_o, slope_o = chord_slope_oracle(d)
        # The chord maximum is flat at the knee, so its location is soft.
        assert knee == pytest.approx(knee_o, abs=1e-5)
        assert slope == pytest.approx(slope_o, abs=1e-9)

    @pytest.mark.parametrize("d", range(3, 9))
    def test_tangency_residuals(self, d):
        tol = 1e-8
        knee, slope = tangent_knee(d, tol)
        assert abs(r1(d, knee) - (slope * knee + np.log2(d) - slope)) < tol
        assert abs(r1_derivative(d, knee) - slope) < tol

    @pytest.mark.parametrize("d", range(3, 9))
    def test_single_sign_change(self, d):
        _, signs = knee_scan(d, points=10_000, margin=1e-6)
        assert np.all(signs != 0)
        assert np.count_nonzero(signs[1:] != signs[:-1]) == 1

    def test_rejects_d2(self):
        with pytest.raises(ValueError):
            tangent_knee(2, 1e-8)
        # The residual never changes sign for two qubits.
        F = np.linspace(0.5 + 1e-6, 1 - 1e-6, 2000)
        assert np.all(tangency_residual(2, F) < 0)


class TestLowerHull:
    def test_square_points(self):
        x = np.array([0.0, 1.0, 2.0, 3.0])
        y = np.array([0.0, -1.0, 5.0, 0.0])
        assert list(lower_hull(x, y)) == [0, 1, 3]

    def test_convex_keeps_all(self):
        x = np.linspace(-1, 1, 21)
        assert len(lower_hull(x, x**2)) == 21


class TestNumericEnvelope:
    def test_two_qubit_is_curve(self):
        env = numeric_envelope(2, 10_000)
        np.testing.assert_allclose(env(env.grid_F), env.grid_R, atol=1e-8)
        # Discrete convexity of H2(1/2 + sqrt(F(1-F))) on the grid.
        assert np.all(np.diff(env.grid_R, 2) >= -1e-12)

    def test_d3_knee(self):
        env = numeric_envelope(3, 10_000)
        assert abs(env.knee_F - 8 / 9) <= 2 * env.grid_step
        assert env.slope_bits == pytest.approx(3.0, abs=1e-3)

    def test_d6_structure(self):
        env = numeric_envelope(6, 10_000)
        knee, slope = tangent_knee(6, 1e-8)
        assert abs(env.knee_F - knee) <= 2 * env.grid_step
        below = env.grid_F <= env.knee_F
        np.testing.assert_allclose(env(env.grid_F[below]), env.grid_R[below], atol=1e-12)
        above = env.grid_F[env.grid_F >= env.knee_F]
        line = env(env.knee_F) + env.slope_bits * (above - env.knee_F)
        np.testing.assert_allclose(env(above), line, atol=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 4, 7])
    def test_invariants(self, d):
        env = numeric_envelope(d, 5_000)
        E = env(env.grid_F)
        assert np.all(E <= env.grid_R + 1e-10)
        assert np.all(np.diff(E, 2) >= -1e-8)
        assert env(1.0) == pytest.approx(np.log2(d), abs=1e-10)
        assert env(1 / d) == 0.0
        assert env.analytic_interval == (1 / d, env.knee_F)
        assert env.line_interval == (env.knee_F, 1.0)

    def test_grid_floor(self):
        with pytest.raises(ValueError):
            numeric_envelope(3, 50)


class TestSecondDerivative:
    def test_convex_region(self):
        assert second_derivative_probe(3, 0.5, 1e-4) > 0

    def test_concave_near_one(self):
        assert second_derivative_probe(3, 0.99, 1e-4) < 0

    def test_diverges_toward_one(self):
        vals = [second_derivative_probe(3, 1 - 2.0**-k, 1e-4) for k in range(4, 11)]
        assert np.all(np.diff(vals) < 0)
        assert vals[-1] < -10

    @pytest.mark.parametrize("F, h", [(0.3334, 1e-3), (0.99995, 1e-4), (0.5, 0.0)])
    def test_stencil_bounds(self, F, h):
        with pytest.raises(ValueError):
            second_derivative_probe(3, F, h)


class TestConjecture:
    def test_closed_forms(self):
        assert conjectured_knee(3) == pytest.approx(8 / 9)
        assert conjectured_slope(3) == pytest.approx(3.0)

    def test_knee_sits_on_curve(self):
        # At F = 4(d-1)/d^2 the optimal vector is {(d-1)/d, 1/(d(d-1)), ...}.
        for d in range(3, 9):
            F = conjectured_knee(d)
            line = conjectured_slope(d) * (F - 1) + np.log2(d)
            assert r1(d, F) == pytest.approx(line, abs=1e-13)

    def test_d3(self):
        rep = verify_conjecture(3, 1e-8)
        assert rep.passed
        assert abs(rep.knee_numeric - 8 / 9) < 1e-8

    @pytest.mark.parametrize("d", range(4, 9))
    def test_higher_d(self, d):
        rep = verify_conjecture(d, 1e-7)
        assert rep.passed, rep

    def test_negative_control(self):
        rep = verify_conjecture(3, 1e-8, knee=8 / 9 + 1e-3, slope=3.01)
        assert not rep.passed
        assert rep.max_envelope_deviation_bits > 1e-5

    def test_report_keys(self):
        keys = set(verify_conjecture(3, 1e-8, grid_points=1000).as_dict())
        assert keys == {
            "d", "knee_numeric", "knee_conjectured", "slope_numeric_bits",
            "slope_conjectured_bits", "max_envelope_deviation_bits", "pass",
        }

    def test_piecewise_shape(self):
        d = 4
        assert piecewise_eof(d, 0.2) == 0.0
        assert piecewise_eof(d, 0.5) == pytest.approx(r1(d, 0.5))
        assert piecewise_eof(d, 1.0) == pytest.approx(2.0)
        with pytest.raises(ValueError):
            piecewise_eof(2, 0.7)
