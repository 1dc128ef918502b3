import math

import numpy as np
import pytest
from pydantic import ValidationError

from cavity.errors import InvalidParametersError, StepSizeError
from cavity.fock import ModelParams, choose_truncation, coherent_coeffs, fock_state
from cavity.oracle import IntegratorConfig, integrate_passage, integrate_series, resolved_step
from cavity.solver import passage_series, project_ground, run_cascade

N_MAX_25 = choose_truncation(25.0, 1e-12)

QUADRANTS = [
    {"delta1": 0.0, "delta2": 0.0, "nonlinearity": "one"},
    {"delta1": 7.0, "delta2": 15.0, "nonlinearity": "one"},
    {"delta1": 0.0, "delta2": 0.0, "nonlinearity": "sqrt"},
    {"delta1": 7.0, "delta2": 15.0, "nonlinearity": "sqrt"},
]


def _max_diff(first, second):
    return max(
        float(np.max(np.abs(first.a - second.a))),
        float(np.max(np.abs(first.b - second.b))),
        float(np.max(np.abs(first.c - second.c))),
    )


def test_integrator_config_bounds():
    assert IntegratorConfig().dt is None
    assert IntegratorConfig().steps_per_period == 400
    assert IntegratorConfig(dt=1e-3).dt == pytest.approx(1e-3)
    with pytest.raises(ValidationError):
        IntegratorConfig(dt=0.0)
    with pytest.raises(ValidationError):
        IntegratorConfig(dt=0.02)
    with pytest.raises(ValidationError):
        IntegratorConfig(method="euler")


def test_default_step_is_capped_for_slow_levels():
    """Testa passo padrão igual a oracle_dt quando 1/400 do período é maior"""
    field = coherent_coeffs(2.0, 30)
    params = ModelParams(lambda1=0.9, n_max=30, nonlinearity="one")
    assert resolved_step(field, params) == pytest.approx(1e-3)


@pytest.mark.parametrize("delta1, delta2", [(0.0, 0.0), (7.0, 15.0)])
def test_default_step_resolves_fastest_sqrt_level(delta1, delta2):
    """Testa 400 passos por período do nível mais rápido com f(n) = sqrt(n)"""
    field = coherent_coeffs(5.0, N_MAX_25)
    params = ModelParams(lambda1=0.9, delta1=delta1, delta2=delta2, n_max=N_MAX_25, nonlinearity="sqrt")
    fastest = math.sqrt(0.81 + 1.0) * (N_MAX_25 + 1) + max(delta1, delta2)
    step = resolved_step(field, params)
    assert step == pytest.approx(2 * math.pi / (400 * fastest), rel=1e-12)
    assert step < 2.5e-4


def test_explicit_step_wins():
    field = coherent_coeffs(5.0, N_MAX_25)
    params = ModelParams(lambda1=0.9, n_max=N_MAX_25, nonlinearity="sqrt")
    assert resolved_step(field, params, IntegratorConfig(dt=0.005)) == 0.005


def test_zero_time_returns_initial_state():
    field = coherent_coeffs(2.0, 30)
    params = ModelParams(lambda1=0.9, n_max=30, nonlinearity="one")
    state = integrate_passage(field, params, 0.0)
    np.testing.assert_allclose(state.a, field.coeffs / math.sqrt(2), atol=0)
    np.testing.assert_allclose(state.c, 0.0, atol=0)


def test_negative_times_are_rejected():
    field = fock_state(0, 2)
    params = ModelParams(lambda1=1.0, n_max=2, nonlinearity="one")
    with pytest.raises(InvalidParametersError):
        integrate_series(field, params, [1.0, -0.5])


def test_single_level_matches_analytic_solution():
    """Testa A = cos(sqrt2 tau)/sqrt2, C = -i sin(sqrt2 tau) para l1 = l2 = 1 em ressonância"""
    field = fock_state(0, 1)
    params = ModelParams(lambda1=1.0, lambda2=1.0, n_max=1, nonlinearity="one")
    taus = [0.0, 0.4, 1.3, 3.7]
    for tau, state in zip(taus, integrate_series(field, params, taus)):
        w = math.sqrt(2.0) * tau
        assert abs(state.a[0] - math.cos(w) / math.sqrt(2.0)) < 1e-8
        assert abs(state.b[0] - math.cos(w) / math.sqrt(2.0)) < 1e-8
        assert abs(state.c[0] - (-1j * math.sin(w))) < 1e-8


def test_results_follow_input_order():
    field = coherent_coeffs(1.0, 20)
    params = ModelParams(lambda1=0.9, n_max=20, nonlinearity="one")
    shuffled = integrate_series(field, params, [2.0, 0.5, 1.0])
    assert [s.tau for s in shuffled] == [2.0, 0.5, 1.0]
    ordered = integrate_series(field, params, [0.5, 1.0, 2.0])
    assert _max_diff(shuffled[0], ordered[2]) < 1e-14


def test_rk4_converges_at_fourth_order():
    """Testa razão de Richardson próxima de 16 ao reduzir dt pela metade"""
    field = coherent_coeffs(5.0, N_MAX_25)
    params = ModelParams(lambda1=0.9, delta1=7.0, delta2=15.0, n_max=N_MAX_25, nonlinearity="one")
    coarse, medium, fine = (
        integrate_series(field, params, [2.0], IntegratorConfig(dt=dt), drift_tol=1.0)[0]
        for dt in (0.004, 0.002, 0.001)
    )
    ratio = _max_diff(coarse, medium) / _max_diff(medium, fine)
    assert 12.0 <= ratio <= 22.0


def test_coarse_step_is_reported():
    """Testa StepSizeError quando dt é grande demais para f(n) = sqrt(n)"""
    field = coherent_coeffs(5.0, N_MAX_25)
    params = ModelParams(lambda1=0.9, n_max=N_MAX_25, nonlinearity="sqrt")
    with pytest.raises(StepSizeError):
        integrate_passage(field, params, 5.0, IntegratorConfig(dt=0.01))


@pytest.mark.slow
@pytest.mark.parametrize("quadrant", QUADRANTS)
def test_closed_form_agrees_with_oracle(quadrant):
    """Testa concordância < 1e-6 entre forma fechada e RK4 com o passo padrão nos quatro quadrantes"""
    field = coherent_coeffs(5.0, N_MAX_25)
    params = ModelParams(lambda1=0.9, n_max=N_MAX_25, **quadrant)
    taus = np.arange(0, 51) * 0.5
    closed = passage_series(field, params, taus)
    oracle = integrate_series(field, params, taus)
    for exact, numeric in zip(closed, oracle):
        assert _max_diff(exact, numeric) < 1e-6


def test_cascade_agrees_with_oracle_composition():
    """Testa o pipeline completo contra projeção sobre estados integrados por RK4"""
    params = ModelParams(lambda1=0.9, n_max=30, nonlinearity="one")
    field = coherent_coeffs(2.0, 30)
    tau1 = 0.5
    taus = np.arange(0, 11) * 0.5

    first = integrate_passage(field, params, tau1)
    second_field = project_ground(first).field
    oracle = integrate_series(second_field, params, taus)
    pipeline = run_cascade(params, 2.0, tau1, taus)
    for exact, numeric in zip(pipeline, oracle):
        assert _max_diff(exact, numeric) < 1e-6
