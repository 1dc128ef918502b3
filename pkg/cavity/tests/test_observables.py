import cmath
import math

import numpy as np
import pytest

from cavity.errors import InvalidDensityMatrixError, TruncationError, UndefinedMandelError
from cavity.fock import FieldCoeffs, ModelParams, coherent_coeffs, fock_state
from cavity.observables import (
    AtomDensityMatrix,
    entropy_cubic,
    entropy_field,
    entropy_numeric,
    inversion,
    mandel_q,
    moments,
    photon_distribution,
    photon_statistics,
    reduced_rho,
    squeezing_first,
    squeezing_second,
)
from cavity.solver import initial_state, passage_series, prepare_second_field, run_cascade


@pytest.fixture(scope="module")
def cascade_states():
    """Estados da segunda passagem em tempos aleatórios (semente fixa)"""
    rng = np.random.default_rng(20240611)
    params = ModelParams(lambda1=0.9, delta1=7.0, delta2=15.0, n_max=30, nonlinearity="one")
    taus = np.sort(rng.uniform(0.0, 20.0, size=100))
    return run_cascade(params, 2.0, 0.5, taus)


def _dense_expectations(state):
    # Full ladder operator on the extended Fock space, summed over |e>, |i>, |g>
    vectors = state.field_vectors()
    size = len(vectors[0])
    lower = np.diag(np.sqrt(np.arange(1, size)), k=1)
    number = np.diag(np.arange(size, dtype=float))

    def expect(op):
        return sum(np.vdot(v, op @ v) for v in vectors)

    return {
        "mean_n": expect(number).real,
        "mean_n2": expect(number @ number).real,
        "a1": expect(lower),
        "a2": expect(lower @ lower),
        "a4": expect(np.linalg.matrix_power(lower, 4)),
    }


# ── Inversion and atomic density matrix ──

def test_inversion_at_zero_time():
    assert inversion(initial_state(coherent_coeffs(2.0, 30))) == pytest.approx(1.0, abs=1e-12)


def test_inversion_matches_ground_population(cascade_states):
    for state in cascade_states[:10]:
        rho = reduced_rho(state)
        assert inversion(state) == pytest.approx(1.0 - 2.0 * rho.populations[2], abs=1e-12)


def test_reduced_rho_at_zero_time():
    """Testa rho = |+><+| com |+> = (|e> + |i>)/sqrt2 antes da interação"""
    rho = reduced_rho(initial_state(coherent_coeffs(2.0, 30)))
    expected = np.array([[0.5, 0.5, 0.0], [0.5, 0.5, 0.0], [0.0, 0.0, 0.0]])
    np.testing.assert_allclose(rho.entries, expected, atol=1e-12)
    assert rho.purity == pytest.approx(1.0, abs=1e-12)


def test_reduced_rho_is_a_density_matrix(cascade_states):
    for state in cascade_states:
        rho = reduced_rho(state)
        assert rho.trace == pytest.approx(1.0, abs=1e-10)
        np.testing.assert_allclose(rho.entries, rho.entries.conj().T, atol=1e-14)
        assert rho.eigenvalues.min() > -1e-12
        assert rho.purity <= 1.0 + 1e-10


def test_density_matrix_shape_is_checked():
    with pytest.raises(ValueError):
        AtomDensityMatrix(entries=np.eye(2))


# ── Entropy ──

@pytest.mark.parametrize(
    "diagonal, expected",
    [
        ((1.0, 0.0, 0.0), 0.0),
        ((0.5, 0.5, 0.0), math.log(2.0)),
        ((1 / 3, 1 / 3, 1 / 3), math.log(3.0)),
        ((0.5, 0.25, 0.25), 1.5 * math.log(2.0)),
    ],
)
def test_entropy_examples(diagonal, expected):
    rho = AtomDensityMatrix(entries=np.diag(diagonal))
    assert entropy_cubic(rho) == pytest.approx(expected, abs=1e-12)
    assert entropy_numeric(rho) == pytest.approx(expected, abs=1e-12)


def test_entropy_cubic_matches_numeric_on_random_matrices():
    """Testa fórmula cúbica contra autovalores numéricos em 1000 matrizes de Wishart"""
    rng = np.random.default_rng(7)
    for _ in range(1000):
        x = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        w = x @ x.conj().T
        rho = AtomDensityMatrix(entries=w / np.trace(w).real)
        assert abs(entropy_cubic(rho) - entropy_numeric(rho)) < 1e-9


def test_negative_eigenvalue_is_rejected():
    rho = AtomDensityMatrix(entries=np.diag([1.1, 0.0, -0.1]))
    with pytest.raises(InvalidDensityMatrixError):
        entropy_numeric(rho)


def test_entropy_vanishes_before_second_passage():
    params = ModelParams(lambda1=0.9, n_max=30, nonlinearity="one")
    [state] = run_cascade(params, 2.0, 0.5, [0.0])
    assert entropy_cubic(reduced_rho(state)) < 1e-10


def test_atom_and_field_entropies_agree(cascade_states):
    """Testa igualdade das entropias dos subsistemas (estado conjunto puro)"""
    for state in cascade_states[::5]:
        assert abs(entropy_cubic(reduced_rho(state)) - entropy_field(state)) < 1e-8


# ── Field moments ──

def test_coherent_moments():
    alpha = 1.5 * cmath.exp(0.3j)
    m = moments(initial_state(coherent_coeffs(alpha, 40)))
    assert m.mean_n == pytest.approx(abs(alpha) ** 2, abs=1e-9)
    assert m.mean_n2 == pytest.approx(abs(alpha) ** 4 + abs(alpha) ** 2, abs=1e-9)
    assert abs(m.a1 - alpha) < 1e-9
    assert abs(m.a2 - alpha ** 2) < 1e-9
    assert abs(m.a4 - alpha ** 4) < 1e-9


def test_vacuum_moments():
    m = moments(initial_state(fock_state(0, 6)))
    assert m.mean_n == 0.0
    assert m.a1 == 0j and m.a2 == 0j and m.a4 == 0j


def test_projected_field_has_at_least_one_photon(cascade_states):
    for state in cascade_states:
        assert moments(state).mean_n >= 1.0 - 1e-12


def test_moments_match_dense_ladder_operators(cascade_states):
    """Testa momentos contra operadores densos de criação/aniquilação"""
    for state in cascade_states:
        m = moments(state)
        dense = _dense_expectations(state)
        assert m.mean_n == pytest.approx(dense["mean_n"], abs=1e-10)
        assert m.mean_n2 == pytest.approx(dense["mean_n2"], abs=1e-10)
        assert abs(m.a1 - dense["a1"]) < 1e-10
        assert abs(m.a2 - dense["a2"]) < 1e-10
        assert abs(m.a4 - dense["a4"]) < 1e-10


def test_moments_follow_field_phase():
    """Testa <a^r> -> e^{i r phi} <a^r> quando alpha -> alpha e^{i phi}"""
    params = ModelParams(lambda1=0.9, delta1=7.0, delta2=15.0, n_max=30, nonlinearity="one")
    phi = 0.7
    taus = [0.0, 1.1, 4.3]
    plain = passage_series(coherent_coeffs(2.0, 30), params, taus)
    rotated = passage_series(coherent_coeffs(2.0 * cmath.exp(1j * phi), 30), params, taus)
    for s0, s1 in zip(plain, rotated):
        m0, m1 = moments(s0), moments(s1)
        assert m1.mean_n == pytest.approx(m0.mean_n, abs=1e-10)
        for r, key in ((1, "a1"), (2, "a2"), (4, "a4")):
            assert abs(getattr(m1, key) - cmath.exp(1j * r * phi) * getattr(m0, key)) < 1e-10
        assert entropy_cubic(reduced_rho(s1)) == pytest.approx(entropy_cubic(reduced_rho(s0)), abs=1e-10)


def test_moment_margin_is_enforced():
    """Testa TruncationError quando há massa nos quatro níveis mais altos"""
    with pytest.raises(TruncationError):
        moments(initial_state(fock_state(9, 10)))


def test_photon_distribution_sums_to_one(cascade_states):
    for state in cascade_states[:5]:
        p = photon_distribution(state)
        assert len(p) == state.n_max + 2
        assert p[0] == 0.0
        assert float(np.sum(p)) == pytest.approx(1.0, abs=1e-10)


# ── Squeezing and Mandel Q ──

def test_coherent_state_is_not_squeezed():
    state = initial_state(coherent_coeffs(2.0, 40))
    first = squeezing_first(state)
    second = squeezing_second(state)
    assert first.s_x == pytest.approx(0.0, abs=1e-8)
    assert first.s_p == pytest.approx(0.0, abs=1e-8)
    assert second.s_x == pytest.approx(0.0, abs=1e-8)
    assert second.s_p == pytest.approx(0.0, abs=1e-8)


def test_vacuum_squeezing():
    state = initial_state(fock_state(0, 6))
    first = squeezing_first(state)
    second = squeezing_second(state)
    assert (first.s_x, first.s_p) == (0.0, 0.0)
    assert (second.s_x, second.s_p) == (0.0, 0.0)


def test_single_photon_squeezing():
    state = initial_state(fock_state(1, 10))
    first = squeezing_first(state)
    second = squeezing_second(state)
    assert first.s_x == pytest.approx(2.0, abs=1e-12)
    assert first.s_p == pytest.approx(2.0, abs=1e-12)
    assert second.s_x == pytest.approx(0.0, abs=1e-12)
    assert second.s_p == pytest.approx(0.0, abs=1e-12)
    assert (first.order, second.order) == (1, 2)


def test_quadrature_uncertainty_bound(cascade_states):
    """Testa (1 + S_x)(1 + S_p) >= 1 (relação de incerteza)"""
    for state in cascade_states:
        pair = squeezing_first(state)
        assert (1.0 + pair.s_x) * (1.0 + pair.s_p) >= 1.0 - 1e-9


def test_second_order_squeezing_is_bounded_below(cascade_states):
    """Testa S_x e S_p de segunda ordem >= -1 ao longo da segunda passagem"""
    for state in cascade_states:
        pair = squeezing_second(state)
        assert pair.s_x >= -1.0 - 1e-12
        assert pair.s_p >= -1.0 - 1e-12


@pytest.mark.parametrize("nonlinearity", ["one", "sqrt"])
def test_observables_ignore_global_field_phase(nonlinearity):
    """Testa invariância de todos os observáveis sob c_n -> e^{i phi} c_n no campo projetado"""
    params = ModelParams(lambda1=0.9, delta1=7.0, delta2=15.0, n_max=30, nonlinearity=nonlinearity)
    projected = prepare_second_field(params, 2.0, 0.5).field
    rotated = FieldCoeffs(coeffs=projected.coeffs * cmath.exp(0.83j))
    taus = np.linspace(0.5, 6.0, 12)
    for plain, phased in zip(passage_series(projected, params, taus), passage_series(rotated, params, taus)):
        assert inversion(phased) == pytest.approx(inversion(plain), abs=1e-12)
        assert entropy_cubic(reduced_rho(phased)) == pytest.approx(entropy_cubic(reduced_rho(plain)), abs=1e-12)
        assert entropy_field(phased) == pytest.approx(entropy_field(plain), abs=1e-12)
        assert mandel_q(phased) == pytest.approx(mandel_q(plain), abs=1e-12)
        for order in (squeezing_first, squeezing_second):
            first, second = order(plain), order(phased)
            assert second.s_x == pytest.approx(first.s_x, abs=1e-12)
            assert second.s_p == pytest.approx(first.s_p, abs=1e-12)
        np.testing.assert_allclose(photon_distribution(phased), photon_distribution(plain), atol=1e-12)


def test_mandel_examples():
    assert mandel_q(initial_state(coherent_coeffs(2.0, 40))) == pytest.approx(0.0, abs=1e-9)
    assert mandel_q(initial_state(fock_state(3, 10))) == pytest.approx(-1.0, abs=1e-12)

    mixed = np.zeros(12, dtype=complex)
    mixed[1] = mixed[5] = 1 / math.sqrt(2)
    assert mandel_q(initial_state(FieldCoeffs(coeffs=mixed))) == pytest.approx(1 / 3, abs=1e-12)


def test_mandel_undefined_for_vacuum():
    with pytest.raises(UndefinedMandelError):
        mandel_q(initial_state(fock_state(0, 6)))


@pytest.mark.parametrize(
    "q, label",
    [(-0.2, "sub-Poissonian"), (0.0, "Poissonian"), (1e-12, "Poissonian"), (0.3, "super-Poissonian")],
)
def test_photon_statistics(q, label):
    assert photon_statistics(q) == label
