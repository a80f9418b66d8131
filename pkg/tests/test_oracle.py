import numpy as np
import pytest

from dejitter import ChainProblem, EnergyParams, VectorField, evaluate, pixel_energy, solve_chain
from dejitter.oracle import (
    brute_force_chain,
    brute_force_pixel_energy,
    reference_line_energy,
    reference_line_pixel_energy,
    reference_pixel_energy,
)
from dejitter import build_line_problem, dejitter_line_pixel, dejitter_line

from helpers import constant_image, random_chain, random_image


def test_brute_force_single_element():
    sol = brute_force_chain(ChainProblem.from_arrays(np.array([[3.0, 1.0, 2.0]])))
    assert sol.labels.tolist() == [1]
    assert sol.energy == 1.0


def test_brute_force_zero_costs_lexicographic_first():
    sol = brute_force_chain(ChainProblem.from_arrays(np.zeros((3, 2)), np.zeros((2, 2, 2))))
    assert sol.energy == 0.0
    assert sol.labels.tolist() == [0, 0, 0]


def test_brute_force_guard():
    big = ChainProblem.from_functions(8, 10, phi=lambda j, l: 0.0)
    with pytest.raises(ValueError, match="too large"):
        brute_force_chain(big)


def test_brute_force_agrees_with_solver():
    for seed in range(20):
        problem = random_chain(seed)
        bf = brute_force_chain(problem)
        dp = solve_chain(problem)
        assert dp.energy == pytest.approx(bf.energy, rel=1e-9)


def test_pixel_oracle_constant_image():
    img = constant_image(3, 3, 0.4)
    field, energy = brute_force_pixel_energy(img, EnergyParams(0.5, 1.0, 1, 1))
    assert energy == 0.0
    assert np.all(field.values == 0)


def test_pixel_oracle_single_pixel():
    img = constant_image(1, 1, 0.7)
    field, energy = brute_force_pixel_energy(img, EnergyParams(0.1, 1.0, 1, 1))
    assert np.all(field.values == 0)
    assert energy == 0.0


def test_pixel_oracle_guard():
    img = random_image(6, 2, seed=0)
    with pytest.raises(ValueError, match="too large"):
        brute_force_pixel_energy(img, EnergyParams(0.1, 1.0, 1, 1))


def test_pixel_oracle_is_global_minimum():
    img = random_image(3, 3, seed=3)
    params = EnergyParams(0.1, 1.0, 1, 1)
    field, energy = brute_force_pixel_energy(img, params)
    # the two independent evaluators agree on the minimiser
    assert pixel_energy(img, field, params) == pytest.approx(energy, rel=1e-12)
    rng = np.random.default_rng(4)
    for _ in range(50):
        other = VectorField(rng.integers(-1, 2, size=(3, 3, 2)), rho=1)
        assert energy <= pixel_energy(img, other, params) + 1e-12


def test_reference_line_energy_matches_problem_evaluation():
    img = random_image(5, 4, channels=3, seed=5)
    rng = np.random.default_rng(6)
    for order in (1, 2):
        params = EnergyParams(0.3, 0.5, order, 2)
        problem = build_line_problem(img, params)
        labels = rng.integers(0, 5, size=5)
        direct = reference_line_energy(img, labels - 2, params)
        assert evaluate(problem, labels) == pytest.approx(direct, rel=1e-9)


def test_reference_line_pixel_energy_matches_decomposition():
    img = random_image(5, 4, seed=7)
    params = EnergyParams(0.2, 0.5, 2, 1)
    field, _, energy = dejitter_line_pixel(img, params)
    assert reference_line_pixel_energy(img, field.values, params) == pytest.approx(
        energy, rel=1e-9
    )


def test_reference_pixel_energy_matches_vectorized():
    img = random_image(4, 5, channels=3, seed=8)
    rng = np.random.default_rng(9)
    params = EnergyParams(0.1, 1.0, 1, 2)
    for _ in range(5):
        field = VectorField(rng.integers(-2, 3, size=(4, 5, 2)), rho=2)
        assert pixel_energy(img, field, params) == pytest.approx(
            reference_pixel_energy(img, field, params), rel=1e-9
        )
