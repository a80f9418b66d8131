import numpy as np
import pytest

from dejitter import (
    EnergyParams,
    LineDisplacement,
    SynthesisSpec,
    build_line_problem,
    dejitter_line,
    displacement_accuracy,
    evaluate,
    reconstruct_line,
    sample,
    solve_chain,
    synthesize_line,
)
from dejitter.image import pnorm_pow
from dejitter.oracle import brute_force_chain, reference_line_energy

from helpers import constant_image, random_image, stripe_image


def test_rho_zero_degenerate():
    img = random_image(5, 4, seed=0)
    params = EnergyParams(0.5, 1.0, 1, 0)
    problem = build_line_problem(img, params)
    assert problem.num_labels == 1
    d, rec, energy = dejitter_line(img, params)
    assert np.all(d.values == 0)
    assert np.array_equal(rec.data, img.data)
    assert energy == pytest.approx(reference_line_energy(img, d.values, params), rel=1e-9)


def test_constant_image_zero_cost_on_diagonal():
    img = constant_image(4, 6, 0.8)
    problem = build_line_problem(img, EnergyParams(0.0, 0.5, 1, 2))
    for j in range(2, 5):
        table = problem.pairwise(j)
        assert np.all(np.diag(table) == 0.0)
        assert table[0, 4] > 0.0  # mismatched shifts compare value against border zeros


def test_cost_tables_match_hand_enumeration():
    # 3x3, rho=1, alpha=0, p=1: every table entry recomputed pixel by pixel
    img = random_image(3, 3, seed=1)
    params = EnergyParams(0.0, 1.0, 1, 1)
    problem = build_line_problem(img, params)
    for j in (2, 3):
        table = problem.pairwise(j)
        for a, da in enumerate((-1, 0, 1)):
            for b, db in enumerate((-1, 0, 1)):
                want = sum(
                    pnorm_pow(sample(img, i - db, j) - sample(img, i - da, j - 1), 1.0)
                    for i in range(1, 4)
                )
                assert table[a, b] == pytest.approx(want, rel=1e-12)


def test_ternary_tables_match_hand_enumeration():
    img = random_image(4, 3, seed=2)
    params = EnergyParams(0.0, 1.0, 2, 1)
    problem = build_line_problem(img, params)
    table = problem.ternary(3)
    for a, da in enumerate((-1, 0, 1)):
        for b, db in enumerate((-1, 0, 1)):
            for c, dc in enumerate((-1, 0, 1)):
                want = sum(
                    pnorm_pow(
                        sample(img, i - dc, 3)
                        - 2 * sample(img, i - db, 2)
                        + sample(img, i - da, 1),
                        1.0,
                    )
                    for i in range(1, 4)
                )
                assert table[a, b, c] == pytest.approx(want, rel=1e-12)


def test_uncorrupted_stripes_recover_zero():
    img = stripe_image(width=24, height=10, margin=6, seed=3)
    d, rec, _ = dejitter_line(img, EnergyParams(0.01, 1.0, 1, 2))
    assert np.all(d.values == 0)
    assert np.array_equal(rec.data, img.data)


def test_synthesized_stripes_recovered_exactly():
    img = stripe_image(width=32, height=16, margin=8, seed=4)
    corrupted, truth = synthesize_line(img, SynthesisSpec(sigma2=1.5, seed=4, kind="line"))
    params = EnergyParams(0.01, 0.5, 1, truth.rho)
    est, rec, energy = dejitter_line(corrupted, params)
    assert displacement_accuracy(est, truth, modulo_shift=True) == 1.0
    truth_energy = evaluate(build_line_problem(corrupted, params), truth.values + truth.rho)
    assert energy <= truth_energy + 1e-9


def test_crop_oracle_both_orders():
    for order in (1, 2):
        for seed in (5, 6):
            img = random_image(6, 5, channels=3, seed=seed)
            params = EnergyParams(0.05, 0.5, order, 2)
            problem = build_line_problem(img, params)
            d, _, energy = dejitter_line(img, params)
            bf = brute_force_chain(problem)
            assert energy == pytest.approx(bf.energy, rel=1e-9)


def test_alpha_dominance():
    img = random_image(6, 5, channels=3, seed=7)
    rho = 2
    alpha = img.width * img.channels * max(1.0, 2.0**0.5) * img.height + 1.0
    d, _, _ = dejitter_line(img, EnergyParams(alpha, 0.5, 1, rho))
    assert np.all(d.values == 0)


def test_shift_invariance_with_black_margins():
    # with alpha=0 and margins wider than any read, a constant label offset
    # slides every window inside the margins and leaves the energy unchanged
    img = stripe_image(width=30, height=8, margin=10, seed=8)
    params = EnergyParams(0.0, 0.5, 1, 3)
    problem = build_line_problem(img, params)
    rng = np.random.default_rng(9)
    labels = rng.integers(2, 5, size=8)  # offsets in [-1, 1]
    for c in (-2, -1, 1, 2):
        assert evaluate(problem, labels + c) == pytest.approx(
            evaluate(problem, labels), abs=1e-12
        )


def test_reconstruct_line_examples():
    img = random_image(3, 4, seed=10)
    ident = reconstruct_line(img, LineDisplacement(np.zeros(3, dtype=int), rho=0))
    assert np.array_equal(ident.data, img.data)

    row = random_image(1, 4, seed=11)
    shifted = reconstruct_line(row, LineDisplacement(np.array([1]), rho=1))
    assert np.all(shifted.data[0, 0] == 0.0)  # out-of-range read
    assert np.array_equal(shifted.data[0, 1:], row.data[0, :-1])

    with pytest.raises(ValueError):
        reconstruct_line(img, LineDisplacement(np.zeros(5, dtype=int), rho=0))


def test_global_optimality_beats_truth_labeling():
    for seed in range(3):
        img = random_image(12, 10, seed=seed)
        corrupted, truth = synthesize_line(img, SynthesisSpec(sigma2=1.5, seed=seed, kind="line"))
        params = EnergyParams(0.01, 0.5, 1, truth.rho)
        _, _, energy = dejitter_line(corrupted, params)
        truth_energy = evaluate(build_line_problem(corrupted, params), truth.values + truth.rho)
        assert energy <= truth_energy + 1e-9


def test_per_order_weights_and_exponents():
    img = random_image(5, 4, seed=12)
    params = EnergyParams(0.1, 0.5, 2, 1)
    problem = build_line_problem(img, params, weights=(2.0, 0.5), exponents=(1.0, 2.0))
    base1 = build_line_problem(img, EnergyParams(0.1, 1.0, 1, 1))
    assert np.allclose(problem.pairwise(2), 2.0 * base1.pairwise(2))
    with pytest.raises(ValueError):
        build_line_problem(img, params, weights=(1.0,))
