import numpy as np
import pytest

from ecquant.channel import random_channel, sort_by_posterior, validate_channel
from ecquant.cost import evaluate_quantizer, prior_entropy
from ecquant.dp import objective_curve_in_k, run_dp, solve
from ecquant.errors import InvalidK
from ecquant.oracles import brute_force_contiguous, brute_force_unrestricted
from ecquant.quantizer import ThresholdQuantizer

from conftest import random_instances


def test_independent_output_merges_everything():
    # identical posteriors: X independent of Y
    ch = validate_channel(np.outer([0.1, 0.2, 0.3, 0.4], [0.3, 0.7]))
    sc = sort_by_posterior(ch)
    for K in (1, 2, 4):
        q, cb, _ = solve(sc, K, 1.0)
        assert len(q.nonempty()) == 1
        assert cb.objective == pytest.approx(prior_entropy(ch), abs=1e-12)


def test_k1_forced_single_cluster(four_output):
    q, cb, _ = solve(four_output, 1, 7.0)
    assert q.cuts == (0, 4)
    assert cb.objective == pytest.approx(7.0 * prior_entropy(four_output.source), abs=1e-12)


def test_four_output_beta2(four_output):
    # standalone enumeration: every single cut is no better than merging (objective 2.0)
    q, cb, tables = solve(four_output, 2, 2.0)
    assert q.cuts == (0, 0, 4)
    assert cb.objective == pytest.approx(2.0, abs=1e-12)
    assert tables.cost[4, 2] == pytest.approx(cb.objective, abs=1e-10)


def test_four_output_beta20(four_output):
    # standalone enumeration: the symmetric split wins at beta=20
    q, cb, _ = solve(four_output, 2, 20.0)
    assert q.cuts == (0, 2, 4)
    assert cb.objective == pytest.approx(18.625817984613853, abs=1e-12)
    curve = objective_curve_in_k(four_output, 4, 20.0)
    np.testing.assert_allclose(curve, [20.0] + [18.625817984613853] * 3, atol=1e-12)


def test_curve_matches_per_k_enumeration(four_output):
    for beta in (2.0, 20.0, 0.5):
        curve = objective_curve_in_k(four_output, 4, beta)
        for k, v in enumerate(curve, start=1):
            assert v == pytest.approx(brute_force_contiguous(four_output, k, beta)[1], abs=1e-9)


def test_tables_shape_and_base_cases(four_output):
    t = run_dp(four_output, 3, 2.0)
    assert t.cost.shape == (5, 4) and t.decision.shape == (5, 4)
    assert np.all(t.cost[0] == 0)
    assert np.all(np.isinf(t.cost[1:, 0]))
    assert np.all(np.diff(t.cost[1:, 1:], axis=1) <= 0)


def test_invalid_k(four_output):
    for K in (0, -1, 1.5):
        with pytest.raises(InvalidK):
            solve(four_output, K, 1.0)
    with pytest.raises(InvalidK):
        objective_curve_in_k(four_output, 0, 1.0)


@pytest.mark.parametrize("seed", range(5))
def test_curve_nonincreasing_and_below_identity(seed):
    sc = sort_by_posterior(random_channel(9, seed=seed))
    curve = objective_curve_in_k(sc, sc.M, 1.5)
    assert all(b <= a for a, b in zip(curve, curve[1:]))
    ident = evaluate_quantizer(sc, ThresholdQuantizer.identity(sc.M), 1.5).objective
    assert curve[-1] <= ident + 1e-12


def test_matches_contiguous_oracle():
    for sc, K, beta in random_instances(60, seed=11):
        q, cb, tables = solve(sc, K, beta)
        _, best = brute_force_contiguous(sc, K, beta)
        assert cb.objective == pytest.approx(best, abs=1e-9)
        assert tables.cost[sc.M, K] == pytest.approx(cb.objective, abs=1e-10)


def test_not_beaten_by_unrestricted_oracle():
    for sc, K, beta in random_instances(30, seed=12, m_range=(2, 8), k_range=(1, 3)):
        _, cb, _ = solve(sc, K, beta)
        assert cb.objective <= brute_force_unrestricted(sc, K, beta) + 1e-9


def test_deterministic_repeat():
    sc = sort_by_posterior(random_channel(40, seed=5))
    a = solve(sc, 5, 3.0)
    b = solve(sc, 5, 3.0)
    assert a[0].cuts == b[0].cuts
    np.testing.assert_array_equal(a[2].cost, b[2].cost)
    np.testing.assert_array_equal(a[2].decision, b[2].decision)


def test_zero_mass_outputs_are_ignored():
    ch = random_channel(10, seed=9, zero_rows=3)
    sc = sort_by_posterior(ch)
    assert sc.M == 7
    q, cb, _ = solve(sc, 3, 2.0)
    assert q.cuts[-1] == 7
    assert cb.objective == pytest.approx(brute_force_contiguous(sc, 3, 2.0)[1], abs=1e-9)
