import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecquant.channel import random_channel, sort_by_posterior, validate_channel
from ecquant.cost import evaluate_quantizer, prior_entropy, single_cluster_cost
from ecquant.errors import IndexOutOfRange, InvalidQuantizer
from ecquant.quantizer import ThresholdQuantizer

# -0.25 log2 0.25 - 0.75 log2 0.75, from a standalone evaluation
H_QUARTER = 0.8112781244591328


def test_single_cluster_examples():
    sc = sort_by_posterior(validate_channel([[0.25, 0.25], [0.25, 0.25]]))
    assert single_cluster_cost(sc, 0, 1, 2.0) == pytest.approx(1.5, abs=1e-15)
    assert single_cluster_cost(sc, 1, 1, 2.0) == 0.0
    assert single_cluster_cost(sc, 0, 2, 1.0) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(IndexOutOfRange):
        single_cluster_cost(sc, 0, 3, 1.0)


def test_single_cluster_pure_symbol():
    # a cluster carrying only x_1 has no conditional entropy
    sc = sort_by_posterior(validate_channel([[0.5, 0.0], [0.0, 0.5]]))
    assert single_cluster_cost(sc, 0, 1, 5.0) == pytest.approx(0.5)


def test_prior_entropy():
    mk = lambda p: validate_channel([[p[0], p[1]]])
    assert prior_entropy(mk((0.5, 0.5))) == 1.0
    assert prior_entropy(mk((1.0, 0.0))) == 0.0
    assert prior_entropy(mk((0.25, 0.75))) == pytest.approx(H_QUARTER, abs=1e-15)


def test_merged_quantizer(four_output):
    cb = evaluate_quantizer(four_output, ThresholdQuantizer((0, 4)), 3.0)
    assert cb.objective == pytest.approx(3.0, abs=1e-12)
    assert cb.cond_entropy == pytest.approx(1.0, abs=1e-12)
    assert cb.out_entropy == pytest.approx(0.0, abs=1e-12)
    assert cb.mutual_info == pytest.approx(0.0, abs=1e-12)


def test_identity_quantizer_gives_channel_entropies():
    ch = random_channel(7, seed=3)
    sc = sort_by_posterior(ch)
    cb = evaluate_quantizer(sc, ThresholdQuantizer.identity(sc.M), 1.0)
    py = ch.joint.sum(axis=1)
    h_y = -np.sum(py * np.log2(py))
    h_xy = -np.sum(ch.joint * np.log2(ch.joint))
    assert cb.out_entropy == pytest.approx(h_y, abs=1e-12)
    assert cb.cond_entropy == pytest.approx(h_xy - h_y, abs=1e-12)


def test_four_output_matches_enumeration(four_output):
    # values from a standalone enumeration of the single cut q in 0..4 at beta=2
    expected = {0: 2.0, 1: 2.6286680635848167, 2: 2.7625817984613854, 3: 2.6286680635848167, 4: 2.0}
    for q, val in expected.items():
        cb = evaluate_quantizer(four_output, ThresholdQuantizer((0, q, 4)), 2.0)
        assert cb.objective == pytest.approx(val, abs=1e-12)


def test_invalid_quantizer(four_output):
    with pytest.raises(InvalidQuantizer):
        evaluate_quantizer(four_output, ThresholdQuantizer((0, 2, 3)), 1.0)
    with pytest.raises(InvalidQuantizer):
        ThresholdQuantizer((0, 3, 2, 4))
    with pytest.raises(InvalidQuantizer):
        ThresholdQuantizer((1, 4))


@st.composite
def instances(draw):
    M = draw(st.integers(1, 12))
    ch = random_channel(M, seed=draw(st.integers(0, 2**31 - 1)))
    sc = sort_by_posterior(ch)
    K = draw(st.integers(1, 5))
    inner = sorted(draw(st.lists(st.integers(0, sc.M), min_size=K - 1, max_size=K - 1)))
    beta = draw(st.sampled_from([0.0, 0.5, 1.0, 2.0, 8.0, 37.5]))
    return sc, ThresholdQuantizer((0, *inner, sc.M)), beta


@settings(max_examples=200, deadline=None)
@given(instances())
def test_breakdown_invariants(inst):
    sc, q, beta = inst
    cb = evaluate_quantizer(sc, q, beta)
    parts = sum(single_cluster_cost(sc, a, b, beta) for a, b in q.clusters())
    assert cb.objective == pytest.approx(parts, abs=1e-10)
    assert cb.objective == pytest.approx(beta * cb.cond_entropy + cb.out_entropy, abs=1e-12)
    assert cb.mutual_info == pytest.approx(prior_entropy(sc.source) - cb.cond_entropy, abs=1e-12)
    assert -1e-12 <= cb.cond_entropy <= 1 + 1e-12
    assert -1e-12 <= cb.out_entropy <= math.log2(q.K) + 1e-12


@settings(max_examples=200, deadline=None)
@given(instances())
def test_merging_adjacent_clusters(inst):
    sc, q, beta = inst
    if q.K < 2:
        return
    split = evaluate_quantizer(sc, q, beta)
    # merge clusters 0 and 1 by dropping cut a_1
    merged = evaluate_quantizer(sc, ThresholdQuantizer(q.cuts[:1] + q.cuts[2:]), beta)
    assert merged.out_entropy <= split.out_entropy + 1e-10
    assert merged.cond_entropy >= split.cond_entropy - 1e-10


@settings(max_examples=100, deadline=None)
@given(instances())
def test_zero_beta_prefers_single_cluster(inst):
    sc, q, _ = inst
    merged = evaluate_quantizer(sc, ThresholdQuantizer((0, sc.M)), 0.0)
    assert merged.objective <= evaluate_quantizer(sc, q, 0.0).objective + 1e-12
