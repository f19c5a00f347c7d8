import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evomlp import (
    Activation,
    DeParams,
    RunConfig,
    StoppingRule,
    Topology,
    forward,
    forward_batch,
    genome_length,
    predict,
    run,
)
from evomlp.mlp import activation_apply, flatten, unflatten


def scalar_forward(topology, genome, features):
    """Independent forward pass: plain Python loops, no shared code with mlp."""

    def act(x):
        if topology.activation is Activation.TANH:
            return math.tanh(x)
        if topology.activation is Activation.LOGISTIC:
            return 1.0 / (1.0 + math.exp(-x))
        return x

    sizes = [topology.input_dim, *topology.hidden_layers, topology.output_dim]
    values = list(features)
    offset = 0
    for n_in, n_out in zip(sizes[:-1], sizes[1:]):
        nxt = []
        for j in range(n_out):
            total = 0.0
            for k in range(n_in):
                total += genome[offset + j * (n_in + 1) + k] * values[k]
            total += genome[offset + j * (n_in + 1) + n_in]  # bias
            nxt.append(act(total))
        offset += n_out * (n_in + 1)
        values = nxt
    return values


def test_activation_special_points():
    assert activation_apply(Activation.TANH, 0.0) == 0.0
    assert activation_apply(Activation.LOGISTIC, 0.0) == 0.5
    assert activation_apply(Activation.LINEAR, 2.5) == 2.5


def test_activation_matches_closed_forms():
    xs = np.linspace(-5, 5, 41)
    for x in xs:
        assert activation_apply(Activation.TANH, x) == pytest.approx(
            (math.exp(x) - math.exp(-x)) / (math.exp(x) + math.exp(-x)), abs=1e-15
        )
        assert activation_apply(Activation.LOGISTIC, x) == pytest.approx(
            1.0 / (1.0 + math.exp(-x)), abs=1e-15
        )


def test_activation_extreme_inputs_stay_finite():
    for x in (-1e5, -750.0, 750.0, 1e5):
        assert math.isfinite(activation_apply(Activation.TANH, x))
        assert math.isfinite(activation_apply(Activation.LOGISTIC, x))


@pytest.mark.parametrize(
    "topo,expected",
    [
        (Topology(2, (2,), 2), 12),
        (Topology(3, (), 2), 8),
        (Topology(4, (5, 3), 3), 55),
    ],
)
def test_genome_length(topo, expected):
    assert genome_length(topo) == expected


def test_topology_invariants():
    with pytest.raises(ValueError):
        Topology(0, (), 2)
    with pytest.raises(ValueError):
        Topology(1, (), 1)
    with pytest.raises(ValueError):
        Topology(1, (0,), 2)


def test_forward_linear_identity_arithmetic():
    topo = Topology(1, (), 2, Activation.LINEAR)
    genome = np.array([1.0, 0.0, -1.0, 0.0])  # rows: [w, bias]
    out = forward(topo, genome, [2.0])
    assert out.tolist() == [2.0, -2.0]


def test_forward_zero_genome_tanh_is_zero():
    topo = Topology(3, (4, 2), 2, Activation.TANH)
    genome = np.zeros(genome_length(topo))
    out = forward(topo, genome, [0.3, -1.0, 5.0])
    assert out.tolist() == [0.0, 0.0]


def test_forward_matches_independent_scalar_oracle():
    topo = Topology(2, (2,), 2, Activation.LOGISTIC)
    rng = np.random.default_rng(42)
    genome = rng.normal(0.0, 1.0, genome_length(topo))
    x = [0.3, -0.7]
    got = forward(topo, genome, x)
    want = scalar_forward(topo, genome, x)
    np.testing.assert_allclose(got, want, rtol=0, atol=1e-12)


def test_forward_oracle_deeper_networks():
    rng = np.random.default_rng(7)
    for activation in Activation:
        topo = Topology(4, (5, 3), 3, activation)
        genome = rng.normal(0.0, 1.5, genome_length(topo))
        x = rng.normal(0.0, 2.0, 4)
        np.testing.assert_allclose(
            forward(topo, genome, x), scalar_forward(topo, genome, x), rtol=0, atol=1e-12
        )


def test_forward_dimension_errors():
    topo = Topology(2, (), 2)
    with pytest.raises(ValueError):
        forward(topo, np.zeros(5), [0.0, 0.0])
    with pytest.raises(ValueError):
        forward(topo, np.zeros(genome_length(topo)), [0.0, 0.0, 0.0])


def test_forward_batch_matches_single_rows():
    topo = Topology(3, (4,), 2, Activation.TANH)
    rng = np.random.default_rng(3)
    genome = rng.normal(0.0, 1.0, genome_length(topo))
    batch = rng.normal(0.0, 1.0, (10, 3))
    outs = forward_batch(topo, genome, batch)
    for row, out in zip(batch, outs):
        np.testing.assert_allclose(out, forward(topo, genome, row), rtol=0, atol=1e-12)


def test_predict_argmax_and_tie_break():
    topo = Topology(1, (), 2, Activation.LINEAR)
    # zero input weight, biases carry the scores
    assert predict(topo, np.array([0.0, 0.1, 0.0, 0.9]), [0.0]) == 1
    assert predict(topo, np.array([0.0, 0.5, 0.0, 0.5]), [0.0]) == 0


def test_predict_from_converged_xor_run(xor_dataset):
    cfg = RunConfig(
        params=DeParams(),
        topology=Topology(2, (4,), 2, Activation.TANH),
        population_size=50,
        stopping=StoppingRule(max_iterations=500),
        seed=0,
    )
    result = run(cfg, xor_dataset)
    assert result.best_fitness == 1.0
    idx = predict(cfg.topology, result.best_genome, [1.0, 0.0])
    assert xor_dataset.class_names[idx] == "1"


def test_forward_deterministic():
    topo = Topology(2, (3,), 2)
    rng = np.random.default_rng(0)
    genome = rng.normal(0.0, 1.0, genome_length(topo))
    a = forward(topo, genome, [0.1, 0.2])
    b = forward(topo, genome, [0.1, 0.2])
    assert a.tolist() == b.tolist()


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_linear_no_hidden_equals_affine_map(seed):
    rng = np.random.default_rng(seed)
    topo = Topology(3, (), 2, Activation.LINEAR)
    genome = rng.normal(0.0, 2.0, genome_length(topo))
    x = rng.normal(0.0, 3.0, 3)
    mats = unflatten(topo, genome)
    expected = mats[0][:, :-1] @ x + mats[0][:, -1]
    np.testing.assert_allclose(forward(topo, genome, x), expected, rtol=0, atol=1e-12)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_activation_output_ranges_on_random_genomes(seed):
    # magnitudes kept below the float64 saturation point of tanh/logistic
    rng = np.random.default_rng(seed)
    topo = Topology(3, (4,), 2, Activation.TANH)
    genome = rng.uniform(-1.0, 1.0, genome_length(topo))
    x = rng.uniform(-2.0, 2.0, 3)
    tanh_out = forward(topo, genome, x)
    assert np.all((tanh_out > -1.0) & (tanh_out < 1.0))
    topo = Topology(3, (4,), 2, Activation.LOGISTIC)
    logistic_out = forward(topo, genome, x)
    assert np.all((logistic_out > 0.0) & (logistic_out < 1.0))


def test_predict_invariant_under_output_shift():
    topo = Topology(2, (3,), 2, Activation.LINEAR)
    rng = np.random.default_rng(11)
    genome = rng.normal(0.0, 1.0, genome_length(topo))
    x = rng.normal(0.0, 1.0, 2)
    shifted = genome.copy()
    mats = unflatten(topo, shifted)
    mats[-1][:, -1] += 7.5  # common constant on every output bias
    assert predict(topo, genome, x) == predict(topo, shifted, x)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_flatten_unflatten_round_trip(seed):
    rng = np.random.default_rng(seed)
    topo = Topology(
        int(rng.integers(1, 5)),
        tuple(int(h) for h in rng.integers(1, 5, size=rng.integers(0, 3))),
        int(rng.integers(2, 5)),
    )
    genome = rng.normal(0.0, 1.0, genome_length(topo))
    rebuilt = flatten(unflatten(topo, genome))
    assert np.array_equal(rebuilt, genome)
