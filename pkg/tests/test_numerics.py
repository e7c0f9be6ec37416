import json

import numpy as np
import pytest

from pih_meta.errors import ContractError
from pih_meta.numerics import (
    GradBundle,
    MlpParams,
    adam_step,
    init_adam,
    load_mlp,
    make_mlp,
    max_relative_error,
    mlp_backward,
    mlp_finite_difference,
    mlp_forward,
    save_mlp,
)


def _identity_layer(dim):
    return MlpParams([np.eye(dim)], [np.zeros(dim)], ["identity"])


def test_forward_zero_net_maps_to_zero():
    params = MlpParams(
        [np.zeros((4, 3)), np.zeros((2, 4))],
        [np.zeros(4), np.zeros(2)],
        ["relu", "identity"],
    )
    out = mlp_forward(params, np.array([0.3, -1.0, 2.0]))
    assert np.array_equal(out, np.zeros(2))


def test_forward_identity_layer():
    out = mlp_forward(_identity_layer(2), np.array([1.5, -2.0]))
    assert np.array_equal(out, np.array([1.5, -2.0]))


def test_forward_two_layer_hand_evaluated():
    # Hand evaluation: a1 = W1 x + b1 = (1.5, -2) -> relu -> (1.5, 0);
    # a2 = 2*1.5 - 1*0 + 0.25 = 3.25.
    params = MlpParams(
        [np.array([[1.0, 2.0], [-1.0, 0.5]]), np.array([[2.0, -1.0]])],
        [np.array([0.5, -1.0]), np.array([0.25])],
        ["relu", "identity"],
    )
    out = mlp_forward(params, np.array([1.0, 0.0]))
    assert out.shape == (1,)
    assert out[0] == pytest.approx(3.25, abs=0.0)


def test_forward_is_pure_and_batched_matches_vector():
    rng = np.random.default_rng(3)
    params = make_mlp(4, [8, 8], 3, rng)
    x = rng.normal(size=4)
    a = mlp_forward(params, x)
    b = mlp_forward(params, x)
    assert np.array_equal(a, b)
    batch = rng.normal(size=(5, 4))
    ys = mlp_forward(params, batch)
    for i in range(5):
        # gemm vs gemv differ in summation order, so exact bitwise equality
        # is only promised for identical calls
        assert np.allclose(ys[i], mlp_forward(params, batch[i]), rtol=1e-12, atol=0.0)


def test_forward_dimension_mismatch_raises():
    params = _identity_layer(2)
    with pytest.raises(ContractError):
        mlp_forward(params, np.zeros(3))


def test_backward_zero_upstream_gives_zero_bundle():
    rng = np.random.default_rng(0)
    params = make_mlp(3, [5], 2, rng)
    g = mlp_backward(params, rng.normal(size=3), np.zeros(2))
    assert np.all(g.flat() == 0.0)
    assert np.all(g.input_grad == 0.0)


def test_backward_single_linear_layer_closed_form():
    rng = np.random.default_rng(1)
    w = rng.normal(size=(3, 4))
    params = MlpParams([w], [np.zeros(3)], ["identity"])
    x = rng.normal(size=4)
    g = rng.normal(size=3)
    bundle = mlp_backward(params, x, g)
    assert np.allclose(bundle.weights[0], np.outer(g, x))
    assert np.allclose(bundle.biases[0], g)
    assert np.allclose(bundle.input_grad, w.T @ g)


def test_backward_three_layer_tanh_matches_finite_differences():
    rng = np.random.default_rng(7)
    params = make_mlp(4, [6, 6, 6], 2, rng, hidden_activation="tanh")
    x = rng.normal(size=4)
    upstream = rng.normal(size=2)

    analytic = mlp_backward(params, x, upstream).flat()
    numeric = mlp_finite_difference(
        lambda p: float(upstream @ mlp_forward(p, x)), params, h=1e-5
    )
    assert max_relative_error(analytic, numeric) < 1e-4


def test_backward_batched_sums_over_rows():
    rng = np.random.default_rng(11)
    params = make_mlp(3, [4], 2, rng)
    xs = rng.normal(size=(6, 3))
    gs = rng.normal(size=(6, 2))
    whole = mlp_backward(params, xs, gs)
    acc = None
    for i in range(6):
        b = mlp_backward(params, xs[i], gs[i])
        acc = b if acc is None else acc.add_(b)
    assert np.allclose(whole.flat(), acc.flat())
    assert whole.input_grad.shape == (6, 3)


def test_backward_dimension_mismatch_raises():
    params = _identity_layer(2)
    with pytest.raises(ContractError):
        mlp_backward(params, np.zeros(2), np.zeros(3))


def test_adam_zero_gradient_is_noop_from_fresh_state():
    rng = np.random.default_rng(2)
    params = make_mlp(3, [4], 2, rng)
    state = init_adam(params, learning_rate=0.05)
    zeros = GradBundle(
        [np.zeros_like(w) for w in params.weights],
        [np.zeros_like(b) for b in params.biases],
    )
    new_params, new_state = adam_step(state, params, zeros)
    assert np.array_equal(new_params.flat(), params.flat())
    assert new_state.step_count == state.step_count + 1


def test_adam_first_step_moves_by_learning_rate():
    params = MlpParams([np.array([[0.0]])], [np.zeros(1)], ["identity"])
    state = init_adam(params, learning_rate=1e-3)
    grads = GradBundle([np.array([[1.0]])], [np.zeros(1)])
    new_params, _ = adam_step(state, params, grads)
    delta = new_params.weights[0][0, 0]
    assert delta == pytest.approx(-1e-3, rel=1e-6)


def test_adam_descends_scalar_quadratic():
    # Oracle: 100 Adam steps on f(w) = (w - 3)^2 from w = 0 with lr = 0.1.
    params = MlpParams([np.array([[0.0]])], [np.zeros(1)], ["identity"])
    state = init_adam(params, learning_rate=0.1)
    for _ in range(100):
        w = params.weights[0][0, 0]
        grads = GradBundle([np.array([[2.0 * (w - 3.0)]])], [np.zeros(1)])
        params, state = adam_step(state, params, grads)
    assert abs(params.weights[0][0, 0] - 3.0) < 0.5
    assert state.step_count == 100


def test_adam_rejects_non_finite_gradients():
    params = MlpParams([np.array([[0.0]])], [np.zeros(1)], ["identity"])
    state = init_adam(params)
    grads = GradBundle([np.array([[np.nan]])], [np.zeros(1)])
    with pytest.raises(ContractError):
        adam_step(state, params, grads)


def test_checkpoint_roundtrip_is_bit_exact(tmp_path):
    rng = np.random.default_rng(9)
    params = make_mlp(5, [7, 7], 3, rng, hidden_activation="tanh")
    path = tmp_path / "net.json"
    save_mlp(params, path)
    loaded = load_mlp(path)
    assert loaded.activations == params.activations
    assert np.array_equal(loaded.flat(), params.flat())
    # and the document carries its format version
    doc = json.loads(path.read_text())
    assert doc["format_version"] == 1


def test_checkpoint_rejects_unknown_version(tmp_path):
    rng = np.random.default_rng(9)
    params = make_mlp(2, [3], 1, rng)
    path = tmp_path / "net.json"
    save_mlp(params, path)
    doc = json.loads(path.read_text())
    doc["format_version"] = 99
    path.write_text(json.dumps(doc))
    with pytest.raises(ContractError):
        load_mlp(path)


def test_params_validation_catches_bad_chaining():
    with pytest.raises(ContractError):
        MlpParams(
            [np.zeros((4, 3)), np.zeros((2, 5))],
            [np.zeros(4), np.zeros(2)],
            ["relu", "identity"],
        )
