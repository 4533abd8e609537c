import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hawkcast.elm import (
    ElmModel,
    SupervisedSet,
    decode_parameters,
    encode_parameters,
    hidden_matrix,
    load_model,
    predict,
    pseudoinverse,
    save_model,
    sigmoid,
    train,
)
from hawkcast.errors import DegenerateData, DimensionMismatch, LengthMismatch, Untrained


def random_instance(rng, N=None, L=None, n=None, m=1):
    N = N or int(rng.integers(1, 21))
    L = L or int(rng.integers(1, 9))
    n = n or int(rng.integers(1, 4))
    model = ElmModel.random(L, n, rng)
    data = SupervisedSet(rng.normal(size=(N, n)), rng.normal(size=(N, m)))
    return model, data


def test_sigmoid_values():
    assert sigmoid(0.0) == 0.5
    assert sigmoid(math.log(3.0)) == pytest.approx(0.75)
    big = sigmoid(np.array([-800.0, 800.0]))
    assert np.all(np.isfinite(big)) and big[0] == 0.0 and big[1] == 1.0


def test_hidden_matrix_zero_weights():
    model = ElmModel(np.zeros((4, 3)), np.zeros(4))
    np.testing.assert_array_equal(hidden_matrix(model, np.ones((5, 3))), np.full((5, 4), 0.5))


def test_hidden_matrix_single_neuron():
    model = ElmModel([[1.0]], [0.0])
    np.testing.assert_array_equal(hidden_matrix(model, [[0.0]]), [[0.5]])


def test_hidden_matrix_identity_weights():
    model = ElmModel(np.eye(2), np.zeros(2))
    H = hidden_matrix(model, [[math.log(3.0), 0.0]])
    assert H[0, 0] == pytest.approx(0.75)
    assert H[0, 1] == pytest.approx(0.5)


def test_hidden_matrix_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        hidden_matrix(ElmModel(np.eye(2), np.zeros(2)), np.ones((3, 5)))


def test_model_shape_validation():
    with pytest.raises(DimensionMismatch):
        ElmModel(np.eye(2), np.zeros(3))
    with pytest.raises(ValueError):
        ElmModel(np.eye(2), np.zeros(2), activation="relu6")


def test_square_system_interpolates():
    rng = np.random.default_rng(0)
    model, data = random_instance(rng, N=6, L=6, n=2)
    trained, residual = train(model, data)
    assert residual < 1e-8
    np.testing.assert_allclose(predict(trained, data.inputs), data.targets, atol=1e-6)


def test_zero_targets():
    rng = np.random.default_rng(1)
    model = ElmModel.random(3, 2, rng)
    trained, residual = train(model, SupervisedSet(rng.normal(size=(5, 2)), np.zeros(5)))
    np.testing.assert_array_equal(trained.output_weights, np.zeros((3, 1)))
    assert residual == 0.0


def test_single_neuron_normal_equation():
    # beta = sum(h t) / sum(h^2) with h_t = sigmoid(w x_t + b), evaluated with math only
    w, b = 0.7, -0.2
    xs, ts = [-1.0, 0.5, 2.0], [0.3, 1.1, 0.4]
    h = [1.0 / (1.0 + math.exp(-(w * x + b))) for x in xs]
    beta = sum(hi * ti for hi, ti in zip(h, ts)) / sum(hi * hi for hi in h)
    trained, residual = train(ElmModel([[w]], [b]), SupervisedSet([[x] for x in xs], ts))
    assert trained.output_weights[0, 0] == pytest.approx(beta, abs=1e-12)
    assert residual == pytest.approx(math.sqrt(sum((beta * hi - ti) ** 2 for hi, ti in zip(h, ts))), abs=1e-12)
    pred = predict(trained, [[1.0]])
    assert pred[0, 0] == pytest.approx(beta / (1.0 + math.exp(-(w + b))), abs=1e-12)


def test_zero_beta_predicts_zero():
    model = ElmModel(np.ones((2, 1)), np.zeros(2), np.zeros((2, 1)))
    np.testing.assert_array_equal(predict(model, [[1.0], [5.0]]), np.zeros((2, 1)))


def test_train_rejects_empty():
    with pytest.raises(DegenerateData):
        train(ElmModel(np.eye(2), np.zeros(2)), SupervisedSet(np.zeros((0, 2)), np.zeros((0, 1))))


def test_predict_untrained():
    with pytest.raises(Untrained):
        predict(ElmModel(np.eye(2), np.zeros(2)), np.ones((1, 2)))


def test_least_squares_optimality():
    rng = np.random.default_rng(7)
    for _ in range(10):
        model, data = random_instance(rng)
        trained, residual = train(model, data)
        H = hidden_matrix(model, data.inputs)
        for _ in range(1000):
            beta = trained.output_weights + rng.normal(scale=rng.choice([1e-6, 1e-3, 1.0]), size=trained.output_weights.shape)
            assert residual <= np.linalg.norm(H @ beta - data.targets) + 1e-9


@given(st.integers(0, 2**32 - 1))
def test_pseudoinverse_identity(seed):
    rng = np.random.default_rng(seed)
    N, L = sorted(rng.integers(1, 10, size=2))[::-1]
    H = rng.normal(size=(N, L))
    np.testing.assert_allclose(H @ pseudoinverse(H) @ H, H, atol=1e-8)


def test_pseudoinverse_drops_tiny_singular_values():
    H = np.diag([1.0, 1e-12])
    np.testing.assert_array_equal(pseudoinverse(H), np.diag([1.0, 0.0]))


@given(st.integers(0, 2**32 - 1))
def test_prediction_linear_in_beta(seed):
    rng = np.random.default_rng(seed)
    W, b = rng.normal(size=(4, 2)), rng.normal(size=4)
    b1, b2 = rng.normal(size=(4, 1)), rng.normal(size=(4, 1))
    X = rng.normal(size=(6, 2))
    total = predict(ElmModel(W, b, b1 + b2), X)
    parts = predict(ElmModel(W, b, b1), X) + predict(ElmModel(W, b, b2), X)
    np.testing.assert_allclose(total, parts, atol=1e-12)


def test_training_deterministic():
    rng = np.random.default_rng(3)
    model, data = random_instance(rng, N=12, L=5, n=3)
    a, _ = train(model, data)
    b, _ = train(model, data)
    assert a.output_weights.tobytes() == b.output_weights.tobytes()


# -- codec ----------------------------------------------------------------------


@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_codec_round_trip(L, n, seed):
    v = np.random.default_rng(seed).normal(size=L * n + L)
    W, b = decode_parameters(v, L, n)
    assert W.shape == (L, n) and b.shape == (L,)
    np.testing.assert_array_equal(encode_parameters(ElmModel(W, b)), v)


def test_codec_layout():
    v = np.arange(8.0)
    W, b = decode_parameters(v, 2, 3)
    np.testing.assert_array_equal(W, [[0, 1, 2], [3, 4, 5]])
    np.testing.assert_array_equal(b, [6, 7])
    W0, b0 = decode_parameters(np.zeros(8), 2, 3)
    assert not W0.any() and not b0.any()


def test_codec_length_mismatch():
    with pytest.raises(LengthMismatch):
        decode_parameters(np.zeros(7), 2, 3)


def test_save_load_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    model, data = random_instance(rng, N=10, L=4, n=3, m=2)
    trained, _ = train(model, data)
    path = tmp_path / "model.txt"
    save_model(trained, path)
    assert path.read_text().splitlines()[0] == "ELM 4 3 2 sigmoid"
    loaded = load_model(path)
    np.testing.assert_array_equal(predict(loaded, data.inputs), predict(trained, data.inputs))


def test_save_untrained(tmp_path):
    with pytest.raises(Untrained):
        save_model(ElmModel(np.eye(2), np.zeros(2)), tmp_path / "m.txt")


def test_load_rejects_garbage(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("NOT A MODEL\n")
    with pytest.raises(ValueError):
        load_model(p)
