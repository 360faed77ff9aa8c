import math

import numpy as np
import pytest

from ndfgraph.graph import bundled_graph, dual_barabasi_albert
from ndfgraph.intervals import IntervalsList, increasing_starting_points
from ndfgraph.learn import (
    Adam,
    Dataset,
    MlpArchitecture,
    TrainConfig,
    TrainingDivergedError,
    build_closeness_dataset,
    build_pagerank_dataset,
    closeness_architecture,
    evaluate,
    forward,
    load_model,
    loss_and_grads,
    make_split,
    mean_relative_error,
    mlp_init,
    pagerank_architecture,
    predict,
    save_model,
    train,
)
from ndfgraph.learn.io import read_losses, write_losses
from ndfgraph.learn.mlp import max_relative_error, numeric_grads
from ndfgraph.learn.training import batch_slices


def line_dataset(n=100, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1, 1, size=(n, 1))
    tr, te = make_split(n, 80, seed)
    return Dataset(x, 2 * x[:, 0] + 1, np.arange(n), tr, te)


class TestArchitecture:
    def test_pagerank_reference_net(self):
        a = pagerank_architecture(126)
        assert a.layer_sizes == (126, 400, 800, 200, 64, 8, 1)
        assert a.activations == ("tanh", "relu", "relu", "relu", "tanh")
        assert a.dropout_after == {1: 0.4, 2: 0.5, 3: 0.3}

    def test_closeness_reference_net(self):
        a = closeness_architecture(21)
        assert a.layer_sizes == (21, 64, 8, 1)
        assert a.activations == ("tanh", "relu") and a.dropout_after == {0: 0.3}

    @pytest.mark.parametrize(
        "sizes,acts,drop",
        [((3, 2), (), {}), ((3, 4, 1), (), {}), ((3, 4, 1), ("sigmoid",), {}), ((3, 4, 1), ("tanh",), {0: 1.0}), ((3, 4, 1), ("tanh",), {1: 0.2})],
    )
    def test_invalid(self, sizes, acts, drop):
        with pytest.raises(ValueError):
            MlpArchitecture(sizes, acts, drop)

    def test_dict_round_trip(self):
        a = pagerank_architecture(10)
        assert MlpArchitecture.from_dict(a.to_dict()) == a


class TestInitForward:
    def test_seeded(self):
        a, b = mlp_init(closeness_architecture(5), 3), mlp_init(closeness_architecture(5), 3)
        assert all(np.array_equal(x, y) for x, y in zip(a.parameters(), b.parameters()))

    def test_bounds(self):
        m = mlp_init(pagerank_architecture(126), 0)
        for w, b in zip(m.weights, m.biases):
            bound = 1 / math.sqrt(w.shape[0])
            assert np.abs(w).max() <= bound and np.abs(b).max() <= bound

    def test_two_inputs_one_output(self):
        m = mlp_init(MlpArchitecture((2, 1), ()), 0)
        assert m.n_parameters() == 3

    def test_zero_model(self):
        m = mlp_init(pagerank_architecture(7), zero=True)
        X = np.random.default_rng(0).normal(size=(5, 7))
        assert np.all(forward(m, X) == 0)
        assert np.all(forward(m, X, train_mode=True, dropout_seed=1) == 0)

    def test_single_linear_layer(self):
        m = mlp_init(MlpArchitecture((1, 1), ()), zero=True)
        m.weights[0][0, 0] = 2.0
        m.biases[0][0] = 1.0
        assert forward(m, [[3.0]]).tolist() == [7.0]

    def test_no_dropout_train_equals_eval(self):
        m = mlp_init(MlpArchitecture((4, 6, 1), ("relu",), {0: 0.0}), 2)
        X = np.random.default_rng(1).normal(size=(9, 4))
        assert np.array_equal(forward(m, X, True, 5), forward(m, X))

    def test_shape_mismatch(self):
        m = mlp_init(closeness_architecture(5), 0)
        with pytest.raises(ValueError):
            forward(m, np.zeros((3, 4)))

    def test_dropout_expectation(self):
        # the output is linear in the dropped layer, so the mask average equals eval mode
        m = mlp_init(MlpArchitecture((3, 16, 1), ("tanh",), {0: 0.5}), 4)
        x = np.array([[0.3, -1.2, 0.8]])
        draws = forward(m, np.repeat(x, 10_000, axis=0), train_mode=True, dropout_seed=0)
        sigma = draws.std(ddof=1) / math.sqrt(draws.size)
        assert abs(draws.mean() - forward(m, x)[0]) < 3 * sigma

    def test_dropout_masks_are_inverted(self):
        m = mlp_init(MlpArchitecture((2, 400, 1), ("relu",), {0: 0.25}), 1)
        m.weights[1][:] = 1.0
        m.biases[1][:] = 0.0
        X = np.ones((1, 2))
        ratio = forward(m, X, True, 3)[0] / forward(m, X)[0]
        assert 0.85 < ratio < 1.15


class TestGradients:
    @pytest.mark.parametrize(
        "sizes,acts",
        [((3, 4, 1), ("tanh",)), ((5, 8, 3, 1), ("tanh", "relu")), ((126, 12, 9, 7, 5, 3, 1), ("tanh", "relu", "relu", "relu", "tanh"))],
    )
    def test_central_differences(self, sizes, acts):
        m = mlp_init(MlpArchitecture(sizes, acts), 7)
        rng = np.random.default_rng(3)
        X = rng.normal(size=(11, sizes[0]))
        y = rng.normal(size=11)
        _, gw, gb = loss_and_grads(m, X, y)
        assert max_relative_error([*gw, *gb], numeric_grads(m, X, y, 1e-5)) < 1e-4

    def test_dropout_gradient_with_fixed_mask(self):
        m = mlp_init(MlpArchitecture((4, 6, 1), ("tanh",), {0: 0.5}), 1)
        X = np.random.default_rng(0).normal(size=(5, 4))
        y = np.ones(5)
        l1, gw1, _ = loss_and_grads(m, X, y, np.random.default_rng(42))
        l2, gw2, _ = loss_and_grads(m, X, y, np.random.default_rng(42))
        assert l1 == l2 and all(np.array_equal(a, b) for a, b in zip(gw1, gw2))


class TestAdam:
    def test_two_parameter_steps(self):
        p = np.array([1.0, -2.0])
        opt = Adam([p], lr=0.1)
        grads = [np.array([0.5, -1.0]), np.array([0.5, 0.5])]
        ref = [1.0, -2.0]
        m = [0.0, 0.0]
        v = [0.0, 0.0]
        for t, g in enumerate(grads, start=1):
            opt.step([g])
            for i in range(2):
                m[i] = 0.9 * m[i] + 0.1 * g[i]
                v[i] = 0.999 * v[i] + 0.001 * g[i] ** 2
                mhat = m[i] / (1 - 0.9**t)
                vhat = v[i] / (1 - 0.999**t)
                ref[i] -= 0.1 * mhat / (math.sqrt(vhat) + 1e-8)
            np.testing.assert_allclose(p, ref, rtol=0, atol=1e-15)

    def test_first_step_is_lr_sign(self):
        p = np.array([0.0, 0.0])
        Adam([p], lr=0.01).step([np.array([3.0, -0.02])])
        np.testing.assert_allclose(p, [-0.01, 0.01], rtol=1e-6)


class TestTraining:
    def test_learns_a_line(self):
        data = line_dataset()
        m = mlp_init(MlpArchitecture((1, 8, 1), ("tanh",)), 0)
        result = train(m, data, TrainConfig(learning_rate=0.01, epochs=500, batches_per_epoch=4))
        pred = predict(m, data.features[data.test_idx])
        assert np.mean((pred - data.targets[data.test_idx]) ** 2) < 1e-2
        assert result.losses[-1] < result.losses[0]

    def test_zero_lr_keeps_parameters(self):
        data = line_dataset()
        m = mlp_init(closeness_architecture(1), 0)
        before = [p.copy() for p in m.parameters()]
        train(m, data, TrainConfig(learning_rate=0.0, epochs=3))
        assert all(np.array_equal(a, b) for a, b in zip(before, m.parameters()))

    def test_bit_identical_reruns(self):
        data = line_dataset()
        runs = []
        for _ in range(2):
            m = mlp_init(closeness_architecture(1), 5)
            runs.append(train(m, data, TrainConfig(epochs=20, batches_per_epoch=3, seed=9)).losses)
        assert runs[0] == runs[1]

    def test_divergence_guard(self):
        data = line_dataset()
        data.targets[:] = 1e200
        m = mlp_init(MlpArchitecture((1, 4, 1), ("relu",)), 0)
        with np.errstate(over="ignore", invalid="ignore"), pytest.raises(TrainingDivergedError, match="non-finite loss"):
            train(m, data, TrainConfig(epochs=2))

    def test_batches(self):
        assert [s.stop - s.start for s in batch_slices(10000, 25)] == [400] * 25
        assert [s.stop - s.start for s in batch_slices(103, 4)] == [25, 25, 25, 28]
        assert TrainConfig(batches_per_epoch=None, batch_size=400).n_batches(10000) == 25

    @pytest.mark.parametrize(
        "kw", [dict(learning_rate=-1), dict(target_scale=0), dict(batch_size=10), dict(batches_per_epoch=0)]
    )
    def test_config_validation(self, kw):
        with pytest.raises(ValueError):
            TrainConfig(**kw)

    def test_dataset_validation(self):
        with pytest.raises(ValueError):
            Dataset(np.zeros((3, 1)), np.zeros(3), np.arange(3), [0, 1], [1, 2])
        with pytest.raises(ValueError):
            Dataset(np.zeros((3, 1)), np.zeros(2), np.arange(3), [0], [1, 2])

    def test_split(self):
        tr, te = make_split(50, 30, 1)
        assert len(tr) == 30 and len(te) == 20
        assert sorted(np.concatenate([tr, te]).tolist()) == list(range(50))
        assert np.array_equal(make_split(50, 30, 1)[0], tr)


class TestMetric:
    def test_examples(self):
        assert mean_relative_error([1, 2], [1, 2]) == 0
        assert abs(mean_relative_error([1.1, 2.2], [1, 2]) - 10) < 1e-12
        assert mean_relative_error([1, 3], [2, 2]) == 50

    @pytest.mark.parametrize("targets", [[0, 1], [-1, 1]])
    def test_non_positive_targets(self, targets):
        with pytest.raises(ValueError):
            mean_relative_error([1, 1], targets)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            mean_relative_error([1, 2, 3], [1, 2])


class TestDatasets:
    def test_pagerank_feature_lengths(self):
        g = dual_barabasi_albert(400, 0.5, 3, 1, 1)
        I17 = IntervalsList(tuple(range(1, 18)))
        assert build_pagerank_dataset(g, I17, 5).n_features == 102
        assert build_pagerank_dataset(g, IntervalsList(tuple(range(1, 44))), 3).n_features == 172
        inward = g.as_bidirected()
        I15 = IntervalsList(tuple(range(0, 15)), zero_based=True)
        assert build_pagerank_dataset(inward, I15, 5, discounted=True, direction="inward").n_features == 90

    def test_pagerank_targets_scaled(self):
        g = bundled_graph("karate")
        I = increasing_starting_points(g.max_degree(), 4, 1, 1.5)
        data = build_pagerank_dataset(g, I, 2, scale=1000, split_seed=3, train_count=20)
        from ndfgraph.centrality import pagerank

        np.testing.assert_allclose(data.targets, pagerank(g) * 1000)
        assert len(data.train_idx) == 20 and data.target_scale == 1000

    def test_closeness_dataset(self):
        g = bundled_graph("lesmis")
        I = IntervalsList((1, 2, 3, 5, 8, 13))
        for p in (0.3, 0.2, 0.15):
            data = build_closeness_dataset(g, I, 2, p, split_seed=0, train_count=50)
            assert data.n_features == len(I)
        from ndfgraph.centrality import closeness

        np.testing.assert_allclose(data.targets, closeness(g))


class TestSerialization:
    def test_model_round_trip(self, tmp_path):
        m = mlp_init(pagerank_architecture(9), 11)
        save_model(m, tmp_path / "m.json", {"note": "x"})
        back, cfg = load_model(tmp_path / "m.json")
        assert cfg == {"note": "x"} and back.arch == m.arch
        assert all(np.array_equal(a, b) for a, b in zip(m.parameters(), back.parameters()))

    def test_losses_round_trip(self, tmp_path):
        losses = [0.1, 1 / 3, 2.5e-17]
        write_losses(losses, tmp_path / "l.csv")
        assert read_losses(tmp_path / "l.csv") == losses

    def test_evaluate_helper(self):
        data = line_dataset()
        data.targets[:] = np.abs(data.targets) + 1
        m = mlp_init(MlpArchitecture((1, 1), ()), zero=True)
        m.biases[0][0] = 1.0
        err = evaluate(m, data)
        want = mean_relative_error(np.ones(len(data.test_idx)), data.targets[data.test_idx])
        assert err == want
