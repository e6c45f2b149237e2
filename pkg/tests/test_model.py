from __future__ import annotations

import math

import numpy as np
import pytest

from finsent import model
from finsent.corpus import Sentiment
from finsent.errors import ParseError, ValidationError
from helpers import (
    max_relative_grad_error,
    perturbed_params,
    random_table,
    separable_corpus,
)

TINY = model.CnnConfig(
    feature_dim=2,
    max_len=3,
    filter_widths=(2,),
    filters_per_width=1,
    hidden_size=4,
    dropout=(0.0, 0.0),
    seed=3,
)


def zero_params(cfg: model.CnnConfig) -> model.CnnParams:
    params = model.init_params(cfg)
    for _, tensor in params.named_tensors():
        tensor[...] = 0.0
    return params


class TestInitParams:
    def test_same_seed_identical(self):
        a = model.init_params(TINY, seed=7)
        b = model.init_params(TINY, seed=7)
        for (_, ta), (_, tb) in zip(a.named_tensors(), b.named_tensors()):
            np.testing.assert_array_equal(ta, tb)

    def test_different_seeds_differ(self):
        a = model.init_params(TINY, seed=7)
        b = model.init_params(TINY, seed=8)
        assert any(
            not np.array_equal(ta, tb)
            for (_, ta), (_, tb) in zip(a.named_tensors(), b.named_tensors())
        )

    def test_biases_zero(self):
        params = model.init_params(TINY)
        assert not params.conv_biases[2].any()
        assert not params.dense1_bias.any()
        assert not params.dense2_bias.any()

    def test_shapes(self):
        cfg = model.CnnConfig(feature_dim=5, max_len=8, filter_widths=(2, 3),
                              filters_per_width=4, hidden_size=6)
        params = model.init_params(cfg)
        assert params.conv_kernels[2].shape == (2, 5, 4)
        assert params.conv_kernels[3].shape == (3, 5, 4)
        assert params.dense1_weight.shape == (8, 6)
        assert params.dense2_weight.shape == (6, 3)


class TestConfigValidation:
    def test_width_exceeding_max_len(self):
        with pytest.raises(ValidationError):
            model.CnnConfig(max_len=2, filter_widths=(3,))

    def test_dropout_bounds(self):
        with pytest.raises(ValidationError):
            model.CnnConfig(dropout=(0.5, 1.0))

    def test_empty_widths(self):
        with pytest.raises(ValidationError):
            model.CnnConfig(filter_widths=())


class TestForward:
    def test_zero_params_uniform(self):
        params = zero_params(TINY)
        x = np.random.default_rng(0).normal(size=(4, 3, 2))
        probs = model.forward(params, x)
        np.testing.assert_allclose(probs, np.full((4, 3), 1 / 3))

    def test_output_shape_contract(self):
        cfg = model.CnnConfig(feature_dim=301, max_len=40, filter_widths=(3, 4, 5),
                              filters_per_width=4, hidden_size=8)
        params = model.init_params(cfg)
        x = np.random.default_rng(1).normal(size=(2, 40, 301))
        assert model.forward(params, x).shape == (2, 3)

    def test_rows_sum_to_one(self):
        params = perturbed_params(TINY)
        x = np.random.default_rng(2).normal(size=(8, 3, 2))
        probs = model.forward(params, x)
        np.testing.assert_allclose(probs.sum(axis=1), np.ones(8), atol=1e-9)
        assert (probs > 0).all() and (probs < 1).all()

    def test_hand_computed_probabilities(self):
        # Width-2 conv over a length-3 doc gives two windows:
        #   t0 = 1(.1) + 2(-.1) + 3(.2) + 4(.3) + .05 = 1.75
        #   t1 = 3(.1) + 4(-.1) + 5(.2) + 6(.3) + .05 = 2.75  <- max pool
        # dense1: [2.75*.5 + .1, 2.75*(-1) + .2] = [1.475, -2.55] -> ReLU [1.475, 0]
        # logits: [.295, -.3425, .0475], then softmax.
        cfg = model.CnnConfig(feature_dim=2, max_len=3, filter_widths=(2,),
                              filters_per_width=1, hidden_size=2, dropout=(0.0, 0.0))
        params = zero_params(cfg)
        params.conv_kernels[2][:] = np.array([[[0.1], [-0.1]], [[0.2], [0.3]]])
        params.conv_biases[2][:] = [0.05]
        params.dense1_weight[:] = [[0.5, -1.0]]
        params.dense1_bias[:] = [0.1, 0.2]
        params.dense2_weight[:] = [[0.2, -0.3, 0.1], [1.0, 1.0, 1.0]]
        params.dense2_bias[:] = [0.0, 0.1, -0.1]

        x = np.array([[[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]])
        probs = model.forward(params, x)[0]

        logits = [0.295, -0.3425, 0.0475]
        exps = [math.exp(v) for v in logits]
        expected = [e / sum(exps) for e in exps]
        np.testing.assert_allclose(probs, expected, atol=1e-12)

    def test_shape_mismatch_rejected(self):
        params = model.init_params(TINY)
        with pytest.raises(ValidationError):
            model.forward(params, np.zeros((2, 3, 5)))

    def test_train_mode_requires_rng_and_cfg(self):
        params = model.init_params(TINY)
        with pytest.raises(ValidationError):
            model.forward(params, np.zeros((1, 3, 2)), train_mode=True)

    def test_pad_permutation_invariance_zero_bias(self):
        # pads are zero rows; on a zero-bias net shuffling them changes nothing
        cfg = model.CnnConfig(feature_dim=4, max_len=8, filter_widths=(2, 3),
                              filters_per_width=3, hidden_size=5, dropout=(0.0, 0.0))
        params = model.init_params(cfg)  # biases stay zero
        rng = np.random.default_rng(5)
        x = np.zeros((1, 8, 4))
        x[0, :3] = rng.normal(size=(3, 4))  # 3 real tokens, 5 pads
        base = model.forward(params, x)
        shuffled = x.copy()
        shuffled[0, 3:] = shuffled[0, np.array([5, 7, 3, 6, 4])]
        np.testing.assert_array_equal(model.forward(params, shuffled), base)


class TestLossAndGrad:
    def test_uniform_prediction_loss_is_ln3(self):
        params = zero_params(TINY)
        x = np.random.default_rng(0).normal(size=(5, 3, 2))
        loss, _ = model.loss_and_grad(params, x, [0, 1, 2, 1, 0])
        assert loss == pytest.approx(math.log(3), abs=1e-12)

    def test_confident_prediction_loss_near_zero(self):
        params = zero_params(TINY)
        params.dense2_bias[:] = [50.0, 0.0, 0.0]
        x = np.random.default_rng(0).normal(size=(3, 3, 2))
        loss, _ = model.loss_and_grad(params, x, [0, 0, 0])
        assert loss < 1e-9

    def test_gradients_match_finite_differences(self):
        params = perturbed_params(TINY, seed=11)
        rng = np.random.default_rng(11)
        x = rng.normal(size=(4, 3, 2))
        y = np.array([0, 1, 2, 1])
        assert max_relative_grad_error(params, x, y) < 1e-6

    def test_gradients_match_with_multiple_widths(self):
        cfg = model.CnnConfig(feature_dim=3, max_len=6, filter_widths=(2, 3),
                              filters_per_width=2, hidden_size=4, dropout=(0.0, 0.0))
        params = perturbed_params(cfg, seed=13)
        rng = np.random.default_rng(13)
        x = rng.normal(size=(3, 6, 3))
        y = np.array([2, 0, 1])
        assert max_relative_grad_error(params, x, y) < 1e-6

    def test_grad_shapes_match_params(self):
        params = perturbed_params(TINY)
        x = np.random.default_rng(1).normal(size=(2, 3, 2))
        _, grads = model.loss_and_grad(params, x, [0, 2])
        for (name, p), (gname, g) in zip(params.named_tensors(), grads.named_tensors()):
            assert name == gname and p.shape == g.shape

    def test_label_domain_checked(self):
        params = model.init_params(TINY)
        x = np.zeros((1, 3, 2))
        with pytest.raises(ValidationError):
            model.loss_and_grad(params, x, [3])

    def test_dropout_draws_from_rng(self):
        cfg = model.CnnConfig(feature_dim=2, max_len=3, filter_widths=(2,),
                              filters_per_width=8, hidden_size=8, dropout=(0.5, 0.5))
        params = perturbed_params(cfg)
        x = np.random.default_rng(2).normal(size=(4, 3, 2))
        out_a = model.forward(params, x, train_mode=True,
                              rng=np.random.default_rng(9), cfg=cfg)
        out_b = model.forward(params, x, train_mode=True,
                              rng=np.random.default_rng(9), cfg=cfg)
        out_c = model.forward(params, x, train_mode=True,
                              rng=np.random.default_rng(10), cfg=cfg)
        np.testing.assert_array_equal(out_a, out_b)
        assert not np.array_equal(out_a, out_c)


@pytest.fixture(scope="module")
def separable():
    table = random_table(dim=16)
    docs, labels = separable_corpus(200, table, max_len=12)
    data = model.Dataset.from_docs(docs, labels)
    return model.train_test_split(data, 0.15, seed=1)


class TestTrain:
    def test_learns_separable_fixture(self, separable):
        train_set, test_set = separable
        cfg = model.CnnConfig(feature_dim=16, max_len=12, filter_widths=(2, 3),
                              filters_per_width=16, hidden_size=32, dropout=(0.2, 0.2),
                              epochs=30, batch_size=32, seed=5)
        params, report, _ = model.train(cfg, train_set, test_set)
        assert report.max_weighted_f1 >= 0.95
        assert report.best_weighted_epoch <= 30
        preds = model.predict(params, test_set.x)
        accuracy = np.mean([p.class_index == y for p, y in zip(preds, test_set.y)])
        assert accuracy > 0.8

    def test_loss_non_increasing_with_small_lr(self, separable):
        train_set, test_set = separable
        cfg = model.CnnConfig(feature_dim=16, max_len=12, filter_widths=(2,),
                              filters_per_width=8, hidden_size=16, dropout=(0.0, 0.0),
                              learning_rate=5e-4, epochs=10, batch_size=32, seed=2)
        _, report, _ = model.train(cfg, train_set, test_set)
        losses = [r.train_loss for r in report.records]
        for earlier, later in zip(losses, losses[1:]):
            assert later <= earlier + 1e-3

    def test_deterministic_given_seed(self, separable):
        train_set, test_set = separable
        cfg = model.CnnConfig(feature_dim=16, max_len=12, filter_widths=(2,),
                              filters_per_width=4, hidden_size=8, epochs=3, seed=7)
        _, report_a, _ = model.train(cfg, train_set, test_set)
        _, report_b, _ = model.train(cfg, train_set, test_set)
        assert report_a == report_b

    def test_zero_epochs_returns_init(self, separable):
        train_set, test_set = separable
        cfg = model.CnnConfig(feature_dim=16, max_len=12, filter_widths=(2,),
                              filters_per_width=4, hidden_size=8, epochs=0, seed=7)
        params, report, _ = model.train(cfg, train_set, test_set)
        assert report.records == ()
        assert report.max_macro_f1 is None
        init = model.init_params(cfg)
        for (_, a), (_, b) in zip(params.named_tensors(), init.named_tensors()):
            np.testing.assert_array_equal(a, b)

    def test_empty_split_rejected(self, separable):
        train_set, _ = separable
        empty = model.Dataset(np.zeros((0, 12, 16)), np.zeros(0, dtype=np.int64))
        with pytest.raises(ValidationError):
            model.train(model.CnnConfig(feature_dim=16, max_len=12), train_set, empty)

    def test_report_maxima_consistent(self):
        records = (
            model.EpochRecord(1, 1.0, 0.3, 0.5),
            model.EpochRecord(2, 0.8, 0.6, 0.7),
            model.EpochRecord(3, 0.9, 0.4, 0.65),
        )
        report = model.TrainReport(records)
        assert report.max_macro_f1 == 0.6
        assert report.max_weighted_f1 == 0.7
        assert report.best_macro_epoch == 2
        assert report.final.epoch == 3


class TestSplit:
    def test_sizes_and_disjointness(self):
        data = model.Dataset(np.arange(200 * 6, dtype=float).reshape(200, 3, 2),
                             np.zeros(200, dtype=np.int64))
        train_set, test_set = model.train_test_split(data, 0.15, seed=0)
        assert len(test_set) == 30 and len(train_set) == 170
        train_rows = {tuple(r.ravel()) for r in train_set.x}
        test_rows = {tuple(r.ravel()) for r in test_set.x}
        assert not train_rows & test_rows

    def test_degenerate_fraction_rejected(self):
        data = model.Dataset(np.zeros((3, 3, 2)), np.zeros(3, dtype=np.int64))
        with pytest.raises(ValidationError):
            model.train_test_split(data, 0.01, seed=0)


class TestPredict:
    def test_uniform_ties_break_to_negative(self):
        params = zero_params(TINY)
        x = np.random.default_rng(0).normal(size=(3, 3, 2))
        assert model.predict(params, x) == [Sentiment.NEGATIVE] * 3

    def test_singleton_equals_batch(self):
        params = perturbed_params(TINY)
        x = np.random.default_rng(4).normal(size=(6, 3, 2))
        batched = model.predict(params, x)
        single = [model.predict(params, x[i : i + 1])[0] for i in range(6)]
        assert batched == single

    def test_nonfinite_params_rejected(self):
        params = model.init_params(TINY)
        params.dense1_weight[0, 0] = np.nan
        with pytest.raises(ValidationError):
            model.predict(params, np.zeros((1, 3, 2)))


class TestAllNeutral:
    def test_empty(self):
        assert model.allneutral_predict(0) == []

    def test_three(self):
        assert model.allneutral_predict(3) == [Sentiment.NEUTRAL] * 3

    def test_negative_rejected(self):
        with pytest.raises(ValidationError):
            model.allneutral_predict(-1)


class TestCheckpoint:
    def test_roundtrip(self, tmp_path):
        cfg = model.CnnConfig(feature_dim=4, max_len=6, filter_widths=(2, 3),
                              filters_per_width=3, hidden_size=5, seed=9)
        params = model.init_params(cfg)
        state = model.AdamState.create(params)
        state.step = 17
        path = tmp_path / "ck.bin"
        model.save_checkpoint(path, cfg, params, state)
        cfg2, params2, state2, seed = model.load_checkpoint(path)
        assert cfg2 == cfg and seed == 9 and state2.step == 17
        for (na, ta), (nb, tb) in zip(params.named_tensors(), params2.named_tensors()):
            assert na == nb
            np.testing.assert_allclose(ta, tb, atol=1e-6)  # float32 storage

    def test_bytes_deterministic(self, tmp_path):
        cfg = model.CnnConfig(feature_dim=3, max_len=4, filter_widths=(2,),
                              filters_per_width=2, hidden_size=3, seed=1)
        params = model.init_params(cfg)
        model.save_checkpoint(tmp_path / "a.bin", cfg, params)
        model.save_checkpoint(tmp_path / "b.bin", cfg, params)
        assert (tmp_path / "a.bin").read_bytes() == (tmp_path / "b.bin").read_bytes()

    def test_optimizer_state_optional(self, tmp_path):
        cfg = model.CnnConfig(feature_dim=3, max_len=4, filter_widths=(2,),
                              filters_per_width=2, hidden_size=3)
        model.save_checkpoint(tmp_path / "ck.bin", cfg, model.init_params(cfg))
        _, _, state, _ = model.load_checkpoint(tmp_path / "ck.bin")
        assert state is None

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "ck.bin"
        path.write_bytes(b"NOTACKPT" + b"\x00" * 16)
        with pytest.raises(ParseError, match="magic"):
            model.load_checkpoint(path)

    def test_truncated_payload(self, tmp_path):
        cfg = model.CnnConfig(feature_dim=3, max_len=4, filter_widths=(2,),
                              filters_per_width=2, hidden_size=3)
        path = tmp_path / "ck.bin"
        model.save_checkpoint(path, cfg, model.init_params(cfg))
        path.write_bytes(path.read_bytes()[:-10])
        with pytest.raises(ParseError, match="truncated"):
            model.load_checkpoint(path)
