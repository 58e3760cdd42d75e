"""Linear models, decoders, and the two training loops."""

import random

import pytest
from hypothesis import given, strategies as st

from eqparse.learning import (
    ExhaustiveDecoder,
    LinearModel,
    MODEL_HEADER,
    SupersetExample,
    TrainConfig,
    add_scaled,
    dot,
    model_from_text,
    model_to_text,
    predict,
    subtract,
    train_structured,
    train_superset,
)


def indicator_features(x, y):
    return {f"xy={x}:{y}": 1.0, f"y={y}": 1.0}


def toy_decoder(space):
    return ExhaustiveDecoder(lambda x: list(space),
                             indicator_features)


class TestVectorOps:
    def test_dot(self):
        assert dot({"a": 2.0, "b": 1.0}, {"a": 3.0, "c": 9.0}) == 6.0

    def test_add_scaled(self):
        acc = {"a": 1.0}
        add_scaled(acc, {"a": 2.0, "b": 1.0}, 0.5)
        assert acc == {"a": 2.0, "b": 0.5}

    def test_subtract_prunes_exact_zeros(self):
        out = subtract({"a": 1.0, "b": 2.0}, {"a": 1.0})
        assert out == {"b": 2.0}


class TestModelSerialization:
    def test_header_and_sorted_features(self):
        text = model_to_text(LinearModel({"b": 2.0, "a": -0.5}))
        lines = text.splitlines()
        assert lines[0] == MODEL_HEADER
        assert lines[2] == "a\t-0.5"
        assert lines[3] == "b\t2.0"

    def test_rejects_tab_in_name(self):
        with pytest.raises(ValueError):
            model_to_text(LinearModel({"a\tb": 1.0}))

    def test_rejects_bad_header(self):
        with pytest.raises(ValueError):
            model_from_text("not a model\n{}\n")

    @given(st.dictionaries(
        st.text(st.characters(blacklist_characters="\t"), min_size=1,
                max_size=12).filter(lambda s: s.splitlines() == [s]),
        st.floats(allow_nan=False, allow_infinity=False, width=64),
        max_size=8))
    def test_roundtrip_bit_exact(self, weights):
        model = LinearModel(dict(weights))
        back = model_from_text(model_to_text(model))
        assert back.weights == model.weights
        assert back.config == model.config


class TestExhaustiveDecoder:
    def test_zero_model_picks_first(self):
        decoder = toy_decoder(["a", "b", "c"])
        assert predict(LinearModel({}), 0, decoder) == "a"

    def test_unique_positive_indicator_dominates(self):
        decoder = toy_decoder(["a", "b", "c"])
        model = LinearModel({"y=c": 1.0})
        assert predict(model, 0, decoder) == "c"

    def test_scores_match_exhaustive_dot_products(self):
        space = [(i, j) for i in range(8) for j in range(8)]  # 64 candidates
        decoder = ExhaustiveDecoder(
            lambda x: list(space),
            lambda x, y: {f"i={y[0]}": 1.0, f"j={y[1]}": float(y[1])})
        rng = random.Random(5)
        weights = {f"i={i}": rng.uniform(-1, 1) for i in range(8)}
        weights.update({f"j={j}": rng.uniform(-1, 1) for j in range(8)})
        best = max(space, key=lambda y: dot(weights, decoder.feature_fn(0, y)))
        got = decoder.decode(0, weights)
        assert dot(weights, decoder.feature_fn(0, got)) == pytest.approx(
            dot(weights, decoder.feature_fn(0, best)), abs=0)

    def test_cost_augmentation_shifts_argmax(self):
        decoder = toy_decoder(["a", "b"])
        # zero weights: plain decode gives "a"; with gold "a", the 0/1 cost
        # pushes the search toward the most-violating candidate "b"
        assert decoder.decode(0, {}) == "a"
        assert decoder.decode(0, {}, gold="a") == "b"

    def test_empty_space_raises(self):
        decoder = ExhaustiveDecoder(lambda x: [], indicator_features)
        with pytest.raises(ValueError):
            decoder.decode(0, {})

    def test_contains(self):
        decoder = toy_decoder(["a", "b"])
        assert decoder.contains(0, "b")
        assert not decoder.contains(0, "z")


class TestTrainStructured:
    def test_separable_toy_set(self):
        examples = [(0, "a"), (1, "b")]
        decoder = toy_decoder(["a", "b"])
        model = train_structured(examples, decoder, indicator_features,
                                 TrainConfig())
        for x, gold in examples:
            other = "b" if gold == "a" else "a"
            assert (model.score(indicator_features(x, gold))
                    > model.score(indicator_features(x, other)))

    def test_zero_epochs_zero_model(self):
        model = train_structured([(0, "a")], toy_decoder(["a", "b"]),
                                 indicator_features, TrainConfig(epochs=0))
        assert model.weights == {}

    def test_same_seed_bitwise_identical(self):
        examples = [(0, "a"), (1, "b"), (2, "a")]
        decoder = toy_decoder(["a", "b"])
        m1 = train_structured(examples, decoder, indicator_features,
                              TrainConfig(seed=3))
        m2 = train_structured(examples, decoder, indicator_features,
                              TrainConfig(seed=3))
        assert m1.weights == m2.weights
        assert model_to_text(m1) == model_to_text(m2)

    def test_gold_outside_space_rejected(self):
        with pytest.raises(ValueError, match="candidate space"):
            train_structured([(0, "z")], toy_decoder(["a", "b"]),
                             indicator_features, TrainConfig())


class TestTrainSuperset:
    def test_empty_gold_set_rejected(self):
        with pytest.raises(ValueError):
            train_superset([SupersetExample(0, ())], toy_decoder(["a"]),
                           indicator_features, TrainConfig())

    def test_singleton_golds_match_structured_training(self):
        pairs = [(0, "a"), (1, "b"), (2, "a")]
        decoder = toy_decoder(["a", "b"])
        structured = train_structured(pairs, decoder, indicator_features,
                                      TrainConfig())
        superset = train_superset(
            [SupersetExample(x, (y,)) for x, y in pairs], decoder,
            indicator_features, TrainConfig())
        assert superset.weights == structured.weights

    def test_toy_task_converges_and_separates(self):
        # output space of 4; gold sets share y=1, so selection can settle
        space = [0, 1, 2, 3]
        decoder = toy_decoder(space)
        examples = [SupersetExample(0, (1, 3)), SupersetExample(1, (1, 2)),
                    SupersetExample(2, (1, 0))]
        model = train_superset(examples, decoder, indicator_features,
                               TrainConfig())
        more = train_superset(examples, decoder, indicator_features,
                              TrainConfig(max_outer_iters=20))
        assert model.weights == more.weights  # converged before the cap
        for ex in examples:
            best_gold = max(model.score(indicator_features(ex.x, y))
                            for y in ex.gold_set)
            for y in space:
                if y in ex.gold_set:
                    continue
                assert best_gold > model.score(indicator_features(ex.x, y))

    def test_outer_iteration_cap_is_exact(self):
        # with one outer iteration the model is exactly structured training
        # on the first member of each gold set (zero-model selection)
        decoder = toy_decoder([0, 1, 2, 3])
        examples = [SupersetExample(0, (2, 1)), SupersetExample(1, (3, 0))]
        capped = train_superset(examples, decoder, indicator_features,
                                TrainConfig(max_outer_iters=1))
        first_picks = train_structured([(0, 2), (1, 3)], decoder,
                                       indicator_features, TrainConfig())
        assert capped.weights == first_picks.weights
