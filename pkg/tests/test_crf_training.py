import io
import math
import random

import numpy as np
import pytest

from morphseg import crf
from morphseg.errors import DataError, ModelFormatError
from morphseg.labels import LABELS, encode_bmes
from morphseg.segmentation import SurfaceSegmentation

from conftest import random_model, zero_model
from oracles import numeric_gradient


def random_gold(word, rng):
    """A random legal label string via a random segmentation."""
    cuts = tuple(i for i in range(1, len(word)) if rng.random() < 0.5)
    return encode_bmes(SurfaceSegmentation(word, cuts))


def flat_params(model):
    return np.concatenate([
        model.feature_weights.ravel(),
        model.trans[crf.TRANS_LEGAL],
        model.trans_start[crf.START_LEGAL],
        model.trans_end[crf.END_LEGAL],
    ])


def model_from_flat(template, x):
    n = len(template.vocab)
    weights = x[:n * 4].reshape(n, 4)
    rest = x[n * 4:]
    trans = np.where(crf.TRANS_LEGAL, 0.0, -np.inf)
    trans[crf.TRANS_LEGAL] = rest[:int(crf.TRANS_LEGAL.sum())]
    k = int(crf.TRANS_LEGAL.sum())
    ts = np.where(crf.START_LEGAL, 0.0, -np.inf)
    ts[crf.START_LEGAL] = rest[k:k + 2]
    te = np.where(crf.END_LEGAL, 0.0, -np.inf)
    te[crf.END_LEGAL] = rest[k + 2:]
    return crf.CrfModel(template.vocab, weights, trans, ts, te)


def flat_gradient(grads, model):
    return np.concatenate([
        grads.feature.ravel(),
        grads.trans[crf.TRANS_LEGAL],
        grads.start[crf.START_LEGAL],
        grads.end[crf.END_LEGAL],
    ])


# -- gradient ----------------------------------------------------------------

def test_gradient_at_zero_is_marginal_minus_indicator():
    model = zero_model(["ab"])
    loss, grads = crf.nll_and_gradient(model, [("ab", "SS")], l2=0.0)
    node, edge = crf.marginals(model, "ab")
    s = LABELS.index("S")
    assert grads.start[s] == pytest.approx(node[0, s] - 1.0)
    assert grads.end[s] == pytest.approx(node[-1, s] - 1.0)
    np.testing.assert_allclose(
        grads.trans, edge.sum(axis=0) - np.eye(4)[s][:, None] * np.eye(4)[s][None, :],
        atol=1e-12)
    assert loss == pytest.approx(crf.log_partition(model, "ab"))


def test_gradient_empty_batch_is_pure_regularizer():
    rng = np.random.default_rng(3)
    model = random_model(["abc"], rng)
    l2 = 0.7
    loss, grads = crf.nll_and_gradient(model, [], l2=l2)
    np.testing.assert_allclose(grads.feature, l2 * model.feature_weights)
    np.testing.assert_allclose(grads.trans[crf.TRANS_LEGAL],
                               l2 * model.trans[crf.TRANS_LEGAL])
    expected = 0.5 * l2 * float(
        np.sum(model.feature_weights ** 2)
        + np.sum(model.trans[crf.TRANS_LEGAL] ** 2)
        + np.sum(model.trans_start[crf.START_LEGAL] ** 2)
        + np.sum(model.trans_end[crf.END_LEGAL] ** 2))
    assert loss == pytest.approx(expected)


def test_gradient_illegal_entries_stay_zero():
    rng = np.random.default_rng(5)
    model = random_model(["abcd"], rng)
    _, grads = crf.nll_and_gradient(model, [("abcd", "BMME")], l2=0.3)
    assert np.all(grads.trans[~crf.TRANS_LEGAL] == 0.0)
    assert np.all(grads.start[~crf.START_LEGAL] == 0.0)
    assert np.all(grads.end[~crf.END_LEGAL] == 0.0)


def test_gradient_rejects_illegal_gold():
    model = zero_model(["ab"])
    with pytest.raises(DataError, match="ab"):
        crf.nll_and_gradient(model, [("ab", "BB")])


def test_gradient_matches_finite_differences():
    rng = random.Random(7)
    nprng = np.random.default_rng(7)
    words = ["ab", "abc", "ba"]
    template = random_model(words, nprng, scale=0.5)
    batch = [(w, random_gold(w, rng)) for w in words for _ in range(2)]
    l2 = 0.2

    def loss_at(x):
        model = model_from_flat(template, x)
        return crf.nll_and_gradient(model, batch, l2=l2)[0]

    x0 = flat_params(template)
    loss, grads = crf.nll_and_gradient(template, batch, l2=l2)
    analytic = flat_gradient(grads, template)
    numeric = numeric_gradient(loss_at, x0, h=1e-5)
    scale = np.maximum(np.abs(analytic), 1.0)
    np.testing.assert_allclose(analytic / scale, numeric / scale, atol=1e-4)


# -- training -----------------------------------------------------------------

def test_train_single_word_capacity():
    model = crf.train([("abab", "BEBE")],
                      crf.TrainConfig(l2=0.01, epsilon=1e-9, max_iterations=100))
    assert crf.viterbi_decode(model, "abab") == "BEBE"


def test_train_max_iterations_one_takes_one_step():
    pairs = [("abab", "BEBE"), ("cd", "SS")]
    model = crf.train(pairs, crf.TrainConfig(epsilon=1e-12, max_iterations=1))
    assert len(model.training_log.objectives) == 1


def test_train_objective_monotone_non_increasing():
    rng = random.Random(13)
    words = ["abab", "cdcd", "abcd", "dcba", "aabb"]
    pairs = [(w, random_gold(w, rng)) for w in words]
    model = crf.train(pairs, crf.TrainConfig(l2=0.1, epsilon=1e-9,
                                             max_iterations=50))
    objectives = model.training_log.objectives
    assert len(objectives) >= 2
    for before, after in zip(objectives, objectives[1:]):
        assert after <= before + 1e-6 * max(1.0, abs(before))


def test_train_returns_best_dev_iterate():
    corpus = [("abxy", "BEBE"), ("cdxy", "BEBE"), ("abcd", "BEBE"),
              ("xyab", "BEBE"), ("xycd", "BEBE")]
    model = crf.train(corpus, crf.TrainConfig(l2=0.05, epsilon=1e-10,
                                              max_iterations=40),
                      dev_data=[("cdab", "BEBE")])
    log = model.training_log
    assert log.best_iteration is not None
    assert log.dev_f1
    assert max(log.dev_f1) == log.dev_f1[log.best_iteration - 1]


def test_train_rejects_empty():
    with pytest.raises(DataError):
        crf.train([])


def test_train_config_validation():
    with pytest.raises(ValueError):
        crf.TrainConfig(epsilon=0.0)
    with pytest.raises(ValueError):
        crf.TrainConfig(max_iterations=0)
    with pytest.raises(ValueError):
        crf.TrainConfig(l2=-1.0)


def test_train_epsilon_stops_early():
    pairs = [("ab", "BE"), ("cd", "SS")]
    loose = crf.train(pairs, crf.TrainConfig(l2=0.1, epsilon=1e-2,
                                             max_iterations=200))
    tight = crf.train(pairs, crf.TrainConfig(l2=0.1, epsilon=1e-12,
                                             max_iterations=200))
    assert len(loose.training_log.objectives) <= len(tight.training_log.objectives)


def test_trained_model_config_echo():
    config = crf.TrainConfig(l2=0.2, epsilon=1e-6, max_iterations=5)
    model = crf.train([("ab", "BE")], config)
    assert model.config["l2"] == 0.2
    assert model.config["epsilon"] == 1e-6
    assert model.config["max_iterations"] == 5
    assert model.config["template_version"] == crf.TEMPLATE_VERSION


# -- serialization --------------------------------------------------------------

def test_save_load_round_trip_decodes_identically(small_trained_model,
                                                  small_synth_corpus, tmp_path):
    model = small_trained_model
    path = str(tmp_path / "model.crf")
    crf.save_model(model, path)
    loaded = crf.load_model(path)
    words = [s.word for s in
             small_synth_corpus.train + small_synth_corpus.dev + small_synth_corpus.test]
    for word in words:
        assert crf.viterbi_decode(loaded, word) == crf.viterbi_decode(model, word)


def test_save_load_preserves_weights_exactly():
    rng = np.random.default_rng(19)
    model = random_model(["ab", "xyz"], rng)
    buf = io.StringIO()
    crf.save_model(model, buf)
    loaded = crf.load_model(io.StringIO(buf.getvalue()))
    # vocabularies may be ordered differently; compare via keys
    for key in model.vocab.keys:
        a = model.feature_weights[model.vocab.get(key)]
        b = loaded.feature_weights[loaded.vocab.get(key)]
        np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(loaded.trans, model.trans)
    np.testing.assert_array_equal(loaded.trans_start, model.trans_start)
    np.testing.assert_array_equal(loaded.trans_end, model.trans_end)


def test_empty_model_round_trips():
    model = crf.CrfModel(crf.FeatureVocab(), np.zeros((0, 4)),
                         np.where(crf.TRANS_LEGAL, 0.0, -np.inf),
                         np.where(crf.START_LEGAL, 0.0, -np.inf),
                         np.where(crf.END_LEGAL, 0.0, -np.inf))
    buf = io.StringIO()
    crf.save_model(model, buf)
    loaded = crf.load_model(io.StringIO(buf.getvalue()))
    assert len(loaded.vocab) == 0
    assert crf.viterbi_decode(loaded, "ab") == "BE"


def test_load_rejects_truncation(tmp_path):
    model = crf.train([("ab", "BE")], crf.TrainConfig(max_iterations=2))
    path = str(tmp_path / "model.crf")
    crf.save_model(model, path)
    text = open(path, encoding="utf-8").read()
    for cut in (len(text) // 3, len(text) - 10):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text[:cut])
        with pytest.raises(ModelFormatError):
            crf.load_model(path)


def test_load_rejects_non_finite_weight(tmp_path):
    model = crf.train([("ab", "BE")], crf.TrainConfig(max_iterations=2))
    path = str(tmp_path / "model.crf")
    crf.save_model(model, path)
    text = open(path, encoding="utf-8").read()
    lines = text.splitlines()
    for i, line in enumerate(lines):
        if line.startswith("bias\tB\t"):
            lines[i] = "bias\tB\tnan"
            break
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    with pytest.raises(ModelFormatError):
        crf.load_model(path)


def test_load_rejects_version_mismatch(tmp_path):
    model = crf.train([("ab", "BE")], crf.TrainConfig(max_iterations=2))
    path = str(tmp_path / "model.crf")
    crf.save_model(model, path)
    text = open(path, encoding="utf-8").read().replace(
        "morphseg-crf 1", "morphseg-crf 99", 1)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    with pytest.raises(ModelFormatError):
        crf.load_model(path)
