import numpy as np
import pytest

from morphseg import crf, synth


def build_model(words, weight_fn):
    """CRF model whose vocabulary covers ``words``; weights from weight_fn."""
    vocab = crf.FeatureVocab()
    for word in words:
        for feats in crf.extract_word_features(word):
            for key in feats:
                vocab.add(key)
    weights = weight_fn((len(vocab), crf.N_LABELS))
    trans = np.where(crf.TRANS_LEGAL, weight_fn((4, 4)), -np.inf)
    ts = np.where(crf.START_LEGAL, weight_fn((4,)), -np.inf)
    te = np.where(crf.END_LEGAL, weight_fn((4,)), -np.inf)
    return crf.CrfModel(vocab, weights, trans, ts, te)


def zero_model(words):
    return build_model(words, lambda shape: np.zeros(shape))


def random_model(words, rng, scale=1.0):
    return build_model(words, lambda shape: rng.normal(0.0, scale, size=shape))


def random_word(rng, alphabet="abcde", lo=1, hi=6) -> str:
    length = int(rng.integers(lo, hi + 1))
    return "".join(rng.choice(list(alphabet)) for _ in range(length))


@pytest.fixture(scope="session")
def synth_corpus():
    return synth.generate(seed=42)


@pytest.fixture(scope="session")
def small_synth_corpus():
    config = synth.GrammarConfig(n_prefixes=6, n_stems=12, n_suffixes=6,
                                 train_size=120, dev_size=30, test_size=40)
    return synth.generate(config, seed=7)


@pytest.fixture(scope="session")
def small_trained_model(small_synth_corpus):
    config = crf.TrainConfig(l2=0.1, epsilon=1e-6, max_iterations=60)
    return crf.train_on_segmentations(small_synth_corpus.train, config,
                                      small_synth_corpus.dev)
