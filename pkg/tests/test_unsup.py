import math
import random

import pytest

from morphseg.charlm import EntropyProfile
from morphseg.errors import DataError, ModelFormatError
from morphseg.segmentation import SurfaceSegmentation
from morphseg.unsup import (EntropyConfig, MdlModel, load_mdl, mdl_segment,
                            mdl_train, save_mdl, segment_constant_entropy,
                            segment_entropy_increase, segment_random,
                            segment_relative_entropy, segment_with_entropy)


def profile(word, left, right):
    return EntropyProfile(word, tuple(left), tuple(right))


# -- constant objective ----------------------------------------------------

def test_constant_threshold_dominance():
    p = profile("abc", [5.0, 5.0], [5.0, 5.0])
    assert segment_constant_entropy(p, math.inf).segments == ("abc",)


def test_constant_negative_threshold_cuts_everywhere():
    p = profile("abc", [0.0, 0.0], [0.0, 0.0])
    assert segment_constant_entropy(p, -1.0).segments == ("a", "b", "c")


def test_constant_hand_example():
    p = profile("abc", [1.0, 3.0], [1.5, 2.0])
    # sums are 2.5 and 5.0; only gap 2 exceeds theta = 4
    assert segment_constant_entropy(p, 4.0).boundaries == (2,)


def test_constant_monotone_in_theta():
    rng = random.Random(11)
    word = "abcdefgh"
    p = profile(word,
                [rng.uniform(0, 4) for _ in range(7)],
                [rng.uniform(0, 4) for _ in range(7)])
    thetas = [t * 0.5 for t in range(-2, 17)]
    counts = [len(segment_constant_entropy(p, t).boundaries) for t in thetas]
    assert counts == sorted(counts, reverse=True)


# -- increase objective ------------------------------------------------------

def test_increase_no_cut_on_monotone_decreasing_profiles():
    # decreasing along each profile's own reading direction: left falls
    # left-to-right, right falls right-to-left
    p = profile("abcde", [3.0, 2.0, 1.0, 0.5], [0.5, 1.0, 2.0, 3.0])
    assert segment_entropy_increase(p).segments == ("abcde",)


def test_increase_left_rise_hand_example():
    # left = [1, 2, 1] rises into gap 2; the right profile is increasing
    # in gap order, so it never fires right-to-left
    p = profile("abcd", [1.0, 2.0, 1.0], [1.0, 2.0, 3.0])
    assert segment_entropy_increase(p).boundaries == (2,)


def test_increase_only_left_signal():
    p = profile("abcd", [1.0, 2.0, 1.0], [1.0, 2.0, 3.0])
    assert segment_entropy_increase(p).boundaries == (2,)


def test_increase_constant_profile_has_no_cuts():
    p = profile("abcd", [1.0, 1.0, 1.0], [1.0, 1.0, 1.0])
    assert segment_entropy_increase(p).segments == ("abcd",)


def test_increase_first_gap_requires_right_signal():
    p = profile("abc", [9.0, 1.0], [1.0, 1.0])
    # a huge left value at gap 1 alone cannot cut the first gap
    assert 1 not in segment_entropy_increase(p).boundaries


# -- relative objective ------------------------------------------------------

def test_relative_uniform_sums_no_cut():
    p = profile("abc", [1.0, 1.0], [1.0, 1.0])
    assert segment_relative_entropy(p, 1.0).segments == ("abc",)


def test_relative_hand_example():
    p = profile("abc", [1.0, 3.0], [1.0, 3.0])
    # sums [2, 6], mean 4: only gap 2 exceeds it at alpha 1
    assert segment_relative_entropy(p, 1.0).boundaries == (2,)


def test_relative_tiny_alpha_cuts_all_positive_gaps():
    p = profile("abc", [1.0, 2.0], [1.0, 2.0])
    assert segment_relative_entropy(p, 1e-9).segments == ("a", "b", "c")


def test_entropy_config_dispatch_and_validation():
    p = profile("abc", [1.0, 3.0], [1.5, 2.0])
    seg = segment_with_entropy(p, EntropyConfig("constant", theta=4.0))
    assert seg.boundaries == (2,)
    with pytest.raises(ValueError):
        EntropyConfig("maximal")
    with pytest.raises(ValueError):
        EntropyConfig("relative", alpha=0.0)


# -- random baseline ---------------------------------------------------------

def test_random_extremes():
    assert segment_random("abcd", 0.0, 1).segments == ("abcd",)
    assert segment_random("abcd", 1.0, 1).segments == ("a", "b", "c", "d")


def test_random_deterministic_given_seed():
    a = segment_random("abcdefgh", 0.5, 123)
    b = segment_random("abcdefgh", 0.5, 123)
    assert a == b


def test_random_boundary_rate_close_to_p():
    rng = random.Random(42)
    word = "abcdefghij"  # 9 gaps
    cuts = total = 0
    for _ in range(10000):
        cuts += len(segment_random(word, 0.3, rng).boundaries)
        total += len(word) - 1
    assert abs(cuts / total - 0.3) < 0.02


def test_random_rejects_bad_p():
    with pytest.raises(ValueError):
        segment_random("ab", 1.5, 0)


# -- MDL ----------------------------------------------------------------------

def test_mdl_finds_repeated_unit():
    model = mdl_train(["abab"] * 100 + ["ab"] * 100, seed=3)
    assert "ab" in model.lexicon
    assert mdl_segment(model, "abab").segments == ("ab", "ab")
    assert mdl_segment(model, "ababab").segments == ("ab", "ab", "ab")


def test_mdl_keeps_unique_random_strings_whole():
    rng = random.Random(8)
    words = list({"".join(rng.choice("abcdefghijklmnop") for _ in range(10))
                  for _ in range(50)})
    model = mdl_train(words, seed=8)
    # lexicon cost dominates: splitting unique strings buys nothing
    whole = sum(1 for w in words if mdl_segment(model, w).segments == (w,))
    assert whole >= len(words) * 0.8


def test_mdl_single_word_kept_whole():
    model = mdl_train(["abcdef"], seed=1)
    assert dict(model.lexicon) == {"abcdef": 1}
    assert mdl_segment(model, "abcdef").segments == ("abcdef",)


def test_mdl_cost_non_increasing_across_passes():
    rng = random.Random(4)
    words = [rng.choice(["ab", "cd"]) + rng.choice(["xy", "zw"])
             for _ in range(200)]
    costs = []
    for passes in range(1, 5):
        model = mdl_train(words, seed=4, max_passes=passes, min_gain=0.0)
        costs.append(model.recompute_cost())
    assert all(b <= a + 1e-6 for a, b in zip(costs, costs[1:]))


def test_mdl_segment_falls_back_on_unseen_characters():
    model = mdl_train(["abab"] * 50, seed=2)
    seg = mdl_segment(model, "abq")
    assert "".join(seg.segments) == "abq"
    assert all(seg.segments)


def test_mdl_whole_word_in_lexicon_single_segment():
    model = mdl_train(["hello"] * 5, seed=2)
    assert mdl_segment(model, "hello").segments == ("hello",)


def test_mdl_rejects_empty_corpus():
    with pytest.raises(DataError):
        mdl_train([])


def test_mdl_deterministic_given_seed():
    words = ["abab", "ab", "baba", "aabb"] * 25
    a = mdl_train(words, seed=9)
    b = mdl_train(words, seed=9)
    assert a.lexicon == b.lexicon


def test_mdl_save_load_round_trip(tmp_path):
    model = mdl_train(["abab"] * 100 + ["ab"] * 100, seed=3)
    path = str(tmp_path / "model.mdl")
    save_mdl(model, path)
    loaded = load_mdl(path)
    assert loaded.lexicon == model.lexicon
    assert loaded.total == model.total
    assert loaded.alphabet == model.alphabet
    assert loaded.char_cost == model.char_cost
    assert mdl_segment(loaded, "ababab") == mdl_segment(model, "ababab")


def test_mdl_load_rejects_corruption(tmp_path):
    path = str(tmp_path / "model.mdl")
    save_mdl(mdl_train(["abab"] * 10, seed=1), path)
    text = open(path, encoding="utf-8").read()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text.replace("[end]", ""))
    with pytest.raises(ModelFormatError):
        load_mdl(path)


# -- output validity across all segmenters ------------------------------------

def test_every_segmenter_output_satisfies_invariant():
    rng = random.Random(77)
    words = ["".join(rng.choice("abc") for _ in range(rng.randint(2, 9)))
             for _ in range(60)]
    model = mdl_train(words, seed=77)
    for word in words:
        n = len(word) - 1
        p = profile(word,
                    [rng.uniform(0, 3) for _ in range(n)],
                    [rng.uniform(0, 3) for _ in range(n)])
        for seg in (
            segment_constant_entropy(p, 2.0),
            segment_entropy_increase(p),
            segment_relative_entropy(p, 1.0),
            segment_random(word, 0.4, rng),
            mdl_segment(model, word),
        ):
            assert "".join(seg.segments) == word
            assert all(seg.segments)
