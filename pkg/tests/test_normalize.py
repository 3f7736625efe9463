import random
import string
from pathlib import Path

import pytest

from tweetinfo.errors import ValidationError
from tweetinfo.normalize import (
    NormalizationConfig,
    ReplacementDictionaries,
    apply_dictionary,
    collapse_repeats,
    default_config,
    load_dictionaries,
    normalize_tweet,
    strip_noise,
)

from conftest import fuzz_strings
from oracles import collapse_runs_regex

GOLDEN = Path(__file__).parent / "data" / "normalize_golden.tsv"


def golden_rows():
    rows = []
    for line in GOLDEN.read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        raw, expected = line.split("\t")
        rows.append((raw, expected))
    return rows


@pytest.fixture(scope="module")
def cfg():
    return default_config()


class TestCollapseRepeats:
    def test_repeated_letter_example(self):
        assert collapse_repeats("coooool") == "cool"

    def test_fixed_point_run_of_two(self):
        assert collapse_repeats("cool") == "cool"

    def test_multiple_runs(self):
        assert collapse_repeats("aaabbbbc") == "aabbc"

    def test_empty(self):
        assert collapse_repeats("") == ""

    def test_digits_untouched(self):
        assert collapse_repeats("2000") == "2000"

    def test_agrees_with_regex_oracle_and_never_lengthens(self):
        rng = random.Random(99)
        alphabet = string.ascii_letters + string.digits + "!?.'" + "éñ😀"
        for _ in range(3000):
            token = "".join(
                rng.choice(alphabet) for _ in range(rng.randint(0, 12))
            )
            got = collapse_repeats(token)
            assert got == collapse_runs_regex(token)
            assert len(got) <= len(token)


class TestApplyDictionary:
    def test_contraction(self, cfg):
        out = apply_dictionary("i'm here", cfg.dictionaries.contractions)
        assert out == "i am here"

    def test_slang(self, cfg):
        assert apply_dictionary("2morrow", cfg.dictionaries.slang) == "tomorrow"

    def test_interjection(self, cfg):
        assert apply_dictionary("oww", cfg.dictionaries.interjections) == "pain"

    def test_word_boundaries_respected(self):
        mapping = {"u": "you"}
        assert apply_dictionary("u turn", mapping) == "you turn"
        assert apply_dictionary("fun turn", mapping) == "fun turn"

    def test_longest_key_wins(self):
        mapping = {"w/": "with", "w/o": "without"}
        assert apply_dictionary("w/o masks", mapping, token_level=False) == "without masks"
        assert apply_dictionary("w/ masks", mapping) == "with masks"

    def test_replacements_not_rescanned(self):
        mapping = {"a": "b", "b": "c"}
        assert apply_dictionary("a b", mapping) == "b c"

    def test_order_independent_for_disjoint_dicts(self, cfg):
        text = "idk ouch"
        d = cfg.dictionaries
        one = apply_dictionary(apply_dictionary(text, d.slang), d.interjections)
        other = apply_dictionary(apply_dictionary(text, d.interjections), d.slang)
        assert one == other == "i do not know pain"


class TestStripNoise:
    def test_punctuation_and_non_ascii(self):
        assert strip_noise("hello!!! ☀ world") == "hello world"

    def test_empty(self):
        assert strip_noise("") == ""

    def test_whitespace_collapse(self):
        assert strip_noise("a  b\tc") == "a b c"


class TestNormalizeTweet:
    def test_composed_sentence(self, cfg):
        assert normalize_tweet("I'm sooo happy 😀", cfg) == "i am soo happy grinning face"

    def test_fixed_point_on_normalized_text(self, cfg):
        text = "i am soo happy grinning face"
        assert normalize_tweet(text, cfg) == text

    def test_numeric_slang(self, cfg):
        assert normalize_tweet("2morrow", cfg) == "tomorrow"

    def test_golden_file(self, cfg):
        for raw, expected in golden_rows():
            assert normalize_tweet(raw, cfg) == expected, raw

    def test_output_is_ascii_single_spaced(self, cfg):
        rng = random.Random(4)
        pool = string.printable + "😀😷❤️éñ中☀"
        for _ in range(500):
            raw = "".join(rng.choice(pool) for _ in range(rng.randint(0, 50)))
            out = normalize_tweet(raw, cfg)
            assert all(ord(ch) < 128 for ch in out)
            assert "  " not in out and out == out.strip()


class TestDictionaryValidation:
    def test_bundled_dictionaries_load(self):
        d = load_dictionaries()
        assert len(d.contractions) >= 50
        assert len(d.slang) >= 50
        assert len(d.interjections) >= 50
        assert len(d.emoji) >= 50

    def test_emoji_key_must_be_non_ascii(self):
        with pytest.raises(ValidationError, match="non-ASCII"):
            ReplacementDictionaries(
                emoji={"x": "letter"}, interjections={}, contractions={}, slang={}
            )

    def test_self_mapping_rejected(self):
        with pytest.raises(ValidationError, match="itself"):
            ReplacementDictionaries(
                emoji={}, interjections={"hm": "hm"}, contractions={}, slang={}
            )

    def test_uppercase_key_rejected(self):
        with pytest.raises(ValidationError, match="lowercase"):
            ReplacementDictionaries(
                emoji={}, interjections={}, contractions={"I'm": "i am"}, slang={}
            )

    def test_non_fixed_point_value_rejected(self):
        dicts = ReplacementDictionaries(
            emoji={}, interjections={}, contractions={}, slang={"brb": "be right BACK"}
        )
        with pytest.raises(ValidationError, match="fixed point"):
            NormalizationConfig(dicts)

    def test_value_hitting_another_key_rejected(self):
        dicts = ReplacementDictionaries(
            emoji={},
            interjections={"ugh": "disgust"},
            contractions={},
            slang={"meh2": "ugh"},
        )
        with pytest.raises(ValidationError, match="fixed point"):
            NormalizationConfig(dicts)

    def test_custom_dictionary_file_override(self, tmp_path):
        slang = tmp_path / "slang.tsv"
        slang.write_text("# mine\nxyzzy\tmagic word\n", encoding="utf-8")
        d = load_dictionaries(slang_path=slang)
        assert d.slang == {"xyzzy": "magic word"}
        cfg = NormalizationConfig(d)
        assert normalize_tweet("xyzzy!", cfg) == "magic word"


class TestIdempotence:
    def test_idempotent_on_fuzz_sample(self, cfg):
        for raw in fuzz_strings(2000):
            once = normalize_tweet(raw, cfg)
            assert normalize_tweet(once, cfg) == once

    def test_idempotent_on_golden_outputs(self, cfg):
        for _, expected in golden_rows():
            assert normalize_tweet(expected, cfg) == expected
