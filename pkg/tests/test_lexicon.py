from __future__ import annotations

import logging
import random

import pytest

from finsent.corpus import Sentiment
from finsent.errors import ParseError, ValidationError
from finsent.lexicon import Lexicon, load_lexicon, score_tokens, vadermax_predict


@pytest.fixture
def lex():
    return Lexicon({"good": 1.9, "bad": -2.5, "awful": -2.5, "great": 2.5, "meh": 0.0})


class TestLoadLexicon:
    def test_three_entries(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("good\t1.9\nbad\t-2.5\nok\t0.3\n")
        lex = load_lexicon(path)
        assert len(lex) == 3
        assert lex.scores["bad"] == -2.5
        assert lex.name == "lex"

    def test_empty_file_is_valid(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("")
        assert len(load_lexicon(path)) == 0

    def test_duplicate_last_wins(self, tmp_path, caplog):
        path = tmp_path / "lex.tsv"
        path.write_text("good\t1.0\ngood\t2.0\n")
        with caplog.at_level(logging.WARNING):
            lex = load_lexicon(path)
        assert lex.scores["good"] == 2.0
        assert "duplicate" in caplog.text

    def test_non_numeric_score_names_line(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("good\t1.0\nbad\tvery\n")
        with pytest.raises(ParseError, match=":2:"):
            load_lexicon(path)

    def test_non_finite_rejected(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("good\tnan\n")
        with pytest.raises(ParseError):
            load_lexicon(path)


class TestScoreTokens:
    def test_all_unknown(self, lex):
        assert score_tokens(lex, ["x", "y"]) == [0.0, 0.0]

    def test_single_known(self, lex):
        assert score_tokens(lex, ["good"]) == [1.9]

    def test_mixed(self, lex):
        assert score_tokens(lex, ["good", "zzz", "bad"]) == [1.9, 0.0, -2.5]

    def test_length_preserved(self, lex):
        for n in (0, 1, 7):
            assert len(score_tokens(lex, ["good"] * n)) == n


class TestVadermaxPredict:
    def test_no_hits_neutral(self, lex):
        assert vadermax_predict(lex, ["x", "y"]) is Sentiment.NEUTRAL

    def test_max_magnitude_wins(self, lex):
        # |-2.5| beats 1.9, so the negative word decides
        assert vadermax_predict(lex, ["good", "bad"]) is Sentiment.NEGATIVE

    def test_single_positive(self, lex):
        assert vadermax_predict(lex, ["good"], neutral_band=0.0) is Sentiment.POSITIVE

    def test_equal_magnitude_tie_is_neutral(self, lex):
        assert vadermax_predict(lex, ["great", "awful"]) is Sentiment.NEUTRAL

    def test_band_forces_neutral(self, lex):
        assert vadermax_predict(lex, ["good"], neutral_band=1.9) is Sentiment.NEUTRAL
        assert vadermax_predict(lex, ["good"], neutral_band=1.8) is Sentiment.POSITIVE

    def test_zero_score_hit_is_neutral(self, lex):
        assert vadermax_predict(lex, ["meh"]) is Sentiment.NEUTRAL

    def test_negative_band_rejected(self, lex):
        with pytest.raises(ValidationError):
            vadermax_predict(lex, ["good"], neutral_band=-0.1)

    def test_order_and_duplication_invariance(self, lex):
        rng = random.Random(5)
        tokens = ["good", "bad", "x", "great", "meh"]
        baseline = vadermax_predict(lex, tokens)
        for _ in range(25):
            shuffled = tokens + [rng.choice(tokens) for _ in range(rng.randrange(4))]
            rng.shuffle(shuffled)
            assert vadermax_predict(lex, shuffled) is baseline

    def test_band_widening_only_moves_toward_neutral(self, lex):
        rng = random.Random(9)
        vocab = list(lex.scores) + ["zz", "qq"]
        for _ in range(50):
            tokens = [rng.choice(vocab) for _ in range(rng.randrange(1, 6))]
            bands = sorted(rng.uniform(0, 3) for _ in range(2))
            narrow = vadermax_predict(lex, tokens, bands[0])
            wide = vadermax_predict(lex, tokens, bands[1])
            assert wide in (narrow, Sentiment.NEUTRAL)
            if wide is not Sentiment.NEUTRAL:
                assert wide is narrow
