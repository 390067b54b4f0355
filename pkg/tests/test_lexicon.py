"""Lexicon loading, key normalization and rule compilation."""

import itertools

import pytest

from idiomatch.lexicon import (
    LEMMA,
    POS,
    TEXT,
    WILDCARD,
    IdiomEntry,
    LexiconError,
    RuleCompileError,
    TokenPredicate,
    compile_rule,
    load_lexicon,
    load_rules,
    normalize_key,
    sample_lexicon,
    save_rules,
)


def entry(base: str, *alternatives: str) -> IdiomEntry:
    return IdiomEntry.from_base_form(base, alternatives)


class TestNormalizeKey:
    def test_documented_forms(self):
        assert normalize_key("out of touch") == "out_of_touch"
        assert normalize_key("lose one's mind") == "lose_one's_mind"
        assert normalize_key("catch-22") == "catch-22"

    def test_idempotent(self):
        for base in ["out of touch", "catch-22", "keep someone at arm's length"]:
            key = normalize_key(base)
            assert normalize_key(key) == key

    def test_injective_over_sample_lexicon(self):
        keys = sample_lexicon().keys()
        for a, b in itertools.combinations(keys, 2):
            assert a != b

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            normalize_key("   ")


class TestLoadLexicon:
    def test_length_filter(self):
        lex = load_lexicon(["catch-22", "i do", "beat around the bush"], min_words=3)
        assert lex.keys() == ["catch-22", "beat_around_the_bush"]

    def test_min_words_is_configurable(self):
        lex = load_lexicon(["i do", "beat around the bush"], min_words=2)
        assert "i_do" in lex.keys()

    def test_duplicate_base_forms_merge_alternatives(self):
        lex = load_lexicon([
            "add fuel to the fire\tadd fuel to the flame",
            "add fuel to the fire\tpour gasoline on the fire",
        ])
        (only,) = lex.entries
        assert only.alternatives == ("add fuel to the flame", "pour gasoline on the fire")

    def test_conflicting_key_is_an_error(self):
        rows = ["out of touch", "out_of touch"]
        with pytest.raises(LexiconError, match="out_of_touch"):
            load_lexicon(rows)

    def test_empty_source_is_an_error(self):
        with pytest.raises(LexiconError):
            load_lexicon(["# only a comment"])

    def test_entry_invariants_hold(self):
        for e in sample_lexicon():
            assert " " not in e.key
            assert e.word_count >= 1
            assert e.hyphenated == ("-" in e.base_form)
            assert e.word_count >= 3 or e.hyphenated


class TestCompileBaseline:
    def test_hyphen_disjunction(self):
        rule = compile_rule(entry("down-to-earth"))
        assert [list(seq.predicates) for seq in rule.sequences] == [
            [TokenPredicate(TEXT, "down"), TokenPredicate(TEXT, "to"), TokenPredicate(TEXT, "earth")],
            [
                TokenPredicate(TEXT, "down"), TokenPredicate(TEXT, "-"),
                TokenPredicate(TEXT, "to"), TokenPredicate(TEXT, "-"),
                TokenPredicate(TEXT, "earth"),
            ],
        ]
        assert rule.slop == 0 and not rule.reordered

    def test_hyphen_free_sequence_is_the_hyphenated_minus_hyphens(self):
        for e in sample_lexicon():
            if not e.hyphenated:
                continue
            rule = compile_rule(e)
            without, with_hyphen = rule.sequences[0], rule.sequences[1]
            dehyphenated = [p for p in with_hyphen.predicates if p.value != "-"]
            assert list(without.predicates) == dehyphenated

    def test_possessive_slot(self):
        rule = compile_rule(entry("find one's feet"))
        assert [list(seq.predicates) for seq in rule.sequences] == [
            [TokenPredicate(LEMMA, "find"), TokenPredicate(POS, "PRP$"), TokenPredicate(LEMMA, "feet")],
        ]

    def test_personal_slot(self):
        rule = compile_rule(entry("teach someone a lesson"))
        (seq,) = rule.sequences
        assert seq.predicates[1] == TokenPredicate(POS, "PRP")

    def test_alternatives_add_lemma_sequences(self):
        rule = compile_rule(entry("add insult to injury", "heap insult on injury"))
        assert len(rule.sequences) == 2
        assert [p.value for p in rule.sequences[1].predicates] == ["heap", "insult", "on", "injury"]
        assert all(p.kind == LEMMA for p in rule.sequences[1].predicates)

    def test_base_form_tokens_are_lemmatized(self):
        rule = compile_rule(entry("grasp at straws"))
        assert [p.value for p in rule.sequences[0].predicates] == ["grasp", "at", "straw"]

    def test_clitics_split_into_predicates(self):
        rule = compile_rule(entry("at arm's length"))
        assert [p.value for p in rule.sequences[0].predicates] == ["at", "arm", "'s", "length"]

    def test_baseline_never_uses_wildcards(self):
        for e in sample_lexicon():
            rule = compile_rule(e)
            assert rule.slop == 0
            assert not rule.reordered
            for seq in rule.sequences:
                assert all(p.kind != WILDCARD for p in seq.predicates)

    def test_deterministic(self):
        for e in sample_lexicon():
            assert compile_rule(e, "extended") == compile_rule(e, "extended")


class TestCompileExtended:
    def test_wildcard_slot_and_slop_budget(self):
        rule = compile_rule(entry("call someone's bluff"), "extended")
        assert rule.slop == 5
        plain = rule.sequences[0]
        assert list(plain.predicates) == [
            TokenPredicate(LEMMA, "call"),
            TokenPredicate(WILDCARD, max_fill=3),
            TokenPredicate(LEMMA, "bluff"),
        ]

    def test_reordered_variant_for_verb_initial(self):
        rule = compile_rule(entry("call someone's bluff"), "extended")
        reordered = [seq for seq in rule.sequences if seq.reordered]
        assert len(reordered) == 1
        assert list(reordered[0].predicates) == [
            TokenPredicate(WILDCARD, max_fill=3),
            TokenPredicate(LEMMA, "bluff"),
            TokenPredicate(LEMMA, "call"),
        ]

    def test_no_reordering_for_non_verb_initial(self):
        rule = compile_rule(entry("out of touch"), "extended")
        assert not rule.reordered

    def test_slop_override_and_max_fill(self):
        rule = compile_rule(entry("call someone's bluff"), "extended", max_fill=4, slop=9)
        assert rule.slop == 9
        assert rule.sequences[0].predicates[1].max_fill == 4

    def test_verb_inflection_handled_by_lemma(self):
        rule = compile_rule(entry("open the floodgates"), "extended")
        first = [p.value for p in rule.sequences[0].predicates]
        assert first == ["open", "the", "floodgate"]
        assert [p.value for p in rule.sequences[-1].predicates] == ["the", "floodgate", "open"]


class TestCompileErrors:
    def test_unusable_base_form(self):
        bad = IdiomEntry(base_form="- -", key="-_-", word_count=2, hyphenated=True)
        with pytest.raises(RuleCompileError):
            compile_rule(bad)

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            compile_rule(entry("beat around the bush"), "fuzzy")


class TestRulesFile:
    def test_roundtrip(self, tmp_path):
        rules = [compile_rule(e, "extended") for e in sample_lexicon()]
        path = tmp_path / "rules.json"
        save_rules(rules, path, mode="extended")
        assert load_rules(path) == rules
