"""Shared fixtures: compiled matchers and a small trained embedding store."""

from __future__ import annotations

import numpy as np
import pytest

from idiomatch.corpus import AnnotatedSentence, AnnotatedToken
from idiomatch.embed import TrainingConfig, train
from idiomatch.lexicon import compile_lexicon, sample_lexicon
from idiomatch.matcher import Matcher

TOY_IDIOMS = {
    "with_bated_breath": ("wait", "anxious"),
    "catch-22": ("dilemma", "paradox"),
    "down-to-earth": ("humble", "modest"),
    "grasp_at_straws": ("desperate", "futile"),
}

TOY_BACKGROUND = [f"w{i:02d}" for i in range(40)] + ["zebra"]


def toy_corpus(occurrences: int = 60, seed: int = 5) -> tuple[list[list[str]], set[str]]:
    """Sentences where each idiom always sits next to its two context words."""
    rng = np.random.default_rng(seed)
    corpus = []
    for key in sorted(TOY_IDIOMS):
        c1, c2 = TOY_IDIOMS[key]
        for _ in range(occurrences):
            before = [TOY_BACKGROUND[int(rng.integers(len(TOY_BACKGROUND)))] for _ in range(4)]
            after = [TOY_BACKGROUND[int(rng.integers(len(TOY_BACKGROUND)))] for _ in range(4)]
            corpus.append(before + [c1, key, c2] + after)
    return corpus, set(TOY_IDIOMS)


@pytest.fixture(scope="session")
def lexicon_default():
    return sample_lexicon()


@pytest.fixture(scope="session")
def baseline_matcher(lexicon_default):
    return Matcher(compile_lexicon(lexicon_default, "baseline"))


@pytest.fixture(scope="session")
def extended_matcher(lexicon_default):
    return Matcher(compile_lexicon(lexicon_default, "extended"))


@pytest.fixture(scope="session")
def toy_store():
    """A deterministic store trained on the planted toy corpus."""
    corpus, keys = toy_corpus()
    config = TrainingConfig(
        vector_size=16, max_epochs=8, window=4, seed=11, plateau_patience=99
    )
    store, trace = train(corpus, config, idiom_keys=keys)
    return store, trace


def make_sentence(*triples: tuple[str, str, str], doc_id: str = "", sent_index: int = 0) -> AnnotatedSentence:
    tokens = tuple(AnnotatedToken(text=t, lemma=l, pos=p) for t, l, p in triples)
    return AnnotatedSentence(tokens=tokens, doc_id=doc_id, sent_index=sent_index)
