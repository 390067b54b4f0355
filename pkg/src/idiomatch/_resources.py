"""Loaders for the word lists and tables bundled with the package."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources


def _read_lines(name: str) -> list[str]:
    text = resources.files("idiomatch.data").joinpath(name).read_text("utf-8")
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    return lines


@lru_cache(maxsize=None)
def lemma_exceptions() -> dict[str, str]:
    """Irregular form -> lemma table (verbs mostly, a few nouns)."""
    table = {}
    for line in _read_lines("lemma_exceptions.tsv"):
        form, lemma = line.split("\t")
        table[form] = lemma
    return table


@lru_cache(maxsize=None)
def pos_lexicon() -> dict[str, str]:
    """Word -> coarse tag lookup used by the fallback annotator."""
    table = {}
    for line in _read_lines("pos_lexicon.tsv"):
        word, tag = line.split("\t")
        table[word] = tag
    return table


@lru_cache(maxsize=None)
def tag_map() -> dict[str, str]:
    """Fine-grained tag -> coarse tag mapping for annotated input files."""
    table = {}
    for line in _read_lines("tag_map.tsv"):
        fine, coarse = line.split("\t")
        table[fine] = coarse
    return table


@lru_cache(maxsize=None)
def stopwords() -> frozenset[str]:
    return frozenset(_read_lines("stopwords.txt"))


@lru_cache(maxsize=None)
def verb_lemmas() -> frozenset[str]:
    """Verb lemmas used to decide whether an idiom is verb-initial."""
    return frozenset(_read_lines("verbs.txt"))


def sample_lexicon_path() -> str:
    """Filesystem path of the bundled demonstration lexicon."""
    return str(resources.files("idiomatch.data").joinpath("sample_lexicon.tsv"))
