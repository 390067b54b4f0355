"""Reverse-search pipeline: phrase -> refined lemmas -> averaged vector ->
nearest idioms, each result supplemented with its top-5 collocations.

Also houses the retrieval evaluation harness: each test item is a
(idiom key, definition) pair; the definition is searched like any user
phrase and the 0-based rank of the target idiom is recorded.  The headline
metric is the median of those ranks.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, TextIO, Union

import numpy as np

from idiomatch import _resources
from idiomatch.colloc import CollocationTable
from idiomatch.corpus import annotate_tokens
from idiomatch.embed import EmbeddingStore, nearest_idioms
from idiomatch.matcher import CATEGORIES

NO_KNOWN_TOKENS = "no known tokens"
TOP_COLLOCATIONS = 5


def refine(phrase: str, strip_stopwords: bool = False) -> list[str]:
    """Lowercase, drop number and punctuation tokens, lemmatize the rest.

    Stopwords stay by default; retrieval works better with them kept.
    """
    stop = _resources.stopwords() if strip_stopwords else frozenset()
    return [
        tok.lemma
        for tok in annotate_tokens(phrase)
        if tok.pos not in ("NUM", "PUNCT") and tok.lemma not in stop
    ]


def phrase_vector(store: EmbeddingStore, lemmas: Sequence[str]) -> np.ndarray | None:
    """Mean of the known lemmas' vectors; None when nothing is known."""
    known = [lemma for lemma in lemmas if lemma in store]
    if not known:
        return None
    return np.mean([store.vector(lemma) for lemma in known], axis=0)


@dataclass(frozen=True)
class IdiomResult:
    idiom_key: str
    similarity: float
    collocations: dict[str, list[tuple[str, float]]]


@dataclass(frozen=True)
class IdiomifyResponse:
    query: str
    refined_tokens: tuple[str, ...]
    results: tuple[IdiomResult, ...]
    reason: str | None = None


class Idiomifier:
    """Read-only query engine over a trained store and collocation tables."""

    def __init__(
        self,
        store: EmbeddingStore,
        tables: dict[str, CollocationTable] | None = None,
        default_model: str = "pmi",
        strip_stopwords: bool = False,
    ):
        if tables and default_model not in tables:
            raise ValueError(f"default model {default_model!r} has no collocation table")
        self.store = store
        self.tables = tables or {}
        self.default_model = default_model
        self.strip_stopwords = strip_stopwords

    def _collocations(self, idiom_key: str, model: str) -> dict[str, list[tuple[str, float]]]:
        table = self.tables.get(model)
        if table is None:
            return {category: [] for category in CATEGORIES}
        return {
            category: table.top_k(idiom_key, category, TOP_COLLOCATIONS)
            for category in CATEGORIES
        }

    def idiomify(self, phrase: str, k: int = 5, model: str | None = None) -> IdiomifyResponse:
        """Rank the k nearest idioms to the phrase, with collocations attached."""
        if k < 1:
            raise ValueError("k must be >= 1")
        model = model or self.default_model
        if self.tables and model not in self.tables:
            raise ValueError(f"no collocation table for model {model!r}")
        lemmas = refine(phrase, strip_stopwords=self.strip_stopwords)
        vector = phrase_vector(self.store, lemmas)
        if vector is None:
            return IdiomifyResponse(
                query=phrase, refined_tokens=tuple(lemmas), results=(), reason=NO_KNOWN_TOKENS
            )
        results = tuple(
            IdiomResult(
                idiom_key=key,
                similarity=sim,
                collocations=self._collocations(key, model),
            )
            for key, sim in nearest_idioms(self.store, vector, k)
        )
        return IdiomifyResponse(query=phrase, refined_tokens=tuple(lemmas), results=results)

    def neighbors(self, idiom_key: str, k: int = 5) -> list[tuple[str, float]]:
        """Nearest idioms to a known idiom; the idiom itself ranks first."""
        if idiom_key not in self.store.idiom_keys:
            raise KeyError(idiom_key)
        return nearest_idioms(self.store, self.store.vector(idiom_key), k)


@dataclass(frozen=True)
class EvalItem:
    idiom_key: str
    definition: str


def rank_of(store: EmbeddingStore, item: EvalItem, strip_stopwords: bool = False) -> int:
    """0-based rank of the item's idiom when searching its definition.

    A definition with no known tokens cannot be searched at all and is
    charged the worst possible rank, the idiom count.
    """
    if item.idiom_key not in store.idiom_keys:
        raise KeyError(f"{item.idiom_key!r} is not an idiom of this store")
    n_idioms = len(store.idiom_keys)
    vector = phrase_vector(store, refine(item.definition, strip_stopwords=strip_stopwords))
    if vector is None:
        return n_idioms
    ranked = nearest_idioms(store, vector, n_idioms)
    for rank, (key, _) in enumerate(ranked):
        if key == item.idiom_key:
            return rank
    raise AssertionError("idiom key vanished from its own store")


def median_rank(ranks: Sequence[int]) -> float:
    """Median of the ranks: middle element, or mean of the two middles."""
    if not ranks:
        raise ValueError("median_rank needs at least one rank")
    return float(statistics.median(ranks))


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[tuple[str, int], ...]
    median: float
    variance_population: float
    variance_sample: float | None


def evaluate(store: EmbeddingStore, items: Iterable[EvalItem], strip_stopwords: bool = False) -> EvalReport:
    rows = tuple((item.idiom_key, rank_of(store, item, strip_stopwords)) for item in items)
    if not rows:
        raise ValueError("no evaluation items")
    ranks = [rank for _, rank in rows]
    return EvalReport(
        rows=rows,
        median=median_rank(ranks),
        variance_population=statistics.pvariance(ranks),
        variance_sample=statistics.variance(ranks) if len(ranks) >= 2 else None,
    )


def read_testset(source: Union[str, Path, Iterable[str]]) -> list[EvalItem]:
    """Parse ``idiom_key<TAB>definition`` rows; # lines are comments."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            lines = handle.readlines()
    else:
        lines = list(source)
    items = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        key, sep, definition = line.partition("\t")
        if not sep or not definition.strip():
            raise ValueError(f"line {line_no}: expected idiom_key<TAB>definition")
        items.append(EvalItem(idiom_key=key.strip(), definition=definition.strip()))
    return items


def write_report(report: EvalReport, out: TextIO) -> None:
    """Per-item ranks, then summary lines prefixed with # for easy parsing."""
    for key, rank in report.rows:
        out.write(f"{key}\t{rank}\n")
    out.write(f"# items\t{len(report.rows)}\n")
    out.write(f"# median_rank\t{report.median}\n")
    out.write(f"# variance_population\t{report.variance_population}\n")
    sample = "na" if report.variance_sample is None else report.variance_sample
    out.write(f"# variance_sample\t{sample}\n")
