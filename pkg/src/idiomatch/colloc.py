"""Collocation models over idiom bags-of-words: TF, TF-IDF and PMI.

Each model scores (idiom, lemma) pairs independently per content category
(verb/noun/adj/adv) and ranks them by score, then raw count, then lemma.
TF is the raw co-occurrence count baseline.  TF-IDF treats every idiom as
a document: (1 + log10 tf) * log10(N / df).  PMI compares the joint
probability of the pair against independence: log2 p(x,y) - (log2 p(x) +
log2 p(y)), with probabilities estimated per category from the count table.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, TextIO, Union

from idiomatch.matcher import CATEGORIES, BagOfWords

MODELS = ("tf", "tfidf", "pmi")


def pmi(p_xy: float, p_x: float, p_y: float) -> float:
    """Pointwise mutual information, computed as a difference of logs."""
    for name, p in (("p_xy", p_xy), ("p_x", p_x), ("p_y", p_y)):
        if not 0.0 < p <= 1.0:
            raise ValueError(f"{name} must be in (0, 1], got {p}")
    log_p_xy = math.log2(p_xy)
    log_p_x = math.log2(p_x)
    log_p_y = math.log2(p_y)
    return log_p_xy - (log_p_x + log_p_y)


def tfidf_weight(tf: int, df: int, n_docs: int) -> float:
    """(1 + log10 tf) * log10(N / df); a term in every document weighs zero."""
    if tf < 1:
        raise ValueError(f"tf must be >= 1, got {tf}")
    if df < 1 or df > n_docs:
        raise ValueError(f"df must be in [1, N={n_docs}], got {df}")
    return (1.0 + math.log10(tf)) * math.log10(n_docs / df)


@dataclass(frozen=True)
class CollocationScore:
    idiom_key: str
    category: str
    lemma: str
    model: str
    score: float
    raw_count: int


@dataclass(frozen=True)
class CooccurrenceStats:
    """Count table for one category; probability estimates for PMI."""

    pair_count: dict[tuple[str, str], int]
    idiom_total: dict[str, int]
    lemma_total: dict[str, int]
    grand_total: int

    @classmethod
    def from_bows(cls, bows: Sequence[BagOfWords], category: str) -> "CooccurrenceStats":
        pair: dict[tuple[str, str], int] = {}
        idiom_total: dict[str, int] = defaultdict(int)
        lemma_total: dict[str, int] = defaultdict(int)
        grand = 0
        for bag in bows:
            for lemma, count in bag.category(category).items():
                pair[(bag.idiom_key, lemma)] = pair.get((bag.idiom_key, lemma), 0) + count
                idiom_total[bag.idiom_key] += count
                lemma_total[lemma] += count
                grand += count
        return cls(pair_count=pair, idiom_total=dict(idiom_total), lemma_total=dict(lemma_total), grand_total=grand)


class CollocationModel(ABC):
    """Base of the three collocation extractors; fit() ranks all pairs."""

    kind: str

    @abstractmethod
    def _score(self, stats: CooccurrenceStats, n_docs: int, df: dict[str, int],
               idiom_key: str, lemma: str, count: int) -> float:
        ...

    def fit(self, bows: Sequence[BagOfWords], min_pair_count: int = 1) -> "CollocationTable":
        """Score and rank every (idiom, lemma) pair per category.

        Statistics are estimated from the full table; the min count filter
        drops output rows only.
        """
        ranked: dict[tuple[str, str], list[CollocationScore]] = {}
        for category in CATEGORIES:
            stats = CooccurrenceStats.from_bows(bows, category)
            df: dict[str, int] = defaultdict(int)
            docs = set()
            for (idiom_key, lemma), count in stats.pair_count.items():
                df[lemma] += 1
                docs.add(idiom_key)
            n_docs = len(docs)
            per_idiom: dict[str, list[CollocationScore]] = defaultdict(list)
            for (idiom_key, lemma), count in stats.pair_count.items():
                if count < min_pair_count:
                    continue
                score = self._score(stats, n_docs, df, idiom_key, lemma, count)
                per_idiom[idiom_key].append(
                    CollocationScore(idiom_key, category, lemma, self.kind, score, count)
                )
            for idiom_key, scores in per_idiom.items():
                scores.sort(key=lambda s: (-s.score, -s.raw_count, s.lemma))
                ranked[(idiom_key, category)] = scores
        return CollocationTable(ranked=ranked)


class TFModel(CollocationModel):
    kind = "tf"

    def _score(self, stats, n_docs, df, idiom_key, lemma, count):
        return float(count)


class TFIDFModel(CollocationModel):
    kind = "tfidf"

    def _score(self, stats, n_docs, df, idiom_key, lemma, count):
        return tfidf_weight(count, df[lemma], n_docs)


class PMIModel(CollocationModel):
    kind = "pmi"

    def _score(self, stats, n_docs, df, idiom_key, lemma, count):
        grand = stats.grand_total
        return pmi(
            count / grand,
            stats.idiom_total[idiom_key] / grand,
            stats.lemma_total[lemma] / grand,
        )


_MODEL_CLASSES = {"tf": TFModel, "tfidf": TFIDFModel, "pmi": PMIModel}


def make_model(kind: str) -> CollocationModel:
    try:
        return _MODEL_CLASSES[kind]()
    except KeyError:
        raise ValueError(f"unknown collocation model {kind!r}; expected one of {MODELS}") from None


def fit(kind: str, bows: Sequence[BagOfWords], min_pair_count: int = 1) -> "CollocationTable":
    return make_model(kind).fit(bows, min_pair_count=min_pair_count)


@dataclass
class CollocationTable:
    """Ranked collocation lists keyed by (idiom, category); immutable once fit."""

    ranked: dict[tuple[str, str], list[CollocationScore]]

    def top_k(self, idiom_key: str, category: str, k: int) -> list[tuple[str, float]]:
        """First k (lemma, score) pairs of the ranked list; [] for unknown keys."""
        if k < 1:
            raise ValueError("k must be >= 1")
        scores = self.ranked.get((idiom_key, category), [])
        return [(s.lemma, s.score) for s in scores[:k]]

    def rows(self) -> Iterator[CollocationScore]:
        """Global row order: idiom key, then category order, then rank."""
        for idiom_key, category in sorted(
            self.ranked, key=lambda pair: (pair[0], CATEGORIES.index(pair[1]))
        ):
            yield from self.ranked[(idiom_key, category)]

    def idiom_keys(self) -> list[str]:
        return sorted({idiom_key for idiom_key, _ in self.ranked})


def write_table(table: CollocationTable, out: TextIO) -> int:
    """TSV rows ``idiom<TAB>category<TAB>lemma<TAB>score<TAB>raw_count``."""
    count = 0
    for row in table.rows():
        out.write(f"{row.idiom_key}\t{row.category}\t{row.lemma}\t{row.score:.6f}\t{row.raw_count}\n")
        count += 1
    return count


def read_table(source: Union[str, Iterable[str]], model: str = "") -> CollocationTable:
    if isinstance(source, str):
        with open(source, encoding="utf-8") as handle:
            lines = handle.readlines()
    else:
        lines = list(source)
    ranked: dict[tuple[str, str], list[CollocationScore]] = defaultdict(list)
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        fields = line.rstrip("\n").split("\t")
        if len(fields) != 5:
            raise ValueError(f"line {line_no}: expected 5 fields, got {len(fields)}")
        idiom_key, category, lemma, score, raw = fields
        ranked[(idiom_key, category)].append(
            CollocationScore(idiom_key, category, lemma, model, float(score), int(raw))
        )
    return CollocationTable(ranked=dict(ranked))
