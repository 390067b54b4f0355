"""Skip-gram embeddings with negative sampling over idiom-merged corpora.

The trainer maximizes log sigma(u.v) + sum_k log sigma(-u.v_k) for every
center/context pair within the window, drawing negatives from the unigram
distribution raised to 3/4.  Pair updates run sequentially in a compiled
kernel with negatives pre-drawn per epoch, so a fixed seed in
single-threaded mode reproduces the run bit for bit.  Cumulative loss per
epoch feeds a plateau-based stopping rule.
"""

from __future__ import annotations

import math
import threading
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, Union

import numba
import numpy as np

_NOISE_POWER = 0.75


class TrainingError(ValueError):
    """Raised when the corpus leaves nothing to train on."""


@dataclass(frozen=True)
class TrainingConfig:
    vector_size: int = 200
    max_epochs: int = 80
    window: int = 8
    min_count: int = 1
    learning_rate: float = 0.025
    min_learning_rate: float = 1e-4
    negative_samples: int = 5
    seed: int = 1
    plateau_rel_tol: float = 1e-3
    plateau_patience: int = 3
    subsample: float = 0.0

    def __post_init__(self) -> None:
        if self.vector_size < 1:
            raise ValueError("vector_size must be >= 1")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if not 0 < self.min_learning_rate <= self.learning_rate:
            raise ValueError("min_learning_rate must be in (0, learning_rate]")
        if self.negative_samples < 1:
            raise ValueError("negative_samples must be >= 1")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")

    def epoch_learning_rate(self, epoch: int) -> float:
        """Linear decay from learning_rate towards min_learning_rate."""
        if self.max_epochs == 1:
            return self.learning_rate
        span = self.learning_rate - self.min_learning_rate
        return self.learning_rate - span * (epoch / self.max_epochs)


@dataclass
class EmbeddingStore:
    """Vocabulary plus trained input vectors; idiom keys marked separately."""

    vocab: dict[str, int]
    vectors: np.ndarray
    idiom_keys: frozenset[str]
    _idiom_index: np.ndarray | None = field(default=None, repr=False)
    _idiom_sorted: list[str] | None = field(default=None, repr=False)
    _idiom_norms: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.vectors.shape[0] != len(self.vocab):
            raise ValueError("vector row count must equal vocabulary size")
        missing = self.idiom_keys - self.vocab.keys()
        if missing:
            raise ValueError(f"idiom keys missing from vocabulary: {sorted(missing)[:5]}")

    def __contains__(self, token: str) -> bool:
        return token in self.vocab

    @property
    def vector_size(self) -> int:
        return int(self.vectors.shape[1])

    def vector(self, token: str) -> np.ndarray:
        return self.vectors[self.vocab[token]]

    def tokens(self) -> list[str]:
        ordered = sorted(self.vocab.items(), key=lambda kv: kv[1])
        return [token for token, _ in ordered]

    def _idiom_block(self) -> tuple[list[str], np.ndarray, np.ndarray]:
        # safe to cache: a finished store is immutable
        if self._idiom_sorted is None:
            self._idiom_sorted = sorted(self.idiom_keys)
            self._idiom_index = np.array(
                [self.vocab[k] for k in self._idiom_sorted], dtype=np.int64
            )
            self._idiom_norms = np.linalg.norm(self.vectors[self._idiom_index], axis=1)
        return self._idiom_sorted, self.vectors[self._idiom_index], self._idiom_norms


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """u.v / (|u||v|); rejects zero vectors and mismatched dimensions."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError("dimension mismatch")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine is undefined for zero vectors")
    return float(np.dot(u, v) / (nu * nv))


def nearest_idioms(store: EmbeddingStore, query: np.ndarray, k: int) -> list[tuple[str, float]]:
    """Exact cosine scan restricted to idiom keys; ties break by key."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not store.idiom_keys:
        raise ValueError("store has no idiom keys")
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (store.vector_size,):
        raise ValueError("query dimension does not match the store")
    qnorm = np.linalg.norm(query)
    if qnorm == 0.0:
        raise ValueError("cosine is undefined for zero vectors")
    keys, rows, norms = store._idiom_block()
    sims = rows.astype(np.float64) @ query / (norms * qnorm)
    np.clip(sims, -1.0, 1.0, out=sims)  # rounding must not push cosines past 1
    ranked = sorted(zip(keys, sims), key=lambda pair: (-pair[1], pair[0]))
    return [(key, float(sim)) for key, sim in ranked[:k]]


def should_stop(trace: Sequence[float], rel_tol: float, patience: int) -> bool:
    """True when the last ``patience`` relative loss drops all fall below tol."""
    if patience < 1:
        raise ValueError("patience must be >= 1")
    if len(trace) < patience + 1:
        return False
    for prev, cur in zip(trace[-patience - 1 : -1], trace[-patience:]):
        drop = (prev - cur) / prev if prev != 0 else 0.0
        if drop >= rel_tol:
            return False
    return True


@numba.njit(nogil=True, cache=True)
def _sgns_kernel(
    u: np.ndarray,
    v: np.ndarray,
    centers: np.ndarray,
    contexts: np.ndarray,
    negatives: np.ndarray,
    lr: float,
) -> float:
    """One sequential pass over the pairs; returns the summed pair loss.

    Per pair: context and negative rows are updated with the center's old
    vector, the center's update accumulates across the positive and all
    negatives and lands once.  nogil so that parallel mode can share the
    weight matrices across threads (races are accepted there).
    """
    total = 0.0
    dim = u.shape[1]
    n_negative = negatives.shape[1]
    work = np.zeros(dim)
    for i in range(centers.shape[0]):
        c = centers[i]
        for d in range(dim):
            work[d] = 0.0
        o = contexts[i]
        dot = 0.0
        for d in range(dim):
            dot += u[c, d] * v[o, d]
        if dot >= 0.0:
            exp_neg = math.exp(-dot)
            sig = 1.0 / (1.0 + exp_neg)
            total += math.log(1.0 + exp_neg)
        else:
            exp_pos = math.exp(dot)
            sig = exp_pos / (1.0 + exp_pos)
            total += math.log(1.0 + exp_pos) - dot
        g = (1.0 - sig) * lr
        for d in range(dim):
            work[d] += g * v[o, d]
            v[o, d] += g * u[c, d]
        for j in range(n_negative):
            t = negatives[i, j]
            dot = 0.0
            for d in range(dim):
                dot += u[c, d] * v[t, d]
            if dot >= 0.0:
                exp_neg = math.exp(-dot)
                sig = 1.0 / (1.0 + exp_neg)
                total += math.log(1.0 + exp_neg) + dot
            else:
                exp_pos = math.exp(dot)
                sig = exp_pos / (1.0 + exp_pos)
                total += math.log(1.0 + exp_pos)
            g = -sig * lr
            for d in range(dim):
                work[d] += g * v[t, d]
                v[t, d] += g * u[c, d]
        for d in range(dim):
            u[c, d] += work[d]
    return total


def _build_vocab(corpus: Sequence[Sequence[str]], min_count: int) -> tuple[dict[str, int], np.ndarray]:
    counts = Counter(token for sentence in corpus for token in sentence)
    kept = sorted(
        (token for token, c in counts.items() if c >= min_count),
        key=lambda token: (-counts[token], token),
    )
    vocab = {token: i for i, token in enumerate(kept)}
    freqs = np.array([counts[token] for token in kept], dtype=np.float64)
    return vocab, freqs


def _pairs(sentences: list[np.ndarray], window: int) -> tuple[np.ndarray, np.ndarray]:
    centers: list[np.ndarray] = []
    contexts: list[np.ndarray] = []
    for ids in sentences:
        n = len(ids)
        for offset in range(1, window + 1):
            if n <= offset:
                break
            left = ids[:-offset]
            right = ids[offset:]
            centers.append(left)
            contexts.append(right)
            centers.append(right)
            contexts.append(left)
    if not centers:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    return np.concatenate(centers), np.concatenate(contexts)


def train(
    corpus: Iterable[Sequence[str]],
    config: TrainingConfig,
    idiom_keys: Iterable[str] = (),
    workers: int = 1,
) -> tuple[EmbeddingStore, list[float]]:
    """Train embeddings and return the store plus the per-epoch loss trace.

    With workers == 1 the run is deterministic for a given seed.  More
    workers shard the pair stream across threads that update shared weights
    without coordination; faster, but not reproducible.
    """
    sentences_raw = [list(s) for s in corpus]
    vocab, freqs = _build_vocab(sentences_raw, config.min_count)
    if not vocab:
        raise TrainingError("vocabulary is empty after min_count filtering")
    idioms = frozenset(k for k in idiom_keys if k in vocab)

    rng = np.random.default_rng(config.seed)
    sentences = []
    keep_prob = None
    if config.subsample > 0:
        total = freqs.sum()
        ratio = config.subsample / (freqs / total)
        keep_prob = np.minimum(1.0, np.sqrt(ratio) + ratio)
    for raw in sentences_raw:
        ids = np.array([vocab[t] for t in raw if t in vocab], dtype=np.int64)
        if keep_prob is not None and len(ids):
            ids = ids[rng.random(len(ids)) < keep_prob[ids]]
        if len(ids) > 1:
            sentences.append(ids)
    centers, contexts = _pairs(sentences, config.window)
    if len(centers) == 0:
        raise TrainingError("no training pairs; corpus too small for the window")

    noise = freqs ** _NOISE_POWER
    noise_cum = np.cumsum(noise / noise.sum())

    dim = config.vector_size
    size = len(vocab)
    u = (rng.random((size, dim)) - 0.5) / dim
    v = np.zeros((size, dim))

    trace: list[float] = []
    for epoch in range(config.max_epochs):
        lr = config.epoch_learning_rate(epoch)
        if workers <= 1:
            loss = _run_epoch(u, v, centers, contexts, noise_cum, config, rng, lr)
        else:
            loss = _run_epoch_parallel(u, v, centers, contexts, noise_cum, config, rng, lr, workers)
        trace.append(loss)
        if should_stop(trace, config.plateau_rel_tol, config.plateau_patience):
            break

    store = EmbeddingStore(vocab=vocab, vectors=u, idiom_keys=idioms)
    return store, trace


def _draw_negatives(rng: np.random.Generator, noise_cum: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    drawn = np.searchsorted(noise_cum, rng.random(shape), side="right")
    # rounding in the cumulative sum could otherwise index one past the end
    return np.minimum(drawn, len(noise_cum) - 1).astype(np.int64)


def _run_epoch(
    u: np.ndarray,
    v: np.ndarray,
    centers: np.ndarray,
    contexts: np.ndarray,
    noise_cum: np.ndarray,
    config: TrainingConfig,
    rng: np.random.Generator,
    lr: float,
) -> float:
    # shuffling decorrelates consecutive updates (pairs from one sentence
    # share rows), which keeps the cumulative loss an honest quality signal
    order = rng.permutation(len(centers))
    negatives = _draw_negatives(rng, noise_cum, (len(centers), config.negative_samples))
    return float(_sgns_kernel(u, v, centers[order], contexts[order], negatives, lr))


def _run_epoch_parallel(
    u: np.ndarray,
    v: np.ndarray,
    centers: np.ndarray,
    contexts: np.ndarray,
    noise_cum: np.ndarray,
    config: TrainingConfig,
    rng: np.random.Generator,
    lr: float,
    workers: int,
) -> float:
    # lock-free by design: threads race on shared rows and last write wins
    shards = np.array_split(np.arange(len(centers)), workers)
    seeds = rng.integers(0, 2**63 - 1, size=workers)
    losses = [0.0] * workers

    def work(wid: int) -> None:
        local_rng = np.random.default_rng(int(seeds[wid]))
        idx = shards[wid]
        negatives = _draw_negatives(local_rng, noise_cum, (len(idx), config.negative_samples))
        losses[wid] = float(_sgns_kernel(u, v, centers[idx], contexts[idx], negatives, lr))

    threads = [threading.Thread(target=work, args=(wid,)) for wid in range(workers)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    return float(sum(losses))


def save_vectors(store: EmbeddingStore, path: Union[str, Path]) -> None:
    """Text format: ``vocab_size vector_size`` header, then token + values.

    Values carry six significant digits.  Idiom keys go to a companion
    ``<path>.idioms`` file, one per line, sorted.
    """
    path = Path(path)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{len(store.vocab)} {store.vector_size}\n")
        for token in store.tokens():
            row = store.vectors[store.vocab[token]]
            values = " ".join(f"{x:.6g}" for x in row)
            handle.write(f"{token} {values}\n")
    with open(path.with_name(path.name + ".idioms"), "w", encoding="utf-8") as handle:
        for key in sorted(store.idiom_keys):
            handle.write(key + "\n")


def load_vectors(path: Union[str, Path]) -> EmbeddingStore:
    path = Path(path)
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: malformed vector file header")
        size, dim = int(header[0]), int(header[1])
        vocab: dict[str, int] = {}
        vectors = np.zeros((size, dim))
        for i, line in enumerate(handle):
            fields = line.rstrip("\n").split(" ")
            if len(fields) != dim + 1:
                raise ValueError(f"{path}: row {i} has {len(fields) - 1} values, expected {dim}")
            vocab[fields[0]] = i
            vectors[i] = [float(x) for x in fields[1:]]
    if len(vocab) != size:
        raise ValueError(f"{path}: header promises {size} rows, found {len(vocab)}")
    idioms_path = path.with_name(path.name + ".idioms")
    idiom_keys = frozenset()
    if idioms_path.exists():
        with open(idioms_path, encoding="utf-8") as handle:
            idiom_keys = frozenset(line.strip() for line in handle if line.strip())
    return EmbeddingStore(vocab=vocab, vectors=vectors, idiom_keys=idiom_keys)
