"""Deterministic synthetic sample data: a training corpus with planted
idiom contexts, a raw annotated corpus for the identification pipeline,
and a matching retrieval test set.

Twenty idioms each get three distinctive context words that appear next to
the idiom and nowhere else, on top of a shared pseudo-word background.  A
model trained on this corpus should place each idiom near its context
words, which the bundled test set checks by reverse-searching definitions
built from those words.

Run ``python -m idiomatch.synth --out-dir sample`` to regenerate the files
committed under sample/.
"""

from __future__ import annotations

import argparse
import shutil
from pathlib import Path

import numpy as np

from idiomatch import _resources
from idiomatch.corpus import AnnotatedSentence, AnnotatedToken, fallback_annotate, lemmatize, write_annotated
from idiomatch.matcher import IdiomOccurrence, write_idiom2lemma2pos

DEFAULT_SEED = 13

# idiom key -> (three context lemmas, their tags, a definition template)
PLANTED: dict[str, tuple[tuple[str, str], tuple[str, str], tuple[str, str], str]] = {
    "with_bated_breath": (("wait", "VERB"), ("anxious", "ADJ"), ("eager", "ADJ"),
                          "to wait for something anxious and eager"),
    "catch-22": (("dilemma", "NOUN"), ("paradox", "NOUN"), ("unsolvable", "ADJ"),
                 "an unsolvable dilemma, a paradox with no way out"),
    "down-to-earth": (("humble", "ADJ"), ("modest", "ADJ"), ("practical", "ADJ"),
                      "humble and modest, practical in manner"),
    "add_fuel_to_the_fire": (("provoke", "VERB"), ("anger", "NOUN"), ("escalate", "VERB"),
                             "to provoke more anger and escalate a conflict"),
    "grasp_at_straws": (("desperate", "ADJ"), ("hopeless", "ADJ"), ("futile", "ADJ"),
                        "a desperate and futile try at a hopeless thing"),
    "open_the_floodgates": (("unleash", "VERB"), ("torrent", "NOUN"), ("surge", "NOUN"),
                            "to unleash a torrent, to let a surge happen"),
    "keep_someone_at_arm's_length": (("distant", "ADJ"), ("aloof", "ADJ"), ("wary", "ADJ"),
                                     "to stay distant and aloof, wary of someone"),
    "at_arm's_length": (("detach", "VERB"), ("remote", "ADJ"), ("apart", "ADV"),
                        "to detach and stand apart, remote from a thing"),
    "teach_someone_a_lesson": (("punish", "VERB"), ("revenge", "NOUN"), ("discipline", "NOUN"),
                               "to punish someone as revenge and discipline"),
    "ahead_of_one's_time": (("visionary", "ADJ"), ("modern", "ADJ"), ("pioneer", "NOUN"),
                            "a visionary and modern pioneer"),
    "lose_one's_mind": (("crazy", "ADJ"), ("insane", "ADJ"), ("frantic", "ADJ"),
                        "to go crazy, insane and frantic"),
    "out_of_touch": (("unaware", "ADJ"), ("clueless", "ADJ"), ("antique", "ADJ"),
                     "unaware and clueless, antique in outlook"),
    "on_one's_toes": (("alert", "ADJ"), ("ready", "ADJ"), ("vigilant", "ADJ"),
                      "alert, ready and vigilant at all moments"),
    "get_to_the_point": (("direct", "ADJ"), ("concise", "ADJ"), ("blunt", "ADJ"),
                         "to be direct, concise and blunt about a matter"),
    "beat_around_the_bush": (("evasive", "ADJ"), ("vague", "ADJ"), ("stall", "VERB"),
                             "to be evasive and vague, to stall instead of telling"),
    "by_hook_or_by_crook": (("ruthless", "ADJ"), ("crafty", "ADJ"), ("sly", "ADJ"),
                            "in a ruthless, crafty and sly manner"),
    "best_of_both_worlds": (("ideal", "ADJ"), ("combine", "VERB"), ("advantage", "NOUN"),
                            "an ideal way to combine every advantage"),
    "hold_one's_breath": (("suspense", "NOUN"), ("expect", "VERB"), ("nervous", "ADJ"),
                          "to expect something in nervous suspense"),
    "rocket_science": (("complex", "ADJ"), ("technical", "ADJ"), ("genius", "NOUN"),
                       "a complex and technical thing for a genius"),
    "apples_and_oranges": (("incomparable", "ADJ"), ("mismatch", "NOUN"), ("contrast", "NOUN"),
                           "an incomparable mismatch, a contrast of two things"),
}

_FUNCTION_WORDS = [
    ("the", "DET"), ("and", "X"), ("of", "ADP"), ("to", "ADP"), ("a", "DET"),
    ("in", "ADP"), ("be", "VERB"), ("have", "VERB"), ("it", "PRON"), ("they", "PRON"),
]

_ONSETS = ["b", "br", "ch", "cl", "d", "dr", "f", "fl", "g", "gl", "h", "j", "k",
           "l", "m", "n", "p", "pl", "pr", "r", "s", "sk", "sl", "sn", "sp", "st",
           "t", "tr", "v", "w", "z"]
_NUCLEI = ["a", "e", "i", "o", "u", "ai", "ea", "oa", "oo"]
_CODAS = ["b", "ck", "ft", "g", "k", "l", "lm", "lp", "m", "n", "nk", "nt", "p", "rk", "rm", "t"]
_BG_TAGS = ["NOUN", "VERB", "ADJ", "ADV", "X"]


def _background_vocab(count: int) -> list[tuple[str, str]]:
    words: list[tuple[str, str]] = []
    seen = {lemma for entry in PLANTED.values() for lemma, _ in entry[:3]}
    seen.update(w for w, _ in _FUNCTION_WORDS)
    i = 0
    while len(words) < count:
        onset = _ONSETS[i % len(_ONSETS)]
        nucleus = _NUCLEI[(i // len(_ONSETS)) % len(_NUCLEI)]
        coda = _CODAS[(i // (len(_ONSETS) * len(_NUCLEI))) % len(_CODAS)]
        extra = _NUCLEI[(i * 7) % len(_NUCLEI)] if (i % 3) == 0 else ""
        lemma = onset + nucleus + coda + extra
        i += 1
        if lemma in seen:
            continue
        seen.add(lemma)
        words.append((lemma, _BG_TAGS[len(words) % len(_BG_TAGS)]))
    return words


def synthetic_training_rows(
    seed: int = DEFAULT_SEED,
    occurrences_per_idiom: int = 150,
    background_size: int = 900,
) -> list[IdiomOccurrence]:
    """Rows for an idiom2lemma2pos-shaped corpus with planted contexts."""
    for key, entry in PLANTED.items():
        for lemma, _ in entry[:3]:
            if lemmatize(lemma) != lemma:
                raise AssertionError(f"context word {lemma!r} is not lemma-stable")
    rng = np.random.default_rng(seed)
    background = _background_vocab(background_size)
    # every idiom owns a topic pool of background words; sentences mix the
    # pool with a global zipf-skewed draw, so co-occurrence has learnable
    # structure the way real text does
    n_topics = len(PLANTED)
    pools = [background[t::n_topics] for t in range(n_topics)]
    weights = 1.0 / np.arange(1, len(background) + 1) ** 0.6
    weights /= weights.sum()

    def bg_run(length: int, topic: int) -> list[tuple[str, str]]:
        run = []
        pool = pools[topic]
        for _ in range(length):
            roll = rng.random()
            if roll < 0.25:
                run.append(_FUNCTION_WORDS[int(rng.integers(len(_FUNCTION_WORDS)))])
            elif roll < 0.70:
                run.append(pool[int(rng.integers(len(pool)))])
            else:
                run.append(background[int(rng.choice(len(background), p=weights))])
        return run

    occurrences = []
    for topic, key in enumerate(sorted(PLANTED)):
        c1, c2, c3 = PLANTED[key][:3]
        for _ in range(occurrences_per_idiom):
            before = bg_run(int(rng.integers(12, 16)), topic)
            after = bg_run(int(rng.integers(12, 16)), topic)
            triplet = [c1, c2, c3]
            order = [triplet[j] for j in rng.permutation(3)]
            row = before + [order[0], order[1]] + [(key, "X")] + [order[2]] + after
            idiom_index = len(before) + 2
            tokens = tuple(
                AnnotatedToken(text=lemma, lemma=lemma, pos=pos) for lemma, pos in row
            )
            occurrences.append(
                IdiomOccurrence(
                    idiom_key=key,
                    tokens=AnnotatedSentence(tokens=tokens),
                    idiom_index=idiom_index,
                )
            )
    return occurrences


def training_corpus(rows: list[IdiomOccurrence]) -> tuple[list[list[str]], set[str]]:
    """Lemma sequences (idiom merged as one token) plus the idiom key set."""
    corpus = [[tok.lemma for tok in occ.tokens.tokens] for occ in rows]
    keys = {occ.idiom_key for occ in rows}
    return corpus, keys


def planted_queries() -> list[tuple[str, str]]:
    """(idiom key, definition built from its planted context words) pairs."""
    return [(key, PLANTED[key][3]) for key in sorted(PLANTED)]


_FILLERS = [
    "people", "today", "really", "never", "think", "story", "little", "doctor",
    "happen", "clearly", "important", "always", "friend", "moment", "problem",
    "maybe", "actually", "big", "new", "old", "talk", "watch", "know", "good",
]

_SUBJECTS = ["they", "she", "he", "we", "you", "the doctor", "my friend", "these people"]

_SLOT_FILLERS = ["me", "him", "them", "us"]
_POSSESSIVES = ["his", "her", "my", "their"]


def _inflect_ing(word: str) -> str:
    if word.endswith("e") and not word.endswith("ee"):
        return word[:-1] + "ing"
    return word + "ing"


def _surface_variants(base_form: str, rng: np.random.Generator) -> list[str]:
    if "-" in base_form:
        return [base_form, base_form.replace("-", " ")]
    words = base_form.split()
    phrases = [words]
    replaced = []
    for word in words:
        if word in ("someone", "somebody"):
            replaced.append(_SLOT_FILLERS[int(rng.integers(len(_SLOT_FILLERS)))])
        elif word in ("one's", "someone's", "somebody's"):
            replaced.append(_POSSESSIVES[int(rng.integers(len(_POSSESSIVES)))])
        else:
            replaced.append(word)
    if replaced != words:
        phrases.append(replaced)
    variants = [" ".join(phrase) for phrase in phrases]
    for phrase in phrases:
        first = phrase[0]
        inflected = _inflect_ing(first)
        if lemmatize(first) in _resources.verb_lemmas() and lemmatize(inflected) == lemmatize(first):
            variants.append(" ".join([inflected, *phrase[1:]]))
    return variants


def synthetic_annotated_sentences(seed: int = DEFAULT_SEED + 1, per_idiom: int = 12):
    """Raw-text sentences with idiom surface forms, fallback-annotated.

    Idioms are kept one per sentence and padded with filler words, so
    extended-mode matches always cover at least the baseline matches.
    """
    from idiomatch.lexicon import sample_lexicon

    rng = np.random.default_rng(seed)
    sentences = []
    for entry in sample_lexicon():
        variants = _surface_variants(entry.base_form, rng)
        for i in range(per_idiom):
            surface = variants[i % len(variants)]
            subject = _SUBJECTS[int(rng.integers(len(_SUBJECTS)))]
            lead = " ".join(
                _FILLERS[int(rng.integers(len(_FILLERS)))] for _ in range(int(rng.integers(2, 5)))
            )
            tail = " ".join(
                _FILLERS[int(rng.integers(len(_FILLERS)))] for _ in range(int(rng.integers(2, 5)))
            )
            text = f"{subject} {lead} {surface} {tail}."
            sentences.append(text)
    for _ in range(120):
        words = [_FILLERS[int(rng.integers(len(_FILLERS)))] for _ in range(int(rng.integers(6, 12)))]
        sentences.append(" ".join(words) + ".")
    annotated = []
    for i, text in enumerate(sentences):
        annotated.append(fallback_annotate(text, doc_id=f"synth-{i // 50:03d}", sent_index=i % 50))
    return annotated


def write_sample(out_dir: str | Path, seed: int = DEFAULT_SEED) -> dict[str, Path]:
    """Write lexicon.tsv, corpus_annotated.tsv, train_corpus.tsv, testset.tsv."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "lexicon": out / "lexicon.tsv",
        "corpus_annotated": out / "corpus_annotated.tsv",
        "train_corpus": out / "train_corpus.tsv",
        "testset": out / "testset.tsv",
    }
    shutil.copyfile(_resources.sample_lexicon_path(), paths["lexicon"])
    with open(paths["corpus_annotated"], "w", encoding="utf-8") as handle:
        write_annotated(synthetic_annotated_sentences(), handle)
    rows = synthetic_training_rows(seed)
    with open(paths["train_corpus"], "w", encoding="utf-8") as handle:
        write_idiom2lemma2pos(rows, handle)
    with open(paths["testset"], "w", encoding="utf-8") as handle:
        for key, definition in planted_queries():
            handle.write(f"{key}\t{definition}\n")
    return paths


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(description="regenerate the bundled sample data")
    parser.add_argument("--out-dir", default="sample")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = parser.parse_args(argv)
    paths = write_sample(args.out_dir, seed=args.seed)
    for name, path in sorted(paths.items()):
        print(f"{name}: {path}")


if __name__ == "__main__":
    main()
