"""Idiom vocabulary loading and matching-rule compilation.

An idiom's base form is compiled into a disjunction of token-predicate
sequences.  Baseline rules cover the optional-hyphen, inflection and
alternative-form variations: hyphenated idioms get one TEXT sequence with
and one without the hyphen tokens, everything else matches by lemma, and
pronoun slots ("one's", "someone") match by pronoun class.  Extended rules
additionally tolerate intervening tokens (slop), widen pronoun slots to
wildcards, and add a reordered object-before-verb sequence for verb-initial
idioms so that modified, passivised and slot-expanded uses still match.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence, Union

from idiomatch import _resources
from idiomatch.corpus import lemmatize, tokenize

TEXT = "TEXT"
LEMMA = "LEMMA"
POS = "POS"
WILDCARD = "WILDCARD"

POS_POSSESSIVE = "PRP$"
POS_PERSONAL = "PRP"

# pronoun placeholders that admit substitution rather than literal matching
POSSESSIVE_SLOTS = frozenset({"one's", "someone's", "somebody's"})
PERSONAL_SLOTS = frozenset({"someone", "somebody"})

DEFAULT_MIN_WORDS = 3
DEFAULT_MAX_FILL = 3


class LexiconError(ValueError):
    """Raised when an idiom lexicon cannot be loaded."""


class RuleCompileError(ValueError):
    """Raised when a base form yields no usable matching rule."""


@dataclass(frozen=True)
class TokenPredicate:
    """One slot of a matching sequence.

    kind TEXT/LEMMA/POS constrains a single token by surface text, lemma or
    pronoun class; WILDCARD consumes 1..max_fill arbitrary tokens.
    """

    kind: str
    value: str = ""
    max_fill: int = 0

    def __post_init__(self) -> None:
        if self.kind not in (TEXT, LEMMA, POS, WILDCARD):
            raise ValueError(f"unknown predicate kind {self.kind!r}")
        if self.kind == WILDCARD:
            if self.max_fill < 1:
                raise ValueError("WILDCARD needs max_fill >= 1")
        elif not self.value:
            raise ValueError(f"{self.kind} predicate needs a value")

    def __repr__(self) -> str:  # compact, mirrors the rules-file notation
        if self.kind == WILDCARD:
            return f"[WILDCARD:{self.max_fill}]"
        return f"[{self.kind}:{self.value}]"


@dataclass(frozen=True)
class RuleSequence:
    """A conjunction of predicates matched left to right."""

    predicates: tuple[TokenPredicate, ...]
    reordered: bool = False

    def __post_init__(self) -> None:
        if not self.predicates:
            raise ValueError("a rule sequence needs at least one predicate")


@dataclass(frozen=True)
class MatchRule:
    """Disjunction of sequences for one idiom, with a shared slop budget."""

    idiom_key: str
    sequences: tuple[RuleSequence, ...]
    slop: int = 0

    def __post_init__(self) -> None:
        if not self.sequences:
            raise ValueError("a match rule needs at least one sequence")
        if self.slop < 0:
            raise ValueError("slop must be >= 0")

    @property
    def reordered(self) -> bool:
        return any(seq.reordered for seq in self.sequences)


@dataclass(frozen=True)
class IdiomEntry:
    """One vocabulary entry: base form, normalized key and alternatives."""

    base_form: str
    key: str
    alternatives: tuple[str, ...] = ()
    word_count: int = 0
    hyphenated: bool = False

    @classmethod
    def from_base_form(cls, base_form: str, alternatives: Sequence[str] = ()) -> "IdiomEntry":
        base = " ".join(base_form.strip().lower().split())
        if not base:
            raise LexiconError("empty base form")
        return cls(
            base_form=base,
            key=normalize_key(base),
            alternatives=tuple(" ".join(a.strip().lower().split()) for a in alternatives if a.strip()),
            word_count=len(base.split()),
            hyphenated="-" in base,
        )


@dataclass(frozen=True)
class IdiomLexicon:
    """Filtered, key-unique idiom vocabulary."""

    entries: tuple[IdiomEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[IdiomEntry]:
        return iter(self.entries)

    def keys(self) -> list[str]:
        return [entry.key for entry in self.entries]


def normalize_key(base_form: str) -> str:
    """Lowercase the base form and replace internal spaces with underscores.

    Hyphens are preserved, so "catch-22" keys as itself.  Idempotent.
    """
    if not base_form.strip():
        raise ValueError("cannot normalize an empty base form")
    return "_".join(base_form.strip().lower().split())


def load_lexicon(source: Union[str, Path, Iterable[str]], min_words: int = DEFAULT_MIN_WORDS) -> IdiomLexicon:
    """Load a TSV lexicon (base form, then alternatives) and filter short idioms.

    Entries survive when they have at least ``min_words`` space-separated
    words or contain a hyphen.  Rows repeating a base form merge their
    alternatives; two different base forms normalizing to the same key are
    rejected.
    """
    if min_words < 1:
        raise LexiconError("min_words must be >= 1")
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            rows = _parse_rows(handle)
    else:
        rows = _parse_rows(source)
    if not rows:
        raise LexiconError("lexicon source contains no idioms")

    by_key: dict[str, IdiomEntry] = {}
    order: list[str] = []
    for base_form, alternatives in rows:
        entry = IdiomEntry.from_base_form(base_form, alternatives)
        known = by_key.get(entry.key)
        if known is None:
            by_key[entry.key] = entry
            order.append(entry.key)
        elif known.base_form != entry.base_form:
            raise LexiconError(
                f"duplicate key {entry.key!r} from conflicting base forms "
                f"{known.base_form!r} and {entry.base_form!r}"
            )
        else:
            merged = known.alternatives + tuple(
                alt for alt in entry.alternatives if alt not in known.alternatives
            )
            by_key[entry.key] = IdiomEntry(
                base_form=known.base_form,
                key=known.key,
                alternatives=merged,
                word_count=known.word_count,
                hyphenated=known.hyphenated,
            )
    kept = tuple(
        by_key[key]
        for key in order
        if by_key[key].word_count >= min_words or by_key[key].hyphenated
    )
    if not kept:
        raise LexiconError("no idioms survive the length filter")
    return IdiomLexicon(entries=kept)


def _parse_rows(lines: Iterable[str]) -> list[tuple[str, list[str]]]:
    rows = []
    for raw in lines:
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cells = [cell.strip() for cell in line.split("\t")]
        base, alternatives = cells[0], [c for c in cells[1:] if c]
        if not base:
            raise LexiconError("row with empty base form")
        rows.append((base, alternatives))
    return rows


def _lemma_predicates(phrase: str, mode: str, max_fill: int) -> list[TokenPredicate]:
    preds: list[TokenPredicate] = []
    for word in phrase.split():
        if word in POSSESSIVE_SLOTS:
            if mode == "extended":
                preds.append(TokenPredicate(WILDCARD, max_fill=max_fill))
            else:
                preds.append(TokenPredicate(POS, POS_POSSESSIVE))
        elif word in PERSONAL_SLOTS:
            if mode == "extended":
                preds.append(TokenPredicate(WILDCARD, max_fill=max_fill))
            else:
                preds.append(TokenPredicate(POS, POS_PERSONAL))
        else:
            preds.extend(TokenPredicate(LEMMA, lemmatize(tok)) for tok in tokenize(word))
    return preds


def _text_sequences(base_form: str) -> list[list[TokenPredicate]]:
    without: list[TokenPredicate] = []
    with_hyphen: list[TokenPredicate] = []
    for word in base_form.split():
        parts = [part for part in word.split("-") if part]
        for i, part in enumerate(parts):
            tokens = tokenize(part)
            if i > 0 and "-" in word:
                with_hyphen.append(TokenPredicate(TEXT, "-"))
            without.extend(TokenPredicate(TEXT, tok.lower()) for tok in tokens)
            with_hyphen.extend(TokenPredicate(TEXT, tok.lower()) for tok in tokens)
    return [without, with_hyphen]


def _first_lemma(phrase: str) -> str:
    tokens = tokenize(phrase.split()[0])
    return lemmatize(tokens[0]) if tokens else ""


def compile_rule(
    entry: IdiomEntry,
    mode: str = "baseline",
    *,
    max_fill: int = DEFAULT_MAX_FILL,
    slop: int | None = None,
) -> MatchRule:
    """Compile one entry into its matching rule for the given mode.

    Baseline rules are strict: no slop, no wildcards, no reordering.
    Extended rules widen every baseline sequence and append reordered
    variants for verb-initial phrases; their slop budget defaults to the
    tokenized length of the base form plus one.
    """
    if mode not in ("baseline", "extended"):
        raise ValueError(f"unknown mode {mode!r}")
    # pair every sequence with the phrase it came from; TEXT sequences of a
    # hyphenated base form carry no phrase and are never reordered
    paired: list[tuple[str | None, RuleSequence]] = []
    if entry.hyphenated:
        for preds in _text_sequences(entry.base_form):
            if preds:
                paired.append((None, RuleSequence(predicates=tuple(preds))))
        phrases = list(entry.alternatives)
    else:
        phrases = [entry.base_form, *entry.alternatives]
    for phrase in phrases:
        preds = _lemma_predicates(phrase, mode, max_fill)
        if preds:
            paired.append((phrase, RuleSequence(predicates=tuple(preds))))
    if not paired:
        raise RuleCompileError(f"{entry.base_form!r}: no usable tokens in base form")

    sequences = [seq for _, seq in paired]
    rule_slop = 0
    if mode == "extended":
        rule_slop = slop if slop is not None else len(tokenize(entry.base_form)) + 1
        verbs = _resources.verb_lemmas()
        for phrase, seq in paired:
            if phrase is None or len(seq.predicates) < 2:
                continue
            if _first_lemma(phrase) in verbs:
                shifted = seq.predicates[1:] + (seq.predicates[0],)
                sequences.append(RuleSequence(predicates=shifted, reordered=True))
    return MatchRule(idiom_key=entry.key, sequences=tuple(sequences), slop=rule_slop)


def compile_lexicon(
    lexicon: IdiomLexicon,
    mode: str = "baseline",
    *,
    max_fill: int = DEFAULT_MAX_FILL,
    slop: int | None = None,
) -> list[MatchRule]:
    return [compile_rule(entry, mode, max_fill=max_fill, slop=slop) for entry in lexicon]


def _predicate_to_json(pred: TokenPredicate) -> dict:
    if pred.kind == WILDCARD:
        return {"kind": pred.kind, "max_fill": pred.max_fill}
    return {"kind": pred.kind, "value": pred.value}


def _predicate_from_json(obj: dict) -> TokenPredicate:
    if obj["kind"] == WILDCARD:
        return TokenPredicate(WILDCARD, max_fill=int(obj["max_fill"]))
    return TokenPredicate(obj["kind"], obj["value"])


def save_rules(rules: Sequence[MatchRule], path: Union[str, Path], mode: str = "") -> None:
    """Serialize compiled rules to the documented JSON structure."""
    payload = {
        "mode": mode,
        "rules": [
            {
                "idiom_key": rule.idiom_key,
                "slop": rule.slop,
                "sequences": [
                    {
                        "reordered": seq.reordered,
                        "predicates": [_predicate_to_json(p) for p in seq.predicates],
                    }
                    for seq in rule.sequences
                ],
            }
            for rule in rules
        ],
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, ensure_ascii=False)
        handle.write("\n")


def load_rules(path: Union[str, Path]) -> list[MatchRule]:
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    rules = []
    for obj in payload["rules"]:
        sequences = tuple(
            RuleSequence(
                predicates=tuple(_predicate_from_json(p) for p in seq["predicates"]),
                reordered=bool(seq.get("reordered", False)),
            )
            for seq in obj["sequences"]
        )
        rules.append(MatchRule(idiom_key=obj["idiom_key"], sequences=sequences, slop=int(obj["slop"])))
    return rules


def sample_lexicon(min_words: int = DEFAULT_MIN_WORDS) -> IdiomLexicon:
    """The lexicon bundled with the package, filtered at ``min_words``."""
    return load_lexicon(_resources.sample_lexicon_path(), min_words=min_words)
