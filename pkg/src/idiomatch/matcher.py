"""Scan annotated sentences for idioms and emit the preprocessing artifacts.

Matching is span-based: every rule sequence is tried at every start token,
the shortest span wins per start, and overlapping spans across rules are
resolved longest-first (ties: earlier start, then smaller idiom key).
Identified spans are merged into single atomic idiom tokens, from which the
three artifacts are written: idiom2sent.tsv (surface tokens),
idiom2lemma2pos.tsv (lemma/tag pairs) and idiom2bows.tsv (per-category
bags of nearby lemmas).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, TextIO, Union

from idiomatch.corpus import AnnotatedSentence, AnnotatedToken
from idiomatch.lexicon import (
    LEMMA,
    POS,
    POS_PERSONAL,
    POS_POSSESSIVE,
    TEXT,
    WILDCARD,
    MatchRule,
    TokenPredicate,
)

IDIOM_PLACEHOLDER = "[IDIOM]"
IDIOM_POS = "X"
DEFAULT_WINDOW = 5

# the coarse tagset folds pronouns into PRON, so the two pronoun-class
# predicates are decided by word lists instead of by tag
POSSESSIVE_PRONOUNS = frozenset(
    {"my", "your", "his", "her", "its", "our", "their", "whose", "one's", "someone's", "somebody's"}
)
PERSONAL_PRONOUNS = frozenset(
    {
        "i", "you", "he", "she", "it", "we", "they", "me", "him", "her", "us", "them",
        "one", "someone", "somebody", "anyone", "anybody", "everyone", "everybody",
        "nobody", "myself", "yourself", "himself", "herself", "itself", "ourselves",
        "yourselves", "themselves",
    }
)


class MergeError(ValueError):
    """Raised when a span replacement would overlap a previous one."""


@dataclass(frozen=True)
class IdiomMatch:
    """A matched idiom span: token indexes [start, end) within a sentence."""

    idiom_key: str
    start: int
    end: int
    sequence_index: int = 0
    reordered: bool = False

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end):
            raise ValueError(f"invalid span [{self.start}, {self.end})")

    @property
    def width(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class IdiomOccurrence:
    """A sentence with one matched span collapsed into an atomic idiom token."""

    idiom_key: str
    tokens: AnnotatedSentence
    idiom_index: int

    def __post_init__(self) -> None:
        anchor = self.tokens.tokens[self.idiom_index]
        if anchor.lemma != self.idiom_key:
            raise ValueError("idiom_index does not point at the idiom token")


@dataclass
class BagOfWords:
    """Per-idiom lemma counts, bucketed by the four content categories."""

    idiom_key: str
    verb: dict[str, int]
    noun: dict[str, int]
    adj: dict[str, int]
    adv: dict[str, int]

    def category(self, name: str) -> dict[str, int]:
        return getattr(self, name)


_CATEGORY_BY_POS = {"VERB": "verb", "NOUN": "noun", "ADJ": "adj", "ADV": "adv"}
CATEGORIES = ("verb", "noun", "adj", "adv")


def _predicate_matches(pred: TokenPredicate, token: AnnotatedToken) -> bool:
    if pred.kind == TEXT:
        return token.text.lower() == pred.value
    if pred.kind == LEMMA:
        return token.lemma == pred.value
    if pred.kind == POS:
        if pred.value == POS_POSSESSIVE:
            return token.text.lower() in POSSESSIVE_PRONOUNS
        if pred.value == POS_PERSONAL:
            return token.pos == "PRON" or token.text.lower() in PERSONAL_PRONOUNS
        return token.pos == pred.value
    raise AssertionError(f"unexpected predicate {pred!r}")


def _match_at(
    preds: Sequence[TokenPredicate],
    tokens: Sequence[AnnotatedToken],
    start: int,
    slop: int,
) -> int | None:
    """Earliest end (exclusive) of a match anchored at ``start``, or None.

    Depth-first, consuming predicates before spending slop and trying small
    wildcard fills first, so the returned span is the tightest one.  Slop
    may only be spent between predicates, never before the first or after
    the last.
    """
    n = len(tokens)

    def step(pi: int, ti: int, budget: int) -> int | None:
        if pi == len(preds):
            return ti
        if ti >= n:
            return None
        pred = preds[pi]
        if pred.kind == WILDCARD:
            for fill in range(1, pred.max_fill + 1):
                if ti + fill > n:
                    break
                end = step(pi + 1, ti + fill, budget)
                if end is not None:
                    return end
            return None
        if _predicate_matches(pred, tokens[ti]):
            end = step(pi + 1, ti + 1, budget)
            if end is not None:
                return end
        if pi > 0 and budget > 0:
            return step(pi, ti + 1, budget - 1)
        return None

    return step(0, start, slop)


class Matcher:
    """A compiled ruleset indexed by first predicate for fast scanning."""

    def __init__(self, rules: Sequence[MatchRule]):
        self.rules = list(rules)
        self._by_text: dict[str, list[tuple[MatchRule, int]]] = defaultdict(list)
        self._by_lemma: dict[str, list[tuple[MatchRule, int]]] = defaultdict(list)
        self._generic: list[tuple[MatchRule, int]] = []
        for rule in self.rules:
            for seq_index, seq in enumerate(rule.sequences):
                first = seq.predicates[0]
                if first.kind == TEXT:
                    self._by_text[first.value].append((rule, seq_index))
                elif first.kind == LEMMA:
                    self._by_lemma[first.value].append((rule, seq_index))
                else:
                    self._generic.append((rule, seq_index))

    def _candidates_at(self, token: AnnotatedToken) -> Iterator[tuple[MatchRule, int]]:
        yield from self._by_text.get(token.text.lower(), ())
        yield from self._by_lemma.get(token.lemma, ())
        yield from self._generic

    def find(self, sentence: AnnotatedSentence) -> list[IdiomMatch]:
        tokens = sentence.tokens
        candidates: list[IdiomMatch] = []
        for start in range(len(tokens)):
            for rule, seq_index in self._candidates_at(tokens[start]):
                seq = rule.sequences[seq_index]
                end = _match_at(seq.predicates, tokens, start, rule.slop)
                if end is not None:
                    candidates.append(
                        IdiomMatch(rule.idiom_key, start, end, seq_index, seq.reordered)
                    )
        return _resolve_overlaps(candidates, len(tokens))


def _resolve_overlaps(candidates: list[IdiomMatch], n_tokens: int) -> list[IdiomMatch]:
    ordered = sorted(
        candidates, key=lambda m: (-m.width, m.start, m.idiom_key, m.sequence_index)
    )
    taken = [False] * n_tokens
    chosen: list[IdiomMatch] = []
    for match in ordered:
        if any(taken[match.start : match.end]):
            continue
        for i in range(match.start, match.end):
            taken[i] = True
        chosen.append(match)
    return sorted(chosen, key=lambda m: m.start)


def find_matches(sentence: AnnotatedSentence, rules: Union[Sequence[MatchRule], Matcher]) -> list[IdiomMatch]:
    """All maximal non-overlapping matches, sorted by start token."""
    matcher = rules if isinstance(rules, Matcher) else Matcher(rules)
    return matcher.find(sentence)


def merge_idiom(sentence: AnnotatedSentence, match: IdiomMatch) -> IdiomOccurrence:
    """Replace the matched span with a single atomic idiom token."""
    if match.end > len(sentence):
        raise MergeError(f"span [{match.start}, {match.end}) exceeds sentence length {len(sentence)}")
    span = sentence.tokens[match.start : match.end]
    if any(tok.lemma == match.idiom_key for tok in span):
        raise MergeError(f"span already contains a merged {match.idiom_key!r} token")
    idiom_token = AnnotatedToken(text=match.idiom_key, lemma=match.idiom_key, pos=IDIOM_POS)
    merged = sentence.tokens[: match.start] + (idiom_token,) + sentence.tokens[match.end :]
    return IdiomOccurrence(
        idiom_key=match.idiom_key,
        tokens=AnnotatedSentence(tokens=merged, doc_id=sentence.doc_id, sent_index=sentence.sent_index),
        idiom_index=match.start,
    )


def merge_matches(sentence: AnnotatedSentence, matches: Sequence[IdiomMatch]) -> list[IdiomOccurrence]:
    """Merge every match into one sentence; one occurrence per match.

    All occurrences share the fully merged token sequence, so that other
    idioms in the same sentence appear as atomic tokens in each view.
    Overlapping matches are rejected.
    """
    if not matches:
        return []
    ordered = sorted(matches, key=lambda m: m.start)
    for left, right in zip(ordered, ordered[1:]):
        if right.start < left.end:
            raise MergeError(
                f"overlapping spans [{left.start}, {left.end}) and [{right.start}, {right.end})"
            )
    merged = sentence
    shift = 0
    positions: list[tuple[str, int]] = []
    for match in ordered:
        adjusted = IdiomMatch(
            idiom_key=match.idiom_key,
            start=match.start - shift,
            end=match.end - shift,
            sequence_index=match.sequence_index,
            reordered=match.reordered,
        )
        merged = merge_idiom(merged, adjusted).tokens
        positions.append((match.idiom_key, adjusted.start))
        shift += match.width - 1
    return [
        IdiomOccurrence(idiom_key=key, tokens=merged, idiom_index=index)
        for key, index in positions
    ]


def build_bows(occurrences: Iterable[IdiomOccurrence], window: int = DEFAULT_WINDOW) -> list[BagOfWords]:
    """Count verb/noun/adj/adv lemmas within ``window`` tokens of each idiom.

    Counts aggregate per idiom key over the whole stream; idiom tokens are
    tagged X and therefore never count as context.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    counts: dict[str, dict[str, Counter]] = defaultdict(
        lambda: {cat: Counter() for cat in CATEGORIES}
    )
    for occ in occurrences:
        counts[occ.idiom_key]  # an idiom seen only near function words still gets a row
        tokens = occ.tokens.tokens
        idx = occ.idiom_index
        context = tokens[max(0, idx - window) : idx] + tokens[idx + 1 : idx + 1 + window]
        for token in context:
            category = _CATEGORY_BY_POS.get(token.pos)
            if category is not None:
                counts[occ.idiom_key][category][token.lemma] += 1
    return [
        BagOfWords(
            idiom_key=key,
            verb=dict(sorted(counts[key]["verb"].items())),
            noun=dict(sorted(counts[key]["noun"].items())),
            adj=dict(sorted(counts[key]["adj"].items())),
            adv=dict(sorted(counts[key]["adv"].items())),
        )
        for key in sorted(counts)
    ]


def _strip_stopword_tokens(occ: IdiomOccurrence, stop: frozenset[str]) -> IdiomOccurrence:
    kept = tuple(
        tok
        for i, tok in enumerate(occ.tokens.tokens)
        if i == occ.idiom_index or tok.lemma not in stop
    )
    new_index = sum(
        1
        for i, tok in enumerate(occ.tokens.tokens[: occ.idiom_index])
        if tok.lemma not in stop
    )
    return IdiomOccurrence(
        idiom_key=occ.idiom_key,
        tokens=AnnotatedSentence(kept, occ.tokens.doc_id, occ.tokens.sent_index),
        idiom_index=new_index,
    )


def strip_stopwords(occurrences: Iterable[IdiomOccurrence], stop: frozenset[str]) -> list[IdiomOccurrence]:
    """Drop stopword tokens from occurrences (the idiom token always stays)."""
    return [_strip_stopword_tokens(occ, stop) for occ in occurrences]


def _format_list(items: Iterable[str]) -> str:
    return "[" + ", ".join(items) + "]"


def write_idiom2sent(occurrences: Iterable[IdiomOccurrence], out: TextIO) -> int:
    """Rows of ``idiom_key<TAB>[tok, ..., [IDIOM], ...]``, sorted by key."""
    rows = sorted(occurrences, key=lambda occ: occ.idiom_key)
    for occ in rows:
        texts = [
            IDIOM_PLACEHOLDER if i == occ.idiom_index else tok.text
            for i, tok in enumerate(occ.tokens.tokens)
        ]
        out.write(f"{occ.idiom_key}\t{_format_list(texts)}\n")
    return len(rows)


def write_idiom2lemma2pos(occurrences: Iterable[IdiomOccurrence], out: TextIO) -> int:
    """Rows of ``idiom_key<TAB>[[lemma, POS], ..., [[IDIOM], X], ...]``."""
    rows = sorted(occurrences, key=lambda occ: occ.idiom_key)
    for occ in rows:
        pairs = [
            _format_list([IDIOM_PLACEHOLDER if i == occ.idiom_index else tok.lemma, tok.pos])
            for i, tok in enumerate(occ.tokens.tokens)
        ]
        out.write(f"{occ.idiom_key}\t{_format_list(pairs)}\n")
    return len(rows)


def _format_counts(counts: dict[str, int]) -> str:
    return "{" + ", ".join(f"{lemma}: {count}" for lemma, count in sorted(counts.items())) + "}"


def _parse_counts(cell: str) -> dict[str, int]:
    body = cell.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"malformed count map {cell!r}")
    body = body[1:-1].strip()
    if not body:
        return {}
    counts = {}
    for item in body.split(", "):
        lemma, count = item.rsplit(": ", 1)
        counts[lemma] = int(count)
    return counts


def write_idiom2bows(bows: Iterable[BagOfWords], out: TextIO) -> int:
    """Rows of ``idiom_key<TAB>{verb}<TAB>{noun}<TAB>{adj}<TAB>{adv}``."""
    count = 0
    for bag in sorted(bows, key=lambda b: b.idiom_key):
        cells = [_format_counts(bag.category(cat)) for cat in CATEGORIES]
        out.write(bag.idiom_key + "\t" + "\t".join(cells) + "\n")
        count += 1
    return count


def read_idiom2bows(source: Union[str, Iterable[str]]) -> list[BagOfWords]:
    lines = _read_lines(source)
    bows = []
    for line_no, line in enumerate(lines, start=1):
        fields = line.rstrip("\n").split("\t")
        if len(fields) != 5:
            raise ValueError(f"line {line_no}: expected 5 fields, got {len(fields)}")
        key, verb, noun, adj, adv = fields
        bows.append(
            BagOfWords(
                idiom_key=key,
                verb=_parse_counts(verb),
                noun=_parse_counts(noun),
                adj=_parse_counts(adj),
                adv=_parse_counts(adv),
            )
        )
    return bows


def _parse_token_list(cell: str) -> list[str]:
    body = cell.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"malformed token list {cell!r}")
    inner = body[1:-1]
    return inner.split(", ") if inner else []


def _parse_pair_list(cell: str) -> list[tuple[str, str]]:
    body = cell.strip()
    if body == "[]":
        return []
    if not (body.startswith("[[") and body.endswith("]]")):
        raise ValueError(f"malformed pair list {cell!r}")
    pairs = []
    for item in body[2:-2].split("], ["):
        lemma, pos = item.rsplit(", ", 1)
        pairs.append((lemma, pos))
    return pairs


def _read_lines(source: Union[str, Iterable[str]]) -> Iterator[str]:
    if isinstance(source, str):
        with open(source, encoding="utf-8") as handle:
            yield from handle
    else:
        yield from source


def read_idiom2sent(source: Union[str, Iterable[str]]) -> Iterator[tuple[str, list[str]]]:
    """Yield (idiom_key, token texts) rows with [IDIOM] expanded to the key."""
    for line_no, line in enumerate(_read_lines(source), start=1):
        if not line.strip():
            continue
        key, _, cell = line.rstrip("\n").partition("\t")
        if not cell:
            raise ValueError(f"line {line_no}: expected 2 fields")
        tokens = [key if tok == IDIOM_PLACEHOLDER else tok for tok in _parse_token_list(cell)]
        yield key, tokens


def read_idiom2lemma2pos(source: Union[str, Iterable[str]]) -> Iterator[tuple[str, list[tuple[str, str]]]]:
    """Yield (idiom_key, [(lemma, pos), ...]) rows with [IDIOM] expanded."""
    for line_no, line in enumerate(_read_lines(source), start=1):
        if not line.strip():
            continue
        key, _, cell = line.rstrip("\n").partition("\t")
        if not cell:
            raise ValueError(f"line {line_no}: expected 2 fields")
        pairs = [
            (key if lemma == IDIOM_PLACEHOLDER else lemma, pos)
            for lemma, pos in _parse_pair_list(cell)
        ]
        yield key, pairs
