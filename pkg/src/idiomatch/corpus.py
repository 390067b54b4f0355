"""Annotated-corpus contract and a small self-contained fallback annotator.

Every pipeline stage consumes sentences of (text, lemma, coarse pos) triples.
Corpora are exchanged as UTF-8 TSV files: one token per line
(``text<TAB>lemma<TAB>pos``), a blank line between sentences, and optional
``# doc: <id>`` header lines.  The fallback annotator is deliberately small
(an exception table plus suffix rules, a word -> tag lookup); it exists so
queries and demo corpora do not require an external NLP pipeline.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence, TextIO, Union

from idiomatch import _resources

COARSE_TAGS = frozenset(
    {"NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "INTJ", "NUM", "PUNCT", "X"}
)

_CLITICS = ("'s", "'re", "'ve", "'ll", "'d", "'m")
_NUM_RE = re.compile(r"^\d+(?:[.,:]\d+)*$")
_DOC_HEADER_RE = re.compile(r"^#\s*doc:\s*(?P<id>.*)$")


class CorpusFormatError(ValueError):
    """Raised when an annotated corpus file violates the line format."""


@dataclass(frozen=True)
class AnnotatedToken:
    """A single token with its lemma and coarse part-of-speech tag."""

    text: str
    lemma: str
    pos: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("token text must be non-empty")
        if not self.lemma or self.lemma != self.lemma.lower():
            raise ValueError(f"lemma must be non-empty lowercase, got {self.lemma!r}")
        if self.pos not in COARSE_TAGS:
            raise ValueError(f"unknown coarse tag {self.pos!r}")


@dataclass(frozen=True)
class AnnotatedSentence:
    """An ordered, non-empty run of annotated tokens.

    ``sent_index`` is positional within its document, so that
    (doc_id, sent_index) identifies the sentence inside a corpus.
    """

    tokens: tuple[AnnotatedToken, ...]
    doc_id: str = ""
    sent_index: int = 0

    def __post_init__(self) -> None:
        if not self.tokens:
            raise ValueError("a sentence must contain at least one token")
        if self.sent_index < 0:
            raise ValueError("sent_index must be >= 0")

    def __len__(self) -> int:
        return len(self.tokens)

    def texts(self) -> list[str]:
        return [t.text for t in self.tokens]

    def lemmas(self) -> list[str]:
        return [t.lemma for t in self.tokens]


def _is_punct(token: str) -> bool:
    return not any(ch.isalnum() for ch in token)


def _split_clitic(part: str) -> list[str]:
    low = part.lower()
    if low.endswith("n't") and len(part) > 3:
        return [part[:-3], part[-3:]]
    for suffix in _CLITICS:
        if low.endswith(suffix) and len(part) > len(suffix):
            cut = len(part) - len(suffix)
            return [part[:cut], part[cut:]]
    return [part]


def _split_chunk(chunk: str) -> list[str]:
    lead: list[str] = []
    trail: list[str] = []
    core = chunk
    while core and not core[0].isalnum() and core[0] not in "'-":
        lead.append(core[0])
        core = core[1:]
    while core and not core[-1].isalnum() and core[-1] not in "'":
        trail.insert(0, core[-1])
        core = core[:-1]
    # a surrounding apostrophe is quotation, a trailing one after a word is
    # possessive punctuation; clitics are handled after the hyphen split
    if core.startswith("'") and len(core) > 1 and core.lower() not in _CLITICS:
        lead.append("'")
        core = core[1:]
    if core.endswith("'") and len(core) > 1 and not any(core.lower().endswith(c) for c in _CLITICS):
        trail.insert(0, "'")
        core = core[:-1]
    if not core:
        return lead + trail
    middle: list[str] = []
    parts = core.split("-")
    for i, part in enumerate(parts):
        if i > 0:
            middle.append("-")
        if part:
            middle.extend(_split_clitic(part))
    return lead + middle + trail


def tokenize(text: str) -> list[str]:
    """Whitespace/punctuation tokenization with clitic and hyphen splitting.

    Clitics become their own tokens ("she's" -> ["she", "'s"]) and hyphens
    separate their compound parts ("balls-out" -> ["balls", "-", "out"]).
    """
    normalized = text.replace("’", "'").replace("‘", "'")
    normalized = normalized.replace("“", '"').replace("”", '"')
    normalized = normalized.replace("–", "-").replace("—", "-")
    out: list[str] = []
    for chunk in normalized.split():
        out.extend(tok for tok in _split_chunk(chunk) if tok)
    return out


def lemmatize(token: str) -> str:
    """Exception-table lookup, then suffix-rule stemming, else the lowercase token."""
    word = token.lower()
    exceptions = _resources.lemma_exceptions()
    if word in exceptions:
        return exceptions[word]
    return _suffix_rules(word)


_UNDOUBLE = frozenset({"bb", "dd", "gg", "mm", "nn", "pp", "rr", "tt"})


def _repair_doubled(stem: str) -> str:
    if len(stem) >= 3 and stem[-2:] in _UNDOUBLE:
        return stem[:-1]
    return stem


def _suffix_rules(word: str) -> str:
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith(("ches", "shes")) and len(word) > 4:
        return word[:-2]
    if word.endswith("es") and len(word) > 4 and word[-3] in "xzo":
        return word[:-2]
    if word.endswith("s") and len(word) > 3 and not word.endswith(("ss", "us", "is", "'s")):
        return word[:-1]
    if word.endswith("ied") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("ing") and len(word) > 5:
        return _repair_doubled(word[:-3])
    if word.endswith("ed") and len(word) > 4:
        return _repair_doubled(word[:-2])
    return word


def tag(token: str) -> str:
    """Coarse tag for a single token: PUNCT/NUM by shape, else lexicon, else X."""
    if _is_punct(token):
        return "PUNCT"
    if _NUM_RE.match(token):
        return "NUM"
    return _resources.pos_lexicon().get(token.lower(), "X")


def fallback_annotate(raw: str, doc_id: str = "", sent_index: int = 0) -> AnnotatedSentence:
    """Annotate a raw string with the bundled tokenizer, lemmatizer and tagger.

    Deterministic: the same input always yields the same sentence.  Text
    that tokenizes to nothing violates the AnnotatedSentence invariant and
    raises; callers that may see empty text should use annotate_tokens.
    """
    tokens = annotate_tokens(raw)
    return AnnotatedSentence(tokens=tuple(tokens), doc_id=doc_id, sent_index=sent_index)


def annotate_tokens(raw: str) -> list[AnnotatedToken]:
    """Token-level fallback annotation; empty input gives an empty list."""
    return [
        AnnotatedToken(text=tok, lemma=lemmatize(tok), pos=tag(tok))
        for tok in tokenize(raw)
    ]


Source = Union[str, Path, Iterable[str]]


def _iter_lines(source: Source) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            yield from handle
    else:
        yield from source


@dataclass
class AnnotatedCorpusReader:
    """Streams AnnotatedSentence blocks out of a TSV corpus.

    Unknown fine-grained tags are mapped through the bundled tag table when
    possible and fall back to X, counted in ``unknown_tag_count``.
    """

    source: Source
    unknown_tag_count: int = 0
    _doc_id: str = field(default="", repr=False)
    _sent_index: int = field(default=0, repr=False)

    def _coarse(self, raw_tag: str) -> str:
        if raw_tag in COARSE_TAGS:
            return raw_tag
        mapped = _resources.tag_map().get(raw_tag)
        if mapped is not None:
            return mapped
        self.unknown_tag_count += 1
        return "X"

    def __iter__(self) -> Iterator[AnnotatedSentence]:
        pending: list[AnnotatedToken] = []
        for line_no, raw in enumerate(_iter_lines(self.source), start=1):
            line = raw.rstrip("\n")
            header = _DOC_HEADER_RE.match(line)
            if header is not None:
                if pending:
                    yield self._flush(pending)
                    pending = []
                self._doc_id = header.group("id").strip()
                self._sent_index = 0
                continue
            if not line.strip():
                if pending:
                    yield self._flush(pending)
                    pending = []
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise CorpusFormatError(
                    f"line {line_no}: expected 3 tab-separated fields, got {len(fields)}"
                )
            text, lemma, raw_tag = fields
            pending.append(AnnotatedToken(text=text, lemma=lemma, pos=self._coarse(raw_tag)))
        if pending:
            yield self._flush(pending)

    def _flush(self, tokens: list[AnnotatedToken]) -> AnnotatedSentence:
        sentence = AnnotatedSentence(
            tokens=tuple(tokens), doc_id=self._doc_id, sent_index=self._sent_index
        )
        self._sent_index += 1
        return sentence


def read_annotated(source: Source) -> Iterator[AnnotatedSentence]:
    """Yield sentences from an annotated TSV stream (see module docstring)."""
    return iter(AnnotatedCorpusReader(source))


def write_annotated(sentences: Iterable[AnnotatedSentence], out: TextIO) -> int:
    """Write sentences in the TSV corpus format; returns the sentence count.

    Emits a ``# doc:`` header whenever the document id changes, so that
    reading the output back reproduces the input stream.
    """
    count = 0
    current_doc: str | None = None
    for sentence in sentences:
        if sentence.doc_id != current_doc:
            out.write(f"# doc: {sentence.doc_id}\n")
            current_doc = sentence.doc_id
        for token in sentence.tokens:
            out.write(f"{token.text}\t{token.lemma}\t{token.pos}\n")
        out.write("\n")
        count += 1
    return count
