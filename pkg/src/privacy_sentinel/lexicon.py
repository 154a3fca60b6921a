"""Deterministic attribute tagging for post text.

A lexicon maps case-insensitive token/phrase patterns to surveillance
attributes and carries two polarity word lists for sentiment. Patterns are
matched independently and word-boundary anchored, so a phrase hit never
suppresses a shorter hit elsewhere in the text ("day at the office" and
"office" both fire). Explicit post annotations bypass the lexicon entirely.

Lexicon file format (UTF-8, one entry per line, ``#`` comments):

    pattern<TAB>Dimension/Attribute
    word<TAB>SENTIMENT/+        positive polarity word
    word<TAB>SENTIMENT/-        negative polarity word

Patterns are literal phrases; ``*`` matches any run of word characters and
``?`` a single one (``complain*`` hits "complaints").
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import ConflictError, ParseError
from .model import Post, SurveillanceAttribute

_SENTIMENT_MARKER = "sentiment"

_DEFAULT_LEXICON_RESOURCE = "default_lexicon.tsv"


def _compile_pattern(pattern: str) -> re.Pattern:
    """Compile a lexicon pattern to an anchored, case-insensitive regex.

    Word-character boundaries are only asserted on sides that begin/end with
    a word character, so patterns like ``#fired`` still anchor correctly.
    """
    parts = []
    for chunk in pattern.split():
        piece = ""
        for ch in chunk:
            if ch == "*":
                piece += r"\w*"
            elif ch == "?":
                piece += r"\w"
            else:
                piece += re.escape(ch)
        parts.append(piece)
    body = r"\s+".join(parts)
    head = r"(?<!\w)" if pattern and (pattern[0].isalnum() or pattern[0] == "_") else ""
    tail = r"(?!\w)" if pattern and (pattern[-1].isalnum() or pattern[-1] in "_*?") else ""
    return re.compile(head + body + tail, re.IGNORECASE)


@dataclass(frozen=True)
class Lexicon:
    """Immutable pattern table; safe to share across threads."""

    entries: dict[str, SurveillanceAttribute] = field(default_factory=dict)
    positive_words: frozenset[str] = frozenset()
    negative_words: frozenset[str] = frozenset()

    def __post_init__(self):
        overlap = self.positive_words & self.negative_words
        if overlap:
            raise ConflictError(
                f"words listed with both polarities: {sorted(overlap)}"
            )
        compiled = [
            (_compile_pattern(pattern), sa) for pattern, sa in self.entries.items()
        ]
        object.__setattr__(self, "_compiled", tuple(compiled))
        object.__setattr__(
            self,
            "_positive_rx",
            tuple(_compile_pattern(w) for w in sorted(self.positive_words)),
        )
        object.__setattr__(
            self,
            "_negative_rx",
            tuple(_compile_pattern(w) for w in sorted(self.negative_words)),
        )

    def __len__(self) -> int:
        return len(self.entries)

    def attribute_hits(self, text: str) -> frozenset[SurveillanceAttribute]:
        return frozenset(sa for rx, sa in self._compiled if rx.search(text))

    def sentiment_hits(self, text: str) -> tuple[int, int]:
        """(positive, negative) occurrence counts over the polarity lists."""
        pos = sum(len(rx.findall(text)) for rx in self._positive_rx)
        neg = sum(len(rx.findall(text)) for rx in self._negative_rx)
        return pos, neg


def empty_lexicon() -> Lexicon:
    return Lexicon()


def _normalize_pattern(pattern: str) -> str:
    return " ".join(pattern.split()).lower()


def load_lexicon(source) -> Lexicon:
    """Parse a lexicon from bytes, text, a file object or a path.

    Raises ParseError with the line number for malformed lines and
    ConflictError for duplicate patterns.
    """
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    elif isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        if "\n" in source or "\t" in source:
            text = source
        else:
            try:
                is_file = Path(source).is_file()
            except OSError:
                is_file = False
            text = Path(source).read_text(encoding="utf-8") if is_file else source
    elif isinstance(source, io.IOBase) or hasattr(source, "read"):
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    else:
        raise ParseError(f"unsupported lexicon source: {type(source).__name__}")

    entries: dict[str, SurveillanceAttribute] = {}
    positive: set[str] = set()
    negative: set[str] = set()

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" not in line:
            raise ParseError("expected 'pattern<TAB>Dimension/Attribute'", line=line_no)
        pattern_raw, target = line.split("\t", 1)
        pattern = _normalize_pattern(pattern_raw)
        target = target.strip()
        if not pattern:
            raise ParseError("empty pattern", line=line_no)
        if "/" not in target:
            raise ParseError(f"malformed target {target!r}", line=line_no)
        dimension, _, attr = target.partition("/")
        dimension = dimension.strip()
        attr = attr.strip()

        if dimension.lower() == _SENTIMENT_MARKER and attr in ("+", "-"):
            if pattern in positive or pattern in negative:
                raise ConflictError(f"duplicate sentiment word {pattern!r} (line {line_no})")
            (positive if attr == "+" else negative).add(pattern)
            continue

        try:
            sa = SurveillanceAttribute.from_json({"dimension": dimension, "attribute": attr})
        except Exception:
            raise ParseError(f"unknown attribute {target!r}", line=line_no) from None
        if pattern in entries:
            raise ConflictError(f"duplicate pattern {pattern!r} (line {line_no})")
        entries[pattern] = sa

    if positive & negative:
        raise ConflictError(
            f"words listed with both polarities: {sorted(positive & negative)}"
        )
    return Lexicon(
        entries=entries,
        positive_words=frozenset(positive),
        negative_words=frozenset(negative),
    )


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    """The lexicon bundled with the package. Immutable, so cached."""
    data = resources.files("privacy_sentinel").joinpath("data", _DEFAULT_LEXICON_RESOURCE)
    return load_lexicon(data.read_bytes())


def extract_sas(post: Post, lexicon: Lexicon | None) -> frozenset[SurveillanceAttribute]:
    """Attributes disclosed by a post.

    Explicit annotations are returned verbatim. Otherwise the result is the
    union of lexicon hits plus at most one sentiment attribute: Negative when
    negative-word hits outnumber positive ones, Positive for the reverse, and
    none on a tie.
    """
    if post.annotations is not None:
        return frozenset(post.annotations)
    if lexicon is None:
        return frozenset()
    hits = set(lexicon.attribute_hits(post.text))
    pos, neg = lexicon.sentiment_hits(post.text)
    if neg > pos:
        hits.add(SurveillanceAttribute.NEGATIVE)
    elif pos > neg:
        hits.add(SurveillanceAttribute.POSITIVE)
    return frozenset(hits)
