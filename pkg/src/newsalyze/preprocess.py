"""Sentence segmentation, tokenization, and candidate-mention detection.

Deterministic rule-based annotator over article bodies. All spans are
(start, end) character offsets into the article body, end exclusive,
counted in Unicode scalar values. An external annotator can replace this
module through the same wire contract as the remote sentiment scorer; the
rule-based path keeps the system self-contained.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import resources

_TERMINATORS = ".!?"
_QUOTE_CHARS = "\"'“”‘’«»"
_PUNCT_CHARS = set("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~") | set("…“”‘’«»–—")
_INITIALS_RE = re.compile(r"(?:[^\W\d_]\.)+")
_CONNECTORS = frozenset({"of", "the", "for"})


@dataclass(frozen=True)
class Sentence:
    article_id: str
    index: int
    span: tuple[int, int]


@dataclass(frozen=True)
class Token:
    index: int
    span: tuple[int, int]
    surface: str
    is_capitalized: bool
    is_sentence_initial: bool


@dataclass(frozen=True)
class Mention:
    mention_id: str
    article_id: str
    sentence_index: int
    span: tuple[int, int]
    surface: str
    head: str
    kind: str

    @classmethod
    def from_dict(cls, data: dict) -> Mention:
        return cls(
            mention_id=data["mention_id"],
            article_id=data["article_id"],
            sentence_index=data["sentence_index"],
            span=(data["span"][0], data["span"][1]),
            surface=data["surface"],
            head=data["head"],
            kind=data["kind"],
        )

    def to_dict(self) -> dict:
        return {
            "mention_id": self.mention_id,
            "article_id": self.article_id,
            "sentence_index": self.sentence_index,
            "span": list(self.span),
            "surface": self.surface,
            "head": self.head,
            "kind": self.kind,
        }


def _preceding_token(text: str, end: int, floor: int) -> str:
    """Word (letters and internal periods) immediately before position `end`."""
    start = end
    while start > floor and (text[start - 1].isalpha() or text[start - 1] == "."):
        start -= 1
    return text[start:end]


def _segment_paragraph(body: str, pstart: int, pend: int, abbrevs: frozenset[str]) -> list[tuple[int, int]]:
    spans: list[tuple[int, int]] = []
    seg_start = pstart
    i = pstart
    while i < pend:
        ch = body[i]
        if ch in _TERMINATORS:
            j = i + 1
            while j < pend and body[j] in " \t":
                j += 1
            follows_break = (
                j > i + 1
                and j < pend
                and (body[j].isupper() or body[j].isdigit() or body[j] in _QUOTE_CHARS)
            )
            if follows_break:
                if ch == "." and _preceding_token(body, i, pstart).lower() in abbrevs:
                    i += 1
                    continue
                spans.append((seg_start, i + 1))
                seg_start = j
                i = j
                continue
        i += 1
    if seg_start < pend:
        spans.append((seg_start, pend))
    return spans


def segment(body: str, article_id: str = "") -> list[Sentence]:
    """Split a body into sentences.

    Terminators '.', '!', '?' end a sentence when followed by whitespace and
    an uppercase letter, digit, or quote, unless the word before a period is
    a known abbreviation. Newline-separated paragraphs always break. A body
    with no terminator becomes a single sentence.
    """
    abbrevs = resources.abbreviations()
    sentences: list[Sentence] = []
    offset = 0
    for paragraph in body.split("\n"):
        pstart, pend = offset, offset + len(paragraph)
        offset = pend + 1
        for raw_start, raw_end in _segment_paragraph(body, pstart, pend, abbrevs):
            start, end = raw_start, raw_end
            while start < end and body[start].isspace():
                start += 1
            while end > start and body[end - 1].isspace():
                end -= 1
            if start < end:
                sentences.append(Sentence(article_id=article_id, index=len(sentences), span=(start, end)))
    return sentences


def _keeps_trailing_period(chunk: str, abbrevs: frozenset[str]) -> bool:
    # "U.S." and single initials like "J." stay one token.
    core = chunk[:-1]
    return core.lower() in abbrevs or _INITIALS_RE.fullmatch(chunk) is not None


def tokenize(text: str, offset: int = 0) -> list[Token]:
    """Split sentence text into tokens with article-level spans.

    Whitespace-separated chunks shed leading and trailing punctuation into
    separate tokens; internal apostrophes and hyphens stay, as do periods
    inside known abbreviations and initials.
    """
    abbrevs = resources.abbreviations()
    raw: list[tuple[int, int]] = []  # (start, end) relative to text

    for match in re.finditer(r"\S+", text):
        cstart, cend = match.start(), match.end()
        start, end = cstart, cend
        leading: list[tuple[int, int]] = []
        while start < end and text[start] in _PUNCT_CHARS:
            leading.append((start, start + 1))
            start += 1
        trailing: list[tuple[int, int]] = []
        while end > start and text[end - 1] in _PUNCT_CHARS:
            if text[end - 1] == "." and _keeps_trailing_period(text[start:end], abbrevs):
                break
            trailing.append((end - 1, end))
            end -= 1
        raw.extend(leading)
        if start < end:
            raw.append((start, end))
        raw.extend(reversed(trailing))

    tokens: list[Token] = []
    for index, (start, end) in enumerate(raw):
        surface = text[start:end]
        tokens.append(
            Token(
                index=index,
                span=(offset + start, offset + end),
                surface=surface,
                is_capitalized=surface[:1].isupper(),
                is_sentence_initial=index == 0,
            )
        )
    return tokens


def _wordlike(token: Token) -> bool:
    return any(ch.isalpha() for ch in token.surface)


def _head_surface(run: list[Token]) -> str:
    for token in reversed(run):
        if token.surface.lower() not in _CONNECTORS:
            return token.surface
    return run[-1].surface


def detect_mentions(
    tokens: list[Token],
    gazetteer: dict[str, str],
    recurring: frozenset[str] = frozenset(),
    *,
    body: str,
    article_id: str,
    sentence_index: int,
) -> list[Mention]:
    """Find candidate concept mentions in one sentence's tokens.

    Maximal runs of capitalized tokens form mentions; a lowercase "of",
    "the", or "for" may sit inside a run when flanked by capitalized tokens
    on both sides. A run starting at the first token of the sentence only
    qualifies when that token's surface is in the gazetteer or recurs
    capitalized mid-sentence elsewhere in the topic (`recurring`).
    """
    mentions: list[Mention] = []
    i = 0
    n = len(tokens)
    while i < n:
        token = tokens[i]
        if not (token.is_capitalized and _wordlike(token)):
            i += 1
            continue
        if token.is_sentence_initial and token.surface not in gazetteer and token.surface not in recurring:
            i += 1
            continue
        run = [token]
        j = i + 1
        while j < n:
            nxt = tokens[j]
            if nxt.is_capitalized and _wordlike(nxt):
                run.append(nxt)
                j += 1
            elif (
                nxt.surface.lower() in _CONNECTORS
                and j + 1 < n
                and tokens[j + 1].is_capitalized
                and _wordlike(tokens[j + 1])
            ):
                run.append(nxt)
                run.append(tokens[j + 1])
                j += 2
            else:
                break
        start, end = run[0].span[0], run[-1].span[1]
        surface = body[start:end]
        head = _head_surface(run)
        kind = gazetteer.get(surface) or gazetteer.get(head) or "other"
        mentions.append(
            Mention(
                mention_id=f"{article_id}:{start}-{end}",
                article_id=article_id,
                sentence_index=sentence_index,
                span=(start, end),
                surface=surface,
                head=head,
                kind=kind,
            )
        )
        i = j
    return mentions


@dataclass(frozen=True)
class ArticleAnnotation:
    article_id: str
    sentences: list[Sentence]
    sentence_tokens: list[list[Token]]
    mentions: list[Mention]


def annotate_article(
    article_id: str,
    body: str,
    gazetteer: dict[str, str],
    recurring: frozenset[str] = frozenset(),
) -> ArticleAnnotation:
    sentences = segment(body, article_id)
    sentence_tokens: list[list[Token]] = []
    mentions: list[Mention] = []
    for sentence in sentences:
        start, end = sentence.span
        tokens = tokenize(body[start:end], offset=start)
        sentence_tokens.append(tokens)
        mentions.extend(
            detect_mentions(
                tokens,
                gazetteer,
                recurring,
                body=body,
                article_id=article_id,
                sentence_index=sentence.index,
            )
        )
    return ArticleAnnotation(
        article_id=article_id,
        sentences=sentences,
        sentence_tokens=sentence_tokens,
        mentions=mentions,
    )


def recurring_surfaces(bodies: dict[str, str]) -> frozenset[str]:
    """Capitalized token surfaces seen mid-sentence anywhere in the topic."""
    seen: set[str] = set()
    for article_id, body in bodies.items():
        for sentence in segment(body, article_id):
            start, end = sentence.span
            for token in tokenize(body[start:end], offset=start):
                if not token.is_sentence_initial and token.is_capitalized and _wordlike(token):
                    seen.add(token.surface)
    return frozenset(seen)


def annotate_topic(bodies: dict[str, str], gazetteer: dict[str, str]) -> dict[str, ArticleAnnotation]:
    """Two-pass topic annotation: collect recurrence evidence, then detect mentions."""
    recurring = recurring_surfaces(bodies)
    return {
        article_id: annotate_article(article_id, body, gazetteer, recurring)
        for article_id, body in sorted(bodies.items())
    }
