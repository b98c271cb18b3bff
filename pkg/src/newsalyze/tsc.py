"""Target-dependent sentiment classification per mention.

A scorer abstraction with a deterministic lexicon-based default and a wire
contract for an external neural scorer. The lexicon scorer weights each
opinion-word hit by its token distance d to the nearest mention token,
w(d) = 1/(1+d), flips the sign when a negation token occurs within
`negation_window` tokens before the hit, and clamps the sum into [-1, 1].
Scores depend only on the mention's own sentence.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import requests

from .errors import DataError
from .preprocess import ArticleAnnotation, Mention, Token

logger = logging.getLogger(__name__)

NEGATIONS = frozenset({"not", "no", "never", "without"})
_NEGATION_SUFFIXES = ("n't", "n’t")

LABELS = ("negative", "neutral", "positive")
DEFAULT_REMOTE_TIMEOUT = 10.0


def label_for_score(score: float, neutral_band: float) -> str:
    if score < -neutral_band:
        return "negative"
    if score > neutral_band:
        return "positive"
    return "neutral"


def is_negation(surface: str) -> bool:
    lowered = surface.lower()
    return lowered in NEGATIONS or lowered.endswith(_NEGATION_SUFFIXES)


@dataclass(frozen=True)
class PolarityResult:
    mention_id: str
    score: float
    label: str
    confidence: float
    scorer: str

    def __post_init__(self) -> None:
        if not -1.0 <= self.score <= 1.0:
            raise DataError(f"polarity score out of range: {self.score}")
        if not 0.0 <= self.confidence <= 1.0:
            raise DataError(f"confidence out of range: {self.confidence}")
        if self.label not in LABELS:
            raise DataError(f"unknown polarity label: {self.label!r}")

    @classmethod
    def from_dict(cls, data: dict) -> PolarityResult:
        return cls(
            mention_id=data["mention_id"],
            score=data["score"],
            label=data["label"],
            confidence=data["confidence"],
            scorer=data["scorer"],
        )

    def to_dict(self) -> dict:
        return {
            "mention_id": self.mention_id,
            "score": self.score,
            "label": self.label,
            "confidence": self.confidence,
            "scorer": self.scorer,
        }


def _mention_token_indices(tokens: list[Token], mention: Mention) -> list[int]:
    start, end = mention.span
    indices = [t.index for t in tokens if t.span[0] >= start and t.span[1] <= end]
    if not indices:
        raise DataError(
            f"mention {mention.mention_id} does not lie in the given sentence tokens"
        )
    return indices


def score_lexicon(
    sentence_tokens: list[Token],
    mention: Mention,
    lexicon: dict[str, float],
    *,
    negation_window: int = 3,
    neutral_band: float = 0.1,
    include_self_tokens: bool = False,
    scorer_id: str = "lexicon",
) -> PolarityResult:
    """Deterministic lexicon scorer for one mention within its sentence."""
    mention_indices = _mention_token_indices(sentence_tokens, mention)
    mention_set = set(mention_indices)

    raw = 0.0
    hits = 0
    for token in sentence_tokens:
        if token.index in mention_set and not include_self_tokens:
            continue
        polarity = lexicon.get(token.surface.lower())
        if polarity is None:
            continue
        distance = min(abs(token.index - mi) for mi in mention_indices)
        contribution = polarity / (1 + distance)
        window_start = max(0, token.index - negation_window)
        if any(
            is_negation(sentence_tokens[j].surface) for j in range(window_start, token.index)
        ):
            contribution = -contribution
        raw += contribution
        hits += 1

    score = max(-1.0, min(1.0, raw))
    return PolarityResult(
        mention_id=mention.mention_id,
        score=score,
        label=label_for_score(score, neutral_band),
        confidence=min(1.0, hits / 3),
        scorer=scorer_id if not include_self_tokens else f"{scorer_id}+self",
    )


class RemoteScorerError(Exception):
    """Remote scorer unreachable, timed out, or returned an invalid payload."""


def call_remote(
    text: str,
    target_start: int,
    target_end: int,
    endpoint: str,
    *,
    timeout: float = DEFAULT_REMOTE_TIMEOUT,
) -> dict:
    """POST one scoring request; returns the decoded JSON body or raises."""
    payload = {"text": text, "target_start": target_start, "target_end": target_end}
    try:
        response = requests.post(endpoint, json=payload, timeout=timeout)
    except requests.RequestException as exc:
        raise RemoteScorerError(f"request failed: {exc}") from exc
    if response.status_code != 200:
        raise RemoteScorerError(f"HTTP status {response.status_code}")
    try:
        body = response.json()
    except (ValueError, json.JSONDecodeError) as exc:
        raise RemoteScorerError(f"malformed JSON response: {exc}") from exc
    if not isinstance(body, dict):
        raise RemoteScorerError("response is not a JSON object")
    return body


def _validate_remote(body: dict, mention_id: str, neutral_band: float) -> PolarityResult:
    try:
        score = float(body["score"])
        label = body["label"]
        confidence = float(body["confidence"])
    except (KeyError, TypeError, ValueError) as exc:
        raise RemoteScorerError(f"incomplete response fields: {exc}") from exc
    if not -1.0 <= score <= 1.0:
        raise RemoteScorerError(f"score out of range: {score}")
    if not 0.0 <= confidence <= 1.0:
        raise RemoteScorerError(f"confidence out of range: {confidence}")
    if label != label_for_score(score, neutral_band):
        raise RemoteScorerError(
            f"label {label!r} inconsistent with score {score} at neutral_band {neutral_band}"
        )
    return PolarityResult(
        mention_id=mention_id,
        score=score,
        label=label,
        confidence=confidence,
        scorer="remote",
    )


def score_remote(
    sentence_tokens: list[Token],
    mention: Mention,
    sentence_text: str,
    sentence_start: int,
    endpoint: str,
    lexicon: dict[str, float],
    *,
    negation_window: int = 3,
    neutral_band: float = 0.1,
    include_self_tokens: bool = False,
    timeout: float = DEFAULT_REMOTE_TIMEOUT,
) -> PolarityResult:
    """Score via the remote wire contract, falling back to the lexicon scorer.

    Wire contract: POST {"text", "target_start", "target_end"} (offsets in
    Unicode scalar values, relative to `text`), expecting {"score", "label",
    "confidence"} consistent with the engine's polarity invariants. Any
    failure or invalid response falls back per-mention to score_lexicon and
    records the fallback in the result's scorer field.
    """
    target_start = mention.span[0] - sentence_start
    target_end = mention.span[1] - sentence_start
    try:
        body = call_remote(sentence_text, target_start, target_end, endpoint, timeout=timeout)
        return _validate_remote(body, mention.mention_id, neutral_band)
    except RemoteScorerError as exc:
        logger.warning("remote scorer failed for %s: %s", mention.mention_id, exc)
        return score_lexicon(
            sentence_tokens,
            mention,
            lexicon,
            negation_window=negation_window,
            neutral_band=neutral_band,
            include_self_tokens=include_self_tokens,
            scorer_id="lexicon-fallback",
        )


def score_topic(
    annotations: dict[str, ArticleAnnotation],
    bodies: dict[str, str],
    lexicon: dict[str, float],
    *,
    scorer: str = "lexicon",
    endpoint: str | None = None,
    negation_window: int = 3,
    neutral_band: float = 0.1,
    include_self_tokens: bool = False,
    timeout: float = DEFAULT_REMOTE_TIMEOUT,
    max_in_flight: int = 4,
) -> dict[str, PolarityResult]:
    """Score every mention of every article exactly once.

    Deterministic for the lexicon scorer; remote scoring issues bounded
    concurrent requests and is order-independent.
    """
    if scorer not in ("lexicon", "remote"):
        raise DataError(f"unknown scorer {scorer!r}")
    if scorer == "remote" and not endpoint:
        raise DataError("remote scorer requires an endpoint")

    jobs: list[tuple[ArticleAnnotation, Mention]] = []
    for article_id in sorted(annotations):
        annotation = annotations[article_id]
        for mention in annotation.mentions:
            jobs.append((annotation, mention))

    def run(job: tuple[ArticleAnnotation, Mention]) -> PolarityResult:
        annotation, mention = job
        tokens = annotation.sentence_tokens[mention.sentence_index]
        if scorer == "lexicon":
            return score_lexicon(
                tokens,
                mention,
                lexicon,
                negation_window=negation_window,
                neutral_band=neutral_band,
                include_self_tokens=include_self_tokens,
            )
        sentence = annotation.sentences[mention.sentence_index]
        body = bodies[mention.article_id]
        return score_remote(
            tokens,
            mention,
            body[sentence.span[0] : sentence.span[1]],
            sentence.span[0],
            endpoint or "",
            lexicon,
            negation_window=negation_window,
            neutral_band=neutral_band,
            include_self_tokens=include_self_tokens,
            timeout=timeout,
        )

    results: dict[str, PolarityResult] = {}
    if scorer == "remote" and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
            for result in pool.map(run, jobs):
                results[result.mention_id] = result
    else:
        for job in jobs:
            result = run(job)
            results[result.mention_id] = result
    return results
