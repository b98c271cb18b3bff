"""Cross-document target concept analysis.

Merges mentions from all of a topic's articles into concepts via a
deterministic multi-pass agglomeration over singleton clusters, then ranks
concepts by prominence. Passes, in fixed order:

    P1  exact normalized-surface match
    P2  head match (head of one equals the other's full surface, or equal
        heads outside the ambiguous-head stoplist)
    P3  abbreviation (initialism of a multi-word surface equals the other
        surface with periods removed, e.g. "U.S." / "United States")
    P4  fuzzy (normalized edit similarity >= merge_threshold)

Within a pass, candidate pairs are processed in lexicographic order of
(smaller canonical label, larger canonical label) and merging is transitive.
Mention attributes never change during merging, so the output partition is
permutation-invariant. Contrarial merging of abstractly related surfaces is
deliberately not attempted; pass P5 is reserved for a plug-in
context-similarity merger.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import resources
from .preprocess import Mention

_ARTICLES = frozenset({"a", "an", "the"})
_POSSESSIVE_SUFFIXES = ("'s", "’s")


def normalize(surface: str) -> str:
    """Normal form used by the merge passes.

    Lowercase, leading honorifics/titles and articles stripped, whitespace
    collapsed, trailing possessive removed. Never empties a surface: if
    stripping would consume every word, the pre-strip form is kept.
    """
    words = surface.lower().split()
    for suffix in _POSSESSIVE_SUFFIXES:
        if words and words[-1].endswith(suffix) and len(words[-1]) > len(suffix):
            words[-1] = words[-1][: -len(suffix)]
            break
    titles = resources.honorifics()
    stripped = list(words)
    # a lone title ("President") keeps its own surface, hence len > 1 guards
    while len(stripped) > 1 and stripped[0] in titles:
        stripped = stripped[1:]
    while len(stripped) > 1 and stripped[0] in _ARTICLES:
        stripped = stripped[1:]
    return " ".join(stripped if stripped else words)


def edit_similarity(a: str, b: str) -> float:
    """1 - levenshtein(a, b) / max(|a|, |b|); 1.0 for two empty strings."""
    if a == b:
        return 1.0
    if not a or not b:
        return 0.0
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return 1.0 - previous[len(b)] / max(len(a), len(b))


def _initialism_match(phrase: str, abbr: str) -> bool:
    words = phrase.split()
    if len(words) < 2 or " " in abbr:
        return False
    letters = "".join(word[0] for word in words).upper()
    target = abbr.replace(".", "").upper()
    return len(target) >= 2 and letters == target


@dataclass(frozen=True)
class Concept:
    concept_id: str
    canonical_label: str
    members: tuple[str, ...]
    frequency: int
    per_article_frequency: dict[str, int]

    @classmethod
    def from_dict(cls, data: dict) -> Concept:
        return cls(
            concept_id=data["concept_id"],
            canonical_label=data["canonical_label"],
            members=tuple(data["members"]),
            frequency=data["frequency"],
            per_article_frequency=dict(data["per_article_frequency"]),
        )

    def to_dict(self) -> dict:
        return {
            "concept_id": self.concept_id,
            "canonical_label": self.canonical_label,
            "members": list(self.members),
            "frequency": self.frequency,
            "per_article_frequency": dict(sorted(self.per_article_frequency.items())),
        }


class _Cluster:
    __slots__ = ("mentions", "attrs")

    def __init__(self, mention: Mention, norm_surface: str, norm_head: str) -> None:
        self.mentions: list[Mention] = [mention]
        # distinct (normalized surface, normalized head) pairs of members
        self.attrs: set[tuple[str, str]] = {(norm_surface, norm_head)}

    def absorb(self, other: _Cluster) -> None:
        self.mentions.extend(other.mentions)
        self.attrs |= other.attrs

    def canonical_label(self) -> str:
        counts = Counter(m.surface for m in self.mentions)
        best = sorted(counts.items(), key=lambda kv: (-kv[1], -len(kv[0]), kv[0]))
        return best[0][0]


def _pass_condition(pass_id: int, a: _Cluster, b: _Cluster, threshold: float, stoplist: frozenset[str]) -> bool:
    if pass_id == 1:
        return any(sa == sb for sa, _ in a.attrs for sb, _ in b.attrs)
    if pass_id == 2:
        for sa, ha in a.attrs:
            for sb, hb in b.attrs:
                if ha == sb or hb == sa:
                    return True
                if ha == hb and ha not in stoplist:
                    return True
        return False
    if pass_id == 3:
        return any(
            _initialism_match(sa, sb) or _initialism_match(sb, sa)
            for sa, _ in a.attrs
            for sb, _ in b.attrs
        )
    if pass_id == 4:
        return any(
            edit_similarity(sa, sb) >= threshold for sa, _ in a.attrs for sb, _ in b.attrs
        )
    raise ValueError(f"unknown pass {pass_id}")


def _concept_id(member_ids: Iterable[str]) -> str:
    digest = hashlib.sha256("\n".join(sorted(member_ids)).encode("utf-8")).hexdigest()
    return digest[:12]


def merge(mentions: Sequence[Mention], merge_threshold: float = 0.85) -> list[Concept]:
    """Agglomerate a topic's mentions into concepts.

    The output is a partition of the input mention set; shuffling the input
    yields identical clusters and canonical labels.
    """
    stoplist = resources.ambiguous_heads()
    clusters = [
        _Cluster(m, normalize(m.surface), normalize(m.head))
        for m in sorted(mentions, key=lambda m: (m.article_id, m.span))
    ]

    for pass_id in (1, 2, 3, 4):
        labels = [c.canonical_label() for c in clusters]
        candidates: list[tuple[str, str, int, int]] = []
        for ia in range(len(clusters)):
            for ib in range(ia + 1, len(clusters)):
                if _pass_condition(pass_id, clusters[ia], clusters[ib], merge_threshold, stoplist):
                    la, lb = labels[ia], labels[ib]
                    lo, hi = (la, lb) if la <= lb else (lb, la)
                    candidates.append((lo, hi, ia, ib))
        candidates.sort()

        parent = list(range(len(clusters)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for _, _, ia, ib in candidates:
            ra, rb = find(ia), find(ib)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        merged: dict[int, _Cluster] = {}
        for idx, cluster in enumerate(clusters):
            root = find(idx)
            if root in merged:
                merged[root].absorb(cluster)
            else:
                merged[root] = cluster
        clusters = [merged[root] for root in sorted(merged)]

    concepts: list[Concept] = []
    for cluster in clusters:
        ordered = sorted(cluster.mentions, key=lambda m: (m.article_id, m.span))
        member_ids = tuple(m.mention_id for m in ordered)
        per_article = Counter(m.article_id for m in ordered)
        concepts.append(
            Concept(
                concept_id=_concept_id(member_ids),
                canonical_label=cluster.canonical_label(),
                members=member_ids,
                frequency=len(member_ids),
                per_article_frequency=dict(per_article),
            )
        )
    concepts.sort(key=_rank_key)
    return concepts


def _rank_key(concept: Concept) -> tuple:
    return (
        -concept.frequency,
        -len(concept.per_article_frequency),
        concept.canonical_label,
        concept.concept_id,
    )


def rank(concepts: Sequence[Concept], k: int) -> list[Concept]:
    """Top-k concepts: frequency desc, distinct-article spread desc, label asc."""
    return sorted(concepts, key=_rank_key)[: max(k, 0)]
