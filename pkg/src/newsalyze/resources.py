"""Loaders for the editable data files shipped with the package.

Formats: one entry per line for plain lists; `surface<TAB>kind` for the
gazetteer; `term<TAB>polarity` for the sentiment lexicon. Blank lines and
lines starting with '#' are ignored everywhere.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

def _read_lines(name: str, path: str | Path | None = None) -> list[str]:
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
    else:
        text = resources.files("newsalyze").joinpath("data").joinpath(name).read_text(encoding="utf-8")
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    return lines


@lru_cache(maxsize=None)
def abbreviations() -> frozenset[str]:
    """Sentence-segmentation abbreviation list, lowercased."""
    return frozenset(line.lower() for line in _read_lines("abbreviations.txt"))


@lru_cache(maxsize=None)
def honorifics() -> frozenset[str]:
    """Leading honorific/title tokens stripped during surface normalization."""
    return frozenset(line.lower() for line in _read_lines("honorifics.txt"))


@lru_cache(maxsize=None)
def ambiguous_heads() -> frozenset[str]:
    """Heads too generic to merge on equality alone."""
    return frozenset(line.lower() for line in _read_lines("ambiguous_heads.txt"))


def load_gazetteer(path: str | Path | None = None) -> dict[str, str]:
    """Known entity surfaces mapped to a kind tag (person/org/place/other)."""
    entries: dict[str, str] = {}
    for line in _read_lines("gazetteer.tsv", path):
        surface, _, kind = line.partition("\t")
        entries[surface.strip()] = kind.strip() or "other"
    return entries


def load_lexicon(path: str | Path | None = None) -> dict[str, float]:
    """Opinion lexicon: lowercase term -> polarity in [-1, 1]; terms must be unique."""
    lexicon: dict[str, float] = {}
    for line in _read_lines("lexicon.tsv", path):
        term, _, value = line.partition("\t")
        term = term.strip().lower()
        polarity = float(value)
        if term in lexicon:
            raise ValueError(f"duplicate lexicon term: {term!r}")
        if not -1.0 <= polarity <= 1.0:
            raise ValueError(f"lexicon polarity out of range for {term!r}: {polarity}")
        lexicon[term] = polarity
    return lexicon
