"""Exception hierarchy shared across the engine.

Exit-code mapping used by the CLI: usage errors -> 1, data/validation
errors -> 2, I/O and network errors -> 3.
"""

from __future__ import annotations


class NewsalyzeError(Exception):
    """Base class for all engine errors."""


class DataError(NewsalyzeError):
    """Invariant or validation failure (CLI exit code 2)."""


class IOFailure(NewsalyzeError):
    """Storage or network failure (CLI exit code 3)."""


class UnknownTopicError(DataError):
    def __init__(self, topic_id: str) -> None:
        super().__init__(f"unknown topic: {topic_id!r}")
        self.topic_id = topic_id


class UnknownArticleError(DataError):
    def __init__(self, article_id: str) -> None:
        super().__init__(f"unknown article: {article_id!r}")
        self.article_id = article_id


class NotAnalyzedError(DataError):
    def __init__(self, topic_id: str) -> None:
        super().__init__(f"topic {topic_id!r} has not been analyzed")
        self.topic_id = topic_id


class StaleBundleError(DataError):
    """Stored bundle was produced by a different engine version."""

    def __init__(self, topic_id: str, found: str, expected: str) -> None:
        super().__init__(
            f"bundle for topic {topic_id!r} was written by engine {found!r}, "
            f"current engine is {expected!r}; re-run analyze"
        )
        self.topic_id = topic_id
        self.found = found
        self.expected = expected


class FetchError(IOFailure):
    """Base class for document-fetch failures."""

    def __init__(self, url: str, message: str) -> None:
        super().__init__(f"{url}: {message}")
        self.url = url


class FetchTimeout(FetchError):
    def __init__(self, url: str, timeout: float) -> None:
        super().__init__(url, f"timed out after {timeout:g}s")
        self.timeout = timeout


class FetchStatusError(FetchError):
    """Non-2xx HTTP response."""

    def __init__(self, url: str, status: int) -> None:
        super().__init__(url, f"HTTP status {status}")
        self.status = status


class NotFoundError(FetchStatusError):
    def __init__(self, url: str, status: int = 404) -> None:
        super().__init__(url, status)


class RedirectLimitError(FetchError):
    def __init__(self, url: str, limit: int) -> None:
        super().__init__(url, f"more than {limit} redirects")
        self.limit = limit


class OfflineFixtureMissing(FetchError):
    def __init__(self, url: str, path: str) -> None:
        super().__init__(url, f"no offline fixture at {path}")
        self.path = path


class ExtractionError(DataError):
    """Document yielded no extractable article text."""


class StoreLockedError(IOFailure):
    def __init__(self, lock_path: str, holder: str) -> None:
        super().__init__(f"store is locked by {holder} ({lock_path})")
        self.lock_path = lock_path
