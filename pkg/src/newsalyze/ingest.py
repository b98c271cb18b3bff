"""Fetch raw documents for a topic's configured URLs and extract article text.

Live fetching sends a descriptive user agent, follows at most five
redirects, and times out after 30 seconds. Offline mode reads fixtures from
a directory (`<sha256-of-url>.html` plus an `index.json` mapping url ->
filename) so the whole pipeline runs without network access.

Extraction is a deterministic boilerplate-removal pass: after dropping
script/style/nav/header/footer/aside/form subtrees, the block subtree with
the highest text density wins, where density score = text_length x
(1 - link_text_length / text_length) counted over non-whitespace
characters; ties go to the earliest subtree in document order.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from html.parser import HTMLParser
from pathlib import Path

import requests

from .errors import (
    ExtractionError,
    FetchError,
    FetchStatusError,
    FetchTimeout,
    NotFoundError,
    OfflineFixtureMissing,
    RedirectLimitError,
)
from .store import Article, compute_article_id

USER_AGENT = "newsalyze/0.1.0 (bias-aware news reader; offline-capable research crawler)"
FETCH_TIMEOUT = 30.0
MAX_REDIRECTS = 5

_ISO_DATE_RE = re.compile(r"\d{4}-\d{2}-\d{2}")


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class RawDocument:
    url: str
    http_status: int
    content_type: str
    content: bytes
    fetched_at: str


def url_fingerprint(url: str) -> str:
    return hashlib.sha256(url.encode("utf-8")).hexdigest()


def _offline_fetch(url: str, fixture_dir: Path) -> RawDocument:
    index_path = fixture_dir / "index.json"
    filename: str | None = None
    if index_path.exists():
        index = json.loads(index_path.read_text(encoding="utf-8"))
        filename = index.get(url)
    if filename is None:
        digest = url_fingerprint(url)
        for suffix in (".html", ".txt"):
            if (fixture_dir / (digest + suffix)).exists():
                filename = digest + suffix
                break
    if filename is None or not (fixture_dir / filename).exists():
        raise OfflineFixtureMissing(url, str(fixture_dir / (url_fingerprint(url) + ".html")))
    path = fixture_dir / filename
    content = path.read_bytes()
    if not content:
        raise FetchError(url, f"offline fixture {path.name} is empty")
    content_type = "text/plain; charset=utf-8" if path.suffix == ".txt" else "text/html; charset=utf-8"
    return RawDocument(
        url=url,
        http_status=200,
        content_type=content_type,
        content=content,
        fetched_at=utc_now_iso(),
    )


def fetch(
    url: str,
    offline_dir: str | Path | None = None,
    *,
    timeout: float = FETCH_TIMEOUT,
    session: requests.Session | None = None,
) -> RawDocument:
    """Retrieve one document, live or from the offline fixture directory."""
    if offline_dir is not None:
        return _offline_fetch(url, Path(offline_dir))

    owns_session = session is None
    if session is None:
        session = requests.Session()
    session.max_redirects = MAX_REDIRECTS
    try:
        response = session.get(
            url,
            headers={"User-Agent": USER_AGENT},
            timeout=timeout,
            allow_redirects=True,
        )
    except requests.Timeout as exc:
        raise FetchTimeout(url, timeout) from exc
    except requests.TooManyRedirects as exc:
        raise RedirectLimitError(url, MAX_REDIRECTS) from exc
    except requests.RequestException as exc:
        raise FetchError(url, str(exc)) from exc
    finally:
        if owns_session:
            session.close()

    if response.status_code == 404:
        raise NotFoundError(url)
    if not 200 <= response.status_code < 300:
        raise FetchStatusError(url, response.status_code)
    if not response.content:
        raise FetchError(url, "empty response body")
    return RawDocument(
        url=url,
        http_status=response.status_code,
        content_type=response.headers.get("Content-Type", "application/octet-stream"),
        content=response.content,
        fetched_at=utc_now_iso(),
    )


# -- HTML tree ---------------------------------------------------------------

_VOID_TAGS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)
_STRIP_TAGS = frozenset("script style nav header footer aside form".split())
_NO_TEXT_TAGS = _STRIP_TAGS | frozenset(("head", "title", "noscript", "template"))
_BLOCK_TAGS = frozenset(
    "address article aside blockquote dd details div dl dt fieldset figcaption figure "
    "footer form h1 h2 h3 h4 h5 h6 header hr li main nav ol p pre section summary "
    "table tbody td tfoot th thead tr ul".split()
)
_CANDIDATE_TAGS = frozenset(
    "article main section div td th li ul ol dl table blockquote pre p "
    "h1 h2 h3 h4 h5 h6 figure".split()
)
_P_CLOSERS = _BLOCK_TAGS - {"p"}


class _Node:
    __slots__ = ("tag", "attrs", "children")

    def __init__(self, tag: str, attrs: dict[str, str] | None = None) -> None:
        self.tag = tag
        self.attrs = attrs or {}
        self.children: list[_Node | str] = []


class _TreeBuilder(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.root = _Node("#root")
        self.stack = [self.root]

    def handle_starttag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        tag = tag.lower()
        if tag in _BLOCK_TAGS and self.stack[-1].tag == "p" and tag in _P_CLOSERS:
            self.stack.pop()
        if tag == "li" and self.stack[-1].tag == "li":
            self.stack.pop()
        if tag == "p" and self.stack[-1].tag == "p":
            self.stack.pop()
        node = _Node(tag, {k: (v or "") for k, v in attrs})
        self.stack[-1].children.append(node)
        if tag not in _VOID_TAGS:
            self.stack.append(node)

    def handle_startendtag(self, tag: str, attrs: list[tuple[str, str | None]]) -> None:
        self.stack[-1].children.append(_Node(tag.lower(), {k: (v or "") for k, v in attrs}))

    def handle_endtag(self, tag: str) -> None:
        tag = tag.lower()
        for i in range(len(self.stack) - 1, 0, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                return
        # stray end tag: ignore

    def handle_data(self, data: str) -> None:
        if data:
            self.stack[-1].children.append(data)


def _parse_html(text: str) -> _Node:
    builder = _TreeBuilder()
    builder.feed(text)
    builder.close()
    return builder.root


def _iter_nodes(node: _Node):
    yield node
    for child in node.children:
        if isinstance(child, _Node):
            yield from _iter_nodes(child)


def _find_first(root: _Node, tag: str) -> _Node | None:
    for node in _iter_nodes(root):
        if node.tag == tag:
            return node
    return None


def _nonws_counts(node: _Node, inside_link: bool = False) -> tuple[int, int]:
    """(non-whitespace chars, non-whitespace chars under <a>) for a subtree."""
    if node.tag in _NO_TEXT_TAGS:
        return 0, 0
    inside_link = inside_link or node.tag == "a"
    text = 0
    link = 0
    for child in node.children:
        if isinstance(child, str):
            count = sum(1 for ch in child if not ch.isspace())
            text += count
            if inside_link:
                link += count
        else:
            sub_text, sub_link = _nonws_counts(child, inside_link)
            text += sub_text
            link += sub_link
    return text, link


def _density_score(node: _Node) -> int:
    # text_length x (1 - link/text) reduces to text_length - link_text_length
    text, link = _nonws_counts(node)
    return text - link if text else 0


def _collect_text(node: _Node, parts: list[str]) -> None:
    if node.tag in _NO_TEXT_TAGS:
        return
    is_block = node.tag in _BLOCK_TAGS
    if is_block or node.tag == "br":
        parts.append("\n")
    for child in node.children:
        if isinstance(child, str):
            parts.append(re.sub(r"\s+", " ", child))
        else:
            _collect_text(child, parts)
    if is_block:
        parts.append("\n")


def _subtree_text(node: _Node) -> str:
    parts: list[str] = []
    _collect_text(node, parts)
    text = "".join(parts)
    text = re.sub(r"[ \t]*\n[ \t]*", "\n", text)
    text = re.sub(r"\n{2,}", "\n", text)
    text = re.sub(r"[ \t]{2,}", " ", text)
    return text.strip()


def _inline_text(node: _Node | None) -> str:
    """Collapsed text of a node read directly (used for <title>/<h1>)."""
    if node is None:
        return ""
    parts: list[str] = []

    def walk(current: _Node) -> None:
        for child in current.children:
            if isinstance(child, str):
                parts.append(child)
            elif child.tag not in ("script", "style"):
                walk(child)

    walk(node)
    return re.sub(r"\s+", " ", "".join(parts)).strip()


def _strip_boilerplate(root: _Node) -> None:
    for node in _iter_nodes(root):
        node.children = [
            child
            for child in node.children
            if not (isinstance(child, _Node) and child.tag in _STRIP_TAGS)
        ]


def _meta_content(root: _Node, *names: str) -> str | None:
    wanted = {n.lower() for n in names}
    for node in _iter_nodes(root):
        if node.tag != "meta":
            continue
        key = (node.attrs.get("property") or node.attrs.get("name") or "").lower()
        if key in wanted:
            content = (node.attrs.get("content") or "").strip()
            if content:
                return content
    return None


def _extract_title(root: _Node) -> str:
    og = _meta_content(root, "og:title")
    if og:
        return re.sub(r"\s+", " ", og).strip()
    for tag in ("title", "h1"):
        text = _inline_text(_find_first(root, tag))
        if text:
            return text
    return ""


def _extract_published(root: _Node) -> str | None:
    value = _meta_content(
        root, "article:published_time", "og:article:published_time", "datepublished", "date"
    )
    if not value:
        return None
    match = _ISO_DATE_RE.match(value)
    return match.group(0) if match else None


def _charset_of(content_type: str) -> str:
    match = re.search(r"charset=([\w.-]+)", content_type, flags=re.IGNORECASE)
    return match.group(1) if match else "utf-8"


def _select_content_node(root: _Node) -> _Node | None:
    best: _Node | None = None
    best_score = 0
    for node in _iter_nodes(root):  # pre-order == document order, so ties keep the earliest
        if node.tag not in _CANDIDATE_TAGS:
            continue
        score = _density_score(node)
        if score > best_score:
            best, best_score = node, score
    return best


def extract(raw: RawDocument, *, topic_id: str, outlet: str) -> Article:
    """Turn a raw document into a stored-article record.

    Pure and deterministic given the raw document. Raises ExtractionError
    when no body text survives cleaning.
    """
    text = raw.content.decode(_charset_of(raw.content_type), errors="replace")

    if "text/plain" in raw.content_type:
        body = text.replace("\r\n", "\n").replace("\r", "\n").strip()
        if not body:
            raise ExtractionError(f"{raw.url}: empty plain-text document")
        title = next((line.strip() for line in body.split("\n") if line.strip()), "")
        return Article(
            article_id=compute_article_id(raw.url, body),
            topic_id=topic_id,
            outlet=outlet,
            url=raw.url,
            title=title,
            published=None,
            body=body,
            fetched_at=raw.fetched_at,
        )

    root = _parse_html(text)
    title = _extract_title(root)
    published = _extract_published(root)
    _strip_boilerplate(root)

    content_node = _select_content_node(root)
    if content_node is None:
        content_node = _find_first(root, "body") or root
    body = _subtree_text(content_node)
    if not body:
        raise ExtractionError(f"{raw.url}: no extractable text after cleaning")

    return Article(
        article_id=compute_article_id(raw.url, body),
        topic_id=topic_id,
        outlet=outlet,
        url=raw.url,
        title=title,
        published=published,
        body=body,
        fetched_at=raw.fetched_at,
    )
