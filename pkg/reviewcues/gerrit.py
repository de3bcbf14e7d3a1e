"""Fetch review messages from a Gerrit server's REST change API."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import json
import re
import time
import warnings

import requests

from reviewcues.preprocessing import Comment
from reviewcues.utils import PartialFetchWarning

# Gerrit prefixes JSON bodies with this line against XSSI
JSON_GUARD = ")]}'"
RETRY_STATUSES = frozenset({429})

_PATCH_SET_RE = re.compile(r"^Patch Set \d+:.*$")
_COMMENT_COUNT_RE = re.compile(r"^\(\d+ (?:inline )?comments?\)$")


class FetchError(Exception):
    pass


class _RetryableStatus(Exception):
    pass


@dataclass
class FetchResult:
    comments: list = field(default_factory=list)
    changes: int = 0
    pages: int = 0
    partial: bool = False
    error: str = None


def parse_response(text):
    """JSON list of a change query body, guard line stripped."""
    if text.startswith(JSON_GUARD):
        text = text.split("\n", 1)[1] if "\n" in text else ""
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("expected a JSON list of changes")
    return data


def clean_message(message):
    """Drop the lines Gerrit adds to every review message."""
    kept = [
        line
        for line in message.split("\n")
        if not _PATCH_SET_RE.match(line.strip())
        and not _COMMENT_COUNT_RE.match(line.strip())
    ]
    return "\n".join(kept).strip()


def change_comments(change, skip_autogenerated=True):
    """The review messages of one change as Comments."""
    project = change.get("project") or "unknown"
    number = change.get("_number", change.get("id"))
    for message in change.get("messages") or []:
        tag = message.get("tag") or ""
        if skip_autogenerated and tag.startswith("autogenerated:"):
            continue
        text = clean_message(message.get("message") or "")
        if not text:
            continue
        yield Comment(id=f"{number}:{message.get('id')}", project=project, message=text)


class GerritClient:
    def __init__(
        self,
        base_url,
        page_size=100,
        max_concurrency=4,
        max_attempts=5,
        backoff=0.5,
        timeout=30,
        skip_autogenerated=True,
        session=None,
        sleep=time.sleep,
    ):
        if page_size < 1 or max_concurrency < 1 or max_attempts < 1:
            raise ValueError("page size, concurrency and attempts must be >= 1")
        self.base_url = base_url.rstrip("/")
        self.page_size = page_size
        self.max_concurrency = max_concurrency
        self.max_attempts = max_attempts
        self.backoff = backoff
        self.timeout = timeout
        self.skip_autogenerated = skip_autogenerated
        self.session = session or requests.Session()
        self.sleep = sleep

    @classmethod
    def from_mapping(cls, base_url, config, **kwargs):
        settings = {
            "page_size": config.get("GERRIT_PAGE_SIZE", 100),
            "max_concurrency": config.get("GERRIT_MAX_CONCURRENCY", 4),
            "max_attempts": config.get("GERRIT_MAX_ATTEMPTS", 5),
            "backoff": config.get("GERRIT_BACKOFF", 0.5),
            "timeout": config.get("GERRIT_TIMEOUT", 30),
            "skip_autogenerated": config.get("GERRIT_SKIP_AUTOGENERATED", True),
        }
        settings.update(kwargs)
        return cls(base_url, **settings)

    @property
    def changes_url(self):
        return f"{self.base_url}/changes/"

    def get_page(self, query, skip):
        """One page of changes, retried with exponential backoff on
        connection errors, 5xx, 429 and unparsable bodies."""
        params = {"q": query, "o": "MESSAGES", "n": self.page_size, "S": skip}
        last_error = None
        for attempt in range(self.max_attempts):
            try:
                response = self.session.get(
                    self.changes_url, params=params, timeout=self.timeout
                )
                status = response.status_code
                if status in RETRY_STATUSES or status >= 500:
                    raise _RetryableStatus(f"HTTP {status}")
                response.raise_for_status()
                return parse_response(response.text)
            except requests.HTTPError as e:
                raise FetchError(f"{self.changes_url} (skip {skip}): {e}") from e
            except (requests.RequestException, _RetryableStatus, ValueError) as e:
                last_error = e
            if attempt + 1 < self.max_attempts:
                self.sleep(self.backoff * 2**attempt)
        raise FetchError(
            f"{self.changes_url} (skip {skip}): giving up after"
            f" {self.max_attempts} attempts: {last_error}"
        )

    def fetch(self, query, max_changes=None, cancel=None):
        """All review messages of the changes matching ``query``.

        Pages are requested in waves of at most ``max_concurrency``; the
        first wave is a single page. A ``threading.Event`` passed as
        ``cancel`` (or a KeyboardInterrupt) stops the fetch between pages
        and returns what was gathered so far, flagged as partial.
        """
        result = FetchResult()
        seen = set()
        skip = 0
        wave = 1
        more = True
        executor = ThreadPoolExecutor(max_workers=self.max_concurrency)
        try:
            while more:
                if cancel is not None and cancel.is_set():
                    result.partial, result.error = True, "cancelled"
                    break
                skips = [skip + k * self.page_size for k in range(wave)]
                futures = [executor.submit(self.get_page, query, s) for s in skips]
                for future in futures:
                    try:
                        changes = future.result()
                    except FetchError as e:
                        if not result.pages:
                            raise
                        result.partial, result.error, more = True, str(e), False
                        break
                    result.pages += 1
                    more = self._collect(changes, result, seen, max_changes)
                    if not more:
                        break
                for future in futures:
                    future.cancel()
                skip += wave * self.page_size
                wave = self.max_concurrency
        except KeyboardInterrupt:
            result.partial, result.error = True, "interrupted"
        finally:
            executor.shutdown(wait=False, cancel_futures=True)

        if result.partial:
            if not result.pages:
                raise FetchError(f"{self.changes_url}: {result.error} before any page")
            warnings.warn(
                f"fetch of {query!r} stopped after {result.pages} pages"
                f" ({result.error}); results are partial",
                PartialFetchWarning,
            )
        return result

    def _collect(self, changes, result, seen, max_changes):
        """Add a page to ``result``; False once the last change is reached."""
        for change in changes:
            key = change.get("id", change.get("_number"))
            if key in seen:
                continue
            seen.add(key)
            result.changes += 1
            result.comments.extend(change_comments(change, self.skip_autogenerated))
            if max_changes is not None and result.changes >= max_changes:
                return False
        return bool(changes) and bool(changes[-1].get("_more_changes"))


def fetch_remote(
    base_url, query, config=None, max_changes=None, cancel=None, **kwargs
):
    """Fetch the comments of the changes matching ``query`` on ``base_url``,
    with a client configured from the ``GERRIT_*`` settings of ``config``."""
    client = GerritClient.from_mapping(base_url, config or {}, **kwargs)
    return client.fetch(query, max_changes=max_changes, cancel=cancel)
