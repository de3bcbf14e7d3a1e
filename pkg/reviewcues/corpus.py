"""Neutral corpus files: one review comment per JSONL line or CSV row.

Every record carries ``id``, ``project`` and ``message``; other fields are
ignored. Bad records are skipped with a warning, and a file with too many of
them is rejected once it has been read.
"""

import csv
from dataclasses import dataclass
import json
from pathlib import Path
import warnings

from reviewcues.preprocessing import Comment
from reviewcues.utils import MalformedInputWarning, write_text

FORMAT_VERSION = 1
FORMATS = ("jsonl", "csv")
FIELDS = ("id", "project", "message")
DEFAULT_TOLERANCE = 0.10

_SUFFIXES = {".jsonl": "jsonl", ".ndjson": "jsonl", ".json": "jsonl", ".csv": "csv"}


class CorpusReadError(Exception):
    def __init__(self, path, error):
        self.path = Path(path)
        reason = getattr(error, "strerror", None) or str(error)
        super().__init__(f"cannot read {self.path}: {reason}")


class CorpusQualityError(Exception):
    pass


class _Malformed(ValueError):
    pass


@dataclass(frozen=True)
class ProjectSource:
    name: str
    source: str
    comment_count: int = 0

    @property
    def _to_serialize(self):
        return {
            "name": self.name,
            "source": self.source,
            "comment_count": self.comment_count,
        }


@dataclass(frozen=True)
class CorpusManifest:
    projects: tuple = ()
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        names = [project.name for project in self.projects]
        if len(names) != len(set(names)):
            raise ValueError("project names must be unique in a manifest")
        if any(project.comment_count < 0 for project in self.projects):
            raise ValueError("comment counts must be >= 0")

    @property
    def comment_count(self):
        return sum(project.comment_count for project in self.projects)

    def count(self, name):
        for project in self.projects:
            if project.name == name:
                return project.comment_count
        return 0

    @classmethod
    def from_counts(cls, counts, source):
        return cls(
            projects=tuple(
                ProjectSource(name, source, counts[name]) for name in sorted(counts)
            )
        )

    @property
    def _to_serialize(self):
        return {
            "format_version": self.format_version,
            "comment_count": self.comment_count,
            "projects": list(self.projects),
        }


def guess_format(path):
    corpus_format = _SUFFIXES.get(Path(path).suffix.lower())
    if corpus_format is None:
        raise ValueError(
            f"cannot tell the format of {path}, expected one of {', '.join(FORMATS)}"
        )
    return corpus_format


def _field(record, name):
    value = record.get(name)
    if isinstance(value, int) and not isinstance(value, bool) and name == "id":
        value = str(value)
    if not isinstance(value, str):
        raise _Malformed(f"field {name!r} missing or not a string")
    if name != "message" and not value.strip():
        raise _Malformed(f"field {name!r} is empty")
    return value if name == "message" else value.strip()


class CorpusReader:
    """Iterable of the Comments of a corpus file, in file order.

    Counters (``total``, ``malformed``) and the per-project counts behind
    ``manifest()`` are filled while iterating.
    """

    def __init__(self, path, format=None, tolerance=DEFAULT_TOLERANCE):
        self.path = Path(path)
        self.format = format or guess_format(path)
        if self.format not in FORMATS:
            raise ValueError(f"unknown corpus format {self.format!r}")
        if not 0 <= tolerance <= 1:
            raise ValueError(f"tolerance must be within [0, 1], got {tolerance}")
        self.tolerance = tolerance
        self.total = 0
        self.malformed = 0
        self._counts = {}

    def __iter__(self):
        self.total = 0
        self.malformed = 0
        self._counts = {}
        seen = set()
        records = self._jsonl_records if self.format == "jsonl" else self._csv_records
        try:
            for lineno, record in records():
                self.total += 1
                try:
                    if isinstance(record, Exception):
                        raise record
                    if not isinstance(record, dict):
                        raise _Malformed("not an object")
                    comment = Comment(
                        id=_field(record, "id"),
                        project=_field(record, "project"),
                        message=_field(record, "message"),
                    )
                    if comment.id in seen:
                        raise _Malformed(f"duplicate id {comment.id!r}")
                except _Malformed as e:
                    self._skip(lineno, e)
                    continue
                seen.add(comment.id)
                self._counts[comment.project] = self._counts.get(comment.project, 0) + 1
                yield comment
        except OSError as e:
            raise CorpusReadError(self.path, e) from e
        self._check_quality()

    def _skip(self, lineno, reason):
        self.malformed += 1
        warnings.warn(
            f"{self.path}:{lineno}: skipped malformed record ({reason})",
            MalformedInputWarning,
        )

    def _check_quality(self):
        if self.total and self.malformed / self.total > self.tolerance:
            raise CorpusQualityError(
                f"{self.path}: {self.malformed} of {self.total} records are"
                f" malformed, above the {self.tolerance:.0%} tolerance"
            )

    def _jsonl_records(self):
        with open(self.path, "rb") as f:
            for lineno, raw in enumerate(f, start=1):
                line = raw.decode("utf-8", errors="replace").strip()
                if not line:
                    continue
                try:
                    yield lineno, json.loads(line)
                except ValueError:
                    yield lineno, _Malformed("invalid JSON")

    def _csv_records(self):
        with open(self.path, encoding="utf-8", errors="replace", newline="") as f:
            reader = csv.DictReader(f)
            if reader.fieldnames is None:
                return
            missing = [name for name in FIELDS if name not in reader.fieldnames]
            if missing:
                raise CorpusQualityError(
                    f"{self.path}: missing CSV columns {', '.join(missing)}"
                )
            try:
                for row in reader:
                    if None in row:
                        yield reader.line_num, _Malformed("too many fields")
                    else:
                        yield reader.line_num, row
            except csv.Error as e:
                raise CorpusQualityError(
                    f"{self.path}:{reader.line_num}: unreadable CSV ({e})"
                ) from e

    def manifest(self):
        return CorpusManifest.from_counts(self._counts, str(self.path))


def read_corpus(path, format=None, tolerance=DEFAULT_TOLERANCE):
    return CorpusReader(path, format=format, tolerance=tolerance)


def write_corpus(comments, path):
    """Write comments as JSONL, one sorted-keys object per line."""
    lines = [
        json.dumps(comment._to_serialize, ensure_ascii=False, sort_keys=True) + "\n"
        for comment in comments
    ]
    write_text(Path(path), "".join(lines))
    return len(lines)
