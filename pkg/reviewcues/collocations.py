"""Windowed bigram collocations between code placeholders and words.

For every anchor token (``CODETOK`` by default) each word at distance one to
``window`` on either side forms a pair. Pairs whose partner is a placeholder
or an excluded article are not counted as words but tallied as excluded.
"""

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import repeat
from typing import NamedTuple

from reviewcues.preprocessing import CODETOK, PLACEHOLDERS
from reviewcues.utils import fingerprint, list_of_dicts2csv

DEFAULT_WINDOW = 2
DEFAULT_MIN_FREQUENCY = 10
DEFAULT_EXCLUSIONS = frozenset({"a", "an"})
DEFAULT_ANCHORS = frozenset({CODETOK})


class ProjectMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class CollocationSettings:
    window: int = DEFAULT_WINDOW
    exclusions: frozenset = DEFAULT_EXCLUSIONS
    anchors: frozenset = DEFAULT_ANCHORS
    deduplicate: bool = False
    sentence_boundaries: bool = False

    def __post_init__(self):
        if self.window < 1:
            raise ValueError(f"window distance must be at least 1, got {self.window}")
        object.__setattr__(
            self, "exclusions", frozenset(w.lower() for w in self.exclusions)
        )
        object.__setattr__(self, "anchors", frozenset(self.anchors))
        unknown = self.anchors - PLACEHOLDERS
        if unknown:
            raise ValueError(f"anchors must be placeholders, got {sorted(unknown)}")

    def as_dict(self):
        return {
            "window": self.window,
            "exclusions": sorted(self.exclusions),
            "anchors": sorted(self.anchors),
            "deduplicate": self.deduplicate,
            "sentence_boundaries": self.sentence_boundaries,
        }

    def fingerprint(self):
        return fingerprint(self.as_dict(), prefix=f"w{self.window}")


DEFAULT_SETTINGS = CollocationSettings()


def _sentence_index(stream):
    index = []
    current = 0
    for i in range(len(stream.tokens)):
        index.append(current)
        if i in stream.sentence_ends:
            current += 1
    return index


def window_positions(stream, window, sentence_boundaries=False, anchors=None):
    """Yield (i, j) for every anchor position i and every j at distance
    1..window from it, in increasing (i, j) order."""
    tokens = stream.tokens
    anchors = DEFAULT_ANCHORS if anchors is None else anchors
    n = len(tokens)
    sentences = None
    if sentence_boundaries and stream.sentence_ends:
        sentences = _sentence_index(stream)
    for i, token in enumerate(tokens):
        if token not in anchors:
            continue
        for j in range(max(0, i - window), min(n, i + window + 1)):
            if j == i:
                continue
            if sentences is not None and sentences[j] != sentences[i]:
                continue
            yield i, j


def _scan(stream, settings):
    partners = []
    excluded = 0
    for _, j in window_positions(
        stream, settings.window, settings.sentence_boundaries, settings.anchors
    ):
        partner = stream.tokens[j]
        if partner in PLACEHOLDERS or partner in settings.exclusions:
            excluded += 1
        else:
            partners.append(partner)
    return partners, excluded


def extract_pairs(
    stream,
    window=DEFAULT_WINDOW,
    exclusions=DEFAULT_EXCLUSIONS,
    anchors=DEFAULT_ANCHORS,
    sentence_boundaries=False,
):
    """Partner words of the anchors in ``stream``, one entry per pair."""
    settings = CollocationSettings(
        window=window,
        exclusions=frozenset(exclusions),
        anchors=frozenset(anchors),
        sentence_boundaries=sentence_boundaries,
    )
    return _scan(stream, settings)[0]


def _count_shard(streams, settings):
    counts = Counter()
    excluded = 0
    for stream in streams:
        partners, stream_excluded = _scan(stream, settings)
        if settings.deduplicate:
            partners = set(partners)
        counts.update(partners)
        excluded += stream_excluded
    return counts, excluded


@dataclass(frozen=True)
class CollocationTable:
    project: str
    counts: Counter = field(default_factory=Counter)
    excluded_pairs: int = 0
    config_fingerprint: str = ""

    @property
    def total_pairs(self):
        return sum(self.counts.values()) + self.excluded_pairs

    def __add__(self, other):
        if other.project != self.project:
            raise ProjectMismatchError(
                f"cannot merge tables of {self.project!r} and {other.project!r}"
            )
        if other.config_fingerprint != self.config_fingerprint:
            raise ValueError("cannot merge tables built with different settings")
        return CollocationTable(
            project=self.project,
            counts=self.counts + other.counts,
            excluded_pairs=self.excluded_pairs + other.excluded_pairs,
            config_fingerprint=self.config_fingerprint,
        )


def merge_tables(tables):
    tables = list(tables)
    if not tables:
        raise ValueError("nothing to merge")
    merged = tables[0]
    for table in tables[1:]:
        merged = merged + table
    return merged


def build_table(
    streams, project, settings=DEFAULT_SETTINGS, workers=1, config_fingerprint=None
):
    """Aggregate the pairs of every stream of ``project``.

    With ``workers`` > 1 the streams are sharded over a process pool; the
    merged counts are identical to the sequential ones.
    """
    streams = list(streams)
    for stream in streams:
        if stream.project != project:
            raise ProjectMismatchError(
                f"comment {stream.comment_id} belongs to {stream.project!r},"
                f" not {project!r}"
            )

    if workers > 1 and len(streams) > workers:
        shards = [streams[k::workers] for k in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as executor:
            partials = list(executor.map(_count_shard, shards, repeat(settings)))
    else:
        partials = [_count_shard(streams, settings)]

    counts = Counter()
    excluded = 0
    for shard_counts, shard_excluded in partials:
        counts.update(shard_counts)
        excluded += shard_excluded
    return CollocationTable(
        project=project,
        counts=counts,
        excluded_pairs=excluded,
        config_fingerprint=config_fingerprint or settings.fingerprint(),
    )


class RankPosition(NamedTuple):
    rank: int
    total: int


@dataclass(frozen=True)
class RankedCollocations:
    project: str
    ranked: tuple
    min_frequency: int = DEFAULT_MIN_FREQUENCY
    _positions: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self,
            "_positions",
            {word: position for position, (word, _) in enumerate(self.ranked, 1)},
        )

    def __len__(self):
        return len(self.ranked)

    @property
    def words(self):
        return [word for word, _ in self.ranked]

    def top(self, k):
        return self.ranked[:k]

    def rank_of(self, word):
        position = self._positions.get(word.lower())
        if position is None:
            return None
        return RankPosition(position, len(self.ranked))

    @property
    def _to_serialize(self):
        return {
            "project": self.project,
            "min_frequency": self.min_frequency,
            "ranked": [[word, count] for word, count in self.ranked],
        }


def rank(table, min_frequency=DEFAULT_MIN_FREQUENCY):
    """Words with at least ``min_frequency`` pairs, by count then word."""
    if min_frequency < 0:
        raise ValueError(f"min_frequency must be >= 0, got {min_frequency}")
    ranked = sorted(
        ((word, count) for word, count in table.counts.items() if count >= min_frequency),
        key=lambda item: (-item[1], item[0]),
    )
    return RankedCollocations(
        project=table.project, ranked=tuple(ranked), min_frequency=min_frequency
    )


def rank_of(ranked, word):
    """1-based rank and number of qualifying words, or None."""
    return ranked.rank_of(word)


def ranked_to_csv(ranked, with_rank=False):
    rows = [
        {"rank": position, "word": word, "count": count}
        for position, (word, count) in enumerate(ranked.ranked, 1)
    ]
    fieldnames = ["rank", "word", "count"] if with_rank else ["word", "count"]
    return list_of_dicts2csv(rows, fieldnames)


def table_summary(table, ranked):
    """JSON-ready view of a table and its ranking."""
    return {
        "project": table.project,
        "config_fingerprint": table.config_fingerprint,
        "min_frequency": ranked.min_frequency,
        "excluded_pairs": table.excluded_pairs,
        "total_pairs": table.total_pairs,
        "distinct_words": len(table.counts),
        "qualifying_words": len(ranked),
        "ranked": [[word, count] for word, count in ranked.ranked],
    }
