"""Inclusion of the cue vocabulary among the top ranked collocations."""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple
import warnings

from reviewcues.lexicon import Category
from reviewcues.utils import (
    ShortRankingWarning,
    list_of_dicts2csv,
    list_of_dicts2json,
    unescape_csv_formulae,
    write_text,
)

DEFAULT_KS = (50, 100, 150, 200)
DEFAULT_INTERSECTION_K = 200
FIGURE_FIELDS = ["project", "K", "rate"]


class ReportWriteError(Exception):
    def __init__(self, path, error):
        self.path = Path(path)
        reason = getattr(error, "strerror", None) or str(error)
        super().__init__(f"cannot write {self.path}: {reason}")


class InclusionPoint(NamedTuple):
    k: int
    rate: float
    hits: tuple
    short: bool = False

    @property
    def _to_serialize(self):
        return {
            "k": self.k,
            "rate": self.rate,
            "hits": list(self.hits),
            "short": self.short,
        }


@dataclass(frozen=True)
class InclusionReport:
    project: str
    series: tuple
    lexicon_version: str

    @property
    def ks(self):
        return [point.k for point in self.series]

    def point(self, k):
        for point in self.series:
            if point.k == k:
                return point
        raise KeyError(k)

    @property
    def _to_serialize(self):
        return {
            "project": self.project,
            "lexicon_version": self.lexicon_version,
            "series": [point._to_serialize for point in self.series],
        }


def _top_hits(ranked, lexicon, k):
    cues = lexicon.single_word_set()
    return tuple(word for word in ranked.words[:k] if word in cues)


def _check_k(k):
    if k < 1:
        raise ValueError(f"K must be at least 1, got {k}")


def inclusion_rate(ranked, lexicon, k):
    """Share of the top ``k`` ranked words that are single-word cues.

    The denominator is always ``k``: a ranking shorter than ``k`` gives a
    lower rate and a ShortRankingWarning.
    """
    _check_k(k)
    hits = _top_hits(ranked, lexicon, k)
    short = len(ranked) < k
    if short:
        warnings.warn(
            f"{ranked.project}: only {len(ranked)} words reach the frequency"
            f" filter of {ranked.min_frequency}, fewer than K={k}",
            ShortRankingWarning,
        )
    return InclusionPoint(k=k, rate=len(hits) / k, hits=hits, short=short)


def check_ks(ks):
    ks = tuple(ks)
    if not ks:
        raise ValueError("at least one K is required")
    for k in ks:
        _check_k(k)
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise ValueError(f"K values must be strictly increasing, got {list(ks)}")
    return ks


def inclusion_series(ranked, lexicon, ks=DEFAULT_KS):
    ks = check_ks(ks)
    return InclusionReport(
        project=ranked.project,
        series=tuple(inclusion_rate(ranked, lexicon, k) for k in ks),
        lexicon_version=lexicon.version,
    )


def _hits_for(item, lexicon, k):
    if isinstance(item, InclusionReport):
        try:
            return set(item.point(k).hits)
        except KeyError:
            raise ValueError(f"report of {item.project} has no K={k} point")
    return set(_top_hits(item, lexicon, k))


def cross_project_intersection(rankeds, lexicon, k=DEFAULT_INTERSECTION_K):
    """Cue words found in the top ``k`` of every project.

    Accepts RankedCollocations or InclusionReport items (the latter need a
    point at ``k``).
    """
    _check_k(k)
    items = list(rankeds)
    if len(items) < 2:
        raise ValueError("the intersection needs at least two projects")
    common = _hits_for(items[0], lexicon, k)
    for item in items[1:]:
        common &= _hits_for(item, lexicon, k)
    return common


def collocated_keywords(rankeds, lexicon, k=DEFAULT_INTERSECTION_K):
    """Cue words in the top ``k`` of any project, with the number of projects
    they appear in, most widespread first."""
    _check_k(k)
    seen = {}
    for item in rankeds:
        for word in _hits_for(item, lexicon, k):
            seen[word] = seen.get(word, 0) + 1
    return sorted(seen.items(), key=lambda item: (-item[1], item[0]))


def category_breakdown(hits, lexicon):
    """Number of hits per cue category, every category listed."""
    breakdown = {category.value: 0 for category in Category}
    for word in hits:
        category = lexicon.lookup(word)
        if category is not None:
            breakdown[category.value] += 1
    return breakdown


def figure_rows(reports):
    return [
        {"project": report.project, "K": point.k, "rate": repr(point.rate)}
        for report in reports
        for point in report.series
    ]


def emit_figure_data(reports, out_dir):
    """Write ``figure.csv`` and ``figure.json`` under ``out_dir``.

    Returns both paths. Rates are written with ``repr`` so that reading the
    CSV back gives the same floats.
    """
    reports = list(reports)
    out_dir = Path(out_dir)
    csv_path = out_dir / "figure.csv"
    json_path = out_dir / "figure.json"
    bundle = {
        "fields": FIGURE_FIELDS,
        "reports": reports,
    }
    for path, content in (
        (csv_path, list_of_dicts2csv(figure_rows(reports), FIGURE_FIELDS)),
        (json_path, list_of_dicts2json(bundle)),
    ):
        try:
            write_text(path, content)
        except OSError as e:
            raise ReportWriteError(path, e) from e
    return csv_path, json_path


def read_figure_data(path):
    """Rows of an emitted figure CSV as (project, K, rate) tuples."""
    with open(path, encoding="utf-8", newline="") as f:
        return [
            (unescape_csv_formulae(row["project"]), int(row["K"]), float(row["rate"]))
            for row in csv.DictReader(f)
        ]
