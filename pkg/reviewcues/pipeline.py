"""End-to-end collocation study over a corpus, written to disk."""

from collections import defaultdict
from dataclasses import dataclass, field, replace
from pathlib import Path

from reviewcues.analytics import (
    DEFAULT_INTERSECTION_K,
    DEFAULT_KS,
    ReportWriteError,
    category_breakdown,
    check_ks,
    collocated_keywords,
    cross_project_intersection,
    emit_figure_data,
    figure_rows,
    inclusion_series,
)
from reviewcues.collocations import (
    DEFAULT_MIN_FREQUENCY,
    DEFAULT_WINDOW,
    CollocationSettings,
    build_table,
    rank,
    ranked_to_csv,
    table_summary,
)
from reviewcues.corpus import CorpusManifest
from reviewcues.lexicon import default_lexicon, load_lexicon
from reviewcues.preprocessing import (
    CODETOK,
    DEFAULT_CONFIG,
    PreprocessConfig,
    preprocess_all,
)
from reviewcues.utils import (
    fingerprint,
    list_of_dicts2csv,
    list_of_dicts2json,
    slugify,
    write_text,
)

MANIFEST_VERSION = 1

REFERENCE_SETTINGS = {
    "window": 2,
    "min_frequency": 10,
    "top_ks": [50, 100, 150, 200],
    "article_exclusions": ["a", "an"],
    "anchors": [CODETOK],
    "deduplicate_per_comment": False,
}


@dataclass(frozen=True)
class RunConfig:
    lexicon_path: str = None
    preprocess: PreprocessConfig = field(default=DEFAULT_CONFIG)
    window: int = DEFAULT_WINDOW
    min_frequency: int = DEFAULT_MIN_FREQUENCY
    top_ks: tuple = DEFAULT_KS
    article_exclusions: tuple = ("a", "an")
    anchors: tuple = (CODETOK,)
    deduplicate_per_comment: bool = False
    intersection_k: int = DEFAULT_INTERSECTION_K
    output_directory: str = "reviewcues-output"
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "top_ks", check_ks(self.top_ks))
        object.__setattr__(
            self,
            "article_exclusions",
            tuple(sorted({w.lower() for w in self.article_exclusions})),
        )
        object.__setattr__(self, "anchors", tuple(sorted(set(self.anchors))))
        if self.min_frequency < 0:
            raise ValueError(f"MIN_FREQUENCY must be >= 0, got {self.min_frequency}")
        if self.intersection_k < 1:
            raise ValueError(f"INTERSECTION_K must be >= 1, got {self.intersection_k}")
        if self.workers < 1:
            raise ValueError(f"WORKERS must be >= 1, got {self.workers}")
        if not 0 < self.preprocess.code_line_ratio <= 1:
            raise ValueError("CODE_LINE_RATIO must be within (0, 1]")
        # validates window and anchors
        self.collocation_settings

    @classmethod
    def from_mapping(cls, config):
        return cls(
            lexicon_path=config.get("LEXICON_PATH"),
            preprocess=PreprocessConfig.from_mapping(config),
            window=int(config.get("WINDOW", DEFAULT_WINDOW)),
            min_frequency=int(config.get("MIN_FREQUENCY", DEFAULT_MIN_FREQUENCY)),
            top_ks=tuple(int(k) for k in config.get("TOP_KS", DEFAULT_KS)),
            article_exclusions=tuple(config.get("ARTICLE_EXCLUSIONS", ("a", "an"))),
            anchors=tuple(config.get("ANCHOR_PLACEHOLDERS", (CODETOK,))),
            deduplicate_per_comment=bool(config.get("DEDUPLICATE_PER_COMMENT", False)),
            intersection_k=int(config.get("INTERSECTION_K", DEFAULT_INTERSECTION_K)),
            output_directory=config.get("OUTPUT_DIRECTORY") or "reviewcues-output",
            workers=int(config.get("WORKERS", 1)),
        )

    def updated(self, **changes):
        """Copy with the given fields replaced, None values ignored."""
        changes = {name: value for name, value in changes.items() if value is not None}
        preprocess_changes = {
            name: changes.pop(name)
            for name in list(changes)
            if name in PreprocessConfig.__dataclass_fields__
        }
        if preprocess_changes:
            changes["preprocess"] = replace(self.preprocess, **preprocess_changes)
        return replace(self, **changes)

    @property
    def collocation_settings(self):
        return CollocationSettings(
            window=self.window,
            exclusions=frozenset(self.article_exclusions),
            anchors=frozenset(self.anchors),
            deduplicate=self.deduplicate_per_comment,
            sentence_boundaries=self.preprocess.sentence_boundaries,
        )

    def study_settings(self):
        """Settings that change the results. Paths and worker count don't."""
        return {
            "window": self.window,
            "min_frequency": self.min_frequency,
            "top_ks": list(self.top_ks),
            "article_exclusions": list(self.article_exclusions),
            "anchors": list(self.anchors),
            "deduplicate_per_comment": self.deduplicate_per_comment,
            "intersection_k": self.intersection_k,
            "preprocess": self.preprocess.as_dict(),
        }

    def matches_reference(self):
        settings = self.study_settings()
        return all(settings[key] == value for key, value in REFERENCE_SETTINGS.items())

    def fingerprint(self):
        ks = ".".join(str(k) for k in self.top_ks)
        return fingerprint(
            self.study_settings(),
            prefix=f"w{self.window}-f{self.min_frequency}-k{ks}",
        )

    def load_lexicon(self):
        if self.lexicon_path:
            return load_lexicon(self.lexicon_path)
        return default_lexicon()


@dataclass
class ProjectResult:
    project: str
    directory: Path
    comments: int
    table: object
    ranked: object
    report: object


@dataclass
class PipelineResult:
    output_directory: Path
    projects: list
    manifest_path: Path
    intersection: set = None

    @property
    def reports(self):
        return [project.report for project in self.projects]


def group_by_project(comments):
    projects = defaultdict(list)
    for comment in comments:
        projects[comment.project].append(comment)
    return projects


def _project_directories(projects):
    directories = {}
    used = set()
    for project in projects:
        slug = base = slugify(project)
        suffix = 2
        while slug in used:
            slug = f"{base}-{suffix}"
            suffix += 1
        used.add(slug)
        directories[project] = slug
    return directories


def _write(path, content):
    try:
        write_text(path, content)
    except OSError as e:
        raise ReportWriteError(path, e) from e


def analyze_project(project, comments, config, lexicon):
    streams = preprocess_all(comments, config.preprocess, workers=config.workers)
    table = build_table(
        streams,
        project,
        config.collocation_settings,
        workers=config.workers,
        config_fingerprint=config.fingerprint(),
    )
    ranked = rank(table, config.min_frequency)
    report = inclusion_series(ranked, lexicon, config.top_ks)
    return table, ranked, report


def run_pipeline(config, comments, lexicon=None, corpus_manifest=None):
    """Run the study on ``comments`` and write every artifact.

    Outputs only depend on the comments, the config and the lexicon, so two
    runs on the same inputs give identical files.
    """
    if lexicon is None:
        lexicon = config.load_lexicon()
    projects = group_by_project(comments)
    if corpus_manifest is None:
        corpus_manifest = CorpusManifest.from_counts(
            {name: len(items) for name, items in projects.items()}, "<memory>"
        )
    out_dir = Path(config.output_directory)
    directories = _project_directories(sorted(projects))

    results = []
    for project in sorted(projects):
        try:
            table, ranked, report = analyze_project(
                project, projects[project], config, lexicon
            )
        except ValueError as e:
            raise ValueError(f"{project}: {e}") from e
        directory = out_dir / directories[project]
        everything = rank(table, 0)
        _write(directory / "collocations.csv", ranked_to_csv(everything))
        _write(
            directory / "collocations.json",
            list_of_dicts2json(table_summary(table, ranked)),
        )
        _write(directory / "ranked.csv", ranked_to_csv(ranked, with_rank=True))
        _write(
            directory / "inclusion.json",
            list_of_dicts2json(
                {
                    "report": report,
                    "categories": {
                        str(point.k): category_breakdown(point.hits, lexicon)
                        for point in report.series
                    },
                }
            ),
        )
        _write(
            directory / "figure.csv",
            list_of_dicts2csv(figure_rows([report]), ["project", "K", "rate"]),
        )
        results.append(
            ProjectResult(
                project=project,
                directory=directory,
                comments=len(projects[project]),
                table=table,
                ranked=ranked,
                report=report,
            )
        )

    emit_figure_data([result.report for result in results], out_dir)

    rankeds = [result.ranked for result in results]
    intersection = None
    if len(rankeds) >= 2:
        intersection = cross_project_intersection(
            rankeds, lexicon, config.intersection_k
        )
    manifest = {
        "manifest_version": MANIFEST_VERSION,
        "config_fingerprint": config.fingerprint(),
        "config": config.study_settings(),
        "reference_settings": config.matches_reference(),
        "lexicon_version": lexicon.version,
        "corpus": corpus_manifest,
        "projects": {
            result.project: {
                "directory": directories[result.project],
                "comments": result.comments,
                "total_pairs": result.table.total_pairs,
                "qualifying_words": len(result.ranked),
            }
            for result in results
        },
        "intersection": (
            None
            if intersection is None
            else {"k": config.intersection_k, "keywords": sorted(intersection)}
        ),
        "collocated_keywords": [
            {"word": word, "projects": count}
            for word, count in collocated_keywords(
                rankeds, lexicon, config.intersection_k
            )
        ],
    }
    manifest_path = out_dir / "manifest.json"
    _write(manifest_path, list_of_dicts2json(manifest))
    return PipelineResult(
        output_directory=out_dir,
        projects=results,
        manifest_path=manifest_path,
        intersection=intersection,
    )
