#!/usr/bin/env python

from contextlib import contextmanager
import json
import os
from pathlib import Path
import sys
import warnings

import click
from flask import current_app
from flask.cli import FlaskGroup

from reviewcues import default_settings
from reviewcues.analytics import ReportWriteError
from reviewcues.collocations import (
    ProjectMismatchError,
    build_table,
    rank,
    ranked_to_csv,
    table_summary,
)
from reviewcues.corpus import (
    FORMATS,
    CorpusQualityError,
    CorpusReadError,
    read_corpus,
    write_corpus,
)
from reviewcues.gerrit import FetchError, fetch_remote
from reviewcues.lexicon import LexiconError
from reviewcues.linter import LintSettings, format_diagnostics, lint
from reviewcues.pipeline import RunConfig, group_by_project, run_pipeline
from reviewcues.preprocessing import Comment, preprocess_all
from reviewcues.run import create_app
from reviewcues.utils import (
    ReviewCuesWarning,
    create_jinja_env,
    format_warning,
    get_lexicon,
    list_of_dicts2json,
    slugify,
    write_text,
)

EXIT_USAGE = 1
EXIT_CORPUS = 2
EXIT_IO = 3
EXIT_NETWORK = 4
# lint --strict on a comment without rationale
EXIT_NO_RATIONALE = 5


class CommandError(click.ClickException):
    def __init__(self, message, exit_code=EXIT_USAGE):
        super().__init__(message)
        self.exit_code = exit_code

    def show(self, file=None):
        click.secho(f"Error: {self.format_message()}", fg="red", err=True)


class ReviewCuesGroup(FlaskGroup):
    """FlaskGroup with the reviewcues exit codes: click usage errors exit
    with 1 instead of 2, which is taken by corpus errors."""

    def main(self, *args, **kwargs):
        kwargs["standalone_mode"] = False
        try:
            rv = super().main(*args, **kwargs)
        except click.UsageError as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.ClickException as e:
            e.show()
            sys.exit(e.exit_code)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        if isinstance(rv, int):
            sys.exit(rv)
        return rv


@contextmanager
def reported_errors():
    """Turn library errors into CommandErrors with the matching exit code."""
    try:
        yield
    except (CorpusQualityError, LexiconError, ProjectMismatchError) as e:
        raise CommandError(str(e), EXIT_CORPUS) from e
    except FetchError as e:
        raise CommandError(str(e), EXIT_NETWORK) from e
    except (CorpusReadError, ReportWriteError) as e:
        raise CommandError(str(e), EXIT_IO) from e
    except OSError as e:
        raise CommandError(f"{e.filename or ''}: {e.strerror or e}", EXIT_IO) from e
    except ValueError as e:
        raise CommandError(str(e), EXIT_USAGE) from e


def _shown(value):
    if isinstance(value, (list, tuple)):
        return ", ".join(str(v) for v in value)
    return str(value)


CORPUS_OPTIONS = [
    click.argument("corpus", type=click.Path(dir_okay=False)),
    click.option(
        "--format",
        "corpus_format",
        type=click.Choice(FORMATS),
        help="Corpus format.  [default: from the file extension]",
    ),
    click.option(
        "--tolerance",
        type=click.FloatRange(0, 1),
        show_default=_shown(default_settings.MALFORMED_RECORD_TOLERANCE),
        help="Largest share of malformed records before the corpus is rejected.",
    ),
]

STUDY_OPTIONS = [
    click.option(
        "--lexicon",
        "lexicon_path",
        type=click.Path(dir_okay=False),
        help="Cue lexicon file.  [default: the bundled lexicon]",
    ),
    click.option(
        "--window",
        type=click.IntRange(min=1),
        show_default=_shown(default_settings.WINDOW),
        help="Largest distance between a code placeholder and a partner word.",
    ),
    click.option(
        "--min-frequency",
        type=click.IntRange(min=0),
        show_default=_shown(default_settings.MIN_FREQUENCY),
        help="Pairs a word needs to be ranked.",
    ),
    click.option(
        "--top-k",
        "top_ks",
        type=click.IntRange(min=1),
        multiple=True,
        show_default=_shown(default_settings.TOP_KS),
        help="Top-K cutoffs for inclusion rates, repeatable.",
    ),
    click.option(
        "--exclude",
        "article_exclusions",
        multiple=True,
        show_default=_shown(default_settings.ARTICLE_EXCLUSIONS),
        help="Partner words never counted, repeatable.",
    ),
    click.option(
        "--anchor",
        "anchors",
        type=click.Choice(["CODETOK", "URLTOK", "PATHTOK"]),
        multiple=True,
        show_default=_shown(default_settings.ANCHOR_PLACEHOLDERS),
        help="Placeholders that open a window, repeatable.",
    ),
    click.option(
        "--dedupe/--no-dedupe",
        "deduplicate_per_comment",
        default=None,
        show_default=_shown(default_settings.DEDUPLICATE_PER_COMMENT),
        help="Count a word at most once per comment.",
    ),
    click.option(
        "--sentence-boundaries/--no-sentence-boundaries",
        default=None,
        show_default=_shown(default_settings.SENTENCE_BOUNDARIES),
        help="Keep windows inside sentences.",
    ),
    click.option(
        "--workers",
        type=click.IntRange(min=1),
        show_default=_shown(default_settings.WORKERS),
        help="Worker processes.",
    ),
    click.option(
        "--out-dir",
        "output_directory",
        type=click.Path(file_okay=False),
        show_default=_shown(default_settings.OUTPUT_DIRECTORY),
        help="Output directory.",
    ),
]


def with_options(options):
    def decorator(f):
        for option in reversed(options):
            f = option(f)
        return f

    return decorator


def _run_config(**overrides):
    for name in ("top_ks", "article_exclusions", "anchors"):
        if not overrides.get(name):
            overrides[name] = None
    return RunConfig.from_mapping(current_app.config).updated(**overrides)


def _read_all(corpus, corpus_format, tolerance):
    if tolerance is None:
        tolerance = current_app.config["MALFORMED_RECORD_TOLERANCE"]
    reader = read_corpus(corpus, format=corpus_format, tolerance=tolerance)
    comments = list(reader)
    return reader, comments


@click.group(cls=ReviewCuesGroup, create_app=create_app)
def cli():
    """reviewcues: coherence cues in code review comments"""
    warnings.formatwarning = format_warning
    warnings.simplefilter("always", ReviewCuesWarning)


@cli.command()
@with_options(CORPUS_OPTIONS)
@click.option(
    "--manifest",
    "manifest_path",
    type=click.Path(dir_okay=False),
    help="Also write the corpus manifest as JSON to this file.",
)
def ingest(corpus, corpus_format, tolerance, manifest_path):
    """Validate a corpus file and count its comments per project"""
    with reported_errors():
        reader, comments = _read_all(corpus, corpus_format, tolerance)
        manifest = reader.manifest()
        for project in manifest.projects:
            click.echo(f"{project.name}\t{project.comment_count}")
        click.echo(
            f"{manifest.comment_count} comments in {len(manifest.projects)} projects,"
            f" {reader.malformed} malformed records skipped"
        )
        if manifest_path:
            write_text(Path(manifest_path), list_of_dicts2json(manifest))


@cli.command()
@with_options(CORPUS_OPTIONS)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, allow_dash=True),
    default="-",
    show_default=True,
    help="JSONL file for the token streams.",
)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
def preprocess(corpus, corpus_format, tolerance, out, workers):
    """Write the token stream of every comment as JSONL"""
    with reported_errors():
        config = _run_config(workers=workers)
        _, comments = _read_all(corpus, corpus_format, tolerance)
        streams = preprocess_all(comments, config.preprocess, workers=config.workers)
        lines = "".join(
            json.dumps(stream._to_serialize, ensure_ascii=False, sort_keys=True) + "\n"
            for stream in streams
        )
        if out == "-":
            click.echo(lines, nl=False)
        else:
            write_text(Path(out), lines)


@cli.command()
@with_options(CORPUS_OPTIONS)
@with_options(STUDY_OPTIONS)
@click.option("--project", "projects", multiple=True, help="Only these projects.")
@click.option(
    "--top",
    type=click.IntRange(min=0),
    default=20,
    show_default=True,
    help="Ranked words printed per project.",
)
def collocate(corpus, corpus_format, tolerance, projects, top, **study):
    """Rank the words collocated with code, per project"""
    with reported_errors():
        config = _run_config(**study)
        _, comments = _read_all(corpus, corpus_format, tolerance)
        grouped = group_by_project(comments)
        for project in sorted(projects or grouped):
            streams = preprocess_all(
                grouped.get(project, []), config.preprocess, workers=config.workers
            )
            table = build_table(
                streams,
                project,
                config.collocation_settings,
                workers=config.workers,
                config_fingerprint=config.fingerprint(),
            )
            ranked = rank(table, config.min_frequency)
            click.secho(
                f"{project}: {len(ranked)} words with at least"
                f" {config.min_frequency} pairs, {table.total_pairs} pairs",
                bold=True,
            )
            for position, (word, count) in enumerate(ranked.top(top), 1):
                click.echo(f"{position}\t{word}\t{count}")
            if study.get("output_directory"):
                directory = Path(config.output_directory) / slugify(project)
                write_text(directory / "collocations.csv", ranked_to_csv(rank(table, 0)))
                write_text(
                    directory / "collocations.json",
                    list_of_dicts2json(table_summary(table, ranked)),
                )


@cli.command()
@with_options(CORPUS_OPTIONS)
@with_options(STUDY_OPTIONS)
def report(corpus, corpus_format, tolerance, **study):
    """Run the whole study and write every report"""
    with reported_errors():
        config = _run_config(**study)
        reader, comments = _read_all(corpus, corpus_format, tolerance)
        result = run_pipeline(
            config,
            comments,
            lexicon=config.load_lexicon(),
            corpus_manifest=reader.manifest(),
        )
        for project in result.projects:
            rates = "  ".join(
                f"top-{point.k}: {point.rate:.0%}" for point in project.report.series
            )
            click.echo(f"{project.project}\t{rates}")
        if result.intersection is not None:
            click.echo(
                f"in the top {config.intersection_k} of every project: "
                + (", ".join(sorted(result.intersection)) or "(none)")
            )
        click.echo(f"reports written to {result.output_directory}")


@cli.command(name="rank-of")
@click.argument("word")
@with_options(CORPUS_OPTIONS)
@with_options(STUDY_OPTIONS)
def rank_of_word(word, corpus, corpus_format, tolerance, **study):
    """Rank of WORD among the words collocated with code, per project"""
    with reported_errors():
        config = _run_config(**study)
        _, comments = _read_all(corpus, corpus_format, tolerance)
        grouped = group_by_project(comments)
        for project in sorted(grouped):
            streams = preprocess_all(
                grouped[project], config.preprocess, workers=config.workers
            )
            table = build_table(
                streams, project, config.collocation_settings, workers=config.workers
            )
            position = rank(table, config.min_frequency).rank_of(word)
            if position is None:
                click.echo(
                    f"{project}: {word!r} is not ranked"
                    f" ({table.counts.get(word.lower(), 0)} pairs)"
                )
            else:
                click.echo(
                    f"{project}: {word!r} ranks {position.rank} of {position.total}"
                )


@cli.command(name="lint")
@click.argument("message_file", type=click.File("r", encoding="utf-8"), default="-")
@click.option("--id", "comment_id", default="-", show_default=True)
@click.option("--project", default="unknown", show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Print the JSON report.")
@click.option(
    "--strict",
    is_flag=True,
    help=f"Exit with {EXIT_NO_RATIONALE} when the comment gives no rationale.",
)
@click.option(
    "--lexicon",
    "lexicon_path",
    type=click.Path(dir_okay=False),
    help="Cue lexicon file.  [default: the bundled lexicon]",
)
@click.pass_context
def lint_comment(ctx, message_file, comment_id, project, as_json, strict, lexicon_path):
    """Give feedback on one comment, read from MESSAGE_FILE or stdin"""
    with reported_errors():
        if lexicon_path:
            lexicon = RunConfig(lexicon_path=lexicon_path).load_lexicon()
        else:
            lexicon = get_lexicon()
        comment = Comment(id=comment_id, project=project, message=message_file.read())
        result = lint(comment, lexicon, LintSettings.from_mapping(current_app.config))
    if as_json:
        click.echo(result.to_json(), nl=False)
    for line in format_diagnostics(result):
        click.echo(line, err=as_json)
    if not as_json:
        click.secho(
            f"{result.code_refs} code references, {result.code_cue_collocations}"
            f" cue collocations, rationale: {'yes' if result.rationale_flag else 'no'}",
            fg="green" if result.rationale_flag else "yellow",
        )
    if strict and not result.rationale_flag:
        ctx.exit(EXIT_NO_RATIONALE)


@cli.command()
@click.argument("base_url")
@click.argument("query")
@click.option(
    "--out",
    type=click.Path(dir_okay=False, allow_dash=True),
    default="-",
    show_default=True,
    help="JSONL corpus file to write.",
)
@click.option("--max-changes", type=click.IntRange(min=1), help="Stop after N changes.")
@click.option(
    "--page-size",
    type=click.IntRange(min=1),
    show_default=_shown(default_settings.GERRIT_PAGE_SIZE),
)
@click.option(
    "--max-concurrency",
    type=click.IntRange(min=1),
    show_default=_shown(default_settings.GERRIT_MAX_CONCURRENCY),
    help="Page requests in flight.",
)
def fetch(base_url, query, out, max_changes, page_size, max_concurrency):
    """Fetch the review messages of the changes matching QUERY"""
    overrides = {
        name: value
        for name, value in (
            ("page_size", page_size),
            ("max_concurrency", max_concurrency),
        )
        if value is not None
    }
    with reported_errors():
        result = fetch_remote(
            base_url, query, current_app.config, max_changes=max_changes, **overrides
        )
        if out == "-":
            for comment in result.comments:
                click.echo(
                    json.dumps(comment._to_serialize, ensure_ascii=False, sort_keys=True)
                )
        else:
            write_corpus(result.comments, out)
    click.echo(
        f"{len(result.comments)} messages from {result.changes} changes"
        + (" (partial)" if result.partial else ""),
        err=True,
    )


@cli.command()
@click.argument("config_file", type=click.Choice(["reviewcues.cfg"]))
def generate_config(config_file):
    """Generate a documented settings file"""
    env = create_jinja_env("conf-templates", strict_rendering=True)
    template = env.get_template(f"{config_file}.j2")

    pkg_path = os.path.abspath(os.path.dirname(__file__))

    click.echo(template.render(pkg_path=pkg_path, settings=default_settings), nl=False)


def main():
    cli()


if __name__ == "__main__":
    main()
