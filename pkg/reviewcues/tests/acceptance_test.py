"""Long-running checks, skipped by default.

Set REVIEWCUES_RUN_SLOW=1 for the throughput run and REVIEWCUES_DUMP_PATH to
a JSONL export of the four-project review dump for the replication run.
"""

import os
import random
import time
import warnings

import pytest

from reviewcues.corpus import read_corpus
from reviewcues.pipeline import RunConfig, run_pipeline
from reviewcues.preprocessing import Comment

STUDY_KEYWORDS = {"as", "if", "not", "for", "so", "and", "also", "instead", "when"}

DUMP_PATH = os.environ.get("REVIEWCUES_DUMP_PATH")
RUN_SLOW = os.environ.get("REVIEWCUES_RUN_SLOW")

VOCABULARY = (
    "the we this is to it in that should be of why not use here can you as if for"
    " so and also instead when but because then test fix value method"
).split()
IDENTIFIERS = ["foo_bar", "getConfigValue", "os.path.join", "None", "`self.x`"]


def synthetic_comments(count, seed=7):
    rng = random.Random(seed)
    projects = ["nova", "neutron", "cinder", "qt/base"]
    comments = []
    for n in range(count):
        words = [
            rng.choice(IDENTIFIERS) if rng.random() < 0.1 else rng.choice(VOCABULARY)
            for _ in range(rng.randint(10, 50))
        ]
        comments.append(Comment(str(n), projects[n % 4], " ".join(words)))
    return comments


@pytest.mark.skipif(not RUN_SLOW, reason="set REVIEWCUES_RUN_SLOW to run")
def test_throughput(tmp_path):
    comments = synthetic_comments(250_000)
    config = RunConfig(output_directory=str(tmp_path), workers=4)
    started = time.monotonic()
    result = run_pipeline(config, comments)
    assert time.monotonic() - started < 300
    assert len(result.projects) == 4


@pytest.mark.skipif(not DUMP_PATH, reason="set REVIEWCUES_DUMP_PATH to run")
def test_dump_replication(tmp_path):
    reader = read_corpus(DUMP_PATH)
    comments = list(reader)
    config = RunConfig(output_directory=str(tmp_path), workers=os.cpu_count() or 1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        result = run_pipeline(config, comments, corpus_manifest=reader.manifest())

    assert len(result.projects) == 4
    for project in result.projects:
        assert 0.12 <= project.report.point(50).rate <= 0.40, project.project
        position = project.ranked.rank_of("as")
        assert position is not None and position.rank <= 50, project.project
        assert STUDY_KEYWORDS <= set(project.ranked.words), project.project
    assert STUDY_KEYWORDS <= result.intersection
