import json

import pytest

from reviewcues.analytics import ReportWriteError, read_figure_data
from reviewcues.pipeline import REFERENCE_SETTINGS, RunConfig, run_pipeline
from reviewcues.preprocessing import Comment

STUDY_KEYWORDS = ["also", "and", "as", "for", "if", "instead", "not", "so", "when"]


def tree(directory):
    return {
        str(path.relative_to(directory)): path.read_bytes()
        for path in sorted(directory.rglob("*"))
        if path.is_file()
    }


def read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


class TestRunConfig:
    def test_defaults_are_the_reference_settings(self):
        config = RunConfig()
        assert config.matches_reference()
        settings = config.study_settings()
        for key, value in REFERENCE_SETTINGS.items():
            assert settings[key] == value

    def test_from_empty_mapping(self):
        assert RunConfig.from_mapping({}) == RunConfig()

    def test_from_mapping(self):
        config = RunConfig.from_mapping(
            {"WINDOW": 3, "TOP_KS": [10, 20], "ARTICLE_EXCLUSIONS": ["The", "a"]}
        )
        assert config.window == 3
        assert config.top_ks == (10, 20)
        assert config.article_exclusions == ("a", "the")
        assert not config.matches_reference()

    def test_updated(self):
        config = RunConfig().updated(window=None, min_frequency=5, sentence_boundaries=True)
        assert config.window == 2
        assert config.min_frequency == 5
        assert config.preprocess.sentence_boundaries
        assert config.collocation_settings.sentence_boundaries

    @pytest.mark.parametrize(
        "changes",
        [
            {"window": 0},
            {"min_frequency": -1},
            {"top_ks": (100, 50)},
            {"top_ks": ()},
            {"anchors": ("because",)},
            {"workers": 0},
            {"intersection_k": 0},
        ],
    )
    def test_invalid(self, changes):
        with pytest.raises(ValueError):
            RunConfig(**changes)

    def test_fingerprint(self):
        config = RunConfig()
        assert config.fingerprint().startswith("w2-f10-k50.100.150.200-")
        assert config.fingerprint() == RunConfig(workers=4).fingerprint()
        assert config.fingerprint() == RunConfig(output_directory="x").fingerprint()
        assert config.fingerprint() != RunConfig(deduplicate_per_comment=True).fingerprint()
        assert RunConfig(min_frequency=5).fingerprint().startswith("w2-f5-")

    def test_custom_lexicon(self, tmp_path):
        path = tmp_path / "cues.tsv"
        path.write_text("# version: tiny\nas\tCausality\n", encoding="utf-8")
        assert RunConfig(lexicon_path=str(path)).load_lexicon().version == "tiny"


class TestPipeline:
    def run(self, planted, directory, **changes):
        config = RunConfig(output_directory=str(directory)).updated(**changes)
        return run_pipeline(config, planted.comments)

    def test_planted_study(self, planted, tmp_path):
        out = tmp_path / "out"
        result = self.run(planted, out)

        assert [p.project for p in result.projects] == ["alpha", "beta/core"]
        assert [p.directory.name for p in result.projects] == ["alpha", "beta-core"]
        assert result.intersection == set(STUDY_KEYWORDS)

        for project_result in result.projects:
            expected = planted.projects[project_result.project]
            assert dict(project_result.table.counts) == expected.counts
            assert project_result.ranked.words == expected.ranked
            for point in project_result.report.series:
                assert point.rate == len(expected.hits(point.k)) / point.k

        alpha = out / "alpha"
        ranked_lines = (alpha / "ranked.csv").read_text(encoding="utf-8").splitlines()
        assert ranked_lines[:3] == ["rank,word,count", "1,as,219", "2,zzaa,218"]
        assert len(ranked_lines) == 1 + 210

        all_lines = (alpha / "collocations.csv").read_text(encoding="utf-8").splitlines()
        assert all_lines[0] == "word,count"
        assert all_lines[-2:] == ["nevertheless,9", "zzzbelow,9"]

        summary = read_json(alpha / "collocations.json")
        assert summary["excluded_pairs"] == 14
        assert summary["qualifying_words"] == 210
        assert summary["distinct_words"] == 212
        assert summary["total_pairs"] == sum(planted.projects["alpha"].counts.values()) + 14

        inclusion = read_json(alpha / "inclusion.json")
        assert inclusion["report"]["series"][0]["rate"] == 0.22
        assert inclusion["categories"]["50"]["Causality"] >= 1

        rows = read_figure_data(out / "figure.csv")
        assert rows[:4] == [
            ("alpha", 50, 11 / 50),
            ("alpha", 100, 16 / 100),
            ("alpha", 150, 19 / 150),
            ("alpha", 200, 21 / 200),
        ]
        assert rows[4:] == [
            ("beta/core", 50, 9 / 50),
            ("beta/core", 100, 11 / 100),
            ("beta/core", 150, 12 / 150),
            ("beta/core", 200, 13 / 200),
        ]
        assert read_figure_data(out / "beta-core" / "figure.csv") == rows[4:]

        manifest = read_json(out / "manifest.json")
        assert manifest["reference_settings"] is True
        assert manifest["config_fingerprint"].startswith("w2-f10-k50.100.150.200-")
        assert manifest["lexicon_version"] == "knott-dale-cues-1"
        assert manifest["intersection"] == {"k": 200, "keywords": STUDY_KEYWORDS}
        assert manifest["projects"]["beta/core"]["directory"] == "beta-core"
        assert manifest["corpus"]["comment_count"] == len(planted.comments)
        widespread = [
            entry["word"] for entry in manifest["collocated_keywords"] if entry["projects"] == 2
        ]
        assert widespread == STUDY_KEYWORDS

    def test_outputs_are_reproducible(self, planted, tmp_path):
        self.run(planted, tmp_path / "first")
        self.run(planted, tmp_path / "second")
        self.run(planted, tmp_path / "parallel", workers=2)
        first = tree(tmp_path / "first")
        assert first == tree(tmp_path / "second")
        assert first == tree(tmp_path / "parallel")

    @pytest.mark.filterwarnings("ignore::reviewcues.utils.ShortRankingWarning")
    def test_single_project_has_no_intersection(self, tmp_path):
        config = RunConfig(output_directory=str(tmp_path))
        comments = [Comment("1", "solo", "why not use foo_bar here")]
        result = run_pipeline(config, comments)
        assert result.intersection is None
        assert read_json(tmp_path / "manifest.json")["intersection"] is None

    @pytest.mark.filterwarnings("ignore::reviewcues.utils.ShortRankingWarning")
    def test_colliding_directories(self, tmp_path):
        config = RunConfig(output_directory=str(tmp_path))
        comments = [Comment("1", "a/b", "x foo_bar"), Comment("2", "a-b", "y foo_bar")]
        result = run_pipeline(config, comments)
        assert {p.project: p.directory.name for p in result.projects} == {
            "a-b": "a-b",
            "a/b": "a-b-2",
        }

    @pytest.mark.filterwarnings("ignore::reviewcues.utils.ShortRankingWarning")
    def test_empty_corpus(self, tmp_path):
        result = run_pipeline(RunConfig(output_directory=str(tmp_path)), [])
        assert result.projects == []
        assert (tmp_path / "figure.csv").read_text(encoding="utf-8") == "project,K,rate\n"

    def test_unwritable_output(self, planted, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("", encoding="utf-8")
        with pytest.raises(ReportWriteError, match="blocker"):
            self.run(planted, blocker / "out")
