import json

import pytest

from reviewcues.collocations import extract_pairs
from reviewcues.lexicon import Category, default_lexicon
from reviewcues.linter import (
    CueMatch,
    LintSettings,
    Severity,
    detect_cues,
    detect_modal_requests,
    format_diagnostics,
    lint,
)
from reviewcues.preprocessing import CODETOK, Comment, TokenStream, preprocess

EXAMPLE = (
    "I don't think we need 2 ways to call get_partner_whitelabel_config "
    "as market_id is None by default"
)


def stream(*tokens):
    return TokenStream(comment_id="c", project="p", tokens=tuple(tokens))


def lint_message(message, **kwargs):
    return lint(Comment(id="c1", project="p", message=message), **kwargs)


class TestDetectCues:
    def test_multi_word_cue_wins(self):
        assert detect_cues(stream("for", "example", CODETOK), default_lexicon()) == [
            CueMatch(0, 1, "for example", Category.EXEMPLIFICATION)
        ]

    def test_single_word(self):
        assert detect_cues(stream("because"), default_lexicon()) == [
            CueMatch(0, 0, "because", Category.CAUSALITY)
        ]

    def test_no_cues(self):
        assert detect_cues(stream("banana", "apple"), default_lexicon()) == []

    def test_longest_match_first(self):
        matches = detect_cues(stream("as", "well", "as", "it"), default_lexicon())
        assert matches == [CueMatch(0, 2, "as well as", Category.SIMILARITY)]

    def test_placeholders_break_phrases(self):
        matches = detect_cues(stream("for", CODETOK, "example"), default_lexicon())
        assert [m.phrase for m in matches] == ["for"]

    def test_matches_are_in_text_order(self):
        matches = detect_cues(
            stream("if", "x", "then", "for", "instance", "but"), default_lexicon()
        )
        assert [(m.start, m.end) for m in matches] == [(0, 0), (2, 2), (3, 4), (5, 5)]


class TestDetectModalRequests:
    def test_should(self):
        assert detect_modal_requests(stream("you", "should", "rename", CODETOK)) == [
            (1, 1)
        ]

    def test_please(self):
        assert detect_modal_requests(stream("please")) == [(0, 0)]

    def test_none(self):
        assert detect_modal_requests(stream("i", "renamed", "it")) == []

    def test_custom_words(self):
        assert detect_modal_requests(stream("kindly", "fix"), ["Kindly"]) == [(0, 0)]


class TestLint:
    def test_justified_example(self):
        report = lint_message(EXAMPLE)
        assert report.code_refs == 3
        assert report.code_cue_collocations == 2
        assert report.cue_categories_present == {Category.CAUSALITY}
        assert report.modal_requests == 0
        assert report.rationale_flag
        assert [(f.rule, f.span) for f in report.findings] == [
            ("coherence-cue", (10, 10)),
            ("cue-near-code", (10, 10)),
            ("unexplained-code-reference", (13, 13)),
        ]
        cue = report.by_rule("cue-near-code")[0]
        assert cue.category is Category.CAUSALITY
        assert cue.severity is Severity.INFO
        assert report.by_rule("unexplained-code-reference")[0].severity is Severity.ADVICE

    def test_fix_this(self):
        report = lint_message("fix this")
        assert report.code_refs == 0
        assert report.cue_categories_present == frozenset()
        assert not report.rationale_flag
        assert [(f.rule, f.span) for f in report.findings] == [
            ("missing-rationale", (0, 1))
        ]

    def test_category_rule(self):
        report = lint_message("should work because PATHTOK changed")
        assert report.code_refs == 0
        assert report.code_cue_collocations == 0
        assert Category.CAUSALITY in report.cue_categories_present
        assert report.modal_requests == 1
        assert report.rationale_flag
        assert not report.by_rule("missing-rationale")

    def test_request_without_reason(self):
        report = lint_message("Please rename `foo` here.")
        assert report.code_refs == 1
        assert not report.rationale_flag
        rules = [f.rule for f in report.findings]
        assert rules == [
            "modal-request",
            "missing-rationale",
            "unexplained-code-reference",
        ]

    def test_empty_comment(self):
        report = lint_message("")
        assert report.findings == ()
        assert not report.rationale_flag

    def test_rationale_categories_are_configurable(self):
        settings = LintSettings(rationale_categories={"Exemplification"})
        report = lint_message("should work because PATHTOK changed", settings=settings)
        assert not report.rationale_flag
        assert report.by_rule("missing-rationale")

    def test_collocation_threshold(self):
        settings = LintSettings(rationale_categories=(), min_code_cue_collocations=3)
        assert not lint_message(EXAMPLE, settings=settings).rationale_flag
        settings = LintSettings(rationale_categories=(), min_code_cue_collocations=2)
        assert lint_message(EXAMPLE, settings=settings).rationale_flag

    def test_threshold_must_be_positive(self):
        with pytest.raises(ValueError):
            LintSettings(min_code_cue_collocations=0)

    def test_settings_from_mapping(self):
        settings = LintSettings.from_mapping(
            {
                "WINDOW": 3,
                "MODAL_WORDS": ["Should"],
                "RATIONALE_CATEGORIES": ["causality"],
                "CODE_DETECTORS": {"literals": False},
            }
        )
        assert settings.window == 3
        assert settings.modal_words == {"should"}
        assert settings.rationale_categories == {Category.CAUSALITY}
        assert not settings.preprocess.detect_literals

    def test_collocations_agree_with_extract_pairs(self):
        for message in (EXAMPLE, "if foo_bar then so as None", "nothing here"):
            report = lint_message(message)
            stream = preprocess(Comment("c1", "p", message))
            cues = default_lexicon().single_word_set()
            assert report.code_cue_collocations == sum(
                1 for word in extract_pairs(stream) if word in cues
            )

    def test_spans_match_their_phrase(self):
        report = lint_message("For example, use_this if needed, as well as that.")
        lexicon = default_lexicon()
        for finding in report.findings:
            if finding.category is None:
                continue
            start, end = finding.span
            phrase = " ".join(report.tokens[start : end + 1])
            assert lexicon.lookup(phrase) is finding.category

    def test_trailing_text_keeps_findings(self):
        base = lint_message(EXAMPLE)
        longer = lint_message(EXAMPLE + " banana apple")
        kept = {"coherence-cue", "cue-near-code", "modal-request"}
        assert {f for f in base.findings if f.rule in kept} <= set(longer.findings)

    def test_is_deterministic(self):
        assert lint_message(EXAMPLE) == lint_message(EXAMPLE)

    def test_json(self):
        data = json.loads(lint_message(EXAMPLE).to_json())
        assert data["comment_id"] == "c1"
        assert data["rationale_flag"] is True
        assert data["cue_categories_present"] == ["Causality"]
        assert data["findings"][0] == {
            "rule": "coherence-cue",
            "severity": "info",
            "span": [10, 10],
            "category": "Causality",
            "message": "'as' signals causality",
        }
        assert data["tokens"][9] == CODETOK

    def test_diagnostics(self):
        lines = format_diagnostics(lint_message(EXAMPLE))
        assert lines[0] == "c1:10-10: info [coherence-cue] 'as' signals causality"
        assert lines[2].startswith("c1:13-13: advice [unexplained-code-reference]")
