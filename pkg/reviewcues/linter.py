"""Write-time feedback on a single review comment.

The linter never blocks: it reports which coherence cues a comment uses,
whether they sit next to the code it references, and raises advice when a
comment asks for a change without giving a reason.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

from reviewcues.collocations import (
    DEFAULT_EXCLUSIONS,
    DEFAULT_WINDOW,
    extract_pairs,
    window_positions,
)
from reviewcues.lexicon import Category, default_lexicon
from reviewcues.preprocessing import (
    CODETOK,
    DEFAULT_CONFIG,
    PLACEHOLDERS,
    PreprocessConfig,
    preprocess,
)
from reviewcues.utils import list_of_dicts2json

DEFAULT_MODAL_WORDS = (
    "should",
    "may",
    "might",
    "could",
    "would",
    "must",
    "shall",
    "please",
    "maybe",
)
DEFAULT_RATIONALE_CATEGORIES = frozenset(
    {Category.CAUSALITY, Category.HYPOTHESIS, Category.CONTRAST}
)


class Severity(Enum):
    INFO = "info"
    ADVICE = "advice"

    def __str__(self):
        return self.value


class CueMatch(NamedTuple):
    start: int
    end: int
    phrase: str
    category: Category


@dataclass(frozen=True)
class LintFinding:
    rule: str
    severity: Severity
    # inclusive token index range
    span: tuple
    category: Category = None
    message: str = ""

    @property
    def _to_serialize(self):
        return {
            "rule": self.rule,
            "severity": self.severity.value,
            "span": list(self.span),
            "category": self.category.value if self.category else None,
            "message": self.message,
        }


@dataclass(frozen=True)
class LintReport:
    comment_id: str
    findings: tuple
    cue_categories_present: frozenset
    code_refs: int
    code_cue_collocations: int
    modal_requests: int
    rationale_flag: bool
    tokens: tuple = ()

    def by_rule(self, rule):
        return [finding for finding in self.findings if finding.rule == rule]

    @property
    def _to_serialize(self):
        return {
            "comment_id": self.comment_id,
            "findings": list(self.findings),
            "cue_categories_present": sorted(
                category.value for category in self.cue_categories_present
            ),
            "code_refs": self.code_refs,
            "code_cue_collocations": self.code_cue_collocations,
            "modal_requests": self.modal_requests,
            "rationale_flag": self.rationale_flag,
            "tokens": list(self.tokens),
        }

    def to_json(self):
        return list_of_dicts2json(self)


@dataclass(frozen=True)
class LintSettings:
    window: int = DEFAULT_WINDOW
    exclusions: frozenset = DEFAULT_EXCLUSIONS
    modal_words: frozenset = frozenset(DEFAULT_MODAL_WORDS)
    rationale_categories: frozenset = DEFAULT_RATIONALE_CATEGORIES
    min_code_cue_collocations: int = 1
    preprocess: PreprocessConfig = field(default=DEFAULT_CONFIG)

    def __post_init__(self):
        if self.window < 1:
            raise ValueError(f"window distance must be at least 1, got {self.window}")
        if self.min_code_cue_collocations < 1:
            raise ValueError("MIN_CODE_CUE_COLLOCATIONS must be >= 1")
        object.__setattr__(
            self, "modal_words", frozenset(w.lower() for w in self.modal_words)
        )
        object.__setattr__(
            self,
            "rationale_categories",
            frozenset(Category.coerce(c) for c in self.rationale_categories),
        )

    @classmethod
    def from_mapping(cls, config):
        return cls(
            window=int(config.get("WINDOW", DEFAULT_WINDOW)),
            exclusions=frozenset(config.get("ARTICLE_EXCLUSIONS", DEFAULT_EXCLUSIONS)),
            modal_words=frozenset(config.get("MODAL_WORDS", DEFAULT_MODAL_WORDS)),
            rationale_categories=frozenset(
                config.get("RATIONALE_CATEGORIES", DEFAULT_RATIONALE_CATEGORIES)
            ),
            min_code_cue_collocations=int(config.get("MIN_CODE_CUE_COLLOCATIONS", 1)),
            preprocess=PreprocessConfig.from_mapping(config),
        )


DEFAULT_LINT_SETTINGS = LintSettings()


def detect_cues(stream, lexicon):
    """Cue phrases of ``stream`` as CueMatch items, in text order.

    Overlapping candidates are resolved longest first, then leftmost.
    """
    tokens = stream.tokens
    longest = lexicon.max_phrase_tokens
    candidates = []
    for start in range(len(tokens)):
        for length in range(min(longest, len(tokens) - start), 0, -1):
            words = tokens[start : start + length]
            if any(word in PLACEHOLDERS for word in words):
                continue
            phrase = " ".join(words)
            category = lexicon.lookup(phrase)
            if category is not None:
                candidates.append(
                    CueMatch(start, start + length - 1, phrase, category)
                )

    candidates.sort(key=lambda match: (match.start - match.end, match.start))
    taken = set()
    chosen = []
    for match in candidates:
        covered = range(match.start, match.end + 1)
        if taken.intersection(covered):
            continue
        taken.update(covered)
        chosen.append(match)
    return sorted(chosen)


def detect_modal_requests(stream, modal_words=DEFAULT_MODAL_WORDS):
    """Spans of the modal and request words of ``stream``."""
    modal_words = {word.lower() for word in modal_words}
    return [(i, i) for i, token in enumerate(stream.tokens) if token in modal_words]


def _cue_message(match):
    return f"'{match.phrase}' signals {match.category.value.lower()}"


def lint(comment, lexicon=None, settings=DEFAULT_LINT_SETTINGS):
    """Findings and rationale signal for one comment."""
    if lexicon is None:
        lexicon = default_lexicon()
    stream = preprocess(comment, settings.preprocess)
    tokens = stream.tokens
    cue_words = lexicon.single_word_set()
    sentence_boundaries = settings.preprocess.sentence_boundaries
    findings = []

    cues = detect_cues(stream, lexicon)
    for match in cues:
        findings.append(
            LintFinding(
                rule="coherence-cue",
                severity=Severity.INFO,
                span=(match.start, match.end),
                category=match.category,
                message=_cue_message(match),
            )
        )

    partners = extract_pairs(
        stream,
        window=settings.window,
        exclusions=settings.exclusions,
        sentence_boundaries=sentence_boundaries,
    )
    code_cue_collocations = sum(1 for word in partners if word in cue_words)

    explained = set()
    near_code = set()
    for i, j in window_positions(stream, settings.window, sentence_boundaries):
        if tokens[j] in cue_words and tokens[j] not in settings.exclusions:
            explained.add(i)
            near_code.add(j)
    for j in sorted(near_code):
        category = lexicon.lookup(tokens[j])
        findings.append(
            LintFinding(
                rule="cue-near-code",
                severity=Severity.INFO,
                span=(j, j),
                category=category,
                message=f"'{tokens[j]}' ({category.value.lower()})"
                " is next to a code reference",
            )
        )

    modals = detect_modal_requests(stream, settings.modal_words)
    for span in modals:
        findings.append(
            LintFinding(
                rule="modal-request",
                severity=Severity.INFO,
                span=span,
                message=f"'{tokens[span[0]]}' phrases a request",
            )
        )

    code_positions = [i for i, token in enumerate(tokens) if token == CODETOK]
    for i in code_positions:
        if i not in explained:
            findings.append(
                LintFinding(
                    rule="unexplained-code-reference",
                    severity=Severity.ADVICE,
                    span=(i, i),
                    message="code reference without a coherence cue next to it;"
                    " consider saying why it matters (e.g. 'because', 'if', 'instead')",
                )
            )

    categories = frozenset(match.category for match in cues)
    rationale_flag = code_cue_collocations >= settings.min_code_cue_collocations or bool(
        categories & settings.rationale_categories
    )
    if not rationale_flag and tokens:
        findings.append(
            LintFinding(
                rule="missing-rationale",
                severity=Severity.ADVICE,
                span=(0, len(tokens) - 1),
                message="the comment gives no reason for the change it asks for",
            )
        )

    findings.sort(key=lambda finding: (finding.span[0], finding.span[1], finding.rule))
    return LintReport(
        comment_id=comment.id,
        findings=tuple(findings),
        cue_categories_present=categories,
        code_refs=len(code_positions),
        code_cue_collocations=code_cue_collocations,
        modal_requests=len(modals),
        rationale_flag=rationale_flag,
        tokens=tokens,
    )


def format_diagnostics(report):
    """One ``id:start-end: severity [rule] message`` line per finding."""
    return [
        f"{report.comment_id}:{finding.span[0]}-{finding.span[1]}:"
        f" {finding.severity} [{finding.rule}] {finding.message}"
        for finding in report.findings
    ]
