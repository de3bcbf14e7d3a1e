# Verbose and documented settings are in conf-templates/reviewcues.cfg.j2
DEBUG = False

LEXICON_PATH = None
WINDOW = 2
MIN_FREQUENCY = 10
TOP_KS = [50, 100, 150, 200]
INTERSECTION_K = 200
ARTICLE_EXCLUSIONS = ["a", "an"]
ANCHOR_PLACEHOLDERS = ["CODETOK"]
DEDUPLICATE_PER_COMMENT = False
OUTPUT_DIRECTORY = "reviewcues-output"
WORKERS = 1

SIGNATURE_KEYS = [
    "Author-Id",
    "Signed-off-by",
    "Change-Id",
    "Reviewed-by",
    "Reviewed-on",
    "Tested-by",
    "Acked-by",
    "Co-authored-by",
    "Cc",
]
VOTE_LABELS = ["Verified", "Code-Review", "Workflow", "Commit-Queue"]
CODE_DETECTORS = {
    "backticks": True,
    "calls": True,
    "snake_case": True,
    "camel_case": True,
    "dotted": True,
    "literals": True,
}
CODE_LITERALS = ["None", "null", "nullptr", "true", "false"]
REPLACE_CODE_LINES = True
CODE_LINE_RATIO = 0.8
SENTENCE_BOUNDARIES = False

MODAL_WORDS = [
    "should",
    "may",
    "might",
    "could",
    "would",
    "must",
    "shall",
    "please",
    "maybe",
]
RATIONALE_CATEGORIES = ["Causality", "Hypothesis", "Contrast"]
MIN_CODE_CUE_COLLOCATIONS = 1

MALFORMED_RECORD_TOLERANCE = 0.10

GERRIT_PAGE_SIZE = 100
GERRIT_MAX_CONCURRENCY = 4
GERRIT_MAX_ATTEMPTS = 5
GERRIT_BACKOFF = 0.5
GERRIT_TIMEOUT = 30
GERRIT_SKIP_AUTOGENERATED = True
