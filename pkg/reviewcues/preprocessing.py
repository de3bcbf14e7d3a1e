"""Turn raw review messages into token streams.

No stemming and no stop-word removal happen here: function words are the
very cues the study looks for. Non natural-language spans are replaced by
fixed placeholders, identical across all comments.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache, partial
import re
import warnings

from reviewcues.utils import MalformedInputWarning

CODETOK = "CODETOK"
URLTOK = "URLTOK"
PATHTOK = "PATHTOK"
PLACEHOLDERS = frozenset({CODETOK, URLTOK, PATHTOK})

DEFAULT_SIGNATURE_KEYS = (
    "Author-Id",
    "Signed-off-by",
    "Change-Id",
    "Reviewed-by",
    "Reviewed-on",
    "Tested-by",
    "Acked-by",
    "Co-authored-by",
    "Cc",
)
DEFAULT_VOTE_LABELS = ("Verified", "Code-Review", "Workflow", "Commit-Queue")
DEFAULT_CODE_LITERALS = ("None", "null", "nullptr", "true", "false")
DEFAULT_CODE_DETECTORS = {
    "backticks": True,
    "calls": True,
    "snake_case": True,
    "camel_case": True,
    "dotted": True,
    "literals": True,
}

_EDGES_RE = re.compile(r"^(\W*)(.*?)(\W*)$", re.DOTALL)
_SENTENCE_END_RE = re.compile(r"[.!?]")
_URI_RE = re.compile(r"\b(?:https?|ftp|ssh|git)://\S+", re.IGNORECASE)
_PATH_CANDIDATE_RE = re.compile(r"\S*/\S*")
_PATH_LEAD_RE = re.compile(r"[~./@+-]*$")
_PATH_TRAIL_RE = re.compile(r"^/*")
_PATH_SUFFIX_RE = re.compile(r"(?::\d+(?::\d+)?|#\S*)$")
_PATH_BODY_RE = re.compile(r"(?:[\w.@+-]+/)*[\w.@+-]+")
_EXTENSION_RE = re.compile(r"[^/]\.[A-Za-z0-9]{1,10}$")
_BACKTICK_RE = re.compile(r"(?<!\w)`+([^`\n]+?)`+(?!\w)")
_CALL_RE = re.compile(r"(?<![\w.])[A-Za-z_][\w.]*\((?!s\))[^()\n]*\)")
_SNAKE_RE = re.compile(r"[^\W_]_+[^\W_]|^_+[^\W\d_]")
_HUMP_RE = re.compile(r"[a-z0-9][A-Z]")
_IDENTIFIER_RE = re.compile(r"^_?[A-Za-z][A-Za-z0-9]*$")
_DOTTED_RE = re.compile(r"^[A-Za-z_]\w*(?:\.[A-Za-z_]\w*){2,}$")
_SYNTAX_CHUNK_RE = re.compile(r"^[{}()\[\];=<>+\-*/%&|^~]+$|[;{}]$")


def _split_edges(chunk):
    """Split a whitespace-free chunk into (leading, core, trailing)
    punctuation. Internal characters stay in the core."""
    return _EDGES_RE.match(chunk).groups()


@dataclass(frozen=True)
class Comment:
    id: str
    project: str
    message: str

    @property
    def _to_serialize(self):
        return {"id": self.id, "project": self.project, "message": self.message}


@dataclass(frozen=True)
class TokenStream:
    comment_id: str
    project: str
    tokens: tuple
    # indices of tokens closing a sentence
    sentence_ends: frozenset = field(default_factory=frozenset)

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, index):
        return self.tokens[index]

    @property
    def _to_serialize(self):
        return {
            "id": self.comment_id,
            "project": self.project,
            "tokens": list(self.tokens),
            "sentence_ends": sorted(self.sentence_ends),
        }


@dataclass(frozen=True)
class PreprocessConfig:
    signature_keys: tuple = DEFAULT_SIGNATURE_KEYS
    vote_labels: tuple = DEFAULT_VOTE_LABELS
    detect_backticks: bool = True
    detect_calls: bool = True
    detect_snake_case: bool = True
    detect_camel_case: bool = True
    detect_dotted: bool = True
    detect_literals: bool = True
    code_literals: tuple = DEFAULT_CODE_LITERALS
    replace_code_lines: bool = True
    code_line_ratio: float = 0.8
    sentence_boundaries: bool = False

    @classmethod
    def from_mapping(cls, config):
        """Build from the upper-case settings of an app config."""
        detectors = dict(DEFAULT_CODE_DETECTORS)
        detectors.update(config.get("CODE_DETECTORS") or {})
        unknown = set(detectors) - set(DEFAULT_CODE_DETECTORS)
        if unknown:
            raise ValueError(f"unknown code detectors: {', '.join(sorted(unknown))}")
        return cls(
            signature_keys=tuple(
                config.get("SIGNATURE_KEYS", DEFAULT_SIGNATURE_KEYS)
            ),
            vote_labels=tuple(config.get("VOTE_LABELS", DEFAULT_VOTE_LABELS)),
            detect_backticks=bool(detectors["backticks"]),
            detect_calls=bool(detectors["calls"]),
            detect_snake_case=bool(detectors["snake_case"]),
            detect_camel_case=bool(detectors["camel_case"]),
            detect_dotted=bool(detectors["dotted"]),
            detect_literals=bool(detectors["literals"]),
            code_literals=tuple(config.get("CODE_LITERALS", DEFAULT_CODE_LITERALS)),
            replace_code_lines=bool(config.get("REPLACE_CODE_LINES", True)),
            code_line_ratio=float(config.get("CODE_LINE_RATIO", 0.8)),
            sentence_boundaries=bool(config.get("SENTENCE_BOUNDARIES", False)),
        )

    def as_dict(self):
        return asdict(self)


DEFAULT_CONFIG = PreprocessConfig()


@lru_cache(maxsize=32)
def _signature_matchers(keys, labels):
    vote_re = None
    if labels:
        vote_re = re.compile(
            r"^(?:" + "|".join(re.escape(label) for label in labels) + r")[+-]\d+$",
            re.IGNORECASE,
        )
    return frozenset(k.lower() for k in keys), vote_re


@lru_cache(maxsize=32)
def _literal_sets(literals):
    # entries with upper-case letters match exactly, lower-case ones in any case
    exact = frozenset(lit for lit in literals if lit != lit.lower())
    folded = frozenset(lit for lit in literals if lit == lit.lower())
    return exact, folded


def _leading_chunk(line):
    for chunk in line.split():
        _, core, trail = _split_edges(chunk)
        if core:
            return core, trail
    return None, None


def _is_trailer(core, trail, keys):
    """``Key:`` or ``Key:value``, a bare key is prose."""
    if trail.startswith(":") and core.lower() in keys:
        return True
    key, colon, _ = core.partition(":")
    return bool(colon) and key.lower() in keys


def strip_signatures(message, config=DEFAULT_CONFIG):
    """Drop lines that start with a ``Key:`` signature trailer or a review vote."""
    keys, vote_re = _signature_matchers(config.signature_keys, config.vote_labels)
    kept = []
    for line in message.split("\n"):
        core, trail = _leading_chunk(line)
        if core is not None:
            if _is_trailer(core, trail, keys):
                continue
            if vote_re is not None and vote_re.match(core):
                continue
        kept.append(line)
    return "\n".join(kept)


def _padded(match, replacement):
    text, start, end = match.string, match.start(), match.end()
    if start > 0 and (text[start - 1].isalnum() or text[start - 1] == "_"):
        replacement = " " + replacement
    if end < len(text) and (text[end].isalnum() or text[end] == "_"):
        replacement = replacement + " "
    return replacement


def _path_edges(chunk):
    """The (leading, trailing) text around the path in a chunk, or None when
    the chunk holds no path.

    A ``:line[:column]`` or ``#anchor`` suffix belongs to the path.
    """
    lead, core, trail = _split_edges(chunk)
    if not core or core in PLACEHOLDERS or "://" in core:
        return None
    body = _PATH_SUFFIX_RE.sub("", core, count=1)
    if not _PATH_BODY_RE.fullmatch(body):
        return None
    prefix = _PATH_LEAD_RE.search(lead).group(0)
    slashes = _PATH_TRAIL_RE.match(trail).group(0)
    path = prefix + body + slashes
    if "/" in path and (path.count("/") >= 2 or _EXTENSION_RE.search(body)):
        return lead[: len(lead) - len(prefix)], trail[len(slashes) :]
    return None


def looks_like_path(chunk):
    """Whether a whitespace-free chunk holds a file system path."""
    return _path_edges(chunk) is not None


def _replace_path(match):
    chunk = match.group(0)
    edges = _path_edges(chunk)
    if edges is None:
        return chunk
    lead, trail = edges
    return f"{lead}{PATHTOK}{trail}"


def _replace_backticks(match):
    content = match.group(1).split()
    if content and all(token in PLACEHOLDERS for token in content):
        return _padded(match, " ".join(content))
    return _padded(match, CODETOK)


def _replace_call(match):
    return _padded(match, CODETOK)


def is_code_token(core, config=DEFAULT_CONFIG):
    """Whether a punctuation-stripped chunk looks like source code."""
    if not core or core in PLACEHOLDERS:
        return False
    if config.detect_literals:
        exact, folded = _literal_sets(config.code_literals)
        if core in exact or core.lower() in folded:
            return True
    if core.isalpha() and core.islower():
        return False
    if config.detect_snake_case and "_" in core and _SNAKE_RE.search(core):
        return any(c.isalpha() for c in core)
    if (
        config.detect_camel_case
        and _IDENTIFIER_RE.match(core)
        and len(_HUMP_RE.findall(core)) >= 2
    ):
        return True
    if config.detect_dotted and core.count(".") >= 2 and _DOTTED_RE.match(core):
        return True
    return False


def _code_line(line, config):
    chunks = line.split()
    if len(chunks) < 2:
        return False
    syntax = 0
    code_like = 0
    for chunk in chunks:
        if _SYNTAX_CHUNK_RE.search(chunk):
            syntax += 1
            code_like += 1
        elif _split_edges(chunk)[1] == CODETOK:
            code_like += 1
    return syntax > 0 and code_like / len(chunks) >= config.code_line_ratio


def substitute_placeholders(message, config=DEFAULT_CONFIG):
    """Replace URIs, then paths, then code by their placeholders."""
    text = _URI_RE.sub(URLTOK, message)
    text = _PATH_CANDIDATE_RE.sub(_replace_path, text)

    if config.detect_backticks:
        text = _BACKTICK_RE.sub(_replace_backticks, text)
    if config.detect_calls:
        text = _CALL_RE.sub(_replace_call, text)

    def replace_chunk(match):
        chunk = match.group(0)
        # chunks split off by the call and backtick padding
        path_edges = _path_edges(chunk)
        if path_edges is not None:
            return PATHTOK.join(path_edges)
        lead, core, trail = _split_edges(chunk)
        if is_code_token(core, config):
            return f"{lead}{CODETOK}{trail}"
        return chunk

    text = re.sub(r"\S+", replace_chunk, text)

    if config.replace_code_lines:
        text = "\n".join(
            CODETOK if _code_line(line, config) else line for line in text.split("\n")
        )
    return text


def tokenize(message, project="", comment_id=""):
    """Whitespace tokenization. Leading and trailing punctuation is stripped,
    placeholders keep their case and every other token is lowercased."""
    tokens = []
    ends = set()
    for chunk in message.split():
        _, core, trail = _split_edges(chunk)
        if not core:
            if tokens and _SENTENCE_END_RE.search(chunk):
                ends.add(len(tokens) - 1)
            continue
        tokens.append(core if core in PLACEHOLDERS else core.lower())
        if _SENTENCE_END_RE.search(trail):
            ends.add(len(tokens) - 1)
    return TokenStream(
        comment_id=comment_id,
        project=project,
        tokens=tuple(tokens),
        sentence_ends=frozenset(ends),
    )


def preprocess(comment, config=DEFAULT_CONFIG):
    if "\ufffd" in comment.message:
        warnings.warn(
            f"comment {comment.id}: malformed UTF-8 replaced by U+FFFD",
            MalformedInputWarning,
        )
    text = strip_signatures(comment.message, config)
    text = substitute_placeholders(text, config)
    return tokenize(text, project=comment.project, comment_id=comment.id)


def preprocess_all(comments, config=DEFAULT_CONFIG, workers=1):
    """Preprocess every comment, in input order.

    With ``workers`` > 1 comments are spread over a process pool.
    """
    comments = list(comments)
    if workers <= 1 or len(comments) <= workers:
        return [preprocess(comment, config) for comment in comments]
    chunksize = max(1, len(comments) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(
            executor.map(partial(preprocess, config=config), comments, chunksize=chunksize)
        )


def render(stream):
    """Text form of a token stream, that preprocesses back to the same stream."""
    return " ".join(
        f"{token}." if i in stream.sentence_ends else token
        for i, token in enumerate(stream.tokens)
    )
