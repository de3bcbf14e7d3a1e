import csv
from enum import Enum
import hashlib
from io import StringIO
from json import JSONEncoder, dumps
import re
import unicodedata

from flask import current_app
import jinja2

from reviewcues.lexicon import default_lexicon, load_lexicon


class ReviewCuesWarning(UserWarning):
    """Base class of the warnings emitted by reviewcues."""


class MalformedInputWarning(ReviewCuesWarning):
    """Input text or corpus records that could not be read as-is."""


class ShortRankingWarning(ReviewCuesWarning):
    """Fewer ranked words than the requested top-K."""


class PartialFetchWarning(ReviewCuesWarning):
    """A remote fetch stopped before the last page."""


def format_warning(message, category, filename, lineno, line=None):
    """Line-oriented replacement for warnings.formatwarning"""
    if issubclass(category, ReviewCuesWarning):
        return f"reviewcues: warning: {message}\n"
    return f"reviewcues: {category.__name__}: {message}\n"


def slugify(value):
    """Normalizes string, converts to lowercase, removes non-alpha characters,
    and converts spaces and slashes to hyphens.

    Gerrit project names are paths (``platform/frameworks/base``), so slashes
    become separators instead of vanishing.
    """
    value = unicodedata.normalize("NFKD", str(value))
    value = re.sub(r"[/\\]+", "-", value)
    value = str(re.sub(r"[^\w\s-]", "", value).strip().lower())
    return re.sub(r"[-\s]+", "-", value).strip("-") or "project"


def escape_csv_formulae(value):
    # See https://owasp.org/www-community/attacks/CSV_Injection
    if (
        value
        and isinstance(value, str)
        and value[0] in ["=", "+", "-", "@", "\t", "\n"]
    ):
        return f"'{value}"
    return value


def unescape_csv_formulae(value):
    if (
        value
        and isinstance(value, str)
        and len(value) > 1
        and value[0] == "'"
        and value[1] in ["=", "+", "-", "@", "\t", "\n"]
    ):
        return value[1:]
    return value


def fingerprint(settings, prefix=None):
    """Short stable digest of a JSON-serializable settings mapping."""
    payload = dumps(settings, cls=ReviewCuesJSONEncoder, sort_keys=True)
    digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()[:12]
    return f"{prefix}-{digest}" if prefix else digest


def list_of_dicts2csv(dict_to_convert, fieldnames):
    """Take a list of dictionnaries and turns it into a csv string.

    The header is always written, so an empty list gives a header-only file.
    """
    csv_file = StringIO()
    writer = csv.writer(csv_file, lineterminator="\n")
    writer.writerow(fieldnames)
    for dic in dict_to_convert:
        writer.writerow([escape_csv_formulae(dic[h]) for h in fieldnames])
    return csv_file.getvalue()


def list_of_dicts2json(dict_to_convert):
    """Stable JSON rendering: sorted keys, two spaces, trailing newline."""
    return (
        dumps(dict_to_convert, cls=ReviewCuesJSONEncoder, indent=2, sort_keys=True)
        + "\n"
    )


def write_text(path, content):
    """Write text as UTF-8 with unix newlines, creating parent folders."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(content)


def create_jinja_env(folder, strict_rendering=False):
    """Creates and return a Jinja2 Environment object, used, to load the
    templates.

    :param strict_rendering:
        if set to `True`, all templates which use an undefined variable will
        throw an exception (default to `False`).
    """
    loader = jinja2.PackageLoader("reviewcues", folder)
    kwargs = {"loader": loader, "keep_trailing_newline": True}
    if strict_rendering:
        kwargs["undefined"] = jinja2.StrictUndefined
    return jinja2.Environment(**kwargs)


class ReviewCuesJSONEncoder(JSONEncoder):
    """Subclass of the default encoder to support custom objects."""

    def default(self, o):
        if hasattr(o, "_to_serialize"):
            return o._to_serialize
        elif isinstance(o, (set, frozenset)):
            return sorted(o)
        elif isinstance(o, Enum):
            return o.value
        return JSONEncoder.default(self, o)


def get_lexicon(app=None):
    """The lexicon named by LEXICON_PATH, loaded once per application."""
    app = app or current_app
    lexicon = app.extensions.get("reviewcues.lexicon")
    if lexicon is None:
        path = app.config.get("LEXICON_PATH")
        lexicon = load_lexicon(path) if path else default_lexicon()
        app.extensions["reviewcues.lexicon"] = lexicon
    return lexicon
