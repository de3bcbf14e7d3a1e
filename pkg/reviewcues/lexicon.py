"""Coherence cue vocabulary.

A lexicon file has one ``phrase<TAB>category`` entry per line; ``#`` lines
are comments and a ``# version: <id>`` comment names the lexicon.
"""

from dataclasses import dataclass, field
from enum import Enum
import hashlib
from pathlib import Path
import re

from cachetools import LRUCache, cached

DEFAULT_LEXICON_PATH = Path(__file__).parent / "data" / "cue_lexicon.tsv"

_VERSION_RE = re.compile(r"^#\s*version\s*:\s*(\S+)\s*$", re.IGNORECASE)


class Category(Enum):
    """Functionality of a coherence relation."""

    CAUSALITY = "Causality"
    CONTRAST = "Contrast"
    EXEMPLIFICATION = "Exemplification"
    CLARIFICATION = "Clarification"
    SIMILARITY = "Similarity"
    HYPOTHESIS = "Hypothesis"

    @classmethod
    def choices(cls):
        return [choice.value for choice in cls]

    @classmethod
    def coerce(cls, item):
        """Coerce a category name, in any case, into a Category"""
        if isinstance(item, cls):
            return item
        for choice in cls:
            if choice.value.lower() == str(item).strip().lower():
                return choice
        raise ValueError(item)

    def __str__(self):
        return self.value


class LexiconError(ValueError):
    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        location = ""
        if source is not None:
            location = f"{source}:"
        if line is not None:
            location += f"{line}:"
        super().__init__(f"{location} {message}" if location else message)


class DuplicatePhraseError(LexiconError):
    pass


class UnknownCategoryError(LexiconError):
    pass


class EmptyLexiconError(LexiconError):
    pass


def normalize_phrase(phrase):
    return " ".join(phrase.split()).lower()


@dataclass(frozen=True)
class CueEntry:
    phrase: str
    category: Category

    def __post_init__(self):
        phrase = normalize_phrase(self.phrase)
        if not phrase:
            raise LexiconError("cue phrase is empty")
        object.__setattr__(self, "phrase", phrase)
        object.__setattr__(self, "category", Category.coerce(self.category))

    @property
    def single_word(self):
        return " " not in self.phrase


@dataclass(frozen=True)
class CueLexicon:
    """Immutable set of cue entries, indexed by phrase."""

    entries: frozenset
    version: str
    _by_phrase: dict = field(init=False, repr=False, compare=False)
    _single_words: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_phrase = {}
        for entry in sorted(self.entries, key=lambda e: e.phrase):
            if entry.phrase in by_phrase:
                raise DuplicatePhraseError(f"duplicate phrase {entry.phrase!r}")
            by_phrase[entry.phrase] = entry
        object.__setattr__(self, "entries", frozenset(by_phrase.values()))
        object.__setattr__(self, "_by_phrase", by_phrase)
        object.__setattr__(
            self,
            "_single_words",
            frozenset(p for p, e in by_phrase.items() if e.single_word),
        )

    def __len__(self):
        return len(self._by_phrase)

    def __contains__(self, phrase):
        return self.lookup(phrase) is not None

    @property
    def max_phrase_tokens(self):
        return max((len(p.split(" ")) for p in self._by_phrase), default=0)

    def lookup(self, word):
        """Category of ``word`` (case-insensitive exact match), or None."""
        entry = self._by_phrase.get(word.lower())
        return entry.category if entry else None

    def single_word_set(self):
        return self._single_words

    def multi_word_entries(self):
        return sorted(
            (e for e in self.entries if not e.single_word), key=lambda e: e.phrase
        )

    def phrases(self, category):
        category = Category.coerce(category)
        return sorted(e.phrase for e in self.entries if e.category is category)

    def extended(self, entries, version=None):
        """A new lexicon with ``entries`` added."""
        return CueLexicon(
            entries=self.entries | frozenset(entries),
            version=version or f"{self.version}+{len(entries)}",
        )

    @property
    def _to_serialize(self):
        return {
            "version": self.version,
            "entries": [
                {
                    "phrase": e.phrase,
                    "category": e.category.value,
                    "single_word": e.single_word,
                }
                for e in sorted(self.entries, key=lambda e: e.phrase)
            ],
        }


def parse_lexicon(text, source=None):
    """Parse lexicon file contents into a CueLexicon."""
    entries = {}
    version = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            match = _VERSION_RE.match(line)
            if match and version is None:
                version = match.group(1)
            continue
        parts = raw.rstrip("\r\n").split("\t")
        parts = [p for p in parts if p.strip()]
        if len(parts) != 2:
            raise LexiconError(
                "expected 'phrase<TAB>category'", line=lineno, source=source
            )
        phrase, category_name = normalize_phrase(parts[0]), parts[1].strip()
        try:
            category = Category.coerce(category_name)
        except ValueError:
            raise UnknownCategoryError(
                f"unknown category {category_name!r}, expected one of "
                + ", ".join(Category.choices()),
                line=lineno,
                source=source,
            )
        if phrase in entries:
            raise DuplicatePhraseError(
                f"duplicate phrase {phrase!r}", line=lineno, source=source
            )
        entries[phrase] = CueEntry(phrase, category)

    if not entries:
        raise EmptyLexiconError("empty lexicon", source=source)
    if version is None:
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        version = f"sha256:{digest[:12]}"
    return CueLexicon(entries=frozenset(entries.values()), version=version)


def load_lexicon(path):
    """Read a lexicon file. Raises LexiconError (or a subclass) on bad content
    and OSError when the file cannot be read."""
    path = Path(path)
    with open(path, encoding="utf-8") as f:
        return parse_lexicon(f.read(), source=path.name)


@cached(cache=LRUCache(maxsize=1))
def default_lexicon():
    """The lexicon shipped with the package."""
    return load_lexicon(DEFAULT_LEXICON_PATH)
