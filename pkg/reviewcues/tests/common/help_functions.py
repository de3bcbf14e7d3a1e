"""Synthetic review corpora with known collocation counts."""

from dataclasses import dataclass, field
import random
import string

from reviewcues.preprocessing import Comment

DEFAULT_SEED = 20180527

# each one preprocesses to exactly one CODETOK
CODE_SNIPPETS = (
    "get_partner_config",
    "parseHttpHeader",
    "os.path.join",
    "render()",
    "`x = 1`",
    "None",
    "CODETOK",
)

# no code placeholder, so no pairs
NOISE = (
    "Thanks!",
    "nit: spacing",
    "Looks good to me, see https://example.org/review/1 for context.",
    "Updated docs/guide/install.rst accordingly.",
    "Done",
)

ALPHA_CUES = {
    1: "as",
    4: "if",
    8: "not",
    12: "for",
    17: "so",
    22: "and",
    28: "also",
    33: "instead",
    39: "when",
    44: "because",
    50: "but",
    55: "however",
    63: "since",
    71: "unless",
    80: "although",
    99: "then",
    120: "or",
    133: "only",
    149: "like",
    160: "while",
    200: "whereas",
}

BETA_CUES = {
    2: "as",
    5: "if",
    9: "not",
    14: "for",
    20: "so",
    26: "and",
    31: "also",
    37: "instead",
    45: "when",
    60: "though",
    90: "thus",
    140: "yet",
    190: "hence",
    205: "because",
}

# (word, count) pairs below the default frequency filter of 10
BELOW_FILTER = (("nevertheless", 9), ("zzzbelow", 9))


def filler_words(n, prefix):
    letters = string.ascii_lowercase
    return [f"{prefix}{letters[i // 26]}{letters[i % 26]}" for i in range(n)]


@dataclass
class PlantedProject:
    name: str
    comments: list
    counts: dict
    ranked: list
    excluded_pairs: int
    cue_ranks: dict = field(default_factory=dict)

    def hits(self, k):
        return [word for rank, word in sorted(self.cue_ranks.items()) if rank <= k]


@dataclass
class PlantedCorpus:
    projects: dict
    seed: int

    @property
    def comments(self):
        return [c for project in self.projects.values() for c in project.comments]


def planted_project(
    name,
    cue_ranks,
    rng,
    ranked_size=210,
    below_filter=BELOW_FILTER,
    article_comments=7,
    noise_comments=25,
    filler_prefix="zz",
):
    """One project whose word at rank r has 10 + ranked_size - r pairs.

    Words are dealt in groups of four around a code snippet
    (``w1 w2 <code> w3 w4``), so every word sits within distance two of
    exactly one placeholder.
    """
    fillers = iter(filler_words(ranked_size, filler_prefix))
    ranked = []
    counts = {}
    for rank in range(1, ranked_size + 1):
        word = cue_ranks.get(rank) or next(fillers)
        ranked.append(word)
        counts[word] = 10 + ranked_size - rank
    for word, count in below_filter:
        counts[word] = count

    bag = [word for word, count in counts.items() for _ in range(count)]
    rng.shuffle(bag)

    messages = []
    for start in range(0, len(bag), 4):
        group = bag[start : start + 4]
        snippet = rng.choice(CODE_SNIPPETS)
        messages.append(" ".join(group[:2] + [snippet] + group[2:]))
    for _ in range(article_comments):
        messages.append(f"a {rng.choice(CODE_SNIPPETS)} an")
    for _ in range(noise_comments):
        messages.append(rng.choice(NOISE))
    rng.shuffle(messages)

    comments = [
        Comment(id=f"{name}-{n}", project=name, message=message)
        for n, message in enumerate(messages)
    ]
    return PlantedProject(
        name=name,
        comments=comments,
        counts=counts,
        ranked=ranked,
        excluded_pairs=2 * article_comments,
        cue_ranks=dict(cue_ranks),
    )


def planted_corpus(seed=DEFAULT_SEED):
    rng = random.Random(seed)
    projects = {
        "alpha": planted_project("alpha", ALPHA_CUES, rng),
        "beta/core": planted_project("beta/core", BETA_CUES, rng, filler_prefix="zy"),
    }
    return PlantedCorpus(projects=projects, seed=seed)
