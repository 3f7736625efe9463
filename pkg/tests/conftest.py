import random
import string

import numpy as np
import pytest

from tweetinfo.dataset import Corpus, Label, Tweet
from tweetinfo.features import SparseVector


def fuzz_strings(count, seed=2024):
    """Mixed-alphabet random strings: letters, digits, punctuation,
    whitespace, accented/CJK letters, and dictionary emoji."""
    rng = random.Random(seed)
    pool = (
        string.ascii_letters
        + string.digits
        + string.punctuation
        + "     \t"
        + "éñüß中日"
        + "😀😂😷🤒🙏❤️🔥⚠️"
    )
    for _ in range(count):
        yield "".join(rng.choice(pool) for _ in range(rng.randint(0, 60)))


def random_tiny_problem(seed):
    """Random 2-d points with both classes, 4..12 samples."""
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(4, 13))
    points = rng.normal(size=(n, 2))
    y = np.ones(n)
    y[: n // 2] = -1.0
    rng.shuffle(y)
    if np.all(y > 0) or np.all(y < 0):
        y[0] = -y[0]
    vectors = [make_vec(*row) for row in points]
    labels = [Label.INFORMATIVE if v > 0 else Label.UNINFORMATIVE for v in y]
    return points, y, vectors, labels


def make_vec(*coords) -> SparseVector:
    idx = [i for i, c in enumerate(coords) if c != 0.0]
    val = [c for c in coords if c != 0.0]
    return SparseVector(np.array(idx, dtype=np.int64), np.array(val, dtype=np.float64), len(coords))


def make_corpus(rows) -> Corpus:
    """rows: (id, text) or (id, text, label) tuples."""
    entries = []
    for row in rows:
        if len(row) == 2:
            entries.append((Tweet(row[0], row[1]), None))
        else:
            entries.append((Tweet(row[0], row[1]), row[2]))
    return Corpus(tuple(entries))


@pytest.fixture
def toy_labeled_corpus():
    return make_corpus(
        [
            ("1", "covid cases rise in the city", Label.INFORMATIVE),
            ("2", "new covid deaths reported today", Label.INFORMATIVE),
            ("3", "confirmed cases rise again", Label.INFORMATIVE),
            ("4", "travel history of confirmed cases", Label.INFORMATIVE),
            ("5", "lol great party last night", Label.UNINFORMATIVE),
            ("6", "my cat is so funny", Label.UNINFORMATIVE),
            ("7", "great weather for a party", Label.UNINFORMATIVE),
            ("8", "funny cat videos all night", Label.UNINFORMATIVE),
        ]
    )
