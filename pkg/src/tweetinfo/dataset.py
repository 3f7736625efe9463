"""Tweet corpora: loading, validation, stratified splitting, persistence.

Corpus files are UTF-8 TSV with LF line endings, one tweet per line:
``id<TAB>text`` for unlabeled corpora, ``id<TAB>text<TAB>label`` for labeled
ones.  Label tokens ``INFORMATIVE``/``1`` and ``UNINFORMATIVE``/``0`` are
both accepted; files are written with the symbolic names.
"""

from __future__ import annotations

import enum
import math
import random
from collections import Counter
from dataclasses import dataclass

from .errors import ParseError, ValidationError


class Label(enum.IntEnum):
    UNINFORMATIVE = 0
    INFORMATIVE = 1


_LABEL_TOKENS = {
    "INFORMATIVE": Label.INFORMATIVE,
    "1": Label.INFORMATIVE,
    "UNINFORMATIVE": Label.UNINFORMATIVE,
    "0": Label.UNINFORMATIVE,
}


def parse_label(token: str) -> Label:
    try:
        return _LABEL_TOKENS[token]
    except KeyError:
        raise ValidationError(
            f"unknown label {token!r} (expected INFORMATIVE/1 or UNINFORMATIVE/0)"
        ) from None


@dataclass(frozen=True)
class Tweet:
    id: str
    text: str


@dataclass(frozen=True)
class Corpus:
    """Ordered collection of tweets, either fully labeled or fully unlabeled."""

    entries: tuple[tuple[Tweet, Label | None], ...]

    def __post_init__(self):
        seen = set()
        n_labeled = 0
        for tweet, label in self.entries:
            if not tweet.id:
                raise ValidationError("tweet id must be non-empty")
            for field_name, value in (("id", tweet.id), ("text", tweet.text)):
                if "\t" in value or "\n" in value:
                    raise ValidationError(
                        f"tweet {field_name} may not contain tab or newline "
                        f"(id={tweet.id!r})"
                    )
            if tweet.id in seen:
                raise ValidationError(f"duplicate tweet id {tweet.id!r}")
            seen.add(tweet.id)
            if label is not None:
                n_labeled += 1
        if 0 < n_labeled < len(self.entries):
            raise ValidationError("corpus mixes labeled and unlabeled entries")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def is_labeled(self) -> bool:
        return len(self.entries) > 0 and self.entries[0][1] is not None

    @property
    def class_counts(self) -> Counter:
        return Counter(label for _, label in self.entries if label is not None)

    def tweets(self) -> list[Tweet]:
        return [tweet for tweet, _ in self.entries]

    def labels(self) -> list[Label]:
        if not self.is_labeled:
            raise ValidationError("corpus is unlabeled")
        return [label for _, label in self.entries]

    def texts(self) -> list[str]:
        return [tweet.text for tweet, _ in self.entries]


def load_corpus(path, labeled: bool = True) -> Corpus:
    """Read a corpus TSV.  Raises ParseError/ValidationError with line numbers."""
    want = 3 if labeled else 2
    entries = []
    seen = {}
    with open(path, encoding="utf-8", newline="\n") as fh:
        for lineno, line in enumerate(fh, start=1):
            fields = line.rstrip("\n").split("\t")
            if len(fields) != want:
                raise ParseError(
                    f"expected {want} tab-separated fields, got {len(fields)}",
                    path=str(path),
                    line=lineno,
                )
            tweet_id = fields[0]
            if not tweet_id:
                raise ValidationError("empty tweet id", path=str(path), line=lineno)
            if tweet_id in seen:
                raise ValidationError(
                    f"duplicate tweet id {tweet_id!r} (first seen on line {seen[tweet_id]})",
                    path=str(path),
                    line=lineno,
                )
            seen[tweet_id] = lineno
            label = None
            if labeled:
                try:
                    label = parse_label(fields[2])
                except ValidationError as exc:
                    raise ValidationError(str(exc), path=str(path), line=lineno) from None
            entries.append((Tweet(tweet_id, fields[1]), label))
    return Corpus(tuple(entries))


def write_corpus(path, corpus: Corpus) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for tweet, label in corpus.entries:
            if label is None:
                fh.write(f"{tweet.id}\t{tweet.text}\n")
            else:
                fh.write(f"{tweet.id}\t{tweet.text}\t{label.name}\n")


def stratified_split(
    corpus: Corpus, train_fraction: float, seed: int
) -> tuple[Corpus, Corpus]:
    """Split per class with a seeded shuffle.

    The train side receives round(train_fraction * len(corpus)) entries,
    apportioned to classes by largest fractional remainder so that every
    class stays within one tweet of its exact proportion.
    """
    if not (0.0 < train_fraction < 1.0):
        raise ValidationError(f"train_fraction must be in (0,1), got {train_fraction}")
    if len(corpus) == 0 or not corpus.is_labeled:
        raise ValidationError("stratified_split requires a non-empty labeled corpus")
    by_label: dict[Label, list[int]] = {}
    for pos, (_, label) in enumerate(corpus.entries):
        by_label.setdefault(label, []).append(pos)
    if len(by_label) < 2:
        only = next(iter(by_label)).name
        raise ValidationError(f"corpus contains a single class ({only}); cannot split")

    total_train = math.floor(train_fraction * len(corpus) + 0.5)
    exact = {label: train_fraction * len(pos) for label, pos in by_label.items()}
    take = {label: math.floor(exact[label]) for label in by_label}
    leftover = total_train - sum(take.values())
    # Hand leftover slots to the classes with the largest remainders;
    # ties broken by class size, then name, for determinism.
    ranked = sorted(
        by_label,
        key=lambda lab: (-(exact[lab] - take[lab]), -len(by_label[lab]), lab.name),
    )
    for label in ranked[:leftover]:
        take[label] += 1

    rng = random.Random(seed)
    train_pos = set()
    for label in sorted(by_label, key=lambda lab: lab.name):
        positions = list(by_label[label])
        rng.shuffle(positions)
        train_pos.update(positions[: take[label]])

    train = [corpus.entries[i] for i in range(len(corpus)) if i in train_pos]
    valid = [corpus.entries[i] for i in range(len(corpus)) if i not in train_pos]
    return Corpus(tuple(train)), Corpus(tuple(valid))
