"""Corpus TSV reading/writing in the shared pipeline format.

The adapter talks to the classical toolkit only through files:
``id<TAB>text[<TAB>label]`` corpora in, ``id<TAB>probability`` predictions
out (UTF-8, LF endings, six-decimal probabilities).
"""

from __future__ import annotations

from dataclasses import dataclass

_LABELS = {"INFORMATIVE": 1, "1": 1, "UNINFORMATIVE": 0, "0": 0}


@dataclass(frozen=True)
class CorpusFile:
    ids: tuple[str, ...]
    texts: tuple[str, ...]
    labels: tuple[int, ...] | None  # 1 = INFORMATIVE


def read_corpus(path, labeled: bool = True) -> CorpusFile:
    want = 3 if labeled else 2
    ids: list[str] = []
    texts: list[str] = []
    labels: list[int] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8", newline="\n") as fh:
        for lineno, line in enumerate(fh, start=1):
            fields = line.rstrip("\n").split("\t")
            if len(fields) != want:
                raise ValueError(
                    f"{path}:{lineno}: expected {want} tab-separated fields, "
                    f"got {len(fields)}"
                )
            if not fields[0]:
                raise ValueError(f"{path}:{lineno}: empty tweet id")
            if fields[0] in seen:
                raise ValueError(f"{path}:{lineno}: duplicate tweet id {fields[0]!r}")
            seen.add(fields[0])
            ids.append(fields[0])
            texts.append(fields[1])
            if labeled:
                try:
                    labels.append(_LABELS[fields[2]])
                except KeyError:
                    raise ValueError(
                        f"{path}:{lineno}: unknown label {fields[2]!r}"
                    ) from None
    return CorpusFile(tuple(ids), tuple(texts), tuple(labels) if labeled else None)


def write_predictions(path, ids, probabilities) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for tweet_id, prob in zip(ids, probabilities):
            fh.write(f"{tweet_id}\t{prob:.6f}\n")
