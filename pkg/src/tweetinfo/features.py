"""TF-IDF features over normalized tweets.

Variant: raw term counts, smoothed idf ln((1+N)/(1+df)) + 1, L2-normalized
vectors.  Terms are unigrams, indexed lexicographically so a vocabulary is
reproducible across runs and platforms.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .dataset import Corpus
from .errors import ParseError, ValidationError

_VOCAB_MAGIC = "tweetinfo-vocab-v1"


@dataclass(frozen=True)
class SparseVector:
    """Sorted (index, weight) pairs plus the vector dimension."""

    indices: np.ndarray
    values: np.ndarray
    dimension: int

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        val = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", val)
        if idx.shape != val.shape or idx.ndim != 1:
            raise ValidationError("indices and values must be 1-d and same length")
        if idx.size:
            if np.any(np.diff(idx) <= 0):
                raise ValidationError("indices must be strictly increasing")
            if idx[0] < 0 or idx[-1] >= self.dimension:
                raise ValidationError("index out of range for dimension")
        if not np.all(np.isfinite(val)):
            raise ValidationError("weights must be finite")

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.values, self.values)))

    def dot(self, other: "SparseVector") -> float:
        if self.dimension != other.dimension:
            raise ValidationError(
                f"dimension mismatch: {self.dimension} vs {other.dimension}"
            )
        # merge over the shared index sets
        common, ia, ib = np.intersect1d(
            self.indices, other.indices, assume_unique=True, return_indices=True
        )
        if common.size == 0:
            return 0.0
        return float(np.dot(self.values[ia], other.values[ib]))

    def __eq__(self, other):
        return (
            isinstance(other, SparseVector)
            and self.dimension == other.dimension
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )


def tokenize(text: str) -> list[str]:
    """Whitespace split; empty tokens dropped."""
    return text.split()


@dataclass(frozen=True)
class TfIdfVocabulary:
    terms: tuple[str, ...]  # lexicographic; index = position
    document_frequency: np.ndarray
    idf: np.ndarray
    n_documents: int
    min_df: int

    def __post_init__(self):
        object.__setattr__(
            self, "term_index", {t: i for i, t in enumerate(self.terms)}
        )

    @property
    def size(self) -> int:
        return len(self.terms)


def fit_vocabulary(corpus: Corpus, min_df: int = 2) -> TfIdfVocabulary:
    """Count document frequencies and keep terms with df >= min_df."""
    if len(corpus) == 0:
        raise ValidationError("cannot fit a vocabulary on an empty corpus")
    if min_df < 1:
        raise ValidationError(f"min_df must be >= 1, got {min_df}")
    df_counter: Counter = Counter()
    for text in corpus.texts():
        df_counter.update(set(tokenize(text)))
    terms = sorted(t for t, df in df_counter.items() if df >= min_df)
    if not terms:
        raise ValidationError(
            f"vocabulary is empty after applying min_df={min_df}"
        )
    n = len(corpus)
    df = np.array([df_counter[t] for t in terms], dtype=np.int64)
    idf = np.log((1.0 + n) / (1.0 + df)) + 1.0
    return TfIdfVocabulary(tuple(terms), df, idf, n, min_df)


def vectorize(text: str, vocab: TfIdfVocabulary) -> SparseVector:
    """Counts x idf, L2-normalized; out-of-vocabulary tokens are ignored."""
    counts: Counter = Counter(tokenize(text))
    pairs = sorted(
        (vocab.term_index[t], c) for t, c in counts.items() if t in vocab.term_index
    )
    if not pairs:
        return SparseVector(np.empty(0, dtype=np.int64), np.empty(0), vocab.size)
    idx = np.array([i for i, _ in pairs], dtype=np.int64)
    weights = np.array([c for _, c in pairs], dtype=np.float64) * vocab.idf[idx]
    weights /= np.sqrt(np.dot(weights, weights))
    return SparseVector(idx, weights, vocab.size)


def save_vocabulary(path, vocab: TfIdfVocabulary) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            f"#{_VOCAB_MAGIC}\tn_documents={vocab.n_documents}\tmin_df={vocab.min_df}\n"
        )
        for i, term in enumerate(vocab.terms):
            fh.write(
                f"{term}\t{i}\t{int(vocab.document_frequency[i])}\t{float(vocab.idf[i])!r}\n"
            )


def load_vocabulary(path) -> TfIdfVocabulary:
    with open(path, encoding="utf-8", newline="\n") as fh:
        header = fh.readline().rstrip("\n")
        parts = header.split("\t")
        if len(parts) != 3 or parts[0] != f"#{_VOCAB_MAGIC}":
            raise ParseError(f"not a {_VOCAB_MAGIC} file", path=str(path), line=1)
        try:
            n_documents = int(parts[1].removeprefix("n_documents="))
            min_df = int(parts[2].removeprefix("min_df="))
        except ValueError:
            raise ParseError("bad vocabulary header", path=str(path), line=1) from None
        terms, dfs, idfs = [], [], []
        for lineno, line in enumerate(fh, start=2):
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 4:
                raise ParseError(
                    f"expected 4 fields, got {len(fields)}", path=str(path), line=lineno
                )
            term, index, df, idf = fields
            if int(index) != len(terms):
                raise ParseError(
                    f"vocabulary indices out of order at term {term!r}",
                    path=str(path),
                    line=lineno,
                )
            terms.append(term)
            dfs.append(int(df))
            idfs.append(float(idf))
    return TfIdfVocabulary(
        tuple(terms),
        np.array(dfs, dtype=np.int64),
        np.array(idfs, dtype=np.float64),
        n_documents,
        min_df,
    )
