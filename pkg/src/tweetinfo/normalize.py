"""Deterministic tweet normalization.

The pipeline applies, in this fixed order:

1. emoji replacement (substring match, replacement padded with spaces)
2. lowercasing
3. contraction expansion
4. slang replacement
5. interjection replacement
6. per-token collapsing of repeated letters (runs of 3+ shortened to 2)
7. noise stripping: drop non-ASCII and punctuation, collapse whitespace

followed by one re-application of stages 6 and 3-5 on the stripped text
(see normalize_tweet).  Dictionary stages match whole tokens on word
boundaries, longest key first, in a single left-to-right pass; replacement
text is never re-scanned.  Dictionary values are required to be fixed
points of the whole pipeline, which together with the re-application pass
makes repeated normalization a no-op on its own output.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from importlib import resources
from typing import Mapping

from .errors import ValidationError

_WORD_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")


def _boundary_pattern(key: str) -> str:
    # \b only works next to word characters; fall back to lookarounds for
    # keys that start or end with punctuation (e.g. "w/").
    prefix = r"\b" if key[0] in _WORD_CHARS else r"(?<!\w)"
    suffix = r"\b" if key[-1] in _WORD_CHARS else r"(?!\w)"
    return prefix + re.escape(key) + suffix


def _compile_matcher(mapping: Mapping[str, str], token_level: bool):
    if not mapping:
        return None
    keys = sorted(mapping, key=len, reverse=True)
    if token_level:
        pattern = "|".join(_boundary_pattern(k) for k in keys)
    else:
        pattern = "|".join(re.escape(k) for k in keys)
    return re.compile(pattern)


def apply_dictionary(
    text: str, mapping: Mapping[str, str], token_level: bool = True, pad: bool = False
) -> str:
    """Replace every dictionary match in one left-to-right pass.

    Token-level mappings match on word boundaries; otherwise keys match
    anywhere (emoji).  The longest key wins at each position and replacement
    text is not re-scanned.  With ``pad`` the replacement is wrapped in
    spaces, which keeps emoji descriptions from gluing onto adjacent words.
    """
    matcher = _compile_matcher(mapping, token_level)
    if matcher is None:
        return text
    if pad:
        return matcher.sub(lambda m: f" {mapping[m.group(0)]} ", text)
    return matcher.sub(lambda m: mapping[m.group(0)], text)


def collapse_repeats(token: str) -> str:
    """Shorten every run of 3+ identical letters to 2 (coooool -> cool)."""
    out = []
    for char, run in itertools.groupby(token):
        run = list(run)
        if len(run) >= 3 and char.isalpha():
            out.append(char * 2)
        else:
            out.extend(run)
    return "".join(out)


def strip_noise(text: str) -> str:
    """Drop non-ASCII and punctuation, collapse whitespace runs to one space."""
    kept = []
    for ch in text:
        if ord(ch) > 127:
            continue
        if ch.isalnum():
            kept.append(ch)
        elif ch.isspace():
            kept.append(" ")
        # punctuation and control characters are dropped
    return " ".join("".join(kept).split())


@dataclass(frozen=True)
class ReplacementDictionaries:
    """The four lookup tables driving normalization."""

    emoji: Mapping[str, str]
    interjections: Mapping[str, str]
    contractions: Mapping[str, str]
    slang: Mapping[str, str]

    def __post_init__(self):
        for name in ("emoji", "interjections", "contractions", "slang"):
            mapping = getattr(self, name)
            for key, value in mapping.items():
                if not key:
                    raise ValidationError(f"{name} dictionary contains an empty key")
                if key == value:
                    raise ValidationError(f"{name} entry {key!r} maps to itself")
                if name == "emoji":
                    if all(ord(c) <= 127 for c in key):
                        raise ValidationError(
                            f"emoji key {key!r} contains no non-ASCII codepoint"
                        )
                else:
                    if key != key.lower():
                        raise ValidationError(
                            f"{name} key {key!r} must be stored lowercase"
                        )
                    if any(c.isspace() for c in key):
                        raise ValidationError(
                            f"{name} key {key!r} must be a single token"
                        )


@dataclass(frozen=True)
class NormalizationConfig:
    dictionaries: ReplacementDictionaries
    lowercase: bool = True

    def __post_init__(self):
        d = self.dictionaries
        object.__setattr__(self, "_emoji_re", _compile_matcher(d.emoji, False))
        object.__setattr__(
            self, "_token_res",
            tuple(
                _compile_matcher(m, True)
                for m in (d.contractions, d.slang, d.interjections)
            ),
        )
        object.__setattr__(
            self, "_token_maps", (d.contractions, d.slang, d.interjections)
        )
        self._validate_values()

    def _validate_values(self):
        # A value that the pipeline would rewrite breaks idempotence; refuse it.
        bad = []
        d = self.dictionaries
        for name in ("emoji", "interjections", "contractions", "slang"):
            for key, value in getattr(d, name).items():
                if normalize_tweet(value, self) != value:
                    bad.append(f"{name}:{key!r}->{value!r}")
        if bad:
            raise ValidationError(
                "dictionary values are not normalization fixed points: "
                + ", ".join(sorted(bad))
            )


def normalize_tweet(raw: str, cfg: NormalizationConfig) -> str:
    """Run the full pipeline; output is pure ASCII, single-spaced.

    The collapse and dictionary stages run once more after stripping.
    Stripping can manufacture fresh rule targets out of matched-around
    characters (deleting punctuation merges letter runs, "aa!a" -> "aaa";
    deleting a non-ASCII letter exposes a token, "ér" -> "r"), and without
    the second pass normalizing twice would not be a no-op.  On text where
    stripping exposes nothing, the extra stages change nothing.
    """
    text = raw
    if cfg._emoji_re is not None:
        emoji = cfg.dictionaries.emoji
        text = cfg._emoji_re.sub(lambda m: f" {emoji[m.group(0)]} ", text)
    if cfg.lowercase:
        text = text.lower()
    for matcher, mapping in zip(cfg._token_res, cfg._token_maps):
        if matcher is not None:
            text = matcher.sub(lambda m: mapping[m.group(0)], text)
    text = " ".join(collapse_repeats(tok) for tok in text.split())
    text = strip_noise(text)
    text = " ".join(collapse_repeats(tok) for tok in text.split())
    for matcher, mapping in zip(cfg._token_res, cfg._token_maps):
        if matcher is not None:
            text = matcher.sub(lambda m: mapping[m.group(0)], text)
    return text


def _read_dict_tsv(path_or_resource, source_name: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    if hasattr(path_or_resource, "open"):
        fh = path_or_resource.open(encoding="utf-8")
    else:
        fh = open(path_or_resource, encoding="utf-8")
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise ValidationError(
                    f"expected key<TAB>value, got {len(fields)} fields",
                    path=source_name,
                    line=lineno,
                )
            key, value = fields
            if key in entries:
                raise ValidationError(
                    f"duplicate key {key!r}", path=source_name, line=lineno
                )
            entries[key] = value
    return entries


def _bundled(name: str):
    return resources.files("tweetinfo").joinpath("data").joinpath(name)


def load_dictionaries(
    emoji_path=None,
    interjections_path=None,
    contractions_path=None,
    slang_path=None,
) -> ReplacementDictionaries:
    """Load the bundled dictionaries, with optional per-table overrides."""
    sources = {
        "emoji": emoji_path if emoji_path is not None else _bundled("emoji.tsv"),
        "interjections": interjections_path
        if interjections_path is not None
        else _bundled("interjections.tsv"),
        "contractions": contractions_path
        if contractions_path is not None
        else _bundled("contractions.tsv"),
        "slang": slang_path if slang_path is not None else _bundled("slang.tsv"),
    }
    tables = {
        name: _read_dict_tsv(src, str(src)) for name, src in sources.items()
    }
    return ReplacementDictionaries(**tables)


def default_config(lowercase: bool = True, **override_paths) -> NormalizationConfig:
    """Bundled dictionaries wrapped in a validated pipeline configuration."""
    return NormalizationConfig(load_dictionaries(**override_paths), lowercase=lowercase)
