"""Deterministic rule-based sentence splitting.

A boundary is a run of ``.?!`` (plus any closing quotes/brackets) followed
by whitespace and then a capital letter or an opening quote. A period does
not split after a known abbreviation or a single-letter initial. Trailing
text without terminal punctuation still forms a sentence. Spans cover every
non-whitespace character, in order, without overlap.
"""

from __future__ import annotations

_TERMINALS = ".?!"
_QUOTES = "\"'‘’“”"
_CLOSERS = _QUOTES + ")]"

# Versioned allowlist; matched case-insensitively against the token ending
# at the period (v1).
ABBREVIATIONS = frozenset(
    {
        "dr.", "mr.", "mrs.", "ms.", "prof.", "rev.", "hon.", "sr.", "jr.",
        "st.", "mt.", "capt.", "col.", "gen.", "lt.", "sgt.",
        "vs.", "etc.", "e.g.", "i.e.", "cf.", "al.", "ca.", "approx.",
        "fig.", "figs.", "eq.", "sec.", "ch.", "pp.", "p.", "no.", "nos.",
        "vol.", "vols.", "dept.", "est.", "inc.", "ltd.", "co.", "corp.",
        "ave.", "blvd.", "rd.", "apt.",
        "jan.", "feb.", "mar.", "apr.", "jun.", "jul.", "aug.", "sep.",
        "sept.", "oct.", "nov.", "dec.",
    }
)


def _token_ending_at(text: str, dot_idx: int) -> str:
    start = dot_idx
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    return text[start : dot_idx + 1]


def _is_abbreviation(text: str, dot_idx: int) -> bool:
    token = _token_ending_at(text, dot_idx)
    if token.lower() in ABBREVIATIONS:
        return True
    # single-letter initials like "J." in "J. Smith"
    return len(token) == 2 and token[0].isalpha() and token[0].isupper()


def split_sentences(text: str) -> list[tuple[int, int]]:
    """Return (start_char, end_char) spans of the sentences in ``text``."""
    n = len(text)
    start = 0
    while start < n and text[start].isspace():
        start += 1
    if start == n:
        return []

    spans: list[tuple[int, int]] = []
    i = start
    while i < n:
        if text[i] in _TERMINALS:
            j = i + 1
            while j < n and text[j] in _TERMINALS:
                j += 1
            while j < n and text[j] in _CLOSERS:
                j += 1
            k = j
            while k < n and text[k].isspace():
                k += 1
            boundary = k > j and k < n and (text[k].isupper() or text[k] in _QUOTES)
            if boundary and text[i] == "." and j == i + 1 and _is_abbreviation(text, i):
                boundary = False
            if boundary:
                spans.append((start, j))
                start = k
                i = k
                continue
        i += 1

    end = n
    while end > start and text[end - 1].isspace():
        end -= 1
    if end > start:
        spans.append((start, end))
    return spans
