"""Shared index/query-time text analysis: tokenize, stop, stem.

The same function must run at both index and query time; correctness is
defined by self-consistency, not by matching any external engine token
for token. The stemmer is the classic Porter algorithm; the stopword
list is the standard 33-word English set and both are versioned here.
"""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"[a-z0-9]+")

STOPWORDS = frozenset(
    """a an and are as at be but by for if in into is it no not of on or
    such that the their then there these they this to was will with""".split()
)

_VOWELS = "aeiou"


def _cons(w: str, i: int) -> bool:
    c = w[i]
    if c in _VOWELS:
        return False
    if c == "y":
        return True if i == 0 else not _cons(w, i - 1)
    return True


def _measure(stem: str) -> int:
    # number of vowel->consonant transitions in the [C](VC)^m[V] form
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        if _cons(stem, i):
            if prev_vowel:
                m += 1
            prev_vowel = False
        else:
            prev_vowel = True
    return m


def _has_vowel(stem: str) -> bool:
    return any(not _cons(stem, i) for i in range(len(stem)))


def _ends_double_cons(w: str) -> bool:
    return len(w) >= 2 and w[-1] == w[-2] and _cons(w, len(w) - 1)


def _ends_cvc(w: str) -> bool:
    if len(w) < 3:
        return False
    i = len(w) - 1
    return (
        _cons(w, i)
        and not _cons(w, i - 1)
        and _cons(w, i - 2)
        and w[i] not in "wxy"
    )


def _step_rules(w: str, rules: list[tuple[str, str]], min_m: int) -> str:
    # longest-suffix order is the order given in each rule list
    for suffix, repl in rules:
        if w.endswith(suffix):
            stem = w[: len(w) - len(suffix)]
            if _measure(stem) >= min_m:
                return stem + repl
            return w
    return w


def porter_stem(w: str) -> str:
    """Porter (1980) suffix stripping; input must already be lowercase."""
    if len(w) <= 2:
        return w

    # step 1a
    if w.endswith("sses"):
        w = w[:-2]
    elif w.endswith("ies"):
        w = w[:-2]
    elif not w.endswith("ss") and w.endswith("s"):
        w = w[:-1]

    # step 1b
    if w.endswith("eed"):
        if _measure(w[:-3]) > 0:
            w = w[:-1]
    else:
        cleanup = False
        if w.endswith("ed") and _has_vowel(w[:-2]):
            w = w[:-2]
            cleanup = True
        elif w.endswith("ing") and _has_vowel(w[:-3]):
            w = w[:-3]
            cleanup = True
        if cleanup:
            if w.endswith(("at", "bl", "iz")):
                w += "e"
            elif _ends_double_cons(w) and not w.endswith(("l", "s", "z")):
                w = w[:-1]
            elif _measure(w) == 1 and _ends_cvc(w):
                w += "e"

    # step 1c
    if w.endswith("y") and _has_vowel(w[:-1]):
        w = w[:-1] + "i"

    # step 2
    w = _step_rules(
        w,
        [
            ("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
            ("izer", "ize"), ("abli", "able"), ("alli", "al"), ("entli", "ent"),
            ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
            ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
            ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
        ],
        1,
    )

    # step 3
    w = _step_rules(
        w,
        [
            ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
            ("ical", "ic"), ("ful", ""), ("ness", ""),
        ],
        1,
    )

    # step 4
    for suffix in (
        "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ion",
        "ism", "ate", "iti", "ous", "ive", "ize", "ou", "al", "er", "ic",
    ):
        if w.endswith(suffix):
            stem = w[: len(w) - len(suffix)]
            if suffix == "ion" and not stem.endswith(("s", "t")):
                break
            if _measure(stem) > 1:
                w = stem
            break

    # step 5a
    if w.endswith("e"):
        stem = w[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            w = stem

    # step 5b
    if _measure(w[:-1]) > 1 and _ends_double_cons(w) and w.endswith("l"):
        w = w[:-1]

    return w


def analyze(text: str) -> list[str]:
    """Lowercase, split on non-alphanumerics, drop stopwords, Porter-stem."""
    return [
        porter_stem(tok)
        for tok in _TOKEN_RE.findall(text.lower())
        if tok not in STOPWORDS
    ]
