"""Quantity detection: digit tokens, number words, and numeric prefixes.

Detection is token-based, so matches never overlap. Corpus-provided quantity
annotations take precedence over detection.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .core import QuantityTrigger, Span
from .corpus import AnnotatedSentence

_UNITS = ["one", "two", "three", "four", "five", "six", "seven", "eight", "nine"]
_TEENS = ["ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
          "sixteen", "seventeen", "eighteen", "nineteen"]
_TENS = ["twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty",
         "ninety"]

DEFAULT_NUMBER_WORDS: dict[str, Fraction] = {
    **{w: Fraction(i + 1) for i, w in enumerate(_UNITS)},
    **{w: Fraction(i + 10) for i, w in enumerate(_TEENS)},
    **{w: Fraction((i + 2) * 10) for i, w in enumerate(_TENS)},
    "twice": Fraction(2),
    "double": Fraction(2),
    "thrice": Fraction(3),
    "triple": Fraction(3),
    "half": Fraction(1, 2),
}

# digit token, with optional thousands commas and decimal part
_DIGITS_RE = re.compile(r"\d+(?:,\d{3})*(?:\.\d+)?")
_PREFIXED_RE = re.compile(r"(\d+(?:\.\d+)?)-\S+")


def load_number_words(path) -> dict[str, Fraction]:
    """Read a word<TAB>value lexicon file; values may be rationals like 1/2."""
    words = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                word, value = line.split("\t")
                words[word.lower()] = Fraction(value)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad lexicon line") from exc
    return words


def detect_quantities(sentence: AnnotatedSentence,
                      number_words: dict[str, Fraction] | None = None,
                      ) -> tuple[QuantityTrigger, ...]:
    """Quantity triggers for digit tokens, number words, and numeric prefixes.

    A hyphenated token like "5-dollar" yields a trigger over just the digit
    prefix. Returned triggers are sorted by span start and never overlap.
    """
    words = DEFAULT_NUMBER_WORDS if number_words is None else number_words
    found = []
    for tok, span in zip(sentence.tokens, sentence.token_spans):
        if _DIGITS_RE.fullmatch(tok):
            found.append(QuantityTrigger(Fraction(tok.replace(",", "")), span))
            continue
        m = _PREFIXED_RE.fullmatch(tok)
        if m:
            found.append(QuantityTrigger(
                Fraction(m.group(1)), Span(span.start, span.start + len(m.group(1)))))
            continue
        value = words.get(tok.lower())
        if value is not None:
            found.append(QuantityTrigger(value, span))
    return tuple(found)


def sentence_quantities(sentence: AnnotatedSentence,
                        number_words: dict[str, Fraction] | None = None,
                        ) -> tuple[QuantityTrigger, ...]:
    """Corpus annotations verbatim when present, else detection."""
    if sentence.quantities:
        return sentence.quantities
    return detect_quantities(sentence, number_words)
