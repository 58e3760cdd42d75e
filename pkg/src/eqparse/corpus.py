"""Annotated sentences and the JSON-lines corpus format.

Each corpus line is one JSON object with: text, tokens, pos, np_chunks
(character spans), quantities (value + span), equation (prefix string), and
groundings (list of valid variable trigger lists, each a list of
{label, np_span} entries).
"""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .core import QuantityTrigger, Span, VariableTrigger


@dataclass(frozen=True)
class AnnotatedSentence:
    """Sentence text with token, POS, NP-chunk, and quantity annotations."""

    text: str
    tokens: tuple[str, ...]
    pos: tuple[str, ...]
    np_chunks: tuple[Span, ...]
    quantities: tuple[QuantityTrigger, ...] = ()
    token_spans: tuple[Span, ...] = field(init=False)

    def __post_init__(self):
        if len(self.tokens) != len(self.pos):
            raise ValueError("tokens and pos must align")
        object.__setattr__(self, "token_spans", align_tokens(self.text, self.tokens))
        for span in self.np_chunks:
            if span.end > len(self.text):
                raise ValueError(f"np chunk {span} beyond text")

    def token_index_at(self, offset: int) -> int:
        """Index of the token containing offset, or the next token after it."""
        starts = [s.start for s in self.token_spans]
        i = bisect.bisect_right(starts, offset) - 1
        if i >= 0 and offset < self.token_spans[i].end:
            return i
        return min(i + 1, len(self.tokens) - 1)

    def token_range(self, span: Span) -> tuple[int, int]:
        """Half-open token index range overlapping a character span."""
        lo = len(self.tokens)
        hi = 0
        for i, ts in enumerate(self.token_spans):
            if ts.start < span.end and span.start < ts.end:
                lo = min(lo, i)
                hi = max(hi, i + 1)
        if lo >= hi:
            i = self.token_index_at(span.start)
            return (i, i)
        return (lo, hi)

    def window(self, lo: int, hi: int, size: int) -> tuple[int, int]:
        """Token range [lo, hi) widened by `size` tokens each side, clamped."""
        return (max(0, lo - size), min(len(self.tokens), hi + size))


def align_tokens(text: str, tokens: tuple[str, ...]) -> tuple[Span, ...]:
    """Map tokens to character spans; tokens must partition text modulo spaces."""
    spans = []
    pos = 0
    for tok in tokens:
        idx = text.find(tok, pos)
        if idx < 0 or text[pos:idx].strip():
            raise ValueError(f"token {tok!r} does not align with text at {pos}")
        spans.append(Span(idx, idx + len(tok)))
        pos = idx + len(tok)
    if text[pos:].strip():
        raise ValueError(f"unaligned trailing text {text[pos:]!r}")
    return tuple(spans)


@dataclass(frozen=True)
class AnnotatedExample:
    """A training/eval example: annotated sentence, gold equation, groundings."""

    sentence: AnnotatedSentence
    equation: str
    groundings: tuple[tuple[VariableTrigger, ...], ...]


def parse_value(raw) -> Fraction:
    """Exact rational from a JSON number or string like '1/2' or '2.5'."""
    if isinstance(raw, bool):
        raise ValueError(f"bad quantity value {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, float) or isinstance(raw, str):
        return Fraction(str(raw))
    raise ValueError(f"bad quantity value {raw!r}")


def unparse_value(value: Fraction):
    return int(value) if value.denominator == 1 else str(value)


def sentence_from_json(obj: dict) -> AnnotatedSentence:
    quantities = tuple(
        QuantityTrigger(parse_value(q["value"]), Span(*q["span"]))
        for q in obj.get("quantities", ())
    )
    return AnnotatedSentence(
        text=obj["text"],
        tokens=tuple(obj["tokens"]),
        pos=tuple(obj["pos"]),
        np_chunks=tuple(Span(*c) for c in obj.get("np_chunks", ())),
        quantities=quantities,
    )


def sentence_to_json(sentence: AnnotatedSentence) -> dict:
    return {
        "text": sentence.text,
        "tokens": list(sentence.tokens),
        "pos": list(sentence.pos),
        "np_chunks": [[s.start, s.end] for s in sentence.np_chunks],
        "quantities": [
            {"value": unparse_value(q.value), "span": [q.span.start, q.span.end]}
            for q in sentence.quantities
        ],
    }


def example_from_json(obj: dict) -> AnnotatedExample:
    groundings = tuple(
        tuple(VariableTrigger(g["label"], Span(*g["np_span"])) for g in grounding)
        for grounding in obj.get("groundings", ())
    )
    return AnnotatedExample(
        sentence=sentence_from_json(obj),
        equation=obj["equation"],
        groundings=groundings,
    )


def example_to_json(example: AnnotatedExample) -> dict:
    obj = sentence_to_json(example.sentence)
    obj["equation"] = example.equation
    obj["groundings"] = [
        [{"label": t.label, "np_span": [t.span.start, t.span.end]} for t in grounding]
        for grounding in example.groundings
    ]
    return obj


def load_corpus(path) -> list[AnnotatedExample]:
    """Read a JSON-lines corpus; errors carry the 1-based line number."""
    examples = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                examples.append(example_from_json(json.loads(line)))
            except (KeyError, ValueError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed corpus line: {exc}") from exc
    return examples


def dump_corpus(examples, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for example in examples:
            fh.write(json.dumps(example_to_json(example), sort_keys=True) + "\n")
