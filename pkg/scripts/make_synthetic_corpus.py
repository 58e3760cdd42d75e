#!/usr/bin/env python3
"""Generate the bundled synthetic corpora under data/.

Eight sentence families, five instances each, plus a small file of
multiplier-phrase sentences in the style of the running example. Every
example is self-checked: quantity detection must reproduce the annotation,
and the gold tree must be reachable by the lexicon-constrained decoder.
Deterministic; run from the repository root.
"""

from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

from eqparse.core import Span, VariableTrigger, format_value
from eqparse.corpus import AnnotatedExample, AnnotatedSentence, dump_corpus
from eqparse.evaluation import gold_tree_instance
from eqparse.quantities import detect_quantities
from eqparse.treeparse import CkyDecoder

NO_SPACE_BEFORE = {".", ",", "?", "!"}


def build_sentence(tagged_tokens, np_token_ranges) -> AnnotatedSentence:
    """Assemble a sentence from (token, pos) pairs and NP token ranges."""
    tokens = tuple(tok for tok, _ in tagged_tokens)
    pos = tuple(tag for _, tag in tagged_tokens)
    pieces = [tokens[0]]
    for tok in tokens[1:]:
        if tok not in NO_SPACE_BEFORE:
            pieces.append(" ")
        pieces.append(tok)
    text = "".join(pieces)
    bare = AnnotatedSentence(text, tokens, pos, ())
    chunks = tuple(Span(bare.token_spans[a].start, bare.token_spans[b - 1].end)
                   for a, b in np_token_ranges)
    quantities = detect_quantities(
        AnnotatedSentence(text, tokens, pos, chunks))
    return AnnotatedSentence(text, tokens, pos, chunks, quantities)


def example(sentence: AnnotatedSentence, equation: str,
            grounding_nps) -> AnnotatedExample:
    """grounding_nps: list of (label, np index into sentence.np_chunks)."""
    grounding = tuple(VariableTrigger(label, sentence.np_chunks[i])
                      for label, i in grounding_nps)
    return AnnotatedExample(sentence, equation, (grounding,))


def sum_of_two(noun: str, a: int) -> AnnotatedExample:
    s = build_sentence(
        [("The", "DT"), ("sum", "NN"), ("of", "IN"), ("two", "CD"),
         (noun, "NNS"), ("is", "VBZ"), (str(a), "CD"), (".", ".")],
        [(0, 2), (3, 5)])
    return example(s, f"(= (+ V1 V2) {a})", [("V1", 1), ("V2", 1)])


def difference_of_two(noun: str, a: int) -> AnnotatedExample:
    s = build_sentence(
        [("The", "DT"), ("difference", "NN"), ("of", "IN"), ("two", "CD"),
         (noun, "NNS"), ("is", "VBZ"), (str(a), "CD"), (".", ".")],
        [(0, 2), (3, 5)])
    return example(s, f"(= (- V1 V2) {a})", [("V1", 1), ("V2", 1)])


def times(noun_a: str, noun_b: str, a: int) -> AnnotatedExample:
    s = build_sentence(
        [("The", "DT"), (noun_a, "NN"), ("is", "VBZ"), (str(a), "CD"),
         ("times", "NNS"), ("the", "DT"), (noun_b, "NN"), (".", ".")],
        [(0, 2), (5, 7)])
    return example(s, f"(= V1 (* {a} V2))", [("V1", 0), ("V2", 1)])


def more_than(noun_a: str, noun_b: str, a: int) -> AnnotatedExample:
    s = build_sentence(
        [("The", "DT"), (noun_a, "NN"), ("is", "VBZ"), (str(a), "CD"),
         ("more", "JJR"), ("than", "IN"), ("the", "DT"), (noun_b, "NN"),
         (".", ".")],
        [(0, 2), (6, 8)])
    return example(s, f"(= V1 (+ {a} V2))", [("V1", 0), ("V2", 1)])


_MULT_POS = {"half": "PDT"}


def multiplier_pair(first: str, second: str, a: int) -> AnnotatedExample:
    """'<First> a number equals <a> less than <second> the same number.'"""
    words = dict(twice=2, thrice=3, double=2, triple=3, half=Fraction(1, 2))
    mv, nv = words[first.lower()], words[second.lower()]
    s = build_sentence(
        [(first, _MULT_POS.get(first.lower(), "RB")), ("a", "DT"),
         ("number", "NN"), ("equals", "VBZ"), (str(a), "CD"),
         ("less", "RBR"), ("than", "IN"),
         (second, _MULT_POS.get(second.lower(), "RB")), ("the", "DT"),
         ("same", "JJ"), ("number", "NN"), (".", ".")],
        [(1, 3), (8, 11)])
    eq = (f"(= (* {format_value(Fraction(mv))} V1)"
          f" (- (* {format_value(Fraction(nv))} V1) {a}))")
    return example(s, eq, [("V1", 0), ("V1", 1)])


def product_of(noun_a: str, noun_b: str, a: int) -> AnnotatedExample:
    s = build_sentence(
        [("The", "DT"), ("product", "NN"), ("of", "IN"), ("the", "DT"),
         (noun_a, "NN"), ("and", "CC"), ("the", "DT"), (noun_b, "NN"),
         ("is", "VBZ"), (str(a), "CD"), (".", ".")],
        [(0, 2), (3, 5), (6, 8)])
    return example(s, f"(= (* V1 V2) {a})", [("V1", 1), ("V2", 2)])


def ratio_of(noun_a: str, noun_b: str, a: int) -> AnnotatedExample:
    s = build_sentence(
        [("The", "DT"), ("ratio", "NN"), ("of", "IN"), ("the", "DT"),
         (noun_a, "NN"), ("to", "TO"), ("the", "DT"), (noun_b, "NN"),
         ("is", "VBZ"), (str(a), "CD"), (".", ".")],
        [(0, 2), (3, 5), (6, 8)])
    return example(s, f"(= (/ V1 V2) {a})", [("V1", 1), ("V2", 2)])


def priced_items(a: int, b: int, c: int, noun_a: str, noun_b: str) -> AnnotatedExample:
    s = build_sentence(
        [("There", "EX"), ("are", "VBP"), (str(a), "CD"),
         (f"{b}-dollar", "JJ"), (noun_a, "NNS"), ("and", "CC"),
         (f"{c}-dollar", "JJ"), (noun_b, "NNS"), (".", ".")],
        [(3, 5), (6, 8)])
    return example(s, f"(= {a} (+ V1 V2))", [("V1", 0), ("V2", 1)])


def main_corpus() -> list[AnnotatedExample]:
    out = []
    out += [sum_of_two(n, a) for n, a in
            [("numbers", 80), ("integers", 96), ("apples", 56),
             ("books", 74), ("coins", 62)]]
    out += [difference_of_two(n, a) for n, a in
            [("numbers", 18), ("integers", 22), ("weights", 14),
             ("scores", 36), ("lengths", 42)]]
    out += [times(x, y, a) for x, y, a in
            [("length", "width", 4), ("father", "son", 3),
             ("price", "cost", 5), ("tank", "bucket", 6),
             ("salary", "bonus", 7)]]
    out += [more_than(x, y, a) for x, y, a in
            [("chair", "stool", 12), ("oak", "pine", 15),
             ("truck", "car", 23), ("jar", "cup", 9),
             ("rope", "wire", 31)]]
    out += [multiplier_pair(m, n, a) for m, n, a in
            [("Twice", "triple", 25), ("Thrice", "twice", 13),
             ("Double", "thrice", 9), ("Triple", "double", 17),
             ("Twice", "double", 21)]]
    out += [product_of(x, y, a) for x, y, a in
            [("length", "width", 48), ("base", "height", 54),
             ("rate", "time", 72), ("speed", "factor", 90),
             ("gain", "spread", 36)]]
    out += [ratio_of(x, y, a) for x, y, a in
            [("width", "height", 3), ("weight", "volume", 5),
             ("income", "expense", 7), ("distance", "delay", 9),
             ("area", "margin", 4)]]
    out += [priced_items(a, b, c, x, y) for a, b, c, x, y in
            [(10, 3, 5, "tickets", "passes"), (12, 2, 4, "stamps", "cards"),
             (9, 4, 6, "pens", "pencils"), (15, 5, 8, "shirts", "hats"),
             (20, 6, 7, "mugs", "plates")]]
    return out


def multiplier_corpus() -> list[AnnotatedExample]:
    return [multiplier_pair(m, n, a) for m, n, a in
            [("Twice", "triple", 25), ("Thrice", "double", 11),
             ("Double", "triple", 19), ("Triple", "twice", 7),
             ("Half", "double", 15)]]


def check(examples) -> None:
    decoder = CkyDecoder()
    for ex in examples:
        instance = gold_tree_instance(ex)
        assert instance is not None, f"unalignable gold: {ex.sentence.text!r}"
        sentence, triggers, tree = instance
        assert decoder.contains((sentence, triggers), tree), \
            f"gold pruned by lexicon: {ex.sentence.text!r}"
        for grounding in ex.groundings:
            for t in grounding:
                assert t.span in ex.sentence.np_chunks


def main() -> int:
    root = Path(__file__).resolve().parent.parent
    corpus = main_corpus()
    pairs = multiplier_corpus()
    check(corpus)
    check(pairs)
    (root / "data").mkdir(exist_ok=True)
    dump_corpus(corpus, root / "data" / "synthetic_corpus.jsonl")
    dump_corpus(pairs, root / "data" / "multiplier_pairs.jsonl")
    print(f"wrote {len(corpus)} examples to data/synthetic_corpus.jsonl")
    print(f"wrote {len(pairs)} examples to data/multiplier_pairs.jsonl")
    return 0


if __name__ == "__main__":
    sys.exit(main())
