"""Deterministic random instance generators shared across test modules."""

from __future__ import annotations

import random
import zlib
from fractions import Fraction

from eqparse.core import (
    Apply,
    Const,
    Op,
    QuantityTrigger,
    Span,
    Var,
    VariableTrigger,
    make_apply,
)
from eqparse.corpus import AnnotatedSentence


class HashWeights(dict):
    """Dense pseudo-random weights keyed by feature name.

    Every feature gets a reproducible weight in [-1, 1] derived from its
    name, so argmax comparisons against brute-force oracles need no feature
    collection pass.
    """

    def __init__(self, salt: int = 0):
        super().__init__()
        self.salt = salt

    def get(self, key, default=0.0):
        h = zlib.crc32(f"{self.salt}:{key}".encode("utf-8"))
        return (h / 0xFFFFFFFF) * 2.0 - 1.0


# word pool skews toward lexicon trigger terms so rule constraints fire often
FILLER = ("sum", "of", "less", "than", "more", "times", "the", "a", "is",
          "equals", "and", "total", "by", "ratio", "to", "product",
          "difference", "exceeds", "plus", "minus", "added", "as")
FILLER_POS = ("IN", "DT", "VBZ", "RB", "JJ", "CC", "TO")
NOUNS = ("number", "apples", "books", "coins", "length", "width", "price")


def random_tree_instance(rng: random.Random, n: int):
    """(sentence, triggers) with n triggers at distinct token positions."""
    n_tokens = rng.randrange(n + 2, n + 8)
    slots = set(rng.sample(range(n_tokens), n))
    tokens, pos, plan = [], [], []
    have_v1 = False
    for idx in range(n_tokens):
        if idx in slots:
            if rng.random() < 0.55:
                value = rng.randrange(1, 31)
                tokens.append(str(value))
                pos.append("CD")
                plan.append(("q", Fraction(value)))
            else:
                tokens.append(rng.choice(NOUNS))
                pos.append("NN")
                label = rng.choice(("V1", "V2")) if have_v1 else "V1"
                have_v1 = True
                plan.append(("v", label))
        else:
            tokens.append(rng.choice(FILLER))
            pos.append(rng.choice(FILLER_POS))
            plan.append(None)
    text = " ".join(tokens)
    bare = AnnotatedSentence(text, tuple(tokens), tuple(pos), ())
    triggers = []
    chunks = []
    for idx, step in enumerate(plan):
        if step is None:
            continue
        span = bare.token_spans[idx]
        if step[0] == "q":
            triggers.append(QuantityTrigger(step[1], span))
        else:
            triggers.append(VariableTrigger(step[1], span))
            chunks.append(span)
    sentence = AnnotatedSentence(text, tuple(tokens), tuple(pos), tuple(chunks))
    return sentence, tuple(triggers)


def random_relevance_instance(rng: random.Random, k: int) -> AnnotatedSentence:
    """A sentence whose detected quantities are exactly its k digit tokens."""
    n_tokens = rng.randrange(k + 2, k + 9)
    slots = set(rng.sample(range(n_tokens), k))
    tokens, pos = [], []
    for idx in range(n_tokens):
        if idx in slots:
            tokens.append(str(rng.randrange(1, 100)))
            pos.append("CD")
        else:
            tokens.append(rng.choice(FILLER + NOUNS))
            pos.append(rng.choice(FILLER_POS + ("NN",)))
    return AnnotatedSentence(" ".join(tokens), tuple(tokens), tuple(pos), ())


def random_arith(rng: random.Random, depth: int = 0):
    if depth >= 3 or rng.random() < 0.4:
        if rng.random() < 0.55:
            return Const(Fraction(rng.randrange(1, 13)))
        return Var(rng.choice(("V1", "V2")))
    op = rng.choice((Op.ADD, Op.SUB, Op.MUL, Op.DIV))
    return make_apply(op, random_arith(rng, depth + 1),
                      random_arith(rng, depth + 1))


def random_equation(rng: random.Random) -> Apply:
    return Apply(Op.EQ, (random_arith(rng, 1), random_arith(rng, 1)))


def commute(e, rng: random.Random):
    """An expression denoting the same equation: random operand flips on
    commutative nodes (and the equality), written without re-sorting."""
    if not isinstance(e, Apply):
        return e
    a, b = (commute(arg, rng) for arg in e.args)
    if e.op in (Op.ADD, Op.MUL, Op.EQ) and rng.random() < 0.5:
        a, b = b, a
    return Apply(e.op, (a, b))
