"""Equation tree construction over a sorted trigger list.

CKY over trigger intervals: every internal node combines two adjacent
intervals, so every decoded tree is projective. A high-precision lexicon can
pin the operation (and operand order) of a node whose surrounding text
matches a rule; the root is always EQ.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import (
    INTERNAL_OPS,
    EquationTree,
    Leaf,
    Node,
    Op,
    Order,
    QuantityTrigger,
    Span,
    location,
    tree_leaves,
    trigger_sort_key,
)
from .corpus import AnnotatedSentence
from .learning import FeatureVector, dot


@dataclass(frozen=True)
class NodeContext:
    """Text around a candidate node joining intervals [i,k) and [k,j)."""

    mid: str
    left: str
    right: str
    left_token: str | None  # trigger surface when the left child is a leaf


def node_context_spans(sentence: AnnotatedSentence, triggers, i: int, k: int,
                       j: int) -> NodeContext:
    """Context strings for a node over triggers[i:j) split at k.

    Extents use trigger locations, so the mid span runs from the left
    child's last trigger to the right child's first. The left/right spans
    extend to the nearest trigger outside the node, or to the sentence
    boundary when there is none.
    """
    text = sentence.text
    locs = [location(t) for t in triggers]
    left_end = min(locs[k - 1], locs[j - 1])
    right_begin = max(locs[i], locs[k])
    node_start = min(locs[i], locs[k])
    node_end = max(locs[k - 1], locs[j - 1])

    before = [p for p in locs if p < node_start]
    after = [p for p in locs if p > node_end]
    left_from = max(before) if before else 0
    right_to = min(after) if after else len(text)

    return NodeContext(
        mid=text[left_end:right_begin],
        left=text[left_from:node_start],
        right=text[node_end:right_to],
        left_token=triggers[i].span.text(text) if k == i + 1 else None,
    )


_NORM_RE = re.compile(r"[^0-9a-z]+")


def _contains(haystack: str | None, term: str) -> bool:
    # token-boundary substring match: " less than " never matches "bless thank"
    if haystack is None:
        return False
    normalized = " " + _NORM_RE.sub(" ", haystack.lower()).strip() + " "
    return f" {term} " in normalized


@dataclass(frozen=True)
class LexiconRule:
    """One lexicon rule: a conjunction of clauses, each a disjunction of atoms.

    An atom (field, term) tests whether the context field contains the term;
    the field "mid_empty" tests for an empty mid span instead.
    """

    rule_id: int
    precedence: int
    op: Op
    order: Order | None
    clauses: tuple[tuple[tuple[str, str], ...], ...]

    def matches(self, context: NodeContext) -> bool:
        fields = {"left": context.left, "mid": context.mid,
                  "right": context.right, "token": context.left_token}
        for clause in self.clauses:
            ok = False
            for field, term in clause:
                if field == "mid_empty":
                    ok = not context.mid.strip()
                else:
                    ok = _contains(fields[field], term)
                if ok:
                    break
            if not ok:
                return False
        return True


# Ordered from low to high precedence; the last matching rule wins.
_LEXICON_TABLE = """\
1	+	left:sum of	mid:and|mid_empty:
2	+	mid:added to|mid:plus|mid:more than|mid:taller than|mid:greater than|mid:larger than|mid:faster than|mid:longer than|mid:increased
3	-,lr	mid:more than|mid:taller than|mid:greater than|mid:larger than|mid:faster than|mid:longer than	right:by
4	-,lr	left:difference of	mid:and|mid_empty:
5	-,lr	left:exceeds|left:minus|left:decreased
6	-,rl	mid:subtracted|mid:shorter than|mid:less than|mid:slower than|mid:smaller than
7	*	mid:multiplied by
8	*	left:product of	mid:and
9	/,lr	left:ratio of
10	*	token:thrice|token:triple|token:twice|token:double|token:half|mid:times
11	/,rl	token:thrice|token:triple|token:twice|token:double|token:half|mid:times	mid:as	right:as
"""

_FIELDS = {"left", "mid", "right", "token", "mid_empty"}
_OP_SYMBOLS = {"+": Op.ADD, "-": Op.SUB, "*": Op.MUL, "/": Op.DIV}


def parse_lexicon(text: str) -> tuple[LexiconRule, ...]:
    """Parse a rules table: id<TAB>op[,order]<TAB>clause..., atoms field:term."""
    rules = []
    seen_ids = set()
    for lineno, line in enumerate(text.splitlines()):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 3:
            raise ValueError(f"lexicon line {lineno + 1}: need id, op, clauses")
        rule_id = int(parts[0])
        if rule_id in seen_ids:
            raise ValueError(f"lexicon line {lineno + 1}: duplicate rule id {rule_id}")
        seen_ids.add(rule_id)
        op_part = parts[1].split(",")
        op = _OP_SYMBOLS[op_part[0]]
        order = Order(op_part[1]) if len(op_part) > 1 else None
        clauses = []
        for part in parts[2:]:
            atoms = []
            for atom in part.split("|"):
                field, _, term = atom.partition(":")
                if field not in _FIELDS:
                    raise ValueError(f"lexicon line {lineno + 1}: bad field {field!r}")
                atoms.append((field, term))
            clauses.append(tuple(atoms))
        rules.append(LexiconRule(rule_id, len(rules), op, order, tuple(clauses)))
    return tuple(rules)


def load_lexicon(path) -> tuple[LexiconRule, ...]:
    with open(path, encoding="utf-8") as fh:
        return parse_lexicon(fh.read())


DEFAULT_LEXICON = parse_lexicon(_LEXICON_TABLE)


def lexicon_match(context: NodeContext,
                  rules: tuple[LexiconRule, ...] = DEFAULT_LEXICON,
                  ) -> tuple[Op, Order] | None:
    """(op, order) from the highest-precedence matching rule, if any."""
    best = None
    for rule in rules:  # stored low to high precedence
        if rule.matches(context):
            best = (rule.op, rule.order or Order.LR)
    return best


def _op_tag(op: Op, order: Order) -> str:
    if op in (Op.SUB, Op.DIV):
        return f"|o={op.value}{order.value}"
    return f"|o={op.value}"


def tree_node_features(sentence: AnnotatedSentence, triggers, i: int, k: int,
                       j: int, op: Op, order: Order,
                       window: int = 3) -> FeatureVector:
    """Neighborhood, connecting-text, and number features for one node."""
    tag = _op_tag(op, order)
    feats: FeatureVector = {}

    def bump(name):
        feats[name + tag] = feats.get(name + tag, 0.0) + 1.0

    locs = [location(t) for t in triggers]
    boundaries = {locs[i], locs[k - 1], locs[k], locs[j - 1]}
    for offset in sorted(boundaries):
        ti = sentence.token_index_at(offset)
        lo, hi = sentence.window(ti, ti + 1, window)
        for t in range(lo, hi):
            bump(f"tn_u={sentence.tokens[t].lower()}")
            bump(f"tn_p={sentence.pos[t]}")
            if t + 1 < hi:
                bump(f"tn_b={sentence.tokens[t].lower()} {sentence.tokens[t + 1].lower()}")

    mid_lo = min(locs[k - 1], locs[j - 1])
    mid_hi = max(locs[i], locs[k])
    tlo, thi = sentence.token_range(Span(mid_lo, mid_hi))
    for t in range(tlo, thi):
        bump(f"tc_u={sentence.tokens[t].lower()}")
        bump(f"tc_p={sentence.pos[t]}")
        if t + 1 < thi:
            bump(f"tc_b={sentence.tokens[t].lower()} {sentence.tokens[t + 1].lower()}")

    if k == i + 1 and j == k + 1:
        a, b = triggers[i], triggers[k]
        if isinstance(a, QuantityTrigger) and isinstance(b, QuantityTrigger):
            bump(f"tnum_left_smaller={int(a.value < b.value)}")
    return feats


def tree_features(sentence: AnnotatedSentence, triggers, tree: EquationTree,
                  window: int = 3) -> FeatureVector:
    """Whole-tree feature vector: the sum over all internal nodes."""
    if len(tree_leaves(tree)) != len(triggers):
        raise ValueError("tree leaves do not match the trigger list")
    feats: FeatureVector = {}

    def walk(node: EquationTree, i: int) -> int:
        if isinstance(node, Leaf):
            return i + 1
        k = walk(node.left, i)
        j = walk(node.right, k)
        for name, value in tree_node_features(
                sentence, triggers, i, k, j, node.op, node.order, window).items():
            feats[name] = feats.get(name, 0.0) + value
        return j

    walk(tree, 0)
    return feats


def gold_node_set(tree: EquationTree) -> frozenset:
    """(i, j, op, order) for each internal node, by in-order leaf position."""
    nodes = set()

    def walk(node: EquationTree, i: int) -> int:
        if isinstance(node, Leaf):
            return i + 1
        k = walk(node.left, i)
        j = walk(node.right, k)
        nodes.add((i, j, node.op, node.order))
        return j

    walk(tree, 0)
    return frozenset(nodes)


def tree_cost(gold: EquationTree, other: EquationTree) -> float:
    """Number of the other tree's internal nodes absent from the gold tree."""
    gold_nodes = gold_node_set(gold)
    return float(sum(1 for node in gold_node_set(other) if node not in gold_nodes))


class CkyDecoder:
    """Bottom-up search for the best projective equation tree.

    x is (sentence, triggers) with triggers in trigger-list order. Ties
    prefer the smaller split point, then ops in declaration order, with lr
    before rl. When a lexicon rule matches a node, only its (op, order) is
    explored, unless the lexicon is disabled or demoted to features.
    """

    def __init__(self, window: int = 3, use_lexicon: bool = True,
                 lexicon_as_features: bool = False,
                 conform_syntactic: bool = False,
                 rules: tuple[LexiconRule, ...] = DEFAULT_LEXICON):
        self.window = window
        self.use_lexicon = use_lexicon
        self.lexicon_as_features = lexicon_as_features
        self.conform_syntactic = conform_syntactic
        self.rules = rules

    def _candidate_ops(self, sentence, triggers, i, k, j):
        """(op, order, extra_features) triples explored for this node."""
        if not self.use_lexicon:
            return [(op, order, None) for op, order in INTERNAL_OPS]
        match = lexicon_match(node_context_spans(sentence, triggers, i, k, j),
                              self.rules)
        if match is None:
            return [(op, order, None) for op, order in INTERNAL_OPS]
        if self.lexicon_as_features:
            return [(op, order,
                     {f"lex_agree={int((op, order) == match)}" + _op_tag(op, order): 1.0})
                    for op, order in INTERNAL_OPS]
        return [(match[0], match[1], None)]

    def _allowed_interval(self, sentence, triggers, i, j):
        if not self.conform_syntactic or j - i == 1:
            return True
        lo = min(t.span.start for t in triggers[i:j])
        hi = max(t.span.end for t in triggers[i:j])
        for chunk in sentence.np_chunks:
            overlap = max(lo, chunk.start) < min(hi, chunk.end)
            nested = (chunk.start <= lo and hi <= chunk.end) or \
                     (lo <= chunk.start and chunk.end <= hi)
            if overlap and not nested:
                return False
        return True

    def decode(self, x, weights, gold=None, cost_fn=None):
        tree = self._decode(x, weights, gold, strict=self.conform_syntactic)
        if tree is None:
            # syntactic conformance can exhaust the space; fall back
            tree = self._decode(x, weights, gold, strict=False)
        return tree

    def _decode(self, x, weights, gold, strict):
        sentence, triggers = x
        n = len(triggers)
        if n < 2:
            raise ValueError("trigger list needs at least 2 triggers")
        keys = [trigger_sort_key(t) for t in triggers]
        if keys != sorted(keys):
            raise ValueError("trigger list out of order")
        gold_nodes = gold_node_set(gold) if gold is not None else None

        def node_score(i, k, j, op, order, extra):
            feats = tree_node_features(sentence, triggers, i, k, j, op, order,
                                       self.window)
            score = dot(weights, feats)
            if extra:
                score += dot(weights, extra)
            if gold_nodes is not None and (i, j, op, order) not in gold_nodes:
                score += 1.0  # margin cost, one unit per wrong node
            return score

        chart: dict = {(i, i + 1): (0.0, Leaf(triggers[i])) for i in range(n)}
        for length in range(2, n):
            for i in range(n - length + 1):
                j = i + length
                if strict and not self._allowed_interval(sentence, triggers, i, j):
                    continue
                best = None
                for k in range(i + 1, j):
                    if (i, k) not in chart or (k, j) not in chart:
                        continue
                    lscore, ltree = chart[(i, k)]
                    rscore, rtree = chart[(k, j)]
                    for op, order, extra in self._candidate_ops(
                            sentence, triggers, i, k, j):
                        total = lscore + rscore + node_score(i, k, j, op, order, extra)
                        if best is None or total > best[0]:
                            best = (total, Node(op, order, ltree, rtree))
                if best is not None:
                    chart[(i, j)] = best

        best = None
        for k in range(1, n):
            if (0, k) not in chart or (k, n) not in chart:
                continue
            lscore, ltree = chart[(0, k)]
            rscore, rtree = chart[(k, n)]
            total = lscore + rscore + node_score(0, k, n, Op.EQ, Order.LR, None)
            if best is None or total > best[0]:
                best = (total, Node(Op.EQ, Order.LR, ltree, rtree))
        if best is None:
            if strict:
                return None
            raise ValueError("no full-span tree")
        return best[1]

    def features(self, x, tree) -> FeatureVector:
        """Whole-tree features, including lexicon-agreement features when
        the lexicon runs in feature mode rather than as a constraint."""
        sentence, triggers = x
        feats = tree_features(sentence, triggers, tree, self.window)
        if not (self.use_lexicon and self.lexicon_as_features):
            return feats

        def walk(node, i):
            if isinstance(node, Leaf):
                return i + 1
            k = walk(node.left, i)
            j = walk(node.right, k)
            if node.op is not Op.EQ:
                match = lexicon_match(
                    node_context_spans(sentence, triggers, i, k, j), self.rules)
                if match is not None:
                    name = (f"lex_agree={int((node.op, node.order) == match)}"
                            + _op_tag(node.op, node.order))
                    feats[name] = feats.get(name, 0.0) + 1.0
            return j

        walk(tree, 0)
        return feats

    def contains(self, x, tree) -> bool:
        """Whether the decoder's search space includes this exact tree."""
        sentence, triggers = x
        leaves = []

        def walk(node) -> bool:
            if isinstance(node, Leaf):
                leaves.append(node.trigger)
                return True
            i = len(leaves)
            if not walk(node.left):
                return False
            k = len(leaves)
            if not walk(node.right):
                return False
            j = len(leaves)
            if node.op is Op.EQ:
                return (i, j) == (0, len(triggers))
            allowed = [(op, order) for op, order, _ in
                       self._candidate_ops(sentence, triggers, i, k, j)]
            return (node.op, node.order) in allowed

        if not isinstance(tree, Node) or tree.op is not Op.EQ:
            return False
        if not walk(tree):
            return False
        return leaves == list(triggers)


def enumerate_projective_trees(sentence: AnnotatedSentence, triggers,
                               use_lexicon: bool = True,
                               rules: tuple[LexiconRule, ...] = DEFAULT_LEXICON,
                               ) -> list[EquationTree]:
    """Every projective tree over the trigger list, honoring the lexicon.

    Exhaustive alternative to CKY for small trigger lists.
    """
    n = len(triggers)
    if n < 2:
        raise ValueError("trigger list needs at least 2 triggers")
    decoder = CkyDecoder(use_lexicon=use_lexicon, rules=rules)
    cache: dict = {}

    def subtrees(i, j):
        if (i, j) in cache:
            return cache[(i, j)]
        if j - i == 1:
            result = [Leaf(triggers[i])]
        else:
            result = []
            for k in range(i + 1, j):
                ops = decoder._candidate_ops(sentence, triggers, i, k, j)
                for lt in subtrees(i, k):
                    for rt in subtrees(k, j):
                        for op, order, _ in ops:
                            result.append(Node(op, order, lt, rt))
        cache[(i, j)] = result
        return result

    trees = []
    for k in range(1, n):
        for lt in subtrees(0, k):
            for rt in subtrees(k, n):
                trees.append(Node(Op.EQ, Order.LR, lt, rt))
    return trees
