"""Shared test helpers: seeded random trees and independent structure checks.

The checks here deliberately use different algorithms than the package
(per-token head walks and fixpoint closure instead of one BFS) so they can
serve as oracles for the production validator.
"""

from __future__ import annotations

import random

from factext.deptree import DepTree, Token


def tok(i, form, head, rel, xpos="NN", upos="NOUN", lemma=None):
    return Token(
        id=i,
        form=form,
        lemma=lemma if lemma is not None else form.lower(),
        upos=upos,
        xpos=xpos,
        head=head,
        deprel=rel,
    )


def tree_of(*tokens, sent_id=""):
    return DepTree(tokens=tuple(tokens), sent_id=sent_id, text=" ".join(t.form for t in tokens))


_TAGS = [
    ("NOUN", "NN"),
    ("NOUN", "NNS"),
    ("PROPN", "NNP"),
    ("VERB", "VBD"),
    ("VERB", "VBZ"),
    ("ADJ", "JJ"),
    ("ADV", "RB"),
    ("ADP", "IN"),
    ("DET", "DT"),
    ("NUM", "CD"),
]
_DEPRELS = ["nsubj", "dobj", "amod", "advmod", "prep", "pobj", "det", "conj", "compound", "appos"]
_FORMS = ["cells", "binding", "rapid", "KLF13", "promoter", "grew", "measured", "in", "the", "two"]


def random_tree(rng: random.Random, n: int | None = None) -> DepTree:
    """Build a random valid tree via a shuffled attachment order."""
    if n is None:
        n = rng.randint(1, 12)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    heads = {order[0]: 0}
    rels = {order[0]: "root"}
    for i in range(1, n):
        heads[order[i]] = order[rng.randrange(i)]
        rels[order[i]] = rng.choice(_DEPRELS)
    tokens = []
    for tid in range(1, n + 1):
        form = rng.choice(_FORMS)
        upos, xpos = rng.choice(_TAGS)
        tokens.append(Token(id=tid, form=form, lemma=form.lower(), upos=upos, xpos=xpos, head=heads[tid], deprel=rels[tid]))
    return DepTree(tokens=tuple(tokens), sent_id="r", text=" ".join(t.form for t in tokens))


def structure_violations(tree: DepTree) -> list[str]:
    """Independent validity check: returns one message per violation."""
    problems = []
    n = len(tree.tokens)
    if n == 0:
        return ["no tokens"]
    for position, t in enumerate(tree.tokens, start=1):
        if t.id != position:
            problems.append(f"id {t.id} at position {position}")
        if t.head < 0 or t.head > n:
            problems.append(f"head {t.head} out of range on {t.id}")
    roots = [t.id for t in tree.tokens if t.head == 0]
    if len(roots) != 1:
        problems.append(f"{len(roots)} roots")
    if problems:
        return problems
    for t in tree.tokens:
        cur = t.head
        steps = 0
        while cur != 0 and steps <= n:
            cur = tree.tokens[cur - 1].head
            steps += 1
        if steps > n:
            problems.append(f"cycle through token {t.id}")
    return problems


def fixpoint_descendants(tree: DepTree, tid: int) -> set[int]:
    """Subtree membership by fixpoint closure rather than traversal."""
    members = {tid}
    changed = True
    while changed:
        changed = False
        for t in tree.tokens:
            if t.head in members and t.id not in members:
                members.add(t.id)
                changed = True
    return members
