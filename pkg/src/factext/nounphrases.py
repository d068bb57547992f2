"""Noun-phrase chunking (simplification round 2).

Every chunkable noun head becomes an NP placeholder, absorbing adjective
and noun modifiers to its left and cardinal numbers to its right.  Only
surface-adjacent modifiers are absorbed, so the placeholder can stand in
for the phrase inside the serialized sentence.
"""

from __future__ import annotations

from .deptree import DepTree, Replacement, Token, replace_spans
from .symbols import Phrase, SymbolTable

MODIFIER_RELS = {"compound", "nn", "amod", "nummod", "num"}
EXCLUDED_LEMMAS = {"all", "no"}


def _is_modifier(tree: DepTree, t: Token) -> bool:
    return t.deprel in MODIFIER_RELS and t.head != 0 and tree.token(t.head).xpos.startswith("NN")


def _collectable_left(tree: DepTree, prev: Token, collected: set[int]) -> bool:
    if prev.lemma.lower() in EXCLUDED_LEMMAS:
        return False
    if prev.deprel in ("compound", "nn") and prev.xpos.startswith("NN"):
        return True
    if prev.deprel == "amod" and prev.xpos.startswith("JJ"):
        return True
    # adverb grading an already absorbed adjective, e.g. "very large cohort"
    if prev.deprel == "advmod" and prev.xpos.startswith("RB"):
        return tree.token(prev.head).xpos.startswith("JJ") and prev.head in collected
    return False


def apply_np_round(tree: DepTree, table: SymbolTable) -> DepTree:
    """Wrap noun heads and their adjacent modifiers in NP placeholders."""
    replacements = []
    used: set[int] = set()
    n = len(tree.tokens)
    for head_tok in tree.tokens:
        if not head_tok.xpos.startswith("NN") or head_tok.id in used:
            continue
        if _is_modifier(tree, head_tok):
            continue
        ids = {head_tok.id}
        pos = head_tok.id - 1
        while pos >= 1 and pos not in used:
            prev = tree.token(pos)
            if prev.head in ids and _collectable_left(tree, prev, ids):
                ids.add(pos)
                pos -= 1
            else:
                break
        pos = head_tok.id + 1
        while pos <= n and pos not in used:
            nxt = tree.token(pos)
            if nxt.head in ids and nxt.xpos == "CD":
                ids.add(pos)
                pos += 1
            else:
                break
        ordered = sorted(ids)
        phrase = Phrase(
            words=tuple(tree.token(i).form for i in ordered),
            lemmas=tuple(tree.token(i).lemma for i in ordered),
        )
        form = table.add("NP", phrase)
        replacements.append(Replacement(ids=frozenset(ids), form=form))
        used |= ids
    return replace_spans(tree, replacements)
