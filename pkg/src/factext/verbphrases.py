"""Verb-phrase chunking (simplification round 4).

Each content verb becomes a VP placeholder absorbing its surface-adjacent
adverbs, auxiliaries, negation, particles, and adjective complements, plus
one trailing preposition when its object is an atomic nominal.  A verb
conjoined to an adverb-modified verb inherits that adverb in its stored
phrase without widening its tree span.
"""

from __future__ import annotations

from .deptree import DepTree, Replacement, Token, replace_spans
from .symbols import Phrase, SymbolTable, is_nominal

LEFT_RELS = {"advmod", "aux", "auxpass", "neg"}
RIGHT_RELS = {"advmod", "prt", "neg", "acomp"}
SKIP_VERB_RELS = {"aux", "auxpass", "cop"}


def _absorbable_prep(tree: DepTree, prep: Token, table: SymbolTable) -> bool:
    objs = tree.children(prep.id)
    return len(objs) == 1 and objs[0].deprel == "pobj" and is_nominal(objs[0], table)


def _collect_span(tree: DepTree, verb: Token, table: SymbolTable, claimed: set[int]) -> set[int]:
    span = {verb.id}
    pos = verb.id - 1
    while pos >= 1 and pos not in claimed:
        t = tree.token(pos)
        if t.head in span and t.deprel in LEFT_RELS:
            span.add(pos)
            pos -= 1
        else:
            break
    pos = verb.id + 1
    while pos <= len(tree.tokens) and pos not in claimed:
        t = tree.token(pos)
        if t.head in span and t.deprel in RIGHT_RELS:
            span.add(pos)
            pos += 1
        elif t.head in span and t.deprel == "prep" and _absorbable_prep(tree, t, table):
            span.add(pos)
            break
        else:
            break
    return span


def apply_vp_round(tree: DepTree, table: SymbolTable) -> DepTree:
    """Wrap verbs and their absorbed satellites in VP placeholders."""
    chunks: list[tuple[list[int], Token]] = []
    claimed: set[int] = set()
    for verb in tree.tokens:
        if not verb.xpos.startswith("VB") or verb.deprel in SKIP_VERB_RELS:
            continue
        if verb.id in claimed or table.is_placeholder(verb.form):
            continue
        span = _collect_span(tree, verb, table, claimed)
        claimed |= span
        chunks.append((sorted(span), verb))

    span_of = {verb.id: span for span, verb in chunks}

    def own_adverbs(span: list[int]) -> list[int]:
        return [i for i in span if tree.token(i).deprel == "advmod"]

    # a conjoined verb without adverbs inherits the governor's, surface-only
    inherited: dict[int, list[int]] = {}
    for span, verb in chunks:
        if verb.deprel != "conj" or verb.head not in span_of or own_adverbs(span):
            continue
        governor_span = span_of[verb.head]
        inherited[verb.id] = own_adverbs(governor_span) or inherited.get(verb.head, [])

    replacements = []
    for span, verb in chunks:
        prefix = inherited.get(verb.id, [])
        words = tuple(tree.token(i).form for i in prefix + span)
        lemmas = tuple(tree.token(i).lemma for i in prefix + span)
        form = table.add("VP", Phrase(words, lemmas))
        replacements.append(Replacement(ids=frozenset(span), form=form, upos="VERB", xpos="VB"))
    return replace_spans(tree, replacements)
