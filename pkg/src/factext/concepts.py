"""Determiner removal and concept/attribute folding (simplification round 3).

The round removes plain determiners, turns quantifiers into attributes
(no symptoms -> symptoms::no), folds possessives and "B of A" chains into
concept::attribute units, and splits noun compounds when a corpus evidence
pair supports reading them as attribute-of-concept.
"""

from __future__ import annotations

from collections import Counter
from pathlib import Path

from .deptree import DepTree, Replacement, Token, descendants, remove_tokens, replace_spans
from .symbols import CAUnit, Phrase, SymbolTable, is_nominal

REMOVABLE_DT = {"a", "an", "the"}
DEMONSTRATIVE_DT = {"this", "that", "these", "those"}
QUANTIFIER_LEMMAS = {"all", "no"}
QUANTIFIER_RELS = {"det", "neg", "predet", "det:predet"}


def _atom_text(token: Token, table: SymbolTable) -> str:
    """Slot text of an atomic nominal: placeholder rendering or the form."""
    value = table.value(token.form) if table.is_placeholder(token.form) else None
    if isinstance(value, CAUnit):
        return value.render()
    if isinstance(value, Phrase):
        return value.surface()
    return token.form


def _attach_attribute(base: Token, attribute: str, table: SymbolTable) -> CAUnit:
    """Extend base with one more attribute, flattening placeholders."""
    if table.is_placeholder(base.form):
        value = table.value(base.form)
        if isinstance(value, CAUnit):
            return value.extended(attribute)
        return CAUnit(value.surface(), (attribute,))
    return CAUnit(base.form, (attribute,))


def _remove_determiners(tree: DepTree, table: SymbolTable) -> DepTree:
    drop = set()
    for t in tree.tokens:
        if t.xpos != "DT" or t.deprel != "det" or t.head == 0:
            continue
        lemma = t.lemma.lower()
        if lemma in REMOVABLE_DT:
            drop.add(t.id)
        elif lemma in DEMONSTRATIVE_DT and t.id < len(tree.tokens):
            if is_nominal(tree.token(t.id + 1), table):
                drop.add(t.id)
    return remove_tokens(tree, drop)


def _fold_quantifiers(tree: DepTree, table: SymbolTable) -> DepTree:
    replacements = []
    used: set[int] = set()
    for q in tree.tokens:
        if q.lemma.lower() not in QUANTIFIER_LEMMAS or q.deprel not in QUANTIFIER_RELS:
            continue
        if q.head != q.id + 1 or descendants(tree, q.id) != {q.id}:
            continue
        nominal = tree.token(q.head)
        if not is_nominal(nominal, table) or {q.id, nominal.id} & used:
            continue
        unit = _attach_attribute(nominal, q.lemma.lower(), table)
        form = table.add("CA", unit)
        replacements.append(Replacement(ids=frozenset({q.id, nominal.id}), form=form))
        used |= {q.id, nominal.id}
    return replace_spans(tree, replacements)


def _fold_possessives(tree: DepTree, table: SymbolTable) -> DepTree:
    replacements = []
    used: set[int] = set()
    for owner in tree.tokens:
        if owner.deprel != "poss" or owner.head == 0:
            continue
        owned = tree.token(owner.head)
        marker = next((c for c in tree.children(owner.id) if c.xpos == "POS"), None)
        if marker is None or not is_nominal(owner, table) or not is_nominal(owned, table):
            continue
        if not (owner.id + 1 == marker.id and marker.id + 1 == owned.id):
            continue
        if descendants(tree, owner.id) != {owner.id, marker.id}:
            continue
        span = {owner.id, marker.id, owned.id}
        if span & used:
            continue
        if table.kind_of(owned.form) == "CA":
            value = table.value(owned.form)
            unit = CAUnit(_atom_text(owner, table), (value.concept,) + value.attributes)
        else:
            unit = CAUnit(_atom_text(owner, table), (_atom_text(owned, table),))
        form = table.add("CA", unit)
        replacements.append(Replacement(ids=frozenset(span), form=form))
        used |= span
    return replace_spans(tree, replacements)


def _find_of_fold(tree: DepTree, table: SymbolTable) -> tuple[int, int, int] | None:
    """Rightmost foldable (B, of, A) triple, so chains fold innermost first."""
    best = None
    for base in tree.tokens:
        if not is_nominal(base, table):
            continue
        for prep in tree.children(base.id):
            if prep.deprel != "prep" or prep.lemma.lower() != "of":
                continue
            objs = tree.children(prep.id)
            if len(objs) != 1 or objs[0].deprel != "pobj":
                continue
            obj = objs[0]
            if not is_nominal(obj, table) or descendants(tree, obj.id) != {obj.id}:
                continue
            if not (base.id + 1 == prep.id and prep.id + 1 == obj.id):
                continue
            if best is None or base.id > best[0]:
                best = (base.id, prep.id, obj.id)
    return best


def _fold_of_chains(tree: DepTree, table: SymbolTable) -> DepTree:
    while True:
        triple = _find_of_fold(tree, table)
        if triple is None:
            return tree
        base_id, prep_id, obj_id = triple
        base, obj = tree.token(base_id), tree.token(obj_id)
        unit = _attach_attribute(obj, _atom_text(base, table), table)
        form = table.add("CA", unit)
        tree = replace_spans(tree, [Replacement(ids=frozenset(triple), form=form)])


def _split_evidence_compounds(tree: DepTree, table: SymbolTable, evidence: set[tuple[str, str]]) -> DepTree:
    if not evidence:
        return tree
    replacements = []
    for t in tree.tokens:
        if table.kind_of(t.form) != "NP":
            continue
        phrase = table.value(t.form)
        words, lemmas = phrase.words, phrase.lemmas
        for boundary in range(len(words) - 1, 0, -1):
            head_key = "_".join(lemmas[boundary:]).lower()
            modifier_key = "_".join(lemmas[:boundary]).lower()
            if (head_key, modifier_key) in evidence:
                unit = CAUnit(" ".join(words[:boundary]), (" ".join(words[boundary:]),))
                form = table.add("CA", unit)
                replacements.append(Replacement(ids=frozenset({t.id}), form=form))
                break
    return replace_spans(tree, replacements)


def apply_ca_round(tree: DepTree, table: SymbolTable, evidence: set[tuple[str, str]] | None = None) -> DepTree:
    """Run the full determiner and concept/attribute round."""
    tree = _remove_determiners(tree, table)
    tree = _fold_quantifiers(tree, table)
    tree = _fold_possessives(tree, table)
    tree = _fold_of_chains(tree, table)
    tree = _split_evidence_compounds(tree, table, evidence or set())
    return tree


def _compound_key(tree: DepTree, head: Token) -> str:
    """Lowercased lemma key of a noun and its adjacent compound modifiers."""
    ids = [head.id]
    pos = head.id - 1
    while pos >= 1:
        prev = tree.token(pos)
        if prev.head in ids and prev.deprel in ("compound", "nn") and prev.xpos.startswith("NN"):
            ids.append(pos)
            pos -= 1
        else:
            break
    return "_".join(tree.token(i).lemma.lower() for i in sorted(ids))


def collect_evidence_pairs(tree: DepTree) -> list[tuple[str, str]]:
    """(head, modifier) lemma keys from raw "B of A" occurrences."""
    pairs = []
    for base in tree.tokens:
        if not base.xpos.startswith("NN"):
            continue
        for prep in tree.children(base.id):
            if prep.deprel != "prep" or prep.lemma.lower() != "of":
                continue
            for obj in tree.children(prep.id):
                if obj.deprel == "pobj" and obj.xpos.startswith("NN"):
                    pairs.append((_compound_key(tree, base), _compound_key(tree, obj)))
    return pairs


def collect_evidence(trees) -> Counter:
    counts: Counter = Counter()
    for tree in trees:
        counts.update(collect_evidence_pairs(tree))
    return counts


def save_evidence(counts: Counter, path: str | Path) -> None:
    """Write evidence as TSV: head part, modifier part, count."""
    lines = [f"{b}\t{a}\t{c}" for (b, a), c in sorted(counts.items())]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def load_evidence(path: str | Path, min_count: int = 1) -> set[tuple[str, str]]:
    """Read evidence TSV; the count column is optional."""
    pairs = set()
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) not in (2, 3):
            raise ValueError(f"evidence line {lineno}: expected 2 or 3 tab-separated columns, got {len(cols)}")
        count = int(cols[2]) if len(cols) == 3 else 1
        if count >= min_count:
            pairs.add((cols[0], cols[1]))
    return pairs
