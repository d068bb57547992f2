"""Tuple extraction from simplified trees (round 5).

Relation nodes (VP placeholders, or bare verbs when chunking was skipped)
yield subject-relation-object facts; prepositions hanging on nominals
yield condition tuples; relation nodes with a subject but no reachable
object yield NIL conditions.  Conjunction expansion copies tuples across
nominal conjuncts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .deptree import DepTree
from .symbols import SymbolTable, is_nominal, is_relational, render_node

NIL = "NIL"
FACT = "fact"
CONDITION = "condition"

RELCL_RELS = {"relcl", "acl:relcl", "rcmod", "acl"}
EXCLUDED_SEARCH_RELS = {"nsubj", "nsubjpass", "conj", "cc", "punct"}


@dataclass(frozen=True)
class ExtractedTuple:
    subject: str
    relation: str
    obj: str
    label: str
    rule: str
    sent_id: str = ""


@dataclass(frozen=True)
class _Rec:
    subj: int
    rel_node: int | None
    rel_text: str | None
    obj: int | None
    label: str
    rule: str


def _conj_set(tree: DepTree, table: SymbolTable, start: int, member) -> list[int]:
    """Transitive conj children of start that satisfy member, head to child only."""
    found: list[int] = []
    stack = [start]
    seen = {start}
    while stack:
        cur = stack.pop(0)
        for child in tree.children(cur):
            if child.deprel == "conj" and child.id not in seen and member(child, table):
                seen.add(child.id)
                found.append(child.id)
                stack.append(child.id)
    return found


def _inherited_child(tree: DepTree, table: SymbolTable, start: int, rels: set[str]) -> int | None:
    """Nominal child via rels, inherited through conj ancestors when absent."""
    cur = tree.token(start)
    while True:
        for child in tree.children(cur.id):
            if child.deprel in rels and is_nominal(child, table):
                return child.id
        if cur.deprel == "conj" and cur.head != 0:
            cur = tree.token(cur.head)
        else:
            return None


def _object_search(tree: DepTree, table: SymbolTable, start: int, max_depth: int) -> int | None:
    """Breadth-first nominal search below start, bounded by arc depth.

    Subject, conjunction, and punctuation arcs are never crossed.  Within a
    depth level the leftmost nominal wins.
    """
    frontier = [start]
    visited = {start}
    for _ in range(max_depth):
        level: list[int] = []
        for nid in frontier:
            for child in tree.children(nid):
                if child.deprel in EXCLUDED_SEARCH_RELS or child.id in visited:
                    continue
                visited.add(child.id)
                level.append(child.id)
        level.sort()
        for cid in level:
            if is_nominal(tree.token(cid), table):
                return cid
        if not level:
            return None
        frontier = level
    return None


def _agent(tree: DepTree, table: SymbolTable, rid: int) -> int | None:
    """Passive agent: pobj of a by-preposition, loose or absorbed into the VP."""
    for prep in tree.children(rid):
        if prep.deprel == "prep" and prep.lemma.lower() == "by":
            for obj in tree.children(prep.id):
                if obj.deprel == "pobj" and is_nominal(obj, table):
                    return obj.id
    rel = tree.token(rid)
    if table.kind_of(rel.form) == "VP" and table.value(rel.form).words[-1].lower() == "by":
        for obj in tree.children(rid):
            if obj.deprel == "pobj" and is_nominal(obj, table):
                return obj.id
    return None


def _prep_conditions(tree: DepTree, table: SymbolTable) -> list[_Rec]:
    recs = []
    for t in tree.tokens:
        if not is_nominal(t, table):
            continue
        for prep in tree.children(t.id):
            if prep.deprel != "prep" or prep.lemma.lower() == "of":
                continue
            adverbs = [c.form for c in tree.children(prep.id) if c.deprel == "advmod"]
            name = "_".join(adverbs + [prep.form])
            for obj in tree.children(prep.id):
                if obj.deprel == "pobj" and is_nominal(obj, table):
                    recs.append(_Rec(t.id, None, name, obj.id, CONDITION, "prep_condition"))
    return recs


def extract_tuples(tree: DepTree, table: SymbolTable, sent_id: str = "", max_depth: int = 3) -> list[ExtractedTuple]:
    """Run all extraction rules over one simplified tree."""
    relation_ids = [t.id for t in tree.tokens if is_relational(t, table)]
    facts: list[_Rec] = []
    nil_subject: dict[int, int] = {}
    has_object: set[int] = set()

    for rid in relation_ids:
        passive_theme = _inherited_child(tree, table, rid, {"nsubjpass"})
        if passive_theme is not None:
            agent = _agent(tree, table, rid)
            if agent is not None:
                facts.append(_Rec(agent, rid, None, passive_theme, FACT, "svo"))
                has_object.add(rid)
            else:
                # agentless passive: the theme is all we can anchor
                nil_subject[rid] = passive_theme
            continue
        subject = _inherited_child(tree, table, rid, {"nsubj"})
        if subject is None:
            continue
        obj = _object_search(tree, table, rid, max_depth)
        if obj is not None:
            facts.append(_Rec(subject, rid, None, obj, FACT, "svo"))
            has_object.add(rid)
        else:
            nil_subject[rid] = subject

    for t in tree.tokens:
        if not is_nominal(t, table):
            continue
        for child in tree.children(t.id):
            if child.deprel not in RELCL_RELS or not is_relational(child, table):
                continue
            for vid in [child.id] + _conj_set(tree, table, child.id, is_relational):
                obj = _object_search(tree, table, vid, max_depth)
                if obj is not None:
                    facts.append(_Rec(t.id, vid, None, obj, FACT, "relcl"))
                    has_object.add(vid)
                else:
                    nil_subject.setdefault(vid, t.id)

    conditions = _prep_conditions(tree, table)

    expanded: list[_Rec] = []
    for rec in facts + conditions:
        subjects = [rec.subj] + _conj_set(tree, table, rec.subj, is_nominal)
        objects = [rec.obj] + _conj_set(tree, table, rec.obj, is_nominal)
        for s in subjects:
            for o in objects:
                if (s, o) != (rec.subj, rec.obj):
                    expanded.append(_Rec(s, rec.rel_node, rec.rel_text, o, rec.label, "conj_expand"))

    nils: list[_Rec] = []
    for rid in relation_ids:
        if rid in has_object or rid not in nil_subject:
            continue
        subject = nil_subject[rid]
        nils.append(_Rec(subject, rid, None, None, CONDITION, "nil_general"))
        # one NIL tuple per subject conjunct; object slots are never expanded
        for s in _conj_set(tree, table, subject, is_nominal):
            nils.append(_Rec(s, rid, None, None, CONDITION, "conj_expand"))

    out: list[ExtractedTuple] = []
    seen = set()
    for rec in facts + expanded + conditions + nils:
        subject = render_node(tree.token(rec.subj), table)
        relation = rec.rel_text if rec.rel_text is not None else render_node(tree.token(rec.rel_node), table)
        obj = NIL if rec.obj is None else render_node(tree.token(rec.obj), table)
        key = (subject, relation, obj, rec.label, rec.rule)
        if key in seen:
            continue
        seen.add(key)
        out.append(ExtractedTuple(subject, relation, obj, rec.label, rec.rule, sent_id))
    return out


def to_record(t: ExtractedTuple) -> dict:
    return {
        "sent_id": t.sent_id,
        "subject": t.subject,
        "relation": t.relation,
        "object": t.obj,
        "label": t.label,
        "rule": t.rule,
    }


def from_record(record: dict) -> ExtractedTuple:
    return ExtractedTuple(
        subject=record["subject"],
        relation=record["relation"],
        obj=record["object"],
        label=record.get("label", ""),
        rule=record.get("rule", ""),
        sent_id=record.get("sent_id", ""),
    )


def write_tuples_jsonl(path: str | Path, tuples: list[ExtractedTuple]) -> None:
    lines = [json.dumps(to_record(t), ensure_ascii=False) for t in tuples]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def load_tuple_file(path: str | Path) -> tuple[list[ExtractedTuple], set[str]]:
    """Read a JSONL tuple file plus the set of sentence ids it mentions.

    Lines are either one tuple each or one sentence record each; sentence
    records carry {"sent_id", "tuples": [{subject, relation, object, role,
    rule}, ...]} and may be empty.  A sent_id appearing on two sentence
    records is an error.
    """
    out = []
    seen_sentences: set[str] = set()
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"line {lineno}: invalid JSON: {exc}") from None
        if "tuples" in record:
            sid = record.get("sent_id", "")
            if sid in seen_sentences:
                raise ValueError(f"line {lineno}: duplicate sent_id {sid!r}")
            seen_sentences.add(sid)
            for entry in record["tuples"]:
                out.append(
                    ExtractedTuple(
                        subject=entry["subject"],
                        relation=entry["relation"],
                        obj=entry["object"],
                        label=entry.get("role", entry.get("label", "")),
                        rule=entry.get("rule", ""),
                        sent_id=sid,
                    )
                )
        else:
            parsed = from_record(record)
            seen_sentences.add(parsed.sent_id)
            out.append(parsed)
    return out, seen_sentences


def read_tuples_jsonl(path: str | Path) -> list[ExtractedTuple]:
    return load_tuple_file(path)[0]
