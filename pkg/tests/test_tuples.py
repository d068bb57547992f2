"""Tuple extraction rules on simplified trees."""

import pytest

from conftest import tok, tree_of
from factext.concepts import apply_ca_round
from factext.nounphrases import apply_np_round
from factext.symbols import SymbolTable
from factext.tuples import (
    ExtractedTuple,
    extract_tuples,
    from_record,
    read_tuples_jsonl,
    to_record,
    write_tuples_jsonl,
)
from factext.verbphrases import apply_vp_round


def simplify(tree, evidence=None):
    table = SymbolTable()
    out = apply_np_round(tree, table)
    out = apply_ca_round(out, table, evidence)
    out = apply_vp_round(out, table)
    return out, table


def extract(tree, evidence=None, max_depth=3):
    out, table = simplify(tree, evidence)
    return extract_tuples(out, table, max_depth=max_depth)


def keys(tuples):
    return {(t.subject, t.relation, t.obj, t.label, t.rule) for t in tuples}


def test_basic_svo_fact():
    t = tree_of(
        tok(1, "KLF13", 2, "nsubj", xpos="NNP", upos="PROPN"),
        tok(2, "binds", 0, "root", xpos="VBZ", upos="VERB"),
        tok(3, "DNA", 2, "dobj", xpos="NNP", upos="PROPN"),
        tok(4, ".", 2, "punct", xpos=".", upos="PUNCT"),
    )
    assert keys(extract(t)) == {("KLF13", "binds", "DNA", "fact", "svo")}


def test_relation_without_subject_is_skipped():
    t = tree_of(
        tok(1, "binds", 0, "root", xpos="VBZ", upos="VERB"),
        tok(2, "DNA", 1, "dobj", xpos="NNP", upos="PROPN"),
    )
    assert extract(t) == []


def test_nil_condition_when_no_object_reachable():
    t = tree_of(
        tok(1, "cases", 2, "nsubj", xpos="NNS"),
        tok(2, "grew", 0, "root", xpos="VBD", upos="VERB"),
        tok(3, ".", 2, "punct", xpos=".", upos="PUNCT"),
    )
    assert keys(extract(t)) == {("cases", "grew", "NIL", "condition", "nil_general")}


def test_relcl_and_prep_condition():
    t = tree_of(
        tok(1, "ChIP", 2, "nsubj", xpos="NNP", upos="PROPN"),
        tok(2, "detected", 0, "root", xpos="VBD", upos="VERB"),
        tok(3, "GR", 2, "dobj", xpos="NNP", upos="PROPN"),
        tok(4, "strongly", 5, "advmod", xpos="RB", upos="ADV"),
        tok(5, "binding", 3, "relcl", xpos="VBG", upos="VERB"),
        tok(6, "at", 5, "prep", xpos="IN", upos="ADP"),
        tok(7, "the", 9, "det", xpos="DT", upos="DET"),
        tok(8, "KLF13", 9, "compound", xpos="NNP", upos="PROPN"),
        tok(9, "promoter", 6, "pobj"),
        tok(10, "only", 11, "advmod", xpos="RB", upos="ADV"),
        tok(11, "in", 9, "prep", xpos="IN", upos="ADP"),
        tok(12, "sensitive", 13, "amod", xpos="JJ", upos="ADJ"),
        tok(13, "PDXs", 11, "pobj", xpos="NNS"),
        tok(14, ".", 2, "punct", xpos=".", upos="PUNCT"),
    )
    assert keys(extract(t)) == {
        ("ChIP", "detected", "GR", "fact", "svo"),
        ("GR", "strongly_binding_at", "KLF13_promoter", "fact", "relcl"),
        ("KLF13_promoter", "only_in", "sensitive_PDXs", "condition", "prep_condition"),
    }


def test_of_preposition_never_becomes_condition():
    # no concept round here, so "of" survives as a loose preposition
    t = tree_of(
        tok(1, "GR", 2, "nsubj", xpos="NNP", upos="PROPN"),
        tok(2, "induced", 0, "root", xpos="VBD", upos="VERB"),
        tok(3, "expression", 2, "dobj"),
        tok(4, "of", 3, "prep", xpos="IN", upos="ADP"),
        tok(5, "KLF13", 4, "pobj", xpos="NNP", upos="PROPN"),
        tok(6, ".", 2, "punct", xpos=".", upos="PUNCT"),
    )
    table = SymbolTable()
    out = apply_np_round(t, table)
    out = apply_vp_round(out, table)
    got = keys(extract_tuples(out, table))
    assert got == {("GR", "induced", "expression", "fact", "svo")}


def test_passive_with_absorbed_agent_preposition():
    t = tree_of(
        tok(1, "KLF13", 3, "nsubjpass", xpos="NNP", upos="PROPN"),
        tok(2, "was", 3, "auxpass", xpos="VBD", upos="AUX"),
        tok(3, "cloned", 0, "root", xpos="VBN", upos="VERB"),
        tok(4, "by", 3, "prep", xpos="IN", upos="ADP"),
        tok(5, "researchers", 4, "pobj", xpos="NNS"),
        tok(6, ".", 3, "punct", xpos=".", upos="PUNCT"),
    )
    assert keys(extract(t)) == {("researchers", "was_cloned_by", "KLF13", "fact", "svo")}


def test_passive_with_loose_agent_preposition():
    # chunking disabled, so "by" stays a child of the raw verb
    t = tree_of(
        tok(1, "KLF13", 3, "nsubjpass", xpos="NNP", upos="PROPN"),
        tok(2, "was", 3, "auxpass", xpos="VBD", upos="AUX"),
        tok(3, "cloned", 0, "root", xpos="VBN", upos="VERB"),
        tok(4, "by", 3, "prep", xpos="IN", upos="ADP"),
        tok(5, "researchers", 4, "pobj", xpos="NNS"),
    )
    got = keys(extract_tuples(t, SymbolTable()))
    assert got == {("researchers", "cloned", "KLF13", "fact", "svo")}


def test_agentless_passive_yields_nil_on_theme():
    t = tree_of(
        tok(1, "KLF13", 3, "nsubjpass", xpos="NNP", upos="PROPN"),
        tok(2, "was", 3, "auxpass", xpos="VBD", upos="AUX"),
        tok(3, "cloned", 0, "root", xpos="VBN", upos="VERB"),
        tok(4, ".", 3, "punct", xpos=".", upos="PUNCT"),
    )
    assert keys(extract(t)) == {("KLF13", "was_cloned", "NIL", "condition", "nil_general")}


def conj_tree():
    return tree_of(
        tok(1, "KLF13", 4, "nsubj", xpos="NNP", upos="PROPN"),
        tok(2, "and", 1, "cc", xpos="CC", upos="CCONJ"),
        tok(3, "GATA4", 1, "conj", xpos="NNP", upos="PROPN"),
        tok(4, "activate", 0, "root", xpos="VBP", upos="VERB"),
        tok(5, "genes", 4, "dobj", xpos="NNS"),
        tok(6, "and", 5, "cc", xpos="CC", upos="CCONJ"),
        tok(7, "pathways", 5, "conj", xpos="NNS"),
        tok(8, ".", 4, "punct", xpos=".", upos="PUNCT"),
    )


def test_conj_expansion_covers_cross_product():
    got = keys(extract(conj_tree()))
    assert got == {
        ("KLF13", "activate", "genes", "fact", "svo"),
        ("KLF13", "activate", "pathways", "fact", "conj_expand"),
        ("GATA4", "activate", "genes", "fact", "conj_expand"),
        ("GATA4", "activate", "pathways", "fact", "conj_expand"),
    }


def test_subject_inherited_through_conjoined_verbs():
    t = tree_of(
        tok(1, "cases", 2, "nsubj", xpos="NNS"),
        tok(2, "grew", 0, "root", xpos="VBD", upos="VERB"),
        tok(3, "and", 2, "cc", xpos="CC", upos="CCONJ"),
        tok(4, "spread", 2, "conj", xpos="VBD", upos="VERB"),
        tok(5, "fear", 4, "dobj"),
    )
    assert keys(extract(t)) == {
        ("cases", "spread", "fear", "fact", "svo"),
        ("cases", "grew", "NIL", "condition", "nil_general"),
    }


def test_nil_expansion_covers_subject_conjuncts_only():
    t = tree_of(
        tok(1, "cases", 4, "nsubj", xpos="NNS"),
        tok(2, "and", 1, "cc", xpos="CC", upos="CCONJ"),
        tok(3, "deaths", 1, "conj", xpos="NNS"),
        tok(4, "grew", 0, "root", xpos="VBD", upos="VERB"),
    )
    assert keys(extract(t)) == {
        ("cases", "grew", "NIL", "condition", "nil_general"),
        ("deaths", "grew", "NIL", "condition", "conj_expand"),
    }


def test_prep_condition_expanded_over_object_conjuncts():
    t = tree_of(
        tok(1, "expression", 2, "nsubj"),
        tok(2, "rose", 0, "root", xpos="VBD", upos="VERB"),
        tok(3, "in", 1, "prep", xpos="IN", upos="ADP"),
        tok(4, "livers", 3, "pobj", xpos="NNS"),
        tok(5, "and", 4, "cc", xpos="CC", upos="CCONJ"),
        tok(6, "kidneys", 4, "conj", xpos="NNS"),
    )
    got = keys(extract(t))
    assert ("expression", "in", "livers", "condition", "prep_condition") in got
    assert ("expression", "in", "kidneys", "condition", "conj_expand") in got


def test_identical_rendered_tuples_are_deduplicated():
    t = tree_of(
        tok(1, "cases", 4, "nsubj", xpos="NNS"),
        tok(2, "and", 1, "cc", xpos="CC", upos="CCONJ"),
        tok(3, "cases", 1, "conj", xpos="NNS"),
        tok(4, "grew", 0, "root", xpos="VBD", upos="VERB"),
    )
    tuples = extract(t)
    assert keys(tuples) == {
        ("cases", "grew", "NIL", "condition", "nil_general"),
        ("cases", "grew", "NIL", "condition", "conj_expand"),
    }
    assert len(tuples) == 2


def depth_tree():
    return tree_of(
        tok(1, "he", 2, "nsubj", xpos="PRP", upos="PRON"),
        tok(2, "told", 0, "root", xpos="VBD", upos="VERB"),
        tok(3, "reporters", 2, "dobj", xpos="NNS"),
        tok(4, "she", 5, "nsubj", xpos="PRP", upos="PRON"),
        tok(5, "seemed", 2, "ccomp", xpos="VBD", upos="VERB"),
        tok(6, "to", 7, "aux", xpos="TO", upos="PART"),
        tok(7, "think", 5, "ccomp", xpos="VB", upos="VERB"),
        tok(8, "about", 7, "prep", xpos="IN", upos="ADP"),
        tok(9, "achieving", 8, "pcomp", xpos="VBG", upos="VERB"),
        tok(10, "success", 9, "dobj"),
        tok(11, ".", 2, "punct", xpos=".", upos="PUNCT"),
    )


def test_search_depth_bounds_object_discovery():
    shallow = keys(extract(depth_tree(), max_depth=3))
    deep = keys(extract(depth_tree(), max_depth=5))
    assert ("she", "seemed", "NIL", "condition", "nil_general") in shallow
    assert ("she", "seemed", "success", "fact", "svo") in deep
    assert ("he", "told", "reporters", "fact", "svo") in shallow and ("he", "told", "reporters", "fact", "svo") in deep


def test_object_search_does_not_cross_subject_arcs():
    # the only nominal below the verb hangs off the subject
    t = tree_of(
        tok(1, "cells", 3, "nsubj", xpos="NNS"),
        tok(2, "treated", 1, "acl", xpos="VBN", upos="VERB"),
        tok(3, "responded", 0, "root", xpos="VBD", upos="VERB"),
    )
    got = keys(extract_tuples(t, SymbolTable()))
    assert ("cells", "responded", "NIL", "condition", "nil_general") in got


def test_degraded_extraction_without_chunking():
    # raw tags drive classification when no placeholder was ever created
    t = tree_of(
        tok(1, "ChIP", 2, "nsubj", xpos="NNP", upos="PROPN"),
        tok(2, "detected", 0, "root", xpos="VBD", upos="VERB"),
        tok(3, "GR", 2, "dobj", xpos="NNP", upos="PROPN"),
    )
    got = keys(extract_tuples(t, SymbolTable()))
    assert got == {("ChIP", "detected", "GR", "fact", "svo")}


def test_sent_id_carried_onto_tuples():
    t = tree_of(
        tok(1, "KLF13", 2, "nsubj", xpos="NNP", upos="PROPN"),
        tok(2, "binds", 0, "root", xpos="VBZ", upos="VERB"),
        tok(3, "DNA", 2, "dobj", xpos="NNP", upos="PROPN"),
    )
    out, table = simplify(t)
    tuples = extract_tuples(out, table, sent_id="s7")
    assert {t.sent_id for t in tuples} == {"s7"}


def test_record_round_trip():
    t = ExtractedTuple("KLF13::expression", "only_in", "sensitive_PDXs", "condition", "prep_condition", "g3")
    assert from_record(to_record(t)) == t
    assert to_record(t)["object"] == "sensitive_PDXs"


def test_jsonl_round_trip(tmp_path):
    tuples = [
        ExtractedTuple("a", "b", "c", "fact", "svo", "s1"),
        ExtractedTuple("d", "e", "NIL", "condition", "nil_general", "s2"),
    ]
    path = tmp_path / "tuples.jsonl"
    write_tuples_jsonl(path, tuples)
    assert read_tuples_jsonl(path) == tuples


def test_jsonl_reader_accepts_sentence_records(tmp_path):
    path = tmp_path / "grouped.jsonl"
    path.write_text(
        '{"sent_id": "s1", "sentence": "x", "tuples": ['
        '{"subject": "a", "relation": "b", "object": "c", "role": "fact", "rule": "svo"}]}\n',
        encoding="utf-8",
    )
    assert read_tuples_jsonl(path) == [ExtractedTuple("a", "b", "c", "fact", "svo", "s1")]


def test_jsonl_reader_rejects_duplicate_sentence_records(tmp_path):
    path = tmp_path / "grouped.jsonl"
    path.write_text(
        '{"sent_id": "s1", "tuples": []}\n{"sent_id": "s1", "tuples": []}\n',
        encoding="utf-8",
    )
    with pytest.raises(ValueError, match="line 2.*duplicate sent_id"):
        read_tuples_jsonl(path)


def test_jsonl_reader_reports_bad_line(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"subject": "a", "relation": "b", "object": "c"}\nnot json\n', encoding="utf-8")
    with pytest.raises(ValueError, match="line 2"):
        read_tuples_jsonl(path)
