"""Tuple scoring: micro- and macro-averaged precision, recall, F1.

Matching is exact after normalization (casefold, whitespace to underscore,
"::" markers preserved) with roles compared strictly.  The relaxed mode
instead accepts a pair when every role shares at least threshold tokens.
"""

from __future__ import annotations

import re
from collections import Counter

from .tuples import ExtractedTuple

_WS = re.compile(r"\s+")
_TOKEN_SPLIT = re.compile(r"[\s_:]+")


def normalize(text: str) -> str:
    return _WS.sub("_", text.strip().casefold())


def tuple_key(t: ExtractedTuple) -> tuple[str, str, str]:
    return (normalize(t.subject), normalize(t.relation), normalize(t.obj))


def _role_tokens(text: str) -> frozenset[str]:
    return frozenset(part for part in _TOKEN_SPLIT.split(text.casefold()) if part)


def _relaxed_match(pred: ExtractedTuple, gold: ExtractedTuple, threshold: int) -> bool:
    for pred_role, gold_role in (
        (pred.subject, gold.subject),
        (pred.relation, gold.relation),
        (pred.obj, gold.obj),
    ):
        if len(_role_tokens(pred_role) & _role_tokens(gold_role)) < threshold:
            return False
    return True


def _true_positives(
    pred: list[ExtractedTuple], gold: list[ExtractedTuple], relaxed: bool, threshold: int
) -> int:
    if not relaxed:
        overlap = Counter(map(tuple_key, pred)) & Counter(map(tuple_key, gold))
        return sum(overlap.values())
    matched = [False] * len(gold)
    tp = 0
    for p in pred:
        for i, g in enumerate(gold):
            if not matched[i] and _relaxed_match(p, g, threshold):
                matched[i] = True
                tp += 1
                break
    return tp


def prf(tp: int, n_pred: int, n_gold: int) -> tuple[float, float, float]:
    """Precision, recall, F1 with the empty-vs-empty convention of 1.0."""
    if n_pred == 0 and n_gold == 0:
        return 1.0, 1.0, 1.0
    precision = tp / n_pred if n_pred else 0.0
    recall = tp / n_gold if n_gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def group_by_sentence(tuples: list[ExtractedTuple]) -> dict[str, list[ExtractedTuple]]:
    grouped: dict[str, list[ExtractedTuple]] = {}
    for t in tuples:
        grouped.setdefault(t.sent_id, []).append(t)
    return grouped


def evaluate(
    pred: list[ExtractedTuple],
    gold: list[ExtractedTuple],
    relaxed: bool = False,
    threshold: int = 1,
    sentence_ids=None,
) -> dict:
    """Score predictions against gold tuples, pooled and per sentence.

    sentence_ids widens the macro denominator with sentences that carry no
    tuples on either side; such sentences score the conventional F1 of 1.0.
    """
    if threshold < 1:
        raise ValueError(f"relaxed threshold must be at least 1, got {threshold}")
    pred_by_sent = group_by_sentence(pred)
    gold_by_sent = group_by_sentence(gold)
    sent_ids = sorted(set(pred_by_sent) | set(gold_by_sent) | set(sentence_ids or ()))

    total_tp = total_pred = total_gold = 0
    per_sentence = {}
    macro_sum = 0.0
    for sid in sent_ids:
        p = pred_by_sent.get(sid, [])
        g = gold_by_sent.get(sid, [])
        tp = _true_positives(p, g, relaxed, threshold)
        precision, recall, f1 = prf(tp, len(p), len(g))
        per_sentence[sid] = {"precision": precision, "recall": recall, "f1": f1}
        macro_sum += f1
        total_tp += tp
        total_pred += len(p)
        total_gold += len(g)

    micro_p, micro_r, micro_f1 = prf(total_tp, total_pred, total_gold)
    return {
        "micro": {"precision": micro_p, "recall": micro_r, "f1": micro_f1},
        "macro": {"f1": macro_sum / len(sent_ids) if sent_ids else 1.0},
        "sentences": per_sentence,
        "counts": {"tp": total_tp, "pred": total_pred, "gold": total_gold},
    }
