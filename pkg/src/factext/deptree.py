"""Dependency trees: CoNLL-U parsing, validation, and span surgery.

Every rewrite returns a new tree with token ids renumbered to 1..n and the
sentence text rebuilt from the token forms, so later rounds can always
trust positions and surface strings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

_RANGE_ID = re.compile(r"\d+-\d+")
_EMPTY_ID = re.compile(r"\d+\.\d+")


class ConlluError(ValueError):
    """Malformed CoNLL-U input or tree, located by block and line when known."""

    def __init__(self, message: str, block: int | None = None, line: int | None = None):
        parts = []
        if block is not None:
            parts.append(f"block {block}")
        if line is not None:
            parts.append(f"line {line}")
        where = ", ".join(parts)
        super().__init__(f"{where}: {message}" if where else message)
        self.block = block
        self.line = line


@dataclass(frozen=True)
class Token:
    id: int
    form: str
    lemma: str
    upos: str
    xpos: str
    head: int
    deprel: str
    feats: str = "_"
    deps: str = "_"
    misc: str = "_"


@dataclass(frozen=True)
class DepTree:
    tokens: tuple[Token, ...]
    sent_id: str = ""
    text: str = ""
    doc_id: str = ""
    extra_comments: tuple[str, ...] = ()

    def token(self, tid: int) -> Token:
        return self.tokens[tid - 1]

    @property
    def root(self) -> Token:
        for t in self.tokens:
            if t.head == 0:
                return t
        raise ConlluError("tree has no root")

    def children(self, tid: int) -> tuple[Token, ...]:
        return tuple(t for t in self.tokens if t.head == tid)

    def surface(self) -> str:
        return " ".join(t.form for t in self.tokens)


@dataclass(frozen=True)
class Subtree:
    head: int
    ids: frozenset[int]
    start: int
    end: int
    contiguous: bool


@dataclass(frozen=True)
class Replacement:
    """One placeholder token standing in for a set of existing tokens."""

    ids: frozenset[int]
    form: str
    upos: str = "NOUN"
    xpos: str = "NN"
    lemma: str | None = None
    deprel: str | None = None


def _check_structure(tokens: Sequence[Token]) -> None:
    n = len(tokens)
    if n == 0:
        raise ValueError("tree has no tokens")
    roots = [t.id for t in tokens if t.head == 0]
    if len(roots) != 1:
        raise ValueError(f"expected exactly one root token, found {len(roots)}")
    for t in tokens:
        if not 0 <= t.head <= n:
            raise ValueError(f"token {t.id} has head {t.head} outside 0..{n}")
        if t.head == t.id:
            raise ValueError(f"token {t.id} heads itself")
    kids: dict[int, list[int]] = {}
    for t in tokens:
        kids.setdefault(t.head, []).append(t.id)
    seen = set()
    stack = [roots[0]]
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        stack.extend(kids.get(cur, ()))
    if len(seen) != n:
        missing = sorted(set(range(1, n + 1)) - seen)
        raise ValueError(f"tokens not reachable from the root (cycle): {missing}")


def validate(tree: DepTree) -> None:
    """Raise ConlluError if the tree violates the structural contract."""
    for i, t in enumerate(tree.tokens, start=1):
        if t.id != i:
            raise ConlluError(f"token ids must be contiguous from 1; position {i} holds id {t.id}")
    try:
        _check_structure(tree.tokens)
    except ValueError as exc:
        raise ConlluError(str(exc)) from None


def parse_conllu(data: str) -> list[DepTree]:
    """Parse CoNLL-U text into trees, one per block holding token lines.

    Blocks holding only comments are skipped.  Multiword token ranges and
    empty nodes are rejected; errors carry the block index and line number.
    """
    trees: list[DepTree] = []
    block_no = 0
    comments: list[tuple[int, str]] = []
    rows: list[tuple[int, str]] = []

    def flush() -> None:
        nonlocal block_no, comments, rows
        if not comments and not rows:
            return
        block_no += 1
        if rows:
            trees.append(_build_tree(block_no, comments, rows))
        comments, rows = [], []

    for lineno, line in enumerate(data.splitlines(), start=1):
        if not line.strip():
            flush()
        elif line.startswith("#"):
            comments.append((lineno, line))
        else:
            rows.append((lineno, line))
    flush()
    return trees


def _build_tree(block: int, comments: list[tuple[int, str]], rows: list[tuple[int, str]]) -> DepTree:
    doc_id = ""
    sent_id = ""
    text = ""
    extras: list[str] = []
    for _, line in comments:
        key, sep, value = line.lstrip("#").strip().partition("=")
        key, value = key.strip(), value.strip()
        if sep and key == "newdoc id":
            doc_id = value
        elif sep and key == "sent_id":
            sent_id = value
        elif sep and key == "text":
            text = value
        else:
            extras.append(line)

    tokens: list[Token] = []
    for position, (lineno, line) in enumerate(rows, start=1):
        cols = line.split("\t")
        if len(cols) != 10:
            raise ConlluError(f"expected 10 tab-separated columns, got {len(cols)}", block, lineno)
        if any(col == "" for col in cols):
            raise ConlluError("empty column", block, lineno)
        cid = cols[0]
        if _RANGE_ID.fullmatch(cid):
            raise ConlluError("multiword token ranges are not supported", block, lineno)
        if _EMPTY_ID.fullmatch(cid):
            raise ConlluError("empty nodes are not supported", block, lineno)
        if not cid.isdigit():
            raise ConlluError(f"bad token id {cid!r}", block, lineno)
        if int(cid) != position:
            raise ConlluError(f"token ids must be contiguous from 1; expected {position}, got {cid}", block, lineno)
        if not cols[6].isdigit():
            raise ConlluError(f"bad head {cols[6]!r}", block, lineno)
        tokens.append(
            Token(
                id=position,
                form=cols[1],
                lemma=cols[2],
                upos=cols[3],
                xpos=cols[4],
                feats=cols[5],
                head=int(cols[6]),
                deprel=cols[7],
                deps=cols[8],
                misc=cols[9],
            )
        )

    try:
        _check_structure(tokens)
    except ValueError as exc:
        raise ConlluError(str(exc), block, rows[0][0]) from None

    if not text:
        text = " ".join(t.form for t in tokens)
    return DepTree(
        tokens=tuple(tokens),
        sent_id=sent_id,
        text=text,
        doc_id=doc_id,
        extra_comments=tuple(extras),
    )


def serialize_conllu(tree: DepTree) -> str:
    """Render one tree as a CoNLL-U block terminated by a blank line."""
    lines = []
    if tree.doc_id:
        lines.append(f"# newdoc id = {tree.doc_id}")
    if tree.sent_id:
        lines.append(f"# sent_id = {tree.sent_id}")
    if tree.text:
        lines.append(f"# text = {tree.text}")
    lines.extend(tree.extra_comments)
    for t in tree.tokens:
        lines.append(
            "\t".join(
                (str(t.id), t.form, t.lemma, t.upos, t.xpos, t.feats, str(t.head), t.deprel, t.deps, t.misc)
            )
        )
    return "\n".join(lines) + "\n\n"


def descendants(tree: DepTree, tid: int) -> frozenset[int]:
    """Ids of the subtree rooted at tid, including tid itself."""
    seen = {tid}
    stack = [tid]
    while stack:
        cur = stack.pop()
        for child in tree.children(cur):
            if child.id not in seen:
                seen.add(child.id)
                stack.append(child.id)
    return frozenset(seen)


def subtree(tree: DepTree, tid: int) -> Subtree:
    """Describe the subtree at tid: id set, surface bounds, contiguity."""
    ids = descendants(tree, tid)
    return Subtree(
        head=tid,
        ids=ids,
        start=min(ids),
        end=max(ids),
        contiguous=len(ids) == max(ids) - min(ids) + 1,
    )


def replace_spans(tree: DepTree, replacements: Sequence[Replacement]) -> DepTree:
    """Replace each id set with a single placeholder token.

    Each set must contain exactly one token whose head lies outside it; the
    placeholder takes over that token's attachment and sits at the leftmost
    replaced position.  Outside dependents re-attach to the placeholder.
    Sets must be pairwise disjoint.
    """
    if not replacements:
        return tree
    n = len(tree.tokens)
    claimed: dict[int, int] = {}
    for r_idx, rep in enumerate(replacements):
        if not rep.ids:
            raise ValueError(f"replacement {rep.form!r} has an empty span")
        for tid in rep.ids:
            if not 1 <= tid <= n:
                raise ValueError(f"token id {tid} outside 1..{n}")
            if tid in claimed:
                other = replacements[claimed[tid]]
                raise ValueError(f"replacement spans overlap at token {tid}: {other.form!r} and {rep.form!r}")
            claimed[tid] = r_idx

    span_heads: list[int] = []
    for rep in replacements:
        external = [tid for tid in rep.ids if tree.token(tid).head not in rep.ids]
        if len(external) != 1:
            raise ValueError(
                f"replacement {rep.form!r} must contain exactly one token headed outside it, found {len(external)}"
            )
        span_heads.append(external[0])

    anchors = {min(rep.ids): r_idx for r_idx, rep in enumerate(replacements)}
    order: list[tuple[str, int]] = []
    new_id: dict[int, int] = {}
    for old in range(1, n + 1):
        if old in anchors:
            order.append(("new", anchors[old]))
        elif old in claimed:
            continue
        else:
            order.append(("keep", old))
    placeholder_id: dict[int, int] = {}
    for pos, (kind, value) in enumerate(order, start=1):
        if kind == "new":
            placeholder_id[value] = pos
        else:
            new_id[value] = pos
    for tid, r_idx in claimed.items():
        new_id[tid] = placeholder_id[r_idx]

    out: list[Token] = []
    for pos, (kind, value) in enumerate(order, start=1):
        if kind == "keep":
            t = tree.token(value)
            out.append(replace(t, id=pos, head=new_id[t.head] if t.head else 0))
        else:
            rep = replacements[value]
            span_head = tree.token(span_heads[value])
            head = new_id[span_head.head] if span_head.head else 0
            out.append(
                Token(
                    id=pos,
                    form=rep.form,
                    lemma=rep.lemma if rep.lemma is not None else rep.form,
                    upos=rep.upos,
                    xpos=rep.xpos,
                    head=head,
                    deprel=rep.deprel if rep.deprel is not None else span_head.deprel,
                )
            )
    _check_structure(out)
    return replace(tree, tokens=tuple(out), text=" ".join(t.form for t in out))


def replace_span(
    tree: DepTree,
    ids: Iterable[int],
    form: str,
    upos: str = "NOUN",
    xpos: str = "NN",
    lemma: str | None = None,
    deprel: str | None = None,
) -> DepTree:
    """Replace one id set with a single placeholder token."""
    rep = Replacement(ids=frozenset(ids), form=form, upos=upos, xpos=xpos, lemma=lemma, deprel=deprel)
    return replace_spans(tree, [rep])


def remove_tokens(tree: DepTree, ids: Iterable[int]) -> DepTree:
    """Drop tokens, re-heading surviving dependents to the nearest kept ancestor."""
    drop = set(ids)
    if not drop:
        return tree
    n = len(tree.tokens)
    for tid in drop:
        if not 1 <= tid <= n:
            raise ValueError(f"token id {tid} outside 1..{n}")
    if tree.root.id in drop:
        raise ValueError("cannot remove the root token")

    new_id: dict[int, int] = {}
    for old in range(1, n + 1):
        if old not in drop:
            new_id[old] = len(new_id) + 1

    def kept_ancestor(head: int) -> int:
        while head != 0 and head in drop:
            head = tree.token(head).head
        return head

    out = []
    for old in range(1, n + 1):
        if old in drop:
            continue
        t = tree.token(old)
        head = kept_ancestor(t.head)
        out.append(replace(t, id=new_id[old], head=new_id[head] if head else 0))
    _check_structure(out)
    return replace(tree, tokens=tuple(out), text=" ".join(t.form for t in out))
