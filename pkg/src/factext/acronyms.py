"""Acronym discovery and parenthetical removal (simplification round 1).

A parenthetical holding a single short form is matched against the token
window before the opening bracket: first by initials over a window suffix,
then by an anchored in-order character walk.  Matched or not, parentheticals
are removed from the tree; matches are recorded in the document acronym map.
"""

from __future__ import annotations

from .deptree import DepTree, remove_tokens
from .symbols import SymbolTable

OPEN_FORMS = {"(", "-LRB-", "["}
CLOSE_FORMS = {")", "-RRB-", "]"}

MAX_WINDOW = 8
MIN_LETTERS = 2
MAX_LETTERS = 10


def _letters(text: str) -> str:
    return "".join(ch for ch in text if ch.isalpha()).lower()


def is_short_form(form: str) -> bool:
    """Candidate short forms: 2..10 letters with at least one uppercase.

    Digits and hyphens are allowed; they are ignored during matching but
    preserved in the stored short form.
    """
    letters = _letters(form)
    return MIN_LETTERS <= len(letters) <= MAX_LETTERS and any(ch.isupper() for ch in form)


def match_long_form(short: str, window: list[str]) -> list[str] | None:
    """Return the long-form words for a short form, or None.

    Tries initials over the window suffix of matching length first, then an
    anchored subsequence: the first letter must start a window word, the
    remaining letters must appear in order, and the last letter must land
    inside the final window word.
    """
    letters = _letters(short)
    if not MIN_LETTERS <= len(letters) <= MAX_LETTERS or not window:
        return None

    k = len(letters)
    if k <= len(window):
        suffix = window[-k:]
        initials = "".join(_letters(w)[:1] for w in suffix)
        if initials == letters:
            return suffix

    # Anchored subsequence, preferring the rightmost (shortest) start.
    for start in range(len(window) - 1, -1, -1):
        words = window[start:]
        first = _letters(words[0])
        if not first or first[0] != letters[0]:
            continue
        stream = [(i, ch) for i, word in enumerate(words) for ch in _letters(word)]
        pos = 0
        landed = -1
        matched = True
        for li, letter in enumerate(letters):
            if li == 0:
                # anchor: first letter must be the first char of words[0]
                landed = 0
                pos = 1
                continue
            while pos < len(stream) and stream[pos][1] != letter:
                pos += 1
            if pos == len(stream):
                matched = False
                break
            landed = stream[pos][0]
            pos += 1
        if matched and landed == len(words) - 1:
            return words
    return None


def find_parentheticals(tree: DepTree) -> list[tuple[int, int]]:
    """Outermost (open, close) bracket token id pairs, left to right."""
    pairs = []
    stack = []
    for t in tree.tokens:
        if t.form in OPEN_FORMS:
            stack.append(t.id)
        elif t.form in CLOSE_FORMS and stack:
            open_id = stack.pop()
            if not stack:
                pairs.append((open_id, t.id))
    return pairs


def apply_acronym_round(tree: DepTree, table: SymbolTable) -> DepTree:
    """Record acronym definitions and strip all parenthetical spans."""
    drop: set[int] = set()
    root_id = tree.root.id
    for open_id, close_id in find_parentheticals(tree):
        inner = [tree.token(i) for i in range(open_id + 1, close_id)]
        if len(inner) == 1 and is_short_form(inner[0].form):
            window_start = max(1, open_id - MAX_WINDOW)
            window = [tree.token(i).form for i in range(window_start, open_id) if tree.token(i).id not in drop]
            long_form = match_long_form(inner[0].form, window)
            if long_form is not None:
                table.acronyms.setdefault(inner[0].form, " ".join(long_form))
        span = set(range(open_id, close_id + 1))
        if root_id in span:
            continue
        drop |= span
    if not drop:
        return tree
    return remove_tokens(tree, drop)
