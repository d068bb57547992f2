"""Per-sentence symbol table for placeholder tokens.

Chunking rounds replace phrases with placeholder tokens (NP1, CA2, VP3)
and register what they stand for here.  A token form counts as a
placeholder only when it both matches the shape and is registered, so a
natural word that happens to look like NP1 stays an ordinary token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

PLACEHOLDER_SHAPE = re.compile(r"(NP|CA|VP)([1-9]\d*)")


def underscore(text: str) -> str:
    return "_".join(text.split())


@dataclass(frozen=True)
class Phrase:
    """A chunked noun or verb phrase: surface words plus their lemmas."""

    words: tuple[str, ...]
    lemmas: tuple[str, ...]

    def surface(self) -> str:
        return " ".join(self.words)


@dataclass(frozen=True)
class CAUnit:
    """A concept with attribute qualifiers, rendered concept::attr1::attr2.

    Attributes are stored in the order they were attached, so folding
    "regulators of inhibitors of X" right to left yields
    X::inhibitors::regulators.
    """

    concept: str
    attributes: tuple[str, ...] = ()

    def extended(self, attribute: str) -> "CAUnit":
        return CAUnit(self.concept, self.attributes + (attribute,))

    def render(self) -> str:
        return "::".join((underscore(self.concept),) + tuple(underscore(a) for a in self.attributes))


class SymbolTable:
    """Placeholder registry for one sentence.

    The acronym map is document-level and may be shared across the
    sentence tables of one document.
    """

    def __init__(self, acronyms: dict[str, str] | None = None):
        self.acronyms = acronyms if acronyms is not None else {}
        self._entries: dict[str, Phrase | CAUnit] = {}
        self._counters = {"NP": 0, "CA": 0, "VP": 0}

    def add(self, kind: str, value: Phrase | CAUnit) -> str:
        if kind not in self._counters:
            raise ValueError(f"unknown placeholder kind {kind!r}")
        self._counters[kind] += 1
        form = f"{kind}{self._counters[kind]}"
        self._entries[form] = value
        return form

    def is_placeholder(self, form: str) -> bool:
        return form in self._entries and PLACEHOLDER_SHAPE.fullmatch(form) is not None

    def kind_of(self, form: str) -> str | None:
        return form[:2] if self.is_placeholder(form) else None

    def value(self, form: str) -> Phrase | CAUnit:
        return self._entries[form]

    def render(self, form: str) -> str:
        value = self._entries[form]
        if isinstance(value, CAUnit):
            return value.render()
        return underscore(value.surface())

    def as_dict(self) -> dict[str, str]:
        return {form: self.render(form) for form in self._entries}


def is_nominal(token, table: SymbolTable) -> bool:
    """Concept-bearing nodes: NP/CA placeholders, nouns, and pronouns."""
    kind = table.kind_of(token.form)
    if kind in ("NP", "CA"):
        return True
    if kind == "VP":
        return False
    return token.xpos.startswith("NN") or token.xpos == "PRP"


def is_relational(token, table: SymbolTable) -> bool:
    """Relation-bearing nodes: VP placeholders and verbs."""
    kind = table.kind_of(token.form)
    if kind == "VP":
        return True
    if kind in ("NP", "CA"):
        return False
    return token.xpos.startswith("VB")


def render_node(token, table: SymbolTable) -> str:
    """Final surface string for a tuple slot."""
    if table.is_placeholder(token.form):
        return table.render(token.form)
    return token.form
