"""Deterministic dependency parser models.

The default model is a pure-Python heuristic tagger/attacher: a closed-class
lexicon plus suffix rules assign Penn tags, then a single left-to-right pass
attaches each token to a neighbour picked by its word class.  The output is
not linguistically perfect, but it is deterministic, structurally valid
(single root, no cycles), and close enough to treebank conventions that the
downstream rewrite rounds can work with it.

A spaCy-backed model can be selected by name when spaCy and the named
pipeline are installed; nothing in this package imports spaCy at module
level.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

HEURISTIC_MODEL_ID = "heuristic-en-1.0"

__all__ = ["Word", "HeuristicModel", "SpacyModel", "load_model", "tokenize"]


@dataclass(frozen=True)
class Word:
    """One output token; ``head`` is 1-based, 0 for the root."""

    form: str
    lemma: str
    upos: str
    xpos: str
    head: int
    deprel: str


# Words may contain internal hyphens/apostrophes; any other non-space
# character becomes a token of its own.
_TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:['\-][A-Za-z0-9]+)*|[^\sA-Za-z0-9]")

_NUMBER_RE = re.compile(r"[0-9]+(?:[.,][0-9]+)*")

# Chunk placeholders from the rewrite rounds; under reparse mode these come
# back through the parser and must keep their word class.
_NOMINAL_PLACEHOLDER_RE = re.compile(r"(?:NP|CA)[0-9]+")
_VERBAL_PLACEHOLDER_RE = re.compile(r"VP[0-9]+")

OPEN_BRACKETS = {"(", "["}
CLOSE_BRACKETS = {")", "]"}
SENT_PUNCT = {".", ",", ";", ":", "!", "?"}

DETERMINERS = {
    "the", "a", "an", "this", "that", "these", "those",
    "all", "no", "each", "every", "some", "any", "both", "either", "neither",
}
PREPOSITIONS = {
    "in", "on", "at", "of", "by", "for", "with", "from", "into", "onto",
    "within", "without", "during", "after", "before", "between", "among",
    "under", "over", "through", "throughout", "via", "per", "against",
    "toward", "towards", "upon", "across", "along", "despite", "until",
    "since", "as", "than", "like", "near", "around", "about",
}
CONJUNCTIONS = {"and", "or", "but", "nor", "yet", "plus"}
PRONOUNS = {
    "i", "we", "you", "he", "she", "it", "they",
    "me", "us", "him", "her", "them",
}
BE_FORMS = {
    "am": "VBP", "is": "VBZ", "are": "VBP", "was": "VBD", "were": "VBD",
    "be": "VB", "been": "VBN", "being": "VBG",
}
HAVE_FORMS = {"have": "VBP", "has": "VBZ", "had": "VBD", "having": "VBG"}
DO_FORMS = {"do": "VBP", "does": "VBZ", "did": "VBD"}
MODALS = {"will", "would", "can", "could", "shall", "should", "may", "might", "must"}
NEGATIONS = {"not", "n't", "never"}
ADVERBS = {
    "only", "also", "very", "often", "always", "already", "still", "then",
    "thus", "therefore", "however", "moreover", "further", "rather", "quite",
    "too", "here", "there", "well", "again", "once",
}
ADJECTIVES = {
    "sensitive", "resistant", "large", "small", "high", "low", "new", "novel",
    "significant", "important", "effective", "present", "absent", "positive",
    "negative", "same", "different", "several", "many", "few", "human",
    "normal", "clinical", "major", "minor", "common", "rare", "early", "late",
    "good", "bad", "strong", "weak", "main", "other", "such", "first", "last",
}
JJ_SUFFIXES = (
    "ive", "ous", "able", "ible", "ant", "ent", "ful", "less", "ary",
)

# Base forms used to recognise inflected verbs; -ed/-s/-ing variants are
# derived from these by suffix stripping.
VERB_STEMS = {
    "achieve", "activate", "affect", "alter", "analyse", "analyze", "appear",
    "assess", "associate", "become", "begin", "bind", "block", "cause",
    "clone", "compare", "conduct", "confirm", "contain", "continue",
    "contribute", "correlate", "cause", "decrease", "demonstrate", "depend",
    "describe", "detect", "determine", "develop", "differ", "emerge",
    "encode", "enhance", "evaluate", "examine", "exhibit", "explain",
    "explore", "express", "fail", "find", "follow", "generate", "grow",
    "identify", "improve", "include", "indicate", "induce", "inhibit",
    "involve", "know", "lead", "localize", "maintain", "measure", "mediate",
    "modulate", "obtain", "observe", "occur", "perform", "persist", "play",
    "predict", "prevent", "produce", "promote", "propose", "provide",
    "quantify", "receive", "recognize", "recover", "reduce", "regulate",
    "remain", "remove", "report", "repress", "require", "resolve", "respond",
    "reveal", "say", "see", "seem", "show", "spread", "stimulate", "suggest",
    "support", "suppress", "tell", "test", "think", "transcribe", "translate",
    "treat", "validate", "vary",
}
IRREGULAR_PAST = {
    "arose", "became", "began", "bound", "brought", "came", "fell", "felt",
    "found", "gave", "grew", "held", "kept", "led", "left", "lost", "made",
    "meant", "met", "ran", "rose", "said", "saw", "sent", "showed", "sought",
    "spread", "taught", "thought", "told", "took", "underwent", "went",
    "wrote",
}

_VERBAL_TAGS = {"VB", "VBD", "VBZ", "VBP", "VBG", "VBN"}


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text)


def _verb_tag(low: str) -> str | None:
    if low in IRREGULAR_PAST:
        return "VBD"
    if low in VERB_STEMS:
        return "VBP"
    if low.endswith("ing") and len(low) > 4:
        if low[:-3] in VERB_STEMS or low[:-3] + "e" in VERB_STEMS:
            return "VBG"
        return None
    if low.endswith("ed") and len(low) > 3:
        return "VBD"
    if low.endswith("s") and (low[:-1] in VERB_STEMS or low[:-2] in VERB_STEMS):
        return "VBZ"
    return None


def _tag_one(form: str, index: int) -> tuple[str, str]:
    """Return (upos, xpos) for one token, ignoring right context."""
    low = form.lower()
    if form in OPEN_BRACKETS:
        return "PUNCT", "-LRB-"
    if form in CLOSE_BRACKETS:
        return "PUNCT", "-RRB-"
    if form in SENT_PUNCT:
        return "PUNCT", form
    if not any(ch.isalnum() for ch in form):
        return "SYM", "SYM"
    if _NUMBER_RE.fullmatch(form):
        return "NUM", "CD"
    if _NOMINAL_PLACEHOLDER_RE.fullmatch(form):
        return "PROPN", "NNP"
    if _VERBAL_PLACEHOLDER_RE.fullmatch(form):
        return "VERB", "VBD"
    if low in DETERMINERS:
        return "DET", "DT"
    if low == "to":
        return "PART", "TO"
    if low in PREPOSITIONS:
        return "ADP", "IN"
    if low in CONJUNCTIONS:
        return "CCONJ", "CC"
    if low in PRONOUNS:
        return "PRON", "PRP"
    if low in BE_FORMS:
        return "AUX", BE_FORMS[low]
    if low in HAVE_FORMS:
        return "AUX", HAVE_FORMS[low]
    if low in DO_FORMS:
        return "AUX", DO_FORMS[low]
    if low in MODALS:
        return "AUX", "MD"
    if low in NEGATIONS or (low.endswith("ly") and len(low) > 3):
        return "ADV", "RB"
    verbal = _verb_tag(low)
    if verbal is not None:
        return "VERB", verbal
    if low in ADVERBS:
        return "ADV", "RB"
    if low in ADJECTIVES or low.endswith(JJ_SUFFIXES):
        return "ADJ", "JJ"
    marked = any(ch.isupper() for ch in form[1:]) or any(ch.isdigit() for ch in form)
    if marked or (form[0].isupper() and index > 0):
        return "PROPN", "NNP"
    if low.endswith("s") and len(low) > 2:
        return "NOUN", "NNS"
    return "NOUN", "NN"


def _tag(forms: list[str]) -> tuple[list[str], list[str]]:
    upos: list[str] = []
    xpos: list[str] = []
    for i, form in enumerate(forms):
        u, x = _tag_one(form, i)
        upos.append(u)
        xpos.append(x)
    # A nominal context beats the verb lexicon: "the spread", "a measure".
    for i in range(1, len(forms)):
        if _VERBAL_PLACEHOLDER_RE.fullmatch(forms[i]):
            continue
        if upos[i] == "VERB" and xpos[i - 1] in ("DT", "JJ"):
            upos[i] = "NOUN"
            xpos[i] = "NNS" if forms[i].lower().endswith("s") else "NN"
    return upos, xpos


def _lemma(form: str, upos: str) -> str:
    low = form.lower()
    if upos == "AUX" and low in BE_FORMS:
        return "be"
    return low


class HeuristicModel:
    """Lexicon- and suffix-driven tagger with rule-based attachment."""

    id = HEURISTIC_MODEL_ID

    def parse(self, text: str) -> list[Word]:
        forms = tokenize(text)
        if not forms:
            return []
        upos, xpos = _tag(forms)
        heads, rels = _attach(forms, upos, xpos)
        return [
            Word(
                form=forms[i],
                lemma=_lemma(forms[i], upos[i]),
                upos=upos[i],
                xpos=xpos[i],
                head=heads[i],
                deprel=rels[i],
            )
            for i in range(len(forms))
        ]


def _attach(forms: list[str], upos: list[str], xpos: list[str]) -> tuple[list[int], list[str]]:
    """Assign 1-based heads (0 = root) and deprels; guarantees a valid tree."""
    n = len(forms)
    is_verb = [upos[i] == "VERB" for i in range(n)]
    is_aux = [upos[i] == "AUX" for i in range(n)]
    is_noun = [xpos[i].startswith("NN") for i in range(n)]
    is_content = [is_verb[i] or is_aux[i] or is_noun[i] or xpos[i] == "PRP" for i in range(n)]

    # Maximal runs of adjacent NN* tokens; the last token heads the run.
    run_end = list(range(n))
    for i in range(n - 2, -1, -1):
        if is_noun[i] and is_noun[i + 1]:
            run_end[i] = run_end[i + 1]
    run_start = list(range(n))
    for i in range(1, n):
        if is_noun[i] and is_noun[i - 1]:
            run_start[i] = run_start[i - 1]

    root = _pick_root(upos, xpos, run_end)
    # Passive shape: a be-form somewhere before a past/past-participle root.
    passive = is_verb[root] and xpos[root] in ("VBD", "VBN") and any(
        is_aux[j] and forms[j].lower() in BE_FORMS for j in range(root)
    )

    def next_where(start: int, pred) -> int | None:
        for j in range(start + 1, n):
            if pred(j):
                return j
        return None

    def prev_where(start: int, pred) -> int | None:
        for j in range(start - 1, -1, -1):
            if pred(j):
                return j
        return None

    heads: list[int | None] = [None] * n
    rels: list[str | None] = [None] * n
    has_dobj: set[int] = set()
    subject_taken = False

    def attach(i: int, head: int | None, rel: str) -> None:
        if head is None or head == i:
            head, rel = root, "dep"
        heads[i] = head
        rels[i] = rel

    def left_governor(i: int) -> tuple[int | None, bool]:
        """Nearest content/prep token left of i's run, noting a CC en route."""
        saw_cc = False
        j = (run_start[i] if is_noun[i] else i) - 1
        while j >= 0:
            if xpos[j] == "CC":
                saw_cc = True
            elif xpos[j] == "IN" or is_content[j]:
                return j, saw_cc
            j -= 1
        return None, saw_cc

    for i in range(n):
        if i == root:
            continue
        t = xpos[i]
        low = forms[i].lower()

        if upos[i] == "PUNCT":
            if t == "-LRB-":
                attach(i, next_where(i, lambda j: upos[j] != "PUNCT"), "punct")
            elif t == "-RRB-":
                attach(i, prev_where(i, lambda j: upos[j] != "PUNCT"), "punct")
            else:
                attach(i, root, "punct")
        elif t == "DT":
            nxt = next_where(i, lambda j: is_noun[j])
            attach(i, run_end[nxt] if nxt is not None else None, "det")
        elif t == "CD":
            prv = prev_where(i, lambda j: is_noun[j])
            nxt = next_where(i, lambda j: is_noun[j])
            if prv is not None and prv == i - 1:
                attach(i, run_end[prv], "nummod")
            elif nxt is not None:
                attach(i, run_end[nxt], "nummod")
            else:
                attach(i, root, "dep")
        elif t == "JJ":
            nxt = next_where(i, lambda j: is_noun[j])
            if nxt is not None:
                attach(i, run_end[nxt], "amod")
            else:
                prv = prev_where(i, lambda j: is_verb[j])
                attach(i, prv, "acomp" if prv is not None else "dep")
        elif low in NEGATIONS:
            target = next_where(i, lambda j: is_verb[j]) or prev_where(i, lambda j: is_verb[j])
            attach(i, target, "neg")
        elif t == "RB":
            target = next_where(i, lambda j: is_verb[j] or xpos[j] in ("IN", "JJ"))
            if target is None:
                target = prev_where(i, lambda j: is_verb[j])
            attach(i, target, "advmod")
        elif t == "TO":
            nxt = next_where(i, lambda j: upos[j] != "PUNCT")
            if nxt is not None and is_verb[nxt]:
                attach(i, nxt, "aux")
            else:
                anchor = prev_where(i, lambda j: is_verb[j] or is_noun[j])
                attach(i, anchor, "prep")
        elif is_aux[i]:
            nxt = next_where(i, lambda j: is_verb[j])
            if nxt is not None:
                rel = "auxpass" if forms[i].lower() in BE_FORMS and xpos[nxt] in ("VBD", "VBN") else "aux"
                attach(i, nxt, rel)
            else:
                attach(i, root, "cop")
        elif is_verb[i]:
            prev_verb = prev_where(i, lambda j: is_verb[j])
            prev_in = prev_where(i, lambda j: is_content[j] or xpos[j] == "IN")
            if t == "VBG" and prev_in is not None and xpos[prev_in] == "IN":
                attach(i, prev_in, "pcomp")
            elif t == "VBG" and prev_in is not None and is_noun[prev_in]:
                attach(i, run_end[prev_in], "acl")
            elif prev_verb is not None:
                saw_cc = any(xpos[j] == "CC" for j in range(prev_verb + 1, i))
                attach(i, prev_verb, "conj" if saw_cc else "ccomp")
            else:
                attach(i, root, "dep")
        elif is_noun[i] or upos[i] == "PRON":
            if is_noun[i] and i != run_end[i]:
                attach(i, run_end[i], "compound")
                continue
            if (
                i > 0
                and xpos[i - 1] == "-LRB-"
                and i + 1 < n
                and xpos[i + 1] == "-RRB-"
            ):
                before = prev_where(i - 1, lambda j: is_noun[j])
                if before is not None:
                    attach(i, run_end[before], "appos")
                    continue
            if upos[i] == "PRON":
                verb = next_where(i, lambda j: is_verb[j])
                if verb is not None:
                    attach(i, verb, "nsubjpass" if verb == root and passive else "nsubj")
                    if verb == root:
                        subject_taken = True
                    continue
            gov, saw_cc = left_governor(i)
            if gov is not None and is_noun[gov] and saw_cc:
                attach(i, run_end[gov], "conj")
            elif gov is not None and xpos[gov] == "IN":
                attach(i, gov, "pobj")
            elif i < root and not subject_taken:
                attach(i, root, "nsubjpass" if passive else "nsubj")
                subject_taken = True
            elif gov is not None and (is_verb[gov] or is_aux[gov]):
                target = gov if is_verb[gov] else root
                if target not in has_dobj:
                    attach(i, target, "dobj")
                    has_dobj.add(target)
                else:
                    attach(i, target, "dep")
            elif gov is not None and is_noun[gov]:
                attach(i, run_end[gov], "appos")
            else:
                attach(i, root, "dep")
        elif t == "IN":
            anchor = prev_where(i, lambda j: is_verb[j] or is_noun[j])
            attach(i, run_end[anchor] if anchor is not None and is_noun[anchor] else anchor, "prep")
        elif t == "CC":
            nxt = next_where(i, lambda j: is_content[j])
            if nxt is not None and (is_verb[nxt] or is_aux[nxt]):
                attach(i, prev_where(i, lambda j: is_verb[j]), "cc")
            elif nxt is not None:
                prv = prev_where(i, lambda j: is_noun[j])
                attach(i, run_end[prv] if prv is not None else None, "cc")
            else:
                attach(i, root, "cc")
        else:
            attach(i, root, "dep")

    out_heads = [0] * n
    out_rels = ["root"] * n
    for i in range(n):
        if i == root:
            continue
        out_heads[i] = (heads[i] if heads[i] is not None else root) + 1
        out_rels[i] = rels[i] or "dep"
    _break_cycles(out_heads, out_rels, root)
    return out_heads, out_rels


def _pick_root(upos: list[str], xpos: list[str], run_end: list[int]) -> int:
    n = len(upos)
    verbs = [i for i in range(n) if upos[i] == "VERB"]
    if verbs:
        finite = [i for i in verbs if xpos[i] in ("VBD", "VBZ", "VBP")]
        return finite[0] if finite else verbs[0]
    aux = [i for i in range(n) if upos[i] == "AUX"]
    if aux:
        for j in range(aux[0] + 1, n):
            if upos[j] in ("ADJ", "NOUN", "PROPN", "PRON", "NUM"):
                return run_end[j] if xpos[j].startswith("NN") else j
        return aux[0]
    for i in range(n):
        if xpos[i].startswith("NN") or xpos[i] == "PRP":
            return run_end[i]
    return 0


def _break_cycles(heads: list[int], rels: list[str], root: int) -> None:
    """Re-head to the root any token whose head chain never reaches it."""
    n = len(heads)
    for i in range(n):
        seen = set()
        j = i
        while heads[j] != 0:
            if j in seen:
                heads[i] = root + 1
                rels[i] = "dep"
                break
            seen.add(j)
            j = heads[j] - 1


class SpacyModel:
    """Wrapper for an installed spaCy pipeline; selected by pipeline name."""

    def __init__(self, name: str):
        import spacy

        self._nlp = spacy.load(name)
        version = self._nlp.meta.get("version", "unknown")
        self.id = f"spacy-{name}-{version}"

    def parse(self, text: str) -> list[Word]:
        words = []
        for tok in self._nlp(text):
            if tok.head is tok:
                head, rel = 0, "root"
            else:
                head, rel = tok.head.i + 1, tok.dep_.lower()
                rel = "root" if rel == "root" else rel
            words.append(
                Word(
                    form=tok.text,
                    lemma=tok.lemma_,
                    upos=tok.pos_,
                    xpos=tok.tag_,
                    head=head,
                    deprel=rel,
                )
            )
        return words


def load_model(name: str = "heuristic"):
    """Build the named model; unknown names are treated as spaCy pipelines."""
    if name == "heuristic":
        return HeuristicModel()
    return SpacyModel(name)
