"""End-to-end processing: one sentence through the rewrite rounds, documents
through shared acronym state, with per-stage trees kept for inspection.

Frozen mode rewrites the input tree in place round by round.  Reparse mode
re-parses the serialized sentence text through a parser provider after
every round, as the original two-pass design did.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace as dc_replace
from pathlib import Path

from .acronyms import apply_acronym_round
from .concepts import apply_ca_round
from .deptree import DepTree
from .nounphrases import apply_np_round
from .symbols import SymbolTable
from .tuples import ExtractedTuple, extract_tuples
from .verbphrases import apply_vp_round

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

ALL_STAGES = (1, 2, 3, 4, 5)
_PLAIN_CAPITALIZED = re.compile(r"[A-Z][a-z]+")


class ConfigError(ValueError):
    """Invalid engine configuration."""


@dataclass(frozen=True)
class Config:
    max_depth: int = 3
    truecase_initial: bool = True
    mode: str = "frozen"
    disabled_stages: frozenset[int] = frozenset()
    evidence_min_count: int = 1

    def stage_enabled(self, stage: int) -> bool:
        return stage not in self.disabled_stages

    def validated(self) -> "Config":
        if self.mode not in ("frozen", "reparse"):
            raise ConfigError(f"mode must be frozen or reparse, got {self.mode!r}")
        if self.max_depth < 1:
            raise ConfigError(f"max_depth must be at least 1, got {self.max_depth}")
        bad = sorted(set(self.disabled_stages) - set(ALL_STAGES))
        if bad:
            raise ConfigError(f"unknown stages to disable: {bad}")
        if self.evidence_min_count < 1:
            raise ConfigError(f"evidence_min_count must be at least 1, got {self.evidence_min_count}")
        if self.stage_enabled(5) and not any(self.stage_enabled(s) for s in (2, 3, 4)):
            raise ConfigError("tuple extraction requires at least one of the chunking rounds 2, 3, 4")
        return self


_CONFIG_KEYS = {"max_depth", "truecase_initial", "mode", "disabled_stages", "evidence_min_count"}


def load_config(path: str) -> Config:
    """Read a TOML config; engine settings live in the [extract] table."""
    with open(path, "rb") as handle:
        data = tomllib.load(handle)
    section = data.get("extract", {})
    unknown = sorted(set(section) - _CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys in [extract]: {unknown}")
    kwargs = dict(section)
    if "disabled_stages" in kwargs:
        kwargs["disabled_stages"] = frozenset(int(s) for s in kwargs["disabled_stages"])
    return Config(**kwargs).validated()


def truecase_tree(tree: DepTree) -> DepTree:
    """Lowercase a plainly capitalized sentence-initial token.

    Forms with internal capitals (ChIP, KLF13, GR) are left alone.
    """
    if not tree.tokens:
        return tree
    first = tree.tokens[0]
    if not _PLAIN_CAPITALIZED.fullmatch(first.form):
        return tree
    lowered = dc_replace(first, form=first.form.lower(), lemma=first.lemma.lower())
    tokens = (lowered,) + tree.tokens[1:]
    return dc_replace(tree, tokens=tokens, text=" ".join(t.form for t in tokens))


@dataclass
class SentenceRun:
    sent_id: str
    stages: list[tuple[str, DepTree]]
    table: SymbolTable
    tuples: list[ExtractedTuple]

    def stage_tree(self, name: str) -> DepTree:
        for stage_name, tree in self.stages:
            if stage_name == name:
                return tree
        raise KeyError(name)

    @property
    def final_tree(self) -> DepTree:
        return self.stages[-1][1]


@dataclass
class DocumentRun:
    acronyms: dict[str, str]
    sentences: list[SentenceRun] = field(default_factory=list)

    @property
    def all_tuples(self) -> list[ExtractedTuple]:
        return [t for run in self.sentences for t in run.tuples]


def run_sentence(
    tree: DepTree,
    config: Config | None = None,
    acronyms: dict[str, str] | None = None,
    evidence: set[tuple[str, str]] | None = None,
    parser=None,
) -> SentenceRun:
    """Push one parsed sentence through the enabled rounds."""
    config = (config or Config()).validated()
    if config.mode == "reparse" and parser is None:
        raise ConfigError("reparse mode requires a parser provider")
    table = SymbolTable(acronyms=acronyms if acronyms is not None else {})

    if config.truecase_initial:
        tree = truecase_tree(tree)
    stages = [("input", tree)]

    rounds = {
        1: lambda t: apply_acronym_round(t, table),
        2: lambda t: apply_np_round(t, table),
        3: lambda t: apply_ca_round(t, table, evidence),
        4: lambda t: apply_vp_round(t, table),
    }
    for number in (1, 2, 3, 4):
        if not config.stage_enabled(number):
            continue
        tree = rounds[number](tree)
        if config.mode == "reparse":
            reparsed = parser.parse(tree.text)
            tree = dc_replace(reparsed, sent_id=tree.sent_id, doc_id=tree.doc_id)
        stages.append((f"round{number}", tree))

    tuples: list[ExtractedTuple] = []
    if config.stage_enabled(5):
        tuples = extract_tuples(tree, table, sent_id=tree.sent_id, max_depth=config.max_depth)
    return SentenceRun(sent_id=tree.sent_id, stages=stages, table=table, tuples=tuples)


def result_record(run: SentenceRun) -> dict:
    """One sentence's extraction output as a plain JSON-ready record."""
    return {
        "sent_id": run.sent_id,
        "sentence": run.stages[0][1].text,
        "tuples": [
            {"subject": t.subject, "relation": t.relation, "object": t.obj, "role": t.label, "rule": t.rule}
            for t in run.tuples
        ],
        "symbols": run.table.as_dict(),
        "stages": [{"stage": name, "text": tree.text} for name, tree in run.stages],
    }


def write_results_jsonl(path: str | Path, runs: list[SentenceRun]) -> None:
    lines = [json.dumps(result_record(run), ensure_ascii=False, sort_keys=True) for run in runs]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def run_document(
    trees,
    config: Config | None = None,
    evidence: set[tuple[str, str]] | None = None,
    parser=None,
) -> DocumentRun:
    """Process sentences in order, accumulating the document acronym map."""
    config = (config or Config()).validated()
    doc = DocumentRun(acronyms={})
    for tree in trees:
        doc.sentences.append(
            run_sentence(tree, config=config, acronyms=doc.acronyms, evidence=evidence, parser=parser)
        )
    return doc
