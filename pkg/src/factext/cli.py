"""Command line interface: extraction, inspection, scoring, evidence collection.

Exit codes: 0 success, 1 runtime or per-sentence failure (partial results are
still written), 2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import shlex
import sys
import time
from dataclasses import replace as dc_replace
from datetime import datetime, timezone
from pathlib import Path

from .concepts import collect_evidence, load_evidence, save_evidence
from .deptree import ConlluError, DepTree, parse_conllu
from .evaluate import evaluate
from .pipeline import (
    Config,
    ConfigError,
    SentenceRun,
    load_config,
    run_sentence,
    write_results_jsonl,
)
from .providers import ProviderError, SubprocessProvider
from .tuples import load_tuple_file


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="factext", description="Rule-based fact and condition extraction")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_pipeline_flags(p):
        p.add_argument("--input", required=True, help="input corpus")
        p.add_argument("--format", choices=["conllu", "text"], default="conllu", help="parsed CoNLL-U or one sentence per line")
        p.add_argument("--mode", choices=["frozen", "reparse"], help="override configured mode")
        p.add_argument("--parser-cmd", help="parser provider command (required for text input and reparse mode)")
        p.add_argument("--config", help="TOML config file with an [extract] table (default $FACTEXT_CONFIG)")
        p.add_argument("--evidence", help="evidence TSV; collected and written first when missing")
        p.add_argument("--depth", type=int, help="override object search depth")
        p.add_argument("--disable-stage", action="append", type=int, default=[], metavar="N", help="disable round N (repeatable)")

    ex = sub.add_parser("extract", help="extract tuples from a corpus")
    add_pipeline_flags(ex)
    ex.add_argument("--output", required=True, help="JSONL file, one sentence record per line")
    ex.add_argument("--acronyms-out", help="write the document acronym map as JSON")

    ins = sub.add_parser("inspect", help="show each round's simplified sentence and the tuples")
    add_pipeline_flags(ins)
    ins.add_argument("--sent-id", help="inspect this sentence instead of the first one")

    ev = sub.add_parser("evaluate", help="score predicted tuples against gold tuples")
    ev.add_argument("--pred", required=True, help="predicted tuples JSONL")
    ev.add_argument("--gold", required=True, help="gold tuples JSONL")
    ev.add_argument("--relaxed", nargs="?", const=1, default=None, type=int, metavar="K",
                    help="token-overlap matching, at least K shared tokens per role (default strict)")
    ev.add_argument("--out", help="write the score report JSON here as well")

    ce = sub.add_parser("collect-evidence", help="harvest attribute-of-concept evidence pairs")
    ce.add_argument("--input", required=True, help="CoNLL-U file of parsed sentences")
    ce.add_argument("--output", required=True, help="evidence TSV to write")
    return parser


def _pipeline_config(args) -> Config:
    config_path = args.config or os.environ.get("FACTEXT_CONFIG")
    config = load_config(config_path) if config_path else Config()
    overrides = {}
    if args.mode is not None:
        overrides["mode"] = args.mode
    if args.depth is not None:
        overrides["max_depth"] = args.depth
    if args.disable_stage:
        overrides["disabled_stages"] = config.disabled_stages | frozenset(args.disable_stage)
    if overrides:
        config = Config(**{**config.__dict__, **overrides})
    return config.validated()


def _make_provider(args, config: Config):
    needed = config.mode == "reparse" or args.format == "text"
    if not needed:
        return None
    if not args.parser_cmd:
        raise ConfigError("text input and reparse mode require --parser-cmd")
    return SubprocessProvider(shlex.split(args.parser_cmd))


def _load_corpus(args, provider) -> list[DepTree]:
    raw = Path(args.input).read_text(encoding="utf-8")
    if args.format == "conllu":
        trees = parse_conllu(raw)
    else:
        trees = [provider.parse(line.strip()) for line in raw.splitlines() if line.strip()]
    out = []
    for i, tree in enumerate(trees, start=1):
        out.append(tree if tree.sent_id else dc_replace(tree, sent_id=f"s{i}"))
    return out


def _resolve_evidence(args, trees, min_count: int) -> set[tuple[str, str]]:
    if not args.evidence:
        return set()
    path = Path(args.evidence)
    if not path.exists():
        save_evidence(collect_evidence(trees), path)
    return load_evidence(path, min_count=min_count)


def _config_snapshot(config: Config) -> dict:
    snapshot = dict(config.__dict__)
    snapshot["disabled_stages"] = sorted(snapshot["disabled_stages"])
    return snapshot


def cmd_extract(args) -> int:
    started = datetime.now(timezone.utc).isoformat()
    clock = time.monotonic()
    manifest = {
        "command": "extract",
        "started": started,
        "input": args.input,
        "format": args.format,
        "output": args.output,
        "evidence": args.evidence,
        "model_id": None,
    }
    provider = None
    try:
        config = _pipeline_config(args)
        manifest["config"] = _config_snapshot(config)
        provider = _make_provider(args, config)
        manifest["model_id"] = getattr(provider, "model_id", None)
        trees = _load_corpus(args, provider)
        evidence = _resolve_evidence(args, trees, config.evidence_min_count)

        runs: list[SentenceRun] = []
        failures: dict[str, str] = {}
        acronyms: dict[str, str] = {}
        reparser = provider if config.mode == "reparse" else None
        for tree in trees:
            try:
                runs.append(run_sentence(tree, config=config, acronyms=acronyms, evidence=evidence, parser=reparser))
            except (ValueError, ProviderError) as exc:
                failures[tree.sent_id] = str(exc)

        write_results_jsonl(args.output, runs)
        if args.acronyms_out:
            Path(args.acronyms_out).write_text(
                json.dumps(acronyms, ensure_ascii=False, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
        manifest["sentences"] = len(runs)
        manifest["tuples"] = sum(len(run.tuples) for run in runs)
        manifest["failures"] = failures
        for sid, message in failures.items():
            print(f"sentence {sid} failed: {message}", file=sys.stderr)
        print(f"extracted {manifest['tuples']} tuples from {len(runs)} sentences")
        return 1 if failures else 0
    except Exception as exc:
        manifest["error"] = str(exc)
        raise
    finally:
        if provider is not None:
            provider.close()
        manifest["elapsed_s"] = round(time.monotonic() - clock, 6)
        Path(args.output + ".manifest.json").write_text(
            json.dumps(manifest, ensure_ascii=False, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )


def cmd_inspect(args) -> int:
    provider = None
    try:
        config = _pipeline_config(args)
        provider = _make_provider(args, config)
        trees = _load_corpus(args, provider)
        if not trees:
            raise ConfigError("input contains no sentences")
        if args.sent_id is not None:
            matches = [t for t in trees if t.sent_id == args.sent_id]
            if not matches:
                raise ConfigError(f"no sentence with sent_id {args.sent_id!r}")
            tree = matches[0]
        else:
            tree = trees[0]
        evidence = _resolve_evidence(args, trees, config.evidence_min_count)
        reparser = provider if config.mode == "reparse" else None
        run = run_sentence(tree, config=config, acronyms={}, evidence=evidence, parser=reparser)
    finally:
        if provider is not None:
            provider.close()

    print(f"sent_id: {run.sent_id}")
    print(f"input: {run.stages[0][1].text}")
    shown = {name: t for name, t in run.stages}
    for number in (1, 2, 3, 4):
        name = f"round{number}"
        print(f"{name}: {shown[name].text}" if name in shown else f"{name}: skipped (disabled)")
    print("symbols:")
    for placeholder, surface in run.table.as_dict().items():
        print(f"  {placeholder} = {surface}")
    print("acronyms:")
    for short, long in sorted(run.table.acronyms.items()):
        print(f"  {short} = {long}")
    if not config.stage_enabled(5):
        print("tuples: skipped (disabled)")
    else:
        print("tuples:")
        for t in run.tuples:
            print(f"  {t.label}({t.subject}, {t.relation}, {t.obj})  [{t.rule}]")
    return 0


def cmd_evaluate(args) -> int:
    pred, pred_ids = load_tuple_file(args.pred)
    gold, gold_ids = load_tuple_file(args.gold)
    relaxed = args.relaxed is not None
    report = evaluate(
        pred, gold, relaxed=relaxed, threshold=args.relaxed if relaxed else 1, sentence_ids=pred_ids | gold_ids
    )
    mode = f"relaxed(>={args.relaxed})" if relaxed else "strict"
    print(f"{'average':<10} {'precision':>10} {'recall':>10} {'f1':>10}   ({mode}, {report['counts']['pred']} pred / {report['counts']['gold']} gold)")
    micro = report["micro"]
    print(f"{'micro':<10} {micro['precision']:>10.4f} {micro['recall']:>10.4f} {micro['f1']:>10.4f}")
    print(f"{'macro':<10} {'':>10} {'':>10} {report['macro']['f1']:>10.4f}")
    payload = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(payload + "\n", encoding="utf-8")
    else:
        print(payload)
    return 0


def cmd_collect_evidence(args) -> int:
    trees = parse_conllu(Path(args.input).read_text(encoding="utf-8"))
    counts = collect_evidence(trees)
    save_evidence(counts, args.output)
    print(f"collected {len(counts)} evidence pairs from {len(trees)} sentences")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "extract": cmd_extract,
        "inspect": cmd_inspect,
        "evaluate": cmd_evaluate,
        "collect-evidence": cmd_collect_evidence,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConlluError, ProviderError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
