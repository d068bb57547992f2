"""Parser providers for reparse mode.

A provider turns sentence text into one dependency tree.  The subprocess
provider speaks a line protocol: the child announces itself with
"READY <model-id>", each request is "PARSE <json-escaped sentence>", and
each response is one CoNLL-U block terminated by a blank line, or a single
"ERROR <message>" line.
"""

from __future__ import annotations

import json
import subprocess

from .deptree import DepTree, parse_conllu


class ProviderError(RuntimeError):
    """The provider failed to start, answer, or produce a usable tree."""


class CallableProvider:
    """Adapter for in-process parsers, mainly used by tests."""

    def __init__(self, fn):
        self.fn = fn
        self.requests: list[str] = []

    def parse(self, text: str) -> DepTree:
        self.requests.append(text)
        return self.fn(text)


class SubprocessProvider:
    """Line-protocol client around an external parser process."""

    def __init__(self, command: list[str]):
        self.proc = subprocess.Popen(
            command,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
        greeting = self.proc.stdout.readline()
        if not greeting.startswith("READY "):
            self.close()
            raise ProviderError(f"expected READY greeting, got {greeting.strip()!r}")
        self.model_id = greeting.strip().split(" ", 1)[1]

    def parse(self, text: str) -> DepTree:
        if self.proc.poll() is not None:
            raise ProviderError("provider process has exited")
        self.proc.stdin.write("PARSE " + json.dumps(text, ensure_ascii=False) + "\n")
        self.proc.stdin.flush()
        lines: list[str] = []
        while True:
            raw = self.proc.stdout.readline()
            if raw == "":
                raise ProviderError("provider stream ended mid-response")
            line = raw.rstrip("\n")
            if not lines and line.startswith("ERROR "):
                raise ProviderError(line[len("ERROR "):])
            if not line.strip():
                break
            lines.append(line)
        trees = parse_conllu("\n".join(lines) + "\n\n")
        if len(trees) != 1:
            raise ProviderError(f"expected one tree per response, got {len(trees)}")
        return trees[0]

    def close(self) -> None:
        if self.proc.stdin and not self.proc.stdin.closed:
            self.proc.stdin.close()
        try:
            self.proc.wait(timeout=5)
        except subprocess.TimeoutExpired:
            self.proc.kill()
            self.proc.wait()

    def __enter__(self) -> "SubprocessProvider":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
