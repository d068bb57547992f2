"""Line protocol server and batch converter.

Protocol, one request per line on stdin:

    READY <model-id>          <- greeting, printed once at startup
    PARSE <json string>       -> one CoNLL-U block terminated by a blank line
                              -> or a single line ``ERROR <message>``

An empty sentence yields an empty block (just the blank terminator).  Errors
never end the session; the next request is served normally.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .model import Word

__all__ = ["BridgeSession", "block_lines", "serve", "batch_convert"]


@dataclass
class BridgeSession:
    """One server lifetime: a single model instance and a request count."""

    model: object
    requests: int = 0
    errors: int = 0
    _out: object = field(default=None, repr=False)

    def handle(self, line: str) -> list[str]:
        """Map one request line to the lines of its response."""
        if not line.startswith("PARSE "):
            self.errors += 1
            return ["ERROR request must start with PARSE"]
        try:
            payload = json.loads(line[len("PARSE "):])
            if not isinstance(payload, str):
                raise ValueError("request payload must be a JSON string")
            words = self.model.parse(payload)
        except Exception as exc:  # surfaced to the client, session continues
            self.errors += 1
            message = " ".join(str(exc).split()) or exc.__class__.__name__
            return [f"ERROR {message}"]
        self.requests += 1
        return block_lines(words, payload) + [""]


def block_lines(words: list[Word], text: str, sent_id: str | None = None) -> list[str]:
    """Render one parse as CoNLL-U lines (without the blank terminator)."""
    if not words:
        return []
    lines = []
    if sent_id is not None:
        lines.append(f"# sent_id = {sent_id}")
    lines.append(f"# text = {text}")
    for i, w in enumerate(words, 1):
        lines.append(
            "\t".join(
                (str(i), w.form, w.lemma, w.upos, w.xpos, "_", str(w.head), w.deprel, "_", "_")
            )
        )
    return lines


def serve(model, stdin=None, stdout=None) -> BridgeSession:
    """Run the request loop until stdin closes; returns the session."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    session = BridgeSession(model=model)
    print(f"READY {model.id}", file=stdout, flush=True)
    for raw in stdin:
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        for out in session.handle(line):
            print(out, file=stdout)
        stdout.flush()
    return session


def batch_convert(input_path, output_path, model, stderr=None) -> int:
    """Parse one sentence per line into a CoNLL-U file; returns block count.

    Blank lines are skipped with a note on stderr.  A line the model cannot
    parse becomes a comment-only block carrying ``# parse_failed``, so the
    output file stays loadable and sentence numbering stays aligned with the
    input.
    """
    stderr = stderr if stderr is not None else sys.stderr
    blocks: list[str] = []
    count = 0
    for lineno, line in enumerate(Path(input_path).read_text(encoding="utf-8").splitlines(), 1):
        text = line.strip()
        if not text:
            print(f"line {lineno}: blank line skipped", file=stderr)
            continue
        count += 1
        sent_id = f"s{count}"
        try:
            words = model.parse(text)
            if not words:
                raise ValueError("no tokens")
            lines = block_lines(words, text, sent_id=sent_id)
        except Exception as exc:
            message = " ".join(str(exc).split()) or exc.__class__.__name__
            print(f"line {lineno}: parse failed: {message}", file=stderr)
            lines = [f"# sent_id = {sent_id}", f"# parse_failed = {message}"]
        blocks.append("\n".join(lines))
    Path(output_path).write_text(
        "".join(block + "\n\n" for block in blocks), encoding="utf-8"
    )
    return count
