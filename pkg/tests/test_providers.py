"""Parser provider protocol: handshake, round trips, error surfaces."""

import sys
import textwrap

import pytest

from conftest import tok, tree_of
from factext.providers import CallableProvider, ProviderError, SubprocessProvider

STUB = textwrap.dedent(
    """
    import json, sys

    print("READY stub-1.0", flush=True)
    for line in sys.stdin:
        line = line.strip()
        if not line.startswith("PARSE "):
            print("ERROR bad request", flush=True)
            continue
        text = json.loads(line[len("PARSE "):])
        if text == "boom":
            print("ERROR cannot parse: boom", flush=True)
            continue
        words = text.split()
        for i, w in enumerate(words, start=1):
            head = 0 if i == 1 else 1
            rel = "root" if i == 1 else "dep"
            print(f"{i}\\t{w}\\t{w.lower()}\\tNOUN\\tNN\\t_\\t{head}\\t{rel}\\t_\\t_")
        print("", flush=True)
    """
)


@pytest.fixture
def stub_cmd(tmp_path):
    script = tmp_path / "stub.py"
    script.write_text(STUB, encoding="utf-8")
    return [sys.executable, str(script)]


def test_callable_provider_records_requests():
    tree = tree_of(tok(1, "x", 0, "root"))
    provider = CallableProvider(lambda text: tree)
    assert provider.parse("a b") is tree
    assert provider.parse("c") is tree
    assert provider.requests == ["a b", "c"]


def test_handshake_exposes_model_id(stub_cmd):
    with SubprocessProvider(stub_cmd) as provider:
        assert provider.model_id == "stub-1.0"


def test_parse_round_trip(stub_cmd):
    with SubprocessProvider(stub_cmd) as provider:
        tree = provider.parse("KLF13 binds DNA .")
        assert [t.form for t in tree.tokens] == ["KLF13", "binds", "DNA", "."]
        assert tree.tokens[0].head == 0
        # a second request on the same session
        again = provider.parse("cases grew")
        assert [t.form for t in again.tokens] == ["cases", "grew"]


def test_error_line_raises_and_session_continues(stub_cmd):
    with SubprocessProvider(stub_cmd) as provider:
        with pytest.raises(ProviderError, match="cannot parse: boom"):
            provider.parse("boom")
        tree = provider.parse("still alive")
        assert [t.form for t in tree.tokens] == ["still", "alive"]


def test_empty_response_block_is_rejected(stub_cmd):
    with SubprocessProvider(stub_cmd) as provider:
        with pytest.raises(ProviderError, match="expected one tree"):
            provider.parse("")


def test_bad_greeting_is_rejected(tmp_path):
    script = tmp_path / "bad.py"
    script.write_text('print("HELLO world", flush=True)\n', encoding="utf-8")
    with pytest.raises(ProviderError, match="READY"):
        SubprocessProvider([sys.executable, str(script)])


def test_stream_ending_mid_response_is_reported(tmp_path):
    script = tmp_path / "quitter.py"
    script.write_text(
        'import sys\nprint("READY quitter", flush=True)\nsys.stdin.readline()\n',
        encoding="utf-8",
    )
    provider = SubprocessProvider([sys.executable, str(script)])
    try:
        with pytest.raises(ProviderError, match="ended mid-response"):
            provider.parse("anything")
        provider.proc.wait(timeout=5)
        with pytest.raises(ProviderError, match="exited"):
            provider.parse("again")
    finally:
        provider.close()


def test_close_terminates_child(stub_cmd):
    provider = SubprocessProvider(stub_cmd)
    provider.parse("one request")
    provider.close()
    assert provider.proc.poll() is not None
