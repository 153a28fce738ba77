"""End-to-end tests for the turan27 command line."""

import json
from collections.abc import Iterator
from pathlib import Path

import pytest
import structlog

from app.certify.examples import example9_hypergraph
from app.hypergraphs.hypergraph import Hypergraph3, complete_hypergraph, delete_edge
from app.hypergraphs.text_format import write_hypergraph
from app.main import main
from app.models.schemas import RunManifest


@pytest.fixture(autouse=True)
def reset_logging() -> Iterator[None]:
    yield
    structlog.reset_defaults()


def _graph_file(tmp_path: Path, name: str, h: Hypergraph3) -> Path:
    path = tmp_path / f"{name}.txt"
    write_hypergraph(path, h)
    return path


def _run(capsys: pytest.CaptureFixture[str], *argv: str | Path) -> tuple[int, dict]:
    code = main([str(arg) for arg in argv])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else {}


def test_check_vanishing_exit_codes(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    single = _graph_file(tmp_path, "single", Hypergraph3.from_edges(3, [(0, 1, 2)]))
    example9 = _graph_file(tmp_path, "example9", example9_hypergraph())
    k4 = _graph_file(tmp_path, "k4", complete_hypergraph(4))

    code, payload = _run(capsys, "check-vanishing", single)
    assert code == 0
    assert payload["vanishing"] is True
    assert payload["certificate"]["ordering"] == [0, 1, 2]

    code, payload = _run(capsys, "check-vanishing", example9)
    assert code == 1
    assert payload["vanishing"] is False
    assert payload["evidence"] is not None

    code, payload = _run(capsys, "check-vanishing", k4)
    assert code == 1
    assert payload["evidence"] is None
    assert payload["conflict_pair"] is not None


def test_pretty_transcript(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    single = _graph_file(tmp_path, "single", Hypergraph3.from_edges(3, [(0, 1, 2)]))

    code = main(["check-vanishing", str(single), "--pretty"])

    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("vanishing ordering: a b c\n")
    assert "  ac  T" in out


def test_input_errors(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    broken = tmp_path / "broken.txt"
    broken.write_text("3 2\n0 1 2\n", encoding="ascii")

    assert _run(capsys, "check-vanishing", broken)[0] == 2
    assert _run(capsys, "check-vanishing", tmp_path / "missing.txt")[0] == 2
    assert _run(capsys, "no-such-command")[0] == 2
    assert _run(capsys, "census", "--vertices", "4", "--resume")[0] == 2


def test_certify_and_verify(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    example9 = _graph_file(tmp_path, "example9", example9_hypergraph())
    cert_path = tmp_path / "example9.cert.json"

    code, payload = _run(capsys, "certify", example9, "--output", cert_path)
    assert code == 0
    assert payload["certified"] is True
    assert cert_path.exists()

    code, payload = _run(capsys, "verify", example9, cert_path)
    assert code == 0
    assert payload == {"kind": "turan", "valid": True}

    code, payload = _run(capsys, "certify", example9, "--verify-only", cert_path)
    assert code == 0
    assert payload == {"certified": True, "verified": True}


def test_certify_negative_and_bounds(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    k4 = _graph_file(tmp_path, "k4", complete_hypergraph(4))
    wide = _graph_file(tmp_path, "wide", Hypergraph3(n=11, edges=frozenset()))

    code, payload = _run(capsys, "certify", k4)
    assert code == 1
    assert payload["certified"] is False
    assert payload["failed_conditions"]

    assert main(["certify", str(wide)]) == 3
    captured = capsys.readouterr()
    assert captured.out == ""
    assert '"event": "search_bound_exceeded"' in captured.err
    assert '"command": "certify"' in captured.err


def test_verify_rejects_unknown_certificate(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    single = _graph_file(tmp_path, "single", Hypergraph3.from_edges(3, [(0, 1, 2)]))
    cert = tmp_path / "cert.json"
    cert.write_text('{"unexpected": 1}', encoding="utf-8")

    assert _run(capsys, "verify", single, cert)[0] == 2


def test_embed_palette(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    k4_minus = _graph_file(tmp_path, "k4-minus", delete_edge(complete_hypergraph(4), (1, 2, 3)))

    code, payload = _run(capsys, "embed-palette", k4_minus, "--palette", "four27_b")
    assert code == 0
    assert payload["embedding"]["ordering"] == [0, 1, 2, 3]

    code, payload = _run(capsys, "embed-palette", k4_minus, "--palette", "four27_a")
    assert code == 1
    assert payload["embeddable"] is False

    assert _run(capsys, "embed-palette", k4_minus, "--palette", "no-such-palette")[0] == 2


def test_sample_is_reproducible(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    args = ["sample", "--n", "20", "--palette", "vanishing", "--seed", "7", "--output", str(tmp_path / "hosts")]

    first_code, first = _run(capsys, *args, "--manifest", tmp_path / "first.json")
    second_code, second = _run(capsys, *args, "--manifest", tmp_path / "second.json")

    assert first_code == second_code == 0
    assert first == second
    assert first["files"] == ["vanishing-n20-s7.txt", "vanishing-n20-s7.json"]
    assert first["palette_density"] == "1/27"
    manifests = [RunManifest.model_validate_json((tmp_path / name).read_text(encoding="utf-8")) for name in ("first.json", "second.json")]
    assert manifests[0].result_digest == manifests[1].result_digest
    assert manifests[0].seeds == [7]
    assert manifests[0].exit_code == 0


def test_measure(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    k5 = _graph_file(tmp_path, "k5", complete_hypergraph(5))
    empty = _graph_file(tmp_path, "empty", Hypergraph3(n=6, edges=frozenset()))

    code, payload = _run(capsys, "measure", "--input", k5, "--eps", "1/2", "--d", "1")
    assert code == 0
    assert payload["mode"] == "exact"
    assert payload["epsilon_linear_density"] == "1"
    assert payload["upper_bound_only"] is False
    assert payload["dense"]["holds"] is True

    code, payload = _run(capsys, "measure", "--input", empty, "--eps", "1/100", "--d", "1/2")
    assert code == 1
    assert payload["dense"]["holds"] is False

    code, payload = _run(capsys, "measure", "--input", k5, "--eps", "1/2", "--mode", "sampled", "--trials", "10")
    assert code == 0
    assert payload["upper_bound_only"] is True

    assert _run(capsys, "measure", "--input", k5, "--eps", "0")[0] == 2


def test_examples(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    code, payload = _run(capsys, "examples", "example8", "--k", "2", "--output", tmp_path)

    assert code == 0
    assert payload["name"] == "example8-k2"
    assert (tmp_path / "example8-k2.txt").exists()
    assert (tmp_path / "example8-k2.cert.json").exists()

    code, verified = _run(capsys, "verify", tmp_path / "example8-k2.txt", tmp_path / "example8-k2.cert.json")
    assert code == 0
    assert verified == {"kind": "turan", "valid": True}


def test_census(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    code, payload = _run(capsys, "census", "--vertices", "4", "--output", tmp_path / "census", "--no-progress")

    assert code == 0
    assert payload["summary"] == "1 minimal, 0 certified, 1 avoided, 0 with isolated vertices"
    assert (tmp_path / "census" / "catalog.json").exists()
