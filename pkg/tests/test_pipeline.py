"""Integration tests for specred.pipeline."""
import json
import math

import numpy as np
import pytest

from specred.config import SolverConfig
from specred.errors import ParseError
from specred.pipeline import (
    COMMANDS,
    DEMOS,
    EXIT_ERROR,
    EXIT_NEGATIVE,
    EXIT_OK,
    Job,
    JobResult,
    _certify_all,
    parse_time,
    resolve_labels,
    run_job,
)
from specred.spectral.graphs import path

EXACT = SolverConfig(backend="exact")


@pytest.fixture
def edge_file(tmp_path):
    """A single edge 1-2."""
    path = tmp_path / "k2.txt"
    path.write_text("1 2\n")
    return path


@pytest.fixture
def p4_file(tmp_path):
    path = tmp_path / "p4.txt"
    path.write_text("1 2\n2 3\n3 4\n")
    return path


@pytest.fixture
def kite_file(tmp_path):
    path = tmp_path / "kite.json"
    matrix = [[0, 1, 1, 0], [1, 0, 1, 1], [1, 1, 0, 1], [0, 1, 1, 0]]
    path.write_text(json.dumps({"matrix": matrix}))
    return path


def test_parse_time():
    assert parse_time("pi/2") == pytest.approx(math.pi / 2)
    assert parse_time("3*pi/4") == pytest.approx(3 * math.pi / 4)
    assert parse_time("2pi") == pytest.approx(2 * math.pi)
    assert parse_time("0.25") == 0.25


def test_parse_time_rejects_garbage():
    with pytest.raises(ParseError):
        parse_time("soon")


def test_resolve_labels_by_string_form():
    assert resolve_labels(path(3), ["3", 1]) == [3, 1]
    with pytest.raises(ParseError):
        resolve_labels(path(3), ["4"])


def test_job_result_defaults():
    """JobResult defaults to an empty document and no errors."""
    result = JobResult(EXIT_OK)
    assert result.success
    assert result.document == {}
    assert result.errors == []
    assert not JobResult(EXIT_NEGATIVE).success


def test_every_command_is_registered():
    assert set(COMMANDS) == {
        "reduce", "greduce", "pfd", "unfold", "hollow", "compress", "qwalk", "pst", "divisor", "walkgen",
    }
    assert set(DEMOS) == {"demo-hypercube", "demo-weighted-pst"}


@pytest.mark.asyncio
async def test_reduce_job(p4_file):
    result = await run_job(Job("reduce", [p4_file], subset=["1", "4"], config=EXACT))
    assert result.exit_code == EXIT_OK
    assert result.document["subset"] == [1, 4]
    assert result.document["reduction"]["rows"] == 2


@pytest.mark.asyncio
async def test_pst_job_certifies(edge_file):
    result = await run_job(Job("pst", [edge_file], subset=["1", "2"], times=[math.pi / 2]))
    assert result.exit_code == EXIT_OK
    assert len(result.document["certificates"]) == 1
    assert result.document["certificates"][0]["gamma"] == pytest.approx([0.0, -1.0])


@pytest.mark.asyncio
async def test_pst_job_negative(edge_file):
    result = await run_job(Job("pst", [edge_file], subset=["1", "2"], times=[math.pi / 4]))
    assert result.exit_code == EXIT_NEGATIVE
    assert result.document["certificates"] == []
    assert result.document["reports"][0]["certified"] is False


@pytest.mark.asyncio
async def test_pst_job_scans_without_times(edge_file, mocker):
    scan = mocker.patch("specred.pipeline.quantumwalk.pst_scan", return_value=[])
    result = await run_job(Job("pst", [edge_file], subset=["1", "2"], horizon=2.0, grid=64))
    assert result.exit_code == EXIT_NEGATIVE
    assert scan.call_args.args[3:] == (2.0, 64)


@pytest.mark.asyncio
async def test_pst_job_needs_two_labels(edge_file):
    result = await run_job(Job("pst", [edge_file], subset=["1"], times=[1.0]))
    assert result.exit_code == EXIT_ERROR


@pytest.mark.asyncio
async def test_unknown_label_is_an_error(edge_file):
    result = await run_job(Job("reduce", [edge_file], subset=["9"]))
    assert result.exit_code == EXIT_ERROR
    assert result.document["error"] == "ParseError"
    assert result.document["context"]["label"] == "9"


@pytest.mark.asyncio
async def test_unknown_command():
    result = await run_job(Job("transmogrify"))
    assert result.exit_code == EXIT_ERROR


@pytest.mark.asyncio
async def test_single_input_required(edge_file, p4_file):
    result = await run_job(Job("reduce", [edge_file, p4_file], subset=["1"]))
    assert result.exit_code == EXIT_ERROR


@pytest.mark.asyncio
async def test_malformed_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"matrix": [[0, 1],')
    result = await run_job(Job("reduce", [bad], subset=["1"]))
    assert result.exit_code == EXIT_ERROR
    assert result.document["context"]["line"] == 1


@pytest.mark.asyncio
async def test_divisor_job(kite_file):
    result = await run_job(Job("divisor", [kite_file], partition=[["1"], ["2", "3"], ["4"]], config=EXACT))
    assert result.exit_code == EXIT_OK
    assert result.document["equitable"]["divisor"] == [[0, 2, 0], [1, 1, 1], [0, 2, 0]]
    assert result.document["divisor_is_reduction"] is True


@pytest.mark.asyncio
async def test_divisor_job_not_equitable(p4_file):
    result = await run_job(Job("divisor", [p4_file], partition=[["1", "2"], ["3", "4"]]))
    assert result.exit_code == EXIT_NEGATIVE
    assert result.document["equitable"]["witness"]["column_class"] == 1


@pytest.mark.asyncio
async def test_walkgen_job(p4_file):
    result = await run_job(Job("walkgen", [p4_file], subset=["1", "4"], length=5, config=EXACT))
    assert result.exit_code == EXIT_OK
    assert result.document["identity_holds"] is True
    assert len(result.document["returning"]["coefficients"]) == 6


@pytest.mark.asyncio
async def test_unfold_job_from_reduction(tmp_path):
    doc = tmp_path / "r.json"
    doc.write_text(json.dumps({"rows": 1, "cols": 1, "entries": [{"num": ["0", "1"], "den": ["-1", "0", "1"]}]}))
    result = await run_job(Job("unfold", [doc], hermitian=True, config=EXACT))
    assert result.exit_code == EXIT_OK
    unfolded = result.document["unfolding"]
    assert unfolded["hermitian"] is True
    assert len(unfolded["matrix"]["labels"]) == 3


@pytest.mark.asyncio
async def test_qwalk_job(p4_file):
    result = await run_job(Job("qwalk", [p4_file], subset=["1", "4"], times=[0.0, 1.0]))
    assert result.exit_code == EXIT_OK
    start = np.array(result.document["walk"]["blocks"][0])
    assert np.allclose(start[..., 0], np.eye(2))
    assert np.allclose(start[..., 1], 0)


@pytest.mark.asyncio
async def test_certify_all_reports_crashes():
    def ok():
        return {"passed": True}

    def boom():
        raise RuntimeError("diverged")

    documents, errors = await _certify_all([("fine", ok), ("broken", boom)])
    assert documents[0] == {"name": "fine", "passed": True}
    assert documents[1]["passed"] is False
    assert errors == ["broken: diverged"]


def test_main_writes_output(edge_file, tmp_path, mocker):
    from specred.__main__ import main

    out = tmp_path / "result.json"
    mocker.patch("sys.argv", ["specred", "pst", str(edge_file), "--subset", "1,2", "--times", "pi/2", "--out", str(out)])
    with pytest.raises(SystemExit) as info:
        main()
    assert info.value.code == EXIT_OK
    assert json.loads(out.read_text())["certificates"][0]["u"] == 1


def test_main_reports_bad_time(edge_file, mocker, capsys):
    from specred.__main__ import main

    mocker.patch("sys.argv", ["specred", "pst", str(edge_file), "--subset", "1,2", "--times", "later"])
    with pytest.raises(SystemExit) as info:
        main()
    assert info.value.code == EXIT_ERROR
    assert "ParseError" in capsys.readouterr().err


@pytest.mark.slow
@pytest.mark.asyncio
async def test_demo_hypercube():
    result = await run_job(Job("demo-hypercube", limit=4))
    assert result.exit_code == EXIT_OK
    assert result.document["summary"]["variants_found"] >= 4
    assert result.document["summary"]["enough_variants"]
    assert result.document["hypercube"]["certificate"] is not None
    assert all(v["checks"]["pst"] for v in result.document["variants"])


@pytest.mark.slow
@pytest.mark.asyncio
async def test_demo_weighted_pst():
    result = await run_job(Job("demo-weighted-pst"))
    assert result.exit_code == EXIT_OK
    checks = result.document["checks"]
    for name in ("feasible", "hermitian", "spectrum", "pst", "walk", "band", "hollow", "couplings"):
        assert checks[name], name
    assert result.document["reduction"]["rows"] == 2
    certificates = {d["name"]: d for d in result.document["certificates"]}
    assert certificates["couplings"]["max_deviation"] <= 1e-3
    assert certificates["hollow"]["max_diagonal"] <= 1e-10
    coupling = result.document["gauge_invariants"]["coupling_singular_values"]
    for values, expected in zip(coupling, [3.0, 4.47136, 5.56723, 6.40559]):
        assert values == pytest.approx([expected] * len(values), abs=1e-3)
    gauge = result.document["gauge"]
    assert gauge["reference_negative_entries"] == 16
    assert gauge["note"]
