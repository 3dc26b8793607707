from __future__ import annotations

import json
import math
from pathlib import Path

import pytest

from root_datum_toolkit.cli import main
from root_datum_toolkit.datum.ingest import datum_to_document, dump_document
from root_datum_toolkit.datum.model import DatumType, Family
from root_datum_toolkit.datum.rootdatum import make_standard

DATA = Path(__file__).resolve().parent / "data"


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for name in ("RDT_MAX_WEYL", "RDT_MAX_RANK", "RDT_LOG_LEVEL", "RDT_EMBED_TOL"):
        monkeypatch.delenv(name, raising=False)


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, json.loads(out)


def _standard_file(tmp_path, family, rank):
    path = tmp_path / f"{family.value.lower()}{rank}.json"
    document = datum_to_document(make_standard(DatumType(family, rank)))
    path.write_text(dump_document(document), encoding="utf-8")
    return path


# --- Validate Tests ---


def test_validate_ok(capsys):
    code, report = _run(capsys, "validate", DATA / "c2_standard.yaml")
    assert code == 0
    assert report == {"status": "ok", "payload": {"ok": True, "errors": []}, "diagnostics": []}


def test_validate_invalid_lattice(capsys):
    code, report = _run(capsys, "validate", DATA / "b2_lattice_quarter.json")
    assert code == 1
    assert report["payload"]["errors"][0]["path"] == "gamma1"


def test_validate_directory(capsys):
    code, report = _run(capsys, "validate", DATA)
    assert code == 1
    files = {f["filePath"]: f["ok"] for f in report["payload"]["files"]}
    assert files["c2_standard.yaml"] is True
    assert files["c2_lattice_3z.json"] is False
    assert len(files) == 6


def test_missing_file_is_an_error(capsys, tmp_path):
    code, report = _run(capsys, "classify", tmp_path / "absent.json")
    assert code == 2
    assert report["payload"] == {"error": "DatumFile"}


def test_invalid_utf8_file_is_an_error(capsys, tmp_path):
    bad = tmp_path / "latin.json"
    bad.write_bytes(b'{"dim": 1, "gram": [["\xff"]], "lattice_basis": [[1]], "roots": []}')
    code, report = _run(capsys, "classify", bad)
    assert code == 2
    assert report["payload"] == {"error": "DatumFile"}


def test_validate_directory_reports_unreadable_files(capsys, tmp_path):
    (tmp_path / "broken.json").write_text("{not json", encoding="utf-8")
    _standard_file(tmp_path, Family.C, 2)
    code, report = _run(capsys, "validate", tmp_path)
    assert code == 1
    files = {f["filePath"]: f for f in report["payload"]["files"]}
    assert files["c2.json"]["ok"] is True
    assert files["broken.json"]["ok"] is False
    assert "invalid JSON" in files["broken.json"]["errors"][0]["message"]


# --- Classify Tests ---


def test_classify_decomposable_reports_factors(capsys):
    code, report = _run(capsys, "classify", DATA / "c1_product.json")
    assert code == 1
    assert report["payload"]["error"] == "decomposable"
    assert len(report["payload"]["factors"]) == 2


def test_classify_with_orbit(capsys):
    code, report = _run(capsys, "classify", DATA / "b3_standard.json", "--orbit")
    assert code == 0
    assert report["payload"]["weylOrder"] == 48
    assert report["payload"]["orbitCase"] == "I"


def test_weyl_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("RDT_MAX_WEYL", "10")
    code, report = _run(capsys, "classify", DATA / "b3_standard.json", "--orbit")
    assert code == 2
    assert report["payload"] == {"error": "WeylClosure"}


def test_bad_setting_is_an_error(capsys, monkeypatch):
    monkeypatch.setenv("RDT_MAX_WEYL", "many")
    code, report = _run(capsys, "validate", DATA / "c2_standard.yaml")
    assert code == 2
    assert report["payload"] == {"error": "Settings"}
    assert "RDT_MAX_WEYL" in report["diagnostics"][0]


def test_output_is_deterministic(capsys):
    main(["classify", str(DATA / "b3_standard.json")])
    first = capsys.readouterr().out
    main(["classify", str(DATA / "b3_standard.json")])
    assert capsys.readouterr().out == first


# --- Standard Tests ---


def test_standard_round_trips_through_classify(capsys, tmp_path):
    code, report = _run(capsys, "standard", "--type", "BC", "--rank", 3, "--length2", "2")
    assert code == 0
    path = tmp_path / "bc3.json"
    path.write_text(json.dumps(report["payload"]), encoding="utf-8")
    code, report = _run(capsys, "classify", path)
    assert code == 0
    assert report["payload"]["type"] == "BC3-hat"
    assert report["payload"]["lengthSq"] == "2"


def test_standard_unknown_family(capsys):
    code, _ = _run(capsys, "standard", "--type", "E", "--rank", 6)
    assert code == 2


# --- Lattice Verb Tests ---


def test_pi1_and_polysphere(capsys):
    assert _run(capsys, "pi1", DATA / "b3_standard.json")[1]["payload"]["pi1"] == "Z/2"
    _, report = _run(capsys, "polysphere", DATA / "c2_standard.yaml")
    assert report["payload"] == {"admitsPolysphere": True}
    _, report = _run(capsys, "polysphere", DATA / "b3_standard.json")
    assert report["payload"] == {"admitsPolysphere": False}


def test_pi1_of_invalid_datum(capsys):
    code, report = _run(capsys, "pi1", DATA / "c2_lattice_3z.json")
    assert code == 1
    assert report["payload"]["errors"][0]["path"] == "gamma0"


def test_covers_marks_the_input_lattice(capsys):
    code, report = _run(capsys, "covers", DATA / "b3_standard.json")
    assert code == 0
    members = report["payload"]["coverings"]
    assert [m["index"] for m in members] == [1, 2]
    assert [m["isInput"] for m in members] == [False, True]


def test_iso(capsys):
    code, report = _run(capsys, "iso", DATA / "b3_standard.json", DATA / "b3_standard.json")
    assert code == 0
    assert report["payload"]["isomorphic"] is True
    code, report = _run(capsys, "iso", DATA / "c2_standard.yaml", DATA / "c1_product.json")
    assert code == 1
    assert report["payload"] == {"isomorphic": False, "result": "not isomorphic"}


# --- Spectrum Tests ---


def test_spectrum_bad_multiplicities(capsys):
    code, report = _run(capsys, "spectrum", DATA / "c2_standard.yaml", "--mults", "1,1,1", "--bound", "4")
    assert code == 2
    assert report["payload"] == {"error": "Multiplicity"}


def test_first_eigencheck_exit_codes(capsys, tmp_path):
    code, report = _run(capsys, "first-eigencheck", DATA / "c2_standard.yaml", "--mults", "0,1,1,1")
    assert code == 0
    assert report["payload"]["firstEigenspace"] is True

    a1 = _standard_file(tmp_path, Family.A, 2)
    code, report = _run(capsys, "first-eigencheck", a1, "--mults", "0,0,0,4")
    assert code == 1
    assert report["payload"]["eigenspaceIndex"] == 2


# --- Embed Tests ---


def test_embed_report(capsys):
    code, report = _run(capsys, "embed", DATA / "c2_standard.yaml", "--samples", 32)
    assert code == 0
    payload = report["payload"]
    assert payload["complexDim"] == 5
    assert payload["checks"]["pass"] is True


def test_embed_points_to_stdout(capsys, tmp_path):
    report_path = tmp_path / "report.json"
    code = main(
        [
            "embed",
            str(DATA / "c2_standard.yaml"),
            "--samples",
            "16",
            "--points",
            "-",
            "--report",
            str(report_path),
        ]
    )
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join([f"h{j}" for j in (1, 2)] + [f"x{j}" for j in range(1, 11)])
    assert len(lines) == 17
    assert json.loads(report_path.read_text(encoding="utf-8"))["status"] == "ok"


def test_embed_points_to_stdout_needs_report(capsys):
    code, report = _run(capsys, "embed", DATA / "c2_standard.yaml", "--points", "-")
    assert code == 2
    assert report["payload"] == {"error": "Usage"}


def test_embed_unwritable_points_path(capsys, tmp_path):
    target = tmp_path / "missing" / "points.csv"
    code, report = _run(capsys, "embed", DATA / "c2_standard.yaml", "--points", target)
    assert code == 2
    assert report["payload"] == {"error": "Output"}


def test_embed_unwritable_report_path(capsys, tmp_path):
    target = tmp_path / "missing" / "report.json"
    code, report = _run(
        capsys, "embed", DATA / "c2_standard.yaml", "--points", "-", "--report", target
    )
    assert code == 2
    assert report["payload"] == {"error": "Output"}


def test_spectrum_absolute_values(capsys):
    args = ["--mults", "0,1,1,1", "--bound", "6", "--absolute"]
    code, report = _run(capsys, "spectrum", DATA / "c2_standard.yaml", *args)
    assert code == 0
    entries = report["payload"]["spectrum"]
    assert [e["lambda_scaled"] for e in entries] == ["0", "3", "5"]
    assert entries[1]["lambda_absolute"] == pytest.approx(12 * math.pi**2)
