from __future__ import annotations

import json
from pathlib import Path

from root_datum_toolkit.cli import render_report
from root_datum_toolkit.datum.engine import ToolkitEngine

ROOT = Path(__file__).resolve().parent
DATA = ROOT / "data"
GOLDEN = ROOT / "golden"


def _read_golden(name: str) -> dict:
    data = (GOLDEN / name).read_text(encoding="utf-8")
    return json.loads(data)


def _assert_golden(name: str, value: dict) -> None:
    expected = _read_golden(name)
    # round-trip through JSON so tuples and lists compare equal
    assert json.loads(json.dumps(value)) == expected


def test_golden_outputs() -> None:
    engine = ToolkitEngine()

    _assert_golden("classify_b3.json", render_report(engine.classify(str(DATA / "b3_standard.json"))))

    _assert_golden(
        "validate_c2_lattice_3z.json",
        render_report(engine.validate(str(DATA / "c2_lattice_3z.json"))),
    )

    _assert_golden("split_c1_product.json", render_report(engine.split(str(DATA / "c1_product.json"))))

    spectrum = engine.spectrum(str(DATA / "c2_standard.yaml"), "0,1,1,1", "6")
    _assert_golden("spectrum_c2.json", render_report(spectrum))

    _assert_golden(
        "classify_a2_hexagonal.json",
        render_report(engine.classify(str(DATA / "a2_hexagonal.json"))),
    )
