import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from heron4d.cli import main
from heron4d.exact_scalar import QuadScalar
from heron4d.geometry4 import DEFAULT_PROJECTION, cube4
from heron4d.pythag_dissect import legs, product_dissection
from heron4d.report import SCHEMA, Check, ReportDocument, exact_value, scalar_entry
from heron4d.svg import count_lines, render_svg

SNAPSHOTS = Path(__file__).parent / "snapshots"
UPDATE = os.environ.get("HERON4D_UPDATE_SNAPSHOTS") == "1"

HERON_345 = ["heron", "--p", "5", "--r", "9/5", "--h", "12/5"]


def _snapshot(name: str, text: str) -> None:
    path = SNAPSHOTS / name
    if UPDATE:
        path.write_text(text, encoding="utf-8")
    assert path.exists(), f"missing snapshot {name}; rerun with HERON4D_UPDATE_SNAPSHOTS=1"
    assert path.read_text(encoding="utf-8") == text


@pytest.fixture(scope="module")
def source_pieces():
    return product_dissection(legs(3, 4), legs(5, 12)).pieces


def test_snapshot_hypotenuse_product(source_pieces):
    text = render_svg(source_pieces, DEFAULT_PROJECTION, "hypotenuse squares product")
    assert text.count("<g ") == 25
    _snapshot("hypotenuse_product_3_4_5_12.svg", text)


def test_snapshot_central_square_product(source_pieces):
    _snapshot("central_square_product.svg", render_svg([source_pieces[-1]], DEFAULT_PROJECTION, "square x square"))


def test_snapshot_unit_hypercube():
    text = render_svg([cube4(1)], DEFAULT_PROJECTION, "unit 4-cube")
    assert count_lines(text) == 32
    _snapshot("unit_hypercube.svg", text)


def test_snapshot_empty():
    text = render_svg([], DEFAULT_PROJECTION)
    assert count_lines(text) == 0
    _snapshot("empty.svg", text)


def test_check_line_format():
    assert Check("a", True, "x").line() == "a\tPASS\tx"
    assert Check("b", False).line() == "b\tFAIL\t"


def test_scalar_entries_are_exact():
    entry = scalar_entry(QuadScalar.parse("1 + 2*sqrt(5)"))
    assert entry["exact"] == "1 + 2*sqrt(5)"
    assert exact_value(entry) == QuadScalar.parse("1+2*sqrt(5)")


def test_json_round_trip(tmp_path):
    out = tmp_path / "r.json"
    assert main([*HERON_345, "--json", str(out)]) == 0
    doc = ReportDocument.from_json(out.read_text())
    assert doc.schema == SCHEMA
    assert doc.verdict
    assert exact_value(doc.results["value"]) == 576
    assert doc.to_json() == out.read_text()
    assert ReportDocument.from_json(doc.to_json()).without_timestamp() == doc.without_timestamp()


def test_unsupported_schema():
    with pytest.raises(ValueError):
        ReportDocument.from_json(json.dumps({"schema": 99}))


def test_tamper_flips_exit_code(capsys):
    assert main(HERON_345) == 0
    assert main(HERON_345, tamper=["lhs"]) == 1
    captured = capsys.readouterr()
    assert "lhs\tFAIL" in captured.out
    assert "FAILED: lhs" in captured.err


@pytest.mark.parametrize(
    "argv",
    [
        ["heron", "--p", "five", "--r", "1", "--h", "1"],
        ["heron", "--p", "1.5", "--r", "1", "--h", "1"],
        ["heron", "--p", "1/0", "--r", "1", "--h", "1"],
        ["heron", "--p", "3", "--r", "0", "--h", "2"],
        ["cube", "--n", "9"],
        ["cube", "--n", "0"],
        ["pyramids", "--n", "1"],
        ["multinomial", "--k", "10", "--n", "7"],
        ["pythag", "--legs1", "3", "--legs2", "5,12"],
        ["nosuch"],
    ],
)
def test_bad_input_exits_2(argv, capsys):
    assert main(argv) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["cube", "--n", "3"],
        ["pyramids", "--n", "4"],
        ["quarter"],
        ["multinomial", "--k", "3", "--n", "3"],
        ["heron-expand", "--a2", "5", "--b2", "13", "--c", "4"],
        ["pythag", "--legs1", "3,4", "--legs2", "5,12"],
        ["nicomachus", "--n", "12"],
        ["heron", "--p", "4", "--r", "1", "--h", "2"],
    ],
)
def test_commands_pass(argv, capsys):
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert out and all(line.split("\t")[1] == "PASS" for line in out.strip().splitlines())


def test_figures_written(tmp_path):
    svg, png = tmp_path / "svg", tmp_path / "png"
    assert main(["quarter", "--svg-dir", str(svg), "--fig-dir", str(png)]) == 0
    assert (svg / "quarter_assembly.svg").exists()
    assert (png / "quarter_assembly.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_custom_projection(tmp_path):
    proj = "1,0,0,1,1,1,-1,1"
    assert main(["quarter", "--projection", proj, "--svg-dir", str(tmp_path)]) == 0
    assert main(["quarter", "--projection", "1,2,3"]) == 2


def _run(args, cwd):
    return subprocess.run([sys.executable, "-m", "heron4d", *args], cwd=cwd, capture_output=True, text=True)


def test_repeated_runs_are_byte_identical(tmp_path):
    outputs = []
    for k in range(2):
        d = tmp_path / f"run{k}"
        d.mkdir()
        res = _run([*HERON_345, "--json", "r.json", "--svg-dir", "svg"], d)
        assert res.returncode == 0, res.stderr
        doc = json.loads((d / "r.json").read_text())
        doc.pop("generated_at")
        svgs = {p.name: p.read_bytes() for p in sorted((d / "svg").iterdir())}
        outputs.append((res.stdout, json.dumps(doc, sort_keys=True), svgs))
    assert outputs[0] == outputs[1]
    assert outputs[0][2]
