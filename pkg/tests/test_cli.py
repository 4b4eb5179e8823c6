import csv
import json

import numpy as np
import pytest

from zqwalk import (
    LimitMeasure,
    ModelWalkSpec,
    SpecFormatError,
    StateVector,
    SymbolMatrix,
    coined_walk,
    grover_walk_3,
    modified_coined_walk,
    refine_system,
    track_bands,
)
from zqwalk import io as zio
from zqwalk.cli import main


@pytest.fixture
def spec_dir(tmp_path):
    files = {
        "hadamard.json": zio.walk_to_json(coined_walk()),
        "modified_hadamard.json": zio.walk_to_json(modified_coined_walk()),
        "grover3.json": zio.walk_to_json(grover_walk_3()),
        "delta0_ch1.json": zio.state_to_json(StateVector.delta(0, 1, 2)),
        "grover_init.json": zio.state_to_json(
            StateVector.from_channel_vector(0, [0.0, 1.0, 0.0])
        ),
        "shift_model.json": {
            "model": {"d": 1, "lambda_coeffs": [{"shift": 1, "re": 1.0, "im": 0.0}]}
        },
    }
    for name, payload in files.items():
        (tmp_path / name).write_text(json.dumps(payload))
    return tmp_path


# -- parsing ---------------------------------------------------------------------


def test_parse_walk_fixture(spec_dir):
    walk = zio.parse_spec((spec_dir / "hadamard.json").read_text())
    assert isinstance(walk, SymbolMatrix)
    assert walk.n == 2 and walk.propagation_radius == 1
    assert walk.allclose(coined_walk())


def test_parse_model_form(spec_dir):
    spec = zio.parse_spec((spec_dir / "shift_model.json").read_text())
    assert isinstance(spec, ModelWalkSpec)
    assert spec.d == 1 and spec.lambda_coeffs.coeffs == {1: 1.0}


def test_parse_vector(spec_dir):
    xi = zio.parse_spec((spec_dir / "delta0_ch1.json").read_text())
    assert isinstance(xi, StateVector)
    assert xi.amplitudes == {(0, 1): 1.0}


def test_parse_malformed_json():
    with pytest.raises(SpecFormatError):
        zio.parse_spec("{not json")


def test_parse_schema_diagnostics():
    with pytest.raises(SpecFormatError, match=r"entries\[0\]"):
        zio.parse_spec('{"n": 2, "entries": [{"row": 1}]}')
    with pytest.raises(SpecFormatError, match="row/col"):
        zio.parse_spec('{"n": 1, "entries": [{"row": 5, "col": 1, "terms": []}]}')


# -- round trips --------------------------------------------------------------------


def test_walk_json_round_trip():
    walk = modified_coined_walk()
    again = zio.walk_from_json(json.loads(json.dumps(zio.walk_to_json(walk))))
    assert again.allclose(walk, 0.0)


def test_state_json_round_trip():
    xi = StateVector({(0, 1): 0.25 + 0.5j, (-3, 2): -1 / 3}, 2)
    again = zio.state_from_json(json.loads(json.dumps(zio.state_to_json(xi))))
    assert again.distance(xi) == 0.0


def test_eigensystem_json_round_trip():
    system = refine_system(track_bands(grover_walk_3(), 64))
    payload = json.loads(json.dumps(zio.eigensystem_to_json(system)))
    assert zio.eigensystem_from_json(payload) == system


def test_measure_json_round_trip():
    mu = LimitMeasure(((0.0, 0.25),), ((0.5, 0.5), (-0.5, 0.25)), 1.0)
    again = zio.measure_from_json(json.loads(json.dumps(zio.measure_to_json(mu))))
    assert again == mu


# -- subcommands ---------------------------------------------------------------------


def run_cli(*argv):
    return main([str(a) for a in argv])


def test_cli_decompose_grover(spec_dir, tmp_path, capsys):
    out = tmp_path / "run-decomp"
    code = run_cli(
        "decompose", spec_dir / "grover3.json", "--grid", 256, "--out", out
    )
    assert code == 0
    assert "decomposable" in capsys.readouterr().out
    report = json.loads((out / "decompose.json").read_text())
    assert sorted(report["artifacts"]) == ["decompose.json", "eigensystem.json"]
    assert report["decomposable"] is True
    assert report["ct_realizable"] is True
    assert sorted((b["d"], b["winding"]) for b in report["bands"]) == [(1, 0), (2, 0)]
    system = zio.eigensystem_from_json(
        json.loads((out / "eigensystem.json").read_text())
    )
    assert system.base_grid == 256
    manifest = json.loads((out / "manifest.json").read_text())
    assert set(manifest["outputs"]) == {"eigensystem.json", "decompose.json"}


def test_cli_ct_check_modified(spec_dir, tmp_path, capsys):
    out = tmp_path / "run-ct"
    code = run_cli(
        "ct-check", spec_dir / "modified_hadamard.json", "--grid", 256, "--out", out
    )
    assert code == 0
    printed = capsys.readouterr().out
    assert "false" in printed and "winding" in printed
    payload = json.loads((out / "ct_check.json").read_text())
    assert payload == {"ct_realizable": False, "reason": "winding [1]"}


def test_cli_ct_check_writes_generators(spec_dir, tmp_path):
    out = tmp_path / "run-ct2"
    assert run_cli(
        "ct-check", spec_dir / "hadamard.json", "--grid", 256, "--out", out
    ) == 0
    generators = sorted(p.name for p in out.glob("generator_band*.csv"))
    assert generators == ["generator_band0.csv", "generator_band1.csv"]
    rows = list(csv.DictReader(open(out / "generator_band0.csv")))
    assert len(rows) == 256
    float(rows[10]["theta"]), float(rows[10]["h"])


def test_cli_simulate_contract(spec_dir, tmp_path):
    out = tmp_path / "run-sim"
    code = run_cli(
        "simulate",
        spec_dir / "hadamard.json",
        "--init",
        spec_dir / "delta0_ch1.json",
        "--t",
        "100",
        "--out",
        out,
    )
    assert code == 0
    rows = list(csv.DictReader(open(out / "dist_t100.csv")))
    assert len(rows) == 101
    assert sum(float(r["prob"]) for r in rows) == pytest.approx(1.0, abs=1e-9)


def test_cli_limit_and_compare(spec_dir, tmp_path):
    out = tmp_path / "run-limit"
    assert run_cli(
        "limit",
        spec_dir / "grover3.json",
        "--init",
        spec_dir / "grover_init.json",
        "--grid",
        256,
        "--out",
        out,
    ) == 0
    measure = zio.measure_from_json(json.loads((out / "measure.json").read_text()))
    assert measure.atom_mass(0.0) == pytest.approx(1.0 - 2.0 / np.sqrt(6.0), abs=1e-4)

    out2 = tmp_path / "run-compare"
    assert run_cli(
        "compare",
        spec_dir / "hadamard.json",
        "--init",
        spec_dir / "delta0_ch1.json",
        "--t",
        "20,80",
        "--mmax",
        "2",
        "--grid",
        256,
        "--out",
        out2,
    ) == 0
    rows = list(csv.DictReader(open(out2 / "moments.csv")))
    assert [(r["t"], r["m"]) for r in rows] == [
        ("20", "1"), ("20", "2"), ("80", "1"), ("80", "2")
    ]
    for row in rows:
        assert abs(float(row["empirical"]) - float(row["limit"])) == pytest.approx(
            float(row["deviation"]), abs=1e-15
        )


def test_cli_conjugate(spec_dir, tmp_path, capsys):
    out = tmp_path / "run-conj"
    code = run_cli(
        "conjugate",
        spec_dir / "hadamard.json",
        spec_dir / "modified_hadamard.json",
        "--grid",
        256,
        "--out",
        out,
    )
    assert code == 0
    assert "false" in capsys.readouterr().out
    assert json.loads((out / "conjugate.json").read_text()) == {"conjugate": False}


def test_cli_check_reports_model_spec(spec_dir, tmp_path, capsys):
    out = tmp_path / "run-check"
    code = run_cli("check", spec_dir / "shift_model.json", "--out", out)
    assert code == 0
    report = json.loads((out / "check.json").read_text())
    assert report["unitarity_passed"] is True
    assert report["decay"] == {"kind": "finite_propagation", "radius": 1}


def test_cli_bad_json_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    assert run_cli("check", bad, "--out", tmp_path / "x") == 2
    assert "error:" in capsys.readouterr().err


def test_cli_non_unitary_exit_code(tmp_path, capsys):
    spec = tmp_path / "nonunitary.json"
    spec.write_text(
        json.dumps(
            {
                "n": 1,
                "entries": [
                    {"row": 1, "col": 1, "terms": [{"shift": 0, "re": 2.0, "im": 0.0}]}
                ],
            }
        )
    )
    assert run_cli("bands", spec, "--out", tmp_path / "y") == 3
    capsys.readouterr()


def test_cli_vector_where_walk_expected(spec_dir, tmp_path, capsys):
    assert run_cli("bands", spec_dir / "delta0_ch1.json", "--out", tmp_path / "z") == 2
    capsys.readouterr()


def test_cli_csv_float_format(spec_dir, tmp_path):
    out = tmp_path / "run-bands"
    assert run_cli(
        "bands", spec_dir / "hadamard.json", "--grid", 64, "--out", out
    ) == 0
    header, first = open(out / "bands.csv").read().splitlines()[:2]
    assert header == "band_index,covering_angle,re,im,arg"
    value = first.split(",")[2]
    assert "," not in value and float(value) == float(value)
    # 17 significant digits round-trip the double exactly
    assert float(value) == float(format(float(value), ".17g"))
