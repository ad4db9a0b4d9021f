"""Command-line interface: each subcommand end to end (except serve)."""

import json

import pytest

from gridbench.cli import main
from gridbench.procgen import sample_instance


def test_gen_writes_instance_json(tmp_path, capsys):
    out = tmp_path / "inst.json"
    assert main(["gen", "--task", "CL", "--level", "1",
                 "--seed", "5", "--out", str(out)]) == 0
    loaded = json.loads(out.read_text())
    assert loaded["kind"] == "CL"
    assert loaded == json.loads(sample_instance("CL", 1, 5).serialize())


def test_gen_prints_to_stdout_without_out(capsys):
    assert main(["gen", "--task", "SO", "--seed", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["kind"] == "SO"


def test_render_writes_png(tmp_path, capsys):
    out = tmp_path / "frame.png"
    assert main(["render", "--task", "MA", "--seed", "2",
                 "--cell-px", "32", "--out", str(out)]) == 0
    assert out.read_bytes().startswith(b"\x89PNG")
    assert "288x288" in capsys.readouterr().out


def test_render_from_instance_file(tmp_path):
    inst_file = tmp_path / "inst.json"
    main(["gen", "--task", "PL", "--seed", "3", "--out", str(inst_file)])
    out = tmp_path / "frame.png"
    assert main(["render", "--instance", str(inst_file),
                 "--out", str(out)]) == 0
    assert out.exists()


def test_eval_oracle_suite_writes_table_and_transcripts(tmp_path, capsys):
    out_dir = tmp_path / "run"
    assert main(["eval", "--client", "oracle", "--tasks", "CL",
                 "--levels", "1", "--rounds", "2", "--out", str(out_dir)]) == 0
    table = json.loads((out_dir / "success_table.json").read_text())
    assert table["rates"]["CL"]["1"] == 1.0
    assert (out_dir / "CL-L1-r0.jsonl").exists()
    assert "CL,1.0" in capsys.readouterr().out


def test_score_from_csv(tmp_path, capsys):
    from test_scoring import reference_table

    table_file = tmp_path / "table.csv"
    table_file.write_text(reference_table("gpt-4o").to_csv())
    assert main(["score", "--table", str(table_file)]) == 0
    profile = json.loads(capsys.readouterr().out)
    assert profile == {"E": 23, "M": 49, "L": 43, "P": 7, "PR": 21}


def test_baseline_reports_both_estimates(capsys):
    assert main(["baseline", "--task", "SO", "--level", "1",
                 "--rounds", "50"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["analytic"] == 0.5
    assert 0.0 <= payload["monte_carlo"] <= 1.0


def test_unknown_client_spec_exits(capsys):
    with pytest.raises(SystemExit):
        main(["eval", "--client", "psychic", "--levels", "1", "--rounds", "1"])
