"""Command-line interface: artifacts, manifests, determinism, exit codes."""

import csv
import json

import numpy as np
import pytest

from polyergo.cli import main
from polyergo.lattice import LatticeFunction


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_gamma_artifact(tmp_path):
    out = tmp_path / "gamma.csv"
    assert main(["gamma", "--k", "1", "--n0", "3", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["position", "g_1", "weight"]
    assert [r[1] for r in rows[1:]] == ["1", "2", "3"]
    assert (tmp_path / "gamma.csv.manifest.json").exists()


def test_manifest_contents(tmp_path):
    out = tmp_path / "g.csv"
    main(["gamma", "--k", "1", "--n0", "2", "--out", str(out)])
    doc = json.loads((tmp_path / "g.csv.manifest.json").read_text())
    assert doc["command"] == "gamma"
    assert doc["config"]["k"] == 1
    assert "polyergo" in doc["versions"] and "backend" in doc["versions"]
    assert doc["timings"]["seconds"] >= 0


def test_avg_writes_a_loadable_function(tmp_path):
    out = tmp_path / "avg.bin"
    assert main(["avg", "--k", "1", "--n0", "2", "--n", "4", "--out", str(out)]) == 0
    f = LatticeFunction.load(out)
    assert abs(complex(f.total()) - 1.0) <= 1e-12


def test_avg_requires_an_output_path(capsys):
    assert main(["avg", "--k", "1", "--n0", "2", "--n", "2"]) == 2
    assert "error:" in capsys.readouterr().err


def test_variation_round_trip(tmp_path):
    src = tmp_path / "seq.csv"
    src.write_text("1,0.0\n2,3.0\n3,1.0\n")
    out = tmp_path / "var.csv"
    assert main(["variation", "--input", str(src), "--r", "2", "--out", str(out)]) == 0
    rows = read_csv(out)
    value = float(rows[1][1])
    assert value == pytest.approx((3.0**2 + 2.0**2) ** 0.5)
    witness = [int(c) for c in rows[1][2:]]
    assert witness == [1, 2, 3]


def test_variation_rejects_malformed_input(tmp_path, capsys):
    src = tmp_path / "seq.csv"
    src.write_text("0.0\n3.0\n1.0\n")
    assert main(["variation", "--input", str(src), "--r", "2"]) == 2
    assert "(index, value)" in capsys.readouterr().err
    src.write_text("index,value\n")
    assert main(["variation", "--input", str(src), "--r", "2"]) == 2
    assert "no data rows" in capsys.readouterr().err
    src.write_text("1,0.0\n4,3.0\n")
    assert main(["variation", "--input", str(src), "--r", "2"]) == 2
    assert "contiguous" in capsys.readouterr().err


def test_gauss_and_decay_artifacts(tmp_path):
    gout = tmp_path / "gauss.csv"
    assert main(["gauss", "--k", "1", "--n0", "2", "--qmax", "5", "--out", str(gout)]) == 0
    rows = read_csv(gout)
    assert rows[0] == ["q", "a_1", "a_2", "re", "im", "modulus"]
    assert all(int(r[0]) <= 5 for r in rows[1:])
    dout = tmp_path / "decay.csv"
    assert main(
        ["decay", "--k", "1", "--n0", "2", "--qmax", "32", "--odd-only", "--out", str(dout)]
    ) == 0
    drows = read_csv(dout)
    assert drows[0] == ["scale", "sup", "fitted_delta"]
    delta = float(drows[1][3 - 1])
    assert delta >= 0.4


def test_arcs_columns(tmp_path):
    out = tmp_path / "arcs.csv"
    code = main(
        [
            "arcs", "--k", "1", "--n0", "2", "--n", "4096",
            "--count", "3", "--xi", "0.00001,0.000000001",
            "--seed", "5", "--out", str(out),
        ]
    )
    assert code == 0
    rows = read_csv(out)
    assert rows[0] == ["xi_1", "xi_2", "N", "class", "q", "a_1", "a_2", "u_shell"]
    first = rows[1]
    assert first[3] == "major" and first[4] == "1"


def test_multiplier_grid_rows(tmp_path):
    out = tmp_path / "mult.csv"
    code = main(
        [
            "multiplier", "--k", "1", "--n0", "2", "--kinds", "m,nu",
            "--n", "8", "--grid", "4", "--out", str(out),
        ]
    )
    assert code == 0
    rows = read_csv(out)
    assert rows[0] == ["xi_1", "xi_2", "N", "kind", "re", "im"]
    assert len(rows) == 1 + 4 * 4 * 2
    # at the origin both multipliers equal 1
    assert float(rows[1][4]) == pytest.approx(1.0)


def test_multiplier_rejects_unknown_kind(capsys):
    assert main(["multiplier", "--kinds", "sigma", "--n", "4"]) == 2
    assert "unknown multiplier kind" in capsys.readouterr().err


def test_byte_identical_reruns(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["multiplier", "--k", "1", "--n0", "2", "--count", "5", "--seed", "9"]
    main(args + ["--out", str(a)])
    main(args + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_thread_pool_preserves_output(tmp_path, monkeypatch):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["gauss", "--k", "1", "--n0", "2", "--qmax", "12"]
    main(args + ["--out", str(a)])
    monkeypatch.setenv("POLYERGO_THREADS", "4")
    main(args + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_config_overrides_flags(tmp_path):
    conf = tmp_path / "conf.json"
    conf.write_text(json.dumps({"qmax": 4}))
    out = tmp_path / "g.csv"
    main(["gauss", "--qmax", "999", "--config", str(conf), "--out", str(out)])
    rows = read_csv(out)
    assert max(int(r[0]) for r in rows[1:]) == 4


def test_config_rejects_unknown_keys(tmp_path, capsys):
    conf = tmp_path / "conf.json"
    conf.write_text(json.dumps({"qmx": 4}))
    with pytest.raises(SystemExit):
        main(["gauss", "--config", str(conf)])
    assert "qmx" in capsys.readouterr().err


def test_schedule_embeds_measured_exponent(tmp_path):
    out = tmp_path / "sched.json"
    code = main(
        ["schedule", "--lam", "4", "--d", "2", "--qmax", "16", "--out", str(out)]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["mode"] == "split"
    manifest = json.loads((tmp_path / "sched.json.manifest.json").read_text())
    assert 0.0 < manifest["delta_hat_empirical"] < 1.0
    assert manifest["delta4_hat"] == pytest.approx(manifest["delta_hat_empirical"] / 4)


def test_ergodic_trace(tmp_path):
    system = tmp_path / "sys.json"
    system.write_text(
        json.dumps(
            {
                "kind": "cyclic-shift",
                "modulus": 5,
                "dim": 1,
                "map": {"k": 1, "components": [{"terms": [{"gamma": [2], "coeff": 1}]}]},
                "frequency": [1],
                "samples": [[0], [2]],
                "ns": [5, 25],
            }
        )
    )
    out = tmp_path / "trace.csv"
    assert main(["ergodic", "--system", str(system), "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["sample_id", "N", "re", "im"]
    assert len(rows) == 5
    # periodicity: the N = 5 and N = 25 averages agree per sample
    by_sample = {}
    for sid, n, re, im in rows[1:]:
        by_sample.setdefault(sid, []).append(complex(float(re), float(im)))
    for vals in by_sample.values():
        assert abs(vals[0] - vals[1]) <= 1e-12


def test_verify_exit_codes(capsys):
    assert main(["verify", "lifting"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("PASS lifting")
    assert main(["verify", "bump-kernel"]) == 1
    out = capsys.readouterr().out
    assert out.startswith("FAIL bump-kernel")


def test_verify_alias_and_unknown_suite(capsys):
    assert main(["verify", "variation"]) == 0
    assert "variation-inequalities" in capsys.readouterr().out
    assert main(["verify", "nosuch"]) == 2
    assert "unknown suite" in capsys.readouterr().err


def test_verify_list(capsys):
    assert main(["verify", "--list"]) == 0
    names = capsys.readouterr().out.split()
    assert "gauss-decay" in names and len(names) == 14


def test_csv_floats_survive_round_trip(tmp_path):
    out = tmp_path / "m.csv"
    main(["multiplier", "--k", "1", "--n0", "2", "--count", "4", "--seed", "3",
          "--kinds", "m", "--n", "7", "--out", str(out)])
    rows = read_csv(out)
    for row in rows[1:]:
        x = float(row[0])
        assert format(x, ".17g") == row[0]
