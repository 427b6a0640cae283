"""CLI contract checks: exit codes, output bytes, error wording."""

import json

import pytest

from glovesim.cli import main, parse_script
from glovesim.device import ButtonDown, RecordingInput, TagRead, Tick
from glovesim.scene import build_setup, save_scene
from glovesim.tagdb import TagUid


@pytest.fixture()
def scenario(tmp_path):
    path = tmp_path / "scene.json"
    save_scene(build_setup(1, seed=0), path)
    return path


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


# --- script parser ---------------------------------------------------------------


def test_parse_script_full_grammar():
    text = """
    # introduce an object
    tick 500
    read a0000000 100  # scan
    button
    input red shirt
    tick 3000
    """
    events = parse_script(text)
    assert events == [
        Tick(500),
        TagRead(TagUid.from_hex("a0000000"), latency_ms=100.0),
        ButtonDown(),
        RecordingInput(label="red shirt"),
        Tick(3000),
    ]


@pytest.mark.parametrize(
    "line, lineno",
    [
        ("jump 3", 1),
        ("tick abc", 1),
        ("\n\nread zz", 3),
        ("button now", 1),
        ("input", 1),
        ("read a0000000 50 9", 1),
    ],
)
def test_parse_script_errors_cite_line(line, lineno):
    with pytest.raises(ValueError) as err:
        parse_script(line)
    assert f"line {lineno}:" in str(err.value)


# --- sim -------------------------------------------------------------------------


def test_sim_known_tag_plays_clip(tmp_path, scenario, capsys):
    uid = build_setup(1, seed=0).objects[0].tag.hex
    script = write(tmp_path / "s.txt", f"tick 100\nread {uid} 100\ntick 2000\n")
    out = tmp_path / "transcript.json"
    assert main(["sim", "--scenario", str(scenario), "--script", str(script), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["summary"]["action_counts"] == {"PlayClip": 1}
    assert any(
        a["type"] == "PlayClip" for e in doc["entries"] for a in e["actions"]
    )


def test_sim_is_byte_deterministic(tmp_path, scenario):
    uid = build_setup(1, seed=0).objects[3].tag.hex
    script = write(tmp_path / "s.txt", f"read {uid} 100\nbutton\ninput socks\ntick 3000\n")
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        code = main(
            ["sim", "--scenario", str(scenario), "--script", str(script), "--out", str(out)]
        )
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_sim_malformed_script_exits_nonzero(tmp_path, scenario, capsys):
    script = write(tmp_path / "s.txt", "tick 100\nwarp 9\n")
    out = tmp_path / "t.json"
    code = main(["sim", "--scenario", str(scenario), "--script", str(script), "--out", str(out)])
    assert code == 1
    assert "line 2" in capsys.readouterr().err
    assert not out.exists()


def test_sim_missing_scenario_exits_nonzero(tmp_path, capsys):
    script = write(tmp_path / "s.txt", "tick 1\n")
    code = main(["sim", "--scenario", str(tmp_path / "nope.json"), "--script", str(script), "--out", str(tmp_path / "o.json")])
    assert code == 1
    assert "error:" in capsys.readouterr().err


# --- experiment --------------------------------------------------------------------


def test_experiment_report_reproducible(tmp_path):
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    base = ["experiment", "--test", "2", "--n", "5", "--seed", "7"]
    assert main(base + ["--out", str(out1)]) == 0
    assert main(base + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    assert report["analysis"]["success"]["task_rate_percent"] == 100.0


def test_experiment_rejects_bad_test_id(capsys):
    with pytest.raises(SystemExit) as err:
        main(["experiment", "--test", "9", "--out", "-"])
    assert err.value.code == 2


def test_experiment_stdout(capsys):
    assert main(["experiment", "--test", "4", "--n", "3", "--seed", "1", "--out", "-"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["spec"]["test_id"] == 4
    assert len(doc["analysis"]["scores"]) == 3


# --- stats -------------------------------------------------------------------------


def test_stats_cv_fixture(tmp_path, capsys):
    values = [17.618, 19.571, 21.524, 23.477, 25.43, 25.434, 27.391, 29.344, 31.297, 33.25]
    csv = write(tmp_path / "cv.csv", "time_s\n" + "".join(f"{v}\n" for v in values))
    assert main(["stats", "--csv", str(csv), "--analysis", "cv", "--out", "-"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["analysis"] == "cv"
    assert doc["result"]["n"] == 10


def test_stats_ttest_matches_direct_call(tmp_path):
    rows = [(12.1, 10.0), (14.3, 11.2), (13.8, 12.9), (15.2, 11.1), (16.0, 13.3)]
    csv = write(
        tmp_path / "t.csv", "before,after\n" + "".join(f"{a},{b}\n" for a, b in rows)
    )
    out = tmp_path / "t.json"
    assert main(["stats", "--csv", str(csv), "--analysis", "ttest", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    from glovesim.metrics import paired_t_test

    direct = paired_t_test([r[0] for r in rows], [r[1] for r in rows])
    assert doc["result"]["t"] == pytest.approx(direct.t, abs=1e-12)
    assert doc["result"]["p"] == pytest.approx(direct.p, abs=1e-12)


def test_stats_ttest_wrong_shape(tmp_path, capsys):
    csv = write(tmp_path / "w.csv", "a,b,c\n1,2,3\n4,5,6\n")
    assert main(["stats", "--csv", str(csv), "--analysis", "ttest", "--out", "-"]) == 1
    assert "exactly 2 columns" in capsys.readouterr().err


def test_stats_anova_identical_columns_degenerate(tmp_path, capsys):
    csv = write(tmp_path / "i.csv", "c1,c2,c3\n" + "".join(f"{v},{v},{v}\n" for v in (3, 5, 9, 4)))
    assert main(["stats", "--csv", str(csv), "--analysis", "anova", "--out", "-"]) == 1
    assert "error:" in capsys.readouterr().err


def test_stats_bad_cell_cites_row(tmp_path, capsys):
    csv = write(tmp_path / "bad.csv", "a,b\n1,2\n3,oops\n")
    assert main(["stats", "--csv", str(csv), "--analysis", "ttest", "--out", "-"]) == 1
    assert "row 3" in capsys.readouterr().err


def test_stats_alpha(tmp_path, capsys):
    import random

    rng = random.Random(5)
    lines = ["i1,i2,i3"]
    for _ in range(12):
        base = rng.gauss(0, 1)
        lines.append(",".join(f"{base + rng.gauss(0, 0.7):.4f}" for _ in range(3)))
    csv = write(tmp_path / "a.csv", "\n".join(lines) + "\n")
    assert main(["stats", "--csv", str(csv), "--analysis", "alpha", "--out", "-"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["result"]["k_items"] == 3
    assert doc["result"]["n_subjects"] == 12


# --- serve (flag wiring only; live serving is covered by service tests) -------------


def test_port_env_default(monkeypatch):
    from glovesim import cli

    monkeypatch.setenv("GLOVESIM_PORT", "9123")
    parser = cli.build_parser()
    args = parser.parse_args(["serve"])
    assert args.port == 9123
    monkeypatch.setenv("GLOVESIM_PORT", "not-a-number")
    args = cli.build_parser().parse_args(["serve"])
    assert args.port == cli.DEFAULT_PORT


def test_serve_port_flag_overrides_env(monkeypatch):
    from glovesim import cli

    monkeypatch.setenv("GLOVESIM_PORT", "9123")
    args = cli.build_parser().parse_args(["serve", "--port", "7001"])
    assert args.port == 7001
