import json
import os

from tautrel.charts import a2_chart
from tautrel.cli import main
from tautrel.serialize import dump_chart


def run(args):
    return main(args)


def test_family_gamma_golden(tmp_path, capsys):
    code = run(["rmatrix", "--family", "t*(t+1)", "--out", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "gamma = 1/12 + 1/6*t" in out
    data = json.loads((tmp_path / "rmatrix_family.json").read_text())
    assert data["gamma"] == "1/12 + 1/6*t"


def test_frame_report_contains_canonical_coordinates(tmp_path):
    code = run(["frame", "--chart", "a2", "--param", "t1", "--trunc", "6",
                "--out", str(tmp_path)])
    assert code == 0
    data = json.loads((tmp_path / "frame.json").read_text())
    assert "t0 - 2/3*t1^(3/2)" in data["canonical_coordinates"][0]
    assert data["m"] == "1/2"


def test_frame_report_a3(tmp_path):
    config = {
        "chart": "a3",
        "param": "phi",
        "cover_degree": 2,
        "trunc": 6,
        "expansion": {"subs": {
            "s0": "t0 - (1/2)*((-3/8)*zeta3^2 - (1/8)*phi^2)^2",
            "s1": "(1/4)*zeta3^3 - (1/4)*zeta3*phi^2",
            "s2": "(-3/8)*zeta3^2 - (1/8)*phi^2",
        }},
        "out": None,
    }
    import tempfile
    with tempfile.TemporaryDirectory() as tmp:
        config["out"] = tmp
        cfg_path = os.path.join(tmp, "config.json")
        with open(cfg_path, "w") as fh:
            json.dump(config, fh)
        code = run(["frame", "--config", cfg_path])
        assert code == 0
        data = json.loads(open(os.path.join(tmp, "frame.json")).read())
        assert data["m"] == "1/2"
        assert "1/4*zeta3*phi^3" in data["u1_minus_u2"]
        # u1 - u2 = 1/4 zeta3 phi^3 has order 3/2 along t_D
        assert data["order_u1_minus_u2"] == "3/2"


def test_malformed_chart_exit_code_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["frame", "--chart", str(bad), "--out", str(tmp_path)]) == 2
    bad2 = tmp_path / "bad2.json"
    bad2.write_text(json.dumps({"dimension": 2, "metric": [["0", "1"], ["1", "0"]],
                                "potential": "t0 +", "unit_index": 0}))
    assert run(["frame", "--chart", str(bad2), "--out", str(tmp_path)]) == 2


def test_computation_error_exit_code_1(tmp_path):
    nil = tmp_path / "nil.json"
    nil.write_text(json.dumps({
        "dimension": 2, "coords": ["t0", "t"],
        "metric": [["0", "1"], ["1", "0"]],
        "potential": "1/2*t0^2*t", "unit_index": 0}))
    assert run(["frame", "--chart", str(nil), "--out", str(tmp_path)]) == 1


def test_relations_and_verify_roundtrip(tmp_path):
    code = run(["relations", "--chart", "a2", "--param", "t1", "--trunc", "10",
                "--gn", "1,1", "--codim", "1", "--out", str(tmp_path)])
    assert code == 0
    rel_path = str(tmp_path / "relations.json")
    code = run(["verify", "--relations-file", rel_path, "--out", str(tmp_path)])
    assert code == 0
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["all_zero"] is True


def test_compare_charts(tmp_path):
    code = run(["compare", "--chart", "a2", "--chart2", "a2xa1", "--param", "t1",
                "--trunc", "10", "--gn", "1,1", "--codim", "1",
                "--out", str(tmp_path)])
    assert code == 0
    data = json.loads((tmp_path / "compare.json").read_text())
    assert data["verdicts"] == {"1,1,1": "equal"}


def test_genus1_command(tmp_path):
    code = run(["genus1", "--chart", "a2", "--param", "t1", "--trunc", "9",
                "--insertion", "1", "--out", str(tmp_path)])
    assert code == 0
    data = json.loads((tmp_path / "genus1.json").read_text())
    assert data["agree"] is True


def test_reconstruct_command_deterministic(tmp_path):
    args = ["reconstruct", "--chart", "a2", "--param", "t1", "--trunc", "9",
            "--gn", "1,1", "--codim", "1", "--insertion", "1",
            "--out", str(tmp_path)]
    assert run(args) == 0
    first = (tmp_path / "reconstruct.json").read_bytes()
    assert run(args) == 0
    second = (tmp_path / "reconstruct.json").read_bytes()
    assert first == second


def test_custom_chart_file(tmp_path):
    path = tmp_path / "a2.json"
    dump_chart(a2_chart(), str(path))
    code = run(["frame", "--chart", str(path), "--param", "t1",
                "--out", str(tmp_path)])
    assert code == 0


def test_chart_file_expansion_point(tmp_path):
    import json as _json
    from tautrel.charts import a3_chart
    from tautrel.serialize import chart_to_json
    chart = a3_chart()
    chart.expansion_point = {
        "param": "phi",
        "cover_degree": 2,
        "subs": {
            "s0": "t0 - (1/2)*((-3/8)*zeta3^2 - (1/8)*phi^2)^2",
            "s1": "(1/4)*zeta3^3 - (1/4)*zeta3*phi^2",
            "s2": "(-3/8)*zeta3^2 - (1/8)*phi^2",
        },
    }
    path = tmp_path / "a3.json"
    path.write_text(_json.dumps(chart_to_json(chart)))
    code = run(["frame", "--chart", str(path), "--cover-degree", "2",
                "--trunc", "6", "--out", str(tmp_path)])
    assert code == 0
    data = json.loads((tmp_path / "frame.json").read_text())
    assert data["m"] == "1/2"
    # the chart file round-trips bit-exactly, expansion point included
    from tautrel.serialize import chart_from_json
    back = chart_from_json(json.loads(path.read_text()))
    assert chart_to_json(back) == chart_to_json(chart)


def test_relations_command_deterministic(tmp_path):
    args = ["relations", "--chart", "a2", "--param", "t1", "--trunc", "10",
            "--gn", "1,1", "--codim", "1", "--jobs", "2", "--out", str(tmp_path)]
    assert run(args) == 0
    first = (tmp_path / "relations.json").read_bytes()
    assert run(args) == 0
    assert first == (tmp_path / "relations.json").read_bytes()
