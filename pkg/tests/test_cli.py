"""End-to-end tests for the command-line interface."""

import json

import pytest

import trofey
from trofey.cli import main
from trofey.quasimodular import fit as quasimodular_fit


@pytest.fixture()
def graphs(tmp_path):
    files = {}
    specs = {
        "triangle": {"n": 3, "edges": [[1, 2], [2, 3], [1, 3]], "genus": [1, 0, 0]},
        "right": {"n": 3, "edges": [[1, 1], [1, 2], [2, 3], [1, 3]]},
        "theta": {"n": 2, "edges": [[1, 2], [1, 2], [1, 2]]},
        "unsorted": {"n": 3, "edges": [[1, 2], [1, 1], [2, 3], [1, 3]]},
    }
    for name, payload in specs.items():
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(payload))
        files[name] = str(path)
    return files


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_integral_triangle_example(graphs, capsys):
    code, out, _ = run(
        capsys,
        "integral", "--graph", graphs["triangle"], "--k", "2,0,0",
        "--gf", "1,0,0", "--order", "id", "--a", "0,0,3",
    )
    assert code == 0
    assert out == "115/6\n"


def test_integral_right_example(graphs, capsys):
    code, out, _ = run(
        capsys,
        "integral", "--graph", graphs["right"], "--gf", "0,0,0",
        "--order", "id", "--a", "2,0,0,1",
    )
    assert code == 0
    assert out == "3\n"


def test_integral_loop_without_degree(graphs, capsys):
    code, out, _ = run(
        capsys,
        "integral", "--graph", graphs["right"], "--gf", "0,0,0",
        "--order", "id", "--a", "0,1,0,2",
    )
    assert code == 0
    assert out == "0\n"


def test_integral_genus_from_file(graphs, capsys):
    # triangle.json carries genus [1,0,0]; omitting --gf uses it
    code, out, _ = run(
        capsys,
        "integral", "--graph", graphs["triangle"], "--order", "id", "--a", "0,0,3",
    )
    assert code == 0
    assert out == "115/6\n"


def test_integral_inconsistent_k_is_validation_error(graphs, capsys):
    code, _, err = run(
        capsys,
        "integral", "--graph", graphs["triangle"], "--k", "1,1,0",
        "--gf", "1,0,0", "--order", "id", "--a", "0,0,3",
    )
    assert code == 3
    assert "error:" in err


def test_integral_needs_a_or_q_order(graphs, capsys):
    code, _, err = run(capsys, "integral", "--graph", graphs["triangle"])
    assert code == 2
    assert "--a or --q-order" in err


def test_integral_bad_vector_is_parse_error(graphs, capsys):
    code, _, _ = run(
        capsys,
        "integral", "--graph", graphs["triangle"], "--order", "id", "--a", "0,x,3",
    )
    assert code == 2


def test_missing_graph_file_is_parse_error(capsys, tmp_path):
    code, _, err = run(
        capsys, "integral", "--graph", str(tmp_path / "nope.json"), "--a", "1"
    )
    assert code == 2
    assert "cannot read graph file" in err


def test_json_report_schema(graphs, capsys):
    code, out, _ = run(
        capsys,
        "--format", "json",
        "integral", "--graph", graphs["triangle"], "--gf", "1,0,0",
        "--order", "id", "--a", "0,0,3",
    )
    assert code == 0
    report = json.loads(out)
    assert set(report) == {"query", "results", "meta"}
    assert report["meta"]["version"] == trofey.__version__
    assert report["meta"]["edge_relabeling"] is None
    assert report["results"] == [
        {"labels": {"order": "id", "a": "0,0,3"}, "value": "115/6"}
    ]


def test_loop_resort_warns_and_records_permutation(graphs, capsys):
    code, out, err = run(
        capsys,
        "--format", "json",
        "integral", "--graph", graphs["unsorted"], "--gf", "0,0,0",
        "--order", "id", "--a", "2,0,0,1",
    )
    assert code == 0
    assert "loop edges moved to the front" in err
    report = json.loads(out)
    assert report["meta"]["edge_relabeling"] == [2, 1, 3, 4]
    assert report["results"][0]["value"] == "3"


def test_invariant_covers_route(capsys):
    code, out, _ = run(capsys, "invariant", "--k", "2,0,0", "--dmax", "3")
    assert code == 0
    assert out.splitlines() == ["d=1 1/4", "d=2 27", "d=3 279"]


def test_invariant_integral_route_agrees(capsys):
    code, out, _ = run(
        capsys, "invariant", "--k", "2,0,0", "--dmax", "2", "--route", "integrals"
    )
    assert code == 0
    assert out.splitlines() == ["d=1 1/4", "d=2 27"]


def test_invariant_compare_passes(capsys):
    code, out, _ = run(capsys, "invariant", "--k", "1,1", "--dmax", "2", "--compare")
    assert code == 0
    assert out.splitlines() == ["d=1 0", "d=2 4"]


def test_invariant_rejects_one_point(capsys):
    code, _, err = run(capsys, "invariant", "--k", "1", "--dmax", "1")
    assert code == 3
    assert "error:" in err


def test_invariant_csv(capsys):
    code, out, _ = run(
        capsys, "--format", "csv", "invariant", "--k", "2,0,0", "--dmax", "3"
    )
    assert code == 0
    assert out.splitlines() == ["d,value", "1,1/4", "2,27", "3,279"]


def test_fock_double(capsys):
    code, out, _ = run(capsys, "fock", "double", "--mu", "2,1", "--nu", "2,1", "--n", "2")
    assert code == 0
    assert out == "9\n"


def test_fock_elliptic_prints_formula_value(capsys):
    code, out, _ = run(capsys, "fock", "elliptic", "--g", "2", "--d", "3")
    assert code == 0
    assert out == "36\n"


def test_fock_check_passes(graphs, capsys):
    code, _, err = run(capsys, "fock", "check", "--graph", graphs["theta"], "--amax", "2")
    assert code == 0
    assert err == ""


def test_fock_check_rejects_bad_graph(graphs, capsys):
    code, _, _ = run(capsys, "fock", "check", "--graph", graphs["right"], "--amax", "1")
    assert code == 3


def test_fit_constant(capsys):
    code, out, _ = run(capsys, "fit", "--coeffs", "1", "--max-weight", "0")
    assert code == 0
    assert out.splitlines() == ["1", "weights {0} homogeneous"]


def test_fit_round_trip_from_json(graphs, capsys, tmp_path):
    code, out, _ = run(
        capsys,
        "--format", "json",
        "integral", "--graph", graphs["triangle"], "--gf", "1,0,0",
        "--order", "id", "--q-order", "16",
    )
    assert code == 0
    series_file = tmp_path / "series.json"
    series_file.write_text(out)

    code, fit_out, _ = run(
        capsys, "--format", "json", "fit", "--from", str(series_file), "--max-weight", "8"
    )
    assert code == 0
    report = json.loads(fit_out)

    # byte-for-byte agreement with the in-process fit
    from trofey.graphs import FeynmanGraph, identity_order
    from trofey.integrals import integral_series_q

    triangle = FeynmanGraph(3, ((1, 2), (2, 3), (1, 3)))
    series = integral_series_q(triangle, (1, 0, 0), identity_order(3), 16)
    direct = quasimodular_fit(series, 8, 16)
    assert report["meta"]["polynomial"] == direct.format_polynomial()
    assert report["meta"]["homogeneous"] is False
    assert report["meta"]["weight_profile"] == [6, 8]


def test_fit_failure_is_exit_5(graphs, capsys, tmp_path):
    # no weight-<=4 polynomial matches the triangle series
    code, out, _ = run(
        capsys,
        "--format", "json",
        "integral", "--graph", graphs["triangle"], "--gf", "1,0,0",
        "--order", "id", "--q-order", "16",
    )
    series_file = tmp_path / "series.json"
    series_file.write_text(out)
    code, _, err = run(
        capsys, "fit", "--from", str(series_file), "--max-weight", "4"
    )
    assert code == 5
    assert "no polynomial of weight" in err


def test_fit_underdetermined_is_exit_5(capsys):
    code, _, err = run(
        capsys, "fit", "--coeffs", "1,2,3", "--max-weight", "8", "--q-order", "4"
    )
    assert code == 5
    assert "underdetermined" in err


def test_fit_needs_exactly_one_source(capsys):
    code, _, _ = run(capsys, "fit", "--max-weight", "2")
    assert code == 2


def test_threads_env_does_not_change_output(graphs, capsys, monkeypatch):
    outputs = []
    for threads in ("1", "3"):
        monkeypatch.setenv("TROFEY_THREADS", threads)
        code, out, _ = run(
            capsys,
            "--format", "json",
            "invariant", "--k", "2,0,0", "--dmax", "2", "--compare",
        )
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1]


def test_bad_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("TROFEY_THREADS", "many")
    code, _, _ = run(capsys, "invariant", "--k", "1,1", "--dmax", "1", "--compare")
    assert code == 2


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    capsys.readouterr()
    assert info.value.code == 2
