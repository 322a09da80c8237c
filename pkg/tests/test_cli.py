"""CLI surface: subcommands, exit codes, determinism, round trips."""

import json

from ellsplit.cli import EXIT_BUDGET, EXIT_CONFIG, EXIT_OK, EXIT_VERIFY, main


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_corpus_list(capsys):
    code, out, _ = run_cli(["corpus-list"], capsys)
    assert code == EXIT_OK
    data = json.loads(out)
    names = {row["name"] for row in data["corpus"]}
    assert {"37a1", "CxE", "envelope", "transverse-hypersurface"} <= names


def test_height_command(capsys):
    code, out, _ = run_cli(
        [
            "height",
            "--curve",
            "corpus:37a1",
            "--point",
            '{"x":"0","y":"0"}',
            "--method",
            "both",
            "--precision",
            "1e-9",
        ],
        capsys,
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert abs(data["value"] - 0.05111140823996882) <= 1e-9
    assert data["radius"] <= 1e-9


def test_height_torsion_exact(capsys):
    code, out, _ = run_cli(
        ["height", "--curve", "corpus:j0", "--point", '{"x":"2","y":"3"}'],
        capsys,
    )
    data = json.loads(out)
    assert code == EXIT_OK and data["value"] == 0.0 and data["radius"] == 0.0


def test_check_property_s_envelope(capsys):
    code, out, _ = run_cli(
        ["check-property-s", "--variety", "corpus:envelope", "--n", "0", "--bound", "1"],
        capsys,
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["verdict"] == "FAILS"
    assert data["witness_kept_variables"] == [1, 2]
    assert data["deprived_set_empty"] is True


def test_find_dominant_projection(capsys):
    code, out, _ = run_cli(
        ["find-dominant-projection", "--variety", "corpus:envelope"], capsys
    )
    assert code == EXIT_OK
    assert json.loads(out)["coordinates"] == [1, 3]


def test_enumerate_subgroups(capsys):
    code, out, _ = run_cli(
        ["enumerate-subgroups", "--r", "1", "--g", "2", "--bound", "1"], capsys
    )
    data = json.loads(out)
    assert code == EXIT_OK and data["count"] == 4


def test_search_sr(tmp_path, capsys):
    pts = [[{"x": "0", "y": "0"}, {"x": "1", "y": "0"}]]
    f = tmp_path / "pts.json"
    f.write_text(json.dumps(pts))
    code, out, _ = run_cli(
        [
            "search-sr",
            "--variety",
            "corpus:C",
            "--points",
            str(f),
            "--r",
            "1",
            "--bound",
            "2",
        ],
        capsys,
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert len(data["records"]) == 1
    cert = data["records"][0]["certificate"]["entries"]
    assert cert == [[{"a": 2, "b": 0}, {"a": -1, "b": 0}]]


def test_unbounded_run_and_verify(tmp_path, capsys):
    csv_path = tmp_path / "run.csv"
    cert_path = tmp_path / "certs.json"
    code, out, _ = run_cli(
        [
            "unbounded-run",
            "--variety",
            "corpus:CxE",
            "--N",
            "2,4,8",
            "--count",
            "1",
            "--out",
            str(csv_path),
            "--cert-out",
            str(cert_path),
        ],
        capsys,
    )
    assert code == EXIT_OK
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0].startswith("N,coefficients,point,seminorm,radius,bound,verified")
    assert len(lines) == 4 and all(line.endswith("True") for line in lines[1:])

    code, out, _ = run_cli(["verify-certificate", str(cert_path)], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["problems"] == []

    # tamper: swap the fiber coordinate for an unrelated point
    data = json.loads(cert_path.read_text())
    data["certificates"][0]["point"][2] = {"x": "1/4", "y": "-5/8"}  # 5P
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run_cli(["verify-certificate", str(bad)], capsys)
    assert code == EXIT_VERIFY


def test_exit_codes(tmp_path, capsys):
    code, _, _ = run_cli(["check-property-s", "--variety", "corpus:missing"], capsys)
    assert code == EXIT_CONFIG
    v = tmp_path / "v.json"
    v.write_text(json.dumps({"ambient": "torus", "g": 2, "generators": ["z2 - z1^5 - 1"], "dimension": 2}))
    code, _, _ = run_cli(["check-property-s", "--variety", str(v)], capsys)
    assert code == EXIT_CONFIG  # claimed dimension is wrong
    code, _, _ = run_cli(
        ["height", "--curve", "corpus:37a1", "--point", '{"x":"0","y":"0"}',
         "--method", "doubling", "--precision", "1e-13"],
        capsys,
    )
    assert code == EXIT_BUDGET


def test_user_variety_file(tmp_path, capsys):
    v = tmp_path / "v.json"
    v.write_text(
        json.dumps(
            {
                "ambient": "torus",
                "g": 2,
                "generators": ["z2 - z1^5 - 1"],
                "dimension": 1,
                "parameterization": {
                    "names": ["u"],
                    "coords": [{"num": "u"}, {"num": "u^5 + 1"}],
                },
            }
        )
    )
    code, out, _ = run_cli(
        ["check-property-s", "--variety", str(v), "--bound", "1"], capsys
    )
    assert code == EXIT_OK
    assert json.loads(out)["verdict"] == "PASSES-UP-TO-BOUND"


def test_determinism(tmp_path, capsys):
    args = ["unbounded-run", "--variety", "corpus:CxE", "--N", "2,4", "--count", "2"]
    _, out1, _ = run_cli(args, capsys)
    _, out2, _ = run_cli(args, capsys)
    assert out1 == out2
    # emitted JSON re-parses to an equal value
    assert json.loads(out1) == json.loads(out2)


def test_search_sr_csv(tmp_path, capsys):
    pts = [[{"x": "0", "y": "0"}, {"x": "1", "y": "0"}]]
    f = tmp_path / "pts.json"
    f.write_text(json.dumps(pts))
    code, out, _ = run_cli(
        ["search-sr", "--variety", "corpus:C", "--points", str(f),
         "--r", "1", "--bound", "2", "--csv"],
        capsys,
    )
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "point,certificate,r,evidence"
    assert len(lines) == 2


def test_point_json_roundtrip():
    from ellsplit import serialize
    from ellsplit.curves import curve_37a1

    E = curve_37a1()
    P = E.point(0, 0)
    big = 9 * P
    for pt in (P, big, E.infinity()):
        assert serialize.point_from_json(serialize.point_to_json(pt), E) == pt
    assert serialize.curve_from_json(serialize.curve_to_json(E)) == E
