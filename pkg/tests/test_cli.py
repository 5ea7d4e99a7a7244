import io
import json
import pathlib
import sys

import pytest

from cupone.cli import main
from cupone.formats import (
    ParseError,
    detect_and_parse,
    parse_delta_text,
    parse_presentation_text,
    serialize_delta,
    serialize_presentation,
)
from cupone.presentation import heisenberg_presentation, torus_presentation
from cupone.rings import RingSpec

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fixture_round_trips():
    for path in sorted(FIXTURES.iterdir()):
        text = path.read_text()
        kind, parsed = detect_and_parse(text, str(path))
        if kind == "delta":
            delta, ring = parsed
            assert serialize_delta(delta, ring) == text
        else:
            assert serialize_presentation(parsed) == text


def test_presentation_parse_frozen():
    pg = parse_presentation_text("gens: a\nrel: a a a\n")
    assert pg.generators == ("a",)
    assert pg.relators == ((("a", 1), ("a", 1), ("a", 1)),)


def test_torus_delta_like_load():
    # torus presentation file loads to 1 vertex, 7 edges, 6 triangles
    text = (FIXTURES / "torus.pres").read_text()
    kind, pg = detect_and_parse(text)
    assert kind == "presentation"
    from cupone.presentation import presentation_complex
    X = presentation_complex(pg).delta
    assert (len(X.cells[0]), len(X.cells[1]), len(X.cells[2])) == (1, 7, 6)


def test_malformed_face_tuple_error():
    bad = "ring Z\ncells 0\nv :\ncells 1\ne : v\n"
    with pytest.raises(ParseError) as exc:
        parse_delta_text(bad, "bad.delta")
    assert "e" in str(exc.value) and "faces" in str(exc.value)


def test_delta_parse_ring_header():
    delta, ring = parse_delta_text("ring Zp 5\ncells 0\nv :\n")
    assert ring == RingSpec.Zp(5)
    with pytest.raises(ParseError):
        parse_delta_text("cells 0\nv :\n")


def test_cli_kappa_text(capsys):
    code, out, err = run_cli(capsys, "kappa", "--stages", "2",
                             str(FIXTURES / "borromean_n2.pres"))
    assert code == 0
    assert "kappa_2 = Z/2 + Z/2" in out


def test_cli_kappa_json(capsys):
    code, out, err = run_cli(capsys, "kappa", "--stages", "2", "--format",
                             "json", str(FIXTURES / "borromean_n2.pres"))
    assert code == 0
    payload = json.loads(out)
    assert payload["command"] == "kappa"
    assert payload["ring"] == "Z"
    assert payload["results"]["kappa_2"] == {"rank": 0, "torsion": [2, 2]}


def test_cli_compare(capsys):
    code, out, _ = run_cli(capsys, "compare", "--stages", "2",
                           str(FIXTURES / "borromean_n2.pres"),
                           str(FIXTURES / "borromean_n3.pres"))
    assert code == 0
    assert out.strip().endswith("distinguished")
    code, out, _ = run_cli(capsys, "compare", "--stages", "2",
                           "--forget-torsion",
                           str(FIXTURES / "borromean_n2.pres"),
                           str(FIXTURES / "borromean_n3.pres"))
    assert code == 0
    assert out.strip().endswith("not-distinguished-by-kappa")


def test_cli_compare_jobs(capsys):
    code, out, _ = run_cli(capsys, "compare", "--stages", "2", "--jobs", "2",
                           str(FIXTURES / "borromean_n1.pres"),
                           str(FIXTURES / "borromean_n2.pres"))
    assert code == 0
    assert "distinguished" in out


def test_cli_bar(capsys):
    code, out, _ = run_cli(capsys, "bar", "--group", "Zp:3",
                           "--max-dim", "2")
    assert code == 0
    assert "cells: 1 3 9" in out
    code, out, _ = run_cli(capsys, "bar", "--group", "Zp:2", "--max-dim", "3")
    assert "cells: 1 2 4 8" in out


def test_cli_determinism(capsys):
    args = ("minimal-model", "--stages", "2",
            str(FIXTURES / "heisenberg_k2.pres"))
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2
    args = ("massey", str(FIXTURES / "borromean_n1.pres"))
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2


def test_cli_exit_codes(tmp_path, capsys):
    # I/O failure -> 2
    code, _, err = run_cli(capsys, "cohomology", str(tmp_path / "nope.pres"))
    assert code == 2
    # parse failure -> 2
    bad = tmp_path / "bad.delta"
    bad.write_text("ring Z\ncells 1\ne : v v\n")
    code, _, err = run_cli(capsys, "cohomology", str(bad))
    assert code == 2
    # mathematical precondition failure -> 1 (disconnected target)
    disc = tmp_path / "disc.delta"
    disc.write_text("ring Z\ncells 0\np :\nq :\n")
    code, _, err = run_cli(capsys, "minimal-model", str(disc))
    assert code == 1


def test_cli_minimal_model_zp(capsys):
    code, out, _ = run_cli(capsys, "minimal-model", "--ring", "Zp:3",
                           str(FIXTURES / "torus.pres"))
    assert code == 0
    assert "stage 2:" in out
    assert "brute" not in out  # route note only in json
    code, out, _ = run_cli(capsys, "minimal-model", "--ring", "Zp:3",
                           "--format", "json", str(FIXTURES / "torus.pres"))
    payload = json.loads(out)
    assert payload["results"]["stages"][-1]["H2_route"] == "brute-force-Zp"


def test_cli_verify_axioms_small(capsys):
    code, out, _ = run_cli(capsys, "verify-axioms", "--cases", "5")
    assert code == 0
    assert out.strip().endswith("all-pass")
    assert out.count("pass") >= 8


def test_cli_massey_undefined_reported(capsys):
    code, out, _ = run_cli(capsys, "massey", str(FIXTURES / "torus.pres"),
                           "--triples", "1,2,1")
    assert code == 0
    assert "undefined" in out


def test_cli_stage_cap_over_Z(capsys):
    code, out, err = run_cli(capsys, "minimal-model", "--stages", "3",
                             str(FIXTURES / "borromean_n2.pres"))
    assert code == 1
    assert "n <= 2" in err


def test_cli_kappa_stage1(capsys):
    code, out, _ = run_cli(capsys, "kappa", "--stages", "1",
                           str(FIXTURES / "cyclic4.pres"))
    assert code == 0
    assert "kappa_1 = Z/4" in out
