import json

import pytest

from hbinv import cli
from hbinv.cli import dump_raw, load_raw, main, scalar_text, value_json
from hbinv.scalar import Cyc
from hbinv.zoo import kac_b4m

from test_hopf import sweedler


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_verify_group_algebra(capsys):
    code, out, _ = run(capsys, "verify", "--family", "group", "--group", "Z3")
    assert code == 0
    assert "hopf: 13/13" in out
    assert "yd: 11/11" in out
    assert "relations: 17/17" in out
    assert "algebra" in out and "dim=3" in out


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "--family", "double",
                       "--group", "Z2", "--json")
    assert code == 0
    rep = json.loads(out)
    assert set(rep) == {"algebra", "results", "suites"}
    assert rep["results"] == []
    assert rep["suites"]["hopf"]["passed"] == 13
    assert rep["suites"]["yd"]["total"] == 11
    assert rep["suites"]["relations"] == {"passed": 17, "total": 17,
                                          "failures": []}
    alg = rep["algebra"]
    assert alg["dim"] == 4 and alg["unimodular"] is True
    assert alg["trace_s2"] == {"type": "rational", "data": "4"}


def test_invariant_b4m_theta(capsys):
    code, out, _ = run(capsys, "invariant", "--family", "b4m", "--m", "5",
                       "--tangle", "theta")
    assert code == 0
    assert "v(theta) = 400" in out


def test_invariant_json_is_deterministic(capsys):
    argv = ("invariant", "--family", "group", "--group", "S3",
            "--tangle", "theta", "--json")
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2
    rep = json.loads(out1)
    res = rep["results"][0]
    assert res == {"tangle": "theta",
                   "value": {"type": "rational", "data": "36"},
                   "caps": 1, "cups": 2, "horn_checked": None}


def test_invariant_with_horn_and_scaling_checks(capsys):
    code, out, _ = run(capsys, "invariant", "--family", "group",
                       "--group", "S3", "--tangle", "theta",
                       "--check-horns", "--scale", "2")
    assert code == 0
    assert "v(theta) = 36" in out
    assert "FAIL" not in out


def test_invariant_disk_sum_and_repeat(capsys):
    code, out, _ = run(capsys, "invariant", "--family", "group",
                       "--group", "S3", "--tangle", "O", "--tangle", "O#O")
    assert code == 0
    assert "v(O) = 6" in out
    assert "v(O#O) = 36" in out


def test_invariant_tangle_from_file(capsys, tmp_path):
    p = tmp_path / "ring.tangle"
    p.write_text("# unknotted solid torus\ncap . cup\n")
    code, out, _ = run(capsys, "invariant", "--family", "group",
                       "--group", "Z2", "--tangle", str(p))
    assert code == 0
    assert "v(ring.tangle) = 2" in out


def test_invariant_decimal_label(capsys):
    code, out, _ = run(capsys, "invariant", "--family", "uq", "--n", "3",
                       "--tangle", "O", "--decimal", "4")
    assert code == 0
    assert "v(O) = 0 ~ 0.0000+0.0000i (4-digit approximation)" in out


def test_uq_conjugate_flag(capsys):
    code, out, _ = run(capsys, "invariant", "--family", "uq", "--n", "3",
                       "--conjugate", "--tangle", "theta")
    assert code == 0
    assert "v(theta) = 0" in out


def test_table_grid(capsys):
    code, out, _ = run(capsys, "table", "--m-range", "3..4",
                       "--tangles", "O,theta")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["tangle", "m=3", "m=4"]
    assert lines[1].split() == ["O", "12", "16"]
    assert lines[2].split() == ["theta", "144", "256"]


def test_table_json_has_m_keys(capsys):
    code, out, _ = run(capsys, "table", "--m-range", "3..3",
                       "--tangles", "theta", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["results"] == [{"tangle": "theta", "m": 3,
                               "value": {"type": "rational", "data": "144"},
                               "caps": None, "cups": None,
                               "horn_checked": None}]


def test_raw_roundtrip(capsys, tmp_path):
    H, _ = kac_b4m(3)
    p = tmp_path / "b12.hopf"
    p.write_text(dump_raw(H))
    H2 = load_raw(str(p))
    assert H2.dim == 12 and H2.mult == H.mult and H2.comult == H.comult
    code, out, _ = run(capsys, "verify", "--family", "raw",
                       "--file", str(p))
    assert code == 0 and "relations: 17/17" in out
    code, out, _ = run(capsys, "invariant", "--family", "raw",
                       "--file", str(p), "--tangle", "theta")
    assert code == 0 and "v(theta) = 144" in out


def test_raw_corrupted_constants(capsys, tmp_path):
    H, _ = kac_b4m(3)
    text = dump_raw(H)
    lines = text.splitlines()
    k = next(i for i, ln in enumerate(lines) if ln == "0 1 -> 1 : 1")
    lines[k] = "0 1 -> 1 : 2"
    p = tmp_path / "broken.hopf"
    p.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "verify", "--family", "raw", "--file", str(p))
    assert code == 1
    assert "FAIL" in out
    code, _, err = run(capsys, "invariant", "--family", "raw",
                       "--file", str(p), "--tangle", "O")
    assert code == 1
    assert "structure constants fail verification" in err


def test_raw_header_required(capsys, tmp_path):
    p = tmp_path / "junk.hopf"
    p.write_text("not a header\n")
    code, _, err = run(capsys, "verify", "--family", "raw", "--file", str(p))
    assert code == 2
    assert "usage error" in err and "hopf v1" in err


def test_non_unimodular_raw_is_unsupported(capsys, tmp_path):
    p = tmp_path / "sweedler.hopf"
    p.write_text(dump_raw(sweedler()))
    code, _, err = run(capsys, "verify", "--family", "raw", "--file", str(p))
    assert code == 3
    assert "unsupported algebra" in err and "unimodular" in err
    code, _, err = run(capsys, "invariant", "--family", "raw",
                       "--file", str(p), "--tangle", "O")
    assert code == 3


def test_usage_errors(capsys):
    code, _, err = run(capsys, "invariant", "--family", "group",
                       "--group", "S3", "--tangle", "O", "--scale", "x/y")
    assert code == 2 and "usage error" in err
    code, _, err = run(capsys, "invariant", "--family", "group",
                       "--group", "S3", "--tangle", "O", "--scale", "0")
    assert code == 2 and "nonzero" in err
    code, _, err = run(capsys, "invariant", "--family", "group",
                       "--group", "S3", "--tangle", "no-such-tangle")
    assert code == 2
    code, _, err = run(capsys, "table", "--m-range", "7..3")
    assert code == 2
    code, _, err = run(capsys, "verify", "--family", "group")
    assert code == 2 and "group" in err
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--family", "nonsense"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_assumption_gate_is_exit_3(capsys, monkeypatch):
    def boom(B, e):
        raise ValueError("assumption lambda(z)=lambda(S(z)) fails")
    monkeypatch.setattr(cli, "invariant_v", boom)
    code, _, err = run(capsys, "invariant", "--family", "group",
                       "--group", "Z2", "--tangle", "O")
    assert code == 3
    assert "unsupported algebra" in err


def test_scalar_text_forms():
    assert scalar_text(Cyc.from_rational(144)) == "144"
    half = Cyc.from_rational(1) / Cyc.from_rational(2)
    assert scalar_text(half) == "1/2"
    z = Cyc.zeta(3)
    assert scalar_text(z + z) == "2*z (z = primitive 3-th root of unity)"
    assert scalar_text(-z ** 2) == ("1 + z (z = primitive 3-th root of "
                                    "unity)")
    assert value_json(z) == {"type": "cyclotomic",
                             "data": {"conductor": 3, "num": [0, 1],
                                      "den": 1}}
