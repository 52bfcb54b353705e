import io
import json
import re
import subprocess
import sys
from fractions import Fraction

import pytest

from leibniz_bimod.algebra import Algebra, nilpotent_2d, sl2
from leibniz_bimod.bimodule import Bimodule
from leibniz_bimod.cli import render_table, run
from leibniz_bimod.sl2ext import m1


def call(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, data):
        p = tmp_path / name
        p.write_text(json.dumps(data) if not isinstance(data, str) else data)
        return str(p)
    return write


def test_check_leibniz_pass_and_fail(capsys, files):
    code, out, _ = call(capsys, "check-leibniz", files("sl2.json", sl2().to_json()))
    assert code == 0 and json.loads(out) == {"leibniz": True}
    bad = Algebra.from_products(("a",), {("a", "a"): {"a": 1}})
    code, out, _ = call(capsys, "check-leibniz", files("bad.json", bad.to_json()))
    assert code == 1
    assert json.loads(out)["witness"] == {"triple": ["a", "a", "a"], "lhs": ["1"], "rhs": ["0"]}


def test_malformed_inputs_exit_2(capsys, files):
    code, _, err = call(capsys, "check-leibniz", files("x.json", "{not json"))
    assert code == 2 and "malformed JSON" in err and err.count("\n") == 1
    code, _, err = call(capsys, "check-leibniz", files("y.json", {"dim": 1, "basis": ["a"]}))
    assert code == 2 and "'c'" in err
    data = m1(2).to_json()
    data["left"]["h"] = [["0"]]
    code, _, err = call(capsys, "decompose", files("z.json", data))
    assert code == 2 and "left.h" in err
    code, _, err = call(capsys, "classify", "--n", "2")
    assert code == 2 and "--m" in err and err.count("\n") == 1
    code, _, err = call(capsys, "irrep", "--n", "2", "--bogus")
    assert code == 2 and "--bogus" in err


def test_leib_kernel(capsys, files):
    code, out, _ = call(capsys, "leib-kernel", files("a.json", nilpotent_2d().to_json()))
    data = json.loads(out)
    assert code == 0
    assert data["leibniz_kernel"] == {"dim": 1, "basis": [["0", "1"]]}
    assert data["liezation"]["dim"] == 1


def test_constructor_outputs_feed_consumers(capsys, files, tmp_path):
    alg = files("sl2.json", sl2().to_json())
    _, irrep_out, _ = call(capsys, "irrep", "--n", "2")
    _, m1_out, _ = call(capsys, "m1", "--n", "4")
    _, m2_out, _ = call(capsys, "m2", "--n", "3")
    _, adj_out, _ = call(capsys, "adjoint", alg)
    for text in (irrep_out, m1_out, m2_out, adj_out):
        path = files("b.json", text)
        assert call(capsys, "check-bimodule", alg, path)[0] == 0
        assert call(capsys, "decompose", path)[0] == 0
        code, semi, _ = call(capsys, "semidirect", alg, path)
        assert code == 0
        spath = files("s.json", semi)
        assert call(capsys, "check-leibniz", spath)[0] == 0
        assert call(capsys, "leib-kernel", spath)[0] == 0
        assert call(capsys, "adjoint", spath)[0] == 0


def test_decompose_m1_from_stdin(capsys, monkeypatch):
    _, m1_out, _ = call(capsys, "m1", "--n", "4")
    code, out, _ = call(capsys, "decompose", "-", stdin=m1_out, monkeypatch=monkeypatch)
    data = json.loads(out)
    assert code == 0
    assert data["verdict"] == "indecomposable_not_simple"
    assert [s["dim"] for s in data["proper_subbimodules_found"]] == [3]


def test_decompose_general_route(capsys, files):
    _, adj, _ = call(capsys, "adjoint", files("a.json", nilpotent_2d().to_json()))
    code, out, _ = call(capsys, "decompose", files("b.json", adj))
    data = json.loads(out)
    assert data["route"] == "general"
    assert data["completely_reducible"] is False and data["simple"] is False


def test_check_bimodule_failure_exit_1(capsys, files):
    from leibniz_bimod.bimodule import adjoint
    ad = adjoint(sl2())
    bad = Bimodule(ad.algebra, 3, ad.right, ad.right).to_json()
    code, out, _ = call(capsys, "check-bimodule", files("a.json", sl2().to_json()), files("b.json", bad))
    assert code == 1 and json.loads(out)["axiom4"]["passed"] is False


def test_classify_command(capsys):
    code, out, _ = call(capsys, "classify", "--n", "4", "--m", "2")
    data = json.loads(out)
    assert code == 0
    labels = [b["label"] for b in data["branches"]]
    assert labels.count("M1_family") == 1 and labels.count("M2_family") == 1
    code, out, _ = call(capsys, "classify", "--n", "4", "--m", "2", "--stage", "linear")
    assert json.loads(out)["branches"] == []


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = call(capsys, "m2", "--n", "2", "--output", str(target))
    assert code == 0 and out == ""
    assert Bimodule.from_json(json.loads(target.read_text())) is not None


def _parse_combo(text, names):
    coeffs = {n: Fraction(0) for n in names}
    if text == "0":
        return coeffs
    for sign, c, name in re.findall(r"(^-|[-+]) ?(?:([0-9/]+)\*)?(\w+)", text if text[0] == "-" else "+ " + text):
        val = Fraction(c) if c else Fraction(1)
        coeffs[name] += -val if sign == "-" else val
    return coeffs


def test_table_format_is_lossless_for_bimodules(capsys):
    _, js, _ = call(capsys, "m1", "--n", "3")
    _, table, _ = call(capsys, "m1", "--n", "3", "--format", "table")
    bm = Bimodule.from_json(json.loads(js))
    names = bm.basis_names
    lines = dict(line.split(" = ", 1) for line in table.splitlines())
    for x in ("e", "f", "h"):
        for c, src in enumerate(names):
            left = _parse_combo(lines[f"<{x},{src}>"], names)
            right = _parse_combo(lines[f"[{src},{x}]"], names)
            assert tuple(left[n] for n in names) == bm.L(x).col(c)
            assert tuple(right[n] for n in names) == bm.R(x).col(c)
    assert "<h,v1> = -v1 - 2*w0" in table.splitlines()


def test_table_format_flattens_reports(capsys):
    _, js, _ = call(capsys, "classify", "--n", "2", "--m", "2", "--stage", "linear")
    _, table, _ = call(capsys, "classify", "--n", "2", "--m", "2", "--stage", "linear", "--format", "table")
    data = json.loads(js)
    assert f"linear_stage.dim = {data['linear_stage']['dim']}" in table
    assert len(render_table(data)) == len(table.splitlines())


def test_deterministic_output(capsys):
    a = call(capsys, "classify", "--n", "3", "--m", "1")[1]
    b = call(capsys, "classify", "--n", "3", "--m", "1")[1]
    assert a == b


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "leibniz_bimod", "irrep", "--n", "1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["right"]["h"] == [["1", "0"], ["0", "-1"]]
