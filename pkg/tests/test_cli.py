import json
import math

import pytest

from flatbill import exactnum
from flatbill.cli import run
from flatbill.geodesic import staircase_l
from flatbill.unfold import TranslationSurface


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sv_text(capsys):
    code, out, _ = call(capsys, "sv", "cyl", "--k1", "1", "--k2", "3")
    assert code == 0 and out.strip() == "238/15 · π^-2"


def test_sv_json(capsys):
    code, out, _ = call(capsys, "sv", "right", "--a", "3", "--n", "8", "--format", "json")
    d = json.loads(out)
    assert d["coefficient"] == "119/1920" and d["float"] == pytest.approx(119 / (1920 * math.pi))


def test_classify_right_json(capsys):
    code, out, _ = call(capsys, "classify", "right", "--a", "3", "--n", "8", "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["kind"].startswith("quadratic_double") and d["summary"] == "quadratic double of Q(1, 3, -1^8)"
    assert sum(d["eigenspace_dims"].values()) == 4


def test_classify_almost(capsys):
    code, out, _ = call(capsys, "classify", "almost", "--signature", "[3/16,5/16,1/2,1/2,3/2]")
    assert code == 0 and "full_hyperelliptic_locus" in out


def test_domain_error_exit_code(capsys):
    code, out, err = call(capsys, "classify", "right", "--a", "2", "--n", "8")
    assert code == 1 and out == ""
    assert json.loads(err)["exit_code"] == 1


def test_exceptional_constant_is_domain_error(capsys):
    code, _, err = call(capsys, "sv", "right", "--a", "1", "--n", "5")
    assert code == 1 and json.loads(err)["error"] == "ExceptionalParameters"


@pytest.mark.parametrize("argv", [[], ["bogus"], ["sv", "cyl", "--k1", "1"], ["sv", "cyl", "--nope"],
                                  ["classify", "hexagon"], ["count", "--polygon", "square"],
                                  ["selftest", "--grid", "25"], ["sv", "cyl", "--k1", "1", "--k2", "3",
                                                                 "--threads", "0"]])
def test_usage_errors(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 2
    assert json.loads(err)["error"] == "usage"


def test_count_csv_with_estimate(capsys):
    code, out, err = call(capsys, "count", "--polygon", "right:a=3,n=8", "--L", "6", "--estimate")
    assert code == 0
    assert out.splitlines()[0] == "length2_exact,length,multiplicity"
    assert "119/1920" in err


def test_count_square(capsys):
    code, out, _ = call(capsys, "count", "--polygon", "square", "--L", "3", "--format", "json")
    assert json.loads(out)["total"] == 3


def test_diagonals(capsys):
    code, out, _ = call(capsys, "diagonals", "--polygon", "square", "--p1", "v0", "--p2", "v2", "--L", "1.5",
                        "--format", "json")
    assert code == 0 and json.loads(out)["total"] == 1


def test_unfold_writes_surface(capsys, tmp_path):
    path = tmp_path / "s.json"
    code, out, _ = call(capsys, "unfold", "--polygon", "right:a=3,n=8", "--mode", "partial", "--out", str(path))
    assert code == 0 and "Q(1, 3, -1^8" in out
    S = TranslationSurface.loads(path.read_text())
    S.verify()
    assert json.loads(path.read_text())["format"] == "flatbill-surface/1"


def test_blocking(capsys):
    code, out, _ = call(capsys, "blocking", "--polygon", "iso:a=1,b=5,n=7", "--p1", "v0", "--p2", "v1",
                        "--check", "6", "--format", "json")
    d = json.loads(out)
    assert d["blocked"] and d["consistent"] and not d["illumination"]["found"]


def test_estimate_trace(capsys, tmp_path):
    path = tmp_path / "trace.dat"
    code, out, _ = call(capsys, "estimate", "--polygon", "right:a=3,n=8", "--L", "20", "--points", "5",
                        "--out", str(path))
    rows = [list(map(float, ln.split())) for ln in path.read_text().splitlines()]
    assert code == 0 and len(rows) == 5 and rows[-1][0] == 20


def test_output_is_deterministic(capsys):
    argv = ["count", "--polygon", "right:a=3,n=8", "--L", "8", "--format", "json", "--seed", "3"]
    _, a, _ = call(capsys, *argv)
    _, b, _ = call(capsys, *argv, "--threads", "4")
    assert a == b


def test_precision_flag_is_scoped(capsys):
    before = exactnum.PRECISION_CAP
    code, _, _ = call(capsys, "sv", "cyl", "--k1", "1", "--k2", "3", "--precision", "128")
    assert code == 0 and exactnum.PRECISION_CAP == before


def test_selftest_passes(capsys):
    code, out, _ = call(capsys, "selftest", "--grid", "n<=12")
    assert code == 0 and "FAIL" not in out


def test_selftest_corrupted_fixture(capsys, tmp_path):
    d = staircase_l().to_json()
    d["gluings"][0][3] = (d["gluings"][0][3] + 1) % 3
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d))
    code, out, _ = call(capsys, "selftest", "--fixture", str(path))
    assert code == 1 and "FAIL" in out
