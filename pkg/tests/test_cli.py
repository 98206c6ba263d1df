import json
import subprocess
import sys

import pytest

from dunits.cli import main, verify_checks
from dunits.unitary import StructureReport
from dunits.wedderburn import decomposition


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_order(capsys):
    rc, out, _ = run(capsys, "order", "--p", "3", "--m", "1", "--n", "1")
    assert rc == 0
    assert out.strip() == "|U| = 12, |U_*| = 12"


def test_order_json(capsys):
    rc, out, _ = run(capsys, "order", "--p", "3", "--m", "2", "--json")
    assert json.loads(out) == {"units": "42336", "unitary": "6048"}


def test_decompose_a(capsys):
    rc, out, _ = run(capsys, "decompose", "--p", "3", "--element", "a")
    assert rc == 0
    assert "scalar: 1" in out
    assert "block (1,1): [[0,1],[1,1]]" in out
    assert "unit: yes" in out


def test_decompose_json_roundtrip(capsys):
    rc, out, _ = run(capsys, "decompose", "--p", "3", "--m", "2", "--element", "1 + a^2*b + a^5", "--json")
    assert rc == 0
    dec = decomposition(3, 2, 1)
    img = dec.image_from_json(json.loads(out))
    assert img == dec.decompose(dec.alg.parse("1 + a^2*b + a^5"))


def test_decompose_needs_element(capsys):
    rc, _, err = run(capsys, "decompose", "--p", "3")
    assert rc == 2 and "--element" in err


def test_decompose_parse_error_points_at_column(capsys):
    rc, _, err = run(capsys, "decompose", "--p", "3", "--element", "1 + c")
    assert rc == 2
    lines = err.splitlines()
    assert "column 5" in lines[0]
    assert lines[1] == "  1 + c"
    assert lines[2] == "      ^"


def test_verify_exit_zero(capsys):
    rc, out, _ = run(capsys, "verify", "--p", "5")
    assert rc == 0
    assert "FAIL" not in out
    assert out.count("PASS") == len(verify_checks(5, 1, 1))


def test_verify_json(capsys):
    rc, out, _ = run(capsys, "verify", "--p", "3", "--n", "2", "--json")
    obj = json.loads(out)
    assert rc == 0 and obj["pass"] is True
    assert all(c["pass"] for c in obj["checks"])


def test_generators(capsys):
    rc, out, _ = run(capsys, "generators", "--p", "3", "--n", "2")
    assert rc == 0 and out.splitlines()[0] == "6 generators"


def test_closure(capsys):
    rc, out, _ = run(capsys, "closure", "--p", "7")
    assert rc == 0 and "|<B>| = 504 (expected 504)" in out


def test_closure_cap(capsys):
    rc, out, _ = run(capsys, "closure", "--p", "5", "--cap", "5")
    assert rc == 1 and "cap" in out


def test_tower(capsys):
    rc, out, _ = run(capsys, "tower", "--p", "3", "--m", "2")
    assert rc == 0
    assert "r=2: o=6 k=1 t=3 q=8 k'=1" in out
    rc, out, _ = run(capsys, "tower", "--p", "3", "--m", "2", "--json")
    assert json.loads(out)["o"] == [2, 6]


def test_sweep(capsys):
    rc, out, _ = run(capsys, "sweep", "--p", "5")
    assert rc == 0 and "360 units" in out and "120 unitary" in out
    rc, out, _ = run(capsys, "sweep", "--p", "5", "--csv")
    assert rc == 0 and out.splitlines()[1].startswith("5,1,1,1024,360,120,")


def test_sweep_guard(capsys):
    rc, _, err = run(capsys, "sweep", "--p", "11")
    assert rc == 2 and "guard" in err


def test_report(capsys):
    rc, out, _ = run(capsys, "report", "--p", "3", "--n", "2", "--json")
    rep = StructureReport.from_json(json.loads(out))
    assert (rep.units, rep.unitary, rep.w, rep.x_order) == (2160, 240, 3, 3)


@pytest.mark.parametrize("argv", [
    ["order", "--p", "4"],
    ["order", "--p", "2"],
    ["order", "--p", "3", "--m", "0"],
    ["frobnicate", "--p", "3"],
    ["order"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_console_script_is_deterministic():
    cmd = [sys.executable, "-m", "dunits.cli", "verify", "--p", "3", "--m", "2", "--seed", "7", "--json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    assert json.loads(first)["pass"] is True
