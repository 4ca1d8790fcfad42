import json
import subprocess
import sys
from fractions import Fraction

import pytest

from padelic.cli import main
from padelic.exact import parse_phase, to_rational


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.rstrip("\n"), out.err.strip()


@pytest.fixture
def free_json(tmp_path):
    path = tmp_path / "free.json"
    path.write_text(json.dumps({"n": 1, "A": [[["1"]]]}))
    return str(path)


def test_lambda_example(capsys):
    assert run(capsys, "lambda", "--v", "3", "--x", "3")[:2] == (0, '{"phase": "1/4"}')


def test_norm_product_example(capsys):
    assert run(capsys, "adelic-product", "norm", "--x", "6")[:2] == (0, '{"product": "1"}')


def test_kernel_example(capsys, free_json):
    code, out, _ = run(capsys, "kernel", "--valuation", "inf", "--lagrangian", free_json,
                       "--t1", "0", "--t2", "2", "--x1", "0", "--x2", "1", "--h", "1")
    doc = json.loads(out)
    assert code == 0
    assert (doc["magSq"], doc["phase"]) == ("1/2", "1/8")


def test_builtin_lagrangian_matches_file(capsys, free_json):
    args = ["--valuation", "3", "--t1", "0", "--t2", "3", "--x1", "0", "--x2", "1"]
    _, a, _ = run(capsys, "kernel", "--lagrangian", free_json, *args)
    _, b, _ = run(capsys, "kernel", "--lagrangian", "free", *args)
    assert a == b


@pytest.mark.parametrize(
    "argv,key,value",
    [
        (["hilbert", "--v", "2", "--a", "3", "--b", "3"], "symbol", -1),
        (["legendre", "--a", "2", "--p", "7"], "symbol", 1),
        (["chi", "--v", "3", "--x", "1/9"], "phase", "1/9"),
        (["gauss", "--valuation", "3", "--alpha", "1/3", "--beta", "1"], "phase", "1/4"),
        (["adelic-product", "hilbert", "--x", "3", "--y", "-5"], "product", 1),
        (["adelic-product", "lambda", "--x", "7/12"], "product", "0"),
        (["adelic-product", "chi", "--x", "7/12"], "product", "0"),
    ],
)
def test_scalar_commands(capsys, argv, key, value):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and json.loads(out)[key] == value


def test_gauss_oracle_agrees_with_closed_form(capsys):
    _, closed, _ = run(capsys, "gauss", "--valuation", "3", "--alpha", "1/3;0", "--beta", "1")
    code, _, err = run(capsys, "gauss", "--valuation", "3", "--alpha", "1/3;0", "--beta", "1")
    assert code == 2 and "square" in err
    _, oracle, _ = run(capsys, "gauss", "--valuation", "3", "--alpha", "1/3", "--beta", "1", "--oracle", "--N", "2")
    doc = json.loads(oracle)
    assert abs(doc["re"]) < 1e-9 and abs(doc["im"] - 3 ** -0.5) < 1e-9


def test_action_command(capsys):
    code, out, _ = run(capsys, "action", "--lagrangian", "free", "--t1", "0", "--t2", "4")
    doc = json.loads(out)
    assert code == 0 and doc["Abar"] == [["1/4"]] and doc["Bbar"] == [["-1/4"]]


def test_adelic_kernel_command(capsys):
    code, out, _ = run(capsys, "adelic-kernel", "--lagrangian", "free", "--t1", "0", "--t2", "2",
                       "--x1", "0", "--x2", "1", "--primes", "2,3")
    doc = json.loads(out)
    assert code == 0 and doc["total"] == {"magSq": "1", "phase": "0"} and set(doc["perValuation"]) == {"inf", "2", "3"}


def test_vacuum_command(capsys):
    code, out, _ = run(capsys, "vacuum", "--p", "3", "--lagrangian", "free", "--t1", "0", "--t2", "3")
    assert code == 0 and json.loads(out)["holds"] is True


def test_determinism(capsys):
    argv = ["adelic-kernel", "--lagrangian", "oscillator:1/4", "--t1", "0", "--t2", "1/2", "--x1", "1", "--x2", "2", "--primes", "2,3"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_round_trip_of_printed_values(capsys):
    _, out, _ = run(capsys, "kernel", "--valuation", "5", "--lagrangian", "free", "--t1", "1/3", "--t2", "7/2",
                    "--x1", "2/5", "--x2", "-3")
    doc = json.loads(out)
    for key in ("magSq", "detBbar", "action"):
        assert str(to_rational(doc[key])) == str(Fraction(doc[key]))
    assert str(parse_phase(doc["phase"])) == doc["phase"]


@pytest.mark.parametrize(
    "argv",
    [
        ["lambda", "--v", "3", "--x", "1/0"],
        ["lambda", "--v", "4", "--x", "1"],
        ["kernel", "--valuation", "inf", "--lagrangian", "missing.json", "--t1", "0", "--t2", "1", "--x1", "0", "--x2", "0"],
        ["adelic-kernel", "--lagrangian", "free", "--t1", "0", "--t2", "1", "--x1", "0", "--x2", "0", "--primes", "2,6"],
        ["nonsense"],
        ["lambda", "--v", "3"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_computation_error_exits_one(capsys):
    code, out, _ = run(capsys, "kernel", "--valuation", "3", "--lagrangian", "oscillator:1", "--t1", "0", "--t2", "1/3",
                       "--x1", "0", "--x2", "0")
    doc = json.loads(out)
    assert code == 1 and doc["precondition"] == "series convergence" and doc["valuation"] == "3"
    code, out, _ = run(capsys, "hilbert", "--v", "3", "--a", "0", "--b", "1")
    assert code == 1 and json.loads(out)["precondition"] == "nonzero arguments"


def test_composite_prime_config_exits_two(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"primeSet": [2, 4]}))
    assert run(capsys, "--config", str(cfg), "verify", "--suite", "1")[0] == 2


def test_low_truncation_order_warns_instead_of_failing(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"truncationOrder": 4}))
    code, out, _ = run(capsys, "--config", str(cfg), "verify", "--suite", "4,5,7,8")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert all(r["warnings"] for r in doc["suites"])


def test_verify_text_output(capsys):
    code, out, _ = run(capsys, "--format", "text", "verify", "--suite", "1,6")
    assert code == 0 and out.splitlines() == [" 1 product_formulas         PASS", " 6 free_particle_kernel     PASS"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "padelic", "lambda", "--v", "inf", "--x", "1"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout) == {"phase": "7/8"}
