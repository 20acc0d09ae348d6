import csv
import io
import json
import random
import subprocess
import sys

import pytest

import corpus
from regprim import serialize
from regprim.cli import main
from regprim.distribution import Distribution, dirac_derivative
from regprim.piecewise import PiecewiseFn, clamped_ramp, heaviside
from regprim.spaces import BVFunction, Multiplier, validate_Br

DELTA = dirac_derivative(0)


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / f"{name}.json"
        serialize.dump(obj, path)
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_integrate_delta_against_ramp(capsys, files):
    d = files("delta", DELTA)
    g = files("g", BVFunction(clamped_ramp(-1, 1)))
    code, out, _ = run(capsys, "integrate", "--dist", d, "--mult", g, "--lambda", "0")
    assert code == 0
    assert out.splitlines() == ["1/2", "0.5"]


def test_integrate_over_point(capsys, files):
    d = files("delta", DELTA)
    code, out, _ = run(capsys, "integrate", "--dist", d, "--interval", "{0}")
    assert code == 0 and out.splitlines()[0] == "1"


def test_integrate_with_stored_multiplier(capsys, files):
    d = files("d1", dirac_derivative(1))
    m = files("m", Multiplier.from_g(heaviside(0), 1, 0))
    code, out, _ = run(capsys, "integrate", "--dist", d, "--mult", m)
    assert code == 0 and out.splitlines()[0] == "0"


def test_order_mismatch_is_a_domain_error(capsys, files):
    d = files("d1", dirac_derivative(1))
    m = files("m", Multiplier(0, BVFunction(heaviside(0))))
    code, _, err = run(capsys, "integrate", "--dist", d, "--mult", m)
    assert code == 1 and err.startswith("OrderMismatch")


def test_usage_errors_exit_2(capsys, files, tmp_path):
    d = files("delta", DELTA)
    assert run(capsys, "integrate", "--dist", d)[0] == 2
    assert run(capsys, "integrate", "--dist", d, "--interval", "[1,0]")[0] == 2
    assert run(capsys, "integrate", "--dist", str(tmp_path / "missing.json"), "--interval", "{0}")[0] == 2
    assert run(capsys, "eval", "--fn", d, "--at", "zero")[0] == 2
    bare = files("bare", heaviside(0))
    assert run(capsys, "lattice", "join", "--a", bare, "--b", bare)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_invalid_document_is_a_domain_error(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"space": "Br", "order": 1, **PiecewiseFn.constant(1).to_dict()}))
    code, _, err = run(capsys, "norm", str(path))
    assert code == 1 and err.startswith("NotVanishingAtNegInf")


def test_eval_and_norm(capsys, files):
    h = files("h", heaviside(0))
    assert run(capsys, "eval", "--fn", h, "--at", "0")[1] == "0\n"
    assert run(capsys, "eval", "--fn", h, "--at", "inf")[1] == "1\n"
    d1 = files("d1", dirac_derivative(1))
    assert run(capsys, "norm", d1)[1] == "[1, 1]\n"
    g = files("g", BVFunction(clamped_ramp()))
    assert run(capsys, "norm", g)[1] == "[2, 2]\n"


def test_product_and_lattice(capsys, files):
    d = files("delta", DELTA)
    code, out, _ = run(capsys, "product", "--a", d, "--b", d)
    assert code == 0 and serialize.loads(out) == DELTA
    z = files("zero", Distribution.from_primitive(PiecewiseFn.constant(0), 1))
    code, out, _ = run(capsys, "lattice", "join", "--a", d, "--b", z)
    doc = json.loads(out)
    assert doc.pop("exact") is True and serialize.from_document(doc) == DELTA
    assert run(capsys, "lattice", "leq", "--a", z, "--b", d)[1] == "True\n"
    assert run(capsys, "lattice", "leq", "--a", d, "--b", z)[1] == "False\n"
    code, out, _ = run(capsys, "lattice", "jordan", "--a", d)
    plus, minus = (json.loads(line) for line in out.splitlines())
    assert plus["part"] == "plus" and minus["part"] == "minus"


def test_round_trip_of_outputs(capsys, files):
    rng = random.Random(263)
    for _ in range(20):
        n = rng.randint(1, 3)
        a = Distribution(n, validate_Br(corpus.linear_primitive(rng)))
        b = Distribution(n, validate_Br(corpus.linear_primitive(rng)))
        fa, fb = files("a", a), files("b", b)
        for argv in (["lattice", "meet"], ["lattice", "abs"], ["product"]):
            argv = argv + ["--a", fa] + (["--b", fb] if argv[-1] != "abs" else [])
            code, out, _ = run(capsys, *argv)
            assert code == 0
            doc = json.loads(out)
            doc.pop("exact", None)
            obj = serialize.from_document(doc)
            assert serialize.loads(serialize.dumps(obj)) == obj
            assert json.dumps(serialize.to_document(obj), sort_keys=True) == json.dumps(doc, sort_keys=True)


def test_output_is_deterministic(capsys, files):
    rng = random.Random(269)
    f = files("f", Distribution.from_primitive(corpus.primitive(rng), 2))
    outs = {run(capsys, "norm", f)[1] for _ in range(3)}
    assert len(outs) == 1
    outs = {run(capsys, "reproduce-paper")[1] for _ in range(2)}
    assert len(outs) == 1


def test_reproduce_table(capsys):
    code, out, _ = run(capsys, "reproduce-paper")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["case", "paper_value", "computed_value", "status"]
    assert code == 0 and all(r[3] == "PASS" for r in rows[1:])
    by_case = {r[0]: r for r in rows[1:]}
    assert by_case["dirac_norm_m3"][1:] == ["1", "1", "PASS"]
    assert by_case["lambda_dependence_n2_lam1/4"][1:3] == ["-1/4", "-1/4"]
    assert "delta_pairing" in by_case
    assert run(capsys, "reproduce")[1] == out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "regprim", "reproduce-paper"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and proc.stdout.startswith("case,paper_value")
