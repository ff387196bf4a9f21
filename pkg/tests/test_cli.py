import io
import json
import subprocess
import sys

import pytest

from shiftlab.cli import instance_seed, parse_orders, run, select_orders


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_intersect():
    code, text = call("intersect", "--prime", "13", "--order", "6", "--mu", "1")
    assert code == 0
    assert text.splitlines() == ["{4, 10}", "size 2"]


def test_subgroups():
    code, text = call("subgroups", "--prime", "13")
    assert code == 0 and "primitive root g = 2" in text
    assert "order 6: generator 4" in text


def test_identities_pass():
    code, text = call("identities", "--prime", "101", "--max-size", "8", "--trials", "50", "--seed", "7")
    assert code == 0 and "50/50" in text


def test_usage_errors():
    assert call("intersect", "--prime", "15", "--order", "2", "--mu", "1")[0] == 2
    assert call("intersect", "--prime", "13", "--order", "5", "--mu", "1")[0] == 2
    assert call("intersect", "--prime", "13", "--order", "6", "--mu", "0")[0] == 2
    assert call("nonsense")[0] == 2
    assert call("intersect", "--prime", "13")[0] == 2


def test_certify_and_verify(tmp_path):
    path = tmp_path / "c.json"
    args = ("certify", "--prime", "1201", "--order", "80", "--mu", "1", "--lambdas", "1", "--out", str(path))
    code, text = call(*args)
    assert code == 0 and "claimed_bound 80 vs exact |E| 6" in text
    first = path.read_bytes()
    assert call(*args)[0] == 0
    assert path.read_bytes() == first
    code, text = call("verify-cert", str(path))
    assert code == 0 and text.startswith("ACCEPTED")
    doc = json.loads(first)
    doc["coeff_vector"][0][-1] = doc["coeff_vector"][0][-1] % 1200 + 1
    path.write_text(json.dumps(doc))
    code, text = call("verify-cert", str(path))
    assert code == 1 and "vanishing-order failure" in text


def test_verify_missing_file(tmp_path):
    assert call("verify-cert", str(tmp_path / "nope.json"))[0] == 2


def test_certify_hypothesis_violation(tmp_path):
    code, _ = call("certify", "--prime", "601", "--order", "100", "--mu", "1", "--lambdas", "1",
                   "--out", str(tmp_path / "x.json"))
    assert code == 2


def test_fourier():
    code, text = call("fourier", "--prime", "13", "--order", "6")
    assert code == 0 and "2.30277563773" in text
    code, text = call("fourier", "--prime", "13", "--order", "6", "--coset-reps", "1,2")
    assert code == 0


CONFIG = """\
[scan]
prime_range = 3,120
orders = all
k = 1,2
seeds = 2
seed = 5
output = {out}

[budgets]
e3_pairs = 1000000
"""


def test_scan_deterministic(tmp_path):
    cfg = tmp_path / "scan.ini"
    cfg.write_text(CONFIG.format(out=tmp_path / "a"))
    code, text = call("scan", "--config", str(cfg))
    assert code == 0 and "FAIL=0" in text
    code, _ = call("scan", "--config", str(cfg), "--output", str(tmp_path / "b"), "--jobs", "2")
    assert code == 0
    a = (tmp_path / "a" / "report.csv").read_bytes()
    b = (tmp_path / "b" / "report.csv").read_bytes()
    assert a == b and b"\r" not in a
    header = a.split(b"\n")[0].decode()
    assert header == "name,p,t,k,q_size,hypothesis_ok,lhs,rhs,ratio,verdict"
    names = {line.split(",")[0] for line in a.decode().splitlines()[1:]}
    assert {"garcia-voloch", "thm1.1", "thm5.5-chain", "lemma5.4", "stmt5.3-energy",
            "cor5.1-47", "cor5.6-coverage"} <= names
    code, _ = call("scan", "--config", str(cfg), "--output", str(tmp_path / "c"), "--seed", "6")
    assert (tmp_path / "c" / "report.csv").read_bytes() != a


def test_scan_config_errors(tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[scan]\nprime_range = 2,10\n")
    assert call("scan", "--config", str(cfg))[0] == 2
    cfg.write_text("[scan]\ntheorems = nope\n")
    assert call("scan", "--config", str(cfg))[0] == 2
    cfg.write_text("[scan]\n[budgets]\ne3_pairs = -1\n")
    assert call("scan", "--config", str(cfg))[0] == 2
    assert call("scan", "--config", str(tmp_path / "missing.ini"))[0] == 2


def test_orders_filter():
    divs = [1, 2, 3, 4, 6, 12]
    assert select_orders(divs, parse_orders("all")) == divs
    assert select_orders(divs, parse_orders("max_below(6)")) == [4]
    assert select_orders(divs, parse_orders("2,6,5")) == [2, 6]


def test_instance_seed_stable():
    assert instance_seed(1, "a", 2) == instance_seed(1, "a", 2)
    assert instance_seed(1, "a", 2) != instance_seed(2, "a", 2)
    assert 0 <= instance_seed(0) < 2**64


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "shiftlab.cli", "intersect", "--prime", "13", "--order", "6", "--mu", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("{4, 10}")
