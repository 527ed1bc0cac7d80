"""End-to-end checks of the vcomp command line. Usage: cli_check.py <vcomp> <fixtures dir>"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

VCOMP, FIXTURES = sys.argv[1], Path(sys.argv[2])
failures = []


def run(*args):
    return subprocess.run([VCOMP, *map(str, args)], capture_output=True, text=True)


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)

    t4 = tmp / "t4.auc"
    r = run("fixture", "theorem4", "--epsilon", "0.01", "-o", t4)
    check(r.returncode == 0 and t4.read_bytes() == (FIXTURES / "theorem4.auc").read_bytes(),
          "fixture theorem4 matches the shipped file")
    r = run("poa", t4)
    poa = json.loads(r.stdout)["poa"]
    check(r.returncode == 0 and poa["ratio"]["exact"] == "400/167", "poa ratio 1200/501")
    check(abs(poa["ratio"]["approx"] - 2.3952) < 1e-4, "poa ratio approx 2.3952")

    single = tmp / "single.auc"
    single.write_text("items: a b\nagent 1: ADD(a:3, b:1)\n  menu:\n    ADD(a:1, b:1)\n")
    r = run("solve", single)
    out = json.loads(r.stdout)["outcome"]["agents"][0]
    check(r.returncode == 0 and out["payment"]["exact"] == "0/1" and out["bundle"] == "{a b}",
          "single agent pays 0/1")

    r = run("cce", FIXTURES / "one-item.auc", "--grid", "1")
    cce = json.loads(r.stdout)["cce"]
    # Matches tests/oracles/cce_one_item.py.
    check(r.returncode == 0 and cce["worst_welfare"]["exact"] == "2/1", "cce one item value 2")

    a = run("learn", FIXTURES / "one-item.auc", "--grid", "1/2", "--seed", "5", "--rounds", "2000")
    b = run("learn", FIXTURES / "one-item.auc", "--grid", "1/2", "--seed", "5", "--rounds", "2000")
    check(a.returncode == 0 and a.stdout == b.stdout, "identical config gives byte-identical report")
    rep = json.loads(a.stdout)
    check(len(rep["instance"]["sha256"]) == 64 and rep["config"]["seed"] == 5, "report embeds hash and config")

    r = run("smooth", FIXTURES / "ratio2.auc", "--builder", "xos", "--lambda", "1", "--mu1", "1", "--mu2", "1")
    check(r.returncode == 0 and json.loads(r.stdout)["pass"], "xos (1,1,1) certificate on the ratio-2 fixture")
    r = run("smooth", FIXTURES / "one-item.auc", "--grid", "1", "--profile", "0,0", "--lambda", "2")
    check(r.returncode == 2 and not json.loads(r.stdout)["pass"], "failing certificate exits 2")

    r = run("pne", FIXTURES / "gadget.auc")
    check(r.returncode == 0 and json.loads(r.stdout)["count"] == 0, "gadget grid has no PNE")

    r = run("poa", FIXTURES / "ratio2.auc", FIXTURES / "one-item.auc", "--grid", "1/2", "--jobs", "2")
    runs = json.loads(r.stdout)["runs"]
    check([x["instance"]["path"].endswith(n) for x, n in zip(runs, ["ratio2.auc", "one-item.auc"])] == [True, True],
          "multi-instance output keeps argument order")

    bad = tmp / "bad.auc"
    bad.write_text("items: a\nagent 1: ADD(b:1)\n")
    r = run("eval", bad)
    err = json.loads(r.stderr)["error"]
    check(r.returncode == 1 and err["kind"] == "parse" and err["line"] == 2, "parse error exits 1 with position")
    r = run("poa", FIXTURES / "one-item.auc")
    check(r.returncode == 1 and json.loads(r.stderr)["error"]["kind"] == "usage", "missing menus exit 1")
    r = run("frobnicate")
    check(r.returncode == 1, "unknown subcommand exits 1")

sys.exit(1 if failures else 0)
