#!/usr/bin/env python3
"""CLI surface test: exit-code taxonomy, output schemas, determinism.

Usage: cli_test.py <path-to-secvne-binary>
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = sys.argv[1]
failures = []


def check(name, cond, detail=""):
    if not cond:
        failures.append(f"{name}: {detail}")
        print(f"FAIL {name} {detail}")
    else:
        print(f"ok   {name}")


def run(*args, **kw):
    return subprocess.run([BIN, *args], capture_output=True, text=True, **kw)


SUBSTRATE = {
    "clouds": [{"id": "c1", "trust": "1"}, {"id": "c2", "trust": "2"},
               {"id": "c3", "trust": "3"}],
    "nodes": [
        {"id": "A", "cpu": "80", "sec": "1", "cloud": "c1"},
        {"id": "B", "cpu": "80", "sec": "3", "cloud": "c1"},
        {"id": "C", "cpu": "80", "sec": "4", "cloud": "c2"},
        {"id": "D", "cpu": "80", "sec": "1", "cloud": "c2"},
        {"id": "E", "cpu": "80", "sec": "5", "cloud": "c3"},
        {"id": "F", "cpu": "80", "sec": "1", "cloud": "c3"},
    ],
    "links": [
        {"a": "A", "b": "B", "bw": "100", "sec": "2"},
        {"a": "B", "b": "D", "bw": "100", "sec": "2"},
        {"a": "C", "b": "D", "bw": "100", "sec": "2"},
        {"a": "A", "b": "E", "bw": "100", "sec": "2"},
        {"a": "C", "b": "E", "bw": "100", "sec": "1"},
        {"a": "D", "b": "F", "bw": "100", "sec": "1"},
        {"a": "E", "b": "F", "bw": "100", "sec": "1"},
    ],
}

VNR = {
    "nodes": [
        {"id": "a", "cpu": "10", "sec": "3", "cloud": "1", "avail": 0},
        {"id": "b", "cpu": "20", "sec": "4", "cloud": "2", "avail": 2},
    ],
    "links": [{"a": "a", "b": "b", "bw": "20", "sec": "2"}],
}

POLICY_TWO_VARIANTS = (
    "cpu^V(a)=10 & sec^V(a)>=3 & cloud^V(a)>=1 & cpu^V(b)=20 & "
    "bw^V(a,b)=20 & sec^V(a,b)>=2 & "
    "((sec^V(b)>=1 & cloud^V(b)>=3) | (sec^V(b)>=4 & cloud^V(b)>=1))"
)


def main():
    tmp = Path(tempfile.mkdtemp())
    sub = tmp / "substrate.json"
    sub.write_text(json.dumps(SUBSTRATE))
    vnr = tmp / "vnr.json"
    vnr.write_text(json.dumps(VNR))

    # policy-check: expansion, syntax error, unsatisfiable
    pol = tmp / "policy.txt"
    pol.write_text(POLICY_TWO_VARIANTS)
    r = run("policy-check", "--policy", str(pol), "--domain", str(sub))
    check("policy-check exit", r.returncode == 0, f"exit={r.returncode} err={r.stderr}")
    out = json.loads(r.stdout)
    check("policy-check schema", out.get("schema") == "secvne-variants-1")
    check("policy-check variants", len(out.get("variants", [])) == 2,
          f"{len(out.get('variants', []))} variants")

    bad = tmp / "bad.txt"
    bad.write_text("sec^V(a) >=")
    r = run("policy-check", "--policy", str(bad))
    check("syntax error exit 2", r.returncode == 2, f"exit={r.returncode}")

    unsat = tmp / "unsat.txt"
    unsat.write_text("cpu^V(a)=10 & sec^V(a)>=3 & !(sec^V(a)>=1)")
    r = run("policy-check", "--policy", str(unsat), "--domain", str(sub))
    check("unsatisfiable exit 3", r.returncode == 3, f"exit={r.returncode}")

    r = run("policy-check", "--policy", str(tmp / "missing.txt"))
    check("missing file exit 1", r.returncode == 1, f"exit={r.returncode}")

    # embed: accept, reject, argument validation
    r = run("embed", "--substrate", str(sub), "--vnr", str(vnr))
    check("embed exit", r.returncode == 0, f"exit={r.returncode} err={r.stderr}")
    rec = json.loads(r.stdout)
    check("embed schema", rec.get("schema") == "secvne-embedding-1")
    check("embed objective", abs(rec["objective"] - 654.0) < 1e-9, str(rec.get("objective")))
    check("embed replica clouds", rec["backup_nodes"].get("b") not in
          ("", rec["working_nodes"].get("b")))

    r2 = run("embed", "--substrate", str(sub), "--vnr", str(vnr))
    check("embed deterministic", r2.stdout == r.stdout)

    hard = dict(VNR)
    hard = json.loads(json.dumps(VNR))
    hard["nodes"][0]["sec"] = "9"
    hardf = tmp / "hard.json"
    hardf.write_text(json.dumps(hard))
    r = run("embed", "--substrate", str(sub), "--vnr", str(hardf))
    check("embed rejected exit 4", r.returncode == 4, f"exit={r.returncode}")
    rej = json.loads(r.stdout)
    check("rejection schema", rej.get("schema") == "secvne-rejection-1")
    check("rejection reason", rej.get("reason") == "no-eligible-node", str(rej.get("reason")))

    r = run("embed", "--substrate", str(sub), "--vnr", str(vnr), "--policy", str(pol))
    check("embed vnr+policy exit 1", r.returncode == 1, f"exit={r.returncode}")

    r = run("embed", "--substrate", str(sub), "--policy", str(pol))
    check("embed via policy", r.returncode == 0 and
          json.loads(r.stdout)["schema"] == "secvne-embedding-1",
          f"exit={r.returncode} err={r.stderr}")

    # gen-topology: determinism and seed sensitivity
    a = run("gen-topology", "--seed", "7")
    b = run("gen-topology", "--seed", "7")
    c = run("gen-topology", "--seed", "8")
    check("gen-topology deterministic", a.returncode == 0 and a.stdout == b.stdout)
    check("gen-topology seed-sensitive", a.stdout != c.stdout)

    # export-milp
    r = run("export-milp", "--substrate", str(sub), "--vnr", str(vnr), "--format", "lp")
    check("export lp", r.returncode == 0 and "Minimize" in r.stdout and "End" in r.stdout)
    r = run("export-milp", "--substrate", str(sub), "--vnr", str(vnr), "--format", "mps")
    check("export mps", r.returncode == 0 and "ENDATA" in r.stdout)
    r = run("export-milp", "--substrate", str(sub), "--vnr", str(vnr), "--format", "xyz")
    check("export bad format exit 1", r.returncode == 1, f"exit={r.returncode}")

    # simulate: artifacts and bytewise rerun stability
    cfg = {
        "substrate": {"node_count": 10, "topology": "random"},
        "workload": {"horizon": 1500, "arrival_rate": 0.02, "config": "20S+20A"},
        "seeds": [1, 2],
        "bucket_width": 500,
    }
    cfgf = tmp / "sim.json"
    cfgf.write_text(json.dumps(cfg))
    out1 = tmp / "run1"
    out2 = tmp / "run2"
    r = run("simulate", "--config", str(cfgf), "--out", str(out1))
    check("simulate exit", r.returncode == 0, f"exit={r.returncode} err={r.stderr}")
    summ = json.loads(r.stdout)
    check("simulate schema", summ.get("schema") == "secvne-simulation-1")
    check("simulate runs", len(summ.get("runs", [])) == 2)
    check("simulate sound", all(x["soundness_violations"] == 0 and x["residuals_restored"]
                                for x in summ["runs"]))
    csvs = sorted(p.name for p in out1.glob("*.csv"))
    check("simulate csv files", len(csvs) == 2, str(csvs))
    check("simulate summary file", (out1 / "summary.json").exists())

    r2 = run("simulate", "--config", str(cfgf), "--out", str(out2))
    same = all((out1 / n).read_bytes() == (out2 / n).read_bytes() for n in csvs)
    check("simulate rerun byte-identical", r2.returncode == 0 and same)

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
