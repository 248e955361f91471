#!/usr/bin/env python3
"""Cross-checks the LP/MPS writers and the built-in LP solver against scipy.

Runs the crosscheck_dump tool (path in argv[1]) to emit a corpus of models in
both text formats plus the built-in solver's LP-relaxation objectives, then:
  1. parses each .lp and .mps independently and verifies both describe the
     same objective, constraint matrix, senses, right-hand sides and bounds;
  2. re-solves every LP relaxation with scipy.optimize.linprog (HiGHS) and
     compares objectives at 1e-6 relative tolerance, including agreement on
     infeasibility.
"""

import json
import math
import re
import subprocess
import sys
import tempfile
from pathlib import Path

from scipy.optimize import linprog


class Model:
    def __init__(self):
        self.obj = {}          # name -> coefficient
        self.rows = []         # (name, {name: coef}, sense, rhs)
        self.bounds = {}       # name -> (lb, ub)
        self.binaries = set()


TERM = re.compile(r"([+-])\s+(\S+)\s+(\S+)")


def parse_lp(text):
    m = Model()
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        low = line.lower()
        if low in ("minimize", "subject to", "bounds", "binaries", "end"):
            section = low
            continue
        if section == "minimize":
            body = line.split(":", 1)[1]
            for sign, coef, name in TERM.findall(body):
                m.obj[name] = m.obj.get(name, 0.0) + float(coef) * (1 if sign == "+" else -1)
        elif section == "subject to":
            rname, body = line.split(":", 1)
            for sense in ("<=", ">=", "="):
                if f" {sense} " in body:
                    lhs, rhs = body.rsplit(f" {sense} ", 1)
                    break
            coeffs = {}
            for sign, coef, name in TERM.findall(lhs):
                coeffs[name] = coeffs.get(name, 0.0) + float(coef) * (1 if sign == "+" else -1)
            if not coeffs:  # "0 <name>" placeholder for an empty row
                parts = lhs.split()
                if len(parts) == 2 and float(parts[0]) == 0.0:
                    coeffs = {}
            m.rows.append((rname.strip(), coeffs, sense, float(rhs)))
        elif section == "bounds":
            lb, _, name, _, ub = line.split()
            m.bounds[name] = (float(lb), float(ub))
        elif section == "binaries":
            m.binaries.add(line)
    return m


def parse_mps(text):
    m = Model()
    section = None
    senses = {}
    in_int = False
    lo, up = {}, {}
    for raw in text.splitlines():
        if not raw.strip():
            continue
        if not raw.startswith(" "):
            section = raw.split()[0]
            continue
        parts = raw.split()
        if section == "ROWS":
            if parts[0] == "N":
                continue
            senses[parts[1]] = {"L": "<=", "G": ">=", "E": "="}[parts[0]]
            m.rows.append((parts[1], {}, senses[parts[1]], 0.0))
        elif section == "COLUMNS":
            if "'MARKER'" in raw:
                in_int = "'INTORG'" in raw
                continue
            name, row, val = parts
            if name not in m.bounds:
                m.bounds[name] = None  # declaration order marker
            if in_int:
                m.binaries.add(name)
            if row == "OBJ":
                if float(val) != 0.0:
                    m.obj[name] = m.obj.get(name, 0.0) + float(val)
            else:
                for i, (rname, coeffs, sense, rhs) in enumerate(m.rows):
                    if rname == row:
                        coeffs[name] = coeffs.get(name, 0.0) + float(val)
        elif section == "RHS":
            _, row, val = parts
            for i, (rname, coeffs, sense, _) in enumerate(m.rows):
                if rname == row:
                    m.rows[i] = (rname, coeffs, sense, float(val))
        elif section == "BOUNDS":
            kind, _, name, val = parts
            (lo if kind == "LO" else up)[name] = float(val)
    for name in set(lo) | set(up):
        m.bounds[name] = (lo.get(name, 0.0), up.get(name, math.inf))
    return m


def models_equal(a, b):
    problems = []
    if a.obj != {k: v for k, v in b.obj.items()}:
        problems.append(f"objective differs: {a.obj} vs {b.obj}")
    if a.binaries != b.binaries:
        problems.append("binary sets differ")
    if a.bounds != b.bounds:
        problems.append(f"bounds differ")
    ra = {name: (c, s, r) for name, c, s, r in a.rows}
    rb = {name: (c, s, r) for name, c, s, r in b.rows}
    if ra != rb:
        problems.append("rows differ")
    return problems


def solve_with_scipy(m):
    names = sorted(m.bounds)
    idx = {n: j for j, n in enumerate(names)}
    c = [m.obj.get(n, 0.0) for n in names]
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for _, coeffs, sense, rhs in m.rows:
        row = [0.0] * len(names)
        for n, v in coeffs.items():
            row[idx[n]] = v
        if sense == "<=":
            a_ub.append(row)
            b_ub.append(rhs)
        elif sense == ">=":
            a_ub.append([-v for v in row])
            b_ub.append(-rhs)
        else:
            a_eq.append(row)
            b_eq.append(rhs)
    res = linprog(c, A_ub=a_ub or None, b_ub=b_ub or None, A_eq=a_eq or None,
                  b_eq=b_eq or None, bounds=[m.bounds[n] for n in names], method="highs")
    if res.status == 2:
        return None
    if not res.success:
        raise RuntimeError(f"scipy failed: {res.message}")
    return res.fun


def main():
    dump_tool = sys.argv[1]
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run([dump_tool, tmp], check=True, stdout=subprocess.DEVNULL)
        manifest = json.loads((Path(tmp) / "manifest.json").read_text())
        for entry in manifest:
            name = entry["name"]
            lp = parse_lp((Path(tmp) / f"{name}.lp").read_text())
            mps = parse_mps((Path(tmp) / f"{name}.mps").read_text())
            for p in models_equal(lp, mps):
                print(f"{name}: LP/MPS disagree: {p}")
                failures += 1
            obj = solve_with_scipy(lp)
            if entry["feasible"]:
                if obj is None:
                    print(f"{name}: built-in solver optimal, scipy infeasible")
                    failures += 1
                elif abs(obj - entry["objective"]) > 1e-6 * max(1.0, abs(obj)):
                    print(f"{name}: objective {entry['objective']} vs scipy {obj}")
                    failures += 1
            elif obj is not None:
                print(f"{name}: built-in solver infeasible, scipy found {obj}")
                failures += 1
        print(f"checked {len(manifest)} cases, {failures} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
