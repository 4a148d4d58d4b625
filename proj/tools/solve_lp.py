#!/usr/bin/env python3
"""Solve an LP/MILP text file and write a `name value` solution file.

Reads the LP subset emitted by `dagsched milp` (Minimize / Subject To /
Bounds / Binaries / End, all rows `<=`). Relaxed files carry [0,1] bounds;
integer files carry a Binaries section. Used to record the solution fixtures
under fixtures/lp/; tests consume the recorded files and never call this.

Usage: solve_lp.py model.lp -o model.sol
"""

import argparse
import re
import sys

import numpy as np
from scipy.optimize import milp, LinearConstraint, Bounds


def parse_lp(text):
    lines = [ln.split("\\")[0].rstrip() for ln in text.splitlines()]
    section = None
    objective_var = None
    constraints = []  # (name, {var: coef}, rhs)
    bounds = {}  # var -> (lo, hi)
    binaries = []
    var_order = []
    seen = set()

    def touch(name):
        if name not in seen:
            seen.add(name)
            var_order.append(name)

    term_re = re.compile(r"([+-])?\s*(\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)?\s*([A-Za-z_][\w]*)")

    for ln in lines:
        stripped = ln.strip()
        if not stripped:
            continue
        low = stripped.lower()
        if low in ("minimize", "subject to", "bounds", "binaries", "end"):
            section = low
            continue
        if section == "minimize":
            name = stripped.split(":", 1)[1].strip()
            objective_var = name
            touch(name)
        elif section == "subject to":
            cname, body = stripped.split(":", 1)
            lhs, rhs = body.split("<=")
            coefs = {}
            for sign, coef, var in term_re.findall(lhs):
                value = float(coef) if coef else 1.0
                if sign == "-":
                    value = -value
                coefs[var] = coefs.get(var, 0.0) + value
                touch(var)
            constraints.append((cname.strip(), coefs, float(rhs)))
        elif section == "bounds":
            m = re.match(r"([\d.eE+-]+)\s*<=\s*(\w+)\s*<=\s*([\d.eE+-]+)", stripped)
            if not m:
                raise ValueError(f"unparsed bounds line: {stripped}")
            bounds[m.group(2)] = (float(m.group(1)), float(m.group(3)))
            touch(m.group(2))
        elif section == "binaries":
            binaries.append(stripped)
            touch(stripped)
    return objective_var, constraints, bounds, binaries, var_order


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("lp_file")
    ap.add_argument("-o", "--out", required=True)
    args = ap.parse_args()

    with open(args.lp_file) as f:
        obj_var, constraints, bounds, binaries, var_order = parse_lp(f.read())

    index = {v: i for i, v in enumerate(var_order)}
    n = len(var_order)
    c = np.zeros(n)
    c[index[obj_var]] = 1.0

    a = np.zeros((len(constraints), n))
    b = np.zeros(len(constraints))
    for row, (_, coefs, rhs) in enumerate(constraints):
        for var, coef in coefs.items():
            a[row, index[var]] = coef
        b[row] = rhs

    lo = np.zeros(n)
    hi = np.full(n, np.inf)
    for var, (vlo, vhi) in bounds.items():
        lo[index[var]] = vlo
        hi[index[var]] = vhi
    integrality = np.zeros(n)
    for var in binaries:
        integrality[index[var]] = 1
        lo[index[var]] = 0.0
        hi[index[var]] = 1.0

    res = milp(
        c=c,
        constraints=LinearConstraint(a, -np.inf, b),
        bounds=Bounds(lo, hi),
        integrality=integrality,
    )
    if not res.success:
        print(f"solver failed: {res.message}", file=sys.stderr)
        return 1

    with open(args.out, "w") as f:
        f.write(f"# objective {float(res.fun)!r}\n")
        for var in var_order:
            f.write(f"{var} {float(res.x[index[var]])!r}\n")
    print(f"objective {res.fun} -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
