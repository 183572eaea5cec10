#!/usr/bin/env python3
"""Cross-checks an exported LP model against an independent MILP solver.

Parses the CPLEX-LP dialect emitted by `nba export-milp --format lp`, hands
the model to scipy's HiGHS backend, and prints the optimal objective value.
Exit codes: 0 solved (value on stdout), 1 infeasible, 2 parse/usage error.
"""

import re
import sys

import numpy as np
from scipy.optimize import LinearConstraint, Bounds, milp


def tokenize(text):
    # Keep <=, >=, = as single tokens; split +/- and names.
    text = text.replace("<=", " <= ").replace(">=", " >= ")
    text = re.sub(r"(?<![<>=])=(?![<>=])", " = ", text)
    text = text.replace("+", " + ").replace(":", " : ")
    text = re.sub(r"(?<=[\s])-", " - ", "\n" + text)
    return text.split()


SECTIONS = {"minimize", "maximize", "subject", "bounds", "binaries", "binary",
            "generals", "general", "end"}


def parse_terms(tokens, i, coefs):
    sign = 1.0
    coef = None
    while i < len(tokens):
        tok = tokens[i]
        low = tok.lower()
        if low in SECTIONS or tok in ("<=", ">=", "="):
            break
        if tok == "+":
            sign = 1.0
        elif tok == "-":
            sign = -1.0
        elif re.fullmatch(r"[0-9.]+", tok):
            coef = float(tok)
        elif tokens[i + 1: i + 2] == [":"]:
            break  # next row's name
        else:
            coefs[tok] = coefs.get(tok, 0.0) + sign * (1.0 if coef is None else coef)
            sign, coef = 1.0, None
        i += 1
    return i


def parse_lp(text):
    tokens = tokenize(text)
    objective = {}
    rows = []          # (coefs, sense, rhs)
    binaries = set()
    upper = {}
    i = 0
    while i < len(tokens):
        low = tokens[i].lower()
        if low in ("minimize", "maximize"):
            i += 1
            if tokens[i + 1: i + 2] == [":"]:
                i += 2
            i = parse_terms(tokens, i, objective)
        elif low == "subject":
            i += 2  # "Subject To"
            while i < len(tokens) and tokens[i].lower() not in SECTIONS:
                i += 2  # row name, ':'
                coefs = {}
                i = parse_terms(tokens, i, coefs)
                sense = tokens[i]
                i += 1
                sign = 1.0
                if tokens[i] == "-":
                    sign = -1.0
                    i += 1
                rows.append((coefs, sense, sign * float(tokens[i])))
                i += 1
        elif low == "bounds":
            i += 1
            while i < len(tokens) and tokens[i].lower() not in SECTIONS:
                # "0 <= name" or "0 <= name <= ub"
                lo = float(tokens[i])
                name = tokens[i + 2]
                i += 3
                if tokens[i: i + 1] == ["<="]:
                    upper[name] = float(tokens[i + 1])
                    i += 2
                assert lo == 0.0
        elif low in ("binaries", "binary"):
            i += 1
            while i < len(tokens) and tokens[i].lower() not in SECTIONS:
                binaries.add(tokens[i])
                i += 1
        else:
            i += 1
    return objective, rows, binaries, upper


def parse_mps(text):
    objective = {}
    row_sense = {}
    row_order = []
    coefs = {}
    rhs = {}
    binaries = set()
    upper = {}
    section = None
    integer_mode = False
    for line in text.splitlines():
        toks = line.split()
        if not toks:
            continue
        if toks[0] in ("ROWS", "COLUMNS", "RHS", "BOUNDS", "RANGES", "ENDATA") and len(toks) == 1:
            section = toks[0]
            continue
        if toks[0] == "NAME":
            continue
        if section == "ROWS":
            if toks[0] == "N":
                continue
            row_sense[toks[1]] = {"L": "<=", "G": ">=", "E": "="}[toks[0]]
            row_order.append(toks[1])
        elif section == "COLUMNS":
            if len(toks) >= 3 and toks[1] == "'MARKER'":
                integer_mode = toks[2] == "'INTORG'"
                continue
            var = toks[0]
            if integer_mode:
                binaries.add(var)
            for f in range(1, len(toks) - 1, 2):
                value = float(toks[f + 1])
                if toks[f] == "obj":
                    objective[var] = objective.get(var, 0.0) + value
                else:
                    coefs.setdefault(toks[f], {})[var] = value
        elif section == "RHS":
            for f in range(1, len(toks) - 1, 2):
                rhs[toks[f]] = float(toks[f + 1])
        elif section == "BOUNDS":
            if toks[0] == "UP":
                upper[toks[2]] = float(toks[3])
    rows = [(coefs.get(name, {}), row_sense[name], rhs.get(name, 0.0)) for name in row_order]
    return objective, rows, binaries, upper


def main():
    if len(sys.argv) != 2:
        print("usage: cross_check_milp.py model.{lp|mps}", file=sys.stderr)
        return 2
    with open(sys.argv[1]) as fh:
        body = fh.read()
    if sys.argv[1].endswith(".mps"):
        objective, rows, binaries, upper = parse_mps(body)
    else:
        objective, rows, binaries, upper = parse_lp(body)

    names = sorted({n for coefs, _, _ in rows for n in coefs} | set(objective) | binaries)
    index = {n: k for k, n in enumerate(names)}
    n = len(names)

    c = np.zeros(n)
    for name, coef in objective.items():
        c[index[name]] = coef

    a = np.zeros((len(rows), n))
    lo = np.full(len(rows), -np.inf)
    hi = np.full(len(rows), np.inf)
    for r, (coefs, sense, rhs) in enumerate(rows):
        for name, coef in coefs.items():
            a[r, index[name]] = coef
        if sense == "<=":
            hi[r] = rhs
        elif sense == ">=":
            lo[r] = rhs
        else:
            lo[r] = hi[r] = rhs

    ub = np.array([1.0 if nm in binaries else upper.get(nm, np.inf) for nm in names])
    integrality = np.array([1 if nm in binaries else 0 for nm in names])

    result = milp(c=c, constraints=LinearConstraint(a, lo, hi),
                  bounds=Bounds(np.zeros(n), ub), integrality=integrality)
    if result.status == 2:
        print("infeasible")
        return 1
    if not result.success:
        print(f"solver status {result.status}: {result.message}", file=sys.stderr)
        return 2
    print(f"{result.fun:.9f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
