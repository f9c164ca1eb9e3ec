#!/usr/bin/env python3
"""Solve an SDPA sparse (.dat-s) file with an independent solver.

Reads the SDPA primal

    min  sum_i c_i x_i   s.t.  sum_i F_i x_i - F_0  psd,

solves it with cvxpy (Clarabel by default) and prints the optimal value.
A leading `* objective offset V` comment, as written by
`chromabound export-sdpa --target qc-level`, is added to the result.

    chromabound export-sdpa --gen cycle:5 --target xi-sdp -o c5.dat-s
    python3 scripts/sdpa_crosscheck.py c5.dat-s --expect 2.5
"""

import argparse
import re
import sys

import cvxpy as cp
import numpy as np


def parse(text):
    offset = 0.0
    body = []
    for line in text.splitlines():
        s = line.strip()
        if not body and (s.startswith('"') or s.startswith("*")):
            m = re.match(r"\*\s*objective offset\s+(\S+)", s)
            if m:
                offset = float(m.group(1))
            continue
        body.append(s)
    tokens = re.sub(r"[{}(),]", " ", "\n".join(body)).split()
    pos = 0

    def take(k=1):
        nonlocal pos
        out = tokens[pos:pos + k]
        if len(out) < k:
            raise ValueError("unexpected end of file")
        pos += k
        return out

    m = int(take()[0])
    nblocks = int(take()[0])
    sizes = [int(t) for t in take(nblocks)]
    c = np.array([float(t) for t in take(m)])
    mats = [[np.zeros((abs(s), abs(s))) for s in sizes] for _ in range(m + 1)]
    while pos < len(tokens):
        k, b, i, j = (int(t) for t in take(4))
        v = float(take()[0])
        blk = mats[k][b - 1]
        blk[i - 1, j - 1] = v
        blk[j - 1, i - 1] = v
    return c, sizes, mats, offset


def solve(c, sizes, mats, solver):
    x = cp.Variable(len(c))
    constraints = []
    for b, size in enumerate(sizes):
        expr = sum(x[k] * mats[k + 1][b] for k in range(len(c)) if mats[k + 1][b].any()) - mats[0][b]
        if size > 0:
            # symmetrize explicitly so cvxpy accepts the PSD constraint
            constraints.append(0.5 * (expr + expr.T) >> 0)
        else:
            constraints.append(cp.diag(expr) >= 0)
    prob = cp.Problem(cp.Minimize(c @ x), constraints)
    prob.solve(solver=solver)
    return prob.status, prob.value


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("file")
    ap.add_argument("--solver", default="CLARABEL", help="any cvxpy SDP solver (CLARABEL, SCS, CVXOPT)")
    ap.add_argument("--expect", type=float, help="exit 1 unless the value matches")
    ap.add_argument("--tol", type=float, default=1e-5)
    args = ap.parse_args()

    with open(args.file) as f:
        c, sizes, mats, offset = parse(f.read())
    status, value = solve(c, sizes, mats, args.solver)
    if value is None:
        print(f"status {status}: no value", file=sys.stderr)
        return 2
    total = value + offset
    print(f"status    {status}")
    print(f"solver    {args.solver}")
    print(f"value     {total:.9f}")
    if args.expect is not None:
        diff = abs(total - args.expect)
        ok = diff <= args.tol
        print(f"expected  {args.expect} (|diff| = {diff:.2e}, tol {args.tol:g}): {'match' if ok else 'MISMATCH'}")
        return 0 if ok else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
