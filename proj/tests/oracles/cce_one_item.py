"""Worst-welfare CCE of the one-item game v=(2,1), menus {0,1,2} x {0,1}.

Exact vertex enumeration of the LP polytope with Fractions. Agent 0 wins ties.
"""
from fractions import Fraction as F
from itertools import combinations, product

VALUES = (2, 1)
MENUS = ([0, 1, 2], [0, 1])


def outcome(a, c):
    if a >= c:
        return (F(VALUES[0] - c), F(0)), F(VALUES[0])
    return (F(0), F(VALUES[1] - a)), F(VALUES[1])


profiles = list(product(*MENUS))
util = {p: outcome(*p)[0] for p in profiles}
sw = {p: outcome(*p)[1] for p in profiles}
n = len(profiles)

# rows as (coeffs, rhs, kind) with kind 'eq' or 'le'
rows = [([F(1)] * n, F(1), "eq")]
for i in range(2):
    for dev in MENUS[i]:
        coeffs = []
        for p in profiles:
            q = list(p)
            q[i] = dev
            coeffs.append(util[tuple(q)][i] - util[p][i])
        rows.append((coeffs, F(0), "le"))
for k in range(n):
    e = [F(0)] * n
    e[k] = F(-1)
    rows.append((e, F(0), "le"))


def solve(A, b):
    m = len(A)
    M = [A[r][:] + [b[r]] for r in range(m)]
    for col in range(n):
        piv = next((r for r in range(col, m) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        for r in range(m):
            if r != col and M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] / M[r][r] for r in range(n)]


best = None
ineq = [r for r in rows[1:]]
for chosen in combinations(range(len(ineq)), n - 1):
    A = [rows[0][0]] + [ineq[k][0] for k in chosen]
    b = [rows[0][1]] + [ineq[k][1] for k in chosen]
    x = solve(A, b)
    if x is None:
        continue
    if all(sum(c * v for c, v in zip(r[0], x)) <= r[1] for r in ineq):
        val = sum(sw[p] * v for p, v in zip(profiles, x))
        if best is None or val < best:
            best = val
print("profiles", profiles)
print("cce_worst_welfare", best)
