"""Independent recomputation of the small hand-checked values frozen into the C++ tests.

Plain Python with Fractions; run directly, prints one line per value.
"""
from fractions import Fraction as F
from itertools import combinations, product


def subsets(items):
    for k in range(len(items) + 1):
        yield from combinations(items, k)


# Supporting LP of the 6/6/12 triple: max a1+a2+a3 s.t. a(S) <= v(S), a >= 0.
# Vertices of a 3-variable polytope: solve every 3x3 subsystem of tight rows.
def triple_beta():
    v = {(): 0, **{s: (6 if len(s) < 3 else 12) for s in subsets((0, 1, 2)) if s}}
    rows = [([1 if j in s else 0 for j in range(3)], F(v[s])) for s in v if s]
    rows += [([-1 if j == k else 0 for j in range(3)], F(0)) for k in range(3)]
    best = None
    for pick in combinations(rows, 3):
        a = [list(map(F, r[0])) + [r[1]] for r in pick]
        try:
            for c in range(3):
                p = next(r for r in range(c, 3) if a[r][c] != 0)
                a[c], a[p] = a[p], a[c]
                for r in range(3):
                    if r != c and a[r][c] != 0:
                        f = a[r][c] / a[c][c]
                        a[r] = [x - f * y for x, y in zip(a[r], a[c])]
            x = [a[k][3] / a[k][k] for k in range(3)]
        except StopIteration:
            continue
        if all(sum(c * xi for c, xi in zip(r[0], x)) <= r[1] for r in rows):
            best = max(best or F(0), sum(x))
    return F(12) / best, best


beta, support = triple_beta()
print("triple beta", beta, "support", support)


# Maximal tight sets for v = 2/2/3 on items {0, 1}.
def tight(prices):
    v = {(): 0, (0,): 2, (1,): 2, (0, 1): 3}
    ok = [s for s in v if v[s] <= sum(prices[j] for j in s)]
    maximal = [s for s in ok if not any(set(s) < set(t) for t in ok)]
    return sorted(maximal, key=lambda s: (-len(s), s))[0]


print("tight (1,3)", tight([F(1), F(3)]), "tight (1/2,1)", tight([F(1, 2), F(1)]))

# Price sum for b1 = (3,1), b2 = (2,2): VCG gives item 0 to agent 1 and item 1 to agent 2.
b = [(3, 1), (2, 2)]
x = [max(range(2), key=lambda i: (b[i][j], -i)) for j in range(2)]
bid_welfare = sum(b[x[j]][j] for j in range(2))
q = [[j for j in range(2) if x[j] != i] for i in range(2)]
price_sum = sum(b[1 - i][j] for i in range(2) for j in q[i])
print("price sum", price_sum, "<=", bid_welfare)

# Truncated prices against the lower-bound equilibrium, eps = 1/100.
eps = F(1, 100)
p = [3 + 3 * eps] * 3
own = {s: (0 if not s else 6 if len(s) < 3 else 12) for s in subsets((0, 1, 2))}
t = max((s for s in own if own[s] <= sum(p[j] for j in s)), key=lambda s: (len(s), [-j for j in s]))
won = [j for j in range(3) if j not in t]
utility = own[tuple(won)] - sum(p[j] for j in won)
print("truncated deviation utility", utility, "bound", F(12, 2) - sum(p))

# Round-robin trace on the one-item half grid: profiles (0, 1) then (2, 0).
def u(i, a, c):
    vals = (2, 1)
    win0 = a >= c
    if i == 0:
        return vals[0] - c if win0 else 0
    return vals[1] - a if not win0 else 0


trace = [(F(0), F(1)), (F(2), F(0))]
grid0 = [F(k, 2) for k in range(5)]
grid1 = [F(k, 2) for k in range(3)]
gain0 = max(sum(u(0, d, c) - u(0, a, c) for a, c in trace) / 2 for d in grid0)
gain1 = max(sum(u(1, a, d) - u(1, a, c) for a, c in trace) / 2 for d in grid1)
print("round robin violation", max(gain0, gain1))
