"""Reference values for the unit tests, computed independently of the C++ code.

Uses mpmath at 40 digits and brute-force enumeration. Run with
    python3 tests/oracle/oracles.py
and compare against the constants frozen in the test sources.
"""

from itertools import combinations
from math import gcd

import mpmath as mp
import sympy

mp.mp.dps = 40


def t(alpha, j):
    return mp.mpf(sympy.prime(j)) ** (-mp.mpf(alpha))


def logs(n):
    l1 = mp.log(n)
    l2 = mp.log(l1)
    return l1, l2, mp.log(l2)


def pairsum(alpha, masks):
    s = mp.mpf(0)
    for a in masks:
        for b in masks:
            x, r, j = a ^ b, mp.mpf(1), 1
            while x:
                if x & 1:
                    r *= t(alpha, j)
                x >>= 1
                j += 1
            s += r
    return s


def downsets(m, n):
    full = range(1 << m)
    out = []
    for combo in combinations(full, n):
        s = set(combo)
        if all((x & ~(1 << b)) in s for x in s for b in range(m) if x >> b & 1):
            out.append(combo)
    return out


def tail_series(j0, l2, cut=4000):
    """sum_{j >= j0} g(j): direct terms below `cut`, Euler-Maclaurin beyond.

    The series converges like 1/(j log^2 j), far too slowly for generic
    extrapolation, so the remainder uses the closed-form integral of g plus
    the first Euler-Maclaurin corrections.
    """
    g = lambda x: 1 / (x * mp.log(x) * (mp.log(x) - l2))
    direct = mp.fsum(g(mp.mpf(j)) for j in range(j0, cut))
    u = mp.log(cut)
    integral = mp.log(u / (u - l2)) / l2
    d1 = mp.diff(g, cut, 1)
    d3 = mp.diff(g, cut, 3)
    d5 = mp.diff(g, cut, 5)
    return direct + integral + g(mp.mpf(cut)) / 2 - d1 / 12 + d3 / 720 - d5 / 30240


def show(name, value):
    print(f"{name} = {mp.nstr(value, 20)}")


def main():
    for j in range(1, 5):
        show(f"t_half[{j}]", t(0.5, j))
    show("t_one[3]", t(1, 3))
    for j in range(1, 5):
        tj = t(0.5, j)
        show(f"eta_half[{j}]", 2 * tj if tj < 0.5 else tj)

    n = mp.mpf(10) ** 9
    l1, l2, l3 = logs(n)
    slope = mp.sqrt(mp.mpf(1) / 6) * mp.sqrt(l3 / (l1 * l2))
    show("aux_w(1e9,1,30)", slope * (mp.log(30) - l2))
    show("aux_w(1e9,1,100)", slope * (mp.log(100) - l2))
    show("threshold(1e9)", l1 / mp.log(2))

    for alpha, jmax in ((0.5, 10), (0.5, 1000), (1, 100)):
        v = max(t(alpha, j) * mp.sqrt(j * mp.log(j)) for j in range(2, jmax + 1))
        show(f"verify_decay({alpha},{jmax})", v)

    show("S_half{1,2,3}", pairsum(0.5, [0, 1, 2]))
    ns = [4, 6, 9, 10, 12, 15, 30, 77, 1001]
    s = sum(mp.mpf(gcd(a, b)) ** (2 * mp.mpf(0.7)) / (mp.mpf(a) * b) ** mp.mpf(0.7) for a in ns for b in ns)
    show("S_int_0.7", s)
    for k in (1, 2, 3, 16):
        show(f"cube_sum_half[{k}]", mp.fprod(2 + 2 * t(0.5, j) for j in range(1, k + 1)))
    show("cube_lambda_half[2]", (1 + t(0.5, 1)) * (1 + t(0.5, 2)))
    mat = mp.matrix(3, 3)
    masks = [0, 1, 2]
    for a in range(3):
        for b in range(3):
            x = masks[a] ^ masks[b]
            mat[a, b] = (t(0.5, 1) if x & 1 else 1) * (t(0.5, 2) if x & 2 else 1)
    ev = mp.eigsy(mat)[0]
    show("min_eig_half{1,2,3}", min(ev))
    show("max_eig_half{1,2,3}", max(ev))

    for k in (5, 6):
        for alpha in (0.5, 1):
            show(f"lemma_rhs_cube[{k},{alpha}]", mp.fprod(1 + (1 + t(alpha, j)) ** 2 for j in range(1, k + 1)))

    for m, n_, alpha in ((3, 2, 0.5), (3, 3, 0.5), (4, 4, 0.5), (3, 6, 0.5), (4, 7, 0.8), (5, 9, 1.0)):
        cands = downsets(m, n_)
        best = max(pairsum(alpha, c) for c in cands)
        winners = [c for c in cands if pairsum(alpha, c) >= best * (1 - mp.mpf(10) ** -12)]
        show(f"extremal(m={m},N={n_},alpha={alpha})", best)
        print(f"  candidates={len(cands)} winners={winners}")
    for m in (1, 2, 3, 4):
        counts = [len(downsets(m, k)) for k in range(1, (1 << m) + 1)]
        print(f"downset_counts[m={m}] = {counts}")

    for name, nn, a in (("theorem1(1e6,7)", 1e6, 7),):
        l1, l2, l3 = logs(mp.mpf(nn))
        show(name, mp.exp(a * mp.sqrt(l1 * l3 / l2)))
    l1, l2, l3 = logs(mp.mpf(10) ** 6)
    show("theorem2(1e6,1,5)", mp.exp(5 * mp.sqrt(l1 * l3 / l2)))
    show("lower(1e6,1)", mp.exp(mp.sqrt(l1 / l2)))
    l1, l2, l3 = logs(mp.mpf(256))
    show("lower(256,1)", mp.exp(mp.sqrt(l1 / l2)))
    show("lemma3_cube5_lhs", mp.log(5) - mp.log(mp.log(32)))

    for nn in (mp.mpf(10) ** 4, mp.mpf(10) ** 6, mp.mpf(10) ** 9, mp.mpf(10) ** 12):
        l1, l2, l3 = logs(nn)
        j0 = int(mp.floor(l1 / mp.log(2))) + 1
        series = tail_series(j0, l2)
        show(f"tail_sum({mp.nstr(nn, 3)})", series)
        show("  estimate", l3 / l2)
        show("  integral_bound", mp.log((l2 - mp.log(mp.log(2))) / (-mp.log(mp.log(2)))) / l2)


if __name__ == "__main__":
    main()
