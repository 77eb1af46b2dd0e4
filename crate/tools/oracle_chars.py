#!/usr/bin/env python3
"""Brute-force oracle for quadratic character statistics over F_q[x].

For every monic squarefree f of degree d over F_q (q an odd prime) the script
computes the quadratic character chi_f(g) = (f / g) of every monic g of
degree < d by factoring g into monic irreducibles P and evaluating Euler's
criterion f^((q^deg P - 1) / 2) mod P. The coefficients a_k of
L(chi_f, t) = sum_g chi_f(g) t^deg g give b_k, the coefficients of 1 / L, and
the fixture pins the averages of prod_j b_{tau_j} / q^{|tau| / 2} over all f
for partitions tau of even size, which are rational.
"""

import argparse
import json
import os
from fractions import Fraction
from itertools import product


def trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def pmod(a, m, p):
    a = trim(list(a))
    inv = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv % p
        s = len(a) - len(m)
        for i, x in enumerate(m):
            a[s + i] = (a[s + i] - c * x) % p
        trim(a)
    return a


def pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return trim(out)


def ppowmod(a, e, m, p):
    result = [1]
    base = pmod(a, m, p)
    while e:
        if e & 1:
            result = pmod(pmul(result, base, p), m, p)
        base = pmod(pmul(base, base, p), m, p)
        e >>= 1
    return result


def monic(deg, p):
    """All monic polynomials of the given degree, coefficient lists low to high."""
    for tail in product(range(p), repeat=deg):
        yield list(tail) + [1]


def is_irreducible(f, irreducibles_below):
    deg = len(f) - 1
    for g in irreducibles_below:
        if 2 * (len(g) - 1) > deg:
            break
        if not pmod(f, g, P):
            return False
    return True


def squarefree(f, p):
    # Squarefree iff gcd(f, f') = 1, tested by trial division by squares of irreducibles.
    for g in IRRED:
        if 2 * (len(g) - 1) > len(f) - 1:
            break
        if not pmod(f, pmul(g, g, p), p):
            return False
    return True


def legendre_poly(f, g, p):
    """(f / g) for monic irreducible g via Euler's criterion."""
    r = pmod(f, g, p)
    if not r:
        return 0
    e = (p ** (len(g) - 1) - 1) // 2
    v = ppowmod(r, e, g, p)
    assert v in ([1], [p - 1]), v
    return 1 if v == [1] else -1


def factor(g, p):
    out = []
    g = list(g)
    for h in IRRED:
        if len(g) == 1:
            break
        while True:
            r = pmod(g, h, p)
            if r:
                break
            g = pdiv_exact(g, h, p)
            out.append(h)
    assert len(g) == 1, g
    return out


def pdiv_exact(a, m, p):
    a = list(a)
    q = [0] * (len(a) - len(m) + 1)
    inv = pow(m[-1], p - 2, p)
    while len(a) >= len(m) and trim(a):
        c = a[-1] * inv % p
        s = len(a) - len(m)
        q[s] = c
        for i, x in enumerate(m):
            a[s + i] = (a[s + i] - c * x) % p
        trim(a)
    return trim(q)


def partitions(n, largest=None):
    if n == 0:
        yield ()
        return
    largest = n if largest is None else largest
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def main():
    global P, IRRED
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--d", type=int, default=5)
    ap.add_argument("--trunc", type=int, default=4)
    ap.add_argument("--out", default="fixtures")
    args = ap.parse_args()
    P = p = args.q
    d = args.d

    IRRED = []
    for deg in range(1, d + 1):
        for f in monic(deg, p):
            if is_irreducible(f, IRRED):
                IRRED.append(f)

    gs = {k: list(monic(k, p)) for k in range(d)}
    factors = {tuple(g): factor(g, p) for k in range(d) for g in gs[k]}

    fs = [f for f in monic(d, p) if squarefree(f, p)]
    keys = [t for n in range(2, args.trunc + 1, 2) for t in partitions(n)]
    sums = {t: Fraction(0) for t in keys}
    for f in fs:
        chi_irr = {tuple(h): legendre_poly(f, h, p) for h in IRRED if len(h) - 1 < d}
        a = []
        for k in range(d):
            s = 0
            for g in gs[k]:
                v = 1
                for h in factors[tuple(g)]:
                    v *= chi_irr[tuple(h)]
                s += v
            a.append(s)
        assert a[0] == 1
        b = [1]
        for k in range(1, args.trunc + 1):
            b.append(-sum(a[j] * b[k - j] for j in range(1, min(k, d - 1) + 1)))
        for t in keys:
            v = 1
            for part in t:
                v *= b[part]
            sums[t] += v
    coefficients = []
    for t in keys:
        value = sums[t] / len(fs) / Fraction(p) ** (sum(t) // 2)
        coefficients.append({"partition": list(t), "partition_bar": [], "value": str(value)})
    fixture = {
        "description": f"quadratic characters, q={p}, d={d}: {len(fs)} squarefree monic polynomials, ghost 1",
        "oracle": "python3 tools/oracle_chars.py --out fixtures",
        "ghost": 1,
        "trunc_degree": args.trunc,
        "coefficients": coefficients,
    }
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, f"chars-q{p}-l2-d{d}.json")
    with open(path, "w") as fh:
        json.dump(fixture, fh, indent=2)
        fh.write("\n")
    print(f"wrote {path} ({len(fs)} polynomials)")


if __name__ == "__main__":
    main()
