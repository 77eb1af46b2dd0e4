#!/usr/bin/env python3
"""Enumeration oracle for point counts of smooth plane curves over F_2.

Every nonzero ternary form F of degree d over F_2 is evaluated, together with
its three partial derivatives, at every point of P^2 over larger fields of
characteristic 2. F is singular when the four values vanish at a common point.
Singular points of a cubic lie over F_4 or F_8, and those of a quartic lie over
F_4, F_8 or F_16, because a reduced curve of degree d has at most d(d-1)/2
singular points and the Galois orbit of a singular point cannot be larger.
A non-reduced curve is singular along a whole component, which has points over
each of these fields. Forms are visited in Gray-code order so that each step
updates the value tables with a single XOR.

`cubics` pins the geometric statistics of Z = [V(F)] at ghost 1:
E[h_tau(Z)] for tau of size at most 2, from N_1 = #V(F)(F_2) and
N_2 = #V(F)(F_4).

`quartics` pins the vanishing-cohomology statistics at ghost 1: with
s_k = q^k + 1 - N_k the k-th power sum of the Frobenius eigenvalues on H^1,
E[h_tau] of the eigenvalues divided by q^(1/2) for tau of size 2.
"""

import argparse
import json
import os
from fractions import Fraction

import numpy as np

MODULI = {2: 0b111, 3: 0b1011, 4: 0b10011, 6: 0b1000011}


def gf_mul(a, b, k):
    mod = MODULI[k]
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> k:
            a ^= mod
    return r


def gf_pow(a, e, k):
    r = 1
    while e:
        if e & 1:
            r = gf_mul(r, a, k)
        a = gf_mul(a, a, k)
        e >>= 1
    return r


def projective_points(k):
    size = 1 << k
    pts = [(1, y, z) for y in range(size) for z in range(size)]
    pts += [(0, 1, z) for z in range(size)]
    pts.append((0, 0, 1))
    return pts


def monomials(d):
    return [(a, b, d - a - b) for a in range(d, -1, -1) for b in range(d - a, -1, -1)]


def tables(d, k):
    """Values of each monomial and of its three partials at every point of P^2(F_{2^k})."""
    pts = projective_points(k)
    monos = monomials(d)

    def value(e, p):
        v = 1
        for ei, pi in zip(e, p):
            v = gf_mul(v, gf_pow(pi, ei, k), k)
        return v

    def deriv(e, axis):
        # d/dx_axis of x^e has coefficient e[axis], which is reduced mod 2.
        if e[axis] % 2 == 0:
            return None
        f = list(e)
        f[axis] -= 1
        return tuple(f)

    out = np.zeros((4, len(monos), len(pts)), dtype=np.uint8)
    for mi, e in enumerate(monos):
        out[0, mi] = [value(e, p) for p in pts]
        for axis in range(3):
            f = deriv(e, axis)
            if f is not None:
                out[1 + axis, mi] = [value(f, p) for p in pts]
    return pts, out


def subfield_mask(pts, k, sub):
    """Points of P^2(F_{2^k}) whose normalized coordinates lie in F_{2^sub}."""
    q = 1 << sub
    return np.array([all(gf_pow(c, q, k) == c for c in p) for p in pts])


def enumerate_smooth(d, fields, count_field, count_subfields):
    """Yields (N_j for each requested subfield) for every smooth form."""
    monos = monomials(d)
    tabs = {k: tables(d, k) for k in fields}
    state = {k: np.zeros((4, len(tabs[k][0])), dtype=np.uint8) for k in fields}
    masks = [subfield_mask(tabs[count_field][0], count_field, s) for s in count_subfields]
    gray_prev = 0
    for step in range(1, 1 << len(monos)):
        gray = step ^ (step >> 1)
        bit = (gray ^ gray_prev).bit_length() - 1
        gray_prev = gray
        for k in fields:
            state[k] ^= tabs[k][1][:, bit, :]
        singular = False
        for k in fields:
            s = state[k]
            if np.any((s[0] | s[1] | s[2] | s[3]) == 0):
                singular = True
                break
        if singular:
            continue
        zero = state[count_field][0] == 0
        yield [int(np.count_nonzero(zero & m)) for m in masks]


def write(out, name, description, oracle, coefficients, trunc):
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, name)
    fixture = {
        "description": description,
        "oracle": oracle,
        "ghost": 1,
        "trunc_degree": trunc,
        "coefficients": [
            {"partition": list(t), "partition_bar": [], "value": str(v)} for t, v in coefficients
        ],
    }
    with open(path, "w") as fh:
        json.dump(fixture, fh, indent=2)
        fh.write("\n")
    print(f"wrote {path}")


def cubics(out):
    counts = list(enumerate_smooth(3, [2, 3], 2, [1, 2]))
    n = len(counts)
    n1 = Fraction(sum(c[0] for c in counts), n)
    n1sq = Fraction(sum(c[0] ** 2 for c in counts), n)
    n2 = Fraction(sum(c[1] for c in counts), n)
    write(
        out,
        "hyp-geo-q2-m2-d3.json",
        f"smooth plane cubics over F_2 ({n} of 1023 nonzero forms), geometric statistics at ghost 1",
        "python3 tools/oracle_hyp.py cubics --out fixtures",
        [((1,), n1), ((2,), (n1sq + n2) / 2), ((1, 1), n1sq)],
        2,
    )


def quartics(out):
    q = 2
    counts = list(enumerate_smooth(4, [4, 6], 6, [1, 2]))
    n = len(counts)
    s1sq = Fraction(sum((q + 1 - c[0]) ** 2 for c in counts), n)
    s2 = Fraction(sum(q * q + 1 - c[1] for c in counts), n)
    write(
        out,
        "hyp-vanishing-q2-m2-d4.json",
        f"smooth plane quartics over F_2 ({n} of 32767 nonzero forms), vanishing cohomology at ghost 1",
        "python3 tools/oracle_hyp.py quartics --out fixtures",
        [((2,), (s1sq + s2) / (2 * q)), ((1, 1), s1sq / q)],
        2,
    )


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("which", choices=["cubics", "quartics", "all"])
    ap.add_argument("--out", default="fixtures")
    args = ap.parse_args()
    if args.which in ("cubics", "all"):
        cubics(args.out)
    if args.which in ("quartics", "all"):
        quartics(args.out)


if __name__ == "__main__":
    main()
