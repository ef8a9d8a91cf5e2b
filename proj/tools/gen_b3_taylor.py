#!/usr/bin/env python3
"""Emit src/moments/b3_taylor.inc: order-40 Taylor coefficients in u = w - 1
of the six weight functions g_k used by the B3 kernel.

  g_k = L^2 (K D)_k  for k = 0, 1
  g_k = L^3 (K D)_k  for k = 2..5
  L   = 1 / ((w - 1)(w + 1))
  D   = [T w, w^2, T w^3, w^4, T w^5, w^6]
  T   = atan(r) / (r (1 + w)),  r^2 = (1 - w) / (1 + w)

Everything is done with exact rationals, so the pole cancellation in the
L^2 / L^3 products is checked exactly. The script also cross-checks the
truncated series against a direct mpmath evaluation.
"""
import sys
from fractions import Fraction as Fr

ORDER = 40
N = ORDER + 8  # working length, enough to absorb the u^-3 shift

K = [[Fr(1), Fr(-5, 6), Fr(0), Fr(1, 3), Fr(0), Fr(0)],
     [Fr(0), Fr(2, 3), Fr(-2), Fr(1, 3), Fr(0), Fr(0)],
     [Fr(-3, 16), Fr(23, 96), Fr(-1, 8), Fr(-1, 8), Fr(0), Fr(1, 24)],
     [Fr(-1, 8), Fr(5, 48), Fr(1, 8), Fr(-7, 48), Fr(0), Fr(1, 24)],
     [Fr(0), Fr(-1, 3), Fr(5, 4), Fr(-3, 8), Fr(0), Fr(1, 12)],
     [Fr(0), Fr(0), Fr(-1, 4), Fr(13, 24), Fr(-1), Fr(1, 12)]]


def mul(a, b):
    c = [Fr(0)] * N
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j in range(N - i):
            c[i + j] += ai * b[j]
    return c


def add(a, b, sa=1, sb=1):
    return [sa * x + sb * y for x, y in zip(a, b)]


def poly(coeffs):
    s = [Fr(0)] * N
    for i, c in enumerate(coeffs):
        s[i] = Fr(c)
    return s


# 1/(2+u) = 1/2 * sum (-u/2)^n
inv2u = [Fr((-1) ** n, 2 ** (n + 1)) for n in range(N)]
# s = -u/(2+u)
s = mul(poly([0, -1]), inv2u)
# F(s) = sum (-1)^n s^n / (2n+1)
F = [Fr(0)] * N
sp = poly([1])
for n in range(N):
    F = add(F, [Fr((-1) ** n, 2 * n + 1) * x for x in sp])
    sp = mul(sp, s)
theta = mul(F, inv2u)

w = poly([1, 1])
wp = [poly([1])]
for _ in range(6):
    wp.append(mul(wp[-1], w))
D = [mul(theta, wp[1]), wp[2], mul(theta, wp[3]), wp[4], mul(theta, wp[5]), wp[6]]
KD = []
for i in range(6):
    acc = [Fr(0)] * N
    for j in range(6):
        if K[i][j] != 0:
            acc = add(acc, [K[i][j] * x for x in D[j]])
    KD.append(acc)

g = []
inv2u2 = mul(inv2u, inv2u)
inv2u3 = mul(inv2u2, inv2u)
for i in range(6):
    p = 2 if i < 2 else 3
    for j in range(p):
        if KD[i][j] != 0:
            sys.exit(f"pole does not cancel: row {i}, u^{j - p} coefficient {KD[i][j]}")
    shifted = KD[i][p:] + [Fr(0)] * p
    g.append(mul(shifted, inv2u2 if p == 2 else inv2u3)[: ORDER + 1])


def check():
    import mpmath as mp
    mp.mp.dps = 50

    def direct(wv, i):
        wv = mp.mpf(wv)
        if wv < 1:
            q = mp.sqrt(1 - wv * wv)
            th = mp.atan((1 - wv) / q) / q
        else:
            q = mp.sqrt(wv * wv - 1)
            th = mp.atanh((wv - 1) / q) / q
        d = [th * wv, wv ** 2, th * wv ** 3, wv ** 4, th * wv ** 5, wv ** 6]
        kd = sum(K[i][j] * d[j] for j in range(6))
        lam = 1 / ((wv - 1) * (wv + 1))
        return kd * lam ** (2 if i < 2 else 3)

    worst = 0
    for wv in ["0.35", "0.6", "0.999", "1.001", "1.3", "1.7"]:
        u = mp.mpf(wv) - 1
        for i in range(6):
            ser = sum(mp.mpf(c.numerator) / c.denominator * u ** n for n, c in enumerate(g[i]))
            ref = direct(wv, i)
            worst = max(worst, abs(ser - ref) / max(1, abs(ref)))
    return worst


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else None
    err = check()
    if err > 1e-17:
        sys.exit(f"series check failed: {err}")
    import mpmath as mp
    mp.mp.dps = 60
    lines = ["// Generated by tools/gen_b3_taylor.py; do not edit.",
             f"// Taylor coefficients in (w-1) of the six B3 weight functions, order {ORDER}.",
             f"// Max relative truncation error on [0.35, 1.7]: {mp.nstr(err, 3)}",
             f"static constexpr double kB3Taylor[{ORDER + 1}][6] = {{"]
    for n in range(ORDER + 1):
        vals = []
        for i in range(6):
            c = g[i][n]
            vals.append(mp.nstr(mp.mpf(c.numerator) / c.denominator, 36, min_fixed=1, max_fixed=0))
        lines.append("    {" + ", ".join(vals) + "},")
    lines.append("};")
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    print(f"checked, max rel err {err}", file=sys.stderr)


if __name__ == "__main__":
    main()
