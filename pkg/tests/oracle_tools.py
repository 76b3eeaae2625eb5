"""Independent reference computations used to freeze test oracles.

Nothing here imports the package's numerical code: Bessel functions come
from their power series in extended precision and roots from plain
bisection.
"""

import json
import math
import os

import mpmath as mp

DATA = os.path.join(os.path.dirname(__file__), "data")
mp.mp.dps = 40


def bessel_series(m, x):
    """``J_m(x)`` from ``sum_j (-1)^j (x/2)^(2j+|m|) / (j! (j+|m|)!)``."""
    sign = -1 if (m < 0 and m % 2) else 1
    m = abs(m)
    x = mp.mpf(x)
    half = x / 2
    term = half ** m / mp.factorial(m)
    total = term
    j = 0
    while True:
        j += 1
        term *= -half * half / (j * (j + m))
        total += term
        if abs(term) < mp.mpf(10) ** (-35) * max(abs(total), mp.mpf(10) ** -20) and j > half:
            break
    return sign * total


def bisect(f, a, b, tol=1e-14):
    fa = f(a)
    if fa == 0:
        return a
    while b - a > tol:
        c = 0.5 * (a + b)
        fc = f(c)
        if fc == 0:
            return c
        if (fc > 0) == (fa > 0):
            a, fa = c, fc
        else:
            b = c
    return 0.5 * (a + b)


def b_constant(eta):
    """``(1 - sin eta) / cos eta`` in extended precision."""
    eta = mp.mpf(eta)
    return (1 - mp.sin(eta)) / mp.cos(eta)


def secular_oracle(eta, sgn, k_max, m_max, step=0.02):
    """Roots ``(m, k)`` of ``sgn J_{m+1}(k) - B J_m(k)`` with ``0 < k <= k_max``."""
    B = b_constant(eta)
    grid = [step * i for i in range(1, int(round(k_max / step)) + 1)]
    table = {m: [bessel_series(m, x) for x in grid] for m in range(0, m_max + 2)}

    def J(m, idx):
        v = table[abs(m)][idx]
        return -v if (m < 0 and m % 2) else v

    out = []
    for m in range(-m_max, m_max + 1):
        vals = [sgn * J(m + 1, i) - B * J(m, i) for i in range(len(grid))]
        for i in range(len(grid) - 1):
            if vals[i] == 0:
                out.append((m, grid[i]))
            elif (vals[i] > 0) != (vals[i + 1] > 0):
                g = lambda k, m=m: float(sgn * bessel_series(m + 1, k) - B * bessel_series(m, k))
                out.append((m, bisect(g, grid[i], grid[i + 1])))
    return sorted(out, key=lambda mk: (mk[1], mk[0]))


def generate():
    os.makedirs(DATA, exist_ok=True)
    doc = {}
    for eta in (0.0, 0.4, -0.4):
        for sgn in (1, -1):
            doc[f"{eta:+.1f},{sgn:+d}"] = secular_oracle(eta, sgn, 15.0, 35)
    with open(os.path.join(DATA, "secular_roots.json"), "w") as fh:
        json.dump(doc, fh, indent=1)
    j0 = bisect(lambda x: float(bessel_series(0, x)), 2.0, 3.0)
    with open(os.path.join(DATA, "bessel.json"), "w") as fh:
        json.dump({"j0_first_root": j0,
                   "samples": [[m, x, float(bessel_series(m, x))]
                               for m in (-3, 0, 1, 5, 20) for x in (0.5, 3.7, 14.9)]}, fh, indent=1)


if __name__ == "__main__":
    generate()
