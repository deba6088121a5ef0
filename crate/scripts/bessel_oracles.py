#!/usr/bin/env python3
"""Independent reference eigenvalues for p = 2 radial problems.

Every value is the square k^2 of the smallest positive root k of a boundary
determinant built from closed-form radial solutions:

  n = 2: u(r) = A J0(kr) + B Y0(kr), with J0, J1, Y0, Y1 evaluated from their
         power series (not from library Bessel routines);
  n = 3: u(r) = (A cos kr + B sin kr) / r.

Roots are located by a fine scan for the first sign change followed by
bisection in 40-digit arithmetic. Series values are cross-checked against
mpmath's own besselj/bessely before anything is written.

Usage: python3 scripts/bessel_oracles.py > crates/core/tests/fixtures/bessel_oracles.json
"""

import json
import sys

import mpmath as mp

mp.mp.dps = 40
EULER = mp.euler


def j_series(order, x):
    x = mp.mpf(x)
    half = x / 2
    total = mp.mpf(0)
    k = 0
    while True:
        term = (-1) ** k * half ** (2 * k + order) / (mp.factorial(k) * mp.factorial(k + order))
        total += term
        if k > 5 and abs(term) < mp.mpf(10) ** (-mp.mp.dps + 5):
            return total
        k += 1


_HARMONIC = [mp.mpf(0)]


def harmonic(m):
    while len(_HARMONIC) <= m:
        _HARMONIC.append(_HARMONIC[-1] + mp.mpf(1) / len(_HARMONIC))
    return _HARMONIC[m]


def y0_series(x):
    x = mp.mpf(x)
    q = x * x / 4
    total = mp.mpf(0)
    k = 1
    while True:
        term = (-1) ** (k + 1) * harmonic(k) * q ** k / mp.factorial(k) ** 2
        total += term
        if k > 5 and abs(term) < mp.mpf(10) ** (-mp.mp.dps + 5):
            break
        k += 1
    return 2 / mp.pi * ((mp.log(x / 2) + EULER) * j_series(0, x) + total)


def y1_series(x):
    x = mp.mpf(x)
    half = x / 2
    total = mp.mpf(0)
    k = 0
    while True:
        psi_sum = (harmonic(k) - EULER) + (harmonic(k + 1) - EULER)
        term = (-1) ** k * psi_sum * half ** (2 * k + 1) / (mp.factorial(k) * mp.factorial(k + 1))
        total += term
        if k > 5 and abs(term) < mp.mpf(10) ** (-mp.mp.dps + 5):
            break
        k += 1
    return -2 / (mp.pi * x) + 2 / mp.pi * mp.log(x / 2) * j_series(1, x) - total / mp.pi


def self_check():
    for x in ["0.01", "0.3", "1.7", "4.2", "9.5"]:
        x = mp.mpf(x)
        for ours, ref in [
            (j_series(0, x), mp.besselj(0, x)),
            (j_series(1, x), mp.besselj(1, x)),
            (y0_series(x), mp.bessely(0, x)),
            (y1_series(x), mp.bessely(1, x)),
        ]:
            assert abs(ours - ref) < mp.mpf("1e-30"), (x, ours, ref)


def first_root(f, k_max=40.0, steps=4000):
    dk = mp.mpf(k_max) / steps
    prev_k = dk
    prev = f(prev_k)
    for i in range(2, steps + 1):
        k = dk * i
        val = f(k)
        if prev == 0:
            return prev_k
        if (prev > 0) != (val > 0):
            lo, hi = prev_k, k
            flo = prev
            for _ in range(160):
                mid = (lo + hi) / 2
                fm = f(mid)
                if (fm > 0) == (flo > 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            return (lo + hi) / 2
        prev_k, prev = k, val
    raise RuntimeError("no root found")


# n = 2 determinants -------------------------------------------------------


def det2_lambda(a, b):
    # u'(a) = 0 (inner Neumann), u(b) = 0 (outer Dirichlet); J0' = -J1.
    return lambda k: j_series(1, k * a) * y0_series(k * b) - y1_series(k * a) * j_series(0, k * b)


def det2_mu(a, b):
    # u(a) = 0 (inner Dirichlet), u'(b) = 0 (outer Neumann).
    return lambda k: j_series(0, k * a) * y1_series(k * b) - y0_series(k * a) * j_series(1, k * b)


# n = 3 determinants -------------------------------------------------------
# g(r) = (A cos kr + B sin kr)/r; g'(r) r^2 = A(-kr sin kr - cos kr) + B(kr cos kr - sin kr)


def _value_row(k, r):
    return mp.cos(k * r), mp.sin(k * r)


def _slope_row(k, r):
    kr = k * r
    return -kr * mp.sin(kr) - mp.cos(kr), kr * mp.cos(kr) - mp.sin(kr)


def det3_lambda(a, b):
    def f(k):
        (a11, a12), (a21, a22) = _slope_row(k, a), _value_row(k, b)
        return a11 * a22 - a12 * a21

    return f


def det3_mu(a, b):
    def f(k):
        (a11, a12), (a21, a22) = _value_row(k, a), _slope_row(k, b)
        return a11 * a22 - a12 * a21

    return f


def eig(f):
    k = first_root(f)
    return float(k * k)


def main():
    self_check()
    out = {
        "description": "p = 2 reference eigenvalues k^2 from boundary-determinant roots; see scripts/bessel_oracles.py",
        "dirichlet_disk_unit": eig(lambda k: j_series(0, k)),
        "annulus": [],
        "vanishing_hole_n2": [],
        "mu_decay_n3": [],
    }
    for (n, a, b) in [(2, 0.5, 1.0), (3, 0.5, 1.0), (2, 0.3, 1.0), (3, 0.3, 1.0)]:
        a_m, b_m = mp.mpf(str(a)), mp.mpf(str(b))
        if n == 2:
            lam, mu = eig(det2_lambda(a_m, b_m)), eig(det2_mu(a_m, b_m))
        else:
            lam, mu = eig(det3_lambda(a_m, b_m)), eig(det3_mu(a_m, b_m))
        out["annulus"].append({"n": n, "r1": a, "r2": b, "lambda": lam, "mu": mu})
    for eps in [0.01, 0.02, 0.03, 0.04, 0.06, 0.08, 0.12, 0.16, 0.24]:
        e = mp.mpf(str(eps))
        out["vanishing_hole_n2"].append({"epsilon": eps, "lambda": eig(det2_lambda(e, mp.mpf(1)))})
    for eps in [0.02, 0.03, 0.04, 0.06, 0.08, 0.12, 0.16, 0.24, 0.25, 0.5]:
        e = mp.mpf(str(eps))
        out["mu_decay_n3"].append({"epsilon": eps, "mu": eig(det3_mu(e, mp.mpf(1)))})
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
