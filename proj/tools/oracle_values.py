"""Reference values frozen into the unit tests.

Every value is computed from the kernel's defining integral or from mpmath
special functions, independently of the C++ code paths.

    python3 tools/oracle_values.py
"""

from math import pi, sqrt

import mpmath as mp
import numpy as np
from scipy import integrate, special

mp.mp.dps = 30


def omega_ratio(d):
    return mp.gamma(mp.mpf(d + 1) / 2) / (mp.sqrt(mp.pi) * mp.gamma(mp.mpf(d) / 2))


def cap_integral(d, beta, t):
    """Integral over x of (x.z - t)_+^(beta-1), reduced to one variable."""
    d = mp.mpf(d)
    if t >= 1:
        return mp.mpf(0)
    f = lambda w: w ** (beta - 1) * max(0, 1 - (t + w) ** 2) ** (d / 2 - 1)
    return omega_ratio(d) * mp.quad(f, [0, 1 - t])


def gegenbauer(k, d, u):
    if k == 0:
        return mp.mpf(1)
    lam = mp.mpf(d - 1) / 2
    if lam == 0:
        return mp.chebyt(k, u)
    return mp.gegenbauer(k, lam, u) / mp.gegenbauer(k, lam, 1)


def mu(k, d, beta, t):
    """Funk-Hecke eigenvalue of x -> (x.z - t)_+^(beta-1) for degree k."""
    dd = mp.mpf(d)
    if t >= 1:
        return mp.mpf(0)
    f = lambda w: w ** (beta - 1) * gegenbauer(k, d, t + w) * max(0, 1 - (t + w) ** 2) ** (dd / 2 - 1)
    return omega_ratio(dd) * mp.quad(f, [0, 1 - t])


def expansion_coeff(k, d, beta):
    """lambda_k as the integral over t of the squared Funk-Hecke eigenvalue."""
    return mp.quad(lambda t: mu(k, d, beta, t) ** 2, [-1, 0, 1])


def kernel_mean(d, beta):
    return mp.quad(lambda t: cap_integral(d, beta, t) ** 2, [-1, 0, 1])


def h_closed(a, b, beta):
    """Integral over t of (a - t)_+^(beta-1) (b - t)_+^(beta-1) on [-1, 1]."""
    if a == b:
        return (1 + a) ** (2 * beta - 1) / (2 * beta - 1)
    lo, hi = min(a, b), max(a, b)
    if lo <= -1:
        return 0.0
    return (1 + lo) * (1 + a) ** (beta - 1) * (1 + b) ** (beta - 1) / beta * special.hyp2f1(
        1 - beta, 1, 1 + beta, (1 + lo) / (1 + hi))


def kernel_definition(d, beta, inner):
    """Kernel value from its defining integral in cylinder coordinates about (x - y)/|x - y|."""
    v = sqrt((1 - inner) / 2)
    wd = float(omega_ratio(d))
    wd1 = float(omega_ratio(d - 1))
    opts = dict(epsabs=1e-14, epsrel=1e-13, limit=400)

    def ring(u):
        s = sqrt(max(0.0, 1 - v * v)) * sqrt(max(0.0, 1 - u * u))
        if d == 2:
            g = lambda ph: h_closed(u * v + s * np.cos(ph), -u * v + s * np.cos(ph), beta)
            return wd1 * integrate.quad(g, 0, pi, **opts)[0]
        g = lambda tau: h_closed(u * v + s * tau, -u * v + s * tau, beta) * (1 - tau * tau) ** ((d - 1) / 2 - 1)
        return wd1 * integrate.quad(g, -1, 1, **opts)[0]

    f = lambda u: ring(u) * (1 - u * u) ** (d / 2 - 1)
    pts = [v] if 0 < v < 1 else None
    return 2 * wd * integrate.quad(f, 0, 1, points=pts, **opts)[0]


def main():
    print("# gauss_2f1(a, b, c, z)")
    for a, b, c, z in [(0.3, 0.7, 1.9, 0.6), (-0.5, 1.2, 2.5, -0.8), (2.3, -1.7, 0.4, 0.95),
                       (0.25, 0.5, 3.5, 1.0), (1.5, 2.5, 1.25, -3.0), (0.5, 1.0, 1.5, 0.999)]:
        print(a, b, c, z, mp.nstr(mp.hyp2f1(a, b, c, z), 17))
    print("# digamma")
    for x in (0.1, 1.0, 2.5, -0.5, 37.25):
        print(x, mp.nstr(mp.digamma(x), 17))
    print("# kernel_mean(d, beta) from the squared cap integral")
    for d in (2, 3, 4):
        for beta in (0.75, 1.0, 1.5, 2.0, 2.5):
            print(d, beta, mp.nstr(kernel_mean(d, mp.mpf(beta)), 17))
    print("# kernel value (d, beta, inner) from the defining integral")
    for d in (2, 3, 4):
        for beta in (0.8, 1.5, 2.5, 3.0):
            for inner in (-1.0, -0.4, 0.3, 0.9):
                print(d, beta, inner, repr(kernel_definition(d, beta, inner)))
    print("# lambda_k(d, beta) from squared Funk-Hecke eigenvalues")
    mp.mp.dps = 20
    for d in (2, 3):
        for beta in (0.8, 1.5, 2.0, 2.5):
            vals = [mp.nstr(expansion_coeff(k, d, mp.mpf(beta)), 15) for k in range(5)]
            print(d, beta, " ".join(vals))


if __name__ == "__main__":
    main()
