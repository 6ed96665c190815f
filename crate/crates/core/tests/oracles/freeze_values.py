"""High-precision reference values frozen into the Rust test suites.

Run with `python3 freeze_values.py`. Everything here is computed from the
closed-form profiles with mpmath quadrature and is independent of the
finite-difference code in the crate.
"""
import mpmath as mp

mp.mp.dps = 40


def q(r, lam=1):
    return 2 * mp.atan(r / lam)


def smooth_step(x):
    if x <= 0:
        return mp.mpf(0)
    if x >= 1:
        return mp.mpf(1)
    f = mp.exp(-1 / x)
    g = mp.exp(-1 / (1 - x))
    return f / (f + g)


def h_norm_q2_q1(r_max):
    def integrand(r):
        d = q(r, 2) - q(r, 1)
        dr = mp.diff(lambda s: q(s, 2) - q(s, 1), r)
        return (dr**2 + (d / r) ** 2) * r
    return mp.quad(integrand, [0, 1, 5, 20, r_max])


def nonlinearity(r, v):
    # (sin(2rv) - 2rv) / (2 r^3)
    x = 2 * r * v
    return (mp.sin(x) - x) / (2 * r**3)


def bump_profile(amp, r0, sigma, lam):
    a = max(r0 - 8 * sigma, 0)
    b = r0 + 8 * sigma

    def psi(r):
        w = smooth_step((r - a) / (2 * sigma)) * smooth_step((b - r) / (2 * sigma))
        return q(r, lam) + amp * mp.exp(-(((r - r0) / sigma) ** 2)) * w
    return psi, b


def energy_static(psi, pts):
    def integrand(r):
        p = psi(r)
        pr = mp.diff(psi, r)
        return (pr**2 + (mp.sin(p) / r) ** 2) * r
    return mp.quad(integrand, pts)


if __name__ == "__main__":
    for r_max in (100,):
        print("h_norm_sq(Q_2 - Q_1) on [0,%d] =" % r_max, mp.nstr(h_norm_q2_q1(r_max), 20))
    for (r, v) in ((0.3, 1.0), (1.0, 0.3), (0.03, 10.0)):
        print("N(r=%g, v=%g) =" % (r, v), mp.nstr(nonlinearity(mp.mpf(r), mp.mpf(v)), 25))
    psi, b = bump_profile(mp.mpf("0.2"), 8, 1, 1)
    inner = energy_static(psi, [0, 1, 2, 4, 6, 7, 8, 9, 10, 12, 14, b])
    tail = 4 / (1 + b**2)
    print("soliton_plus_bump(A=0.2,r0=8,sigma=1,lam=1) energy =", mp.nstr(inner + tail, 20))
