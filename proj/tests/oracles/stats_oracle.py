#!/usr/bin/env python3
"""High-precision oracle for the statistics helpers, independent of the C++.

Wilson intervals, normal quantiles, adversary accuracy formulas, mutual
information of a fixed table, and the two-sample KS critical value used by the
sampling tests. Printed values are frozen into the unit tests.
"""
import mpmath as mp

mp.mp.dps = 50


def normal_quantile(p):
    return mp.sqrt(2) * mp.erfinv(2 * p - 1)


def wilson(successes, trials, confidence):
    z = normal_quantile((1 + mp.mpf(confidence)) / 2)
    p = mp.mpf(successes) / trials
    denom = 1 + z**2 / trials
    center = (p + z**2 / (2 * trials)) / denom
    half = z * mp.sqrt(p * (1 - p) / trials + z**2 / (4 * trials**2)) / denom
    return center - half, center + half


print("== standard normal quantiles ==")
for p in ("0.975", "0.995", "0.00135", "0.3"):
    print(f"z({p}) = {mp.nstr(normal_quantile(mp.mpf(p)), 18)}")

print("\n== Wilson score intervals ==")
for s, n, c in ((50, 100, "0.95"), (3, 7, "0.95"), (997, 1000, "0.99")):
    lo, hi = wilson(s, n, mp.mpf(c))
    print(f"wilson({s},{n},{c}) = [{mp.nstr(lo, 17)}, {mp.nstr(hi, 17)}]")

print("\n== adversary accuracy / forced fraction ==")
for mag in (1, 10, 100, 1000):
    acc = mp.mpf(1) / 2 + mp.atan(1 / mp.mpf(mag)) / mp.pi
    forced = 2 / mp.pi * mp.atan(1 / mp.mpf(mag))
    print(f"accuracy({mag}) = {mp.nstr(acc, 17)}   forced({mag}) = {mp.nstr(forced, 17)}")

print("\n== mutual information of joint table [[0.4,0.1],[0.1,0.4]] ==")
p = [[mp.mpf(4) / 10, mp.mpf(1) / 10], [mp.mpf(1) / 10, mp.mpf(4) / 10]]
mi = sum(p[g][k] * mp.log(p[g][k] / (mp.mpf(1) / 2 * mp.mpf(1) / 2), 2)
         for g in range(2) for k in range(2))
print("I =", mp.nstr(mi, 17))

print("\n== two-sample KS critical value, alpha=0.001, n=m=10^4 ==")
c = mp.sqrt(-mp.log(mp.mpf("0.0005")) / 2)
print("c(alpha) =", mp.nstr(c, 13), "  D_crit = c*sqrt(2/n) =", mp.nstr(c * mp.sqrt(mp.mpf(2) / 10**4), 13))

print("\n== CHSH references ==")
print("2*sqrt(2) =", mp.nstr(2 * mp.sqrt(2), 17))
print("sqrt(2)   =", mp.nstr(mp.sqrt(2), 17))
print("cos(pi/4) =", mp.nstr(mp.cos(mp.pi / 4), 17))
