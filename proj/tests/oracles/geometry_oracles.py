"""Independent high-precision oracles for the per-edge geometry tests.

Values are computed from the cosine/sine laws in r-coordinates (not from the
u-space cotangent formula the library uses) and frozen into the C++ tests.
"""
from mpmath import mp, mpf, acosh, asinh, cosh, sinh, coth, log, exp, acos, asin, atan, findroot, pi, sqrt

mp.dps = 40


def r_of(u):
    return -log(-u / 2)


def angles_110_cosine_law(theta, u1, u2):
    r1, r2 = r_of(u1), r_of(u2)
    chl = theta**2 / 2 * exp(r1 + r2) + cosh(r1 - r2)
    shl = sqrt(chl**2 - 1)
    c1 = (-exp(r2) + exp(r1) * chl) / (exp(r1) * shl)
    c2 = (-exp(r1) + exp(r2) * chl) / (exp(r2) * shl)
    b1, b2 = acos(c1), acos(c2)
    # sine law cross-check: sinh l = theta e^{r2} / sin b1
    assert abs(shl - theta * exp(r2) / mp.sin(b1)) < mpf(10) ** -30
    assert abs(shl - theta * exp(r1) / mp.sin(b2)) < mpf(10) ** -30
    return b1, b2, acosh(chl)


def root_find_beta1(theta, u1, u2, guess):
    r1, r2 = r_of(u1), r_of(u2)
    chl = theta**2 / 2 * exp(r1 + r2) + cosh(r1 - r2)
    shl = sqrt(chl**2 - 1)
    f = lambda b: mp.cos(b) * exp(r1) * shl - (-exp(r2) + exp(r1) * chl)
    return findroot(f, guess)


for theta, u in [(1, (-1, -1)), (1, (-1, -2)), (2, (-2, -2))]:
    b1, b2, l = angles_110_cosine_law(mpf(theta), mpf(u[0]), mpf(u[1]))
    rf = root_find_beta1(mpf(theta), mpf(u[0]), mpf(u[1]), b1 + mpf("0.01"))
    print(f"angles_110 theta={theta} u={u}: beta1={mp.nstr(b1,17)} beta2={mp.nstr(b2,17)} "
          f"l12={mp.nstr(l,17)} rootfind_beta1={mp.nstr(rf,17)}")

print("atan(4/7)", mp.nstr(atan(mpf(4) / 7), 17), "atan(8)", mp.nstr(atan(8), 17))
print("coth(1)", mp.nstr(coth(1), 17), "coth(1)/2", mp.nstr(coth(1) / 2, 17))
print("acosh(3)", mp.nstr(acosh(3), 17), "acosh(1.5)", mp.nstr(acosh(mpf(3) / 2), 17))
print("2 ln sinh 1", mp.nstr(2 * log(sinh(1)), 17))

# (0,0,delta) length via sine law route: e^l = e^{r2} sin(theta)/(2 beta1) etc.
theta = mpf(2)
beta1 = coth(theta / 2)  # u = -2 -> r = 0 -> beta = e^{-r} coth(theta/2)
print("00-1 length via sine law", mp.nstr(log(sinh(theta) / (2 * beta1)), 17))

# finite-difference partials of the cosine-law angles at theta=1 u=(-1,-1)
h = mpf(10) ** -15
def b(u1, u2):
    return angles_110_cosine_law(mpf(1), u1, u2)[:2]
p = b(mpf(-1) + h, mpf(-1)); m = b(mpf(-1) - h, mpf(-1))
print("d beta1/du1", mp.nstr((p[0] - m[0]) / (2 * h), 15), "d beta2/du1", mp.nstr((p[1] - m[1]) / (2 * h), 15))
