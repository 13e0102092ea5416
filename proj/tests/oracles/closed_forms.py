"""Arbitrary-precision evaluation of the closed-form polariton and lattice
formulas. The printed values are frozen into the C++ unit tests."""
from mpmath import mp, mpf, sqrt, pi, exp, findroot

mp.dps = 40

GAMMA = mpf("2e7")
G1D = mpf("0.2")
DELTA0 = mpf(5)
DELTA = mpf("0.01")
N0 = mpf("1e7")
N1 = mpf("0.1") * N0
NPH = mpf("1e3")


def lam(omega, delta=DELTA):
    return omega**2 / (omega**2 - delta * DELTA0 / 2)


def xi(dp, delta=DELTA):
    return (dp - delta / 2) / (dp - delta)


def gamma_ll(dp, omega):
    return -(lam(omega) ** 2 * xi(dp) / 8) * (G1D**2 / (DELTA0 * dp)) * (N0 / NPH)


def depth(omega):
    return lam(omega) / (8 * pi**2) * (G1D**2 / omega**2) * (DELTA / DELTA0) * (N0 * N1 / NPH**2)


def kpar(g):
    return pi / sqrt(g - g**mpf(1.5) / (2 * pi))


def jer(x):
    return 4 * x ** mpf(0.75) * exp(-2 * sqrt(x)) / sqrt(pi)


def uer(x, g):
    return sqrt(2 / pi**3) * x ** mpf(0.25) * g


def uj(omega, dp=mpf(50)):
    x = depth(omega)
    return uer(x, abs(gamma_ll(dp, omega))) / jer(x)


print("Lambda(1)", lam(mpf(1)))
print("Xi(50)", xi(mpf(50)))
print("v_g(Omega=1) m/s", 4 * GAMMA / (G1D * N0))
print("kappa(v_g=100)", NPH**2 * 100 / (N0 * G1D))
print("|gamma|(50, 1.03388)", abs(gamma_ll(mpf(50), mpf("1.03388"))))
print("|gamma|(2, 1)", abs(gamma_ll(mpf(2), mpf(1))))
print("depth(1)", depth(mpf(1)))
print("depth(0.7)", depth(mpf("0.7")))
print("K(3.5)", kpar(mpf("3.5")))
print("K(10)", kpar(mpf(10)))
print("V1c(3.5)", 2 * pi / sqrt(mpf("3.5") - mpf("3.5") ** mpf(1.5) / (2 * pi)) - 4)
print("V1c(1)", 2 * pi / sqrt(1 - 1 / (2 * pi)) - 4)
x, g = mpf("9.7062"), mpf("0.20970")
print("J,U,U/J(9.7062,0.2097)", jer(x), uer(x, g), uer(x, g) / jer(x))
print("J(1)", jer(mpf(1)))
root = findroot(lambda w: uj(w) - mpf("3.85"), mpf("1.03"))
print("Omega* (U/J=3.85, dp=50)", root)
print("depth(Omega*)", depth(root), "|gamma|(Omega*)", abs(gamma_ll(mpf(50), root)))
print("U/J at Omega=2", uj(mpf(2)), "at 3", uj(mpf(3)))


def pin_excess(w, dp):
    g = abs((lam(w) ** 2 * xi(dp) / 8) * (G1D**2 / (DELTA0 * dp)) * (N0 / NPH))
    return depth(w) - max(mpf(0), 2 * pi / sqrt(g - g ** mpf(1.5) / (2 * pi)) - 4)


def gamma_at(dp, w):
    return abs(gamma_ll(dp, w))


pin = findroot(lambda w: pin_excess(w, mpf(10)), mpf("1.9"))
print("pinning Omega* (dp=10)", pin, "|gamma|", gamma_at(mpf(10), pin), "depth", depth(pin))
