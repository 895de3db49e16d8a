"""Independent re-derivations of the numeric constants frozen in tests/.

Nothing here imports the package. Every formula is coded a second time,
straight from its mathematical definition, at 50-digit precision where
mpmath helps and with adaptive quadrature where an integral is involved.
Run the script to regenerate the constants; if a printed value disagrees
with the one frozen in a test, either this file or the test drifted and
the difference has to be resolved by hand, not by copying blindly.

Usage: python tools/oracles.py
"""

import mpmath as mp
from scipy import integrate, stats

mp.mp.dps = 50


def show(label, value, digits=17):
    if isinstance(value, (tuple, list)):
        body = ", ".join(mp.nstr(mp.mpf(v), digits) for v in value)
        print(f"{label} = ({body})")
    else:
        print(f"{label} = {mp.nstr(mp.mpf(value), digits)}")


# ---------------------------------------------------------------------------
# sigmoid growth curves
# ---------------------------------------------------------------------------

def logistic(t, m, lam, eta):
    return m / (1 + mp.e ** (-(t - lam) / eta))


def bass_fraction(x, p, q):
    e = mp.e ** (-(p + q) * x)
    return (1 - e) / (1 + (q / p) * e)


def rect_W(t, a, b, c):
    """Integral of 1 + c*1[a<=u<=b] from 0 to t, closed form."""
    return t + c * max(0, min(t, b) - a)


def seasonal_W(t, a1, a2, s):
    two_pi = 2 * mp.pi
    return (
        t
        + a1 * (s / two_pi) * mp.sin(two_pi * t / s)
        + a2 * (s / two_pi) * (1 - mp.cos(two_pi * t / s))
    )


def begbm(t, m, p, q, a, b, c, A):
    e = mp.e ** (-(p + q) * rect_W(t, a, b, c))
    return m * (1 - e) / (1 + (q / p) * e) ** A


def dmp(t, m, p_c, q_c, p, q, W=None):
    x = t if W is None else W
    return m * mp.sqrt(bass_fraction(t, p_c, q_c)) * bass_fraction(x, p, q)


print("# growth-curve probe values")
show("LOGISTIC(m=1000, lam=30, eta=5) at t=10", logistic(10, 1000, 30, 5))
show("LOGISTIC(...) at t=30", logistic(30, 1000, 30, 5))
show("LOGISTIC(...) at t=55.5", logistic(mp.mpf("55.5"), 1000, 30, 5))
show("BASS(m=1, p=0.01, q=0.2) at t=15",
     bass_fraction(15, mp.mpf("0.01"), mp.mpf("0.2")))
show("BASS(...) at t=40", bass_fraction(40, mp.mpf("0.01"), mp.mpf("0.2")))

GBM = dict(m=5000, p=mp.mpf("0.002"), q=mp.mpf("0.12"),
           a=10, b=20, c=mp.mpf("0.8"))
for t in (5, 15, mp.mpf("33.25")):
    show(f"GBM_RECT{tuple(map(float, (5000, 0.002, 0.12, 10, 20, 0.8)))} at t={float(t)}",
         GBM["m"] * bass_fraction(rect_W(t, GBM["a"], GBM["b"], GBM["c"]),
                                  GBM["p"], GBM["q"]))
show("BEGBM(same shock, A=2.2) at t=15",
     begbm(15, GBM["m"], GBM["p"], GBM["q"], GBM["a"], GBM["b"], GBM["c"],
           mp.mpf("2.2")))

DMP = dict(m=20000, p_c=mp.mpf("5e-4"), q_c=mp.mpf("0.22"),
           p=mp.mpf("0.03"), q=mp.mpf("0.004"))
for t in (12, 50):
    show(f"DMP at t={t}", dmp(t, **DMP))
SEAS = dict(a1=mp.mpf("0.06"), a2=mp.mpf("-0.11"), s=7)
for t in (mp.mpf("9.5"), 21):
    show(f"DMP+seasonal at t={float(t)}",
         dmp(t, **DMP, W=seasonal_W(t, **SEAS)))

# ---------------------------------------------------------------------------
# intervention integrals vs adaptive quadrature
# ---------------------------------------------------------------------------

print("\n# intervention integrals (closed form vs scipy.integrate.quad)")
for t in (5.0, 12.5, 20.0, 33.25):
    closed = float(rect_W(t, 10, 20, 0.8))
    quad, _ = integrate.quad(
        lambda u: 1.0 + (0.8 if 10 <= u <= 20 else 0.0), 0, t,
        points=[10, 20], limit=200)
    print(f"rect   t={t:6.2f} closed={closed:.12f} quad={quad:.12f} "
          f"diff={abs(closed - quad):.2e}")
for t in (3.0, 9.5, 21.0):
    closed = float(seasonal_W(mp.mpf(t), **SEAS))
    quad, _ = integrate.quad(
        lambda u: 1.0 + 0.06 * mp.cos(2 * mp.pi * u / 7)
        - 0.11 * mp.sin(2 * mp.pi * u / 7), 0, t, limit=200)
    print(f"season t={t:6.2f} closed={closed:.12f} quad={quad:.12f} "
          f"diff={abs(closed - quad):.2e}")

# step-function swab weight: the identity sum_{u=1..n} w(u) = n holds
# whenever mu is the mean of the summed values, by construction
B = [3, 8, 15, 10, 6, 9, 14, 4]
mu = mp.mpf(sum(B)) / len(B)
var = sum((mp.mpf(x) - mu) ** 2 for x in B) / (len(B) - 1)
sigma = mp.sqrt(var)
xi = mp.mpf("0.35")
w = [1 + xi * (x - mu) / sigma for x in B]
show("swab mu_B (sample over the 8 values)", mu)
show("swab sigma_B", sigma)
show("swab W(3)", sum(w[:3]))
show("swab W(8) (identity: equals n=8)", sum(w))

# ---------------------------------------------------------------------------
# compartmental decay with beta = 0
# ---------------------------------------------------------------------------

print("\n# SIRD with beta=0: I decays at rate gamma+delta, S frozen")
gamma, delta = mp.mpf("0.03"), mp.mpf("0.007")
I0, R0, D0 = 500, 20, 5
for t in (7, 30):
    decay = mp.e ** (-(gamma + delta) * t)
    I_t = I0 * decay
    R_t = R0 + gamma / (gamma + delta) * I0 * (1 - decay)
    D_t = D0 + delta / (gamma + delta) * I0 * (1 - decay)
    show(f"I({t})", I_t)
    show(f"R({t})", R_t)
    show(f"D({t})", D_t)

# ---------------------------------------------------------------------------
# interval-estimation constants
# ---------------------------------------------------------------------------

print("\n# quantiles")
show("chi2(1) 0.95 quantile", stats.chi2.ppf(0.95, df=1))
show("chi2(1) 0.95 quantile / 2 (profile threshold)",
     stats.chi2.ppf(0.95, df=1) / 2.0)
for df in (50, 67, 70, 198):
    show(f"t 0.975 quantile, df={df}", stats.t.ppf(0.975, df=df))

# Straight-line least squares y = theta0 + theta1*x is an exactly
# quadratic objective, so the profile interval must coincide with the
# asymptotic one. Closed-form check values for the toy used in tests:
# x = 0..19, y = 2 + 3x + r with r a fixed deterministic residual
# pattern r_i = ((-1)^i) * (i % 5) / 10.
print("\n# exact-quadratic toy (y = 2 + 3x + r, x = 0..19)")
import numpy as np

x = np.arange(20.0)
r = np.array([((-1) ** i) * (i % 5) / 10.0 for i in range(20)])
y = 2.0 + 3.0 * x + r
X = np.column_stack([np.ones_like(x), x])
theta = np.linalg.solve(X.T @ X, X.T @ y)
res = y - X @ theta
rss = float(res @ res)
s2 = rss / (len(x) - 2)
cov = s2 * np.linalg.inv(X.T @ X)
tq = stats.t.ppf(0.975, df=len(x) - 2)
show("theta0", theta[0])
show("theta1", theta[1])
show("rss", rss)
show("se(theta0)", np.sqrt(cov[0, 0]))
show("se(theta1)", np.sqrt(cov[1, 1]))
show("CI(theta1) lo", theta[1] - tq * np.sqrt(cov[1, 1]))
show("CI(theta1) hi", theta[1] + tq * np.sqrt(cov[1, 1]))
