"""Regenerates the frozen reference values used by the unit tests (mpmath, 40 digits; scipy for ODE runs)."""
import mpmath as mp
import numpy as np
from scipy.integrate import solve_ivp

mp.mp.dps = 40


def airy():
    print("// x, Ai, Ai', Bi, Bi'")
    for x in [-10, -7.5, -5, -2, -0.5, 0, 1, 2.5, 4.5, 5, 6, 8, 10, 15, 20]:
        x = mp.mpf(x)
        print("{%s, %s, %s, %s, %s}," % tuple(mp.nstr(v, 17) for v in
              (x, mp.airyai(x), mp.airyai(x, 1), mp.airybi(x), mp.airybi(x, 1))))


def bessel():
    print("// x, J_{-1/3}, J_{1/3}")
    for x in [0.25, 1, 5, 11.5, 12.5, 30, 50]:
        x = mp.mpf(x)
        print("{%s, %s, %s}," % tuple(mp.nstr(v, 17) for v in
              (x, mp.besselj(-mp.mpf(1) / 3, x), mp.besselj(mp.mpf(1) / 3, x))))
    print("omega0", mp.nstr(-mp.airyaizero(1), 20))


def hastings_mcleod():
    # Taylor integration backward from eta = 12 with Ai data (the cubic term is ~Ai^3 there),
    # written forward in s = 12 - eta
    mp.mp.dps = 40
    f = mp.odefun(lambda s, y: [y[1], (12 - s) * y[0] + 2 * y[0] ** 3], 0, [mp.airyai(12), -mp.airyai(12, 1)])
    for eta in [0, -2]:
        w, ws = f(12 - eta)
        print("hm eta=%s w=%s wprime=%s" % (eta, mp.nstr(w, 17), mp.nstr(-ws, 17)))
    mp.mp.dps = 40


def fold():
    c, th0 = 1.2, -0.25
    g = lambda th: 1 - (th + c * c / 4) ** 2
    for eps in [1e-4, 1e-3]:
        z0 = np.sqrt(-th0) + eps * g(th0) / (4 * -th0)
        rhs = lambda t, y: [-y[0] ** 2 - y[1], eps * g(y[1])]
        ev = lambda t, y: y[0] + 0.25
        ev.terminal, ev.direction = True, -1
        s = solve_ivp(rhs, [0, 50 / eps], [z0, th0], method="DOP853", rtol=1e-13, atol=1e-15, events=ev)
        print("fold eps=%g delta=0.25 theta=%.15g" % (eps, s.y_events[0][0][1]))
        # blow-up section in the chart w = 1/z, switching at z = -1
        ev1 = lambda t, y: y[0] + 1
        ev1.terminal, ev1.direction = True, -1
        s1 = solve_ivp(rhs, [0, 50 / eps], [z0, th0], method="DOP853", rtol=1e-13, atol=1e-15, events=ev1)
        th1 = s1.y_events[0][0][1]
        rhs2 = lambda t, y: [1 + y[1] * y[0] ** 2, eps * g(y[1])]
        ev2 = lambda t, y: y[0]
        ev2.terminal = True
        s2 = solve_ivp(rhs2, [0, 10], [-1.0, th1], method="DOP853", rtol=1e-13, atol=1e-15, events=ev2)
        print("fold eps=%g blowup theta=%.15g" % (eps, s2.y_events[0][0][1]))


def bratu():
    # u'' + lam e^u = 0, u(0) = u(1) = 0: t = sqrt(2 lam) cosh(t/4), u(1/2) = 2 ln cosh(t/4)
    lam = lambda t: t ** 2 / (2 * mp.cosh(t / 4) ** 2)
    tstar = mp.findroot(lambda t: mp.diff(lam, t), 4.8)
    print("bratu lam_max=%s" % mp.nstr(lam(tstar), 17))


if __name__ == "__main__":
    airy()
    bessel()
    hastings_mcleod()
    fold()
    bratu()
