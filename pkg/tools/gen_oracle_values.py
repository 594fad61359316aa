"""Extended-precision reference values frozen into tests/oracle_values.json.

Run from the repository root: python3 tools/gen_oracle_values.py
Everything here uses mpmath only, independent of the package.
"""
import json

import mpmath as mp

mp.mp.dps = 40


def c2(v):
    v = mp.mpc(v)
    return [float(v.real), float(v.imag)]


def s_poly(coeffs):
    return lambda t: sum(mp.mpf(c) * t ** j for j, c in enumerate(coeffs))


def ds_poly(coeffs):
    return lambda t: sum(j * mp.mpf(c) * t ** (j - 1) for j, c in enumerate(coeffs) if j)


def layer(coeffs, psi, w, k=1, double=False):
    s, ds = s_poly(coeffs), ds_poly(coeffs)
    x, y = mp.mpf(w.real), mp.mpf(w.imag)

    def f(t):
        dx, dy = x - t, y - s(t)
        r = mp.sqrt(dx * dx + dy * dy)
        if double:
            return -0.25j * k * ((dx * ds(t) - dy) / r) * mp.hankel1(1, k * r) * psi(t)
        return 0.25j * mp.hankel1(0, k * r) * mp.sqrt(1 + ds(t) ** 2) * psi(t)

    # split near the closest parameter
    ts = [mp.mpf(-1) + mp.mpf(j) / 8 for j in range(17)]
    best = min(ts, key=lambda t: abs(mp.mpc(x - t, y - s(t))))
    pts = sorted(set(ts + [best]))
    return mp.quad(f, pts)


def on_boundary(coeffs, psi, t0, k=1):
    s, ds = s_poly(coeffs), ds_poly(coeffs)
    t0 = mp.mpf(t0)

    def f(t):
        r = mp.sqrt((t0 - t) ** 2 + (s(t0) - s(t)) ** 2)
        return 0.25j * mp.hankel1(0, k * r) * mp.sqrt(1 + ds(t) ** 2) * psi(t)

    return mp.quad(f, [-1, t0, 1])


def tail(coeffs, c, p, n):
    s = s_poly(coeffs)
    f = lambda z: mp.exp(1j * p * mp.pi * z / 2) / (z + 1j * s(z) - c) ** (n + 1)
    if p == 0:
        return mp.quad(f, [1, 2, 10, mp.inf]) + mp.quad(f, [-mp.inf, -10, -2, -1])
    per = mp.mpf(4) / abs(p)
    return mp.quadosc(f, [1, mp.inf], period=per) + mp.quadosc(f, [-mp.inf, -1], period=per)


def main():
    out = {}
    out["bessel"] = {
        "J0(1)": float(mp.besselj(0, 1)),
        "J5(3.5)": float(mp.besselj(5, 3.5)),
        "J20(10)": float(mp.besselj(20, 10)),
        "Y3(7)": float(mp.bessely(3, 7)),
        "R0(0)": float(2 * mp.euler / mp.pi),
        "R0(2)": float(mp.bessely(0, 2)),
        "R1(2)": float(mp.bessely(1, 2)),
        "R0(0.37)": float(mp.bessely(0, 0.37) - 2 / mp.pi * mp.log(mp.mpf(0.37) / 2) * mp.besselj(0, 0.37)),
        "R1(0.37)": float(mp.bessely(1, 0.37) - 2 / mp.pi * mp.log(mp.mpf(0.37) / 2) * mp.besselj(1, 0.37)),
        "H0(1)": c2(mp.hankel1(0, 1)),
        "H1(1)": c2(mp.hankel1(1, 1)),
        "H10(25)": c2(mp.hankel1(10, 25)),
    }
    out["kernels"] = {
        "M(i,0)": c2(0.25j * mp.hankel1(0, 1)),
        "L(i,0)": c2(0.25j * mp.hankel1(1, 1)),
        "M1(i,0)": float(-mp.besselj(0, 1) / (4 * mp.pi)),
        "M2 limit k=1": c2(0.25j - (mp.log(mp.mpf(1) / 2) + mp.euler) / (2 * mp.pi)),
    }
    out["tail"] = []
    for coeffs, c in (([0, 0, 1], 0), ([0, 0, 2, 0, 5], 0), ([0, 0, 1, 0.1, -2], mp.mpc(0.1, 0.05))):
        for p, n in ((0, 0), (0, 3), (1, 0), (-2, 1), (3, 2)):
            out["tail"].append({"s": coeffs, "c": c2(c), "p": p, "n": n, "value": c2(tail(coeffs, c, p, n))})
    w = mp.mpc(0.1, 0.1)
    out["canonical"] = {
        "flat_bm1_w": c2(w),
        "flat_bm1": c2(mp.quad(lambda t: mp.exp(-1j * mp.pi * t / 2) / (w - t), [-1, 0.1, 1])),
        "curved_t2_w": [0.2, 0.1],
        "curved_t2": c2(mp.quad(lambda t: 1 / (mp.mpc(0.2, 0.1) - t - 1j * t * t), [-1, 0.2, 1])),
    }
    one = lambda t: mp.mpf(1)
    cos20 = lambda t: mp.cos(20 * t)
    poly = lambda t: (2 * t * t + 2 * t + 3) / 4
    mild = [0, 0, 1, 0.1, -2]
    extreme = [0, 0, 2, 0, 5]
    cases = [
        ("flat", [0, 0], "const", one, complex(0, 0.3), 1, False),
        ("flat", [0, 0], "const", one, complex(0, 2), 1, False),
        ("flat", [0, 0], "cos20", cos20, complex(0.2, -0.15), 1, False),
        ("flat", [0, 0], "poly", poly, complex(-0.3, 0.05), 1, True),
        ("mild", mild, "const", one, complex(0.1, 0.4), 1, False),
        ("mild", mild, "const", one, complex(-0.25, -0.3), 1, True),
        ("extreme", extreme, "const", one, complex(0.05, 0.3), 1, False),
        ("extreme", extreme, "const", one, complex(0.3, -0.3), 10, False),
    ]
    out["layer"] = []
    for name, coeffs, dname, psi, wv, k, dbl in cases:
        val = layer(coeffs, psi, wv, k, dbl)
        out["layer"].append({"boundary": name, "s": coeffs, "density": dname, "w": [wv.real, wv.imag],
                             "k": k, "layer": "double" if dbl else "single", "value": c2(val)})
    out["on_boundary"] = []
    for name, coeffs, t0 in (("flat", [0, 0], 0.0), ("flat", [0, 0], 0.3), ("mild", mild, -0.2),
                             ("extreme", extreme, 0.1)):
        out["on_boundary"].append({"boundary": name, "s": coeffs, "t0": t0, "density": "const",
                                   "value": c2(on_boundary(coeffs, one, t0))})
    with open("tests/oracle_values.json", "w") as fh:
        json.dump(out, fh, indent=1)


if __name__ == "__main__":
    main()
