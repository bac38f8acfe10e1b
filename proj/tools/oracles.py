#!/usr/bin/env python3
"""Reference values frozen into the C++ tests.

Independent of the C++ code: spherical Bessel functions from mpmath's
half-integer Bessel J, the material chain in 40-digit arithmetic, and the
steady state from a dense null-space computation with numpy.
"""

import json
import sys

import mpmath as mp
import numpy as np
import scipy.linalg as sla

mp.mp.dps = 40

HBAR = mp.mpf("1.054571817e-34")
QE = mp.mpf("1.602176634e-19")
C0 = mp.mpf("299792458")
EPS0 = mp.mpf("8.8541878128e-12")


def ev(x):
    return mp.mpf(x) * QE / HBAR


SILVER = dict(wp=ev("8.5472"), gp=ev("0.018"), einf=mp.mpf(5), vf=mp.mpf("1.39e6"), eb=mp.mpf(3))


def sph_j(l, z):
    return mp.sqrt(mp.pi / (2 * z)) * mp.besselj(l + mp.mpf(1) / 2, z)


def sph_jp(l, z):
    return sph_j(l - 1, z) - (l + 1) / z * sph_j(l, z)


def log_ratio(l, z):
    z = mp.mpc(z)
    return sph_j(l, z) / (z * sph_jp(l, z))


def eps(m, w):
    return m["einf"] - m["wp"] ** 2 / (w * (w + 1j * m["gp"]))


def beta(m):
    return mp.sqrt(mp.mpf(3) / 5) * m["vf"]


def diffusion(m, w):
    return 4 * m["gp"] * m["vf"] ** 2 / (15 * (w**2 + m["gp"] ** 2))


def k_long(m, w):
    num = w * (w + 1j * m["gp"]) * eps(m, w)
    den = m["einf"] * (beta(m) ** 2 + diffusion(m, w) * (m["gp"] - 1j * w))
    k = mp.sqrt(num / den)
    return k if mp.im(k) >= 0 else -k


def delta(m, l, w, r):
    return l * (l + 1) * (eps(m, w) - m["einf"]) / m["einf"] * log_ratio(l, k_long(m, w) * r)


def w_local(m, l):
    return mp.sqrt(l * m["wp"] ** 2 / (l * m["einf"] + (l + 1) * m["eb"]) - m["gp"] ** 2)


def g_local_damp(m, l):
    return m["gp"] * (1 + (m["gp"] / w_local(m, l)) ** 2)


def eta(m, l):
    return (l * m["wp"] / (l * m["einf"] + (l + 1) * m["eb"])) ** 2 / (2 * w_local(m, l))


def w_nonlocal(m, l, r):
    return w_local(m, l) + mp.sqrt(l * (l + 1)) * beta(m) / (2 * r)


def modes(m, r, r0, s, n, wd, nonlocal_=True):
    d = r0 + s + r
    mu = QE * r0
    out = []
    for l in range(1, n + 1):
        wl = w_nonlocal(m, l, r) if nonlocal_ else w_local(m, l)
        gl = g_local_damp(m, l)
        if nonlocal_:
            gl += mp.mpf(l) / 2 * mp.sqrt(mp.mpf(l + 1) / (2 * l + 1)) * diffusion(m, wd) * m["wp"] / (beta(m) * r)
        g = mu * (l + 1) / d ** (l + 2) * mp.sqrt((2 * l + 1) * eta(m, l) * r ** (2 * l + 1) / (4 * mp.pi * EPS0 * HBAR * l))
        corr = mp.re(1 + delta(m, l, wd, r)) if nonlocal_ else mp.mpf(1)
        g = g * mp.sqrt(corr) if corr > 0 else mp.mpf(0)
        out.append((wl, gl, g))
    return out


def chi(m, r, wd, nonlocal_=True):
    c = m["eb"] * mp.sqrt(12 * mp.pi * EPS0 * eta(m, 1) * r**3 * HBAR)
    if nonlocal_:
        c *= mp.sqrt(mp.re(1 + delta(m, 1, wd, r)))
    return c


def effective(m, r, r0, s, n, intensity, gamma, frac, nonlocal_=True):
    wd = w_nonlocal(m, 1, r) if nonlocal_ else w_local(m, 1)
    md = modes(m, r, r0, s, n, wd, nonlocal_)
    e0 = mp.sqrt(2 * intensity / (C0 * mp.sqrt(m["eb"]) * EPS0))
    omega = e0 * chi(m, r, wd, nonlocal_) / (2 * HBAR)
    gt = mp.mpf(0)
    g12 = mp.mpf(0)
    rabi = None
    for i, (wl, gl, g) in enumerate(md):
        dl = gl / 2 + 1j * (wl - wd)
        if i == 0:
            rabi = g * 1j * omega / dl
        gt += (wl - wd) * g**2 / abs(dl) ** 2
        g12 += gl * g**2 / abs(dl) ** 2
    w1, w2 = wd * (1 + frac), wd * (1 - frac)
    return dict(rabi=complex(rabi), exchange=float(gt), cross=float(g12),
                det=[float(w1 - wd - gt), float(w2 - wd - gt)], decay=float(gamma + g12),
                omega=float(omega), gamma1=float(md[0][1]), wd=float(wd))


def lowering(q):
    s = np.array([[0, 1], [0, 0]], dtype=complex)
    i2 = np.eye(2)
    return np.kron(s, i2) if q == 0 else np.kron(i2, s)


def lindblad_rhs_matrix(e):
    s = [lowering(0), lowering(1)]
    h = sum(e["det"][i] * s[i].conj().T @ s[i] for i in range(2))
    h = h - sum(e["rabi"] * s[i].conj().T + np.conj(e["rabi"]) * s[i] for i in range(2))
    h = h - e["exchange"] * (s[0].conj().T @ s[1] + s[1].conj().T @ s[0])
    rates = [[e["decay"], e["cross"]], [e["cross"], e["decay"]]]
    L = np.zeros((16, 16), dtype=complex)
    for k in range(16):
        rho = np.zeros(16, dtype=complex)
        rho[k] = 1
        rho = rho.reshape(4, 4, order="F")
        d = -1j * (h @ rho - rho @ h)
        for i in range(2):
            for j in range(2):
                a = s[i].conj().T @ s[j]
                d += rates[i][j] / 2 * (2 * s[j] @ rho @ s[i].conj().T - a @ rho - rho @ a)
        L[:, k] = d.reshape(16, order="F")
    return L


def steady(e):
    ns = sla.null_space(lindblad_rhs_matrix(e), rcond=1e-13)
    v = ns[:, 0].reshape(4, 4, order="F")
    v = v / np.trace(v)
    return (v + v.conj().T) / 2


def wootters(rho):
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    r = rho @ yy @ rho.conj() @ yy
    lam = np.sqrt(np.abs(np.sort(np.linalg.eigvals(r).real)[::-1]))
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def qfi(rho, h):
    w, v = np.linalg.eigh(rho)
    hv = v.conj().T @ h @ v
    f = 0.0
    for i in range(4):
        for j in range(4):
            if w[i] + w[j] > 1e-12:
                f += 2 * (w[i] - w[j]) ** 2 / (w[i] + w[j]) * abs(hv[i, j]) ** 2
    return f


def main():
    m = SILVER
    nm = mp.mpf("1e-9")
    r = 30 * nm
    out = {}
    out["bessel_l1_z1"] = complex(log_ratio(1, 1))
    out["bessel_l1_z120i"] = complex(log_ratio(1, 120j))
    out["bessel_l5_z3p2i"] = complex(log_ratio(5, mp.mpc(3, 2)))
    out["bessel_l10_z0p5p40i"] = complex(log_ratio(10, mp.mpc(0.5, 40)))
    wd = w_nonlocal(m, 1, r)
    out["lambda0_nonlocal_nm"] = float(2 * mp.pi * C0 / wd / nm)
    out["lambda0_local_nm"] = float(2 * mp.pi * C0 / w_local(m, 1) / nm)
    out["k_long_30nm"] = complex(k_long(m, wd))
    out["delta1_30nm"] = complex(delta(m, 1, wd, r))
    out["delta3_30nm"] = complex(delta(m, 3, wd, r))
    md = modes(m, r, mp.mpf("0.8") * nm, 30 * nm, 2, wd)
    out["g1_30_30"] = float(md[0][2])
    out["gamma1_nr_30"] = float(md[0][1])
    out["chi_30"] = float(chi(m, r, wd))
    for n in (1, 10):
        e = effective(m, r, mp.mpf("0.8") * nm, 30 * nm, n, mp.mpf("1e5"), 2 * mp.pi * 1e8, mp.mpf("1e-5"))
        rho = steady(e)
        h = np.diag([0, -1, 1, 0]).astype(complex)
        out[f"N{n}_exchange"] = e["exchange"]
        out[f"N{n}_cross_decay"] = e["cross"]
        out[f"N{n}_rabi_im"] = e["rabi"].imag
        out[f"N{n}_omega_over_gamma1"] = e["omega"] / e["gamma1"]
        out[f"N{n}_C_ss"] = wootters(rho)
        out[f"N{n}_FQ_ss"] = qfi(rho, h)
    json.dump({k: ([v.real, v.imag] if isinstance(v, complex) else v) for k, v in out.items()},
              sys.stdout, indent=1)
    print()


if __name__ == "__main__":
    main()
