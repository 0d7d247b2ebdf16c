"""Independent numpy/scipy reference values for the frozen C++ goldens.

Builds every operator from scratch with np.kron and propagates with
scipy.linalg.expm / expm_multiply, sharing no code with the library.
Run: python3 tests/oracles/derive_goldens.py [--noisy] [--two-cell]
"""
import argparse
import math

import numpy as np
from scipy.linalg import expm, eigh
from scipy.optimize import minimize
from scipy.sparse import csr_matrix, identity, kron as skron
from scipy.sparse.linalg import expm_multiply

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, 1j], [-1j, 0]], dtype=complex)  # rows/cols ordered (g, e)
SZ = np.diag([-1.0, 1.0]).astype(complex)


def ops(n):
    a = np.diag(np.sqrt(np.arange(1, n)), 1).astype(complex)
    i2, iN = np.eye(2), np.eye(n)
    return np.kron(i2, a), np.kron(SX, iN), np.kron(SY, iN), np.kron(SZ, iN), np.kron(i2, a.conj().T @ a)


def rabi(n, omega, weg=0.1, wc=1.0):
    a, sx, _, sz, num = ops(n)
    return 0.5 * weg * sz + wc * num + omega * sx @ (a + a.conj().T)


def basis(n, q, k):
    v = np.zeros(2 * n, dtype=complex)
    v[q * n + k] = 1
    return v


def coherent(alpha, n):
    k = np.arange(n)
    c = np.exp(-abs(alpha) ** 2 / 2) * np.array([alpha**j / math.sqrt(math.factorial(j)) for j in k])
    return c / np.linalg.norm(c)


def cat(n, omega, branch):
    ket_m, ket_p = coherent(-omega, n), coherent(omega, n)
    plus = (np.array([0, 1]) + np.array([1, 0])) / math.sqrt(2)  # (|e> + |g>)/sqrt2 in (g, e)
    minus = (np.array([0, 1]) - np.array([1, 0])) / math.sqrt(2)
    sign = -1 if branch == "G" else 1
    v = np.kron(plus, ket_m) + sign * np.kron(minus, ket_p)
    return v / np.linalg.norm(v)


def lowest(h, k):
    w, v = eigh(h)
    return w[:k], v[:, :k]


def sweep(n, T, steps, psi, om0=0.0, om1=1.0):
    dt = T / steps
    for s in range(steps):
        om = om0 + (om1 - om0) * (s + 0.5) / steps
        psi = expm(-1j * rabi(n, om) * dt) @ psi
    return psi


def best_theta(psi, a, b, n):
    cg, ce = np.vdot(basis(n, 0, 0), psi), np.vdot(basis(n, 1, 0), psi)
    f = lambda th: -abs(np.conj(a) * cg + np.conj(b) * np.exp(-1j * th) * ce) ** 2
    grid = np.linspace(0, 2 * np.pi, 4001)
    th0 = grid[np.argmin([f(t) for t in grid])]
    r = minimize(lambda x: f(x[0]), [th0], tol=1e-14, method="Nelder-Mead",
                 options={"xatol": 1e-12, "fatol": 1e-16})
    return -r.fun, r.x[0] % (2 * np.pi)


def closed(n=30, T=105.0, steps=2000):
    print("== spectrum n_fock=%d" % n)
    for om in (0.5, 1.0):
        w, v = lowest(rabi(n, om), 4)
        print("Omega=%.1f E=%s" % (om, " ".join("%.15f" % x for x in w)))
    for om in (0.8, 0.9, 1.0):
        w, v = lowest(rabi(n, om), 2)
        fg = abs(np.vdot(cat(n, om, "G"), v[:, 0])) ** 2
        fe = abs(np.vdot(cat(n, om, "E"), v[:, 1])) ** 2
        print("cat Omega=%.1f F_G=%.10f F_E=%.10f" % (om, fg, fe))
    a = b = 1 / math.sqrt(2)
    psi0 = a * basis(n, 0, 0) + b * basis(n, 1, 0)
    for TT in (T, 120.0):
        stored = sweep(n, TT, steps, psi0, 0.0, 1.0)
        out = sweep(n, TT, steps, stored, 1.0, 0.0)
        F, th = best_theta(out, a, b, n)
        print("roundtrip T=%g F_s=%.12f theta_opt=%.10f" % (TT, F, th))
    for TT in (10.5, 31.5, 105.0):
        st = sweep(n, TT, steps, basis(n, 0, 0), 0.0, 1.0)
        _, v = lowest(rabi(n, 1.0), 1)
        print("storage |g0> T=%g |<G|psi>|^2=%.12f" % (TT, abs(np.vdot(v[:, 0], st)) ** 2))


def dressed_rates(h, n, k, gam, weg, density):
    a, sx, sy, sz, _ = ops(n)
    chans = [(gam[0], sx), (gam[1], sy), (gam[2], sz), (gam[3], a + a.conj().T)]
    w, v = lowest(h, k)
    rate = np.zeros((k, k))
    for g, op in chans:
        m = v.conj().T @ op @ v
        for kk in range(k):
            for j in range(k):
                gap = w[kk] - w[j]
                if gap > 0:
                    rate[j, kk] += g * density(gap) * abs(m[j, kk]) ** 2
    return v, rate


def lindblad_rhs(rho, h, v, rate):
    dr = -1j * (h @ rho - rho @ h)
    rp = v.conj().T @ rho @ v
    gain = rate @ np.real(np.diag(rp))          # sum_k rate[j,k] rho'_kk
    loss = rate.sum(axis=0)                      # sum_j rate[j,k]
    G = v @ np.diag(loss) @ v.conj().T
    return dr + v @ np.diag(gain) @ v.conj().T - 0.5 * (G @ rho + rho @ G)


def master_sweep(n, T, steps, rho, om0, om1, gam, k, density, sub=2):
    dt = T / steps / sub
    for s in range(steps * sub):
        t = (s + 0.5) * dt
        om = om0 + (om1 - om0) * t / T
        h = rabi(n, om)
        v, rate = dressed_rates(h, n, k, gam, 0.1, density)
        tt = [s * dt, t, t, (s + 1) * dt]
        hs = [rabi(n, om0 + (om1 - om0) * x / T) for x in tt]
        k1 = lindblad_rhs(rho, hs[0], v, rate)
        k2 = lindblad_rhs(rho + 0.5 * dt * k1, hs[1], v, rate)
        k3 = lindblad_rhs(rho + 0.5 * dt * k2, hs[2], v, rate)
        k4 = lindblad_rhs(rho + dt * k3, hs[3], v, rate)
        rho = rho + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return rho


def noisy(n=20, T=105.0, steps=2000, k=12):
    weg = 0.1
    gam = (1e-3 * weg, 1e-3 * weg, 1e-3 * weg, 1e-4 * weg)
    a = b = 1 / math.sqrt(2)
    psi0 = a * basis(n, 0, 0) + b * basis(n, 1, 0)
    for name, dens in (("flat", lambda g: 1.0), ("ohmic", lambda g: g / weg)):
        rho = np.outer(psi0, psi0.conj())
        rho = master_sweep(n, T, steps, rho, 0.0, 1.0, gam, k, dens)
        rho = master_sweep(n, T, steps, rho, 1.0, 0.0, gam, k, dens)
        g, e = 0, n
        coh = np.conj(a) * b * rho[g, e]
        F = abs(a) ** 2 * rho[g, g].real + abs(b) ** 2 * rho[e, e].real + 2 * abs(coh)
        print("noisy %s n_fock=%d F_s=%.10f trace=%.3e" % (name, n, F, abs(np.trace(rho) - 1)))


def two_cell(n=15, T=105.0, steps=2000):
    d = 2 * n
    I = identity(d, format="csr")
    def joint(om):
        h = csr_matrix(rabi(n, om))
        return skron(h, I) + skron(I, h)
    ge = np.kron(basis(n, 0, 0), basis(n, 1, 0))
    eg = np.kron(basis(n, 1, 0), basis(n, 0, 0))
    psi0 = (ge + eg) / math.sqrt(2)
    psi = psi0.copy()
    dt = T / steps
    for s in range(steps):
        psi = expm_multiply(-1j * dt * joint((s + 0.5) / steps), psi)
    stored = psi
    w, v = lowest(rabi(n, 1.0), 2)
    G, E = v[:, 0], v[:, 1]
    def fit(amp_fn):
        best = (0, 0, 0)
        for t1 in np.linspace(0, 2 * np.pi, 181):
            for t2 in np.linspace(0, 2 * np.pi, 181):
                f = amp_fn(t1, t2)
                if f > best[0]:
                    best = (f, t1, t2)
        r = minimize(lambda x: -amp_fn(*x), best[1:], method="Nelder-Mead",
                     options={"xatol": 1e-12, "fatol": 1e-16})
        return -r.fun
    sge = np.vdot(np.kron(G, E), stored)
    seg = np.vdot(np.kron(E, G), stored)
    tgt = lambda t1, t2: abs((np.exp(-1j * t2) * sge + np.exp(-1j * t1) * seg) / math.sqrt(2)) ** 2
    print("two-cell stored target F=%.10f" % fit(tgt))
    for s in range(steps):
        psi = expm_multiply(-1j * dt * joint(1.0 - (s + 0.5) / steps), psi)
    cge = np.vdot(ge, psi)
    ceg = np.vdot(eg, psi)
    dec = lambda t1, t2: abs((np.exp(-1j * t2) * cge + np.exp(-1j * t1) * ceg) / math.sqrt(2)) ** 2
    print("two-cell round trip F_bar=%.10f" % fit(dec))


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--noisy", action="store_true")
    ap.add_argument("--two-cell", action="store_true")
    args = ap.parse_args()
    closed()
    if args.noisy:
        noisy()
    if args.two_cell:
        two_cell()
