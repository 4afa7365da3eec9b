#!/usr/bin/env python3
"""Brute-force reference evaluator for skew-information uncertainty bounds.

Everything here is computed directly from the raw definitions with numpy:
matrix square roots go through numpy's eigh, permutation searches are
exhaustive (itertools), and no code is shared with the Rust library. The
output JSON freezes both the instances (full matrices) and the expected
values, so the library test suite can compare against an implementation
path that is independent end to end.

Run from the repository root:

    python3 scripts/oracle.py

writes crates/wyur/tests/data/oracle_expected.json and prints a handful of
reference values used as literals in unit tests.
"""

import itertools
import json
import math
import os

import numpy as np

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def sqrtm_psd(rho):
    w, v = np.linalg.eigh(rho)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def tilde(sqrt_rho, k):
    return sqrt_rho @ k - k @ sqrt_rho


def skew_op(sqrt_rho, k):
    t = tilde(sqrt_rho, k)
    return 0.5 * np.trace(t.conj().T @ t).real


def skew_channel(sqrt_rho, kraus):
    return sum(skew_op(sqrt_rho, k) for k in kraus)


def vec(m):
    return m.flatten(order="F")


def desc_perm(v):
    # stable argsort by modulus, largest first
    return np.argsort(-np.abs(v), kind="stable")


def zhou(ta, tb):
    total = 0.0
    for x in ta:
        for y in tb:
            total += abs(np.trace(x.conj().T @ y)) ** 2
    return 0.25 * total


def thm1_proof(ta, tb):
    total = 0.0
    for x in ta:
        for y in tb:
            s = np.sum(np.abs(x) * np.abs(y))
            total += s * s
    return 0.25 * total


def thm1_stmt(ta, tb):
    total = 0.0
    for x in ta:
        for y in tb:
            total += np.sum(np.abs(x) ** 2 * np.abs(y) ** 2)
    return 0.25 * total


def thm2(ta, tb):
    total = 0.0
    for x in ta:
        for y in tb:
            a = np.sort(np.abs(vec(x)))[::-1]
            b = np.sort(np.abs(vec(y)))[::-1]
            s = np.sum(a * b)
            total += s * s
    return 0.25 * total


def pad(kraus_a, kraus_b, dim):
    n = max(len(kraus_a), len(kraus_b))
    z = np.zeros((dim, dim), dtype=complex)
    a = list(kraus_a) + [z] * (n - len(kraus_a))
    b = list(kraus_b) + [z] * (n - len(kraus_b))
    return a, b


def fu(sqrt_rho, kraus_a, kraus_b, dim, per_term):
    """max over permutations of (1/2) sum_i I(L_i +/- K_pi(i))."""
    la, kb = pad(kraus_a, kraus_b, dim)
    ta = [tilde(sqrt_rho, k) for k in la]
    tb = [tilde(sqrt_rho, k) for k in kb]

    def info(t):
        return 0.5 * np.sum(np.abs(t) ** 2)

    n = len(la)
    best = -math.inf
    for perm in itertools.permutations(range(n)):
        if per_term:
            val = 0.5 * sum(
                max(info(ta[i] + tb[perm[i]]), info(ta[i] - tb[perm[i]]))
                for i in range(n)
            )
        else:
            plus = 0.5 * sum(info(ta[i] + tb[perm[i]]) for i in range(n))
            minus = 0.5 * sum(info(ta[i] - tb[perm[i]]) for i in range(n))
            val = max(plus, minus)
        if val > best:
            best = val
    return best


def thm3(sqrt_rho, kraus_a, kraus_b, dim, descending):
    """Normalized double sum; identity or descending self-pairing."""
    la, kb = pad(kraus_a, kraus_b, dim)
    ta = [tilde(sqrt_rho, k) for k in la]
    tb = [tilde(sqrt_rho, k) for k in kb]
    n = len(la)

    def perm_term(v):
        a = np.abs(v)
        if descending:
            return float(np.sum(a * a[desc_perm(v)]))
        return float(np.sum(a * a))

    total = 0.0
    for x in ta:
        for y in tb:
            m = vec(x + y)
            w = vec(x - y)
            total += 0.25 * (perm_term(m) + perm_term(w))
    return total / n


def evaluate(rho, kraus_a, kraus_b):
    sr = sqrtm_psd(rho)
    dim = rho.shape[0]
    ta = [tilde(sr, k) for k in kraus_a]
    tb = [tilde(sr, k) for k in kraus_b]
    ia = skew_channel(sr, kraus_a)
    ib = skew_channel(sr, kraus_b)
    return {
        "skew_a": ia,
        "skew_b": ib,
        "product_uncertainty": ia * ib,
        "sum_uncertainty": ia + ib,
        "zhou": zhou(ta, tb),
        "thm1_proof": thm1_proof(ta, tb),
        "thm1_stmt": thm1_stmt(ta, tb),
        "thm2": thm2(ta, tb),
        "fu_perterm": fu(sr, kraus_a, kraus_b, dim, per_term=True),
        "fu_global": fu(sr, kraus_a, kraus_b, dim, per_term=False),
        "thm3_id": thm3(sr, kraus_a, kraus_b, dim, descending=False),
        "thm3_desc": thm3(sr, kraus_a, kraus_b, dim, descending=True),
    }


def ring_state(theta):
    r = np.array([math.sqrt(3) / 2 * math.cos(theta),
                  math.sqrt(3) / 2 * math.sin(theta),
                  0.25])
    return 0.5 * (I2 + r[0] * SX + r[1] * SY + r[2] * SZ)


def phase_damping(q):
    l1 = np.array([[1, 0], [0, math.sqrt(1 - q)]], dtype=complex)
    l2 = np.array([[0, 0], [0, math.sqrt(q)]], dtype=complex)
    return [l1, l2]


def bit_flip(q):
    return [math.sqrt(q) * I2, math.sqrt(1 - q) * SX]


def rotation_unitaries():
    c, s = math.cos(math.pi / 8), math.sin(math.pi / 8)
    u = np.array([[c, s], [-s, c]], dtype=complex)
    v = np.array([[np.exp(1j * math.pi / 8), 0],
                  [0, np.exp(-1j * math.pi / 8)]], dtype=complex)
    return u, v


def random_state(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_channel(rng, dim, n_kraus):
    g = rng.standard_normal((dim * n_kraus, dim)) + 1j * rng.standard_normal(
        (dim * n_kraus, dim)
    )
    q, _ = np.linalg.qr(g)
    return [q[i * dim:(i + 1) * dim, :] for i in range(n_kraus)]


def mat_json(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def main():
    u, v = rotation_unitaries()
    instances = []

    def add(name, rho, ka, kb, la, lb):
        instances.append({
            "name": name,
            "dim": int(rho.shape[0]),
            "rho": mat_json(rho),
            "kraus_a": [mat_json(k) for k in ka],
            "kraus_b": [mat_json(k) for k in kb],
            "label_a": la,
            "label_b": lb,
            "expected": {k: float(x) for k, x in evaluate(rho, ka, kb).items()},
        })

    pd05, bf05 = phase_damping(0.5), bit_flip(0.5)
    add("ring_theta0_pd_bf_q05", ring_state(0.0), pd05, bf05,
        "phase_damping(0.5)", "bit_flip(0.5)")
    add("ring_theta_pi4_pd_bf_q05", ring_state(math.pi / 4), pd05, bf05,
        "phase_damping(0.5)", "bit_flip(0.5)")
    add("ring_theta_pi2_pd_bf_q05", ring_state(math.pi / 2), pd05, bf05,
        "phase_damping(0.5)", "bit_flip(0.5)")
    add("ring_theta_pi4_pd025_bf075", ring_state(math.pi / 4),
        phase_damping(0.25), bit_flip(0.75),
        "phase_damping(0.25)", "bit_flip(0.75)")
    add("ring_theta0_unitaries", ring_state(0.0), [u], [v], "rot_y_pi8", "rot_z_pi8")
    add("ring_theta_pi4_unitaries", ring_state(math.pi / 4), [u], [v],
        "rot_y_pi8", "rot_z_pi8")
    add("ring_theta5_unitaries", ring_state(5.0), [u], [v], "rot_y_pi8", "rot_z_pi8")
    add("maximally_mixed_pd_bf", 0.5 * I2, pd05, bf05,
        "phase_damping(0.5)", "bit_flip(0.5)")
    add("pure_north_unitaries", np.array([[1, 0], [0, 0]], dtype=complex),
        [u], [v], "rot_y_pi8", "rot_z_pi8")

    rng = np.random.default_rng(20240817)
    combos = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3),
              (4, 1), (4, 2), (4, 3), (2, 2), (3, 2)]
    for idx, (dim, n_kraus) in enumerate(combos):
        rho = random_state(rng, dim)
        ka = random_channel(rng, dim, n_kraus)
        kb = random_channel(rng, dim, n_kraus)
        add(f"random_d{dim}_n{n_kraus}_{idx}", rho, ka, kb,
            f"random_a_{idx}", f"random_b_{idx}")

    out = {
        "generator": "scripts/oracle.py",
        "instances": instances,
    }
    here = os.path.dirname(os.path.abspath(__file__))
    path = os.path.join(here, "..", "crates", "wyur", "tests", "data",
                        "oracle_expected.json")
    with open(path, "w") as f:
        json.dump(out, f, indent=1)
        f.write("\n")
    print(f"wrote {os.path.normpath(path)} with {len(instances)} instances")

    # Reference values quoted as literals in the unit tests.
    print("\n-- reference values --")
    ev = evaluate(ring_state(math.pi / 4), pd05, bf05)
    for key in ("skew_a", "skew_b", "product_uncertainty", "sum_uncertainty",
                "zhou", "thm1_proof", "thm1_stmt", "thm2"):
        print(f"ring(pi/4) pd/bf q=0.5  {key:>20} = {ev[key]:.17g}")
    ev = evaluate(ring_state(math.pi / 4), [u], [v])
    for key in ("sum_uncertainty", "fu_perterm", "fu_global", "thm3_id", "thm3_desc"):
        print(f"ring(pi/4) U,V          {key:>20} = {ev[key]:.17g}")
    ev = evaluate(ring_state(0.0), [u], [v])
    for key in ("product_uncertainty", "zhou", "thm1_proof", "thm2"):
        print(f"ring(0) U,V             {key:>20} = {ev[key]:.17g}")


if __name__ == "__main__":
    main()
