"""Brute-force reference implementations used as independent test oracles.

Everything here builds explicit full-space matrices or loops over basis
labels; none of it shares code with the vnmlab gate kernels.
"""

import itertools

import numpy as np


def bits_msb(value, width):
    return [(value >> (width - 1 - i)) & 1 for i in range(width)]


def global_index(values, widths):
    """Index from per-register values, registers in order, each MSB first."""
    bits = []
    for v, w in zip(values, widths):
        bits += bits_msb(v, w)
    idx = 0
    for b in bits:
        idx = 2 * idx + b
    return idx


def hadamard_matrix_entry(a, x):
    """(-1)^(a.x) with a.x the mod-2 inner product, by explicit bit loop."""
    s = 0
    while a or x:
        s ^= (a & 1) & (x & 1)
        a >>= 1
        x >>= 1
    return -1 if s else 1


def register_operator(widths, which, op):
    """Full-space matrix acting as ``op`` on register ``which`` only."""
    mats = [np.eye(1 << w) for w in widths]
    mats[which] = op
    full = np.array([[1.0 + 0j]])
    for m in mats:
        full = np.kron(full, m)
    return full


def walsh_matrix(width):
    n = 1 << width
    return np.array([[hadamard_matrix_entry(a, x) for a in range(n)] for x in range(n)]) / np.sqrt(n)


def dft_matrix(width):
    n = 1 << width
    return np.array([[np.exp(2j * np.pi * x * z / n) for x in range(n)] for z in range(n)]) / np.sqrt(n)


def oracle_permutation(widths, in_reg, tgt_reg, table):
    """Permutation matrix |x>|y> -> |x>|y ^ f(x)> by enumerating every label."""
    dim = 1 << sum(widths)
    m = np.zeros((dim, dim))
    for values in itertools.product(*[range(1 << w) for w in widths]):
        new = list(values)
        new[tgt_reg] = values[tgt_reg] ^ table[values[in_reg]]
        m[global_index(new, widths), global_index(values, widths)] = 1
    return m


def partial_trace_loops(rho, widths, keep):
    """Reduced density matrix by summing over traced labels explicitly."""
    keep = sorted(keep)
    traced = [i for i in range(len(widths)) if i not in keep]
    kdims = [1 << widths[i] for i in keep]
    kdim = int(np.prod(kdims))
    out = np.zeros((kdim, kdim), dtype=complex)
    for kv in itertools.product(*[range(d) for d in kdims]):
        for kw in itertools.product(*[range(d) for d in kdims]):
            acc = 0
            for tv in itertools.product(*[range(1 << widths[i]) for i in traced]):
                a = [0] * len(widths)
                b = [0] * len(widths)
                for i, v in zip(keep, kv):
                    a[i] = v
                for i, v in zip(keep, kw):
                    b[i] = v
                for i, v in zip(traced, tv):
                    a[i] = v
                    b[i] = v
                acc += rho[global_index(a, widths), global_index(b, widths)]
            out[global_index(kv, [widths[i] for i in keep]), global_index(kw, [widths[i] for i in keep])] = acc
    return out


def born_loops(psi, widths, reg):
    dist = {}
    for values in itertools.product(*[range(1 << w) for w in widths]):
        p = abs(psi[global_index(values, widths)]) ** 2
        if p > 1e-14:
            dist[values[reg]] = dist.get(values[reg], 0.0) + p
    return dist
