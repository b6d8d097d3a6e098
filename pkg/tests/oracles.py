"""Independent reference computations used only by the tests.

Nothing here calls the library's partial-trace or enumerator code: traces are
built as explicit ``numpy.einsum`` index strings over the full tensor.
"""

from __future__ import annotations

import itertools
import string

import numpy as np


def _letters(k):
    return string.ascii_letters[:k]


def trace_pair(m1, m2, dims, traced):
    """``Tr(Tr_T(m1) Tr_T(m2))`` for ``T = traced`` (0-based factor indices) by one einsum.

    Works for any numeric dtype, so int64 arrays give exact answers.
    """
    n = len(dims)
    L = _letters(4 * n)
    r1, c1, d2 = L[:n], list(L[n:2 * n]), list(L[2 * n:3 * n])
    r2 = []
    for i in range(n):
        if i in traced:
            c1[i] = r1[i]          # trace inside m1
            r2.append(d2[i])
        else:
            r2.append(c1[i])       # m1 column feeds m2 row
    c2 = [d2[i] if i in traced else r1[i] for i in range(n)]
    subscripts = f"{r1}{''.join(c1)},{''.join(r2)}{''.join(c2)}->"
    t1 = m1.reshape(tuple(dims) * 2)
    t2 = m2.reshape(tuple(dims) * 2)
    return np.einsum(subscripts, t1, t2)


def exact_trace_pair(re1, im1, re2, im2, dims, traced):
    """Gaussian-integer version of :func:`trace_pair` on int64 parts; returns (re, im)."""
    rr = trace_pair(re1, re2, dims, traced) - trace_pair(im1, im2, dims, traced)
    ii = trace_pair(re1, im2, dims, traced) + trace_pair(im1, re2, dims, traced)
    return int(rr), int(ii)


def partial_trace_loops(m, dims, traced):
    """Partial trace by explicit summation over basis labels (slow; tiny inputs only)."""
    n = len(dims)
    keep = [i for i in range(n) if i not in traced]
    kd = [dims[i] for i in keep]
    td = [dims[i] for i in traced]
    out = np.zeros((int(np.prod(kd)), int(np.prod(kd))), dtype=complex)

    def index(labels):
        k = 0
        for lab, d in zip(labels, dims):
            k = k * d + lab
        return k

    for a, kl in enumerate(itertools.product(*[range(d) for d in kd])):
        for b, kr in enumerate(itertools.product(*[range(d) for d in kd])):
            s = 0
            for tl in itertools.product(*[range(d) for d in td]):
                left = [0] * n
                right = [0] * n
                for pos, i in enumerate(keep):
                    left[i], right[i] = kl[pos], kr[pos]
                for pos, i in enumerate(traced):
                    left[i] = right[i] = tl[pos]
                s += m[index(left), index(right)]
            out[a, b] = s
    return out


def pauli_matrices():
    return {
        "I": np.eye(2, dtype=complex),
        "X": np.array([[0, 1], [1, 0]], dtype=complex),
        "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
        "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    }


def kron_word(word):
    P = pauli_matrices()
    out = np.eye(1, dtype=complex)
    for c in word:
        out = np.kron(out, P[c])
    return out


def dense_sl_weights(m1, m2, n):
    """Shor-Laflamme A_i, B_i by summing over all 4^n Pauli words with Kronecker products."""
    A = [0j] * (n + 1)
    B = [0j] * (n + 1)
    for word in itertools.product("IXYZ", repeat=n):
        E = kron_word(word)
        w = sum(c != "I" for c in word)
        A[w] += np.trace(E @ m1) * np.trace(E @ m2)
        B[w] += np.trace(E @ m1 @ E @ m2)
    return A, B


def all_factorizations(max_n=4, choices=(2, 3)):
    for n in range(1, max_n + 1):
        yield from itertools.product(choices, repeat=n)
