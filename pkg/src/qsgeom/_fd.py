"""
Finite-difference utilities shared by the geometry and solver modules.

Stencil weights are generated with Fornberg's algorithm, which handles
uniform and non-uniform node sets alike.
"""

import functools

import numpy as np


def fd_weights(x0, x, m):
    """
    Finite-difference weights at x0 for derivatives 0..m from nodes x.

    Fornberg's recursive algorithm (Mathematics of Computation, 1988).

    Args:
        x0: evaluation point
        x: 1-D array of distinct nodes
        m: highest derivative order

    Returns:
        (m+1, len(x)) array; row k holds the weights of the k-th derivative.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    C = np.zeros((m + 1, n))
    c1 = 1.0
    c4 = x[0] - x0
    C[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - x0
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    C[k, i] = c1 * (k * C[k - 1, i - 1] - c5 * C[k, i - 1]) / c2
                C[0, i] = -c1 * c5 * C[0, i - 1] / c2
            for k in range(mn, 0, -1):
                C[k, j] = (c4 * C[k, j] - k * C[k - 1, j]) / c3
            C[0, j] = c4 * C[0, j] / c3
        c1 = c2
    return C


def diff_matrix(x, order, stencil=3):
    """
    Dense differentiation matrix on arbitrary nodes x.

    Each row uses a centered window of `stencil` nodes (shifted one-sided
    near the ends), so the matrix is banded with small bandwidth.

    Args:
        x: strictly increasing nodes
        order: derivative order (1 or 2)
        stencil: number of nodes per row (odd)

    Returns:
        (n, n) ndarray
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    if stencil > n:
        raise ValueError("stencil larger than node count")
    half = stencil // 2
    D = np.zeros((n, n))
    for i in range(n):
        lo = min(max(i - half, 0), n - stencil)
        idx = np.arange(lo, lo + stencil)
        w = fd_weights(x[i], x[idx], order)
        D[i, idx] = w[order]
        # force exact annihilation of constants (row sums are zero only up
        # to roundoff otherwise, which pollutes fixed-point computations)
        D[i, i] -= D[i, idx].sum()
    return D


@functools.lru_cache(maxsize=64)
def _uniform_diff_cached(n, a, b, order, stencil):
    x = np.linspace(a, b, n)
    return diff_matrix(x, order, stencil)


def uniform_diff_matrix(n, a, b, order, stencil=7):
    """Cached differentiation matrix for n uniform nodes on [a, b]."""
    return _uniform_diff_cached(int(n), float(a), float(b), int(order),
                                int(stencil))


def even_extension_value(delta, values, n_terms=2):
    """
    Value at delta = 0 of an even function sampled at offsets delta > 0.

    Fits c0 + c1 d^2 + ... through the first len(delta) points and
    returns c0.  Used to close fields at coordinate poles.
    """
    delta = np.asarray(delta, dtype=float)
    V = np.vander(delta**2, n_terms, increasing=True)
    coef, *_ = np.linalg.lstsq(V, np.asarray(values, dtype=float), rcond=None)
    return coef[0]


def even_second_derivative(delta, dvalues):
    """
    Second derivative at the pole of an even function.

    `dvalues` are F(delta) - F(0) at positive offsets `delta`; the odd part
    is assumed to vanish so F = F0 + b d^2 + c d^4, and F'' (pole) = 2 b.
    """
    delta = np.asarray(delta, dtype=float)
    V = np.column_stack([delta**2, delta**4])
    coef, *_ = np.linalg.lstsq(V, np.asarray(dvalues, dtype=float), rcond=None)
    return 2.0 * coef[0]
