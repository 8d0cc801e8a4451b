"""Finite-difference weights on arbitrary stencils (Fornberg's recursion)."""

import numpy as np


def fornberg_weights(z, x, max_order):
    """Weights for derivatives ``0..max_order`` at points ``z``.

    ``z`` has shape ``(P,)`` and ``x`` the stencil nodes, shape ``(P, m)``.
    Returns ``w`` of shape ``(max_order + 1, P, m)`` such that
    ``sum_j w[k, p, j] * f(x[p, j])`` approximates ``f^(k)(z[p])``.
    """
    z = np.asarray(z, dtype=float)
    x = np.asarray(x, dtype=float)
    P, m = x.shape
    c = np.zeros((max_order + 1, P, m))
    c1 = np.ones(P)
    c4 = x[:, 0] - z
    c[0, :, 0] = 1.0
    for i in range(1, m):
        mn = min(i, max_order)
        c2 = np.ones(P)
        c5 = c4
        c4 = x[:, i] - z
        for j in range(i):
            c3 = x[:, i] - x[:, j]
            c2 = c2 * c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, :, i] = c1 * (k * c[k - 1, :, i - 1] - c5 * c[k, :, i - 1]) / c2
                c[0, :, i] = -c1 * c5 * c[0, :, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, :, j] = (c4 * c[k, :, j] - k * c[k - 1, :, j]) / c3
            c[0, :, j] = c4 * c[0, :, j] / c3
        c1 = c2
    return c


def stencil_starts(nodes, z, width):
    """Start index of the ``width``-point stencil nearest to each ``z``.

    Stencils are centred on the nearest node and shifted inwards (one-sided)
    near the ends of ``nodes``.
    """
    n = len(nodes)
    idx = np.searchsorted(nodes, z)
    idx = np.clip(idx, 1, n - 1)
    nearest = np.where(np.abs(z - nodes[idx - 1]) <= np.abs(nodes[idx] - z), idx - 1, idx)
    return np.clip(nearest - width // 2, 0, n - width)


def derivative_on_grid(nodes, values, order=1, width=5):
    """Derivative of sampled ``values`` at the ``nodes`` themselves."""
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    start = stencil_starts(nodes, nodes, width)
    cols = start[:, None] + np.arange(width)[None, :]
    w = fornberg_weights(nodes, nodes[cols], order)[order]
    return np.einsum("pj,pj...->p...", w, values[cols])
