"""Coordinate exterior algebra on R^4 and central finite differences.

A 2-form is stored as its antisymmetric coefficient matrix ``M`` with
``omega(u, v) = u @ M @ v``, so ``omega = sum_{i<j} M[i, j] dx^i ^ dx^j``.
Interior products contract into the first slot: ``iota(X) omega = X @ M``.
"""

from __future__ import annotations

import itertools

import numpy as np

FD_STEP = 1e-5


def _levi_civita(n: int) -> np.ndarray:
    eps = np.zeros((n,) * n)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        eps[perm] = -1.0 if inv % 2 else 1.0
    return eps


LEVI_CIVITA_4 = _levi_civita(4)


def hodge_star(m: np.ndarray) -> np.ndarray:
    """Flat-metric Hodge star of a 2-form, orientation ``dx^0 dx^1 dx^2 dx^3``."""
    return 0.5 * np.einsum("ijkl,...ij->...kl", LEVI_CIVITA_4, m)


def pfaffian4(m: np.ndarray) -> np.ndarray:
    return m[..., 0, 1] * m[..., 2, 3] - m[..., 0, 2] * m[..., 1, 3] + m[..., 0, 3] * m[..., 1, 2]


def wedge_two_two(m: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Coefficient of ``dx^0123`` in ``omega ^ eta``."""
    return 0.25 * np.einsum("ijkl,...ij,...kl->...", LEVI_CIVITA_4, m, n)


def wedge_one_two_one(a: np.ndarray, m: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Coefficient of ``dx^0123`` in ``a ^ omega ^ b``."""
    return 0.5 * np.einsum("ijkl,...i,...jk,...l->...", LEVI_CIVITA_4, a, m, b)


def interior(x: np.ndarray, m: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...ij->...j", x, m)


def wedge_covectors(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Coefficient matrix of ``a ^ b``."""
    return np.einsum("...i,...j->...ij", a, b) - np.einsum("...j,...i->...ij", a, b)


def partials(field, p, h: float = FD_STEP) -> np.ndarray:
    """Central-difference partials; result[i] = d field / d p_i."""
    p = np.asarray(p, dtype=float)
    out = []
    for i in range(p.shape[-1]):
        e = np.zeros_like(p)
        e[..., i] = h
        out.append((np.asarray(field(p + e)) - np.asarray(field(p - e))) / (2 * h))
    return np.stack(out)


def exterior_derivative_1form(field, p, h: float = FD_STEP) -> np.ndarray:
    """``(d lambda)[i, j] = d_i lambda_j - d_j lambda_i`` by central differences."""
    d = partials(field, p, h)
    return d - d.T


def exterior_derivative_2form(field, p, h: float = FD_STEP) -> np.ndarray:
    """Components ``(d omega)_{ijk}`` for ``i<j<k`` in lexicographic order."""
    d = partials(field, p, h)
    comps = []
    for i, j, k in itertools.combinations(range(d.shape[0]), 3):
        comps.append(d[i, j, k] + d[j, k, i] + d[k, i, j])
    return np.array(comps)


def gradient(f, p, h: float = FD_STEP) -> np.ndarray:
    return partials(f, p, h)


def hessian(f, p, h: float = FD_STEP) -> np.ndarray:
    """Central-difference Hessian of a scalar function."""
    p = np.asarray(p, dtype=float)
    n = p.shape[-1]
    out = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            ei = np.zeros(n)
            ej = np.zeros(n)
            ei[i] = h
            ej[j] = h
            v = (
                f(p + ei + ej) - f(p + ei - ej) - f(p - ei + ej) + f(p - ei - ej)
            ) / (4 * h * h)
            out[i, j] = out[j, i] = v
    return out
