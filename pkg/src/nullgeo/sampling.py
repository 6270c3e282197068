"""Random test-data generators shared by the invariant suite and the tests.

The Codazzi-compatible pair construction C0 = S0^{-1} S1 (S0 invertible
symmetric, S1 symmetric) makes every product A S0^{-1} (S1 S0^{-1})^k
symmetric, so {S0, S1} is compatible with C0 for all powers.
"""
from __future__ import annotations

import numpy as np

from .core import ShapeOperatorSet, SplittingTensor

__all__ = [
    "random_splitting_tensor",
    "random_symmetric",
    "random_invertible_symmetric",
    "random_compatible_pair",
]


def random_splitting_tensor(rng: np.random.Generator, q: int) -> np.ndarray:
    """Dense q x q matrix with entries uniform in [-1, 1]."""
    return rng.uniform(-1.0, 1.0, size=(q, q))


def random_symmetric(rng: np.random.Generator, q: int) -> np.ndarray:
    m = rng.uniform(-1.0, 1.0, size=(q, q))
    return 0.5 * (m + m.T)


def random_invertible_symmetric(rng: np.random.Generator, q: int) -> np.ndarray:
    """Symmetric matrix with eigenvalues bounded away from zero (|w| in
    [0.3, 1.3], random signs)."""
    g = rng.normal(size=(q, q))
    Q, _ = np.linalg.qr(g)
    w = rng.uniform(0.3, 1.3, size=q) * rng.choice([-1.0, 1.0], size=q)
    return (Q * w) @ Q.T


def random_compatible_pair(rng: np.random.Generator, q: int, p: int = 1):
    """(A0, C0) with A0 Codazzi compatible with C0.

    A0 holds S0 and, for p > 1, further symmetric operators S0^{-1}-matched
    via the same construction (each S_i symmetric with C0 = S0^{-1} S1).
    """
    S0 = random_invertible_symmetric(rng, q)
    S1 = random_symmetric(rng, q)
    C0 = np.linalg.solve(S0, S1)
    ops = [S0, S1][: max(p, 1)]
    while len(ops) < p:
        # S0 * polynomial in C0 stays symmetric and compatible
        coef = rng.uniform(-1.0, 1.0, size=q)
        m = np.zeros((q, q))
        acc = np.eye(q)
        for ck in coef:
            m = m + ck * (S0 @ acc)
            acc = acc @ C0
        ops.append(0.5 * (m + m.T))
    return ShapeOperatorSet(tuple(ops)), SplittingTensor(C0)
