import math

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def rk4_second_order(c, C0, t_end, n_steps=2000):
    """Independent RK4 integration of J'' + c J = 0 with J(0)=I, J'(0)=-C0,
    as a first-order system.  Used as an oracle for the closed form."""
    q = C0.shape[0]
    J = np.eye(q)
    dJ = -C0.copy()
    h = t_end / n_steps

    def f(state):
        J, dJ = state
        return dJ, -c * J

    for _ in range(n_steps):
        k1 = f((J, dJ))
        k2 = f((J + 0.5 * h * k1[0], dJ + 0.5 * h * k1[1]))
        k3 = f((J + 0.5 * h * k2[0], dJ + 0.5 * h * k2[1]))
        k4 = f((J + h * k3[0], dJ + h * k3[1]))
        J = J + (h / 6.0) * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        dJ = dJ + (h / 6.0) * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
    return J, dJ


def det_sampling_bmax(c, C0, scan_to=10.0, step=1e-3, bisect_tol=1e-12):
    """Dense det-sampling of the closed-form Jacobi matrix with bisection
    refinement.  Independent of the eigenvalue route in the library."""
    q = C0.shape[0]
    eye = np.eye(q)

    def scalars(t):
        if c > 0:
            a = math.sqrt(c)
            return math.cos(a * t), math.sin(a * t) / a
        if c < 0:
            a = math.sqrt(-c)
            return math.cosh(a * t), math.sinh(a * t) / a
        return 1.0, t

    def det(t):
        u, v = scalars(t)
        return float(np.linalg.det(u * eye - v * C0))

    ts = np.arange(0.0, scan_to + step, step)
    u = np.cos(math.sqrt(c) * ts) if c > 0 else (np.cosh(math.sqrt(-c) * ts) if c < 0 else np.ones_like(ts))
    v = (
        np.sin(math.sqrt(c) * ts) / math.sqrt(c)
        if c > 0
        else (np.sinh(math.sqrt(-c) * ts) / math.sqrt(-c) if c < 0 else ts)
    )
    J = u[:, None, None] * eye - v[:, None, None] * C0
    dets = np.linalg.det(J)
    sign_flip = np.flatnonzero(np.sign(dets[:-1]) != np.sign(dets[1:]))
    if sign_flip.size == 0:
        return math.inf
    lo = float(ts[sign_flip[0]])
    hi = float(ts[sign_flip[0] + 1])
    flo = det(lo)
    while hi - lo > bisect_tol:
        mid = 0.5 * (lo + hi)
        fm = det(mid)
        if fm == 0.0:
            return mid
        if (flo < 0) == (fm < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)
