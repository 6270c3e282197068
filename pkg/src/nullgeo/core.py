"""Closed-form evolution of the splitting tensor and shape operators along a
geodesic tangent to a totally geodesic nullity distribution, together with
fixed-step Runge-Kutta oracles for the underlying ODEs.

Everything is expressed in a parallel orthonormal frame along the geodesic, so
parallel transport is the identity in coordinates.  All quantities are plain
real matrices; the ambient space form enters only through its curvature
constant ``c``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "NullityError",
    "SingularJacobi",
    "SpaceFormCurvature",
    "NullityProfile",
    "SplittingTensor",
    "ShapeOperatorSet",
    "JacobiTensor",
    "GeodesicDomain",
    "DomainKind",
    "EvolutionState",
    "jacobi_tensor",
    "jacobi_derivative",
    "max_invertible_time",
    "splitting_tensor_at",
    "shape_operator_at",
    "riccati_flow",
    "riccati_path",
    "shape_ode_flow",
    "shape_ode_path",
    "is_codazzi_compatible",
    "evolution_state",
    "real_eigenvalues",
    "SYM_TOL",
    "REAL_EIG_TOL",
    "RICCATI_BLOWUP",
]

# Tolerances shared across modules (see also classify / theorems).
SYM_TOL = 1e-8           # relative asymmetry threshold
REAL_EIG_TOL = 1e-10     # |Im| <= REAL_EIG_TOL * (1 + |lam|) counts as real
RICCATI_BLOWUP = 1e8     # abort integration once a tensor norm exceeds this


class NullityError(Exception):
    """Base class for errors raised by this package."""


class SingularJacobi(NullityError):
    """Evaluation at or beyond the first singular time of the Jacobi tensor."""


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpaceFormCurvature:
    """Curvature constant of the ambient space form."""

    c: float

    def __post_init__(self):
        if not math.isfinite(self.c):
            raise ValueError(f"curvature must be finite, got {self.c}")

    @property
    def sqrt_abs(self) -> float:
        return math.sqrt(abs(self.c))


@dataclass(frozen=True)
class NullityProfile:
    """Dimension bookkeeping for a configuration with relative nullity.

    ``n`` intrinsic dimension, ``p`` codimension, ``nu`` index of relative
    nullity, ``q`` index of relative conullity (q = n - nu).
    """

    n: int
    p: int
    nu: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.p < 0:
            raise ValueError("p must be >= 0")
        if not 0 <= self.nu <= self.n:
            raise ValueError("nu must lie in [0, n]")

    @property
    def q(self) -> int:
        return self.n - self.nu


@dataclass(frozen=True)
class SplittingTensor:
    """Endomorphism of the conullity space, generally non-symmetric."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"splitting tensor must be square, got {m.shape}")
        object.__setattr__(self, "mat", m)

    @property
    def q(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True)
class ShapeOperatorSet:
    """Shape operators restricted to the conullity, one per parallel normal
    frame vector.  Entries are expected symmetric for Codazzi data, but the
    container does not enforce it: incompatible inputs propagate asymmetric
    results on purpose (see :func:`shape_operator_at`)."""

    ops: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(a, dtype=float) for a in self.ops)
        if ops:
            q = ops[0].shape[0]
            for a in ops:
                if a.shape != (q, q):
                    raise ValueError("all shape operators must share one square shape")
        object.__setattr__(self, "ops", ops)

    @property
    def p(self) -> int:
        return len(self.ops)

    @property
    def q(self) -> int:
        return self.ops[0].shape[0] if self.ops else 0

    def asymmetry(self) -> float:
        """Largest relative asymmetry over the entries."""
        worst = 0.0
        for a in self.ops:
            scale = 1.0 + np.abs(a).max(initial=0.0)
            worst = max(worst, np.abs(a - a.T).max(initial=0.0) / scale)
        return worst

    def is_symmetric(self, tol: float = SYM_TOL) -> bool:
        return self.asymmetry() <= tol


@dataclass(frozen=True)
class JacobiTensor:
    """Value of the Jacobi tensor at arc length ``t`` along the geodesic."""

    mat: np.ndarray
    t: float


class DomainKind(str, Enum):
    SEGMENT = "segment"
    RAY = "ray"
    LINE = "line"


@dataclass(frozen=True)
class GeodesicDomain:
    """Parameter domain of the leaf geodesic: [0, b), [0, oo) or (-oo, oo)."""

    kind: DomainKind
    b: float | None = None

    def __post_init__(self):
        if self.kind is DomainKind.SEGMENT:
            if self.b is None or not (0.0 < self.b < math.inf):
                raise ValueError("segment requires 0 < b < inf")
        elif self.b is not None:
            raise ValueError(f"{self.kind.value} takes no endpoint")

    @classmethod
    def segment(cls, b: float) -> "GeodesicDomain":
        return cls(DomainKind.SEGMENT, float(b))

    @classmethod
    def ray(cls) -> "GeodesicDomain":
        return cls(DomainKind.RAY)

    @classmethod
    def line(cls) -> "GeodesicDomain":
        return cls(DomainKind.LINE)


@dataclass(frozen=True)
class EvolutionState:
    """Joint state (J, C, A) at a parameter value along the geodesic."""

    t: float
    J: JacobiTensor
    C: SplittingTensor
    A: ShapeOperatorSet


# ---------------------------------------------------------------------------
# coercion helpers
# ---------------------------------------------------------------------------

def _curv(c) -> float:
    if isinstance(c, SpaceFormCurvature):
        return c.c
    c = float(c)
    if not math.isfinite(c):
        raise ValueError(f"curvature must be finite, got {c}")
    return c


def _smat(C0) -> np.ndarray:
    if isinstance(C0, SplittingTensor):
        return C0.mat
    m = np.asarray(C0, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"splitting tensor must be square, got {m.shape}")
    return m


def _sset(A0) -> ShapeOperatorSet:
    if isinstance(A0, ShapeOperatorSet):
        return A0
    return ShapeOperatorSet(tuple(A0))


def real_eigenvalues(M: np.ndarray, tol: float = REAL_EIG_TOL) -> list[float]:
    """Real part of the eigenvalues whose imaginary part is negligible."""
    out = []
    for lam in np.linalg.eigvals(np.asarray(M, dtype=float)):
        if abs(lam.imag) <= tol * (1.0 + abs(lam)):
            out.append(float(lam.real))
    return out


# ---------------------------------------------------------------------------
# closed-form evolution
# ---------------------------------------------------------------------------

def _jacobi_scalars(c: float, t: float) -> tuple[float, float, float, float]:
    """Coefficients (u, v, du, dv) with J = u*I - v*C0 and J' = du*I - dv*C0."""
    if c > 0.0:
        a = math.sqrt(c)
        return math.cos(a * t), math.sin(a * t) / a, -a * math.sin(a * t), math.cos(a * t)
    if c < 0.0:
        a = math.sqrt(-c)
        return math.cosh(a * t), math.sinh(a * t) / a, a * math.sinh(a * t), math.cosh(a * t)
    return 1.0, t, 0.0, 1.0


def _jacobi_mat(c: float, C0: np.ndarray, t: float) -> np.ndarray:
    u, v, _, _ = _jacobi_scalars(c, t)
    return u * np.eye(C0.shape[0]) - v * C0


def _jacobi_dmat(c: float, C0: np.ndarray, t: float) -> np.ndarray:
    _, _, du, dv = _jacobi_scalars(c, t)
    return du * np.eye(C0.shape[0]) - dv * C0


def jacobi_tensor(c, C0, t: float) -> JacobiTensor:
    """Jacobi tensor J(t) solving J'' + c J = 0, J(0) = I, J'(0) = -C0.

    For c = 1, 0, -1 this is the textbook trigonometric / affine / hyperbolic
    solution; arbitrary real c is handled by sqrt(|c|) scaling of those three
    branches.
    """
    c = _curv(c)
    C0 = _smat(C0)
    return JacobiTensor(_jacobi_mat(c, C0, t), float(t))


def jacobi_derivative(c, C0, t: float) -> np.ndarray:
    """Exact t-derivative of :func:`jacobi_tensor`."""
    c = _curv(c)
    C0 = _smat(C0)
    return _jacobi_dmat(c, C0, t)


def max_invertible_time(c, C0) -> float:
    """First positive time at which det J vanishes (inf if it never does).

    Only real eigenvalues of ``C0`` can produce a singular time: the scalar
    factor attached to a complex eigenvalue has real and imaginary parts that
    cannot vanish simultaneously.
    """
    c = _curv(c)
    C0 = _smat(C0)
    reals = real_eigenvalues(C0)
    roots = []
    if c > 0.0:
        a = math.sqrt(c)
        for lam in reals:
            # first positive root of cot(a t) = lam / a, always in (0, pi/a]
            roots.append((math.pi / 2.0 - math.atan(lam / a)) / a)
    elif c < 0.0:
        a = math.sqrt(-c)
        for lam in reals:
            if lam > a:
                x = lam / a
                roots.append(0.5 * math.log((x + 1.0) / (x - 1.0)) / a)
    else:
        for lam in reals:
            if lam > 0.0:
                roots.append(1.0 / lam)
    return min(roots, default=math.inf)


def _hyperbolic_factors(c: float, C0: np.ndarray, t: float):
    """For c < 0 write J(t) = (e^{a|t|}/2) M and J'(t) = (e^{a|t|}/2) N with

        M = (1 + eps) I -+ (1 - eps) C0 / a,
        N = +-a (1 - eps) I - (1 + eps) C0,    eps = e^{-2 a |t|},

    the sign following sign(t).  cosh - sinh cancels catastrophically for
    eigenvalues near +-a at large |t|; this grouping does not.  Only valid
    numerically when a|t| is not small (otherwise 1 - eps itself cancels
    against the C0/a terms); callers gate on a|t| >= 1."""
    a = math.sqrt(-c)
    sgn = 1.0 if t > 0 else -1.0
    eps = math.exp(-2.0 * a * abs(t))
    eye = np.eye(C0.shape[0])
    lo = eye - (sgn / a) * C0
    hi = eye + (sgn / a) * C0
    M = lo + eps * hi
    N = sgn * a * (eye - eps * eye) - (1.0 + eps) * C0
    return M, N, math.exp(-a * abs(t))


def splitting_tensor_at(c, C0, t: float) -> SplittingTensor:
    """Splitting tensor C(t) = -J'(t) J(t)^{-1} along the geodesic.

    Raises :class:`SingularJacobi` for t at or beyond the first singular time
    of J.
    """
    c = _curv(c)
    C0 = _smat(C0)
    if t == 0.0:
        return SplittingTensor(C0.copy())
    if abs(t) >= max_invertible_time(c, C0 if t > 0 else -C0):
        raise SingularJacobi(f"Jacobi tensor singular before t={t}")
    if c < 0.0 and math.sqrt(-c) * abs(t) >= 1.0:
        M, N, _ = _hyperbolic_factors(c, C0, t)
        return SplittingTensor(-np.linalg.solve(M.T, N.T).T)
    J = _jacobi_mat(c, C0, t)
    dJ = _jacobi_dmat(c, C0, t)
    # -J' J^{-1} via a solve on the transposed system
    return SplittingTensor(-np.linalg.solve(J.T, dJ.T).T)


def shape_operator_at(A0, c, C0, t: float) -> ShapeOperatorSet:
    """Shape operators A(t) = A(0) J(t)^{-1} in the parallel frame.

    Symmetry of the result is only guaranteed when ``A0`` is Codazzi
    compatible with ``C0``; the caller is responsible for checking
    :func:`is_codazzi_compatible` when that matters.
    """
    c = _curv(c)
    C0 = _smat(C0)
    A0 = _sset(A0)
    if t == 0.0:
        return ShapeOperatorSet(tuple(a.copy() for a in A0.ops))
    if abs(t) >= max_invertible_time(c, C0 if t > 0 else -C0):
        raise SingularJacobi(f"Jacobi tensor singular before t={t}")
    if c < 0.0 and math.sqrt(-c) * abs(t) >= 1.0:
        M, _, decay = _hyperbolic_factors(c, C0, t)
        Jinv_T = 2.0 * decay * np.linalg.inv(M).T
    else:
        Jinv_T = np.linalg.inv(_jacobi_mat(c, C0, t)).T
    return ShapeOperatorSet(tuple((Jinv_T @ a.T).T for a in A0.ops))


# ---------------------------------------------------------------------------
# RK4 oracles
# ---------------------------------------------------------------------------

def _rk4_path(f, y0: np.ndarray, times, step: float, guard_norm: float):
    """Integrate y' = f(t, y) from t=0, recording y at each requested time.

    ``times`` must be nonnegative and sorted.  Steps are sized to land exactly
    on every record point while never exceeding ``step``.
    """
    t = 0.0
    y = y0.astype(float).copy()
    out = []
    for tk in times:
        if tk < t:
            raise ValueError("record times must be sorted and nonnegative")
        span = tk - t
        if span > 0.0:
            n = max(1, math.ceil(span / step - 1e-12))
            h = span / n
            for _ in range(n):
                k1 = f(t, y)
                k2 = f(t + 0.5 * h, y + (0.5 * h) * k1)
                k3 = f(t + 0.5 * h, y + (0.5 * h) * k2)
                k4 = f(t + h, y + h * k3)
                y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                t += h
                m = np.abs(y).max()
                if not m < guard_norm:
                    raise SingularJacobi(
                        f"trajectory norm {m:.3g} exceeded blow-up guard near t={t:.6g}"
                    )
        t = tk
        out.append(y.copy())
    return out


def riccati_path(c, C0, times, step: float = 1e-3) -> list[np.ndarray]:
    """RK4 integration of the Riccati equation C' = C^2 + c I, recorded at
    the given times.  Independent oracle for :func:`splitting_tensor_at`."""
    c = _curv(c)
    C0 = _smat(C0)
    eye = np.eye(C0.shape[0])

    def f(_t, C):
        return C @ C + c * eye

    return _rk4_path(f, C0, list(times), step, RICCATI_BLOWUP)


def riccati_flow(c, C0, t_end: float, step: float = 1e-3) -> SplittingTensor:
    """Value of the Riccati flow at ``t_end`` (fixed-step RK4)."""
    return SplittingTensor(riccati_path(c, C0, [float(t_end)], step)[-1])


def shape_ode_path(A0, c, C0, times, step: float = 1e-3) -> list[ShapeOperatorSet]:
    """RK4 integration of A' = A C(t), with C(t) taken from the closed form.

    Oracle for :func:`shape_operator_at`; the two sides share only the
    splitting tensor, not the shape evolution itself.
    """
    c = _curv(c)
    C0 = _smat(C0)
    A0 = _sset(A0)
    if A0.p == 0:
        return [A0 for _ in times]
    stack = np.stack(A0.ops)

    cache: dict[float, np.ndarray] = {}

    def C_at(t):
        got = cache.get(t)
        if got is None:
            J = _jacobi_mat(c, C0, t)
            dJ = _jacobi_dmat(c, C0, t)
            got = -np.linalg.solve(J.T, dJ.T).T
            if len(cache) > 8:
                cache.clear()
            cache[t] = got
        return got

    def f(t, A):
        return A @ C_at(t)

    path = _rk4_path(f, stack, list(times), step, RICCATI_BLOWUP)
    return [ShapeOperatorSet(tuple(A)) for A in path]


def shape_ode_flow(A0, c, C0, t_end: float, step: float = 1e-3) -> ShapeOperatorSet:
    """Value of the shape-operator ODE flow at ``t_end``."""
    return shape_ode_path(A0, c, C0, [float(t_end)], step)[-1]


# ---------------------------------------------------------------------------
# compatibility and convenience
# ---------------------------------------------------------------------------

def is_codazzi_compatible(A0, C0, tol: float = SYM_TOL) -> bool:
    """Whether every A_xi * C0^k is symmetric for k = 0, ..., q-1.

    By Cayley-Hamilton this is equivalent to symmetry of A_xi J(t)^{-1} for
    all t, i.e. the pair can arise as Codazzi data of an actual immersion.
    """
    A0 = _sset(A0)
    C0 = _smat(C0)
    q = C0.shape[0]
    for a in A0.ops:
        m = a.copy()
        for _ in range(q):
            scale = 1.0 + np.abs(m).max(initial=0.0)
            if np.abs(m - m.T).max(initial=0.0) > tol * scale:
                return False
            m = m @ C0
    return True


def evolution_state(c, C0, A0, t: float) -> EvolutionState:
    """Bundle J, C and A at parameter ``t`` into one record."""
    return EvolutionState(
        t=float(t),
        J=jacobi_tensor(c, C0, t),
        C=splitting_tensor_at(c, C0, t),
        A=shape_operator_at(A0, c, C0, t),
    )
