"""Deterministic invariant suite behind the ``check`` CLI subcommand.

A reduced version of the full test suite: every check draws its data from a
seed-derived generator, so identical (seed, step) inputs produce identical
reports.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import catalog, classify, theorems
from .core import (
    jacobi_derivative,
    jacobi_tensor,
    max_invertible_time,
    riccati_path,
    shape_ode_flow,
    shape_operator_at,
    splitting_tensor_at,
)
from .sampling import random_compatible_pair, random_splitting_tensor
from .theorems import SplittingFamily, find_special_nullity_direction, nu_n, radon_hurwitz

__all__ = ["CheckResult", "run_checks", "report"]

RH_TABLE_16 = (1, 2, 1, 4, 1, 2, 1, 8, 1, 2, 1, 4, 1, 2, 1, 9)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _rng(seed: int, salt: int) -> np.random.Generator:
    return np.random.default_rng([seed, salt])


def _sample_times(c, C0, n=5, frac=0.8, cap=5.0):
    b = max_invertible_time(c, C0)
    t_end = min(frac * b, cap)
    return [t_end * (i + 1) / n for i in range(n)]


def _radon_hurwitz_oracle(m: int) -> int:
    # recursive form of the 8-fold periodicity, independent of the closed form
    e = 0
    while m % 2 == 0:
        m //= 2
        e += 1
    base = (1, 2, 4, 8)
    val = base[e % 4] if e < 4 else None
    if val is None:
        return _radon_hurwitz_oracle(2 ** (e - 4)) + 8
    return val


def _check_riccati_oracle(seed, step):
    worst = 0.0
    for i in range(5):
        rng = _rng(seed, 100 + i)
        c = [-1.0, 0.0, 1.0][i % 3]
        q = 2 + i % 4
        C0 = random_splitting_tensor(rng, q)
        times = _sample_times(c, C0)
        path = riccati_path(c, C0, times, step)
        for t, Ct in zip(times, path):
            closed = splitting_tensor_at(c, C0, t).mat
            worst = max(worst, float(np.abs(closed - Ct).max()))
    return worst <= 1e-6, f"max deviation {worst:.3e}"


def _check_shape_oracle(seed, step):
    worst = 0.0
    for i in range(5):
        rng = _rng(seed, 200 + i)
        c = [-1.0, 0.0, 1.0][i % 3]
        q = 2 + i % 3
        A0, C0 = random_compatible_pair(rng, q)
        t_end = _sample_times(c, C0.mat)[-1]
        ode = shape_ode_flow(A0, c, C0, t_end, step)
        closed = shape_operator_at(A0, c, C0, t_end)
        for a, b in zip(ode.ops, closed.ops):
            worst = max(worst, float(np.abs(a - b).max()))
    return worst <= 1e-6, f"max deviation {worst:.3e}"


def _check_jacobi_residual(seed, step):
    h = 1e-3
    worst = 0.0
    for i in range(10):
        rng = _rng(seed, 300 + i)
        c = [-1.0, 0.0, 1.0][i % 3]
        q = 2 + i % 4
        C0 = random_splitting_tensor(rng, q)
        t = rng.uniform(0.1, 2.0)
        Jm = jacobi_tensor(c, C0, t - h).mat
        J0 = jacobi_tensor(c, C0, t).mat
        Jp = jacobi_tensor(c, C0, t + h).mat
        resid = (Jp - 2.0 * J0 + Jm) / (h * h) + c * J0
        rel = float(np.abs(resid).max()) / (1.0 + float(np.abs(J0).max()))
        worst = max(worst, rel)
    return worst <= 1e-4, f"max relative residual {worst:.3e}"


def _check_gauge_identity(seed, step):
    rng = _rng(seed, 400)
    c = -1.0
    A0, C0 = random_compatible_pair(rng, 3)
    ok = np.array_equal(splitting_tensor_at(c, C0, 0.0).mat, C0.mat)
    at0 = shape_operator_at(A0, c, C0, 0.0)
    ok = ok and all(np.array_equal(a, b) for a, b in zip(at0.ops, A0.ops))
    return ok, "C(0) == C0 and A(0) == A0 exactly"


def _check_derivative_consistency(seed, step):
    h = 1e-6
    worst = 0.0
    for i in range(10):
        rng = _rng(seed, 500 + i)
        c = [-1.0, 0.0, 1.0][i % 3]
        C0 = random_splitting_tensor(rng, 2 + i % 3)
        t = rng.uniform(0.0, 2.0)
        exact = jacobi_derivative(c, C0, t)
        fd = (jacobi_tensor(c, C0, t + h).mat - jacobi_tensor(c, C0, t - h).mat) / (2 * h)
        rel = float(np.abs(exact - fd).max()) / (1.0 + float(np.abs(exact).max()))
        worst = max(worst, rel)
    return worst <= 1e-6, f"max relative deviation {worst:.3e}"


def _check_cocycle(seed, step):
    worst = 0.0
    for i in range(5):
        rng = _rng(seed, 600 + i)
        c = [-1.0, 0.0, 1.0][i % 3]
        C0 = random_splitting_tensor(rng, 2 + i % 3)
        ts = _sample_times(c, C0, n=2, frac=0.6)
        s, total = ts[0], ts[1]
        lhs = splitting_tensor_at(c, C0, total).mat
        mid = splitting_tensor_at(c, C0, s).mat
        rhs = splitting_tensor_at(c, mid, total - s).mat
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst <= 1e-8, f"max deviation {worst:.3e}"


def _check_radon_hurwitz(seed, step):
    table = tuple(radon_hurwitz(m) for m in range(1, 17))
    if table != RH_TABLE_16:
        return False, f"table mismatch: {table}"
    for m in range(1, 65):
        if radon_hurwitz(m) != _radon_hurwitz_oracle(m):
            return False, f"oracle mismatch at m={m}"
    return True, "table 1..16 and oracle 1..64 agree"


def _check_nu_n(seed, step):
    got = {n: nu_n(n) for n in (2, 9, 17)}
    want = {2: 0, 9: 1, 17: 1}
    return got == want, f"nu_n {got}"


def _check_kernel_search(seed, step):
    for i in range(50):
        rng = _rng(seed, 700 + i)
        q = 2 + i % 2
        nu0 = q * (q + 1) // 2
        fam = SplittingFamily(
            basis=tuple(random_splitting_tensor(rng, q) for _ in range(nu0)), q=q
        )
        d = find_special_nullity_direction(fam)
        if d is None:
            return False, f"no direction at trial {i}"
        C = fam.evaluate(d.coeffs)
        resid = float(np.abs(C + d.skew_part + d.lam * np.eye(q)).max())
        if resid > 1e-10 or d.lam > 0.0:
            return False, f"bad decomposition at trial {i}: resid {resid:.3e}"
    return True, "50 trials found admissible directions"


def _check_max_invertible_exact(seed, step):
    cases = [
        (0.0, np.diag([2.0, -3.0]), 0.5),
        (1.0, np.array([[1.0]]), math.pi / 4.0),
        (-1.0, 2.0 * np.eye(2), 0.5 * math.log(3.0)),
    ]
    worst = 0.0
    for c, C0, want in cases:
        worst = max(worst, abs(max_invertible_time(c, C0) - want))
    return worst <= 1e-12, f"max deviation {worst:.3e}"


def _check_catalog(seed, step):
    models = [
        catalog.totally_geodesic(3, 1, 1.0),
        catalog.hyperbolic_cylinder(1, 2, 1.0),
        catalog.cartan_veronese_polar(),
        catalog.euclidean_cylinder(3, 1.0),
    ]
    failures = []
    for m in models:
        for prop, ok in catalog.verify_model(m).items():
            if not ok:
                failures.append(f"{m.name}:{prop}")
    if failures:
        return False, "failed: " + ", ".join(failures)
    return True, "all catalog properties hold"


_CHECKS = (
    ("riccati_oracle_equivalence", _check_riccati_oracle),
    ("shape_oracle_equivalence", _check_shape_oracle),
    ("jacobi_residual", _check_jacobi_residual),
    ("gauge_identity", _check_gauge_identity),
    ("derivative_consistency", _check_derivative_consistency),
    ("cocycle_property", _check_cocycle),
    ("radon_hurwitz_table", _check_radon_hurwitz),
    ("nu_n_values", _check_nu_n),
    ("kernel_search_soundness", _check_kernel_search),
    ("max_invertible_time_exact", _check_max_invertible_exact),
    ("catalog_identities", _check_catalog),
)


def run_checks(seed: int = 0, step: float = 1e-3) -> list[CheckResult]:
    results = []
    for name, fn in _CHECKS:
        passed, detail = fn(seed, step)
        results.append(CheckResult(name, passed, detail))
    return results


def report(results) -> tuple[str, int]:
    """Formatted summary plus exit code (0 iff nothing failed)."""
    lines = []
    failed = 0
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        lines.append(f"{tag} {r.name}: {r.detail}")
        if not r.passed:
            failed += 1
    lines.append(f"{len(results)} checks, {failed} failed")
    return "\n".join(lines) + "\n", 0 if failed == 0 else 1
