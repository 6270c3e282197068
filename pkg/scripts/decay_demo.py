#!/usr/bin/env python3
"""Small demonstration: shape-operator decay and blow-up along hyperbolic
nullity geodesics, printed as a table."""
import numpy as np

from nullgeo import decay_report, GeodesicDomain, shape_operator_at

CASES = {
    "skew splitting (decays)": np.array([[0.0, 1.0], [-1.0, 0.0]]),
    "identity splitting (blows up)": np.eye(2),
}


def run() -> None:
    A0 = [np.array([[1.0, 0.0], [0.0, -1.0]])]
    for label, C0 in CASES.items():
        if label.startswith("identity"):
            A0 = [np.eye(2)]
        rep = decay_report(A0, -1.0, C0, GeodesicDomain.ray())
        print(f"\n{label}: global alpha limit {rep.global_alpha_limit.value}")
        print(f"{'t':>6}  {'max |A(t)|':>12}")
        for t in (0.0, 1.0, 2.0, 5.0, 10.0):
            A = shape_operator_at(A0, -1.0, C0, t)
            print(f"{t:6.1f}  {max(abs(a).max() for a in A.ops):12.4e}")


if __name__ == "__main__":
    run()
