"""Complete elliptic integral and Jacobi elliptic functions.

``K`` uses the arithmetic-geometric mean; ``sn, cn, dn`` use the descending
Landen sequence of the same iteration.  Everything works elementwise on
numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_TOL = 1e-16
_MAX_STEPS = 64


def _agm_sequence(k2: float) -> tuple[list[float], list[float]]:
    """``(a_i, c_i)`` of the AGM started at ``(1, sqrt(1 - k^2))``."""
    a, b, c = 1.0, math.sqrt(1.0 - k2), math.sqrt(k2)
    aa, cc = [a], [c]
    for _ in range(_MAX_STEPS):
        if abs(c) <= _TOL * a:
            break
        a, b, c = (a + b) / 2, math.sqrt(a * b), (a - b) / 2
        aa.append(a)
        cc.append(c)
    return aa, cc


def ellipk(k2: float) -> float:
    """Complete elliptic integral of the first kind, parameter ``m = k^2``."""
    if not 0 <= k2 < 1:
        raise ValueError("need 0 <= k^2 < 1")
    aa, _ = _agm_sequence(k2)
    return math.pi / (2 * aa[-1])


def jacobi(z, k2: float):
    """``(sn, cn, dn)`` of argument ``z`` (scalar or array) and parameter ``k^2``."""
    if not 0 <= k2 <= 1:
        raise ValueError("need 0 <= k^2 <= 1")
    z = np.asarray(z, dtype=float)
    if k2 == 1:
        sech = 1 / np.cosh(z)
        return np.tanh(z), sech, sech.copy()
    if k2 == 0:
        return np.sin(z), np.cos(z), np.ones_like(z)
    aa, cc = _agm_sequence(k2)
    n = len(aa) - 1
    phi = (2.0 ** n) * aa[-1] * z
    for i in range(n, 0, -1):
        phi = (phi + np.arcsin(cc[i] / aa[i] * np.sin(phi))) / 2
    sn, cn = np.sin(phi), np.cos(phi)
    # dn > 0 for k^2 < 1; this avoids the 0/0 of the Landen quotient at z = K
    dn = np.sqrt(1 - k2 * sn * sn)
    return sn, cn, dn


@dataclass(frozen=True)
class EllipticContext:
    k2: float

    @property
    def K(self) -> float:
        return ellipk(self.k2)

    @property
    def period(self) -> float:
        """Common period ``4K`` of sn and cn."""
        return 4 * self.K

    def __call__(self, z):
        return jacobi(z, self.k2)
