"""Commuting "semisimple + nilpotent" splittings by Newton iteration.

All three splittings run the same iteration ``X <- X - q(X) q'(X)^{-1}``
from ``X = a`` until ``q(X) = 0`` exactly, for a squarefree ``q`` that kills
the semisimple part.  The general Jordan-Chevalley split uses the radical of
the characteristic polynomial; the Hirano split fixes ``q = x^3 - x`` and the
strongly Drazin split fixes ``q = x^2 - x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import IterationCapExceeded, NotHirano, NotSquare, NotStronglyDrazin, SingularNewtonStep
from .gendrazin import is_nilpotent
from .ratmat import Matrix, Poly, char_poly, inverse, squarefree_part

TRIPOTENT_POLY = Poly([0, -1, 0, 1])
IDEMPOTENT_POLY = Poly([0, -1, 1])


@dataclass(frozen=True)
class SplitPair:
    structured_part: Matrix
    nilpart: Matrix
    nil_exponent: int
    newton_steps: int


def newton_cap(n: int) -> int:
    return math.ceil(math.log2(n)) + 1 if n > 1 else 1


def _newton_split(a: Matrix, q: Poly) -> SplitPair:
    dq = q.derivative()
    x = a
    steps = 0
    cap = newton_cap(a.nrows)
    while True:
        qx = q(x)
        if qx.is_zero():
            break
        if steps == cap:
            raise IterationCapExceeded(f"Newton iteration did not converge in {cap} steps")
        try:
            x = x - qx @ inverse(dq(x))
        except ZeroDivisionError:
            raise SingularNewtonStep("q'(X) became singular during the Newton iteration") from None
        steps += 1
    nil = a - x
    exponent = is_nilpotent(nil)
    if exponent is None or x @ nil != nil @ x:
        raise IterationCapExceeded("Newton limit does not give a commuting nilpotent remainder")
    return SplitPair(x, nil, exponent, steps)


def jordan_chevalley(a: Matrix) -> SplitPair:
    """Split ``a = S + N`` with S semisimple, N nilpotent and SN = NS."""
    if not a.is_square:
        raise NotSquare(f"expected a square matrix, got {a.nrows}x{a.ncols}")
    return _newton_split(a, squarefree_part(char_poly(a)))


def tripotent_nilpotent(a: Matrix) -> SplitPair:
    if not a.is_square:
        raise NotSquare(f"expected a square matrix, got {a.nrows}x{a.ncols}")
    resid = a - a @ a @ a
    if is_nilpotent(resid) is None:
        raise NotHirano("a - a^3 is not nilpotent", residual=resid)
    return _newton_split(a, TRIPOTENT_POLY)


def idempotent_nilpotent(a: Matrix) -> SplitPair:
    if not a.is_square:
        raise NotSquare(f"expected a square matrix, got {a.nrows}x{a.ncols}")
    resid = a - a @ a
    if is_nilpotent(resid) is None:
        raise NotStronglyDrazin("a - a^2 is not nilpotent", residual=resid)
    return _newton_split(a, IDEMPOTENT_POLY)
