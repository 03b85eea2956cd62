"""Index, Drazin inverse, and the strongly Drazin / Hirano refinements.

Index convention: the index of ``a`` is the smallest *positive* ``k`` with
``(a - a^2 a^D)^k = 0``, so invertible matrices have index 1.

The strongly Drazin and Hirano inverses are not computed by separate
algorithms.  When they exist they coincide with the Drazin inverse, so each
is returned as the Drazin inverse plus a certificate that is re-verified
before it leaves this module.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ratmat
from .errors import (
    BadInverse,
    CertificateFailure,
    NotHirano,
    NotSquare,
    NotStronglyDrazin,
)
from .ratmat import Matrix, Poly, char_poly, hstack, inverse, power, rank


def _require_square(m: Matrix) -> None:
    if not m.is_square:
        raise NotSquare(f"expected a square matrix, got {m.nrows}x{m.ncols}")


@dataclass(frozen=True)
class DrazinData:
    index_k: int
    dinv: Matrix
    core_proj: Matrix
    core_complement: Matrix


@dataclass(frozen=True)
class HiranoCert:
    z: Matrix
    tripotent: Matrix
    nilpart: Matrix
    nil_exponent: int


@dataclass(frozen=True)
class StrongDrazinCert:
    z: Matrix
    idem: Matrix
    nilpart: Matrix
    nil_exponent: int


def is_nilpotent(m: Matrix) -> int | None:
    """Smallest ``e`` with ``m**e == 0``, or None if ``m`` is not nilpotent."""
    _require_square(m)
    if m.is_zero():
        return 1
    acc = m
    for e in range(2, m.nrows + 1):
        acc = acc @ m
        if acc.is_zero():
            return e
    return None


def index(a: Matrix) -> int:
    _require_square(a)
    k = 0
    prev = a.nrows
    acc = Matrix.identity(a.nrows)
    while True:
        acc = acc @ a
        r = rank(acc)
        if r == prev:
            return max(k, 1)
        prev = r
        k += 1


def drazin_residuals(a: Matrix, z: Matrix) -> dict[str, Matrix]:
    """Residuals of the three defining equations; the third must be nilpotent."""
    az = a @ z
    return {
        "az-za": az - z @ a,
        "zaz-z": z @ az - z,
        "a-a^2z": a - a @ az,
    }


def satisfies_drazin(a: Matrix, z: Matrix) -> bool:
    if z.shape != a.shape:
        return False
    res = drazin_residuals(a, z)
    return res["az-za"].is_zero() and res["zaz-z"].is_zero() and is_nilpotent(res["a-a^2z"]) is not None


def drazin_inverse(a: Matrix) -> DrazinData:
    """Drazin inverse via the core-nilpotent decomposition.

    With ``k = index(a)`` the columns of ``a^k`` span the core and its kernel
    the nilpotent part; in that basis ``a`` is block diagonal and only the
    core block gets inverted.
    """
    _require_square(a)
    n = a.nrows
    k = index(a)
    ak = power(a, k)
    core = ratmat.col_space_basis(ak)
    r = core.ncols
    if r == 0:
        dinv = Matrix.zeros(n)
    elif r == n:
        dinv = inverse(a)
    else:
        t = hstack(core, ratmat.null_space_basis(ak))
        t_inv = inverse(t)
        c_block, _, _, _ = ratmat.block_split(t_inv @ a @ t, r, r)
        c_inv = inverse(c_block)
        zero_r = Matrix.zeros(r, n - r)
        padded = ratmat.block_assemble(c_inv, zero_r, zero_r.T, Matrix.zeros(n - r))
        dinv = t @ padded @ t_inv
    core_proj = a @ dinv
    data = DrazinData(k, dinv, core_proj, Matrix.identity(n) - core_proj)
    _check_drazin_data(a, data)
    return data


def _check_drazin_data(a: Matrix, data: DrazinData) -> None:
    z = data.dinv
    res = drazin_residuals(a, z)
    if not (res["az-za"].is_zero() and res["zaz-z"].is_zero()):
        raise CertificateFailure("Drazin inverse fails az = za or zaz = z")
    resid = res["a-a^2z"]
    if not power(resid, data.index_k).is_zero():
        raise CertificateFailure("(a - a^2 a^D)^k is not zero at the computed index")
    if data.index_k > 1 and power(resid, data.index_k - 1).is_zero():
        raise CertificateFailure("computed index is not minimal")
    if data.core_proj @ data.core_proj != data.core_proj:
        raise CertificateFailure("core projection is not idempotent")


def spectral_projections(a: Matrix) -> tuple[Matrix, Matrix]:
    """``(a^e, a^pi)`` with ``a^e = a a^D`` and ``a^pi = I - a^e``."""
    data = drazin_inverse(a)
    return data.core_proj, data.core_complement


def is_strongly_drazin_invertible(a: Matrix) -> int | None:
    _require_square(a)
    return is_nilpotent(a - a @ a)


def is_hirano_invertible(a: Matrix) -> int | None:
    _require_square(a)
    return is_nilpotent(a - a @ a @ a)


def tripotent_factorization(p: Poly) -> tuple[int, int, int] | None:
    """Exponents ``(p0, p1, pm1)`` with ``p = x^p0 (x-1)^p1 (x+1)^pm1``, else None."""
    if p.is_zero():
        return None
    exps = []
    for root in (0, 1, -1):
        factor = Poly([-root, 1])
        e = 0
        while p.degree > 0:
            q, r = divmod(p, factor)
            if not r.is_zero():
                break
            p, e = q, e + 1
        exps.append(e)
    if p.degree != 0 or p.coeffs[0] != 1:
        return None
    return tuple(exps)


def eigencheck_hirano(a: Matrix) -> bool:
    """True iff every eigenvalue of ``a`` lies in {-1, 0, 1}."""
    _require_square(a)
    return tripotent_factorization(char_poly(a)) is not None


def hirano_inverse(a: Matrix) -> HiranoCert:
    from .decomp import tripotent_nilpotent

    _require_square(a)
    resid = a - a @ a @ a
    if is_nilpotent(resid) is None:
        raise NotHirano("a - a^3 is not nilpotent", residual=resid)
    data = drazin_inverse(a)
    z = data.dinv
    split = tripotent_nilpotent(a)
    exponent = is_nilpotent(a @ a - a @ z)
    cert = HiranoCert(z, split.structured_part, split.nilpart, exponent or 0)
    verify_hirano_cert(a, cert)
    if split.structured_part @ split.structured_part != data.core_proj:
        raise CertificateFailure("tripotent part squared differs from a a^D")
    return cert


def verify_hirano_cert(a: Matrix, cert: HiranoCert) -> None:
    """Re-check every claim of a Hirano certificate; raise CertificateFailure on any gap."""
    z, e, nil = cert.z, cert.tripotent, cert.nilpart
    az = a @ z
    checks = {
        "az = za": az == z @ a,
        "zaz = z": z @ az == z,
        "(a^2 - az)^k = 0": cert.nil_exponent >= 1
        and power(a @ a - az, cert.nil_exponent).is_zero(),
        "e^3 = e": e @ e @ e == e,
        "n nilpotent": is_nilpotent(nil) is not None,
        "en = ne": e @ nil == nil @ e,
        "e + n = a": e + nil == a,
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise CertificateFailure("Hirano certificate fails: " + ", ".join(failed))


def strongly_drazin_inverse(a: Matrix) -> StrongDrazinCert:
    from .decomp import idempotent_nilpotent

    _require_square(a)
    resid = a - a @ a
    if is_nilpotent(resid) is None:
        raise NotStronglyDrazin("a - a^2 is not nilpotent", residual=resid)
    z = drazin_inverse(a).dinv
    split = idempotent_nilpotent(a)
    exponent = is_nilpotent(a - a @ z)
    cert = StrongDrazinCert(z, split.structured_part, split.nilpart, exponent or 0)
    verify_strong_drazin_cert(a, cert)
    return cert


def verify_strong_drazin_cert(a: Matrix, cert: StrongDrazinCert) -> None:
    z, f, nil = cert.z, cert.idem, cert.nilpart
    az = a @ z
    checks = {
        "az = za": az == z @ a,
        "zaz = z": z @ az == z,
        "(a - az)^k = 0": cert.nil_exponent >= 1 and power(a - az, cert.nil_exponent).is_zero(),
        "f^2 = f": f @ f == f,
        "n nilpotent": is_nilpotent(nil) is not None,
        "fn = nf": f @ nil == nil @ f,
        "f + n = a": f + nil == a,
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise CertificateFailure("strongly Drazin certificate fails: " + ", ".join(failed))


def cline_transfer(a: Matrix, b: Matrix, z_ba: Matrix) -> Matrix:
    """``(ab)^D = a ((ba)^D)^2 b`` given the Drazin inverse of ``ba``."""
    ba = b @ a
    ab = a @ b
    if not satisfies_drazin(ba, z_ba):
        raise BadInverse("supplied matrix is not the Drazin inverse of b a")
    out = a @ z_ba @ z_ba @ b
    if not satisfies_drazin(ab, out):
        raise CertificateFailure("transferred matrix fails the Drazin equations for a b")
    return out
