"""Seeded generators for invertibility classes and theorem hypotheses, plus
the soundness sweep and the necessity prober built on them.

Annihilation hypotheses such as ``D^pi C A = 0`` cut out measure-zero sets,
so they are never met by rejection sampling.  Most are linear in one block
once the others are fixed; :func:`solve_linear_constraints` parameterizes the
solution space through a null-space basis and draws a random integer point
in it.  The few hypotheses that are not linear in any single block are built
in an adapted basis and then conjugated back.

Every trial seeds its own ``random.Random`` from ``(cfg.seed, theorem,
trial, attempt)``, so runs are reproducible and independent of order.
"""

from __future__ import annotations

import hashlib
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

from . import blockthm as bt
from . import gendrazin as gd
from .blockthm import BlockInstance, TheoremId, TheoremReport
from .errors import CertificateFailure, GenerationFailure
from .ratmat import (
    Matrix,
    block_assemble,
    col_space_basis,
    hstack,
    inverse,
    null_space_basis,
    solve,
    vstack,
)

T = TheoremId
SD = (0, 1)
HIR = (-1, 0, 1)


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    block_size: int = 3
    entry_bound: int = 3
    trials: int = 100
    max_retries: int = 32
    as_stated: bool = False


def derive_seed(*parts) -> int:
    digest = hashlib.blake2b(repr(parts).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


# -- random matrices ------------------------------------------------------------


def rand_matrix(rng: random.Random, nrows: int, ncols: int, bound: int) -> Matrix:
    return Matrix([[rng.randint(-bound, bound) for _ in range(ncols)] for _ in range(nrows)])


def unimodular(rng: random.Random, n: int) -> tuple[Matrix, Matrix]:
    """Random integer matrix with integer inverse, returned with that inverse."""
    lower = Matrix([[1 if i == j else (rng.randint(-1, 1) if i > j else 0) for j in range(n)] for i in range(n)])
    upper = Matrix([[1 if i == j else (rng.randint(-1, 1) if i < j else 0) for j in range(n)] for i in range(n)])
    perm = list(range(n))
    rng.shuffle(perm)
    p = Matrix([[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)])
    t = p @ lower @ upper
    return t, inverse(t)


def triangular(rng: random.Random, diagonal: Iterable[int], bound: int) -> Matrix:
    diag = list(diagonal)
    n = len(diag)
    return Matrix(
        [[diag[i] if i == j else (rng.randint(-bound, bound) if i < j else 0) for j in range(n)] for i in range(n)]
    )


def conjugate(rng: random.Random, u: Matrix) -> Matrix:
    t, t_inv = unimodular(rng, u.nrows)
    return t @ u @ t_inv


def with_spectrum(rng: random.Random, n: int, allowed: Iterable[int], bound: int, *, bad: bool = False,
                  upper: bool = True, conj: bool = True) -> Matrix:
    """Conjugated upper triangular matrix whose diagonal is drawn from ``allowed``.

    With ``bad=True`` one diagonal entry is replaced by 2, which no
    strongly Drazin or Hirano invertible matrix has as an eigenvalue.
    """
    allowed = sorted(set(allowed))
    diag = [rng.choice(allowed) for _ in range(n)]
    if bad:
        diag[rng.randrange(n)] = 2
    u = triangular(rng, diag, bound if upper else 0)
    return conjugate(rng, u) if conj else u


def nilpotent(rng: random.Random, n: int, bound: int) -> Matrix:
    return with_spectrum(rng, n, (0,), bound)


def gen_nilpotent(n: int, cfg: GenConfig) -> Matrix:
    """Random nilpotent ``n x n`` matrix ``T U T^-1`` (U strictly upper triangular)."""
    rng = random.Random(derive_seed(cfg.seed, "nilpotent", n))
    return nilpotent(rng, n, cfg.entry_bound)


def gen_class(n: int, allowed: Iterable[int], cfg: GenConfig, upper: bool = True) -> Matrix:
    """Random matrix with eigenvalues in ``allowed`` (a nonempty subset of {-1, 0, 1})."""
    allowed = set(allowed)
    if not allowed or not allowed <= {-1, 0, 1}:
        raise ValueError("allowed eigenvalues must be a nonempty subset of {-1, 0, 1}")
    rng = random.Random(derive_seed(cfg.seed, "class", n, tuple(sorted(allowed)), upper))
    return with_spectrum(rng, n, allowed, cfg.entry_bound, upper=upper)


def solve_linear_constraints(
    rng: random.Random,
    shape: tuple[int, int],
    constraints: Iterable[Callable[[Matrix], Matrix]],
    bound: int,
) -> Matrix:
    """Random integer combination of a basis of ``{X : f(X) = 0 for every f}``.

    Each ``f`` must be linear in ``X``.  Returns the zero matrix when the
    solution space is trivial.
    """
    nrows, ncols = shape
    constraints = list(constraints)
    if not constraints:
        return rand_matrix(rng, nrows, ncols, bound)
    images = []
    for i in range(nrows):
        for j in range(ncols):
            unit = Matrix([[1 if (r, c) == (i, j) else 0 for c in range(ncols)] for r in range(nrows)])
            images.append([x for f in constraints for row in f(unit).rows for x in row])
    system = Matrix(zip(*images))
    basis = null_space_basis(system)
    if basis.ncols == 0:
        return Matrix.zeros(nrows, ncols)
    coeffs = [rng.randint(-bound, bound) for _ in range(basis.ncols)]
    if not any(coeffs):
        coeffs[rng.randrange(len(coeffs))] = 1
    vec = [sum(c * x for c, x in zip(coeffs, row)) for row in basis.rows]
    return Matrix([vec[i * ncols:(i + 1) * ncols] for i in range(nrows)])


# -- per-theorem recipes ----------------------------------------------------------
#
# A recipe receives (rng, n, bound, drop, as_stated) and returns a dict of
# blocks.  ``drop`` names a hypothesis to leave unenforced and, where the
# construction allows, to violate actively.


def _cls(strong: bool, block: str, rng, n, bound, drop, as_stated=False) -> Matrix:
    allowed = SD if strong else HIR
    return with_spectrum(rng, n, allowed, bound, bad=(drop == f"class-{block}"))


def _solve(rng, shape, bound, drop, named: dict[str, Callable[[Matrix], Matrix]]) -> Matrix:
    return solve_linear_constraints(rng, shape, [f for k, f in named.items() if k != drop], bound)


def _drazin(m: Matrix):
    d = gd.drazin_inverse(m)
    return d.dinv, d.core_proj, d.core_complement


def _recipe_t2_7(rng, n, bound, drop, as_stated):
    a = _cls(True, "A", rng, n, bound, drop)
    d = _cls(True, "D", rng, n, bound, drop)
    _, de, dpi = _drazin(d)
    b = _solve(rng, (n, n), bound, drop, {"BDD^D=0": lambda x: x @ de})
    c = _solve(rng, (n, n), bound, drop, {
        "D^piCB=0": lambda x: dpi @ x @ b,
        "D^piCA=0": lambda x: dpi @ x @ a,
    })
    return dict(A=a, B=b, C=c, D=d)


def _recipe_c2_8(rng, n, bound, drop, as_stated):
    a = _cls(True, "A", rng, n, bound, drop)
    d = _cls(True, "D", rng, n, bound, drop)
    _, _, dpi = _drazin(d)
    b = _solve(rng, (n, n), bound, drop, {"BD=0": lambda x: x @ d})
    c = _solve(rng, (n, n), bound, drop, {"D^piC=0": lambda x: dpi @ x})
    return dict(A=a, B=b, C=c, D=d)


def _recipe_c2_9(rng, n, bound, drop, as_stated):
    if as_stated and drop != "class-A":
        a = rand_matrix(rng, n, n, bound)
    else:
        a = _cls(True, "A", rng, n, bound, drop)
    d = _cls(True, "D", rng, n, bound, drop)
    c = _solve(rng, (n, n), bound, drop, {"CA=0": lambda x: x @ a})
    b = _solve(rng, (n, n), bound, drop, {"CB=0": lambda x: c @ x, "BD=0": lambda x: x @ d})
    return dict(A=a, B=b, C=c, D=d)


def _recipe_t2_10(rng, n, bound, drop, as_stated):
    a = _cls(True, "A", rng, n, bound, drop)
    d = _cls(True, "D", rng, n, bound, drop)
    ad, _, api = _drazin(a)
    b = _solve(rng, (n, n), bound, drop, {
        "A^DBD=0": lambda x: ad @ x @ d,
        "A^piBD=0": lambda x: api @ x @ d,
    })
    c = _solve(rng, (n, n), bound, drop, {
        "A^DBCA^D=0": lambda x: ad @ b @ x @ ad,
        "A^piBC=0": lambda x: api @ b @ x,
    })
    return dict(A=a, B=b, C=c, D=d)


def _recipe_c2_11(rng, n, bound, drop, as_stated):
    a = _cls(True, "A", rng, n, bound, drop)
    d = _cls(True, "D", rng, n, bound, drop)
    dd, _, dpi = _drazin(d)
    c = _solve(rng, (n, n), bound, drop, {
        "D^DCA=0": lambda x: dd @ x @ a,
        "D^piCA=0": lambda x: dpi @ x @ a,
    })
    b = _solve(rng, (n, n), bound, drop, {
        "D^DCBD^D=0": lambda x: dd @ c @ x @ dd,
        "D^piCB=0": lambda x: dpi @ c @ x,
    })
    return dict(A=a, B=b, C=c, D=d)


def _recipe_l2_6(rng, n, bound, drop, as_stated):
    a = _cls(True, "A", rng, n, bound, drop)
    d = _cls(True, "D", rng, n, bound, drop)
    _, _, api = _drazin(a)
    b = _solve(rng, (n, n), bound, drop, {"BD^2=0": lambda x: x @ d @ d})
    c = _solve(rng, (n, n), bound, drop, {
        "ABC=0": lambda x: a @ b @ x,
        "BCA^pi=0": lambda x: b @ x @ api,
        "BDC=0": lambda x: b @ d @ x,
    })
    return dict(A=a, B=b, C=c, D=d)


def _recipe_l3_2(rng, n, bound, drop, as_stated):
    a = _cls(False, "A", rng, n, bound, drop)
    d = _cls(False, "D", rng, n, bound, drop)
    b = rand_matrix(rng, n, n, bound) if drop == "B=0" else Matrix.zeros(n)
    return dict(A=a, B=b, C=rand_matrix(rng, n, n, bound), D=d)


def _recipe_t3_4(rng, n, bound, drop, as_stated):
    a = _cls(False, "A", rng, n, bound, drop)
    d = _cls(False, "D", rng, n, bound, drop)
    ah, _, api = _drazin(a)
    dh, _, dpi = _drazin(d)
    b = _solve(rng, (n, n), bound, drop, {"BD^H=0": lambda x: x @ dh})
    # A^pi BC = 0 and A^H BC = 0 force BC = 0, after which the last
    # hypothesis reduces to the linear condition D D^pi C = 0
    c = _solve(rng, (n, n), bound, drop, {
        "A^piBC=0": lambda x: api @ b @ x,
        "A^HBC=0": lambda x: ah @ b @ x,
        "(DD^pi-CA^HB)C=0": lambda x: d @ dpi @ x,
    })
    return dict(A=a, B=b, C=c, D=d)


def _recipe_c3_5(rng, n, bound, drop, as_stated):
    a = _cls(False, "A", rng, n, bound, drop)
    d = _cls(False, "D", rng, n, bound, drop)
    dh, _, dpi = _drazin(d)
    b = _solve(rng, (n, n), bound, drop, {"BD^H=0": lambda x: x @ dh})
    c = _solve(rng, (n, n), bound, drop, {
        "BC=0": lambda x: b @ x,
        "DD^piC=0": lambda x: d @ dpi @ x,
    })
    return dict(A=a, B=b, C=c, D=d)


def _recipe_t3_7(rng, n, bound, drop, as_stated):
    a = _cls(False, "A", rng, n, bound, drop)
    d = _cls(False, "D", rng, n, bound, drop)
    dh, _, dpi = _drazin(d)
    b = _solve(rng, (n, n), bound, drop, {"AB=0": lambda x: a @ x, "BD^H=0": lambda x: x @ dh})
    c = _solve(rng, (n, n), bound, drop, {"D^piCB=0": lambda x: dpi @ x @ b})
    return dict(A=a, B=b, C=c, D=d)


def _recipe_c3_8(rng, n, bound, drop, as_stated):
    a = _cls(False, "A", rng, n, bound, drop)
    d = _cls(False, "D", rng, n, bound, drop)
    ah, _, _ = _drazin(a)
    c = _solve(rng, (n, n), bound, drop, {"CA=0": lambda x: x @ a})
    b = _solve(rng, (n, n), bound, drop, {"CB=0": lambda x: c @ x, "A^HBC=0": lambda x: ah @ x @ c})
    return dict(A=a, B=b, C=c, D=d)


def _split_sizes(rng, n: int, parts: int) -> list[int]:
    """Random composition of ``n`` into ``parts`` nonnegative sizes."""
    cuts = sorted(rng.randint(0, n) for _ in range(parts - 1))
    bounds = [0] + cuts + [n]
    return [bounds[i + 1] - bounds[i] for i in range(parts)]


def _grid(sizes_r: list[int], sizes_c: list[int], fill: dict) -> Matrix:
    """Assemble a block matrix from ``{(i, j): block}``; missing blocks are zero."""
    rows = []
    for i, r in enumerate(sizes_r):
        if r == 0:
            continue
        row_blocks = []
        for j, c in enumerate(sizes_c):
            if c == 0:
                continue
            row_blocks.append(fill.get((i, j)) or Matrix.zeros(r, c))
        rows.append(hstack(*row_blocks))
    return vstack(*rows)


def _recipe_l2_1(rng, n, bound, drop, as_stated):
    # Q maps into the first q coordinates, P kills them: PQ = 0
    q = rng.randint(1, n - 1) if n > 1 else rng.randint(0, 1)
    sizes = [q, n - q]
    fill_q, fill_p = {}, {}
    if q:
        fill_q[0, 0] = with_spectrum(rng, q, SD, bound, bad=drop == "class-Q")
        if n - q:
            fill_q[0, 1] = rand_matrix(rng, q, n - q, bound)
    if n - q:
        fill_p[1, 1] = with_spectrum(rng, n - q, SD, bound, bad=drop == "class-P")
        if q:
            fill_p[0, 1] = rand_matrix(rng, q, n - q, bound)
    pm, qm = _grid(sizes, sizes, fill_p), _grid(sizes, sizes, fill_q)
    if drop == "PQ=0":
        pm = with_spectrum(rng, n, SD, bound, conj=False)
    t, t_inv = unimodular(rng, n)
    return dict(P=t @ pm @ t_inv, Q=t @ qm @ t_inv)


def _recipe_l2_2(rng, n, bound, drop, as_stated):
    # coordinates V1 + V2 + V3: Q maps V1+V2 into V1 and V3 into V1+V2,
    # P kills V1 and maps into V1+V2, so PQ lands in the V3 column only
    sizes = _split_sizes(rng, n, 3)
    n1, n2, n3 = sizes
    fill_p, fill_q = {}, {}
    if n1:
        fill_q[0, 0] = with_spectrum(rng, n1, HIR, bound, bad=drop == "class-Q")
    for (i, j) in ((0, 1), (0, 2), (1, 2)):
        if sizes[i] and sizes[j]:
            fill_q[i, j] = rand_matrix(rng, sizes[i], sizes[j], bound)
    if n2:
        fill_p[1, 1] = with_spectrum(rng, n2, HIR, bound, bad=drop == "class-P")
    for (i, j) in ((0, 1), (0, 2), (1, 2)):
        if sizes[i] and sizes[j]:
            fill_p[i, j] = rand_matrix(rng, sizes[i], sizes[j], bound)
    if n3 and drop == "PQP=0":
        fill_p[2, 2] = with_spectrum(rng, n3, HIR, bound)
    if n3 and drop == "PQ^2=0":
        fill_q[2, 2] = with_spectrum(rng, n3, HIR, bound)
    t, t_inv = unimodular(rng, n)
    return dict(P=t @ _grid(sizes, sizes, fill_p) @ t_inv, Q=t @ _grid(sizes, sizes, fill_q) @ t_inv)


def _core_nil_pair(rng, n, bound, core_spectrum, bad_core):
    """Sizes and blocks of ``diag(core, nil)`` with an invertible core."""
    r = rng.randint(1, n - 1) if n > 1 else 1
    core = with_spectrum(rng, r, core_spectrum, bound, bad=bad_core)
    nil = nilpotent(rng, n - r, bound) if n - r else None
    return r, core, nil


def _recipe_l2_3(rng, n, bound, drop, as_stated):
    r, core, nil = _core_nil_pair(rng, n, bound, (1,), drop == "class-A")
    sizes = [r, n - r]
    fill_a = {(0, 0): core}
    if nil is not None:
        fill_a[1, 1] = nil
    fill_b = {}
    if n - r:
        fill_b[1, 1] = with_spectrum(rng, n - r, SD, bound, bad=drop == "class-B")
        if rng.random() < 0.5:
            fill_b[0, 1] = rand_matrix(rng, r, n - r, bound)
        else:
            fill_b[1, 0] = rand_matrix(rng, n - r, r, bound)
            fill_b.pop((1, 1))
            fill_b[1, 1] = nilpotent(rng, n - r, bound)
    if drop == "A^DBA^D=0" or (drop == "class-B" and n - r == 0):
        fill_b[0, 0] = with_spectrum(rng, r, SD, bound, bad=drop == "class-B")
        fill_b.pop((1, 0), None)
    t, t_inv = unimodular(rng, n)
    return dict(A=t @ _grid(sizes, sizes, fill_a) @ t_inv, B=t @ _grid(sizes, sizes, fill_b) @ t_inv)


def _l2_4_blocks(rng, n, bound, drop):
    """(A, B) for the [[A, B], [I, 0]] lemma, in an adapted basis then conjugated."""
    r, core, nil = _core_nil_pair(rng, n, bound, (1,), drop == "class-A")
    m = n - r
    sizes = [r, m]
    fill_a = {(0, 0): core}
    fill_b = {}
    if m:
        fill_a[1, 1] = nil
        # B = [[0, B12], [B21, 0]] with B12 N = 0 and B12 B21 = 0
        b12 = _solve(rng, (r, m), bound, drop, {"BAA^pi=0": lambda x: x @ nil})
        b21 = _solve(rng, (m, r), bound, drop, {"BA^piB=0": lambda x: b12 @ x})
        fill_b[0, 1], fill_b[1, 0] = b12, b21
    if drop == "A^DBA^D=0":
        fill_b[0, 0] = nilpotent(rng, r, bound) + Matrix.identity(r) if r == 1 else nilpotent(rng, r, bound)
    if drop == "class-B" and m:
        fill_b[1, 1] = with_spectrum(rng, m, SD, bound, bad=True)
    t, t_inv = unimodular(rng, n)
    return t @ _grid(sizes, sizes, fill_a) @ t_inv, t @ _grid(sizes, sizes, fill_b) @ t_inv


def _recipe_l2_4(rng, n, bound, drop, as_stated):
    a, b = _l2_4_blocks(rng, n, bound, drop)
    return dict(A=a, B=b)


_L2_5_TO_L2_4 = {
    "A^DBCA^D=0": "A^DBA^D=0",
    "BCA^piBC=0": "BA^piB=0",
    "BCA^piA=0": "BAA^pi=0",
    "class-BC": "class-B",
    "class-A": "class-A",
}


def _recipe_l2_5(rng, n, bound, drop, as_stated):
    a, k = _l2_4_blocks(rng, n, bound, _L2_5_TO_L2_4.get(drop))
    # factor K = B C through a rank factorization, padded and mixed by S
    f = col_space_basis(k)
    r = f.ncols
    s, s_inv = unimodular(rng, n)
    if r == 0:
        b = rand_matrix(rng, n, n, bound)
        c = solve_linear_constraints(rng, (n, n), [lambda x: b @ x], bound)
        return dict(A=a, B=b, C=c)
    g = solve(f, k)
    pad = n - r
    if pad:
        if rng.random() < 0.5:
            w, z = rand_matrix(rng, n, pad, bound), Matrix.zeros(pad, n)
        else:
            w, z = Matrix.zeros(n, pad), rand_matrix(rng, pad, n, bound)
        b, c = hstack(f, w) @ s, s_inv @ vstack(g, z)
    else:
        b, c = f @ s, s_inv @ g
    return dict(A=a, B=b, C=c)


def _l3_1_blocks(rng, n, bound, drop):
    """(A, B) with A nilpotent, B Hirano, AB^H = 0 and B^pi AB = 0."""
    if n == 1:
        bm = with_spectrum(rng, 1, HIR, bound, bad=drop == "class-B")
        am = Matrix([[1]]) if drop == "nilpotent-A" else Matrix.zeros(1)
        return am, bm
    r = rng.randint(0, n - 1)
    m = n - r
    sizes = [r, m]
    fill_a, fill_b = {}, {}
    if r:
        fill_b[0, 0] = with_spectrum(rng, r, (-1, 1), bound, bad=drop == "class-B")
        fill_a[0, 1] = rand_matrix(rng, r, m, bound)
        if drop == "AB^H=0" and r > 1:
            # block upper triangular with nilpotent diagonal blocks stays nilpotent
            fill_a[0, 0] = triangular(rng, [0] * r, bound)
    # inside the nilpotent part: B2 = [[N1, X], [0, 0]], A2 = [[0, Y], [0, N2]]
    m1 = rng.randint(0, m)
    m2 = m - m1
    inner = [m1, m2]
    fb, fa = {}, {}
    if m1:
        fb[0, 0] = triangular(rng, [0] * m1, bound)
    if m2:
        fa[1, 1] = triangular(rng, [0] * m2, bound)
    if m1 and m2:
        fb[0, 1] = rand_matrix(rng, m1, m2, bound)
        fa[0, 1] = rand_matrix(rng, m1, m2, bound)
    a2, b2 = _grid(inner, inner, fa), _grid(inner, inner, fb)
    if drop == "B^piAB=0":
        a2 = nilpotent(rng, m, bound)
    if drop == "nilpotent-A":
        b2 = Matrix.zeros(m)
        a2 = with_spectrum(rng, m, (0, 1), bound, bad=True)
    s, s_inv = unimodular(rng, m)
    fill_a[1, 1] = s @ a2 @ s_inv
    fill_b[1, 1] = s @ b2 @ s_inv
    t, t_inv = unimodular(rng, n)
    return t @ _grid(sizes, sizes, fill_a) @ t_inv, t @ _grid(sizes, sizes, fill_b) @ t_inv


def _recipe_l3_1(rng, n, bound, drop, as_stated):
    a, b = _l3_1_blocks(rng, n, bound, drop)
    return dict(A=a, B=b)


_L3_3_TO_L3_1 = {"AB^H=0": "AB^H=0", "B^piABA^pi=0": "B^piAB=0", "class-B": "class-B"}


def _recipe_l3_3(rng, n, bound, drop, as_stated):
    # A = diag(A1, A2) with A1 invertible and A2 nilpotent; B = [[0, 0], [B3, B4]]
    r = rng.randint(1, n - 1) if n > 1 else rng.randint(0, 1)
    m = n - r
    sizes = [r, m]
    fill_a, fill_b = {}, {}
    if r:
        fill_a[0, 0] = with_spectrum(rng, r, (-1, 1), bound, bad=drop == "class-A")
    if m:
        a2, b4 = _l3_1_blocks(rng, m, bound, _L3_3_TO_L3_1.get(drop))
        fill_a[1, 1], fill_b[1, 1] = a2, b4
        if r:
            fill_b[1, 0] = rand_matrix(rng, m, r, bound)
    if drop == "A^HB=0" and r:
        fill_b[0, 0] = nilpotent(rng, r, bound) if r > 1 else Matrix([[0]])
        fill_b[0, 1] = rand_matrix(rng, r, m, bound) if m else None
        if fill_b[0, 1] is None:
            fill_b.pop((0, 1))
    t, t_inv = unimodular(rng, n)
    return dict(A=t @ _grid(sizes, sizes, fill_a) @ t_inv, B=t @ _grid(sizes, sizes, fill_b) @ t_inv)


RECIPES: dict[TheoremId, Callable] = {
    T.L2_1: _recipe_l2_1,
    T.L2_2: _recipe_l2_2,
    T.L2_3: _recipe_l2_3,
    T.L2_4: _recipe_l2_4,
    T.L2_5: _recipe_l2_5,
    T.L2_6: _recipe_l2_6,
    T.T2_7: _recipe_t2_7,
    T.C2_8: _recipe_c2_8,
    T.C2_9: _recipe_c2_9,
    T.T2_10: _recipe_t2_10,
    T.C2_11: _recipe_c2_11,
    T.L3_1: _recipe_l3_1,
    T.L3_2: _recipe_l3_2,
    T.L3_3: _recipe_l3_3,
    T.T3_4: _recipe_t3_4,
    T.C3_5: _recipe_c3_5,
    T.T3_7: _recipe_t3_7,
    T.C3_8: _recipe_c3_8,
}

# attempts spent looking for an instance without zero blocks before settling
NONZERO_ATTEMPTS = 8


def _acceptable(tid, inst, drop, as_stated) -> bool:
    """All enforced hypotheses hold and, when probing, the dropped one fails."""
    full = bt.check_hypotheses(tid, inst)
    required = set(bt.hypothesis_names(tid, as_stated)) - {drop}
    if not all(h.holds for h in full.hypotheses if h.name in required):
        return False
    return drop is None or not full.get(drop).holds


def gen_instance(tid: TheoremId, cfg: GenConfig, trial: int = 0, drop: str | None = None) -> BlockInstance:
    """Instance of ``tid`` satisfying every hypothesis (all but ``drop``, which is violated).

    Raises GenerationFailure when no attempt within ``cfg.max_retries``
    yields an acceptable instance; when nothing is dropped that can only mean
    a generator bug, so it raises CertificateFailure instead.
    """
    tid = TheoremId(tid)
    if drop is not None and drop not in bt.hypothesis_names(tid):
        raise KeyError(f"{tid} has no hypothesis named {drop!r}")
    recipe = RECIPES[tid]
    fallback = None
    for attempt in range(cfg.max_retries):
        rng = random.Random(derive_seed(cfg.seed, tid.value, cfg.block_size, trial, attempt, drop, cfg.as_stated))
        inst = BlockInstance(recipe(rng, cfg.block_size, cfg.entry_bound, drop, cfg.as_stated))
        if not _acceptable(tid, inst, drop, cfg.as_stated):
            if drop is None:
                failing = bt.check_hypotheses(tid, inst, cfg.as_stated).failing()
                raise CertificateFailure(f"generator bug: {tid} instance violates {failing}")
            continue
        if all(not blk.is_zero() for blk in inst.blocks.values()):
            return inst
        if fallback is None:
            fallback = inst
        if attempt + 1 >= NONZERO_ATTEMPTS:
            return fallback
    if fallback is not None:
        return fallback
    raise GenerationFailure(f"no acceptable {tid} instance with {drop!r} dropped after {cfg.max_retries} tries")


# -- sweeps and probes -------------------------------------------------------------


@dataclass(frozen=True)
class TrialResult:
    trial: int
    block_size: int
    verdict: str | None
    conclusion_holds: bool | None
    failed_side_conditions: tuple[str, ...] = ()
    instance: BlockInstance | None = None


@dataclass
class ProbeResult:
    theorem: TheoremId
    dropped_hypothesis: str | None
    trials_run: int
    trials_skipped: int = 0
    counterexample: tuple[BlockInstance, TheoremReport] | None = None
    counterexample_trial: int | None = None
    config: GenConfig | None = None


@dataclass
class SweepSummary:
    theorem: TheoremId
    trials: int = 0
    verified: int = 0
    hypotheses_fail: int = 0
    conclusion_fail: int = 0
    skipped: int = 0
    side_condition_failures: dict[str, int] = field(default_factory=dict)
    counterexamples: list[TrialResult] = field(default_factory=list)
    all_blocks_nonzero: dict[int, int] = field(default_factory=dict)


def run_trial(tid: TheoremId, cfg: GenConfig, trial: int, drop: str | None = None) -> TrialResult:
    try:
        inst = gen_instance(tid, cfg, trial, drop)
    except GenerationFailure:
        return TrialResult(trial, cfg.block_size, None, None)
    report = bt.verify_conclusion(tid, inst, cfg.as_stated)
    failed = ()
    if report.witness is not None:
        failed = tuple(s.name for s in report.witness.side_conditions if not s.holds)
    keep = inst if (not report.conclusion_holds or failed) else None
    if all(not blk.is_zero() for blk in inst.blocks.values()):
        failed = failed + ("<all-nonzero>",)
    return TrialResult(trial, cfg.block_size, str(report.verdict), report.conclusion_holds, failed, keep)


def _run_trial_args(args):
    return run_trial(*args)


def _workers() -> int:
    env = os.environ.get("THREADS")
    return max(1, int(env)) if env else 1


def run_trials(tid: TheoremId, cfg: GenConfig, drop: str | None = None, workers: int | None = None) -> list[TrialResult]:
    """Run ``cfg.trials`` trials; results come back ordered by trial index."""
    jobs = [(tid, cfg, i, drop) for i in range(cfg.trials)]
    workers = workers or _workers()
    if workers == 1 or len(jobs) < 2:
        return [run_trial(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_trial_args, jobs, chunksize=8))


def soundness_sweep(tid: TheoremId, cfg: GenConfig, sizes: Iterable[int] = (2, 3, 4),
                    workers: int | None = None) -> SweepSummary:
    """Spread ``cfg.trials`` generator instances over ``sizes`` and tally verdicts."""
    tid = TheoremId(tid)
    sizes = list(sizes)
    summary = SweepSummary(tid)
    per = [cfg.trials // len(sizes) + (1 if i < cfg.trials % len(sizes) else 0) for i in range(len(sizes))]
    for size, count in zip(sizes, per):
        sub = replace(cfg, block_size=size, trials=count)
        for res in run_trials(tid, sub, None, workers):
            _tally(summary, res)
    return summary


def _tally(summary: SweepSummary, res: TrialResult) -> None:
    if res.verdict is None:
        summary.skipped += 1
        return
    summary.trials += 1
    if res.verdict == str(bt.Verdict.VERIFIED):
        summary.verified += 1
    elif res.verdict == str(bt.Verdict.HYPOTHESES_FAIL):
        summary.hypotheses_fail += 1
    else:
        summary.conclusion_fail += 1
        summary.counterexamples.append(res)
    for name in res.failed_side_conditions:
        if name == "<all-nonzero>":
            summary.all_blocks_nonzero[res.block_size] = summary.all_blocks_nonzero.get(res.block_size, 0) + 1
        else:
            summary.side_condition_failures[name] = summary.side_condition_failures.get(name, 0) + 1


def necessity_probe(tid: TheoremId, dropped: str | None, cfg: GenConfig) -> ProbeResult:
    """Look for an instance where every hypothesis but ``dropped`` holds and the conclusion fails.

    With ``dropped=None`` this is a soundness sweep that stops at the first
    counterexample.
    """
    tid = TheoremId(tid)
    result = ProbeResult(tid, dropped, 0, config=cfg)
    for trial in range(cfg.trials):
        try:
            inst = gen_instance(tid, cfg, trial, dropped)
        except GenerationFailure:
            result.trials_skipped += 1
            continue
        result.trials_run += 1
        report = bt.verify_conclusion(tid, inst, cfg.as_stated)
        if not report.conclusion_holds:
            result.counterexample = (inst, report)
            result.counterexample_trial = trial
            break
    return result


def replay(tid: TheoremId, cfg: GenConfig, trial: int, drop: str | None = None) -> BlockInstance:
    return gen_instance(tid, cfg, trial, drop)
