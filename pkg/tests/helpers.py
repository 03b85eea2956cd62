"""Strategies and independent oracles shared by the test modules.

The oracles route every computation through sympy so they share no code
with the package under test.
"""

import random
from fractions import Fraction

import sympy
from hypothesis import strategies as st

from hirano.ratmat import Matrix


def rationals(bound=4, dens=(1, 1, 1, 2, 3)):
    return st.builds(Fraction, st.integers(-bound, bound), st.sampled_from(dens))


@st.composite
def matrices(draw, nrows=None, ncols=None, max_size=4, bound=4, integer=False):
    r = nrows if nrows is not None else draw(st.integers(1, max_size))
    c = ncols if ncols is not None else draw(st.integers(1, max_size))
    elem = st.integers(-bound, bound) if integer else rationals(bound)
    return Matrix([[draw(elem) for _ in range(c)] for _ in range(r)])


@st.composite
def square_matrices(draw, min_size=1, max_size=4, bound=4, integer=False):
    n = draw(st.integers(min_size, max_size))
    return draw(matrices(n, n, bound=bound, integer=integer))


def unimodular_pair(rng: random.Random, n: int):
    lower = Matrix([[1 if i == j else (rng.randint(-1, 1) if i > j else 0) for j in range(n)] for i in range(n)])
    upper = Matrix([[1 if i == j else (rng.randint(-1, 1) if i < j else 0) for j in range(n)] for i in range(n)])
    t = lower @ upper
    return t, from_sympy(to_sympy(t).inv())


def spectral_matrix(rng: random.Random, n: int, spectrum, off_bound=2) -> Matrix:
    diag = [rng.choice(list(spectrum)) for _ in range(n)]
    u = Matrix([[diag[i] if i == j else (rng.randint(-off_bound, off_bound) if i < j else 0)
                 for j in range(n)] for i in range(n)])
    t, t_inv = unimodular_pair(rng, n)
    return t @ u @ t_inv


@st.composite
def spectral_matrices(draw, spectrum=(-1, 0, 1, 2), min_size=1, max_size=4):
    """Conjugated upper triangular matrices whose eigenvalues come from ``spectrum``."""
    n = draw(st.integers(min_size, max_size))
    rng = random.Random(draw(st.integers(0, 2**32)))
    return spectral_matrix(rng, n, spectrum)


# -- sympy oracles -------------------------------------------------------------------


def to_sympy(m: Matrix) -> sympy.Matrix:
    return sympy.Matrix(m.nrows, m.ncols, lambda i, j: sympy.Rational(m[i, j].numerator, m[i, j].denominator))


def from_sympy(s: sympy.Matrix) -> Matrix:
    return Matrix([[Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in s.row(i)]
                   for i in range(s.rows)])


def oracle_matmul(a: Matrix, b: Matrix) -> Matrix:
    return from_sympy(to_sympy(a) * to_sympy(b))


def oracle_char_poly(m: Matrix) -> list[Fraction]:
    """Coefficients of det(xI - m), lowest degree first."""
    x = sympy.Symbol("x")
    coeffs = to_sympy(m).charpoly(x).all_coeffs()[::-1]
    return [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in coeffs]


def oracle_drazin(m: Matrix) -> Matrix:
    """Brute-force Drazin inverse.

    The Drazin inverse is ``A^n q(A)`` for some polynomial ``q`` of degree
    below ``n``, and within that family it is the only ``Z`` with
    ``A^(n+1) Z = A^n``.  Solve that linear system for the coefficients of
    ``Z`` in ``span{A^n, ..., A^2n}`` and read off ``Z``.
    """
    a = to_sympy(m)
    n = a.rows
    powers = [a**k for k in range(n, 2 * n + 1)]
    cs = sympy.symbols(f"c0:{n + 1}")
    z = sum((c * p for c, p in zip(cs, powers)), sympy.zeros(n, n))
    eqs = list(a ** (n + 1) * z - a**n)
    sol = sympy.linsolve(eqs, cs)
    (vals,) = list(sol)
    vals = [v.subs({c: 0 for c in cs}) for v in vals]
    return from_sympy(sum((v * p for v, p in zip(vals, powers)), sympy.zeros(n, n)))


def is_nilpotent_sympy(m: Matrix) -> bool:
    s = to_sympy(m)
    return (s ** s.rows).is_zero_matrix


def satisfies_drazin_sympy(m: Matrix, z: Matrix) -> bool:
    a, zz = to_sympy(m), to_sympy(z)
    return ((a * zz - zz * a).is_zero_matrix and (zz * a * zz - zz).is_zero_matrix
            and ((a - a * a * zz) ** a.rows).is_zero_matrix)
