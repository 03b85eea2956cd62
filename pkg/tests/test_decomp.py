import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import spectral_matrices, spectral_matrix
from hirano import decomp
from hirano import gendrazin as gd
from hirano.corpus import hirano_corollary_demo, sequence_truncation
from hirano.errors import NotHirano, NotSquare, NotStronglyDrazin
from hirano.ratmat import Matrix, Poly

JORDAN = Matrix([[1, 1], [0, 1]])
SHIFT = Matrix([[0, 1], [0, 0]])


def _check_split(a, split, structured_poly=None):
    s, n = split.structured_part, split.nilpart
    assert s + n == a
    assert s @ n == n @ s
    assert gd.is_nilpotent(n) == split.nil_exponent
    if structured_poly is not None:
        assert structured_poly(s).is_zero()


def test_jordan_chevalley_diagonal():
    a = Matrix.diag(3, -2, 5)
    split = decomp.jordan_chevalley(a)
    assert split.structured_part == a and split.nilpart.is_zero()
    assert split.newton_steps <= 1


def test_jordan_chevalley_jordan_block():
    split = decomp.jordan_chevalley(JORDAN)
    assert split.structured_part == Matrix.identity(2)
    assert split.nilpart == SHIFT


def test_jordan_chevalley_nilpotent():
    split = decomp.jordan_chevalley(SHIFT)
    assert split.structured_part.is_zero() and split.nilpart == SHIFT


def test_jordan_chevalley_irrational_eigenvalues():
    # x^2 - 2 has no rational roots; the semisimple part is still rational
    a = Matrix([[0, 2, 1, 0], [1, 0, 0, 1], [0, 0, 0, 2], [0, 0, 1, 0]])
    split = decomp.jordan_chevalley(a)
    _check_split(a, split, Poly([-2, 0, 1]))
    assert not split.nilpart.is_zero()


def test_tripotent_of_tripotent():
    t = Matrix.diag(-1, 0, 1)
    split = decomp.tripotent_nilpotent(t)
    assert split.structured_part == t and split.nilpart.is_zero()
    assert split.newton_steps == 0


def test_tripotent_of_jordan_block():
    split = decomp.tripotent_nilpotent(JORDAN)
    assert split.structured_part == Matrix.identity(2)
    assert split.nilpart == SHIFT


def test_tripotent_of_demo_matrix_matches_jordan_chevalley():
    m = hirano_corollary_demo().m
    split = decomp.tripotent_nilpotent(m)
    _check_split(m, split, decomp.TRIPOTENT_POLY)
    jc = decomp.jordan_chevalley(m)
    assert (split.structured_part, split.nilpart) == (jc.structured_part, jc.nilpart)


def test_tripotent_rejects_non_hirano():
    with pytest.raises(NotHirano):
        decomp.tripotent_nilpotent(Matrix.diag(2))
    with pytest.raises(NotSquare):
        decomp.tripotent_nilpotent(Matrix([[1, 0]]))


def test_idempotent_of_idempotent():
    p = Matrix([[1, 1], [0, 0]])
    split = decomp.idempotent_nilpotent(p)
    assert split.structured_part == p and split.nilpart.is_zero()


def test_idempotent_of_truncated_block():
    a = sequence_truncation()["A"]
    split = decomp.idempotent_nilpotent(a)
    f = split.structured_part
    assert f @ f == f
    assert (split.nilpart @ split.nilpart).is_zero()
    jc = decomp.jordan_chevalley(a)
    assert f == jc.structured_part


def test_idempotent_of_jordan_block():
    split = decomp.idempotent_nilpotent(JORDAN)
    assert split.structured_part == Matrix.identity(2)
    assert split.nilpart == SHIFT


def test_idempotent_rejects_minus_one():
    with pytest.raises(NotStronglyDrazin):
        decomp.idempotent_nilpotent(Matrix.diag(-1, 1))


def test_newton_cap_values():
    assert [decomp.newton_cap(n) for n in (1, 2, 3, 4, 5, 8)] == [1, 2, 3, 3, 4, 4]


# -- properties ---------------------------------------------------------------------


@given(spectral_matrices(spectrum=(-1, 0, 1), max_size=5))
def test_tripotent_split_equals_jordan_chevalley(a):
    t = decomp.tripotent_nilpotent(a)
    jc = decomp.jordan_chevalley(a)
    _check_split(a, t, decomp.TRIPOTENT_POLY)
    assert t.structured_part == jc.structured_part
    assert t.nilpart == jc.nilpart


@given(spectral_matrices(spectrum=(-1, 0, 1), max_size=5))
def test_tripotent_squared_is_core_projection(a):
    e = decomp.tripotent_nilpotent(a).structured_part
    assert e @ e == a @ gd.drazin_inverse(a).dinv


@given(spectral_matrices(spectrum=(-2, -1, 0, 1, 3), max_size=4), st.integers(0, 2**32))
def test_structured_part_commutes_with_polynomials_in_a(a, seed):
    s = decomp.jordan_chevalley(a).structured_part
    rng = random.Random(seed)
    p = Poly([rng.randint(-3, 3) for _ in range(4)])
    for probe in (a, a @ a, p(a)):
        assert s @ probe == probe @ s


@given(st.integers(1, 8), st.integers(0, 2**32))
def test_newton_steps_within_cap(n, seed):
    rng = random.Random(seed)
    a = spectral_matrix(rng, n, (-1, 0, 1, 2, -3))
    split = decomp.jordan_chevalley(a)
    assert split.newton_steps <= decomp.newton_cap(n)
    _check_split(a, split)


@given(spectral_matrices(spectrum=(-1, 0, 1), max_size=5))
def test_idempotent_split_of_square(a):
    e = decomp.tripotent_nilpotent(a).structured_part
    f = decomp.idempotent_nilpotent(a @ a).structured_part
    assert f == e @ e


@given(spectral_matrices(spectrum=(0, 1), max_size=5))
def test_idempotent_split_invariants(a):
    split = decomp.idempotent_nilpotent(a)
    _check_split(a, split, decomp.IDEMPOTENT_POLY)
