"""Samplers must satisfy their exact postconditions."""

import random
from fractions import Fraction

import pytest

from linpres.fields import QQ, PrimeField
from linpres.linalg import Matrix
from linpres.multilinear import standard_symplectic_gram, split_symmetric_gram
from linpres.sampling import (
    SamplingError,
    forced_det_matrix,
    go_element,
    gsp6_element,
    invertible_matrix,
    isotropic_vector,
    rand_vector,
    solve_power,
    unimodular_matrix,
)

F7 = PrimeField(7)


def test_unimodular_det_one():
    rng = random.Random(0)
    for field in (QQ, F7):
        for n in (2, 4, 6):
            for _ in range(5):
                assert unimodular_matrix(field, rng, n).det() == field.one


def test_invertible_and_forced_det():
    rng = random.Random(1)
    for field in (QQ, F7):
        for _ in range(5):
            m = invertible_matrix(field, rng, 3)
            assert m.det() != field.zero
    for target in (F7.of(3), F7.of(6)):
        assert forced_det_matrix(F7, rng, 4, target).det() == target
    for target in (QQ.of(1), QQ.of(-1), QQ.of(Fraction(2, 3))):
        assert forced_det_matrix(QQ, rng, 3, target).det() == target


def test_gsp6_similitude_relation():
    rng = random.Random(2)
    for field in (QQ, F7):
        b = standard_symplectic_gram(field, 6)
        for _ in range(4):
            g, mu = gsp6_element(field, rng)
            assert g.transpose() @ b @ g == b.scale(mu)
            assert g.det() == mu**3


def test_go_similitude_relation():
    rng = random.Random(3)
    s_hyper = Matrix.from_ints(F7, [[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]])
    for field in (QQ, F7):
        s = split_symmetric_gram(field, 4)
        for _ in range(4):
            g, mu = go_element(field, rng, s)
            assert mu != field.zero
            assert g.transpose() @ s @ g == s.scale(mu)
    for _ in range(4):
        g, mu = go_element(F7, rng, s_hyper)
        assert g.transpose() @ s_hyper @ g == s_hyper.scale(mu)


def test_go_odd_dimension():
    rng = random.Random(4)
    s = split_symmetric_gram(F7, 5)
    for _ in range(4):
        g, mu = go_element(F7, rng, s)
        assert g.transpose() @ s @ g == s.scale(mu)


def test_go_non_antidiagonal_keeps_form():
    rng = random.Random(5)
    s = Matrix.from_ints(F7, [[1, 0, 0], [0, 2, 0], [0, 0, 3]])
    g, mu = go_element(F7, rng, s)
    assert mu == F7.one
    assert g.transpose() @ s @ g == s


def test_isotropic_vectors():
    rng = random.Random(6)
    diag = Matrix.from_ints(F7, [[1, 0, 0], [0, 2, 0], [0, 0, 3]])
    for field in (QQ, F7):
        for n in (4, 5):
            s = split_symmetric_gram(field, n)
            for _ in range(6):
                v = isotropic_vector(field, rng, s)
                sv = s.apply(v)
                q = field.zero
                for a, b in zip(v, sv):
                    q = q + a * b
                assert q == field.zero
                assert any(x != field.zero for x in v)
    v = isotropic_vector(F7, rng, diag)
    sv = diag.apply(v)
    q = F7.zero
    for a, b in zip(v, sv):
        q = q + a * b
    assert q == F7.zero


def test_solve_power():
    rng = random.Random(7)
    assert solve_power(F7, rng, 3, F7.of(6)) ** 3 == F7.of(6)
    assert solve_power(F7, rng, 2, F7.of(3)) is None
    assert solve_power(F7, rng, 4, F7.of(0)) is None
    assert solve_power(QQ, rng, 3, QQ.of(8)) == QQ.of(2)
    assert solve_power(QQ, rng, 3, QQ.of(-8)) == QQ.of(-2)
    assert solve_power(QQ, rng, 2, QQ.of(4)) == QQ.of(2)
    assert solve_power(QQ, rng, 2, QQ.of(-4)) is None
    assert solve_power(QQ, rng, 3, QQ.of(Fraction(8, 27))) == QQ.of(Fraction(2, 3))
    assert solve_power(QQ, rng, 2, QQ.of(2)) is None


def test_seeded_determinism():
    a = unimodular_matrix(QQ, random.Random(42), 4)
    b = unimodular_matrix(QQ, random.Random(42), 4)
    assert a == b
    g1, m1 = gsp6_element(F7, random.Random(9))
    g2, m2 = gsp6_element(F7, random.Random(9))
    assert g1 == g2 and m1 == m2


def test_forced_det_rejects_zero_target():
    with pytest.raises(SamplingError):
        forced_det_matrix(F7, random.Random(0), 3, F7.zero)


def test_rand_vector_nonzero():
    rng = random.Random(8)
    from linpres.multilinear import Space

    sp = Space("cubic")
    for _ in range(20):
        assert not rand_vector(sp, F7, rng, nonzero=True).is_zero()
