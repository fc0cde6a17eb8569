"""Seeded exact samplers: vectors, invertible matrices, isometry groups.

Every function takes an explicit random.Random; nothing here touches global
randomness.  Over the rationals, matrix samplers favor small integer entries
(transvection words) so downstream exact arithmetic stays cheap.
"""

from __future__ import annotations

from fractions import Fraction

from .fields import PrimeField, RationalField
from .linalg import Matrix
from .multilinear import RepVector, Space


class SamplingError(RuntimeError):
    """A sampler exhausted its resample budget."""


def rand_vector(space: Space, field, rng, bound=9, nonzero=False) -> RepVector:
    while True:
        v = RepVector(space, field, [field.sample(rng, bound) for _ in range(space.dim)])
        if not nonzero or not v.is_zero():
            return v


def rand_int_vector(space: Space, field, rng, lo=-9, hi=9, nonzero=False) -> RepVector:
    while True:
        v = RepVector(space, field, [field.of(rng.randint(lo, hi)) for _ in range(space.dim)])
        if not nonzero or not v.is_zero():
            return v


def sz_vector(space: Space, field, rng) -> RepVector:
    """One identity-test sample per coordinate from the field's large test set."""
    return RepVector._raw(space, field, [field.sample_sz(rng) for _ in range(space.dim)])


def rand_unit(field, rng, bound=9):
    while True:
        x = field.sample(rng, bound)
        if x != field.zero:
            return x


def unimodular_matrix(field, rng, n: int, words=None) -> Matrix:
    """Product of elementary transvections; determinant exactly one."""
    if words is None:
        words = 3 * n
    rows = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    for _ in range(words):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        c = field.of(rng.choice([-2, -1, 1, 2]))
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    return Matrix(field, rows)


def invertible_matrix(field, rng, n: int, bound=4) -> Matrix:
    """Invertible matrix; dense entries over a prime field, a transvection
    word over the rationals."""
    if isinstance(field, PrimeField):
        while True:
            m = Matrix(field, [[field.sample(rng) for _ in range(n)] for _ in range(n)])
            if m.det() != field.zero:
                return m
    m = unimodular_matrix(field, rng, n)
    if rng.randrange(2):
        m = scale_column(m, rng.randrange(n), field.of(-1))
    return m


def scale_column(m: Matrix, j: int, c) -> Matrix:
    rows = [list(r) for r in m.rows]
    for r in rows:
        r[j] = r[j] * c
    return Matrix(m.ring, rows)


def forced_det_matrix(field, rng, n: int, target) -> Matrix:
    """Invertible matrix with the exact requested determinant."""
    if target == field.zero:
        raise SamplingError("determinant target must be nonzero")
    m = invertible_matrix(field, rng, n)
    return scale_column(m, rng.randrange(n), target / m.det())


def _outer(field, u, w) -> Matrix:
    return Matrix(field, [[a * b for b in w] for a in u])


def symplectic_transvection(field, b: Matrix, u, lam) -> Matrix:
    """v -> v + lam b(v, u) u; preserves the alternating form b exactly."""
    bu = b.apply(u)
    return Matrix.identity(field, b.nrows) + _outer(field, u, bu).scale(lam)


def gsp6_element(field, rng, mu=None, transvections=8):
    """(g, mu) with g^t b g = mu b for the standard pairing on k^6.

    Over the rationals mu defaults to one; over a prime field to a random unit.
    """
    from .multilinear import standard_symplectic_gram

    b = standard_symplectic_gram(field, 6)
    g = Matrix.identity(field, 6)
    for _ in range(transvections):
        u = [field.of(rng.randint(-2, 2)) for _ in range(6)]
        if all(x == field.zero for x in u):
            continue
        lam = field.sample(rng, 2)
        if lam == field.zero:
            continue
        g = g @ symplectic_transvection(field, b, u, lam)
    if mu is None:
        if isinstance(field, RationalField):
            mu = field.one
        else:
            mu = rand_unit(field, rng)
    d = [mu, field.one, mu, field.one, mu, field.one]
    sim = Matrix(field, [[d[i] if i == j else field.zero for j in range(6)] for i in range(6)])
    return sim @ g, mu


def _is_antidiagonal(s: Matrix) -> bool:
    n = s.nrows
    z = s.ring.zero
    return all(s.entry(i, j) == z for i in range(n) for j in range(n) if i + j != n - 1)


def go_element(field, rng, s: Matrix, mu=None, reflections=None):
    """(g, mu) with g^t s g = mu s, via reflections and, for antidiagonal s,
    a diagonal similitude.  For other s only mu = 1 is produced."""
    n = s.nrows
    if reflections is None:
        reflections = 2 * n
    g = Matrix.identity(field, n)
    done = 0
    budget = 64 * reflections
    while done < reflections:
        budget -= 1
        if budget < 0:
            raise SamplingError("reflection sampling stalled")
        u = [field.of(rng.randint(-3, 3)) for _ in range(n)]
        su = s.apply(u)
        q = None
        for a, b in zip(u, su):
            q = a * b if q is None else q + a * b
        if q == field.zero:
            continue
        g = g @ (Matrix.identity(field, n) - _outer(field, u, su).scale(field.of(2) / q))
        done += 1
    if not _is_antidiagonal(s):
        if mu is not None and mu != field.one:
            raise SamplingError("similitudes implemented for antidiagonal s only")
        return g, field.one
    if mu is None:
        if isinstance(field, RationalField):
            mu = field.of(rng.choice([1, -1])) if n % 2 == 0 else field.one
        elif n % 2 == 0:
            mu = rand_unit(field, rng)
        else:
            root = rand_unit(field, rng)
            mu = root * root
    d = [None] * n
    for i in range(n // 2):
        if isinstance(field, RationalField):
            d[i] = field.of(rng.choice([1, -1, 2, Fraction(1, 2)]))
        else:
            d[i] = rand_unit(field, rng)
        d[n - 1 - i] = mu / d[i]
    if n % 2:
        mid = n // 2
        root = _solve_power(field, rng, 2, mu)
        if root is None:
            raise SamplingError("similitude factor has no square root")
        d[mid] = root
    sim = Matrix(field, [[d[i] if i == j else field.zero for j in range(n)] for i in range(n)])
    return sim @ g, mu


def isotropic_vector(field, rng, s: Matrix, tries=512):
    """Nonzero v with v^t s v = 0; solves one coordinate linearly."""
    n = s.nrows
    z = field.zero
    free = [i for i in range(n) if s.entry(i, i) == z]
    for _ in range(tries):
        if free:
            last = rng.choice(free)
            v = [field.of(rng.randint(-4, 4)) for _ in range(n)]
            v[last] = z
            sv = s.apply(v)
            lin = sv[last] * field.of(2)
            if lin == z:
                continue
            q = None
            for a, b in zip(v, sv):
                q = a * b if q is None else q + a * b
            v[last] = -q / lin
            if any(x != z for x in v):
                return v
        else:
            v = [field.of(rng.randint(-4, 4)) for _ in range(n)]
            sv = s.apply(v)
            q = None
            for a, b in zip(v, sv):
                q = a * b if q is None else q + a * b
            if q == z and any(x != z for x in v):
                return v
    raise SamplingError("no isotropic vector found")


def _int_kth_root(a: int, k: int):
    """Exact integer k-th root of a >= 0, else None."""
    if a < 0:
        return None
    if a in (0, 1):
        return a
    lo, hi = 0, 1 << ((a.bit_length() + k - 1) // k + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < a:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == a else None


def _solve_power(field, rng, k: int, target):
    """Some r with r^k == target, or None if there is none."""
    if target == field.zero:
        return None
    if isinstance(field, PrimeField):
        units = list(field.units())
        rng.shuffle(units)
        for r in units:
            if r**k == target:
                return r
        return None
    t = Fraction(target)
    neg = t < 0
    if neg and k % 2 == 0:
        return None
    num = _int_kth_root(abs(t.numerator), k)
    den = _int_kth_root(t.denominator, k)
    if num is None or den is None:
        return None
    r = Fraction(num, den)
    return field.of(-r if neg else r)


def solve_power(field, rng, k: int, target):
    return _solve_power(field, rng, k, target)
