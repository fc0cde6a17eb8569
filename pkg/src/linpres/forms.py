"""The invariant polynomial of each supported representation, with its
scaling character.

Supported lines (CLI descriptors):

- "symm-det:n"  determinant on symmetric n x n matrices, degree n;
- "skew-pf:n"   Pfaffian on alternating n x n matrices (n even >= 4), degree n/2;
- "square-det:n" determinant on all n x n matrices, degree n;
- "quadric:n"   v^t S v on k^n for an invertible symmetric S, degree 2;
- "cubic-disc"  discriminant of a binary cubic form, degree 4;
- "wedge36"     the quartic invariant on wedge^3 of k^6;
- "sp6"         its restriction to the kernel of contraction by a symplectic form;
- "mat2n:n"     det(X S X^t) on 2 x n matrices (n >= 4), degree 4;
- "hyperdet"    the 2x2x2 hyperdeterminant, degree 4.

Conventions fixed here (the underlying theory determines f only up to a
nonzero scalar): Pf of the standard pairing matrix is +1; the wedge36
quartic is calibrated once so that its value on the chosen reference point
is 4; the hyperdeterminant's sign makes the all-diagonal tensor evaluate
to +1.  Every reported value depends on these conventions.
"""

from __future__ import annotations

from fractions import Fraction

from .fields import PrimeField, RationalField
from .linalg import Matrix, pfaffian
from .multilinear import (
    RepVector,
    Space,
    merge_sign,
    sp6_contract,
    standard_symplectic_gram,
    subset_index,
)
from .polynomials import PolyRing


class FormError(ValueError):
    """Unsupported form parameters or a vector outside the form's space."""


def _bareiss_int_det(rows):
    """Exact integer determinant, fraction-free elimination."""
    n = len(rows)
    m = [list(r) for r in rows]
    prev = 1
    sign = 1
    for col in range(n):
        piv = None
        for i in range(col, n):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        for i in range(col + 1, n):
            for j in range(col + 1, n):
                m[i][j] = (m[col][col] * m[i][j] - m[i][col] * m[col][j]) // prev
            m[i][col] = 0
        prev = m[col][col]
    return sign * prev


class InvariantForm:
    """Base: a homogeneous invariant polynomial on one representation space."""

    line: str
    degree: int
    space: Space

    def descriptor(self) -> str:
        return self.line

    def _check(self, v: RepVector):
        if v.space != self.space:
            raise FormError("vector in %r, form on %r" % (v.space, self.space))

    def evaluate(self, v: RepVector):
        """Exact value of f(v) as a field element."""
        self._check(v)
        field = v.field
        if isinstance(field, PrimeField):
            fn = self.int_evaluator(field)
            return field.of(fn([c.value for c in v.coords]))
        if all(c.denominator == 1 for c in v.coords):
            fn = self.int_evaluator(field)
            return field.of(fn([c.numerator for c in v.coords]))
        return self.eval_entries(field, list(v.coords))

    def eval_entries(self, ring, entries):
        """Evaluate on a coordinate list of ring elements (field or polynomial)."""
        raise NotImplementedError

    def int_evaluator(self, field):
        """Closure on raw coordinates: ints mod p over a prime field, exact
        ints over the rationals (caller guarantees integral input)."""
        raise NotImplementedError

    def scaling_factor(self, params: dict):
        """The exact factor by which the parametrized family member scales f."""
        raise FormError("no transformation family for %r" % self.line)

    def __eq__(self, other):
        return type(other) is type(self) and other.descriptor() == self.descriptor()

    def __hash__(self):
        return hash(self.descriptor())

    def __repr__(self):
        return "InvariantForm(%r)" % self.descriptor()


def _entries_to_matrix_rows(space: Space, ring, entries):
    """Rebuild full matrix rows (ring elements) from coordinate entries."""
    kind = space.kind
    if kind == "symm":
        n = space.params["n"]
        rows = [[None] * n for _ in range(n)]
        k = 0
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = entries[k]
                rows[j][i] = entries[k]
                k += 1
        return rows
    if kind == "alt":
        n = space.params["n"]
        rows = [[ring.zero] * n for _ in range(n)]
        k = 0
        for i in range(n):
            for j in range(i + 1, n):
                rows[i][j] = entries[k]
                rows[j][i] = -entries[k]
                k += 1
        return rows
    if kind == "square":
        n = space.params["n"]
        return [entries[i * n : (i + 1) * n] for i in range(n)]
    if kind == "rect":
        m, n = space.params["m"], space.params["n"]
        return [entries[i * n : (i + 1) * n] for i in range(m)]
    raise FormError("not a matrix space")


def _det_entries(ring, rows):
    if getattr(ring, "is_field", False):
        return Matrix(ring, rows).det()
    from .linalg import det_expansion

    return det_expansion(ring, rows)


class SymmDet(InvariantForm):
    """Determinant on symmetric matrices."""

    def __init__(self, n: int):
        if n < 2:
            raise FormError("symm-det needs n >= 2")
        self.n = n
        self.line = "symm-det:%d" % n
        self.degree = n
        self.space = Space("symm", n=n)

    def eval_entries(self, ring, entries):
        return _det_entries(ring, _entries_to_matrix_rows(self.space, ring, entries))

    def int_evaluator(self, field):
        n = self.n
        pairs = [(i, j) for i in range(n) for j in range(i, n)]
        p = field.modulus

        def fn(vals):
            rows = [[0] * n for _ in range(n)]
            for v, (i, j) in zip(vals, pairs):
                rows[i][j] = v
                rows[j][i] = v
            d = _bareiss_int_det(rows)
            return d % p if p is not None else d

        return fn

    def scaling_factor(self, params):
        r = params["r"]
        return r**self.n * params["P"].det() ** 2


class SquareDet(InvariantForm):
    """Determinant on all square matrices."""

    def __init__(self, n: int):
        if n < 2:
            raise FormError("square-det needs n >= 2")
        self.n = n
        self.line = "square-det:%d" % n
        self.degree = n
        self.space = Space("square", n=n)

    def eval_entries(self, ring, entries):
        return _det_entries(ring, _entries_to_matrix_rows(self.space, ring, entries))

    def int_evaluator(self, field):
        n = self.n
        p = field.modulus

        def fn(vals):
            rows = [vals[i * n : (i + 1) * n] for i in range(n)]
            d = _bareiss_int_det(rows)
            return d % p if p is not None else d

        return fn

    def scaling_factor(self, params):
        return params["A"].det() * params["B"].det()


class SkewPf(InvariantForm):
    """Pfaffian on alternating matrices, Pf(standard pairing) = +1."""

    def __init__(self, n: int):
        if n < 4 or n % 2:
            raise FormError("skew-pf needs even n >= 4")
        self.n = n
        self.line = "skew-pf:%d" % n
        self.degree = n // 2
        self.space = Space("alt", n=n)
        self._plan = None

    def _monomial_plan(self):
        """Pfaffian as a signed sum of products of coordinates, computed once."""
        if self._plan is None:
            ring = PolyRing(RationalField(), tuple("x%d" % i for i in range(self.space.dim)))
            gens = ring.gens()
            rows = _entries_to_matrix_rows(self.space, ring, list(gens))
            pf = pfaffian(ring, rows)
            plan = []
            for key, coeff in pf.terms.items():
                idxs = tuple(i for i, e in enumerate(key) for _ in range(e))
                plan.append((coeff, idxs))
            self._plan = tuple(sorted(plan, key=lambda t: t[1]))
        return self._plan

    def eval_entries(self, ring, entries):
        acc = ring.zero
        for coeff, idxs in self._monomial_plan():
            term = ring.of(coeff)
            for i in idxs:
                term = term * entries[i]
            acc = acc + term
        return acc

    def int_evaluator(self, field):
        plan = self._monomial_plan()
        p = field.modulus

        def fn(vals):
            acc = 0
            for coeff, idxs in plan:
                t = coeff
                for i in idxs:
                    t *= vals[i]
                acc += t
            return acc % p if p is not None else acc

        return fn

    def scaling_factor(self, params):
        r = params["r"]
        return r ** (self.n // 2) * params["P"].det()


class Quadric(InvariantForm):
    """v^t S v for an invertible symmetric S (default: split antidiagonal)."""

    def __init__(self, n: int, s_entries=None):
        if n < 2:
            raise FormError("quadric needs n >= 2")
        self.n = n
        self.line = "quadric:%d" % n
        self.degree = 2
        self.space = Space("vector", n=n)
        if s_entries is None:
            s_entries = [[Fraction(1) if j == n - 1 - i else Fraction(0) for j in range(n)] for i in range(n)]
        self.s_entries = tuple(tuple(Fraction(x) for x in r) for r in s_entries)
        if [list(r) for r in self.s_entries] != [list(r) for r in zip(*self.s_entries)]:
            raise FormError("S must be symmetric")

    def gram(self, field) -> Matrix:
        m = Matrix(field, [[field.of(x) for x in r] for r in self.s_entries])
        if m.rank() != self.n:
            raise FormError("S is singular over %s" % field.descriptor)
        return m

    def eval_entries(self, ring, entries):
        acc = ring.zero
        for i, row in enumerate(self.s_entries):
            for j, s in enumerate(row):
                if s:
                    acc = acc + ring.of(s) * entries[i] * entries[j]
        return acc

    def int_evaluator(self, field):
        self.gram(field)
        p = field.modulus
        terms = []
        for i, row in enumerate(self.s_entries):
            for j, s in enumerate(row):
                if s:
                    terms.append((i, j, s if p is None else field.of(s).value))

        def fn(vals):
            acc = 0
            for i, j, s in terms:
                acc += s * vals[i] * vals[j]
            if p is not None:
                return int(acc) % p
            return acc

        return fn


class CubicDisc(InvariantForm):
    """Discriminant of a0 x^3 + a1 x^2 y + a2 x y^2 + a3 y^3."""

    line = "cubic-disc"
    degree = 4

    def __init__(self):
        self.space = Space("cubic")

    def eval_entries(self, ring, entries):
        a0, a1, a2, a3 = entries
        return (
            a1 * a1 * a2 * a2
            + ring.of(18) * a0 * a1 * a2 * a3
            - ring.of(4) * a0 * a2 * a2 * a2
            - ring.of(4) * a1 * a1 * a1 * a3
            - ring.of(27) * a0 * a0 * a3 * a3
        )

    def int_evaluator(self, field):
        p = field.modulus

        def fn(vals):
            a0, a1, a2, a3 = vals
            d = (
                a1 * a1 * a2 * a2
                + 18 * a0 * a1 * a2 * a3
                - 4 * a0 * a2**3
                - 4 * a1**3 * a3
                - 27 * a0 * a0 * a3 * a3
            )
            return d % p if p is not None else d

        return fn

    def scaling_factor(self, params):
        return params["c"] ** 4 * params["g"].det() ** 6


def _wedge36_plan():
    """Entries of the contraction endomorphism K_v: list of (row, col, sign, a, b)
    with K[row][col] = sum sign * v_a * v_b."""
    idx3, subs3 = subset_index(6, 3)
    plan = []
    for i in range(6):
        for A in subs3:
            if i not in A:
                continue
            pos = A.index(i)
            c1 = -1 if pos % 2 else 1
            rest = tuple(x for x in A if x != i)
            for B in subs3:
                if set(B) & set(rest):
                    continue
                s2 = merge_sign(rest, B)
                five = tuple(sorted(rest + B))
                (j,) = tuple(x for x in range(6) if x not in five)
                s3 = merge_sign(five, (j,))
                plan.append((j, i, c1 * s2 * s3, idx3[A], idx3[B]))
    return tuple(plan)


class Wedge36(InvariantForm):
    """The quartic invariant on wedge^3 of k^6.

    Built from the contraction endomorphism K_v(u) = ((u-contraction of v)
    wedge v) read through the top-wedge trivialization; f = c0 * tr(K_v^2)
    with c0 calibrated once so the reference point below evaluates to 4.
    """

    line = "wedge36"
    degree = 4

    _plan = None
    _c0: Fraction | None = None

    def __init__(self):
        self.space = Space("wedge", d=3, n=6)

    @classmethod
    def plan(cls):
        if cls._plan is None:
            cls._plan = _wedge36_plan()
        return cls._plan

    @classmethod
    def _reference_coords(cls):
        """w-image of a tensor pair with target value 4 (split into basis coords)."""
        idx3, _ = subset_index(6, 3)
        coords = [0] * 20
        coords[idx3[(0, 2, 3)]] = 1
        coords[idx3[(0, 4, 5)]] = 1
        coords[idx3[(1, 2, 3)]] = 1
        coords[idx3[(1, 4, 5)]] = -1
        return coords

    @classmethod
    def calibration(cls) -> Fraction:
        """The constant c0, computed once over the integers."""
        if cls._c0 is None:
            t = cls._trace_k2_int(cls._reference_coords())
            if t == 0:
                raise FormError("calibration point degenerated")
            cls._c0 = Fraction(4, t)
        return cls._c0

    @classmethod
    def _trace_k2_int(cls, vals):
        k = [[0] * 6 for _ in range(6)]
        for row, col, s, a, b in cls.plan():
            k[row][col] += s * vals[a] * vals[b]
        acc = 0
        for i in range(6):
            ki = k[i]
            for j in range(6):
                acc += ki[j] * k[j][i]
        return acc

    def eval_entries(self, ring, entries):
        z = ring.zero
        k = [[z] * 6 for _ in range(6)]
        for row, col, s, a, b in self.plan():
            term = entries[a] * entries[b]
            if s < 0:
                k[row][col] = k[row][col] - term
            else:
                k[row][col] = k[row][col] + term
        acc = z
        for i in range(6):
            for j in range(6):
                acc = acc + k[i][j] * k[j][i]
        return ring.of(self.calibration()) * acc

    def int_evaluator(self, field):
        p = field.modulus
        c0 = self.calibration()
        plan = self.plan()
        if p is not None:
            if c0.denominator % p == 0:
                raise FormError("calibration constant undefined mod %d" % p)
            c0p = c0.numerator * pow(c0.denominator, p - 2, p) % p

        def fn(vals):
            k = [[0] * 6 for _ in range(6)]
            for row, col, s, a, b in plan:
                k[row][col] += s * vals[a] * vals[b]
            acc = 0
            for i in range(6):
                ki = k[i]
                for j in range(6):
                    acc += ki[j] * k[j][i]
            if p is not None:
                return acc * c0p % p
            r = c0 * acc
            return r.numerator if r.denominator == 1 else r

        return fn

    def scaling_factor(self, params):
        return params["c"] ** 4 * params["g"].det() ** 2


def wedge36_pair_point(x: RepVector, y: RepVector) -> RepVector:
    """e_1 wedge x + e_2 wedge y in wedge^3 of k^6, for x, y alternating 4x4
    on the last four basis vectors.  The wedge36 quartic takes the value
    <x, y>^2 - 4 Pf(x) Pf(y) on such points."""
    alt4 = Space("alt", n=4)
    if x.space != alt4 or y.space != alt4 or x.field != y.field:
        raise FormError("expected two alternating 4x4 vectors over one field")
    field = x.field
    idx3, _ = subset_index(6, 3)
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    coords = [field.zero] * 20
    for k, (i, j) in enumerate(pairs):
        coords[idx3[(0, i + 2, j + 2)]] = x.coords[k]
        coords[idx3[(1, i + 2, j + 2)]] = y.coords[k]
    return RepVector._raw(Space("wedge", d=3, n=6), field, coords)


class Sp6Quartic(InvariantForm):
    """Restriction of the wedge36 quartic to the contraction kernel.

    Vectors are carried in ambient wedge(3, 6) coordinates; evaluation
    requires contraction by b to vanish.  The intrinsic dimension is 14.
    """

    line = "sp6"
    degree = 4
    intrinsic_dim = 14

    def __init__(self):
        self.space = Space("wedge", d=3, n=6)
        self.ambient = Wedge36()
        self._kernel_cache: dict = {}

    def b_gram(self, field) -> Matrix:
        return standard_symplectic_gram(field, 6)

    def contraction_matrix(self, field) -> Matrix:
        b = self.b_gram(field)
        cols = []
        for i in range(20):
            cols.append(sp6_contract(RepVector.basis(self.space, field, i), b))
        return Matrix(field, list(zip(*cols)))

    def kernel_basis(self, field) -> Matrix:
        """20 x 14 matrix whose columns span the contraction kernel."""
        if field not in self._kernel_cache:
            ker = self.contraction_matrix(field).kernel()
            if len(ker) != self.intrinsic_dim:
                raise FormError("contraction kernel has unexpected dimension")
            self._kernel_cache[field] = Matrix(field, list(zip(*ker)))
        return self._kernel_cache[field]

    def in_kernel(self, v: RepVector) -> bool:
        self._check(v)
        return all(c == v.field.zero for c in sp6_contract(v, self.b_gram(v.field)))

    def evaluate(self, v: RepVector):
        self._check(v)
        if not self.in_kernel(v):
            raise FormError("vector has nonzero contraction; outside the restricted space")
        return self.ambient.evaluate(v)

    def eval_entries(self, ring, entries):
        # caller guarantees membership in the kernel
        return self.ambient.eval_entries(ring, entries)

    def int_evaluator(self, field):
        # raw evaluator skips the membership check; used on kernel points
        return self.ambient.int_evaluator(field)

    def scaling_factor(self, params):
        return params["c"] ** 4 * params["g"].det() ** 2


class Mat2n(InvariantForm):
    """det(X S X^t) on 2 x n matrices, S invertible symmetric (default split)."""

    def __init__(self, n: int, s_entries=None):
        if n < 4:
            raise FormError("mat2n needs n >= 4")
        self.n = n
        self.line = "mat2n:%d" % n
        self.degree = 4
        self.space = Space("rect", m=2, n=n)
        if s_entries is None:
            s_entries = [[Fraction(1) if j == n - 1 - i else Fraction(0) for j in range(n)] for i in range(n)]
        self.s_entries = tuple(tuple(Fraction(x) for x in r) for r in s_entries)
        if [list(r) for r in self.s_entries] != [list(r) for r in zip(*self.s_entries)]:
            raise FormError("S must be symmetric")

    def gram(self, field) -> Matrix:
        m = Matrix(field, [[field.of(x) for x in r] for r in self.s_entries])
        if m.rank() != self.n:
            raise FormError("S is singular over %s" % field.descriptor)
        return m

    def _pairs(self):
        out = []
        for j, row in enumerate(self.s_entries):
            for k, s in enumerate(row):
                if s:
                    out.append((j, k, s))
        return out

    def eval_entries(self, ring, entries):
        n = self.n
        x0 = entries[:n]
        x1 = entries[n:]
        m00 = ring.zero
        m01 = ring.zero
        m10 = ring.zero
        m11 = ring.zero
        for j, k, s in self._pairs():
            c = ring.of(s)
            m00 = m00 + c * x0[j] * x0[k]
            m01 = m01 + c * x0[j] * x1[k]
            m10 = m10 + c * x1[j] * x0[k]
            m11 = m11 + c * x1[j] * x1[k]
        return m00 * m11 - m01 * m10

    def int_evaluator(self, field):
        self.gram(field)
        n = self.n
        p = field.modulus
        pairs = [(j, k, s if p is None else field.of(s).value) for j, k, s in self._pairs()]

        def fn(vals):
            x0 = vals[:n]
            x1 = vals[n:]
            m00 = m01 = m10 = m11 = 0
            for j, k, s in pairs:
                m00 += s * x0[j] * x0[k]
                m01 += s * x0[j] * x1[k]
                m10 += s * x1[j] * x0[k]
                m11 += s * x1[j] * x1[k]
            d = m00 * m11 - m01 * m10
            if p is not None:
                return int(d) % p
            return d

        return fn

    def scaling_factor(self, params):
        return (params["g1"].det() * params["mu"]) ** 2


class Hyperdet(InvariantForm):
    """Cayley's 2x2x2 hyperdeterminant; the diagonal tensor evaluates to +1.

    Equals the discriminant in t of det(A + t B) for the two frontal slices
    A, B of the tensor.
    """

    line = "hyperdet"
    degree = 4

    def __init__(self):
        self.space = Space("tritensor")

    @staticmethod
    def _formula(t, two, four):
        t000, t001, t010, t011, t100, t101, t110, t111 = t
        sq = (
            t000 * t000 * t111 * t111
            + t001 * t001 * t110 * t110
            + t010 * t010 * t101 * t101
            + t011 * t011 * t100 * t100
        )
        mixed = (
            t000 * t001 * t110 * t111
            + t000 * t010 * t101 * t111
            + t000 * t011 * t100 * t111
            + t001 * t010 * t101 * t110
            + t001 * t011 * t100 * t110
            + t010 * t011 * t100 * t101
        )
        quads = t000 * t011 * t101 * t110 + t001 * t010 * t100 * t111
        return sq - two * mixed + four * quads

    def eval_entries(self, ring, entries):
        return self._formula(entries, ring.of(2), ring.of(4))

    def int_evaluator(self, field):
        p = field.modulus

        def fn(vals):
            d = self._formula(vals, 2, 4)
            return d % p if p is not None else d

        return fn

    def scaling_factor(self, params):
        return (params["g1"].det() * params["g2"].det() * params["g3"].det()) ** 2


_FORM_FACTORIES = {
    "symm-det": (SymmDet, True),
    "skew-pf": (SkewPf, True),
    "square-det": (SquareDet, True),
    "quadric": (Quadric, True),
    "cubic-disc": (CubicDisc, False),
    "wedge36": (Wedge36, False),
    "sp6": (Sp6Quartic, False),
    "mat2n": (Mat2n, True),
    "hyperdet": (Hyperdet, False),
}


def form_descriptors() -> list[str]:
    return sorted(_FORM_FACTORIES)


def parse_form(descriptor: str) -> InvariantForm:
    """Build a form from its CLI descriptor, e.g. "symm-det:3" or "hyperdet"."""
    d = descriptor.strip()
    name, sep, arg = d.partition(":")
    entry = _FORM_FACTORIES.get(name)
    if entry is None:
        raise FormError("unknown form %r (known: %s)" % (descriptor, ", ".join(form_descriptors())))
    factory, wants_n = entry
    if wants_n:
        if not sep:
            raise FormError("form %r needs a size, e.g. %r" % (name, name + ":4"))
        try:
            n = int(arg)
        except ValueError as exc:
            raise FormError("bad size %r" % arg) from exc
        return factory(n)
    if sep:
        raise FormError("form %r takes no size" % name)
    return factory()
