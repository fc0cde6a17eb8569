"""Representation spaces, their vectors, and multilinear scaffolding.

Spaces: symmetric/alternating/square/rectangular matrices, plain vectors,
wedge powers, binary cubic forms, 2x2x2 tensors.  Vectors are stored as flat
coordinate tuples in a canonical basis per space:

- symm(n): upper-triangle entries (i <= j), lexicographic;
- alt(n): above-diagonal entries (i < j), lexicographic;
- square(n)/rect(m,n): row-major entries;
- wedge(d,n): coordinates on sorted d-subsets in colexicographic order;
- cubic: (a0, a1, a2, a3) for a0*x^3 + a1*x^2*y + a2*x*y^2 + a3*y^3;
- tritensor: 2x2x2 entries, index (i,j,k) -> 4i + 2j + k.

Also here: degree-4 polarization, the bilinear form b_x with its radical,
the symplectic pairings used to define the trilinear map t, wedge products,
and the symplectic contraction of 3-vectors.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations

from .fields import FieldError
from .linalg import LinAlgError, Matrix


class SpaceError(ValueError):
    """Unknown space kind, bad parameters, or a vector outside the space."""


_KINDS = ("symm", "alt", "square", "rect", "vector", "wedge", "cubic", "tritensor")


class Space:
    """Immutable representation-space descriptor."""

    __slots__ = ("kind", "params")

    def __init__(self, kind: str, **params):
        if kind not in _KINDS:
            raise SpaceError("unknown space kind %r" % kind)
        need = {
            "symm": ("n",),
            "alt": ("n",),
            "square": ("n",),
            "rect": ("m", "n"),
            "vector": ("n",),
            "wedge": ("d", "n"),
            "cubic": (),
            "tritensor": (),
        }[kind]
        if set(params) != set(need):
            raise SpaceError("space %r needs params %r" % (kind, need))
        for k, v in params.items():
            if not isinstance(v, int) or v < 1:
                raise SpaceError("space parameter %s must be a positive integer" % k)
        if kind in ("symm", "alt", "square") and params["n"] < 2:
            raise SpaceError("matrix spaces need n >= 2")
        if kind == "wedge" and not 1 <= params["d"] <= params["n"]:
            raise SpaceError("wedge degree out of range")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", dict(params))

    def __setattr__(self, name, val):
        raise AttributeError("Space is immutable")

    @property
    def dim(self) -> int:
        p = self.params
        kind = self.kind
        if kind == "symm":
            return p["n"] * (p["n"] + 1) // 2
        if kind == "alt":
            return p["n"] * (p["n"] - 1) // 2
        if kind == "square":
            return p["n"] * p["n"]
        if kind == "rect":
            return p["m"] * p["n"]
        if kind == "vector":
            return p["n"]
        if kind == "wedge":
            return _binom(p["n"], p["d"])
        if kind == "cubic":
            return 4
        return 8

    def _key(self):
        return (self.kind, tuple(sorted(self.params.items())))

    def __eq__(self, other):
        return isinstance(other, Space) and other._key() == self._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        inner = ", ".join("%s=%d" % kv for kv in sorted(self.params.items()))
        return "Space(%r%s)" % (self.kind, ", " + inner if inner else "")


def _binom(n, d):
    num = 1
    for i in range(d):
        num = num * (n - i) // (i + 1)
    return num


def subsets_colex(n: int, d: int):
    """All sorted d-subsets of {0..n-1} in colexicographic order."""
    return sorted(combinations(range(n), d), key=lambda t: tuple(reversed(t)))


_SUBSET_CACHE: dict = {}


def subset_index(n: int, d: int):
    """Map sorted d-subset -> coordinate index, plus the ordered subset list."""
    key = (n, d)
    if key not in _SUBSET_CACHE:
        subs = subsets_colex(n, d)
        _SUBSET_CACHE[key] = ({s: i for i, s in enumerate(subs)}, subs)
    return _SUBSET_CACHE[key]


def merge_sign(a, b) -> int:
    """Sign of sorting the concatenation of two disjoint sorted tuples; 0 if not disjoint."""
    if set(a) & set(b):
        return 0
    inv = 0
    for x in a:
        for y in b:
            if x > y:
                inv += 1
    return -1 if inv % 2 else 1


def _symm_pairs(n):
    return [(i, j) for i in range(n) for j in range(i, n)]


def _alt_pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


class RepVector:
    """Immutable element of a representation space over one field."""

    __slots__ = ("space", "field", "coords")

    def __init__(self, space: Space, field, coords):
        coords = tuple(field.of(c) for c in coords)
        if len(coords) != space.dim:
            raise SpaceError(
                "expected %d coordinates for %r, got %d" % (space.dim, space, len(coords))
            )
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, val):
        raise AttributeError("RepVector is immutable")

    @classmethod
    def _raw(cls, space, field, coords):
        v = object.__new__(cls)
        object.__setattr__(v, "space", space)
        object.__setattr__(v, "field", field)
        object.__setattr__(v, "coords", tuple(coords))
        return v

    @classmethod
    def zero(cls, space, field):
        return cls._raw(space, field, (field.zero,) * space.dim)

    @classmethod
    def basis(cls, space, field, i):
        coords = [field.zero] * space.dim
        coords[i] = field.one
        return cls._raw(space, field, coords)

    def _check_mate(self, other):
        if not isinstance(other, RepVector):
            raise SpaceError("expected a RepVector")
        if other.space != self.space or other.field != self.field:
            raise SpaceError("mixed spaces or fields")

    def __add__(self, other):
        self._check_mate(other)
        return RepVector._raw(
            self.space, self.field, (a + b for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other):
        self._check_mate(other)
        return RepVector._raw(
            self.space, self.field, (a - b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self):
        return RepVector._raw(self.space, self.field, (-a for a in self.coords))

    def scale(self, c):
        c = self.field.of(c)
        return RepVector._raw(self.space, self.field, (c * a for a in self.coords))

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(a == z for a in self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, RepVector)
            and other.space == self.space
            and other.field == self.field
            and other.coords == self.coords
        )

    def __hash__(self):
        return hash((self.space, self.field, self.coords))

    def __repr__(self):
        return "RepVector(%r, [%s])" % (
            self.space,
            ", ".join(self.field.format(c) for c in self.coords),
        )

    # matrix interplay

    @classmethod
    def from_matrix(cls, space, field, rows):
        """Build from full matrix entries, validating the symmetry tag."""
        kind = space.kind
        rows = [[field.of(x) for x in r] for r in rows]
        m = len(rows)
        n = len(rows[0]) if rows else 0
        if any(len(r) != n for r in rows):
            raise SpaceError("ragged matrix")
        if kind in ("symm", "alt", "square"):
            if (m, n) != (space.params["n"],) * 2:
                raise SpaceError("matrix shape mismatch")
        elif kind == "rect":
            if (m, n) != (space.params["m"], space.params["n"]):
                raise SpaceError("matrix shape mismatch")
        else:
            raise SpaceError("space %r is not a matrix kind" % kind)
        if kind == "symm":
            for i in range(n):
                for j in range(i + 1, n):
                    if rows[i][j] != rows[j][i]:
                        raise SpaceError("matrix is not symmetric")
            coords = [rows[i][j] for i, j in _symm_pairs(n)]
        elif kind == "alt":
            for i in range(n):
                if rows[i][i] != field.zero:
                    raise SpaceError("alternating matrix needs zero diagonal")
                for j in range(i + 1, n):
                    if rows[i][j] != -rows[j][i]:
                        raise SpaceError("matrix is not alternating")
            coords = [rows[i][j] for i, j in _alt_pairs(n)]
        else:
            coords = [x for r in rows for x in r]
        return cls._raw(space, field, coords)

    def to_matrix(self) -> Matrix:
        """Full matrix form for matrix kinds."""
        kind = self.space.kind
        field = self.field
        if kind == "symm":
            n = self.space.params["n"]
            rows = [[field.zero] * n for _ in range(n)]
            for c, (i, j) in zip(self.coords, _symm_pairs(n)):
                rows[i][j] = c
                rows[j][i] = c
        elif kind == "alt":
            n = self.space.params["n"]
            rows = [[field.zero] * n for _ in range(n)]
            for c, (i, j) in zip(self.coords, _alt_pairs(n)):
                rows[i][j] = c
                rows[j][i] = -c
        elif kind == "square":
            n = self.space.params["n"]
            rows = [list(self.coords[i * n : (i + 1) * n]) for i in range(n)]
        elif kind == "rect":
            m, n = self.space.params["m"], self.space.params["n"]
            rows = [list(self.coords[i * n : (i + 1) * n]) for i in range(m)]
        else:
            raise SpaceError("space %r is not a matrix kind" % kind)
        return Matrix(field, rows)

    # JSON round trip

    def to_json_obj(self) -> dict:
        kind = self.space.kind
        field = self.field
        if kind in ("symm", "alt", "square", "rect"):
            entries = [field.format(x) for r in self.to_matrix().rows for x in r]
        else:
            entries = [field.format(x) for x in self.coords]
        return {"space": kind, "params": dict(sorted(self.space.params.items())), "entries": entries}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj, field):
        try:
            kind = obj["space"]
            params = {k: int(v) for k, v in obj.get("params", {}).items()}
            entries = [field.parse(str(e)) for e in obj["entries"]]
        except (KeyError, TypeError, ValueError, FieldError) as exc:
            raise SpaceError("bad vector object: %s" % exc) from exc
        space = Space(kind, **params)
        if kind in ("symm", "alt", "square", "rect"):
            m = params.get("m", params.get("n"))
            n = params["n"]
            if len(entries) != m * n:
                raise SpaceError("expected %d matrix entries" % (m * n))
            rows = [entries[i * n : (i + 1) * n] for i in range(m)]
            return cls.from_matrix(space, field, rows)
        return cls(space, field, entries)

    @classmethod
    def from_json(cls, text, field):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpaceError("bad vector JSON: %s" % exc) from exc
        return cls.from_json_obj(obj, field)


def rep_rank(v: RepVector) -> int:
    """Exact matrix rank of a matrix-kind vector."""
    return v.to_matrix().rank()


class BilinearGram:
    """Symmetric or skew bilinear form given by its Gram matrix."""

    __slots__ = ("matrix", "tag")

    def __init__(self, matrix: Matrix, tag: str):
        if tag not in ("symmetric", "skew"):
            raise SpaceError("tag must be 'symmetric' or 'skew'")
        if not matrix.is_square:
            raise SpaceError("Gram matrix must be square")
        t = matrix.transpose()
        if tag == "symmetric" and t != matrix:
            raise SpaceError("Gram matrix is not symmetric")
        if tag == "skew" and t != -matrix:
            raise SpaceError("Gram matrix is not skew")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "tag", tag)

    def __setattr__(self, name, val):
        raise AttributeError("BilinearGram is immutable")

    @property
    def n(self):
        return self.matrix.nrows

    def rank(self) -> int:
        return self.matrix.rank()

    def pair(self, u, w):
        ring = self.matrix.ring
        acc = ring.zero
        for i, row in enumerate(self.matrix.rows):
            for j, s in enumerate(row):
                if s != ring.zero:
                    acc = acc + u[i] * s * w[j]
        return acc


def radical_dimension(b: BilinearGram) -> int:
    """Dimension of {v : b(v, w) = 0 for all w}."""
    return b.n - b.rank()


def standard_symplectic_gram(field, n: int) -> Matrix:
    """Nondegenerate skew form pairing coordinates (0,1), (2,3), ..."""
    if n % 2:
        raise SpaceError("symplectic form needs even dimension")
    rows = [[field.zero] * n for _ in range(n)]
    for k in range(0, n, 2):
        rows[k][k + 1] = field.one
        rows[k + 1][k] = -field.one
    return Matrix(field, rows)


def split_symmetric_gram(field, n: int) -> Matrix:
    """Symmetric antidiagonal Gram of the split quadratic form."""
    rows = [[field.zero] * n for _ in range(n)]
    for i in range(n):
        rows[i][n - 1 - i] = field.one
    return Matrix(field, rows)


# degree-4 polarization


def polarize4(f, x1: RepVector, x2: RepVector, x3: RepVector, x4: RepVector):
    """The symmetric 4-linear form with diagonal f, by inclusion-exclusion.

    Needs 24 invertible in the field (guaranteed by the admissibility rule).
    """
    if f.degree != 4:
        raise SpaceError("polarization implemented for degree 4 only")
    vecs = (x1, x2, x3, x4)
    space, field = x1.space, x1.field
    for v in vecs:
        if v.space != space or v.field != field:
            raise SpaceError("mixed spaces or fields")
    if space != f.space:
        raise SpaceError("vectors outside the form's space")
    acc = field.zero
    for mask in range(1, 16):
        coords = [field.zero] * space.dim
        bits = 0
        for i in range(4):
            if mask >> i & 1:
                bits += 1
                coords = [a + b for a, b in zip(coords, vecs[i].coords)]
        val = f.evaluate(RepVector._raw(space, field, coords))
        if (4 - bits) % 2:
            acc = acc - val
        else:
            acc = acc + val
    return acc * field.of(Fraction(1, 24))


def bilinear_bx(f, x: RepVector) -> BilinearGram:
    """Gram matrix of (u, w) -> polarize4(f, x, x, u, w) in the standard basis.

    Uses second differences: for quartic f, the quadratic form
    N(u) := polarize4(f, x, x, u, u) satisfies
    N(u) = (f(x+u) + f(x-u) - 2 f(x) - 2 f(u)) / 12,
    and off-diagonal entries come from polarizing N.  This costs O(dim^2)
    evaluations of f instead of O(dim^2) full polarizations.
    """
    if f.degree != 4:
        raise SpaceError("b_x defined for degree-4 forms only")
    if x.space != f.space:
        raise SpaceError("vector outside the form's space")
    space, field = x.space, x.field
    dim = space.dim
    twelfth = field.of(Fraction(1, 12))
    half = field.of(Fraction(1, 2))

    def fc(coords):
        return f.evaluate(RepVector._raw(space, field, coords))

    fx2 = fc(x.coords) * field.of(2)

    def n_of(ucoords):
        plus = fc([a + b for a, b in zip(x.coords, ucoords)])
        minus = fc([a - b for a, b in zip(x.coords, ucoords)])
        return (plus + minus - fx2 - fc(ucoords) * field.of(2)) * twelfth

    diag = []
    for i in range(dim):
        e = [field.zero] * dim
        e[i] = field.one
        diag.append(n_of(e))
    rows = [[field.zero] * dim for _ in range(dim)]
    for i in range(dim):
        rows[i][i] = diag[i]
        for j in range(i + 1, dim):
            e = [field.zero] * dim
            e[i] = field.one
            e[j] = field.one
            val = (n_of(e) - diag[i] - diag[j]) * half
            rows[i][j] = val
            rows[j][i] = val
    return BilinearGram(Matrix(field, rows), "symmetric")


# symplectic pairings


def _cubic_pair_gram(field):
    third = field.of(Fraction(1, 3))
    z, o = field.zero, field.one
    return Matrix(
        field,
        [
            [z, z, z, o],
            [z, z, -third, z],
            [z, third, z, z],
            [-o, z, z, z],
        ],
    )


def _alt4_pf_polar_gram(field):
    # coefficient of t in Pf(x + t y) = x1 y6 + x6 y1 - x2 y5 - x5 y2 + x3 y4 + x4 y3
    z, o = field.zero, field.one
    rows = [[z] * 6 for _ in range(6)]
    for i, j, s in ((0, 5, o), (1, 4, -o), (2, 3, o)):
        rows[i][j] = s
        rows[j][i] = s
    return Matrix(field, rows)


def _wedge36_top_gram(field):
    idx, subs = subset_index(6, 3)
    z = field.zero
    rows = [[z] * 20 for _ in range(20)]
    for a, A in enumerate(subs):
        comp = tuple(i for i in range(6) if i not in A)
        s = merge_sign(A, comp)
        rows[a][idx[comp]] = field.of(s)
    return Matrix(field, rows)


def _rect2n_pair_gram(field, n, s_gram: Matrix):
    # <X, Y> = (X S Y^t)_{01} - (X S Y^t)_{10}, row-major coordinates on 2 x n
    z = field.zero
    rows = [[z] * (2 * n) for _ in range(2 * n)]
    for j in range(n):
        for k in range(n):
            s = s_gram.entry(j, k)
            if s == z:
                continue
            rows[j][n + k] = rows[j][n + k] + s
            rows[n + j][k] = rows[n + j][k] - s
    return Matrix(field, rows)


def pairing_gram(space: Space, field, gram: Matrix | None = None) -> tuple[Matrix, str]:
    """Registered invariant pairing for a space: (Gram, symmetry tag).

    The tag is "skew" except on alternating 4x4 matrices, where the
    polarization of the Pfaffian is symmetric.
    """
    if space == Space("cubic"):
        return _cubic_pair_gram(field), "skew"
    if space == Space("wedge", d=3, n=6):
        return _wedge36_top_gram(field), "skew"
    if space == Space("alt", n=4):
        return _alt4_pf_polar_gram(field), "symmetric"
    if space.kind == "rect" and space.params["m"] == 2:
        n = space.params["n"]
        s = gram if gram is not None else split_symmetric_gram(field, n)
        return _rect2n_pair_gram(field, n, s), "skew"
    raise SpaceError("no pairing registered for %r" % space)


def symplectic_pair(space: Space, x: RepVector, y: RepVector, gram: Matrix | None = None):
    """Invariant bilinear pairing <x, y> on the registered spaces."""
    if x.space != space or y.space != space:
        raise SpaceError("vectors outside the pairing's space")
    g, _ = pairing_gram(space, x.field, gram)
    field = x.field
    acc = field.zero
    for i, row in enumerate(g.rows):
        xi = x.coords[i]
        if xi == field.zero:
            continue
        for j, s in enumerate(row):
            if s != field.zero:
                acc = acc + xi * s * y.coords[j]
    return acc


def trilinear_t(f, x1: RepVector, x2: RepVector, x3: RepVector, gram: Matrix | None = None) -> RepVector:
    """The vector t with <t, w> = polarize4(f, x1, x2, x3, w) for all w."""
    space, field = x1.space, x1.field
    g, _ = pairing_gram(space, field, gram)
    rhs = []
    for j in range(space.dim):
        rhs.append(polarize4(f, x1, x2, x3, RepVector.basis(space, field, j)))
    try:
        coords = g.transpose().solve(rhs)
    except LinAlgError as exc:
        raise SpaceError("degenerate pairing") from exc
    return RepVector._raw(space, field, coords)


# wedge machinery


def wedge_with_vector(v: RepVector, u) -> RepVector:
    """u wedge v for u a plain vector (list or RepVector) and v in wedge(d, n)."""
    space = v.space
    if space.kind != "wedge":
        raise SpaceError("wedge product needs a wedge-space vector")
    d, n = space.params["d"], space.params["n"]
    if d + 1 > n:
        raise SpaceError("wedge degree would exceed the ambient dimension")
    field = v.field
    ucoords = u.coords if isinstance(u, RepVector) else tuple(field.of(c) for c in u)
    if len(ucoords) != n:
        raise SpaceError("ambient vector length mismatch")
    idx_d, subs_d = subset_index(n, d)
    idx_up, _ = subset_index(n, d + 1)
    out_space = Space("wedge", d=d + 1, n=n)
    out = [field.zero] * out_space.dim
    for a, A in enumerate(subs_d):
        va = v.coords[a]
        if va == field.zero:
            continue
        for i in range(n):
            if i in A:
                continue
            s = merge_sign((i,), A)
            target = idx_up[tuple(sorted((i,) + A))]
            term = ucoords[i] * va
            out[target] = out[target] + term if s > 0 else out[target] - term
    return RepVector._raw(out_space, field, out)


def wedge_of_vectors(field, n: int, vectors) -> RepVector:
    """v1 wedge ... wedge vd from d ambient vectors, via d x d minors."""
    d = len(vectors)
    cols = [[field.of(c) for c in v] for v in vectors]
    if any(len(c) != n for c in cols):
        raise SpaceError("ambient vector length mismatch")
    _, subs = subset_index(n, d)
    coords = []
    for A in subs:
        sub = Matrix(field, [[cols[j][i] for j in range(d)] for i in A])
        coords.append(sub.det())
    return RepVector._raw(Space("wedge", d=d, n=n), field, coords)


def wedge_annihilator_dim(v: RepVector) -> int:
    """Dimension of {u in k^n : u wedge v = 0}."""
    space = v.space
    if space.kind != "wedge":
        raise SpaceError("annihilator defined for wedge vectors")
    n = space.params["n"]
    field = v.field
    cols = []
    for i in range(n):
        e = [field.zero] * n
        e[i] = field.one
        cols.append(wedge_with_vector(v, e).coords)
    m = Matrix(field, list(zip(*cols)))
    return n - m.rank()


def lambda_power_matrix(g: Matrix, d: int) -> Matrix:
    """Induced matrix of g on wedge(d, n): entries are d x d minors of g."""
    if not g.is_square:
        raise SpaceError("wedge power of a non-square matrix")
    n = g.nrows
    _, subs = subset_index(n, d)
    ring = g.ring
    rows = []
    for I in subs:
        row = []
        for J in subs:
            row.append(Matrix(ring, [[g.entry(i, j) for j in J] for i in I]).det())
        rows.append(row)
    return Matrix(ring, rows)


def wedge_complement_star_matrix(field, n: int, d: int) -> Matrix:
    """Duality star on wedge(d, n): e_A -> sign(A, complement) * e_complement."""
    idx_d, subs_d = subset_index(n, d)
    idx_c, _ = subset_index(n, n - d)
    rows = [[field.zero] * len(subs_d) for _ in range(_binom(n, n - d))]
    for a, A in enumerate(subs_d):
        comp = tuple(i for i in range(n) if i not in A)
        rows[idx_c[comp]][a] = field.of(merge_sign(A, comp))
    return Matrix(field, rows)


def sp6_contract(v: RepVector, b: Matrix) -> list:
    """Contraction of a 3-vector on k^6 by a nondegenerate skew form b."""
    space = v.space
    if space != Space("wedge", d=3, n=6):
        raise SpaceError("contraction defined on wedge(3, 6)")
    field = v.field
    if b.nrows != 6 or b.ncols != 6:
        raise SpaceError("b must be 6x6")
    if b.transpose() != -b:
        raise SpaceError("b must be skew")
    if b.rank() != 6:
        raise SpaceError("b must be nondegenerate")
    _, subs = subset_index(6, 3)
    out = [field.zero] * 6
    for a, (i, j, k) in enumerate(subs):
        va = v.coords[a]
        if va == field.zero:
            continue
        out[k] = out[k] + b.entry(i, j) * va
        out[j] = out[j] - b.entry(i, k) * va
        out[i] = out[i] + b.entry(j, k) * va
    return out
