"""Exhaustive small-field censuses.

Three cases, each deterministic and exact:

- rk1fix-symm2-f3    every invertible map on symmetric 2x2 matrices over F_3;
                     the maps fixing every rank-one line are the two scalars
- cubic-oracles-f5   all 625 binary cubics over F_5; the three minimality
                     oracles must agree pointwise and count 24 minimal points
- cubic-census-f5    all 1920 substitution pairs (c, g) over F_5; the pairs
                     preserving the discriminant pointwise must be exactly the
                     960 with trivial scaling character, giving 240 maps

Set PRESERVER_THREADS > 1 to split the census across processes.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

from .fields import PrimeField
from .forms import CubicDisc
from .linalg import Matrix
from .minimality import minimal_by_radical, minimal_by_rank, minimal_by_rrs
from .multilinear import RepVector, Space
from .preservers import CubicSubstitution


class BruteForceError(RuntimeError):
    """Enumeration out of range or an internally inconsistent census."""


GL_ENUM_LIMIT = 10**9


def invertible_count(p: int, dim: int) -> int:
    """Order of the group of invertible dim x dim matrices over F_p."""
    total = 1
    q = p**dim
    for i in range(dim):
        total *= q - p**i
    return total


def enumerate_invertible(field, dim: int):
    """All invertible dim x dim matrices over a prime field, in row-major
    lexicographic order of the entry values; dependent prefixes are pruned."""
    p = field.modulus
    if p is None:
        raise BruteForceError("exhaustive enumeration needs a finite field")
    if p ** (dim * dim) > GL_ENUM_LIMIT:
        raise BruteForceError(
            "search space %d^%d exceeds the enumeration limit" % (p, dim * dim)
        )
    rows_pool = _lex_vectors(p, dim)

    def reduce_against(vec, basis):
        v = list(vec)
        for pivot, b in basis:
            c = v[pivot]
            if c:
                v = [(v[k] - c * b[k]) % p for k in range(dim)]
        return v

    def recurse(chosen, basis):
        if len(chosen) == dim:
            yield Matrix.from_ints(field, chosen)
            return
        for vec in rows_pool:
            red = reduce_against(vec, basis)
            pivot = next((k for k, c in enumerate(red) if c), None)
            if pivot is None:
                continue
            inv = pow(red[pivot], p - 2, p)
            norm = [(c * inv) % p for c in red]
            yield from recurse(chosen + [vec], basis + [(pivot, norm)])

    yield from recurse([], [])


def _lex_vectors(p: int, dim: int):
    out = []
    for code in range(p**dim):
        vec = []
        for _ in range(dim):
            vec.append(code % p)
            code //= p
        out.append(tuple(reversed(vec)))
    return out


@dataclass(frozen=True)
class CensusReport:
    case: str
    field: str
    counts: dict
    ok: bool
    details: dict = dc_field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "case": self.case,
            "field": self.field,
            "counts": dict(sorted(self.counts.items())),
            "details": self.details,
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, indent=2)


# rank-one line fixers on symmetric 2x2 matrices over F_3


def _rank_one_cone_f3():
    # coordinates (a, b, c) for [[a, b], [b, c]]; rank one means ac = b^2, not all zero
    pts = []
    for a in range(3):
        for b in range(3):
            for c in range(3):
                if (a, b, c) != (0, 0, 0) and (a * c - b * b) % 3 == 0:
                    pts.append((a, b, c))
    return pts


def case_rank_one_fixers_f3() -> CensusReport:
    f3 = PrimeField(3, allow_small=True)
    cone = _rank_one_cone_f3()
    fixers = []
    maps = 0
    for m in enumerate_invertible(f3, 3):
        maps += 1
        rows = [[x.value for x in row] for row in m.rows]
        good = True
        for v in cone:
            w = [sum(rows[i][k] * v[k] for k in range(3)) % 3 for i in range(3)]
            lam = None
            for k in range(3):
                if v[k]:
                    lam = (w[k] * v[k]) % 3  # v[k] is its own inverse mod 3
                    break
            if any((lam * v[k] - w[k]) % 3 for k in range(3)):
                good = False
                break
        if good:
            fixers.append(rows)
    expected = [
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[2, 0, 0], [0, 2, 0], [0, 0, 2]],
    ]
    ok = maps == invertible_count(3, 3) and fixers == expected
    return CensusReport(
        case="rk1fix-symm2-f3",
        field="Fp:3",
        counts={
            "cone_points": len(cone),
            "line_fixers": len(fixers),
            "maps_enumerated": maps,
        },
        ok=ok,
        details={"fixers": fixers},
    )


# minimality oracle agreement on all binary cubics over F_5


def case_cubic_oracles_f5() -> CensusReport:
    f5 = PrimeField(5)
    form = CubicDisc()
    space = Space("cubic")
    minimal = 0
    disagreements = 0
    points = 0
    for code in range(625):
        coords = [(code // 5**k) % 5 for k in (3, 2, 1, 0)]
        v = RepVector(space, f5, [f5.of(c) for c in coords])
        points += 1
        a = minimal_by_rank(form, v).is_minimal
        b = minimal_by_rrs(form, v, policy="exact").is_minimal
        c = minimal_by_radical(form, v).is_minimal
        if not (a == b == c):
            disagreements += 1
        elif a:
            minimal += 1
    ok = points == 625 and disagreements == 0 and minimal == 24
    return CensusReport(
        case="cubic-oracles-f5",
        field="Fp:5",
        counts={"disagreements": disagreements, "minimal": minimal, "points": points},
        ok=ok,
    )


# discriminant preserver census over F_5


def _census_tables():
    f5 = PrimeField(5)
    disc = CubicDisc().int_evaluator(f5)
    pts = []
    vals = []
    for code in range(625):
        coords = [(code // 5**k) % 5 for k in (3, 2, 1, 0)]
        pts.append(coords)
        vals.append(disc(coords))
    return pts, vals


def _pair_preserves(rows, pts, vals):
    for idx, pt in enumerate(pts):
        y = [
            sum(rows[i][k] * pt[k] for k in range(4)) % 5
            for i in range(4)
        ]
        yidx = ((y[0] * 5 + y[1]) * 5 + y[2]) * 5 + y[3]
        if vals[yidx] != vals[idx]:
            return False
    return True


def _census_chunk(bounds):
    lo, hi = bounds
    f5 = PrimeField(5)
    pts, vals = _census_tables()
    gl2 = list(enumerate_invertible(f5, 2))
    checked = 0
    preserving = 0
    character_one = 0
    mismatches = 0
    passing_maps = set()
    for gidx in range(lo, hi):
        g = gl2[gidx]
        base = CubicSubstitution(f5.one, g).matrix_on_space()
        base_rows = [[x.value for x in row] for row in base.rows]
        det2 = (g.det().value ** 2) % 5
        for c in range(1, 5):
            checked += 1
            rows = [[(c * x) % 5 for x in row] for row in base_rows]
            keeps = _pair_preserves(rows, pts, vals)
            # scaling character c^4 det(g)^6 reduces to det(g)^2 over F_5
            chi_one = (pow(c, 4, 5) * pow(det2, 3, 5)) % 5 == 1
            if chi_one:
                character_one += 1
            if keeps:
                preserving += 1
                passing_maps.add(tuple(x for row in rows for x in row))
            if keeps != chi_one:
                mismatches += 1
    return checked, preserving, character_one, mismatches, passing_maps


def case_cubic_census_f5(threads: int | None = None) -> CensusReport:
    if threads is None:
        threads = int(os.environ.get("PRESERVER_THREADS", "1"))
    f5 = PrimeField(5)
    total_g = invertible_count(5, 2)
    if threads > 1:
        step = (total_g + threads - 1) // threads
        bounds = [(i, min(i + step, total_g)) for i in range(0, total_g, step)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_census_chunk, bounds))
    else:
        parts = [_census_chunk((0, total_g))]
    checked = sum(p[0] for p in parts)
    preserving = sum(p[1] for p in parts)
    character_one = sum(p[2] for p in parts)
    mismatches = sum(p[3] for p in parts)
    maps = set()
    for p in parts:
        maps |= p[4]
    ok = (
        checked == 4 * total_g
        and mismatches == 0
        and preserving == character_one == 960
        and len(maps) == 240
    )
    return CensusReport(
        case="cubic-census-f5",
        field="Fp:5",
        counts={
            "character_one_pairs": character_one,
            "distinct_preserving_maps": len(maps),
            "mismatches": mismatches,
            "pairs_checked": checked,
            "preserving_pairs": preserving,
        },
        ok=ok,
    )


CASES = {
    "rk1fix-symm2-f3": case_rank_one_fixers_f3,
    "cubic-oracles-f5": case_cubic_oracles_f5,
    "cubic-census-f5": case_cubic_census_f5,
}


def run_case(name: str) -> CensusReport:
    if name not in CASES:
        raise KeyError(name)
    return CASES[name]()
