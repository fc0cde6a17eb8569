"""Family algebra, star identities, preservation policies, and samplers."""

import json
import random
from fractions import Fraction

import pytest

from linpres.fields import QQ, PrimeField
from linpres.forms import CubicDisc, Mat2n, SkewPf, Wedge36, parse_form
from linpres.linalg import Matrix
from linpres.multilinear import RepVector, Space
from linpres.preservers import (
    COROLLARY_IDS,
    Congruence,
    CubicSubstitution,
    GSp6Push,
    GenericMap,
    OrthogonalPair,
    PreserverError,
    Sandwich,
    TriplePush,
    TransposeSandwich,
    WedgePush,
    corollary_forms,
    canonical_corollary,
    element_from_json_obj,
    factor_permutation,
    hodge_star4_matrix,
    hodge_star20_matrix,
    preserves_form,
    preserves_minimals,
    sample_free_element,
    sample_group_element,
    sample_violator,
    scales_form,
    sz_trial_count,
    verify_corollary,
)
from linpres.sampling import invertible_matrix, rand_vector

F5 = PrimeField(5)
F7 = PrimeField(7)


def rnd(seed=0):
    return random.Random(seed)


def sample_elements(cid, form, field, rng, count=3):
    return [sample_free_element(cid, form, field, rng) for _ in range(count)]


ALL_CELLS = [(cid, d) for cid in COROLLARY_IDS for d in
             [f.descriptor() for f in corollary_forms(cid)]]


# star identities


def test_alt4_star_is_involution_and_fixes_pfaffian():
    for field in (QQ, F7):
        s = hodge_star4_matrix(field)
        assert s @ s == Matrix.identity(field, 6)
        pf = SkewPf(4)
        rng = rnd(1)
        for _ in range(20):
            v = rand_vector(Space("alt", n=4), field, rng)
            w = RepVector._raw(v.space, field, s.apply(v.coords))
            assert pf.evaluate(w) == pf.evaluate(v)


def test_wedge_star_squares_to_minus_identity():
    for field in (QQ, F7):
        s = hodge_star20_matrix(field)
        assert s @ s == Matrix.identity(field, 20).scale(field.of(-1))


def test_wedge_matrix_fast_path_matches_generic():
    from linpres.multilinear import lambda_power_matrix
    rng = rnd(21)
    for field in (QQ, F7):
        g = invertible_matrix(field, rng, 6)
        for star in (False, True):
            el = WedgePush(field.of(3), g, star)
            expect = lambda_power_matrix(g, 3)
            if star:
                expect = expect @ hodge_star20_matrix(field)
            assert el.matrix_on_space() == expect.scale(field.of(3))
    # non-integer rational factors take the generic route
    g = Matrix(QQ, [[Fraction(1, 2) if i == j else Fraction(0) for j in range(6)] for i in range(6)])
    el = WedgePush(QQ.one, g)
    assert el.matrix_on_space() == lambda_power_matrix(g, 3)


def test_wedge_star_fixes_quartic():
    w36 = Wedge36()
    for field in (QQ, F7):
        el = WedgePush(field.one, Matrix.identity(field, 6), star=True)
        rng = rnd(2)
        for _ in range(10):
            v = rand_vector(w36.space, field, rng)
            assert w36.evaluate(el.apply(v)) == w36.evaluate(v)


# apply versus coordinate matrix


@pytest.mark.parametrize("cid,desc", ALL_CELLS)
def test_apply_matches_matrix(cid, desc):
    form = parse_form(desc)
    for field in (QQ, F7):
        rng = rnd(hash((cid, desc)) % 100000)
        for el in sample_elements(cid, form, field, rng):
            m = el.matrix_on_space()
            for _ in range(3):
                v = rand_vector(form.space, field, rng)
                assert el.apply(v).coords == tuple(m.apply(v.coords))


# composition and inverses stay inside the family and match matrix products


@pytest.mark.parametrize("cid,desc", ALL_CELLS)
def test_composition_matches_matrix_product(cid, desc):
    form = parse_form(desc)
    for field in (QQ, F7):
        rng = rnd(hash((cid, desc, "c")) % 100000)
        els = sample_elements(cid, form, field, rng, count=4)
        for t1 in els[:2]:
            for t2 in els[2:]:
                t = t1.compose(t2)
                assert not isinstance(t, GenericMap)
                assert t.matrix_on_space() == t1.matrix_on_space() @ t2.matrix_on_space()


@pytest.mark.parametrize("cid,desc", ALL_CELLS)
def test_inverse_matches_matrix_inverse(cid, desc):
    form = parse_form(desc)
    for field in (QQ, F7):
        rng = rnd(hash((cid, desc, "i")) % 100000)
        for el in sample_elements(cid, form, field, rng, count=2):
            inv = el.inverse()
            assert not isinstance(inv, GenericMap)
            assert inv.matrix_on_space() == el.matrix_on_space().inv()
            both = el.compose(inv)
            assert both.matrix_on_space() == Matrix.identity(field, form.space.dim)


def test_star_composition_bookkeeping():
    # star-star composition must cancel the involutions
    space = Space("alt", n=4)
    rng = rnd(3)
    for field in (QQ, F7):
        p1 = invertible_matrix(field, rng, 4)
        p2 = invertible_matrix(field, rng, 4)
        t1 = Congruence(space, field.of(2), p1, star=True)
        t2 = Congruence(space, field.of(3), p2, star=True)
        t = t1.compose(t2)
        assert isinstance(t, Congruence) and not t.star
        assert t.matrix_on_space() == t1.matrix_on_space() @ t2.matrix_on_space()
        g1 = invertible_matrix(field, rng, 6)
        g2 = invertible_matrix(field, rng, 6)
        w1 = WedgePush(field.of(2), g1, star=True)
        w2 = WedgePush(field.of(3), g2, star=True)
        w = w1.compose(w2)
        assert isinstance(w, WedgePush) and not w.star
        assert w.matrix_on_space() == w1.matrix_on_space() @ w2.matrix_on_space()


def test_mixed_sandwich_composition():
    space = Space("square", n=3)
    rng = rnd(4)
    for field in (QQ, F7):
        s = Sandwich(space, invertible_matrix(field, rng, 3), invertible_matrix(field, rng, 3))
        t = TransposeSandwich(space, invertible_matrix(field, rng, 3), invertible_matrix(field, rng, 3))
        for a, b, expect in ((s, t, TransposeSandwich), (t, s, TransposeSandwich), (t, t, Sandwich), (s, s, Sandwich)):
            c = a.compose(b)
            assert type(c) is expect
            assert c.matrix_on_space() == a.matrix_on_space() @ b.matrix_on_space()


def test_cubic_substitution_known_matrix():
    # x -> x + y, y -> y sends x^3 to x^3 + 3 x^2 y + 3 x y^2 + y^3
    g = Matrix.from_ints(QQ, [[1, 1], [0, 1]])
    el = CubicSubstitution(QQ.one, g)
    m = el.matrix_on_space()
    assert [m.entry(i, 0) for i in range(4)] == [Fraction(1), Fraction(3), Fraction(3), Fraction(1)]
    assert [m.entry(i, 3) for i in range(4)] == [Fraction(0), Fraction(0), Fraction(0), Fraction(1)]


def test_factor_permutation_moves_slots():
    t = RepVector._raw(Space("tritensor"), QQ, [QQ.of(int(i == 3)) for i in range(8)])
    el = factor_permutation(QQ, (1, 0, 2))
    # e0 x e1 x e1 becomes e1 x e0 x e1
    img = el.apply(t)
    assert img.coords[5] == QQ.one
    assert sum(1 for c in img.coords if c != QQ.zero) == 1


def test_triple_push_three_cycle_composition():
    rng = rnd(5)
    for field in (QQ, F5):
        a = TriplePush(*[invertible_matrix(field, rng, 2) for _ in range(3)], perm=(1, 2, 0))
        b = TriplePush(*[invertible_matrix(field, rng, 2) for _ in range(3)], perm=(2, 0, 1))
        c = a.compose(b)
        assert isinstance(c, TriplePush)
        assert c.matrix_on_space() == a.matrix_on_space() @ b.matrix_on_space()
        assert a.compose(a.inverse()).matrix_on_space() == Matrix.identity(field, 8)


# construction errors


def test_family_validation_errors():
    with pytest.raises(PreserverError):
        Congruence(Space("symm", n=3), QQ.one, Matrix.identity(QQ, 3), star=True)
    with pytest.raises(PreserverError):
        Congruence(Space("alt", n=6), QQ.one, Matrix.identity(QQ, 6), star=True)
    with pytest.raises(PreserverError):
        Congruence(Space("symm", n=3), QQ.zero, Matrix.identity(QQ, 3))
    with pytest.raises(PreserverError):
        Congruence(Space("symm", n=3), QQ.one, Matrix.zeros(QQ, 3, 3))
    with pytest.raises(PreserverError):
        Sandwich(Space("square", n=2), Matrix.identity(QQ, 2), Matrix.identity(QQ, 3))
    with pytest.raises(PreserverError):
        CubicSubstitution(QQ.one, Matrix.from_ints(QQ, [[1, 2], [2, 4]]))
    with pytest.raises(PreserverError):
        TriplePush(Matrix.identity(QQ, 2), Matrix.identity(QQ, 2), Matrix.identity(QQ, 2), perm=(0, 0, 1))


def test_gsp6_rejects_non_similitude():
    m = Matrix.identity(F7, 6)
    with pytest.raises(PreserverError):
        GSp6Push(F7.one, m + Matrix.from_ints(F7, [[0] * 6] * 5 + [[1, 0, 0, 0, 0, 0]]))


def test_compose_across_fields_rejected():
    a = CubicSubstitution(QQ.one, Matrix.identity(QQ, 2))
    b = CubicSubstitution(F7.one, Matrix.identity(F7, 2))
    with pytest.raises(PreserverError):
        a.compose(b)


# json round trip


@pytest.mark.parametrize("cid,desc", ALL_CELLS)
def test_element_json_round_trip(cid, desc):
    form = parse_form(desc)
    for field in (QQ, F7):
        rng = rnd(hash((cid, desc, "j")) % 100000)
        el = sample_free_element(cid, form, field, rng)
        blob = json.dumps(el.to_json_obj(), sort_keys=True)
        back = element_from_json_obj(json.loads(blob), form.space, field)
        assert type(back) is type(el)
        assert back.matrix_on_space() == el.matrix_on_space()


# preservation policies


def test_sz_trial_counts_frozen():
    assert sz_trial_count(F7, 4) == 75
    assert sz_trial_count(F7, 3) == 50
    assert sz_trial_count(QQ, 4) == 2
    assert sz_trial_count(QQ, 2) == 2


def test_sz_rejects_tiny_field():
    assert sz_trial_count(F5, 4) == 187
    with pytest.raises(PreserverError):
        sz_trial_count(F5, 5)


def test_policy_errors():
    w36 = Wedge36()
    el = WedgePush(F7.one, Matrix.identity(F7, 6))
    with pytest.raises(PreserverError):
        preserves_form(el, w36, policy="symbolic")
    with pytest.raises(PreserverError):
        preserves_form(el, w36, policy="schwartz-zippel")  # no rng
    with pytest.raises(PreserverError):
        preserves_form(el, w36, policy="bogus", rng=rnd(0))
    el2 = CubicSubstitution(F7.one, Matrix.identity(F7, 2))
    with pytest.raises(PreserverError):
        preserves_form(el2, w36)  # wrong space


@pytest.mark.parametrize("cid,desc", ALL_CELLS)
def test_group_elements_preserve_forms(cid, desc):
    form = parse_form(desc)
    for field in (QQ, F7):
        rng = rnd(hash((cid, desc, "g")) % 100000)
        for _ in range(3):
            el = sample_group_element(cid, form, field, rng)
            assert el.constraint_satisfied(form)
            verdict = preserves_form(el, form, rng=rng)
            assert verdict.ok, (cid, desc, field.descriptor)


@pytest.mark.parametrize("cid,desc", ALL_CELLS)
def test_violators_are_caught(cid, desc):
    form = parse_form(desc)
    for field in (QQ, F7):
        rng = rnd(hash((cid, desc, "v")) % 100000)
        el = sample_violator(cid, form, field, rng)
        assert not el.constraint_satisfied(form)
        verdict = preserves_form(el, form, rng=rng, trials=32)
        assert not verdict.ok
        if verdict.policy == "schwartz-zippel":
            assert verdict.counterexample is not None


def test_symbolic_and_sampled_policies_agree():
    form = CubicDisc()
    rng = rnd(6)
    for field in (QQ, F7):
        el = sample_group_element("cubics", form, field, rng)
        assert preserves_form(el, form, policy="symbolic").ok
        assert preserves_form(el, form, policy="schwartz-zippel", rng=rng).ok
        bad = sample_violator("cubics", form, field, rng)
        assert not preserves_form(bad, form, policy="symbolic").ok
        assert not preserves_form(bad, form, policy="schwartz-zippel", rng=rng, trials=16).ok


def test_scales_form_matches_character():
    rng = rnd(7)
    for cid, desc in ALL_CELLS:
        form = parse_form(desc)
        for field in (QQ, F7):
            el = sample_free_element(cid, form, field, rng)
            c = scales_form(el, form, rng)
            assert c == el.scaling_factor(form), (cid, desc, field.descriptor)


def test_generic_map_has_no_character():
    form = CubicDisc()
    el = GenericMap(form.space, QQ, Matrix.identity(QQ, 4))
    assert el.char_params() is None
    with pytest.raises(PreserverError):
        el.scaling_factor(form)


def test_preserves_minimals_for_group_elements():
    rng = rnd(8)
    for cid, desc in [("cubics", "cubic-disc"), ("blackholes", "mat2n:4"), ("SL6", "wedge36")]:
        form = parse_form(desc)
        for field in (QQ, F7):
            el = sample_group_element(cid, form, field, rng)
            ok, bad = preserves_minimals(el, form, rng, samples=25)
            assert ok and bad is None


def test_orthogonal_pair_validated_against_form():
    form = Mat2n(4)
    rng = rnd(9)
    el = sample_group_element("blackholes", form, F7, rng)
    assert el.valid_for(form)
    other = Mat2n(4, s_entries=[[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 3, 0], [0, 0, 0, 1]])
    assert not el.valid_for(other) or el.g2.transpose() @ other.gram(F7) @ el.g2 == other.gram(F7).scale(el.mu)


# corollary registry and verify driver


def test_corollary_canonicalization():
    assert canonical_corollary("sl6") == "SL6"
    assert canonical_corollary("  Blackholes ") == "blackholes"
    with pytest.raises(KeyError):
        canonical_corollary("e6")


def test_verify_report_deterministic_and_ok():
    r1 = verify_corollary("cubics", F7, seed=11, elements=6)
    r2 = verify_corollary("cubics", F7, seed=11, elements=6)
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)
    assert r1["ok"] and r1["cells"][0]["failures"] == 0
    assert r1["cells"][0]["policy"] == "symbolic"
    r3 = verify_corollary("cubics", F7, seed=12, elements=6)
    assert json.dumps(r1, sort_keys=True) != json.dumps(r3, sort_keys=True)


def test_verify_covers_every_corollary_smoke():
    for cid in COROLLARY_IDS:
        rep = verify_corollary(cid, F7, seed=13, elements=2 * len(corollary_forms(cid)))
        assert rep["ok"], cid
        assert len(rep["cells"]) == len(corollary_forms(cid))
        rep_q = verify_corollary(cid, QQ, seed=13, elements=len(corollary_forms(cid)))
        assert rep_q["ok"], cid


def test_sz_error_bound_recorded():
    form = parse_form("wedge36")
    rng = rnd(14)
    el = sample_group_element("SL6", form, F7, rng)
    verdict = preserves_form(el, form, rng=rng)
    assert verdict.policy == "schwartz-zippel"
    assert verdict.trials == 75
    assert verdict.error_bound == Fraction(4, 7) ** 75
    obj = verdict.to_json_obj()
    assert obj["ok"] and "error_bound" in obj
