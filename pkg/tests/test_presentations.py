"""Tests for quivers, free *-categories and presentations."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cstarcat import presentations as pr
from cstarcat.categories import MatCStarCategory, full_matrix_category
from cstarcat.errors import (
    BoundFailed,
    InvalidCategory,
    InvalidFunctor,
    InvalidQuiver,
    NameClash,
    NotParallel,
    RelationFailed,
    ShapeMismatch,
    UnboundedGenerator,
)
from cstarcat.linalg import is_isometry


@pytest.fixture
def loop_pres():
    q = pr.Quiver(["x"], [("a", "x", "x"), ("b", "x", "x")])
    return pr.free_star_category(q)


@pytest.fixture
def path_pres():
    q = pr.Quiver(["x", "y", "z"], [("a", "x", "y"), ("b", "y", "z")])
    return pr.free_star_category(q)


# ---------------------------------------------------------------------------
# normal form of the free *-category


def test_double_adjoint_cancels(loop_pres):
    a = loop_pres.gen("a")
    assert a.star().star() == a


def test_adjoint_antidistributes_over_composition(path_pres):
    a, b = path_pres.gen("a"), path_pres.gen("b")
    assert (b * a).star() == a.star() * b.star()


def test_units_elide(path_pres):
    a = path_pres.gen("a")
    assert path_pres.unit("y") * a == a
    assert a * path_pres.unit("x") == a


def test_antilinearity_of_star(loop_pres):
    a, b = loop_pres.gen("a"), loop_pres.gen("b")
    e = (2 + 1j) * a + (0 - 3j) * b
    assert e.star() == (2 - 1j) * a.star() + (0 + 3j) * b.star()


def test_zero_coefficients_pruned(loop_pres):
    a = loop_pres.gen("a")
    assert (a - a).is_zero()
    assert (a + a).terms and list((a + a).terms.values()) == [2 + 0j]


def test_composition_shape_checks(path_pres):
    a, b = path_pres.gen("a"), path_pres.gen("b")
    with pytest.raises(ShapeMismatch):
        a * b  # a.b needs tgt(b) == src(a); here it is b.a that exists
    assert (b * a).src == "x" and (b * a).tgt == "z"


def test_addition_requires_parallel(path_pres):
    with pytest.raises(NotParallel):
        path_pres.gen("a") + path_pres.gen("b")


@st.composite
def element_pairs(draw):
    """Two random elements of the one-object free category on two loops,
    built from a shared pool so sums and products stay interesting."""
    q = pr.Quiver(["x"], [("a", "x", "x"), ("b", "x", "x")])
    pres = pr.free_star_category(q)
    pool = [pres.gen("a"), pres.gen("b"), pres.unit("x"),
            pres.gen("a").star(), pres.gen("b") * pres.gen("a")]

    def rand_elem():
        n = draw(st.integers(1, 3))
        out = pres.zero("x", "x")
        for _ in range(n):
            z = complex(draw(st.integers(-3, 3)), draw(st.integers(-3, 3)))
            out = out + z * pool[draw(st.integers(0, len(pool) - 1))]
        return out

    return rand_elem(), rand_elem()


@given(element_pairs())
def test_normal_form_confluence(pair):
    """Different interleavings of the rewrite moves agree: the normal form
    computed along any association order is the same term map."""
    e1, e2 = pair
    left = ((e1 + e2) * e1).star()
    right = e1.star() * (e1.star() + e2.star())
    assert left == right
    assert (e1 * (e2 * e1)) == ((e1 * e2) * e1)
    assert (e1 + e2).star() == e1.star() + e2.star()


def test_quiver_validation():
    with pytest.raises(InvalidQuiver):
        pr.Quiver(["x"], [("a", "x", "nope")])
    with pytest.raises(InvalidQuiver):
        pr.Quiver(["x"], [("a", "x", "x"), ("a", "x", "x")])
    with pytest.raises(InvalidQuiver):
        pr.Quiver(["x", "x"], [])


# ---------------------------------------------------------------------------
# coproducts and coequalizers


def one_loop_pres(obj="x", arrow="a"):
    return pr.free_star_category(pr.Quiver([obj], [(arrow, obj, obj)]))


def test_coproduct_counts_and_clash():
    p = one_loop_pres()
    with pytest.raises(NameClash):
        pr.coproduct([p, p])
    both = pr.coproduct([p, p], prefixes=["l_", "r_"])
    assert both.quiver.objects == ["l_x", "r_x"]
    assert sorted(both.quiver.arrow_by_name) == ["l_a", "r_a"]
    triple = pr.coproduct([p, p, p], prefixes=["p0_", "p1_", "p2_"])
    assert len(triple.quiver.objects) == 3
    cross = [(x, y) for x in triple.quiver.objects for y in triple.quiver.objects
             if x != y]
    assert len(cross) == 6  # all six ordered cross pairs carry zero homs


def test_coproduct_of_one_part_is_that_part():
    p = one_loop_pres()
    q = pr.coproduct([p])
    assert q.quiver.objects == p.quiver.objects
    assert sorted(q.quiver.arrow_by_name) == sorted(p.quiver.arrow_by_name)


def test_coproduct_injections_are_functor_data():
    p, q = one_loop_pres("x", "a"), one_loop_pres("y", "b")
    both = pr.coproduct([p, q])
    inj = pr.PresFunctor(p, both, {"x": "x"}, {"a": "a"})
    assert inj.apply(p.gen("a") * p.gen("a")).tgt == "x"


def test_coequalizer_of_equal_functors_is_codomain():
    p = one_loop_pres()
    f = pr.PresFunctor(p, p, {"x": "x"}, {"a": "a"})
    out = pr.coequalizer(f, f)
    assert out.quiver.objects == ["x"]
    assert list(out.quiver.arrow_by_name) == ["a"]


def test_coequalizer_identifies_objects():
    # two object-identifying maps on a 2-object discrete quiver
    discrete = pr.free_star_category(pr.Quiver(["u", "v"], []))
    point = pr.free_star_category(pr.Quiver(["p"], []))
    lift1 = pr.PresFunctor(point, discrete, {"p": "u"}, {})
    lift2 = pr.PresFunctor(point, discrete, {"p": "v"}, {})
    out = pr.coequalizer(lift1, lift2)
    assert out.quiver.objects == ["u"]


def test_coequalizer_folds_arrow_into_loop():
    # oracle, by hand: identify the endpoints of a single arrow a: 0 -> 1;
    # the quotient quiver has one vertex and a stays as one loop on it
    interval = pr.free_star_category(pr.Quiver(["o0", "o1"], [("a", "o0", "o1")]))
    point = pr.free_star_category(pr.Quiver(["p"], []))
    f1 = pr.PresFunctor(point, interval, {"p": "o0"}, {})
    f2 = pr.PresFunctor(point, interval, {"p": "o1"}, {})
    out = pr.coequalizer(f1, f2)
    assert out.quiver.objects == ["o0"]
    (loop,) = out.quiver.arrows
    assert (loop.name, loop.src, loop.tgt) == ("a", "o0", "o0")


def test_coequalizer_requires_shared_source():
    p = one_loop_pres("x", "a")
    q = one_loop_pres("y", "b")
    f1 = pr.PresFunctor(p, p, {"x": "x"}, {"a": "a"})
    f2 = pr.PresFunctor(q, q, {"y": "y"}, {"b": "b"})
    with pytest.raises(NotParallel):
        pr.coequalizer(f1, f2)


def test_representation_factors_through_coequalizer():
    # a representation equalizing f1, f2 induces one of the quotient
    interval = pr.free_star_category(pr.Quiver(["o0", "o1"], [("a", "o0", "o1")]))
    point = pr.free_star_category(pr.Quiver(["p"], []))
    f1 = pr.PresFunctor(point, interval, {"p": "o0"}, {})
    f2 = pr.PresFunctor(point, interval, {"p": "o1"}, {})
    out = pr.coequalizer(f1, f2)
    cat = full_matrix_category([2])
    swap = np.array([[0, 1], [1, 0]], dtype=complex)
    ev = pr.evaluate(out, cat, {"o0": "m0"}, {"a": swap})
    assert np.allclose(ev(out.gen("a")), swap)


# ---------------------------------------------------------------------------
# norm bounds


def test_norm_bound_examples(path_pres):
    a, b = path_pres.gen("a"), path_pres.gen("b")
    assert pr.norm_bound(path_pres.unit("x"), {}) == 1.0
    assert pr.norm_bound(2 * (b * a), {"a": 1.0, "b": 3.0}) == 6.0
    assert pr.norm_bound(a + a, {"a": 1.0}) == 2.0


def test_norm_bound_missing_generator(path_pres):
    with pytest.raises(UnboundedGenerator):
        pr.norm_bound(path_pres.gen("a"), {})


# ---------------------------------------------------------------------------
# evaluation


def interval_presentation():
    """Two objects and one generating unitary: u*u = 1_0 and uu* = 1_1."""
    q = pr.Quiver(["i0", "i1"], [("u", "i0", "i1")])
    p = pr.free_star_category(q)
    u = p.gen("u")
    rels = [(u.star() * u, p.unit("i0")), (u * u.star(), p.unit("i1"))]
    return pr.PresentedStarCategory(q, rels, {"u": 1.0})


def test_evaluate_accepts_unitary():
    p = interval_presentation()
    cat = full_matrix_category([2])
    u = np.array([[0, 1], [1, 0]], dtype=complex)
    # oracle: u really is unitary
    assert np.allclose(u.conj().T @ u, np.eye(2)) and np.allclose(u @ u.conj().T, np.eye(2))
    ev = pr.evaluate(p, cat, {"i0": "m0", "i1": "m0"}, {"u": u})
    e = p.gen("u").star() * p.gen("u")
    assert np.allclose(ev(e), np.eye(2))


def test_evaluate_rejects_violated_relation():
    q = pr.Quiver(["x"], [("a", "x", "x")])
    p0 = pr.free_star_category(q)
    p = pr.PresentedStarCategory(q, [(p0.gen("a").star() * p0.gen("a"), p0.unit("x"))])
    cat = full_matrix_category([1])
    with pytest.raises(RelationFailed) as err:
        pr.evaluate(p, cat, {"x": "m0"}, {"a": np.array([[2.0]])})
    assert err.value.witness["residual"] > 1.0


def test_evaluate_checks_norm_bounds():
    q = pr.Quiver(["x"], [("a", "x", "x")])
    p = pr.PresentedStarCategory(q, [], {"a": 1.0})
    cat = full_matrix_category([1])
    ev = pr.evaluate(p, cat, {"x": "m0"}, {"a": np.array([[1.0]])})
    assert np.allclose(ev(p.gen("a")), [[1.0]])
    with pytest.raises(BoundFailed):
        pr.evaluate(p, cat, {"x": "m0"}, {"a": np.array([[1.5]])})


def test_evaluate_rejects_images_outside_homs():
    p = pr.free_star_category(pr.Quiver(["x"], [("a", "x", "x")]))
    diag = MatCStarCategory(
        [("d", 2)],
        {("d", "d"): [np.diag([1.0, 0]).astype(complex),
                      np.diag([0, 1.0]).astype(complex)]},
    )
    off_diagonal = np.array([[0, 1.0], [0, 0]], dtype=complex)
    with pytest.raises(InvalidFunctor):
        pr.evaluate(p, diag, {"x": "d"}, {"a": off_diagonal})


def test_evaluated_norms_respect_certificates(rng):
    p = interval_presentation()
    cat = full_matrix_category([2])
    u = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))[0]
    ev = pr.evaluate(p, cat, {"i0": "m0", "i1": "m0"}, {"u": u})
    gen = p.gen("u")
    for _ in range(25):
        e = p.zero("i0", "i1")
        for _ in range(3):
            z = complex(rng.standard_normal(), rng.standard_normal())
            e = e + z * (gen * (gen.star() * gen))
        bound = pr.norm_bound(e, {"u": 1.0})
        assert np.linalg.svd(ev(e), compute_uv=False)[0] <= bound + 1e-9


# ---------------------------------------------------------------------------
# categories realized by isometries


def terminal_category():
    return pr.FiniteCategory(["t"], {"id_t": ("t", "t")}, {"t": "id_t"},
                             {("id_t", "id_t"): "id_t"})


def arrow_category():
    """The category [1]: two objects and one non-identity arrow c."""
    arrows = {"id0": ("o0", "o0"), "id1": ("o1", "o1"), "c": ("o0", "o1")}
    compose = {
        ("id0", "id0"): "id0", ("id1", "id1"): "id1",
        ("c", "id0"): "c", ("id1", "c"): "c",
    }
    return pr.FiniteCategory(["o0", "o1"], arrows, {"o0": "id0", "o1": "id1"}, compose)


def test_ism_presentation_terminal():
    p = pr.ism_presentation(terminal_category())
    assert p.quiver.objects == ["t"]
    assert not p.quiver.arrows and not p.relations


def test_ism_presentation_single_arrow():
    p = pr.ism_presentation(arrow_category())
    assert sorted(a.name for a in p.quiver.arrows) == ["c"]
    # exactly the isometry relation c*c = 1_{o0}; cc* is unconstrained
    assert len(p.relations) == 1
    lhs, rhs = p.relations[0]
    assert lhs == p.gen("c").star() * p.gen("c")
    assert rhs == p.unit("o0")


def test_ism_presentation_round_trip_with_membership():
    p = pr.ism_presentation(arrow_category())
    cat = full_matrix_category([1, 2])
    column = np.array([[1.0], [0.0]], dtype=complex)
    assert is_isometry(column)
    ev = pr.evaluate(p, cat, {"o0": "m0", "o1": "m1"}, {"c": column})
    assert np.allclose(ev(p.gen("c")), column)
    with pytest.raises(RelationFailed):
        pr.evaluate(p, cat, {"o0": "m0", "o1": "m1"},
                    {"c": np.array([[2.0], [0.0]], dtype=complex)})


def test_invalid_category_table():
    arrows = {"id0": ("o0", "o0"), "c": ("o0", "o0")}
    with pytest.raises(InvalidCategory):
        pr.FiniteCategory(["o0"], arrows, {"o0": "id0"},
                          {("id0", "id0"): "id0", ("c", "c"): "c",
                           ("c", "id0"): "c", ("id0", "c"): "id0"})


# ---------------------------------------------------------------------------
# serialization


def test_presentation_json_round_trip():
    p = interval_presentation()
    blob = p.to_json()
    again = pr.PresentedStarCategory.from_json(blob)
    assert again.to_json() == blob
    assert len(again.relations) == 2
    assert again.norm_bounds == {"u": 1.0}
