"""Tests for the model-structure predicates, lifts and factorizations."""

import numpy as np
import pytest

from cstarcat import groupoids as gp
from cstarcat import model as md
from cstarcat import randgen as rg
from cstarcat.categories import (
    MatCStarCategory,
    StarFunctor,
    compose_functors,
    disjoint_union,
    full_matrix_category,
    functors_agree,
    identity_functor,
    inclusion_functor,
    unit_category,
    validate_category,
    validate_functor,
)
from cstarcat.errors import (
    NotAWeakEquivalence,
    PreconditionFailed,
    SquareMismatch,
)


def interval_category():
    return gp.cstar_max(gp.interval_groupoid())


def end_inclusion():
    """The unit inclusion picking one end of the interval category (the
    generating trivial cofibration)."""
    unit = unit_category()
    interval = interval_category().category
    return StarFunctor(unit, interval, {"pt": "i0"},
                       {("pt", "pt"): [np.eye(2, dtype=complex)]})


def scalar_into_m2():
    unit = unit_category()
    full = full_matrix_category([2])
    return StarFunctor(unit, full, {"pt": "m0"},
                       {("pt", "pt"): [np.eye(2, dtype=complex)]})


def collapse_with_kernel():
    rng = rg.rng_from_seed(77)
    while True:
        cat, model = rg.random_matcat(rng, n_objects=2, max_dim=4, n_sectors=2)
        if all(m[0] >= 1 for m in model.multiplicities.values()) and \
                any(m[1] >= 1 for m in model.multiplicities.values()):
            return rg.sector_projection_functor(model, keep=0)


# ---------------------------------------------------------------------------
# predicates


def test_is_cofibration():
    unit = unit_category()
    assert md.is_cofibration(identity_functor(unit))
    assert md.is_cofibration(end_inclusion())
    two = disjoint_union([unit, unit], prefixes=["l_", "r_"])
    eye = np.eye(1, dtype=complex)
    fold = StarFunctor(two, unit, {"l_pt": "pt", "r_pt": "pt"},
                       {("l_pt", "l_pt"): [eye], ("r_pt", "r_pt"): [eye]})
    assert not md.is_cofibration(fold)


def test_weak_equivalence_verdicts():
    unit = unit_category()
    assert md.is_weak_equivalence(identity_functor(unit)).status == "YES"
    inc = end_inclusion()
    verdict = md.is_weak_equivalence(inc, seed=3)
    assert verdict.status == "YES"
    # the witness at the far end is a unitary in hom(i0, i1)
    x, witness = verdict.witnesses["i1"]
    assert x == "pt" and gp.uni_membership(witness)
    assert inc.target.hom("i0", "i1").contains(witness)
    bad = scalar_into_m2()
    v2 = md.is_weak_equivalence(bad)
    assert v2.status == "NO" and v2.failure == ("pt", "pt")


def test_trivial_fibration_predicate():
    unit = unit_category()
    assert md.is_trivial_fibration(identity_functor(unit))
    assert not md.is_trivial_fibration(end_inclusion())
    # the fold of two unit copies is object-surjective but NOT fully
    # faithful: the zero cross hom maps into a one-dimensional hom, so the
    # per-instance rank check must reject it
    two = disjoint_union([unit, unit], prefixes=["l_", "r_"])
    eye = np.eye(1, dtype=complex)
    fold = StarFunctor(two, unit, {"l_pt": "pt", "r_pt": "pt"},
                       {("l_pt", "l_pt"): [eye], ("r_pt", "r_pt"): [eye]})
    assert validate_functor(fold) == []
    assert not md.is_trivial_fibration(fold)
    # a conjugation isomorphism is one
    rng = rg.rng_from_seed(3)
    cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
    _target, conj = rg.conjugate_category(rng, cat)
    assert md.is_trivial_fibration(conj)


def test_rlp_generating_characterizations():
    ident = identity_functor(unit_category())
    assert all(md.rlp_generating(ident, w) for w in "UVW")
    scalar = scalar_into_m2()
    assert md.rlp_generating(scalar, "U")
    assert not md.rlp_generating(scalar, "V")
    assert md.rlp_generating(scalar, "W")
    collapse = collapse_with_kernel()
    assert validate_functor(collapse) == []
    assert not md.rlp_generating(collapse, "W")


def test_rlp_agreement_with_trivial_fibration():
    functors = [identity_functor(unit_category()), end_inclusion(),
                scalar_into_m2(), collapse_with_kernel()]
    report = md.axiom_harness("rlp_equiv", functors)
    assert all(entry["status"] == "pass" for entry in report)


def test_fibrancy_and_cofibrancy_witnesses():
    cat = full_matrix_category([2, 3])
    assert md.fibrancy_witness(cat)
    assert md.cofibrancy_witness(cat)


# ---------------------------------------------------------------------------
# unitary lifts


def test_lift_through_identity_returns_the_unitary():
    cat = full_matrix_category([2])
    ident = identity_functor(cat)
    v = np.array([[0, 1], [-1, 0]], dtype=complex)
    lifted = md.solve_unitary_lift(ident, "m0", v, "m0")
    assert lifted is not None
    u, obj = lifted
    assert obj == "m0" and np.allclose(u, v, atol=1e-9)


def test_lift_through_groupoid_collapse():
    interval = gp.interval_groupoid()
    gc = gp.cstar_max(interval)
    unit = unit_category()
    rep = gp.UnitaryRep(interval, unit, {x: "pt" for x in interval.objects},
                        {g: np.eye(1) for g in interval.arrows})
    collapse = gp.adjunction_extend(gc, rep)
    lifted = md.solve_unitary_lift(collapse, "i0", np.eye(1), "pt")
    assert lifted is not None
    u, obj = lifted
    assert gp.uni_membership(u)
    assert np.allclose(collapse.apply("i0", obj, u), np.eye(1))


def test_lift_with_empty_preimage_is_none():
    inc = end_inclusion()
    # nothing maps to i1, and from pt the only candidate v lands at i0
    assert md.solve_unitary_lift(inc, "pt", np.eye(2, dtype=complex), "i1") is None


def test_lift_rejects_non_unitary_and_shape_mismatch():
    cat = full_matrix_category([2])
    ident = identity_functor(cat)
    assert md.solve_unitary_lift(ident, "m0", 2 * np.eye(2), "m0") is None
    with pytest.raises(SquareMismatch):
        md.solve_unitary_lift(ident, "m0", np.eye(3), "m0")


# ---------------------------------------------------------------------------
# quasi-inverse


def test_quasi_inverse_of_identity():
    cat = full_matrix_category([2])
    ident = identity_functor(cat)
    g, u, v = md.quasi_inverse(ident)
    assert functors_agree(g, ident)
    assert np.allclose(u.components["m0"], np.eye(2))
    assert np.allclose(v.components["m0"], np.eye(2))


def test_quasi_inverse_of_end_inclusion():
    inc = end_inclusion()
    g, u, v = md.quasi_inverse(inc, seed=5)
    # G collapses both ends to the point
    assert g.object_map == {"i0": "pt", "i1": "pt"}
    assert np.allclose(v.components["i0"], np.eye(2))  # identity on the image
    far = v.components["i1"]
    assert gp.uni_membership(far)
    assert inc.target.hom("i0", "i1").contains(far)
    assert u.is_natural() and v.is_natural()
    assert u.is_unitary() and v.is_unitary()


def test_quasi_inverse_requires_weak_equivalence():
    with pytest.raises(NotAWeakEquivalence):
        md.quasi_inverse(scalar_into_m2())


def test_quasi_inverse_naturality_on_random_instances():
    rng = rg.rng_from_seed(31)
    for trial in range(5):
        cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
        weq = rg.random_weq(rng, cat, n_extra=1)
        g, u, v = md.quasi_inverse(weq, seed=trial)
        assert validate_functor(g) == []
        assert u.naturality_residual() <= 1e-9
        assert v.naturality_residual() <= 1e-9
        assert u.is_unitary() and v.is_unitary()


# ---------------------------------------------------------------------------
# lifting squares


def test_square_must_commute():
    unit = unit_category()
    interval = interval_category().category
    inc0 = end_inclusion()
    inc1 = StarFunctor(unit, interval, {"pt": "i1"},
                       {("pt", "pt"): [np.eye(2, dtype=complex)]})
    with pytest.raises(SquareMismatch):
        md.LiftingSquare(top=inc0, left=identity_functor(unit),
                         right=identity_functor(interval), bottom=inc1)


def test_lift_tcof_fib_with_identity_left_leg():
    cat = full_matrix_category([2])
    ident = identity_functor(cat)
    square = md.LiftingSquare(top=ident, left=ident, right=ident, bottom=ident)
    lift = md.lift_tcof_fib(square)
    assert functors_agree(lift, ident)


def test_lift_cof_tfib_with_identity_right_leg():
    rng = rg.rng_from_seed(13)
    cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
    weq = rg.random_weq(rng, cat, n_extra=1)
    ident_b = identity_functor(weq.target)
    square = md.LiftingSquare(top=weq, left=weq, right=ident_b, bottom=ident_b)
    lift = md.lift_cof_tfib(square)
    assert max(square.triangle_residuals(lift)) <= 1e-8


def test_mixed_square_from_factorizations():
    rng = rg.rng_from_seed(17)
    for trial in range(5):
        cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
        functor = rg.random_weq(rng, cat, n_extra=1)
        path = md.factor_path(functor)
        cylinder = md.factor_cylinder(functor)
        square = md.LiftingSquare(top=cylinder.first, left=path.first,
                                  right=cylinder.second, bottom=path.second)
        lift1 = md.lift_tcof_fib(square, seed=trial)
        assert max(square.triangle_residuals(lift1)) <= 1e-8
        assert validate_functor(lift1) == []
        lift2 = md.lift_cof_tfib(square)
        assert max(square.triangle_residuals(lift2)) <= 1e-8
        assert validate_functor(lift2) == []


def test_lift_preconditions_enforced():
    unit = unit_category()
    two = disjoint_union([unit, unit], prefixes=["l_", "r_"])
    eye = np.eye(1, dtype=complex)
    fold = StarFunctor(two, unit, {"l_pt": "pt", "r_pt": "pt"},
                       {("l_pt", "l_pt"): [eye], ("r_pt", "r_pt"): [eye]})
    ident = identity_functor(unit)
    square = md.LiftingSquare(top=fold, left=fold, right=ident, bottom=ident)
    with pytest.raises(PreconditionFailed):
        md.lift_tcof_fib(square)  # fold is not a cofibration
    inc = inclusion_functor(unit, disjoint_union([unit, unit],
                                                 prefixes=["", "x_"]))
    square2 = md.LiftingSquare(top=identity_functor(unit), left=identity_functor(unit),
                               right=inc, bottom=inc)
    with pytest.raises(PreconditionFailed):
        md.lift_cof_tfib(square2)  # inclusion is not a trivial fibration


# ---------------------------------------------------------------------------
# factorizations


def test_factor_path_shapes_and_formula():
    rng = rg.rng_from_seed(41)
    cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
    functor = rg.random_weq(rng, cat, n_extra=1)
    x = cat.object_names[0]
    fx = functor.object_map[x]
    u = rg.random_unitary(rng, functor.target.obj(fx).dim)
    # an extra triple (x, u, y) with u a random unitary in hom(Fx, y)... use
    # a unitary already in the conjugated hom space
    space = functor.target.hom(fx, fx)
    from cstarcat.linalg import find_invertible
    from cstarcat.categories import unitarize
    w = unitarize(functor.target, find_invertible(space, seed=2), fx, fx)
    path = md.factor_path(functor, extra_triples=[(x, w, fx)])
    assert validate_category(path.midway) == []
    assert path.composite_residual(functor) <= 1e-9
    assert md.is_cofibration(path.first)
    assert md.is_weak_equivalence(path.first, seed=1).status == "YES"
    # P(a) = u' F(a) u* on the materialized triples
    keys = path.extras["keys"]
    names = path.extras["names"]
    midway = path.extras["path"]
    for k1 in keys:
        for k2 in keys:
            space = cat.hom(k1[0], k2[0])
            if space.dim == 0:
                continue
            a = rg.random_hom_element(rng, space)
            image = path.second.apply(names[k1], names[k2], a)
            u1, u2 = midway.unitary_of(k1), midway.unitary_of(k2)
            expected = u2 @ functor.apply(k1[0], k2[0], a) @ u1.conj().T
            assert np.linalg.norm(image - expected) <= 1e-8


def test_factor_path_of_unit_identity():
    unit = unit_category()
    path = md.factor_path(identity_functor(unit))
    assert len(path.midway.objects) == 1
    assert path.composite_residual(identity_functor(unit)) == 0.0


def test_path_oracle_answers_lift_queries():
    rng = rg.rng_from_seed(43)
    cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
    functor = rg.random_weq(rng, cat, n_extra=0)
    path = md.factor_path(functor)
    oracle = md.path_lift_oracle(path)
    name = path.first.object_map[cat.object_names[0]]
    fx = functor.object_map[cat.object_names[0]]
    space = functor.target.hom(fx, fx)
    from cstarcat.linalg import find_invertible
    from cstarcat.categories import unitarize
    v = unitarize(functor.target, find_invertible(space, seed=9), fx, fx)
    answer = oracle(name, v, fx)
    assert answer is not None
    witness, new_key = answer
    assert np.allclose(witness, np.eye(cat.obj(cat.object_names[0]).dim))


def test_factor_cylinder_counts():
    rng = rg.rng_from_seed(47)
    cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
    ident = identity_functor(cat)
    cylinder = md.factor_cylinder(ident)
    assert len(cylinder.midway.objects) == 2 * len(cat.objects)
    assert md.is_trivial_fibration(cylinder.second)
    assert md.is_cofibration(cylinder.first)
    assert cylinder.composite_residual(ident) <= 1e-12

    inc = end_inclusion()
    cyl2 = md.factor_cylinder(inc)
    assert len(cyl2.midway.objects) == 3
    assert all(space.dim == 1 for space in cyl2.midway.homs.values())
    assert validate_category(cyl2.midway) == []


def test_cylinder_hom_dimensions_follow_the_functor():
    rng = rg.rng_from_seed(53)
    cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
    weq = rg.random_weq(rng, cat, n_extra=1)
    cylinder = md.factor_cylinder(weq)
    tgt = weq.target
    for y in tgt.object_names:
        for x in cat.object_names:
            assert cylinder.midway.hom(f"b:{y}", f"a:{x}").dim == \
                tgt.hom(y, weq.object_map[x]).dim


# ---------------------------------------------------------------------------
# pushout-product and harnesses


def test_pushout_product_of_end_inclusions():
    # oracle, by hand: gluing identifies one pair, leaving 3 classes that
    # map injectively into the 4 object pairs
    inc = end_inclusion()
    verdict = md.pushout_product_objects(inc, inc)
    assert verdict.pushout_size == 3
    assert verdict.injective


def test_pushout_product_identity_is_bijection():
    cat = full_matrix_category([2, 3])
    ident = identity_functor(cat)
    verdict = md.pushout_product_objects(ident, ident)
    assert verdict.injective
    assert verdict.pushout_size == len(cat.objects) ** 2


def test_pushout_product_detects_collapse():
    unit = unit_category()
    two = disjoint_union([unit, unit], prefixes=["l_", "r_"])
    eye = np.eye(1, dtype=complex)
    fold = StarFunctor(two, unit, {"l_pt": "pt", "r_pt": "pt"},
                       {("l_pt", "l_pt"): [eye], ("r_pt", "r_pt"): [eye]})
    inc = end_inclusion()
    verdict = md.pushout_product_objects(fold, inc)
    assert not verdict.injective
    assert verdict.witness is not None


def test_two_of_three_harness():
    rng = rg.rng_from_seed(59)
    pairs = []
    for _ in range(3):
        cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
        f = rg.random_weq(rng, cat, n_extra=1)
        g = rg.random_weq(rng, f.target, n_extra=1, prefix="v")
        pairs.append((f, g))
    report = md.axiom_harness("two_of_three", pairs, seed=4)
    assert all(entry["status"] == "pass" for entry in report)


def test_retract_harness():
    rng = rg.rng_from_seed(61)
    instances = []
    for _ in range(2):
        cat, _ = rg.random_matcat(rng, n_objects=1, max_dim=3)
        small = rg.random_weq(rng, cat, n_extra=1)
        big, i, p, j, q = rg.build_retract(small)
        # the retract diagram really commutes
        assert functors_agree(compose_functors(q, big),
                              compose_functors(small, p))
        assert functors_agree(compose_functors(big, i),
                              compose_functors(j, small))
        instances.append({"big": big, "small": small, "i": i, "p": p,
                          "j": j, "q": q})
    report = md.axiom_harness("retract", instances, seed=6)
    assert all(entry["status"] == "pass" for entry in report)


def test_factor_roundtrip_harness():
    rng = rg.rng_from_seed(67)
    functors = []
    for _ in range(2):
        cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
        functors.append(rg.random_weq(rng, cat, n_extra=1))
    report = md.axiom_harness("factor_roundtrip", functors)
    assert all(entry["status"] == "pass" for entry in report)
