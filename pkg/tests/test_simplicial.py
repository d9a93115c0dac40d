"""Tests for simplicial sets, the pi functor and the simplicial structure."""

import numpy as np
import pytest

from cstarcat import groupoids as gp
from cstarcat import homotopy as ho
from cstarcat.categories import (
    NatTransform,
    full_matrix_category,
    identity_functor,
    nat_compose,
    pair_name,
    tensor_max,
    unit_category,
    validate_category,
    validate_functor,
)
from cstarcat.errors import InvalidParams, InvalidSimplicialSet, NotFiniteWithinBound
from cstarcat.simplicial import (
    FiniteSimplicialSet,
    SimplexRef,
    canon_degens,
    horn_inclusion,
    standard,
)


# ---------------------------------------------------------------------------
# shapes


def test_standard_counts():
    d2 = standard("delta", 2)
    assert [d2.count_nondegenerate(k) for k in range(3)] == [3, 3, 1]
    h12 = standard("horn", 2, 1)
    assert [h12.count_nondegenerate(k) for k in range(3)] == [3, 2, 0]
    b2 = standard("boundary", 2)
    assert [b2.count_nondegenerate(k) for k in range(3)] == [3, 3, 0]


def test_standard_rejects_bad_parameters():
    with pytest.raises(InvalidParams):
        standard("horn", 2, 5)
    with pytest.raises(InvalidParams):
        standard("nonsense", 2)


def test_simplicial_identities_exhaustively():
    for sset in (standard("delta", 3, dim_cap=3), standard("horn", 3, 1, dim_cap=3),
                 standard("boundary", 3, dim_cap=3)):
        assert sset.identity_violations() == []


def test_degeneracy_word_canonicalization():
    # s_0 s_0 = s_1 s_0 and friends
    assert canon_degens((0, 0)) == (1, 0)
    assert canon_degens((0, 1)) == (2, 0)
    assert canon_degens((2, 0)) == (2, 0)
    ref = SimplexRef("v", 0).degenerate_by(0).degenerate_by(0)
    assert ref.degens == (1, 0)


def test_json_round_trip_and_degenerate_rejection():
    d2 = standard("delta", 2)
    blob = d2.to_json()
    again = FiniteSimplicialSet.from_json(blob)
    assert again.to_json() == blob
    blob["simplices"]["1"][0]["degenerate"] = True
    with pytest.raises(InvalidSimplicialSet):
        FiniteSimplicialSet.from_json(blob)


# ---------------------------------------------------------------------------
# pi


def test_pi_of_point_is_unit_category():
    gc = ho.pi(standard("delta", 0, dim_cap=2))
    assert len(gc.category.objects) == 1
    assert gc.category.objects[0].dim == 1


def test_pi_of_edge_is_interval_category():
    gc = ho.pi(standard("delta", 1, dim_cap=2))
    interval = gp.cstar_max(gp.interval_groupoid())
    assert gc.groupoid.is_isomorphic_to(interval.groupoid)
    assert sorted(o.dim for o in gc.category.objects) == \
        sorted(o.dim for o in interval.category.objects)


def test_pi_of_circle_hits_the_budget():
    with pytest.raises(NotFiniteWithinBound):
        ho.pi(standard("boundary", 2), bound=10000)


def test_pi_sends_higher_horn_inclusions_to_isomorphisms():
    for n in (2, 3):
        for k in range(n + 1):
            functor, gfunctor = ho.pi_map(horn_inclusion(n, k, dim_cap=3))
            assert gfunctor.is_isomorphism(), (n, k)
            assert validate_functor(functor) == []
            # comparison-style checks: object bijection and hom dims
            assert len(functor.source.objects) == len(functor.target.objects)
            for x, y in functor.source.pairs():
                assert functor.source.hom(x, y).dim == functor.target.hom(
                    functor.object_map[x], functor.object_map[y]).dim


def test_pi_of_edge_horn_matches_unit_inclusion():
    functor, _g = ho.pi_map(horn_inclusion(1, 1, dim_cap=2))
    # source is the unit category (one object, scalars), target the interval
    assert len(functor.source.objects) == 1
    assert functor.source.objects[0].dim == 1
    assert len(functor.target.objects) == 2
    assert all(o.dim == 2 for o in functor.target.objects)
    assert all(functor.target.hom(x, y).dim == 1
               for x, y in functor.target.pairs())


# ---------------------------------------------------------------------------
# tensor and cotensor with simplicial sets


def test_tensor_with_point_preserves_hom_dimensions():
    cat = full_matrix_category([2, 3])
    tensored = ho.tensor_with_sset(cat, standard("delta", 0, dim_cap=2))
    assert [o.dim for o in tensored.objects] == [2, 3]
    point_object = tensored.object_names[0].split(",")[1][:-1]
    for x in cat.object_names:
        for y in cat.object_names:
            assert tensored.hom(pair_name(x, point_object),
                                pair_name(y, point_object)).dim == cat.hom(x, y).dim


def test_tensor_with_edge_matches_interval_kronecker_counts():
    cat = full_matrix_category([2])
    tensored = ho.tensor_with_sset(cat, standard("delta", 1, dim_cap=2))
    direct = tensor_max(cat, gp.cstar_max(gp.interval_groupoid()).category)
    assert sorted(o.dim for o in tensored.objects) == \
        sorted(o.dim for o in direct.objects)
    assert sorted(s.dim for s in tensored.homs.values()) == \
        sorted(s.dim for s in direct.homs.values())
    assert validate_category(tensored) == []


def test_cotensor_with_point_recovers_homs():
    cat = full_matrix_category([2, 3])
    spaces = ho.cotensor(cat, standard("delta", 0, dim_cap=2))
    names = cat.object_names
    for i, x in enumerate(names):
        for j, y in enumerate(names):
            assert spaces[(i, j)].dim == cat.hom(x, y).dim


def test_cotensor_with_edge_against_constant_probes():
    cat = full_matrix_category([2])
    spaces = ho.cotensor(cat, standard("delta", 1, dim_cap=2))
    # constant probes at the single object of a full matrix algebra: the
    # transformation space is cut down by naturality over the interval
    assert spaces[(0, 0)].dim >= 1
    alpha = spaces[(0, 0)].element(np.ones(spaces[(0, 0)].dim))
    assert alpha.is_natural()


# ---------------------------------------------------------------------------
# mapping-space membership


def test_map_simplex_levels():
    unit = unit_category()
    ident = identity_functor(unit)
    assert ho.map_simplex_check(unit, unit, 0, [ident], [])
    one = NatTransform(ident, ident, {"pt": np.eye(1)})
    assert ho.map_simplex_check(unit, unit, 1, [ident, ident], [one])
    scaled = NatTransform(ident, ident, {"pt": 2 * np.eye(1)})
    assert not ho.map_simplex_check(unit, unit, 1, [ident, ident], [scaled])


def test_map_simplices_compose():
    # accepted 1-simplices compose to an accepted 1-simplex (nerve law);
    # naturality against the identity means centrality, so use the diagonal
    # algebra, whose unitaries diag(phases) are all central
    from cstarcat.categories import MatCStarCategory

    diag = MatCStarCategory(
        [("d", 2)],
        {("d", "d"): [np.diag([1.0, 0]).astype(complex),
                      np.diag([0, 1.0]).astype(complex)]},
    )
    ident = identity_functor(diag)
    u = np.diag([1.0, -1.0]).astype(complex)
    w = np.diag([1j, 1.0]).astype(complex)
    alpha = NatTransform(ident, ident, {"d": u})
    beta = NatTransform(ident, ident, {"d": w})
    assert ho.map_simplex_check(diag, diag, 1, [ident, ident], [alpha])
    assert ho.map_simplex_check(diag, diag, 1, [ident, ident], [beta])
    composite = nat_compose(beta, alpha)
    assert ho.map_simplex_check(diag, diag, 1, [ident, ident], [composite])
    assert ho.map_simplex_check(diag, diag, 2, [ident, ident, ident], [alpha, beta])
    off = np.array([[0, 1], [1, 0]], dtype=complex)
    assert not ho.map_simplex_check(diag, diag, 1, [ident, ident],
                                    [NatTransform(ident, ident, {"d": off})])
