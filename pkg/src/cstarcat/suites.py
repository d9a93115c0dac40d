"""Verification suites: seeded end-to-end runs of the model-category,
monoidality, simplicial and adjunction properties, emitting report entries.

Each suite is deterministic in its seed; counts are parameters so the CLI
can run quick passes while the acceptance tests run the full sizes.
"""

from __future__ import annotations

import numpy as np

from . import model as md
from . import randgen as rg
from .categories import (
    compose_functors,
    curry,
    functors_agree,
    identity_functor,
    pair_name,
    tensor_functor,
    tensor_max,
    uncurry,
    unitarize,
    validate_category,
    validate_functor,
)
from .errors import NotFiniteWithinBound
from .groupoids import (
    comparison_functor,
    connected_groupoid,
    cstar_max,
    cyclic_groupoid,
    cyclic_group_table,
    fundamental_groupoid,
    interval_groupoid,
    normalize_fp,
    terminal_groupoid,
)
from .homotopy import cotensor, pi, pi_map, tensor_with_sset
from .linalg import op_norm
from .reports import CheckEntry
from .simplicial import horn_inclusion, standard


def monoidality_groupoids():
    """The five bundled groupoids of the monoidality checks."""
    return {
        "terminal": terminal_groupoid(),
        "interval": interval_groupoid(),
        "z2": cyclic_groupoid(2),
        "z3": cyclic_groupoid(3),
        "pair_z2": connected_groupoid(["p0", "p1"], cyclic_group_table(2)),
    }


def functor_zoo(rng: np.random.Generator, count: int):
    """A labeled mix of functors covering full / non-full, faithful /
    non-faithful, object-surjective / non-surjective cases."""
    out = []
    kinds = ["weq", "conjugation", "padding", "fattening", "projection", "fold"]
    while len(out) < count:
        kind = kinds[len(out) % len(kinds)]
        if kind == "weq":
            cat, _ = rg.random_matcat(rng, n_objects=int(rng.integers(1, 3)),
                                      max_dim=4)
            out.append((kind, rg.random_weq(rng, cat, n_extra=1)))
        elif kind == "conjugation":
            cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=4)
            out.append((kind, rg.conjugate_category(rng, cat)[1]))
        elif kind == "padding":
            cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
            out.append((kind, rg.padding_functor(rng, cat)))
        elif kind == "fattening":
            cat, model = rg.random_matcat(rng, n_objects=2, max_dim=3)
            out.append((kind, rg.fattening_functor(cat, model)))
        elif kind == "projection":
            cat, model = rg.random_matcat(rng, n_objects=2, max_dim=4,
                                          n_sectors=2)
            if not all(m[0] >= 1 for m in model.multiplicities.values()):
                continue
            out.append((kind, rg.sector_projection_functor(model, keep=0)))
        else:  # fold of a two-copy union onto one copy
            cat, _ = rg.random_matcat(rng, n_objects=1, max_dim=3)
            from .categories import StarFunctor, disjoint_union
            two = disjoint_union([cat, cat], prefixes=["l_", "r_"])
            obj_map = {}
            hom_maps = {}
            for pre in ("l_", "r_"):
                for x in cat.object_names:
                    obj_map[pre + x] = x
                for (x, y), space in cat.homs.items():
                    hom_maps[(pre + x, pre + y)] = list(space.basis)
            out.append((kind, StarFunctor(two, cat, obj_map, hom_maps,
                                          tol=cat.tol)))
    return out


# ---------------------------------------------------------------------------
# suites


def suite_mc(seed: int = 0, n_factor: int = 10, n_lift: int = 10,
             n_rlp: int = 24, n_two: int = 10, n_retract: int = 6):
    """MC2-MC5 at reduced scale: factorizations, lifts, retracts, 2-of-3 and
    the RLP agreement checks."""
    rng = rg.rng_from_seed(seed)
    entries = []

    for idx in range(n_factor):
        cat, _ = rg.random_matcat(rng, n_objects=int(rng.integers(1, 3)),
                                  max_dim=4)
        functor = rg.random_weq(rng, cat, n_extra=1)
        path = md.factor_path(functor)
        cylinder = md.factor_cylinder(functor)
        weq = md.is_weak_equivalence(path.first, seed=seed + idx)
        ok = (md.is_cofibration(path.first) and weq.status == "YES"
              and md.is_cofibration(cylinder.first)
              and md.is_trivial_fibration(cylinder.second)
              and not validate_category(path.midway)
              and not validate_category(cylinder.midway))
        residual = max(path.composite_residual(functor),
                       cylinder.composite_residual(functor))
        entries.append(CheckEntry(
            f"mc5[{idx}]", "pass" if ok and residual <= 1e-8 else "fail",
            residual=residual))

    for idx in range(n_lift):
        cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
        functor = rg.random_weq(rng, cat, n_extra=1)
        path = md.factor_path(functor)
        cylinder = md.factor_cylinder(functor)
        square = md.LiftingSquare(top=cylinder.first, left=path.first,
                                  right=cylinder.second, bottom=path.second)
        lift1 = md.lift_tcof_fib(square, seed=seed + idx)
        lift2 = md.lift_cof_tfib(square)
        residual = max(*square.triangle_residuals(lift1),
                       *square.triangle_residuals(lift2))
        entries.append(CheckEntry(
            f"mc4[{idx}]", "pass" if residual <= 1e-8 else "fail",
            residual=residual))

    zoo = functor_zoo(rng, n_rlp)
    entries.extend(
        CheckEntry(f"rlp[{i}]:{kind}", entry["status"], detail=entry.get("detail", ""))
        for i, ((kind, functor), entry) in enumerate(
            zip(zoo, md.axiom_harness("rlp_equiv", [f for _k, f in zoo]))))

    pairs = []
    for _ in range(n_two):
        cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
        f = rg.random_weq(rng, cat, n_extra=1)
        g = rg.random_weq(rng, f.target, n_extra=1, prefix="v")
        pairs.append((f, g))
    for entry in md.axiom_harness("two_of_three", pairs, seed=seed):
        entries.append(CheckEntry(entry["name"], entry["status"],
                                  detail=entry.get("detail", "")))

    retracts = []
    for _ in range(n_retract):
        cat, _ = rg.random_matcat(rng, n_objects=1, max_dim=3)
        small = rg.random_weq(rng, cat, n_extra=1)
        big, i, p, j, q = rg.build_retract(small)
        retracts.append({"big": big, "small": small, "i": i, "p": p,
                         "j": j, "q": q})
    for entry in md.axiom_harness("retract", retracts, seed=seed):
        entries.append(CheckEntry(entry["name"], entry["status"],
                                  residual=entry.get("residual"),
                                  detail=entry.get("detail", "")))
    return entries


def suite_monoidal(seed: int = 0):
    """Comparison isomorphisms for all pairs of the bundled groupoids, plus
    pushout-product object checks on generated cofibrations."""
    rng = rg.rng_from_seed(seed)
    entries = []
    groupoids = monoidality_groupoids()
    for name1, g1 in groupoids.items():
        for name2, g2 in groupoids.items():
            _functor, verdict = comparison_functor(g1, g2)
            ok = verdict.objects_bijective and verdict.hom_dims_equal and \
                verdict.hom_maps_full_rank and verdict.functor_residual <= 1e-8
            entries.append(CheckEntry(f"comparison[{name1},{name2}]",
                                      "pass" if ok else "fail",
                                      residual=verdict.functor_residual))
    for idx in range(6):
        cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
        f = rg.padding_functor(rng, cat)
        cat2, _ = rg.random_matcat(rng, n_objects=1, max_dim=3, prefix="s")
        f2 = rg.padding_functor(rng, cat2)
        verdict = md.pushout_product_objects(f, f2)
        entries.append(CheckEntry(f"pushout_product[{idx}]",
                                  "pass" if verdict.injective else "fail"))
    return entries


def suite_simplicial(seed: int = 0, budget: int = 10000):
    """Quillen-pair content: horn inclusions, the interval identification,
    the circle obstruction, and tensor/cotensor sanity."""
    entries = []
    for n in (2, 3):
        for k in range(n + 1):
            _functor, gfunctor = pi_map(horn_inclusion(n, k, dim_cap=3),
                                        bound=budget)
            entries.append(CheckEntry(
                f"pi_horn_iso[{n},{k}]",
                "pass" if gfunctor.is_isomorphism() else "fail"))
    edge = normalize_fp(fundamental_groupoid(standard("delta", 1, dim_cap=2)),
                        budget)
    ok = edge.finite and edge.groupoid.is_isomorphic_to(interval_groupoid())
    entries.append(CheckEntry("pi_edge_is_interval", "pass" if ok else "fail"))
    try:
        pi(standard("boundary", 2), bound=budget)
        entries.append(CheckEntry("pi_circle_unbounded", "fail",
                                  detail="expected NotFiniteWithinBound"))
    except NotFiniteWithinBound:
        entries.append(CheckEntry("pi_circle_unbounded", "pass"))

    rng = rg.rng_from_seed(seed)
    cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
    tensored = tensor_with_sset(cat, standard("delta", 0, dim_cap=2),
                                bound=budget)
    ok = sorted(o.dim for o in tensored.objects) == \
        sorted(o.dim for o in cat.objects)
    entries.append(CheckEntry("tensor_unit_dims", "pass" if ok else "fail"))
    spaces = cotensor(cat, standard("delta", 0, dim_cap=2), bound=budget)
    names = cat.object_names
    ok = all(spaces[(i, j)].dim == cat.hom(x, y).dim
             for i, x in enumerate(names) for j, y in enumerate(names))
    entries.append(CheckEntry("cotensor_point_homs", "pass" if ok else "fail"))
    return entries


def suite_adjunctions(seed: int = 0, n_round: int = 10, n_exp: int = 6):
    """Groupoid adjunction round trips and the exponential law."""
    from .groupoids import adjunction_extend, adjunction_restrict

    rng = rg.rng_from_seed(seed)
    entries = []
    for idx in range(n_round):
        groupoid = rg.random_groupoid(rng, n_objects=2, max_order=4)
        gc = cstar_max(groupoid)
        rep = rg.random_unitary_rep(rng, groupoid, gc)
        functor = adjunction_extend(gc, rep)
        back = adjunction_restrict(gc, functor)
        residual = max(
            float(np.linalg.norm(back.arrow_map[g] - rep.arrow_map[g]))
            for g in groupoid.arrows)
        again = adjunction_extend(gc, back)
        ok = functors_agree(again, functor) and back.object_map == rep.object_map
        entries.append(CheckEntry(
            f"adjunction[{idx}]", "pass" if ok and residual <= 1e-9 else "fail",
            residual=residual))

    for idx in range(n_exp):
        a, _ = rg.random_matcat(rng, n_objects=1, max_dim=2, prefix="a")
        b, _ = rg.random_matcat(rng, n_objects=1, max_dim=2, prefix="b")
        _target, g = rg.conjugate_category(rng, a)
        _target2, h = rg.conjugate_category(rng, b, prefix="d")
        tensor = tensor_max(a, b, check=False)
        functor = tensor_functor(g, h, source=tensor)
        data = curry(functor, a, b)
        back = uncurry(data, tensor)
        ok = functors_agree(back, functor)
        worst = 0.0
        for (x, x2), space in a.homs.items():
            for i in range(space.dim):
                alpha = data.hom_transforms[(x, x2)][i]
                worst = max(worst, alpha.sup_norm() - op_norm(space.basis[i]))
        entries.append(CheckEntry(
            f"exponential[{idx}]",
            "pass" if ok and worst <= 1e-9 else "fail",
            residual=max(worst, 0.0)))
    return entries
