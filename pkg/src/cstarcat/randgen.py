"""Seeded generators for random instances: categories, functors, weak
equivalences, groupoids and unitary representations.

Random categories follow the structure theory of finite-dimensional
C*-categories: a common list of irreducible sectors, per-object multiplicity
vectors, hom spaces spanned by matrix units tensored with sector identities,
and a random unitary change of basis per object. Everything built here is
valid by construction, so generators double as validator fixtures.

All draws go through a numpy Generator seeded by the caller; identical seeds
give identical instances.
"""

from __future__ import annotations

import numpy as np

from .categories import (
    MatCStarCategory,
    StarFunctor,
    disjoint_union,
    full_matrix_category,
    inclusion_functor,
)
from .errors import InvalidParams
from .groupoids import (
    FiniteGroupoid,
    GroupoidCStar,
    UnitaryRep,
    connected_groupoid,
    cstar_max,
    cyclic_group_table,
)
from .linalg import DEFAULT_TOL, Subspace, Tolerance


def rng_from_seed(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.PCG64(seed))


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-ish unitary via QR with a deterministic phase fix."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases = phases / np.abs(phases)
    return q * phases


# ---------------------------------------------------------------------------
# categories


class SectorModel:
    """Sector dimensions plus per-object multiplicities and basis-change
    unitaries; knows how to emit the category and block-structured maps."""

    def __init__(self, sector_dims, multiplicities, unitaries, names,
                 tol: Tolerance = DEFAULT_TOL):
        self.sector_dims = list(sector_dims)
        self.multiplicities = {n: list(m) for n, m in zip(names, multiplicities)}
        self.unitaries = dict(zip(names, unitaries))
        self.names = list(names)
        self.tol = tol

    def dim(self, name: str) -> int:
        return sum(m * d for m, d in
                   zip(self.multiplicities[name], self.sector_dims))

    def _offsets(self, name: str) -> list[int]:
        out, acc = [], 0
        for m, d in zip(self.multiplicities[name], self.sector_dims):
            out.append(acc)
            acc += m * d
        return out

    def hom_basis(self, x: str, y: str) -> list[np.ndarray]:
        rows, cols = self.dim(y), self.dim(x)
        offx, offy = self._offsets(x), self._offsets(y)
        ux, uy = self.unitaries[x], self.unitaries[y]
        basis = []
        for i, d in enumerate(self.sector_dims):
            mx, my = self.multiplicities[x][i], self.multiplicities[y][i]
            for r in range(my):
                for s in range(mx):
                    m = np.zeros((rows, cols), dtype=np.complex128)
                    rr, cc = offy[i] + r * d, offx[i] + s * d
                    m[rr:rr + d, cc:cc + d] = np.eye(d) / np.sqrt(d)
                    basis.append(uy @ m @ ux.conj().T)
        return basis

    def category(self) -> MatCStarCategory:
        homs = {}
        for x in self.names:
            for y in self.names:
                basis = self.hom_basis(x, y)
                if basis:
                    homs[(x, y)] = Subspace(self.dim(y), self.dim(x), basis,
                                            tol=self.tol, _trusted=True)
        return MatCStarCategory([(n, self.dim(n)) for n in self.names], homs,
                                tol=self.tol)


def random_matcat(rng: np.random.Generator, n_objects: int = 2,
                  max_dim: int = 4, n_sectors: int | None = None,
                  prefix: str = "o") -> tuple[MatCStarCategory, SectorModel]:
    """A random valid category with at most ``max_dim``-dimensional carriers."""
    if not (1 <= n_objects <= 5 and 1 <= max_dim <= 6):
        raise InvalidParams("supported bounds: <= 5 objects, dims <= 6")
    k = n_sectors or int(rng.integers(1, 3))
    sector_dims = [int(rng.integers(1, 3)) for _ in range(k)]
    names = [f"{prefix}{i}" for i in range(n_objects)]
    mults = []
    for _ in names:
        while True:
            m = [int(rng.integers(0, 3)) for _ in range(k)]
            total = sum(mi * d for mi, d in zip(m, sector_dims))
            if 1 <= total <= max_dim:
                mults.append(m)
                break
    unitaries = [random_unitary(rng, sum(mi * d for mi, d in zip(m, sector_dims)))
                 for m in mults]
    model = SectorModel(sector_dims, mults, unitaries, names)
    return model.category(), model


def random_hom_element(rng: np.random.Generator, space: Subspace) -> np.ndarray:
    coeffs = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
    return space.from_coords(coeffs)


def conjugate_category(rng: np.random.Generator, cat: MatCStarCategory,
                       prefix: str = "c") -> tuple[MatCStarCategory, StarFunctor]:
    """An isomorphic copy with freshly conjugated hom spaces, plus the
    conjugation functor (a weak equivalence and an isomorphism)."""
    units = {x: random_unitary(rng, cat.obj(x).dim) for x in cat.object_names}
    names = {x: f"{prefix}:{x}" for x in cat.object_names}
    homs = {}
    for (x, y), space in cat.homs.items():
        basis = [units[y] @ b @ units[x].conj().T for b in space.basis]
        homs[(names[x], names[y])] = Subspace(space.ambient_rows, space.ambient_cols,
                                              basis, tol=cat.tol, _trusted=True)
    target = MatCStarCategory([(names[x.name], x.dim) for x in cat.objects],
                              homs, tol=cat.tol)
    hom_maps = {(x, y): [units[y] @ b @ units[x].conj().T for b in space.basis]
                for (x, y), space in cat.homs.items()}
    functor = StarFunctor(cat, target, names, hom_maps, tol=cat.tol)
    return target, functor


def random_weq(rng: np.random.Generator, cat: MatCStarCategory,
               n_extra: int = 1, prefix: str = "w") -> StarFunctor:
    """Weak equivalence by construction: conjugate every hom space and add
    unitarily isomorphic duplicate objects."""
    base = list(cat.object_names)
    extras = [str(rng.choice(base)) for _ in range(n_extra)]
    carriers = base + extras
    names = [f"{prefix}{i}" for i in range(len(carriers))]
    beta = dict(zip(names, carriers))
    units = {n: random_unitary(rng, cat.obj(beta[n]).dim) for n in names}
    homs = {}
    for n1 in names:
        for n2 in names:
            space = cat.homs.get((beta[n1], beta[n2]))
            if space is None:
                continue
            basis = [units[n2] @ b @ units[n1].conj().T for b in space.basis]
            homs[(n1, n2)] = Subspace(space.ambient_rows, space.ambient_cols,
                                      basis, tol=cat.tol, _trusted=True)
    target = MatCStarCategory([(n, cat.obj(beta[n]).dim) for n in names],
                              homs, tol=cat.tol)
    copy_of = {x: names[i] for i, x in enumerate(base)}
    hom_maps = {}
    for (x, y), space in cat.homs.items():
        nx, ny = copy_of[x], copy_of[y]
        hom_maps[(x, y)] = [units[ny] @ b @ units[nx].conj().T for b in space.basis]
    return StarFunctor(cat, target, copy_of, hom_maps, tol=cat.tol)


def fattening_functor(cat: MatCStarCategory, model: SectorModel) -> StarFunctor:
    """The inclusion of a sector-built category into the full matrix
    category on the same carriers: faithful, object-surjective, and full
    exactly when the category already had full homs."""
    target = full_matrix_category([cat.obj(x).dim for x in cat.object_names],
                                  names=list(cat.object_names), tol=cat.tol)
    hom_maps = {pair: list(space.basis) for pair, space in cat.homs.items()}
    return StarFunctor(cat, target, {x: x for x in cat.object_names}, hom_maps,
                       tol=cat.tol)


def sector_projection_functor(model: SectorModel, keep: int = 0) -> StarFunctor:
    """Project a multi-sector category onto one sector: a valid *-functor
    that kills the other sectors, hence non-faithful whenever they are
    present. Objects needing the kept sector survive unchanged in name."""
    if any(m[keep] == 0 for m in model.multiplicities.values()):
        raise InvalidParams("kept sector must be present at every object")
    source = model.category()
    kept_model = SectorModel(
        [model.sector_dims[keep]],
        [[model.multiplicities[n][keep]] for n in model.names],
        [np.eye(model.multiplicities[n][keep] * model.sector_dims[keep],
                dtype=np.complex128) for n in model.names],
        [f"p:{n}" for n in model.names],
    )
    target = kept_model.category()

    d = model.sector_dims[keep]
    hom_maps = {}
    for (x, y), space in source.homs.items():
        offx = model._offsets(x)[keep]
        offy = model._offsets(y)[keep]
        mx = model.multiplicities[x][keep] * d
        my = model.multiplicities[y][keep] * d
        ux, uy = model.unitaries[x], model.unitaries[y]
        images = []
        for b in space.basis:
            plain = uy.conj().T @ b @ ux
            images.append(plain[offy:offy + my, offx:offx + mx])
        hom_maps[(x, y)] = images
    return StarFunctor(source, target,
                       {n: f"p:{n}" for n in model.names}, hom_maps,
                       tol=source.tol)


def padding_functor(rng: np.random.Generator, cat: MatCStarCategory,
                    pad_objects: int = 1) -> StarFunctor:
    """Inclusion of A into A + (random padding): injective on objects but
    not surjective; fully faithful."""
    pad, _ = random_matcat(rng, n_objects=pad_objects, max_dim=3, prefix="pad")
    whole = disjoint_union([cat, pad])
    return inclusion_functor(cat, whole)


def build_retract(small: StarFunctor):
    """Embed F': A' -> B' as a retract of F = F' + id_{A'}: returns the
    retract diagram (big, i, p, j, q) with p.i = id and q.j = id."""
    a_small, b_small = small.source, small.target
    big_source = disjoint_union([a_small, a_small], prefixes=["", "pad:"])
    big_target = disjoint_union([b_small, a_small], prefixes=["", "pad:"])
    object_map = dict(small.object_map)
    hom_maps = {pair: list(images) for pair, images in small.hom_maps.items()}
    for x in a_small.object_names:
        object_map[f"pad:{x}"] = f"pad:{x}"
    for (x, y), space in a_small.homs.items():
        hom_maps[(f"pad:{x}", f"pad:{y}")] = list(space.basis)
    big = StarFunctor(big_source, big_target, object_map, hom_maps,
                      tol=small.tol)
    i = inclusion_functor(a_small, big_source)
    j = inclusion_functor(b_small, big_target)
    p_obj = {x: x for x in a_small.object_names}
    p_obj.update({f"pad:{x}": x for x in a_small.object_names})
    p_maps = {pair: [b.copy() for b in space.basis]
              for pair, space in big_source.homs.items()}
    p = StarFunctor(big_source, a_small, p_obj, p_maps, tol=small.tol)
    q_obj = {y: y for y in b_small.object_names}
    q_obj.update({f"pad:{x}": small.object_map[x] for x in a_small.object_names})
    q_maps = {}
    for (x, y), space in big_target.homs.items():
        if x.startswith("pad:"):
            q_maps[(x, y)] = [small.apply(x[4:], y[4:], b) for b in space.basis]
        else:
            q_maps[(x, y)] = list(space.basis)
    q = StarFunctor(big_target, b_small, q_obj, q_maps, tol=small.tol)
    return big, i, p, j, q


# ---------------------------------------------------------------------------
# groupoids


_KLEIN = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]

_S3 = None


def _s3_table():
    global _S3
    if _S3 is None:
        import itertools
        perms = sorted(itertools.permutations(range(3)))
        index = {p: i for i, p in enumerate(perms)}
        _S3 = [[index[tuple(p[q[k]] for k in range(3))] for q in perms]
               for p in perms]
    return _S3


def group_table(kind: str, order: int = 1):
    if kind == "cyclic":
        return cyclic_group_table(order)
    if kind == "klein":
        return _KLEIN
    if kind == "s3":
        return _s3_table()
    raise InvalidParams(f"unknown group kind {kind!r}")


def random_groupoid(rng: np.random.Generator, n_objects: int = 2,
                    max_order: int = 4) -> FiniteGroupoid:
    """Random disjoint union of connected groupoids with small vertex groups."""
    if not (1 <= n_objects <= 5 and 1 <= max_order <= 8):
        raise InvalidParams("supported bounds: <= 5 objects, group order <= 8")
    names = [f"x{i}" for i in range(n_objects)]
    n_components = int(rng.integers(1, n_objects + 1))
    assignment = [int(rng.integers(0, n_components)) for _ in names]
    assignment[0] = 0
    objects, arrows, compose = [], {}, {}
    identities, inverses = {}, {}
    for comp in range(n_components):
        members = [n for n, a in zip(names, assignment) if a == comp]
        if not members:
            continue
        choices = ["cyclic", "klein", "s3"]
        kind = choices[int(rng.integers(0, len(choices)))]
        if kind == "cyclic":
            table = cyclic_group_table(int(rng.integers(1, max_order + 1)))
        elif kind == "klein" and max_order >= 4:
            table = _KLEIN
        elif kind == "s3" and max_order >= 6:
            table = _s3_table()
        else:
            table = cyclic_group_table(int(rng.integers(1, max_order + 1)))
        part = connected_groupoid(members, table, check=False)
        objects.extend(part.objects)
        arrows.update(part.arrows)
        compose.update(part.compose)
        identities.update(part.identities)
        inverses.update(part.inverses)
    return FiniteGroupoid(objects, arrows, compose, identities, inverses,
                          check=False)


# ---------------------------------------------------------------------------
# presentations


def random_bounded_presentation(rng: np.random.Generator, n_objects: int = 2,
                                n_arrows: int = 3):
    """A free presentation (no relations) with norm bounds on every arrow."""
    from .presentations import PresentedStarCategory, Quiver

    objects = [f"q{i}" for i in range(n_objects)]
    arrows = []
    for i in range(n_arrows):
        src = objects[int(rng.integers(0, n_objects))]
        tgt = objects[int(rng.integers(0, n_objects))]
        arrows.append((f"a{i}", src, tgt))
    bounds = {name: float(np.round(rng.uniform(0.2, 3.0), 6))
              for name, _s, _t in arrows}
    return PresentedStarCategory(Quiver(objects, arrows), (), bounds)


def random_presentation_rep(rng: np.random.Generator, pres,
                            n_cat_objects: int = 2, max_dim: int = 4):
    """A representation of a bounded free presentation: arrows go to random
    hom elements scaled strictly under their bounds."""
    from .linalg import op_norm

    cat, _model = random_matcat(rng, n_objects=n_cat_objects, max_dim=max_dim,
                                prefix="r")
    object_assign = {x: cat.object_names[int(rng.integers(0, len(cat.objects)))]
                     for x in pres.quiver.objects}
    arrow_assign = {}
    for arrow in pres.quiver.arrows:
        space = cat.hom(object_assign[arrow.src], object_assign[arrow.tgt])
        bound = pres.norm_bounds[arrow.name]
        if space.dim == 0:
            arrow_assign[arrow.name] = np.zeros(space.shape, dtype=np.complex128)
            continue
        m = random_hom_element(rng, space)
        top = op_norm(m)
        if top > 0:
            m = m * (bound * rng.uniform(0.1, 1.0) / top)
        arrow_assign[arrow.name] = m
    return cat, object_assign, arrow_assign


def random_free_element(rng: np.random.Generator, pres, max_terms: int = 3,
                        max_len: int = 3):
    """A random element of the free *-category: a few random composable
    walks through the quiver (adjoint steps allowed), with shared endpoints."""
    quiver = pres.quiver
    arrows = list(quiver.arrows)
    if not arrows:
        obj = quiver.objects[0]
        return pres.unit(obj)

    def random_word():
        steps = int(rng.integers(1, max_len + 1))
        first = arrows[int(rng.integers(0, len(arrows)))]
        adj = bool(rng.integers(0, 2))
        factors = [(first.name, adj)]
        current_tgt = first.src if adj else first.tgt
        for _ in range(steps - 1):
            options = []
            for a in arrows:
                if a.src == current_tgt:
                    options.append((a.name, False, a.tgt))
                if a.tgt == current_tgt:
                    options.append((a.name, True, a.src))
            if not options:
                break
            name, adj, nxt = options[int(rng.integers(0, len(options)))]
            factors.insert(0, (name, adj))
            current_tgt = nxt
        element = None
        for name, adj in reversed(factors):
            gen = pres.gen(name)
            gen = gen.star() if adj else gen
            element = gen if element is None else gen * element
        return element

    out = random_word()
    for _ in range(int(rng.integers(0, max_terms))):
        candidate = random_word()
        if (candidate.src, candidate.tgt) == (out.src, out.tgt):
            z = complex(rng.standard_normal(), rng.standard_normal())
            out = out + z * candidate
    z = complex(rng.standard_normal(), rng.standard_normal())
    return z * out


def random_unitary_rep(rng: np.random.Generator, groupoid: FiniteGroupoid,
                       gc: GroupoidCStar | None = None) -> UnitaryRep:
    """A representation of the groupoid in a conjugated copy of its own
    C*-category: arrows go to conjugated regular-representation unitaries."""
    gc = gc or cstar_max(groupoid)
    cat = gc.category
    units = {x: random_unitary(rng, cat.obj(x).dim) for x in cat.object_names}
    names = {x: f"r:{x}" for x in cat.object_names}
    homs = {}
    for (x, y), space in cat.homs.items():
        basis = [units[y] @ b @ units[x].conj().T for b in space.basis]
        homs[(names[x], names[y])] = Subspace(space.ambient_rows, space.ambient_cols,
                                              basis, tol=cat.tol, _trusted=True)
    target = MatCStarCategory([(names[o.name], o.dim) for o in cat.objects],
                              homs, tol=cat.tol)
    arrow_map = {}
    for g, (x, y) in groupoid.arrows.items():
        arrow_map[g] = units[y] @ gc.embed[g] @ units[x].conj().T
    return UnitaryRep(groupoid, target,
                      {x: names[x] for x in groupoid.objects}, arrow_map,
                      tol=cat.tol)
