"""Concrete finite-dimensional C*-categories and their *-functors.

A category here is a finite set of named objects, each carrying a Hilbert
dimension, with every hom space a subspace of complex matrices that is
unital, closed under adjoints and closed under composition (all within
tolerance). Functors are given by an object map plus, for every source hom
pair, the list of images of the stored hom basis; everything else follows by
linearity.

Includes polar unitarization, probabilistic search for unitary isomorphisms,
spaces of bounded natural transformations (solved as one linear system),
maximal tensor products via Kronecker blocks, products and equalizers, and
the exponential-law transposition between functors out of a tensor product
and functor-valued data.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidCategory,
    InvalidFunctor,
    NotInvertible,
    NotParallel,
    ShapeMismatch,
    SingularOperand,
)
from . import linalg
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerance,
    as_matrix,
    find_invertible,
    herm_funcalc,
    hs_norm,
    matrix_from_json,
    matrix_to_json,
    op_norm,
    smallest_singular_value,
    subspace_span,
)


@dataclass(frozen=True)
class MatObject:
    name: str
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidCategory(f"object {self.name!r} must have dim >= 1")


class MatCStarCategory:
    """Finite set of objects with Hilbert dimensions; each hom a subspace of
    dim(y) x dim(x) matrices."""

    def __init__(self, objects, homs, tol: Tolerance = DEFAULT_TOL):
        self.tol = tol
        self.objects = [o if isinstance(o, MatObject) else MatObject(*o)
                        for o in objects]
        names = [o.name for o in self.objects]
        if len(set(names)) != len(names):
            raise InvalidCategory("duplicate object names")
        self._by_name = {o.name: o for o in self.objects}
        self.homs: dict[tuple[str, str], Subspace] = {}
        for (x, y), space in homs.items():
            rx, ry = self._by_name.get(x), self._by_name.get(y)
            if rx is None or ry is None:
                raise InvalidCategory(f"hom ({x},{y}) references unknown objects")
            if not isinstance(space, Subspace):
                space = subspace_span(list(space), ambient_shape=(ry.dim, rx.dim), tol=tol)
            if space.shape != (ry.dim, rx.dim):
                raise InvalidCategory(f"hom ({x},{y}) has ambient shape {space.shape}, "
                                      f"expected {(ry.dim, rx.dim)}")
            if space.dim:
                self.homs[(x, y)] = space

    # -- access -------------------------------------------------------------

    @property
    def object_names(self) -> list[str]:
        return [o.name for o in self.objects]

    def obj(self, name: str) -> MatObject:
        try:
            return self._by_name[name]
        except KeyError:
            raise InvalidCategory(f"unknown object {name!r}") from None

    def hom(self, x: str, y: str) -> Subspace:
        space = self.homs.get((x, y))
        if space is None:
            space = Subspace(self.obj(y).dim, self.obj(x).dim, [], tol=self.tol)
        return space

    def identity(self, x: str) -> np.ndarray:
        return np.eye(self.obj(x).dim, dtype=np.complex128)

    def pairs(self):
        for x in self.object_names:
            for y in self.object_names:
                yield (x, y)

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        homs = {}
        for x, y in self.pairs():
            space = self.homs.get((x, y))
            if space is not None:
                homs[f"{x}|{y}"] = [matrix_to_json(b) for b in space.basis]
        return {
            "objects": [{"name": o.name, "dim": o.dim} for o in self.objects],
            "homs": homs,
        }

    @classmethod
    def from_json(cls, data, tol: Tolerance = DEFAULT_TOL) -> "MatCStarCategory":
        objects = [(o["name"], o["dim"]) for o in data["objects"]]
        dims = dict(objects)
        homs = {}
        for key, mats in data.get("homs", {}).items():
            x, y = key.split("|")
            basis = [matrix_from_json(m) for m in mats]
            try:
                homs[(x, y)] = Subspace(dims[y], dims[x], basis, tol=tol)
            except Exception:
                homs[(x, y)] = subspace_span(basis, ambient_shape=(dims[y], dims[x]), tol=tol)
        return cls(objects, homs, tol=tol)

    def __repr__(self):
        return f"MatCStarCategory({self.object_names})"


@dataclass
class Violation:
    kind: str
    where: tuple
    residual: float
    detail: str = ""

    def to_json(self):
        return {"kind": self.kind, "where": list(self.where),
                "residual": self.residual, "detail": self.detail}


def _batch_residuals(space: Subspace, flat: np.ndarray) -> np.ndarray:
    """HS distances of a stack of flattened matrices from a subspace."""
    if space.dim:
        coords = flat @ space._rows.conj().T
        flat = flat - coords @ space._rows
    return np.linalg.norm(flat, axis=1)


def validate_category(cat: MatCStarCategory) -> list[Violation]:
    """Check unitality, adjoint closure and composition closure; an empty
    report means the data is a concrete C*-category within tolerance."""
    tol = cat.tol
    out = []
    for x in cat.object_names:
        eye = cat.identity(x)
        res = cat.hom(x, x).residual(eye)
        if res > tol.bound(hs_norm(eye)):
            out.append(Violation("unitality", (x,), res, "identity not in hom(x,x)"))
    for (x, y), space in cat.homs.items():
        adj = cat.hom(y, x)
        flipped = np.stack([b.conj().T.ravel() for b in space.basis])
        for i, res in enumerate(_batch_residuals(adj, flipped)):
            if res > tol.bound(1.0):
                out.append(Violation("adjoint", (x, y, i), float(res),
                                     "adjoint of basis element leaves hom(y,x)"))
    for (x, y), first in cat.homs.items():
        for z in cat.object_names:
            second = cat.homs.get((y, z))
            if second is None:
                continue
            target = cat.hom(x, z)
            a_stack = np.stack(first.basis)
            b_stack = np.stack(second.basis)
            products = np.einsum("jab,ibc->jiac", b_stack, a_stack)
            flat = products.reshape(len(second.basis) * len(first.basis), -1)
            scales = np.maximum(np.linalg.norm(flat, axis=1), 1.0)
            residuals = _batch_residuals(target, flat)
            for idx in np.nonzero(residuals > tol.eps_abs * scales)[0]:
                j, i = divmod(int(idx), len(first.basis))
                out.append(Violation("composition", (x, y, z, j, i),
                                     float(residuals[idx]),
                                     "product of basis elements leaves hom(x,z)"))
    return out


# ---------------------------------------------------------------------------
# functors


class StarFunctor:
    """Object map plus per-pair linear maps, specified on the stored source
    hom bases."""

    def __init__(self, source: MatCStarCategory, target: MatCStarCategory,
                 object_map: dict, hom_maps: dict, tol: Tolerance = DEFAULT_TOL):
        self.source = source
        self.target = target
        self.tol = tol
        self.object_map = dict(object_map)
        for x in source.object_names:
            fx = self.object_map.get(x)
            if fx is None:
                raise InvalidFunctor(f"object {x!r} has no image")
            target.obj(fx)
        self.hom_maps: dict[tuple[str, str], list[np.ndarray]] = {}
        for (x, y) in source.pairs():
            space = source.homs.get((x, y))
            if space is None:
                continue
            images = hom_maps.get((x, y))
            if images is None:
                raise InvalidFunctor(f"hom pair ({x},{y}) has no images")
            if len(images) != space.dim:
                raise InvalidFunctor(f"hom pair ({x},{y}): {len(images)} images for "
                                     f"a basis of size {space.dim}")
            rows = target.obj(self.object_map[y]).dim
            cols = target.obj(self.object_map[x]).dim
            self.hom_maps[(x, y)] = [as_matrix(m, rows, cols) for m in images]

    def apply(self, x: str, y: str, m) -> np.ndarray:
        """Image of an element of hom(x, y), by linearity from the basis."""
        space = self.source.hom(x, y)
        rows = self.target.obj(self.object_map[y]).dim
        cols = self.target.obj(self.object_map[x]).dim
        out = np.zeros((rows, cols), dtype=np.complex128)
        if space.dim == 0:
            return out
        coords = space.coords(m)
        for c, img in zip(coords, self.hom_maps[(x, y)]):
            out += c * img
        return out

    def coord_matrix(self, x: str, y: str) -> np.ndarray:
        """The linear map hom(x,y) -> hom(Fx,Fy) in HS coordinates of the two
        stored bases; rows index the target basis."""
        fx, fy = self.object_map[x], self.object_map[y]
        tspace = self.target.hom(fx, fy)
        sdim = self.source.hom(x, y).dim
        mat = np.zeros((tspace.dim, sdim), dtype=np.complex128)
        for j, img in enumerate(self.hom_maps.get((x, y), [])):
            mat[:, j] = tspace.coords(img)
        return mat

    def to_json(self) -> dict:
        hom_maps = {}
        for x, y in self.source.pairs():
            if (x, y) in self.hom_maps:
                hom_maps[f"{x}|{y}"] = [matrix_to_json(m) for m in self.hom_maps[(x, y)]]
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "object_map": {x: self.object_map[x] for x in self.source.object_names},
            "hom_maps": hom_maps,
        }

    @classmethod
    def from_json(cls, data, tol: Tolerance = DEFAULT_TOL) -> "StarFunctor":
        source = MatCStarCategory.from_json(data["source"], tol=tol)
        target = MatCStarCategory.from_json(data["target"], tol=tol)
        hom_maps = {}
        for key, mats in data.get("hom_maps", {}).items():
            x, y = key.split("|")
            hom_maps[(x, y)] = [matrix_from_json(m) for m in mats]
        return cls(source, target, data["object_map"], hom_maps, tol=tol)

    def __repr__(self):
        return f"StarFunctor({self.source.object_names} -> {self.target.object_names})"


def identity_functor(cat: MatCStarCategory) -> StarFunctor:
    hom_maps = {pair: list(space.basis) for pair, space in cat.homs.items()}
    return StarFunctor(cat, cat, {x: x for x in cat.object_names}, hom_maps, tol=cat.tol)


def compose_functors(second: StarFunctor, first: StarFunctor) -> StarFunctor:
    """second . first, defined when first's target is second's source."""
    if second.source.object_names != first.target.object_names:
        raise NotParallel("functors are not composable")
    object_map = {x: second.object_map[first.object_map[x]]
                  for x in first.source.object_names}
    hom_maps = {}
    for (x, y), images in first.hom_maps.items():
        fx, fy = first.object_map[x], first.object_map[y]
        hom_maps[(x, y)] = [second.apply(fx, fy, img) for img in images]
    return StarFunctor(first.source, second.target, object_map, hom_maps,
                       tol=first.tol)


def functors_agree(f: StarFunctor, g: StarFunctor, tol: Tolerance | None = None) -> bool:
    """Equal object maps and basis images within tolerance."""
    tol = tol or f.tol
    if f.object_map != g.object_map:
        return False
    for pair, images in f.hom_maps.items():
        for a, b in zip(images, g.hom_maps.get(pair, [])):
            if not tol.close(a, b):
                return False
    return True


def validate_functor(functor: StarFunctor) -> list[Violation]:
    """Check hom membership, unit, composition and involution laws."""
    tol = functor.tol
    src, tgt = functor.source, functor.target
    out = []
    for (x, y), images in functor.hom_maps.items():
        fx, fy = functor.object_map[x], functor.object_map[y]
        space = tgt.hom(fx, fy)
        for i, img in enumerate(images):
            res = space.residual(img)
            if res > tol.bound(hs_norm(img)):
                out.append(Violation("hom-membership", (x, y, i), res,
                                     "image leaves the target hom space"))
    for x in src.object_names:
        eye = src.identity(x)
        img = functor.apply(x, x, eye)
        res = float(np.linalg.norm(img - tgt.identity(functor.object_map[x])))
        if res > tol.bound(1.0):
            out.append(Violation("unit", (x,), res, "F(1_x) != 1_Fx"))
    for (x, y), first in src.homs.items():
        fa_stack = np.stack(functor.hom_maps[(x, y)])
        for z in src.object_names:
            second = src.homs.get((y, z))
            if second is None:
                continue
            fb_stack = np.stack(functor.hom_maps[(y, z)])
            target = src.hom(x, z)
            a_stack = np.stack(first.basis)
            b_stack = np.stack(second.basis)
            products = np.einsum("jab,ibc->jiac", b_stack, a_stack)
            flat = products.reshape(len(second.basis) * len(first.basis), -1)
            rows = tgt.obj(functor.object_map[z]).dim
            cols = tgt.obj(functor.object_map[x]).dim
            if target.dim:
                # image of each product, by linearity in target coordinates
                coords = flat @ target._rows.conj().T
                f_target = np.stack(functor.hom_maps[(x, z)])
                lhs = np.einsum("pk,kab->pab", coords, f_target)
            else:
                lhs = np.zeros((flat.shape[0], rows, cols), dtype=np.complex128)
            rhs = np.einsum("jab,ibc->jiac", fb_stack, fa_stack).reshape(lhs.shape)
            diffs = np.linalg.norm((lhs - rhs).reshape(flat.shape[0], -1), axis=1)
            scales = np.maximum(
                np.linalg.norm(rhs.reshape(flat.shape[0], -1), axis=1), 1.0)
            for idx in np.nonzero(diffs > tol.eps_abs * scales)[0]:
                j, i = divmod(int(idx), len(first.basis))
                out.append(Violation("composition", (x, y, z, j, i),
                                     float(diffs[idx]), "F(b.a) != F(b).F(a)"))
    for (x, y), images in functor.hom_maps.items():
        space = src.hom(x, y)
        for i, a in enumerate(space.basis):
            lhs = functor.apply(y, x, a.conj().T)
            rhs = images[i].conj().T
            res = float(np.linalg.norm(lhs - rhs))
            if res > tol.bound(hs_norm(rhs)):
                out.append(Violation("involution", (x, y, i), res, "F(a*) != F(a)*"))
    return out


# ---------------------------------------------------------------------------
# unitarization and isomorphism search


def unitarize(cat: MatCStarCategory, a, x: str, y: str) -> np.ndarray:
    """Polar unitarization u = a (a*a)^(-1/2) of an invertible arrow.

    The result is unitary and stays inside hom(x, y), since (a*a)^(-1/2)
    lies in the endomorphism algebra at x.
    """
    a = as_matrix(a, cat.obj(y).dim, cat.obj(x).dim)
    if cat.obj(x).dim != cat.obj(y).dim:
        raise NotInvertible("invertible arrows need equal dimensions")
    if smallest_singular_value(a) <= cat.tol.eps_abs:
        raise SingularOperand("arrow is singular within tolerance")
    return a @ herm_funcalc(a.conj().T @ a, "inv_sqrt", tol=cat.tol)


@dataclass
class IsoVerdict:
    status: str                    # "YES" or "NO_EVIDENCE"
    witness: np.ndarray | None = None
    reason: str = ""
    deterministic: bool = False
    seed: int | None = None
    samples: int = 0

    def __bool__(self):
        return self.status == "YES"


def iso_exists(cat: MatCStarCategory, x: str, y: str, seed: int = 0,
               samples: int = 64) -> IsoVerdict:
    """Search for a unitary isomorphism x -> y inside hom(x, y).

    A YES carries a witness unitary. A NO_EVIDENCE is deterministic when the
    dimensions differ or the hom space is zero, and probabilistic otherwise.
    """
    if x == y:
        return IsoVerdict("YES", cat.identity(x), "identity", deterministic=True)
    if cat.obj(x).dim != cat.obj(y).dim:
        return IsoVerdict("NO_EVIDENCE", None, "dimension mismatch",
                          deterministic=True, seed=seed)
    space = cat.hom(x, y)
    if space.dim == 0:
        return IsoVerdict("NO_EVIDENCE", None, "zero hom space",
                          deterministic=True, seed=seed)
    inv = find_invertible(space, seed=seed, samples=samples, tol=cat.tol)
    if inv is None:
        return IsoVerdict("NO_EVIDENCE", None, "sampling found no invertible element",
                          deterministic=False, seed=seed, samples=samples)
    return IsoVerdict("YES", unitarize(cat, inv, x, y), "unitarized sample",
                      seed=seed, samples=samples)


# ---------------------------------------------------------------------------
# natural transformations


class NatTransform:
    """A family of component arrows between two parallel functors."""

    def __init__(self, f: StarFunctor, g: StarFunctor, components: dict):
        if f.source is not g.source or f.target is not g.target:
            if f.source.object_names != g.source.object_names:
                raise NotParallel("functors are not parallel")
        self.f = f
        self.g = g
        self.components = {}
        for x in f.source.object_names:
            m = components.get(x)
            if m is None:
                raise ShapeMismatch(f"missing component at {x!r}")
            rows = f.target.obj(g.object_map[x]).dim
            cols = f.target.obj(f.object_map[x]).dim
            self.components[x] = as_matrix(m, rows, cols)

    def sup_norm(self) -> float:
        return max(op_norm(m) for m in self.components.values())

    def naturality_residual(self) -> float:
        """Largest violation of alpha_y F(a) = G(a) alpha_x over hom bases,
        together with the distance of the components from the target homs."""
        worst = 0.0
        tgt = self.f.target
        for x in self.f.source.object_names:
            space = tgt.hom(self.f.object_map[x], self.g.object_map[x])
            worst = max(worst, space.residual(self.components[x]))
        for (x, y), space in self.f.source.homs.items():
            for i in range(space.dim):
                fa = self.f.hom_maps[(x, y)][i]
                ga = self.g.hom_maps[(x, y)][i]
                res = float(np.linalg.norm(
                    self.components[y] @ fa - ga @ self.components[x]))
                worst = max(worst, res)
        return worst

    def is_natural(self, tol: Tolerance | None = None) -> bool:
        tol = tol or self.f.tol
        scale = max((op_norm(m) for m in self.components.values()), default=0.0)
        return self.naturality_residual() <= tol.bound(scale)

    def is_unitary(self, tol: Tolerance | None = None) -> bool:
        tol = tol or self.f.tol
        return all(linalg.is_unitary(m, tol) for m in self.components.values())


def nat_compose(beta: NatTransform, alpha: NatTransform) -> NatTransform:
    """Pointwise composite beta . alpha : F -> H for alpha: F -> G, beta: G -> H."""
    if beta.f is not alpha.g and beta.f.object_map != alpha.g.object_map:
        raise ShapeMismatch("transformations are not composable")
    comps = {x: beta.components[x] @ alpha.components[x]
             for x in alpha.f.source.object_names}
    return NatTransform(alpha.f, beta.g, comps)


def nat_involute(alpha: NatTransform) -> NatTransform:
    comps = {x: alpha.components[x].conj().T
             for x in alpha.f.source.object_names}
    return NatTransform(alpha.g, alpha.f, comps)


def nat_scale_add(z, alpha: NatTransform, beta: NatTransform) -> NatTransform:
    if alpha.f.object_map != beta.f.object_map or alpha.g.object_map != beta.g.object_map:
        raise ShapeMismatch("transformations are not parallel")
    comps = {x: complex(z) * alpha.components[x] + beta.components[x]
             for x in alpha.f.source.object_names}
    return NatTransform(alpha.f, alpha.g, comps)


def nat_algebra(op: str, *args):
    """Dispatch for the pointwise algebra on natural transformations."""
    if op == "compose":
        return nat_compose(*args)
    if op == "involute":
        return nat_involute(*args)
    if op == "scale_add":
        return nat_scale_add(*args)
    raise ValueError(f"unknown operation {op!r}")


class BoundedNatSpace:
    """The solution space of the naturality system between two parallel
    functors, with its sup-norm evaluator."""

    def __init__(self, f: StarFunctor, g: StarFunctor, basis: list[NatTransform]):
        self.f = f
        self.g = g
        self.basis = basis

    @property
    def dim(self) -> int:
        return len(self.basis)

    def sup_norm(self, alpha: NatTransform) -> float:
        return alpha.sup_norm()

    def element(self, coeffs) -> NatTransform:
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.shape != (self.dim,):
            raise ShapeMismatch(f"expected {self.dim} coefficients")
        comps = {}
        for x in self.f.source.object_names:
            acc = None
            for c, alpha in zip(coeffs, self.basis):
                term = c * alpha.components[x]
                acc = term if acc is None else acc + term
            comps[x] = acc
        return NatTransform(self.f, self.g, comps)


def nat_space(f: StarFunctor, g: StarFunctor) -> BoundedNatSpace:
    """Solve the finite linear system for all natural transformations F -> G
    whose components live in the target hom spaces.

    With row-major vec, alpha_y F(a) contributes (I (x) F(a)^T) and
    G(a) alpha_x contributes (G(a) (x) I); hom membership contributes
    (I - P) vec(alpha_x) = 0 for the orthogonal projector P of hom(Fx, Gx).
    """
    if f.source.object_names != g.source.object_names:
        raise NotParallel("functors are not parallel")
    src, tgt = f.source, f.target
    shapes, offsets, total = {}, {}, 0
    for x in src.object_names:
        rows = tgt.obj(g.object_map[x]).dim
        cols = tgt.obj(f.object_map[x]).dim
        shapes[x] = (rows, cols)
        offsets[x] = total
        total += rows * cols

    blocks = []
    for x in src.object_names:
        rows, cols = shapes[x]
        n = rows * cols
        space = tgt.hom(f.object_map[x], g.object_map[x])
        proj = space._rows.T @ space._rows.conj() if space.dim else \
            np.zeros((n, n), dtype=np.complex128)
        block = np.zeros((n, total), dtype=np.complex128)
        block[:, offsets[x]:offsets[x] + n] = np.eye(n) - proj
        blocks.append(block)
    for (x, y), space in src.homs.items():
        ry, cy = shapes[y]
        rx, cx = shapes[x]
        for i in range(space.dim):
            fa = f.hom_maps[(x, y)][i]
            ga = g.hom_maps[(x, y)][i]
            rows = ry * cx
            block = np.zeros((rows, total), dtype=np.complex128)
            block[:, offsets[y]:offsets[y] + ry * cy] = np.kron(np.eye(ry), fa.T)
            block[:, offsets[x]:offsets[x] + rx * cx] -= np.kron(ga, np.eye(cx))
            blocks.append(block)

    system = np.vstack(blocks) if blocks else np.zeros((0, total), dtype=np.complex128)
    if total == 0:
        return BoundedNatSpace(f, g, [])
    _, svals, vh = np.linalg.svd(system, full_matrices=True)
    cutoff = f.tol.bound(float(svals[0])) if svals.size else f.tol.eps_abs
    rank = int(np.sum(svals > cutoff))
    basis = []
    for row in vh[rank:].conj():
        comps = {x: row[offsets[x]:offsets[x] + shapes[x][0] * shapes[x][1]]
                 .reshape(shapes[x]) for x in src.object_names}
        basis.append(NatTransform(f, g, comps))
    return BoundedNatSpace(f, g, basis)


# ---------------------------------------------------------------------------
# tensor products, unions, limits


def unit_category(tol: Tolerance = DEFAULT_TOL) -> MatCStarCategory:
    """The tensor unit: one object of dimension 1 with scalar endomorphisms."""
    eye = np.eye(1, dtype=np.complex128)
    return MatCStarCategory([("pt", 1)], {("pt", "pt"): Subspace(1, 1, [eye])}, tol=tol)


def full_matrix_category(dims, names=None, tol: Tolerance = DEFAULT_TOL) -> MatCStarCategory:
    """All of Hilb between the given finite-dimensional carriers."""
    names = names or [f"m{i}" for i in range(len(dims))]
    objects = list(zip(names, dims))
    homs = {}
    for x, dx in objects:
        for y, dy in objects:
            units = []
            for i in range(dy):
                for j in range(dx):
                    m = np.zeros((dy, dx), dtype=np.complex128)
                    m[i, j] = 1.0
                    units.append(m)
            homs[(x, y)] = Subspace(dy, dx, units, tol=tol, _trusted=True)
    return MatCStarCategory(objects, homs, tol=tol)


def pair_name(x: str, y: str) -> str:
    return f"({x},{y})"


def tensor_max(a: MatCStarCategory, b: MatCStarCategory, check: bool = True) -> MatCStarCategory:
    """Maximal tensor product, realized by Kronecker products.

    Finite-dimensional C*-categories are nuclear, so the spatial construction
    computes the maximal tensor norm; hom dimensions multiply exactly because
    Kronecker products of orthonormal bases stay orthonormal.
    """
    if check:
        for cat in (a, b):
            bad = validate_category(cat)
            if bad:
                raise InvalidCategory(f"tensor operand fails validation: {bad[0]}")
    objects = [(pair_name(x.name, y.name), x.dim * y.dim)
               for x in a.objects for y in b.objects]
    homs = {}
    for (x1, y1), s1 in a.homs.items():
        for (x2, y2), s2 in b.homs.items():
            basis = [np.kron(m1, m2) for m1 in s1.basis for m2 in s2.basis]
            key = (pair_name(x1, x2), pair_name(y1, y2))
            homs[key] = Subspace(basis[0].shape[0], basis[0].shape[1],
                                 basis, tol=a.tol, _trusted=True)
    return MatCStarCategory(objects, homs, tol=a.tol)


def tensor_functor(f: StarFunctor, g: StarFunctor,
                   source: MatCStarCategory | None = None,
                   target: MatCStarCategory | None = None) -> StarFunctor:
    """F (x) G on Kronecker generators."""
    source = source if source is not None else tensor_max(f.source, g.source, check=False)
    target = target if target is not None else tensor_max(f.target, g.target, check=False)
    object_map = {}
    for x in f.source.object_names:
        for y in g.source.object_names:
            object_map[pair_name(x, y)] = pair_name(f.object_map[x], g.object_map[y])
    hom_maps = {}
    for (x1, y1), imgs1 in f.hom_maps.items():
        for (x2, y2), imgs2 in g.hom_maps.items():
            key = (pair_name(x1, x2), pair_name(y1, y2))
            hom_maps[key] = [np.kron(m1, m2) for m1 in imgs1 for m2 in imgs2]
    return StarFunctor(source, target, object_map, hom_maps, tol=f.tol)


def disjoint_union(parts, prefixes=None, tol: Tolerance = DEFAULT_TOL) -> MatCStarCategory:
    """Coproduct of matrix categories: zero homs between distinct parts."""
    parts = list(parts)
    if prefixes is None:
        prefixes = [""] * len(parts)
    objects, homs = [], {}
    for cat, pre in zip(parts, prefixes):
        for o in cat.objects:
            objects.append((pre + o.name, o.dim))
        for (x, y), space in cat.homs.items():
            homs[(pre + x, pre + y)] = space
    return MatCStarCategory(objects, homs, tol=tol)


def inclusion_functor(part: MatCStarCategory, whole: MatCStarCategory,
                      prefix: str = "") -> StarFunctor:
    object_map = {x: prefix + x for x in part.object_names}
    hom_maps = {pair: list(space.basis) for pair, space in part.homs.items()}
    return StarFunctor(part, whole, object_map, hom_maps, tol=part.tol)


def product_category(a: MatCStarCategory, b: MatCStarCategory) -> MatCStarCategory:
    """Product: objects are pairs carrying direct sums, homs are pairs of
    arrows embedded block-diagonally."""
    objects = [(pair_name(x.name, y.name), x.dim + y.dim)
               for x in a.objects for y in b.objects]
    homs = {}
    for x1 in a.objects:
        for y1 in b.objects:
            for x2 in a.objects:
                for y2 in b.objects:
                    basis = []
                    rows = x2.dim + y2.dim
                    cols = x1.dim + y1.dim
                    for m in a.hom(x1.name, x2.name).basis:
                        big = np.zeros((rows, cols), dtype=np.complex128)
                        big[:x2.dim, :x1.dim] = m
                        basis.append(big)
                    for m in b.hom(y1.name, y2.name).basis:
                        big = np.zeros((rows, cols), dtype=np.complex128)
                        big[x2.dim:, x1.dim:] = m
                        basis.append(big)
                    if basis:
                        key = (pair_name(x1.name, y1.name), pair_name(x2.name, y2.name))
                        homs[key] = Subspace(rows, cols, basis, tol=a.tol, _trusted=True)
    return MatCStarCategory(objects, homs, tol=a.tol)


def same_shape_categories(a: MatCStarCategory, b: MatCStarCategory) -> bool:
    if [(o.name, o.dim) for o in a.objects] != [(o.name, o.dim) for o in b.objects]:
        return False
    return all(a.hom(x, y).dim == b.hom(x, y).dim for x, y in a.pairs())


def equalizer(f: StarFunctor, g: StarFunctor) -> MatCStarCategory:
    """Equalizer of two parallel functors: the objects where they agree and
    the kernel subspaces {a | F(a) = G(a)}.

    Objects with F(x) != G(x) are dropped so the result stays unital.
    """
    if f.source is not g.source and not same_shape_categories(f.source, g.source):
        raise NotParallel("functors do not share a source")
    if f.target is not g.target and not same_shape_categories(f.target, g.target):
        raise NotParallel("functors do not share a target")
    src = f.source
    kept = [x for x in src.object_names if f.object_map[x] == g.object_map[x]]
    objects = [(x, src.obj(x).dim) for x in kept]
    homs = {}
    for (x, y), space in src.homs.items():
        if x not in kept or y not in kept:
            continue
        diffs = np.stack([
            (f.hom_maps[(x, y)][i] - g.hom_maps[(x, y)][i]).ravel()
            for i in range(space.dim)
        ], axis=1)
        _, svals, vh = np.linalg.svd(diffs, full_matrices=True)
        cutoff = src.tol.bound(float(svals[0])) if svals.size else src.tol.eps_abs
        rank = int(np.sum(svals > cutoff))
        kernel = vh[rank:].conj()
        basis = [space.from_coords(row) for row in kernel]
        if basis:
            homs[(x, y)] = Subspace(space.ambient_rows, space.ambient_cols,
                                    basis, tol=src.tol, _trusted=True)
    return MatCStarCategory(objects, homs, tol=src.tol)


# ---------------------------------------------------------------------------
# the exponential law


@dataclass
class CurriedFunctor:
    """Functor data A -> C*(B, C): a *-functor B -> C per object of A and a
    natural transformation per source hom basis element."""

    outer: MatCStarCategory            # A
    inner: MatCStarCategory            # B
    target: MatCStarCategory           # C
    obj_functors: dict                 # x in A -> StarFunctor(B, C)
    hom_transforms: dict               # (x, x') -> [NatTransform], basis images


def curry(f: StarFunctor, a: MatCStarCategory, b: MatCStarCategory) -> CurriedFunctor:
    """Transpose F: A (x) B -> C into functor-valued data on A.

    Objects go to F(1_x (x) -), and each hom basis element a to the bounded
    transformation with components F(a (x) 1_y).
    """
    tensor = f.source
    obj_functors = {}
    for x in a.objects:
        object_map = {y.name: f.object_map[pair_name(x.name, y.name)] for y in b.objects}
        hom_maps = {}
        for (y, y2), space in b.homs.items():
            eye = np.eye(x.dim, dtype=np.complex128)
            pair = (pair_name(x.name, y), pair_name(x.name, y2))
            hom_maps[(y, y2)] = [f.apply(pair[0], pair[1], np.kron(eye, m))
                                 for m in space.basis]
        obj_functors[x.name] = StarFunctor(b, f.target, object_map, hom_maps, tol=f.tol)
    hom_transforms = {}
    for (x, x2), space in a.homs.items():
        transforms = []
        for m in space.basis:
            comps = {}
            for y in b.objects:
                eye = np.eye(y.dim, dtype=np.complex128)
                pair = (pair_name(x, y.name), pair_name(x2, y.name))
                comps[y.name] = f.apply(pair[0], pair[1], np.kron(m, eye))
            transforms.append(NatTransform(obj_functors[x], obj_functors[x2], comps))
        hom_transforms[(x, x2)] = transforms
    return CurriedFunctor(a, b, f.target, obj_functors, hom_transforms)


def uncurry(data: CurriedFunctor, tensor: MatCStarCategory | None = None) -> StarFunctor:
    """Rebuild the *-functor A (x) B -> C from curried data, sending a (x) b
    to G(a)_{y'} . G(x)(b)."""
    a, b = data.outer, data.inner
    tensor = tensor if tensor is not None else tensor_max(a, b, check=False)
    object_map = {}
    for x in a.object_names:
        fx = data.obj_functors[x]
        for y in b.object_names:
            object_map[pair_name(x, y)] = fx.object_map[y]
    hom_maps = {}
    for (x1, x2), sa in a.homs.items():
        for (y1, y2), sb in b.homs.items():
            key = (pair_name(x1, y1), pair_name(x2, y2))
            images = []
            for i in range(sa.dim):
                alpha = data.hom_transforms[(x1, x2)][i]
                for j in range(sb.dim):
                    inner = data.obj_functors[x1].apply(y1, y2, sb.basis[j])
                    images.append(alpha.components[y2] @ inner)
            hom_maps[key] = images
    return StarFunctor(tensor, data.target, object_map, hom_maps, tol=a.tol)


def exponential_transpose(direction: str, *args, **kwargs):
    """Dispatch: 'curry' takes (F, A, B); 'uncurry' takes (CurriedFunctor[, tensor])."""
    if direction == "curry":
        return curry(*args, **kwargs)
    if direction == "uncurry":
        return uncurry(*args, **kwargs)
    raise ValueError(f"unknown direction {direction!r}")
