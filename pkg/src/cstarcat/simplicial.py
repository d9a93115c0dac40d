"""Finite simplicial sets with explicit degeneracy bookkeeping.

Only nondegenerate simplices are stored; every simplex is addressed by a
:class:`SimplexRef`, a nondegenerate base name together with a canonical
strictly-decreasing word of degeneracy operators. Faces of arbitrary refs are
computed by pushing face operators through degeneracies with the simplicial
identities, bottoming out in the stored face tables.

Standard simplices, horns and boundaries are generated from vertex subsets of
{0..n}; the horn inclusions come out as :class:`SimplicialMap` values.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import InvalidParams, InvalidSimplicialSet


def canon_degens(word) -> tuple[int, ...]:
    """Normalize a degeneracy word (outermost first) to the canonical
    strictly decreasing form via s_i s_j = s_{j+1} s_i for i <= j."""
    word = list(word)
    changed = True
    while changed:
        changed = False
        for k in range(len(word) - 1):
            i, j = word[k], word[k + 1]
            if i <= j:
                word[k], word[k + 1] = j + 1, i
                changed = True
    return tuple(word)


@dataclass(frozen=True)
class SimplexRef:
    """A (possibly degenerate) simplex: ``s_{j1} ... s_{jk}`` applied to a
    nondegenerate base, with j1 > ... > jk."""

    base: str
    base_dim: int
    degens: tuple = ()

    @property
    def dim(self) -> int:
        return self.base_dim + len(self.degens)

    @property
    def degenerate(self) -> bool:
        return bool(self.degens)

    def degenerate_by(self, i: int) -> "SimplexRef":
        word = canon_degens((i,) + self.degens)
        return SimplexRef(self.base, self.base_dim, word)

    def to_json(self):
        if not self.degens:
            return self.base
        return {"of": self.base, "degens": list(self.degens)}


class FiniteSimplicialSet:
    """Nondegenerate simplices per dimension up to ``dim_cap``, each with its
    tuple of dim+1 face refs into the dimension below."""

    def __init__(self, dim_cap: int):
        if dim_cap < 0:
            raise InvalidParams("dim_cap must be >= 0")
        self.dim_cap = dim_cap
        # dim -> name -> tuple of SimplexRef faces (empty for vertices)
        self.simplices: dict[int, dict[str, tuple]] = {d: {} for d in range(dim_cap + 1)}

    # -- construction --------------------------------------------------------

    def add_simplex(self, dim: int, name: str, faces=()):
        if dim > self.dim_cap or dim < 0:
            raise InvalidParams(f"dimension {dim} outside 0..{self.dim_cap}")
        if name in self.simplices[dim]:
            raise InvalidSimplicialSet(f"duplicate {dim}-simplex {name!r}")
        faces = tuple(faces)
        if dim == 0:
            if faces:
                raise InvalidSimplicialSet("vertices have no faces")
        else:
            if len(faces) != dim + 1:
                raise InvalidSimplicialSet(
                    f"{dim}-simplex {name!r} needs {dim + 1} faces")
            for ref in faces:
                if ref.dim != dim - 1:
                    raise InvalidSimplicialSet(f"face of {name!r} has wrong dimension")
                if ref.base not in self.simplices.get(ref.base_dim, {}):
                    raise InvalidSimplicialSet(f"face of {name!r} references "
                                               f"unknown simplex {ref.base!r}")
        self.simplices[dim][name] = faces

    def ref(self, dim: int, name: str) -> SimplexRef:
        if name not in self.simplices.get(dim, {}):
            raise InvalidSimplicialSet(f"unknown {dim}-simplex {name!r}")
        return SimplexRef(name, dim)

    # -- structure maps --------------------------------------------------------

    def face(self, ref: SimplexRef, i: int) -> SimplexRef:
        """d_i of an arbitrary simplex ref, by the simplicial identities."""
        if ref.dim == 0:
            raise InvalidParams("vertices have no faces")
        if not 0 <= i <= ref.dim:
            raise InvalidParams(f"face index {i} out of range for dim {ref.dim}")
        if not ref.degens:
            return self.simplices[ref.base_dim][ref.base][i]
        j = ref.degens[0]
        inner = SimplexRef(ref.base, ref.base_dim, ref.degens[1:])
        if i == j or i == j + 1:
            return inner
        if i < j:
            return self.face(inner, i).degenerate_by(j - 1)
        return self.face(inner, i - 1).degenerate_by(j)

    def nondegenerate(self, dim: int) -> list[str]:
        return list(self.simplices.get(dim, {}))

    def count_nondegenerate(self, dim: int) -> int:
        return len(self.simplices.get(dim, {}))

    def count_simplices(self, dim: int) -> int:
        """Total number of ``dim``-simplices, degenerate ones included: each
        nondegenerate k-simplex carries C(dim, k) degeneracy operators."""
        total = 0
        for k in range(0, min(dim, self.dim_cap) + 1):
            total += self.count_nondegenerate(k) * math.comb(dim, k)
        return total

    def identity_violations(self) -> list[str]:
        """Exhaustive check of d_i d_j = d_{j-1} d_i (i < j) on every stored
        simplex up to dim_cap."""
        out = []
        for dim in range(2, self.dim_cap + 1):
            for name in self.simplices[dim]:
                ref = self.ref(dim, name)
                for j in range(1, dim + 1):
                    for i in range(j):
                        left = self.face(self.face(ref, j), i)
                        right = self.face(self.face(ref, i), j - 1)
                        if left != right:
                            out.append(f"d_{i} d_{j} != d_{j-1} d_{i} at {name!r}")
        return out

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        blob = {}
        for dim in range(self.dim_cap + 1):
            entries = []
            for name, faces in self.simplices[dim].items():
                entry = {"name": name, "degenerate": False}
                if dim > 0:
                    entry["faces"] = [f.to_json() for f in faces]
                entries.append(entry)
            blob[str(dim)] = entries
        return {"dim_cap": self.dim_cap, "simplices": blob}

    @classmethod
    def from_json(cls, data) -> "FiniteSimplicialSet":
        out = cls(data["dim_cap"])
        for dim in range(out.dim_cap + 1):
            for entry in data["simplices"].get(str(dim), []):
                if entry.get("degenerate"):
                    raise InvalidSimplicialSet(
                        "only nondegenerate simplices may be listed")
                faces = []
                for raw in entry.get("faces", []):
                    if isinstance(raw, str):
                        faces.append(SimplexRef(raw, dim - 1))
                    else:
                        degens = canon_degens(raw["degens"])
                        faces.append(SimplexRef(raw["of"], dim - 1 - len(degens), degens))
                out.add_simplex(dim, entry["name"], faces)
        bad = out.identity_violations()
        if bad:
            raise InvalidSimplicialSet("; ".join(bad[:3]))
        return out

    def __repr__(self):
        counts = [self.count_nondegenerate(d) for d in range(self.dim_cap + 1)]
        return f"FiniteSimplicialSet(nondegenerate per dim: {counts})"


class SimplicialMap:
    """Per-dimension assignment of nondegenerate simplices to target refs,
    commuting with all face maps up to dim_cap."""

    def __init__(self, source: FiniteSimplicialSet, target: FiniteSimplicialSet,
                 maps: dict, check: bool = True):
        self.source = source
        self.target = target
        self.maps = {int(d): dict(m) for d, m in maps.items()}
        if check:
            bad = self.violations()
            if bad:
                raise InvalidSimplicialSet("; ".join(bad[:3]))

    def apply(self, ref: SimplexRef) -> SimplexRef:
        image = self.maps[ref.base_dim][ref.base]
        for j in reversed(ref.degens):
            image = image.degenerate_by(j)
        return image

    def violations(self) -> list[str]:
        out = []
        for dim in range(min(self.source.dim_cap, self.target.dim_cap) + 1):
            for name in self.source.nondegenerate(dim):
                if name not in self.maps.get(dim, {}):
                    out.append(f"{dim}-simplex {name!r} has no image")
                    continue
                ref = self.source.ref(dim, name)
                image = self.apply(ref)
                if image.dim != dim:
                    out.append(f"image of {name!r} has wrong dimension")
                    continue
                if dim == 0:
                    continue
                for i in range(dim + 1):
                    left = self.apply(self.source.face(ref, i))
                    right = self.target.face(image, i)
                    if left != right:
                        out.append(f"face {i} of {name!r} does not commute")
        return out


# ---------------------------------------------------------------------------
# standard shapes


def _subset_name(verts) -> str:
    return ".".join(str(v) for v in verts)


def _build_from_subsets(n: int, subsets, dim_cap: int) -> FiniteSimplicialSet:
    out = FiniteSimplicialSet(dim_cap)
    chosen = sorted(subsets, key=lambda s: (len(s), s))
    for verts in chosen:
        dim = len(verts) - 1
        if dim > dim_cap:
            continue
        faces = [SimplexRef(_subset_name(verts[:i] + verts[i + 1:]), dim - 1)
                 for i in range(dim + 1)] if dim > 0 else ()
        out.add_simplex(dim, _subset_name(verts), faces)
    return out


def standard(kind: str, n: int, k: int | None = None, dim_cap: int = 3) -> FiniteSimplicialSet:
    """Delta[n], Horn(n, k) or Boundary(n) as a finite simplicial set.

    Nondegenerate simplices are the vertex subsets of {0..n}, minus the full
    set for boundaries, and minus both the full set and the k-th facet for
    horns.
    """
    if n < 0:
        raise InvalidParams("n must be >= 0")
    allsets = [tuple(c) for r in range(1, n + 2)
               for c in itertools.combinations(range(n + 1), r)]
    full = tuple(range(n + 1))
    if kind == "delta":
        subsets = allsets
    elif kind == "boundary":
        if n < 1:
            raise InvalidParams("boundary needs n >= 1")
        subsets = [s for s in allsets if s != full]
    elif kind == "horn":
        if k is None or not 0 <= k <= n or n < 1:
            raise InvalidParams("horn needs n >= 1 and 0 <= k <= n")
        omitted = tuple(v for v in full if v != k)
        subsets = [s for s in allsets if s not in (full, omitted)]
    else:
        raise InvalidParams(f"unknown kind {kind!r}")
    return _build_from_subsets(n, subsets, dim_cap)


def horn_inclusion(n: int, k: int, dim_cap: int = 3) -> SimplicialMap:
    """The generating trivial cofibration Horn(n, k) -> Delta[n]."""
    horn = standard("horn", n, k, dim_cap)
    delta = standard("delta", n, dim_cap=dim_cap)
    maps = {dim: {name: delta.ref(dim, name) for name in horn.nondegenerate(dim)}
            for dim in range(dim_cap + 1)}
    return SimplicialMap(horn, delta, maps)
