"""Presentations of C*-categories by generators and relations.

The algebraic layer: quivers, the free *-category on a quiver with its normal
form (adjoints pushed onto generators, units elided, like terms merged),
presentation-level coproducts and coequalizers, triangle-inequality norm
certificates, and evaluation of presentations in concrete matrix categories.

Universal objects are never materialized here; a presentation is only ever
*evaluated* against a supplied representation, or probed through the lifting
interfaces of the model-structure layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
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
from .linalg import DEFAULT_TOL, Tolerance, as_matrix, matrix_from_json, matrix_to_json, op_norm

#: coefficients with modulus at or below this are dropped from elements
PRUNE_EPS = 1e-9


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    tgt: str


class Quiver:
    """Finite labeled oriented graph: named objects plus named arrows."""

    def __init__(self, objects, arrows):
        self.objects = list(objects)
        self.arrows = [a if isinstance(a, Arrow) else Arrow(*a) for a in arrows]
        if len(set(self.objects)) != len(self.objects):
            raise InvalidQuiver("duplicate object names")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise InvalidQuiver("duplicate arrow names")
        obj_set = set(self.objects)
        for a in self.arrows:
            if a.src not in obj_set or a.tgt not in obj_set:
                raise InvalidQuiver(f"arrow {a.name}: undeclared endpoint")
        self.arrow_by_name = {a.name: a for a in self.arrows}

    def __repr__(self):
        return f"Quiver({len(self.objects)} objects, {len(self.arrows)} arrows)"


@dataclass(frozen=True)
class StarWord:
    """A composable word of adjoint-marked generators, or a formal unit.

    ``factors`` are stored in composition order: ``(g, f)`` denotes g after f.
    An empty factor tuple is the unit at ``src`` (== ``tgt``).
    """

    src: str
    tgt: str
    factors: tuple = ()

    def is_unit(self) -> bool:
        return not self.factors

    def star(self) -> "StarWord":
        flipped = tuple((g, not adj) for (g, adj) in reversed(self.factors))
        return StarWord(self.tgt, self.src, flipped)

    def then_after(self, other: "StarWord") -> "StarWord":
        """Composite self . other (other applied first)."""
        if other.tgt != self.src:
            raise ShapeMismatch(
                f"words not composable: {other.tgt} != {self.src}")
        return StarWord(other.src, self.tgt, self.factors + other.factors)

    def sort_key(self):
        return (len(self.factors), self.factors)


def word_of_factors(quiver: Quiver, factors) -> StarWord:
    """Build a word from ``(generator_name, adjoint)`` pairs in composition
    order, validating composability against the quiver."""
    factors = tuple((g, bool(adj)) for g, adj in factors)
    if not factors:
        raise ValueError("use unit_word for empty words")
    endpoints = []
    for g, adj in factors:
        arrow = quiver.arrow_by_name.get(g)
        if arrow is None:
            raise InvalidQuiver(f"unknown generator {g!r}")
        endpoints.append((arrow.tgt, arrow.src) if adj else (arrow.src, arrow.tgt))
    for (left_src, _), (_, right_tgt) in zip(endpoints, endpoints[1:]):
        if left_src != right_tgt:
            raise ShapeMismatch("consecutive factors not composable")
    return StarWord(endpoints[-1][0], endpoints[0][1], factors)


class FreeStarElement:
    """A finite linear combination of parallel words, kept in normal form."""

    def __init__(self, src: str, tgt: str, terms=None):
        self.src = src
        self.tgt = tgt
        self.terms: dict[StarWord, complex] = {}
        for word, coeff in (terms or {}).items():
            if (word.src, word.tgt) != (src, tgt):
                raise NotParallel("word endpoints disagree with element endpoints")
            if abs(coeff) > PRUNE_EPS:
                self.terms[word] = self.terms.get(word, 0j) + complex(coeff)
        self.terms = {w: z for w, z in self.terms.items() if abs(z) > PRUNE_EPS}

    # -- algebra ----------------------------------------------------------

    def _require_parallel(self, other):
        if (self.src, self.tgt) != (other.src, other.tgt):
            raise NotParallel("elements are not parallel")

    def __add__(self, other: "FreeStarElement") -> "FreeStarElement":
        self._require_parallel(other)
        terms = dict(self.terms)
        for w, z in other.terms.items():
            terms[w] = terms.get(w, 0j) + z
        return FreeStarElement(self.src, self.tgt, terms)

    def __neg__(self):
        return FreeStarElement(self.src, self.tgt,
                               {w: -z for w, z in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, z) -> "FreeStarElement":
        z = complex(z)
        return FreeStarElement(self.src, self.tgt,
                               {w: z * c for w, c in self.terms.items()})

    def __rmul__(self, z):
        if isinstance(z, (int, float, complex)):
            return self.scale(z)
        return NotImplemented

    def __mul__(self, other):
        """Composition self . other; scalars scale."""
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        if other.tgt != self.src:
            raise ShapeMismatch(
                f"elements not composable: {other.tgt} != {self.src}")
        terms: dict[StarWord, complex] = {}
        for w1, z1 in self.terms.items():
            for w2, z2 in other.terms.items():
                w = w1.then_after(w2)
                terms[w] = terms.get(w, 0j) + z1 * z2
        return FreeStarElement(other.src, self.tgt, terms)

    def star(self) -> "FreeStarElement":
        return FreeStarElement(
            self.tgt, self.src,
            {w.star(): z.conjugate() for w, z in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, FreeStarElement):
            return NotImplemented
        return (self.src, self.tgt) == (other.src, other.tgt) and self.terms == other.terms

    def __hash__(self):
        return hash((self.src, self.tgt, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"<0: {self.src}->{self.tgt}>"
        bits = []
        for w in sorted(self.terms, key=StarWord.sort_key):
            body = "1_" + w.src if w.is_unit() else \
                ".".join(g + ("*" if adj else "") for g, adj in w.factors)
            bits.append(f"({self.terms[w]:.3g})*{body}")
        return " + ".join(bits)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        terms = []
        for w in sorted(self.terms, key=StarWord.sort_key):
            z = self.terms[w]
            terms.append({
                "coeff": [z.real, z.imag],
                "word": [{"gen": g, "adj": adj} for g, adj in w.factors],
            })
        return {"src": self.src, "tgt": self.tgt, "terms": terms}

    @classmethod
    def from_json(cls, data, quiver: Quiver) -> "FreeStarElement":
        terms = {}
        for entry in data["terms"]:
            fs = [(f["gen"], f["adj"]) for f in entry["word"]]
            if fs:
                w = word_of_factors(quiver, fs)
            else:
                if data["src"] != data["tgt"]:
                    raise NotParallel("unit word on non-endomorphism element")
                w = StarWord(data["src"], data["tgt"])
            re, im = entry["coeff"]
            terms[w] = terms.get(w, 0j) + complex(re, im)
        return cls(data["src"], data["tgt"], terms)


class PresentedStarCategory:
    """A quiver, algebraic relations (pairs of parallel free elements asserted
    equal), and per-generator norm-bound annotations."""

    def __init__(self, quiver: Quiver, relations=(), norm_bounds=None):
        self.quiver = quiver
        self.relations: list[tuple[FreeStarElement, FreeStarElement]] = []
        for lhs, rhs in relations:
            if (lhs.src, lhs.tgt) != (rhs.src, rhs.tgt):
                raise NotParallel("relation sides are not parallel")
            self.relations.append((lhs, rhs))
        self.norm_bounds: dict[str, float] = {}
        for name, bound in (norm_bounds or {}).items():
            if name not in quiver.arrow_by_name:
                raise InvalidQuiver(f"bound on unknown arrow {name!r}")
            if bound < 0:
                raise ValueError("norm bounds must be nonnegative")
            self.norm_bounds[name] = float(bound)

    # -- element constructors ------------------------------------------------

    def gen(self, name: str) -> FreeStarElement:
        arrow = self.quiver.arrow_by_name.get(name)
        if arrow is None:
            raise InvalidQuiver(f"unknown generator {name!r}")
        w = word_of_factors(self.quiver, [(name, False)])
        return FreeStarElement(arrow.src, arrow.tgt, {w: 1.0 + 0j})

    def unit(self, obj: str) -> FreeStarElement:
        if obj not in self.quiver.objects:
            raise InvalidQuiver(f"unknown object {obj!r}")
        return FreeStarElement(obj, obj, {StarWord(obj, obj): 1.0 + 0j})

    def zero(self, src: str, tgt: str) -> FreeStarElement:
        return FreeStarElement(src, tgt, {})

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "objects": list(self.quiver.objects),
            "arrows": [{"name": a.name, "src": a.src, "tgt": a.tgt}
                       for a in self.quiver.arrows],
            "relations": [[lhs.to_json(), rhs.to_json()]
                          for lhs, rhs in self.relations],
            "bounds": {k: self.norm_bounds[k] for k in sorted(self.norm_bounds)},
        }

    @classmethod
    def from_json(cls, data) -> "PresentedStarCategory":
        quiver = Quiver(data["objects"],
                        [(a["name"], a["src"], a["tgt"]) for a in data["arrows"]])
        rels = [(FreeStarElement.from_json(l, quiver), FreeStarElement.from_json(r, quiver))
                for l, r in data.get("relations", [])]
        return cls(quiver, rels, data.get("bounds", {}))

    def __repr__(self):
        return (f"PresentedStarCategory({len(self.quiver.objects)} objects, "
                f"{len(self.quiver.arrows)} generators, "
                f"{len(self.relations)} relations)")


def free_star_category(quiver: Quiver) -> PresentedStarCategory:
    """The free *-category on a quiver: no relations, no bounds."""
    return PresentedStarCategory(quiver, (), {})


# ---------------------------------------------------------------------------
# colimits at the presentation level


def coproduct(parts, prefixes=None) -> PresentedStarCategory:
    """Disjoint union of presentations. Cross homs are zero by construction
    (there are no generators between distinct parts and no relations mixing
    them). Colliding names require an explicit ``prefixes`` rename policy.
    """
    parts = list(parts)
    if prefixes is None:
        prefixes = [""] * len(parts)
        seen_objects: set[str] = set()
        seen_arrows: set[str] = set()
        for p in parts:
            objs = set(p.quiver.objects)
            arrs = set(p.quiver.arrow_by_name)
            if objs & seen_objects or arrs & seen_arrows:
                raise NameClash("parts share names; pass rename prefixes")
            seen_objects |= objs
            seen_arrows |= arrs
    elif len(prefixes) != len(parts):
        raise ValueError("one prefix per part required")

    objects, arrows = [], []
    relations, bounds = [], {}
    for p, pre in zip(parts, prefixes):
        ren_obj = {x: pre + x for x in p.quiver.objects}
        ren_arr = {a: pre + a for a in p.quiver.arrow_by_name}
        objects.extend(ren_obj[x] for x in p.quiver.objects)
        arrows.extend(Arrow(ren_arr[a.name], ren_obj[a.src], ren_obj[a.tgt])
                      for a in p.quiver.arrows)
        for lhs, rhs in p.relations:
            relations.append((_rename_element(lhs, ren_obj, ren_arr),
                              _rename_element(rhs, ren_obj, ren_arr)))
        for name, b in p.norm_bounds.items():
            bounds[ren_arr[name]] = b
    quiver = Quiver(objects, arrows)
    return PresentedStarCategory(quiver, relations, bounds)


def _rename_element(e: FreeStarElement, ren_obj, ren_arr) -> FreeStarElement:
    terms = {}
    for w, z in e.terms.items():
        factors = tuple((ren_arr[g], adj) for g, adj in w.factors)
        nw = StarWord(ren_obj[w.src], ren_obj[w.tgt], factors)
        terms[nw] = terms.get(nw, 0j) + z
    return FreeStarElement(ren_obj[e.src], ren_obj[e.tgt], terms)


@dataclass
class PresFunctor:
    """Presentation-level *-functor data: a quiver morphism respecting the
    source presentation's structure on the nose."""

    source: PresentedStarCategory
    target: PresentedStarCategory
    object_map: dict
    arrow_map: dict

    def __post_init__(self):
        sq, tq = self.source.quiver, self.target.quiver
        for x in sq.objects:
            if self.object_map.get(x) not in tq.objects:
                raise InvalidFunctor(f"object {x!r} unmapped or mapped outside target")
        for a in sq.arrows:
            img = self.arrow_map.get(a.name)
            arrow = tq.arrow_by_name.get(img)
            if arrow is None:
                raise InvalidFunctor(f"arrow {a.name!r} unmapped or mapped outside target")
            if (arrow.src, arrow.tgt) != (self.object_map[a.src], self.object_map[a.tgt]):
                raise InvalidFunctor(f"arrow {a.name!r} image has wrong endpoints")

    def apply(self, e: FreeStarElement) -> FreeStarElement:
        return _rename_element(e, self.object_map, self.arrow_map)


def coequalizer(f1: PresFunctor, f2: PresFunctor) -> PresentedStarCategory:
    """Quotient of the common target by f1(x) ~ f2(x) on objects and
    f1(a) ~ f2(a) on generators, relations transported along the quotient.

    Class representatives are the lexicographically smallest member, so the
    output is deterministic.
    """
    if f1.source is not f2.source and f1.source.quiver is not f2.source.quiver:
        if set(f1.source.quiver.objects) != set(f2.source.quiver.objects) or \
           set(f1.source.quiver.arrow_by_name) != set(f2.source.quiver.arrow_by_name):
            raise NotParallel("functors do not share a source")
    if f1.target is not f2.target:
        if set(f1.target.quiver.objects) != set(f2.target.quiver.objects) or \
           set(f1.target.quiver.arrow_by_name) != set(f2.target.quiver.arrow_by_name):
            raise NotParallel("functors do not share a target")
    target = f1.target

    obj_uf = _UnionFind(target.quiver.objects)
    arr_uf = _UnionFind(list(target.quiver.arrow_by_name))
    for x in f1.source.quiver.objects:
        obj_uf.union(f1.object_map[x], f2.object_map[x])
    for a in f1.source.quiver.arrow_by_name:
        arr_uf.union(f1.arrow_map[a], f2.arrow_map[a])

    ren_obj = {x: obj_uf.find(x) for x in target.quiver.objects}
    ren_arr = {a: arr_uf.find(a) for a in target.quiver.arrow_by_name}

    objects = sorted(set(ren_obj.values()))
    arrows = []
    for rep in sorted(set(ren_arr.values())):
        a = target.quiver.arrow_by_name[rep]
        arrows.append(Arrow(rep, ren_obj[a.src], ren_obj[a.tgt]))
    quiver = Quiver(objects, arrows)

    relations = [(_rename_element(l, ren_obj, ren_arr),
                  _rename_element(r, ren_obj, ren_arr))
                 for l, r in target.relations]
    bounds: dict[str, float] = {}
    for name, b in target.norm_bounds.items():
        rep = ren_arr[name]
        bounds[rep] = min(bounds.get(rep, b), b)
    return PresentedStarCategory(quiver, relations, bounds)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # smaller name wins, for deterministic representatives
        lo, hi = (ra, rb) if ra < rb else (rb, ra)
        self.parent[hi] = lo


# ---------------------------------------------------------------------------
# norm certificates and evaluation


def norm_bound(e: FreeStarElement, gens: dict) -> float:
    """Triangle-inequality certificate: sum over terms of |z| times the
    product of the factor bounds (adjoints share their generator's bound,
    units count 1). Any evaluation in a C*-category obeys this bound."""
    total = 0.0
    for word, z in e.terms.items():
        prod = 1.0
        for g, _adj in word.factors:
            if g not in gens:
                raise UnboundedGenerator(f"no bound for generator {g!r}")
            prod *= float(gens[g])
        total += abs(z) * prod
    return total


class Evaluation:
    """A representation of a presentation in a concrete matrix C*-category,
    with all relations and bounds verified at construction time."""

    def __init__(self, presentation: PresentedStarCategory, category,
                 object_assign: dict, arrow_assign: dict,
                 tol: Tolerance = DEFAULT_TOL):
        self.presentation = presentation
        self.category = category
        self.tol = tol
        self.object_assign = dict(object_assign)
        self.arrow_assign = {}
        q = presentation.quiver
        for x in q.objects:
            if self.object_assign.get(x) is None:
                raise InvalidFunctor(f"object {x!r} has no assignment")
        for a in q.arrows:
            m = arrow_assign.get(a.name)
            if m is None:
                raise InvalidFunctor(f"arrow {a.name!r} has no assignment")
            rows = category.obj(self.object_assign[a.tgt]).dim
            cols = category.obj(self.object_assign[a.src]).dim
            m = as_matrix(m, rows, cols)
            hom = category.hom(self.object_assign[a.src], self.object_assign[a.tgt])
            if not hom.contains(m, tol):
                raise InvalidFunctor(f"image of {a.name!r} is not in the target hom space")
            self.arrow_assign[a.name] = m
        self._check_relations()
        self._check_bounds()

    def __call__(self, e: FreeStarElement) -> np.ndarray:
        rows = self.category.obj(self.object_assign[e.tgt]).dim
        cols = self.category.obj(self.object_assign[e.src]).dim
        out = np.zeros((rows, cols), dtype=np.complex128)
        for word, z in e.terms.items():
            out += z * self._eval_word(word)
        return out

    def _eval_word(self, word: StarWord) -> np.ndarray:
        if word.is_unit():
            n = self.category.obj(self.object_assign[word.src]).dim
            return np.eye(n, dtype=np.complex128)
        mat = None
        for g, adj in word.factors:
            m = self.arrow_assign[g]
            m = m.conj().T if adj else m
            mat = m if mat is None else mat @ m
        return mat

    def _check_relations(self):
        for idx, (lhs, rhs) in enumerate(self.presentation.relations):
            left, right = self(lhs), self(rhs)
            scale = max(op_norm(left), op_norm(right))
            residual = op_norm(left - right)
            if residual > self.tol.bound(scale):
                raise RelationFailed(
                    f"relation #{idx} fails with residual {residual:.3e}",
                    witness={"relation": idx, "residual": residual},
                )

    def _check_bounds(self):
        for name, bound in self.presentation.norm_bounds.items():
            value = op_norm(self.arrow_assign[name])
            if value > bound + self.tol.eps_abs:
                raise BoundFailed(
                    f"generator {name!r} has norm {value:.6f} > bound {bound}",
                    arrow=name, value=value,
                )


def evaluate(presentation: PresentedStarCategory, category,
             object_assign: dict, arrow_assign: dict,
             tol: Tolerance = DEFAULT_TOL) -> Evaluation:
    """Check a representation against a presentation and return the induced
    evaluation map on free elements."""
    return Evaluation(presentation, category, object_assign, arrow_assign, tol)


# ---------------------------------------------------------------------------
# finite categories realized by isometries


class FiniteCategory:
    """A finite category given by explicit composition tables."""

    def __init__(self, objects, arrows, identities, compose):
        self.objects = list(objects)
        self.arrows = {name: (src, tgt) for name, (src, tgt) in arrows.items()}
        self.identities = dict(identities)
        self.compose = dict(compose)
        self._validate()

    def _validate(self):
        for x in self.objects:
            ident = self.identities.get(x)
            if ident not in self.arrows or self.arrows[ident] != (x, x):
                raise InvalidCategory(f"object {x!r} lacks a valid identity arrow")
        for name, (src, tgt) in self.arrows.items():
            if src not in self.objects or tgt not in self.objects:
                raise InvalidCategory(f"arrow {name!r} has undeclared endpoints")
        for g, (gs, gt) in self.arrows.items():
            for f, (fs, ft) in self.arrows.items():
                if ft != gs:
                    continue
                h = self.compose.get((g, f))
                if h is None or h not in self.arrows:
                    raise InvalidCategory(f"missing composite {g!r} . {f!r}")
                if self.arrows[h] != (fs, gt):
                    raise InvalidCategory(f"composite {g!r} . {f!r} has wrong endpoints")
        for x in self.objects:
            e = self.identities[x]
            for f, (fs, ft) in self.arrows.items():
                if ft == x and self.compose[(e, f)] != f:
                    raise InvalidCategory("identity is not left-neutral")
                if fs == x and self.compose[(f, e)] != f:
                    raise InvalidCategory("identity is not right-neutral")
        for h, (hs, ht) in self.arrows.items():
            for g, (gs, gt) in self.arrows.items():
                if gt != hs:
                    continue
                for f, (fs, ft) in self.arrows.items():
                    if ft != gs:
                        continue
                    if self.compose[(self.compose[(h, g)], f)] != \
                            self.compose[(h, self.compose[(g, f)])]:
                        raise InvalidCategory("composition is not associative")

    def is_identity(self, name: str) -> bool:
        src, tgt = self.arrows[name]
        return src == tgt and self.identities[src] == name


def ism_presentation(cat: FiniteCategory) -> PresentedStarCategory:
    """Presentation whose representations are exactly the ways of realizing
    the category's arrows as isometries: the composition table of the
    category plus c*c = 1 for every non-identity arrow."""
    gens = [name for name in sorted(cat.arrows) if not cat.is_identity(name)]
    arrows = [Arrow(name, *cat.arrows[name]) for name in gens]
    quiver = Quiver(list(cat.objects), arrows)
    pres = PresentedStarCategory(quiver)

    relations = []
    for g in gens:
        for f in gens:
            gs, _gt = cat.arrows[g]
            _fs, ft = cat.arrows[f]
            if ft != gs:
                continue
            composite = cat.compose[(g, f)]
            lhs = pres.gen(g) * pres.gen(f)
            if cat.is_identity(composite):
                rhs = pres.unit(cat.arrows[composite][0])
            else:
                rhs = pres.gen(composite)
            relations.append((lhs, rhs))
    for g in gens:
        src, _ = cat.arrows[g]
        relations.append((pres.gen(g).star() * pres.gen(g), pres.unit(src)))
    return PresentedStarCategory(quiver, relations)
