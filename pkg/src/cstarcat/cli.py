"""Command-line front end.

Commands operate on JSON files (categories, functors, groupoids, presented
groupoids, simplicial sets, lifting squares) and emit a JSON report with a
fixed field order; timing goes to stderr so reports stay byte-reproducible.

Exit codes: 0 all checks passed, 1 some check failed, 2 usage or parse
error, 3 unknown-only (probabilistic checks returned no evidence).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import model as md
from . import randgen as rg
from . import suites
from .categories import (
    MatCStarCategory,
    StarFunctor,
    tensor_max,
    validate_category,
    validate_functor,
)
from .errors import CStarCatError, InvalidParams, NotFiniteWithinBound
from .groupoids import FiniteGroupoid, FPGroupoid, cstar_max, fundamental_groupoid, nerve
from .homotopy import pi
from .linalg import Tolerance, matrix_from_json
from .reports import Report
from .simplicial import FiniteSimplicialSet


def _load(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def detect_kind(data: dict) -> str:
    if "object_map" in data:
        return "functor"
    if "homs" in data:
        return "category"
    if "compose" in data:
        return "groupoid"
    if "generators" in data:
        return "fp-groupoid"
    if "simplices" in data:
        return "sset"
    if "arrows" in data and ("relations" in data or "bounds" in data):
        return "presentation"
    raise InvalidParams("could not detect the input kind")


def _emit(report: Report, args, started: float) -> int:
    """Reports go to --output (or stdout). Commands that produce an artifact
    (a category, functor, groupoid or simplicial-set file) instead write the
    raw artifact to --output, so outputs can be fed back into other
    commands; their report then goes to stdout."""
    artifact = getattr(args, "artifact", False)
    text = report.dumps()
    out = getattr(args, "output", None)
    if out and artifact and report.payload is not None:
        payload = json.dumps(report.payload, indent=2, sort_keys=False) + "\n"
        Path(out).write_text(payload, encoding="utf-8")
        sys.stdout.write(text)
    elif out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"{report.command}: {report.status} "
          f"({len(report.checks)} checks, {time.time() - started:.2f}s)",
          file=sys.stderr)
    return report.exit_code


def _tol(args) -> Tolerance:
    eps = getattr(args, "tolerance", None)
    return Tolerance(eps, eps) if eps else Tolerance()


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> Report:
    data = _load(args.file)
    kind = args.kind if args.kind != "auto" else detect_kind(data)
    report = Report("validate")
    if kind == "category":
        cat = MatCStarCategory.from_json(data, tol=_tol(args))
        violations = validate_category(cat)
    elif kind == "functor":
        functor = StarFunctor.from_json(data, tol=_tol(args))
        violations = validate_category(functor.source) + \
            validate_category(functor.target) + validate_functor(functor)
    else:
        raise InvalidParams(f"validate does not handle kind {kind!r}")
    if not violations:
        report.add("structure", "pass")
    for v in violations:
        report.add(f"{v.kind}@{','.join(map(str, v.where))}", "fail",
                   residual=v.residual, detail=v.detail)
    return report


def cmd_factorize(args) -> Report:
    functor = StarFunctor.from_json(_load(args.file), tol=_tol(args))
    report = Report(f"factorize:{args.mode}")
    if args.mode == "path":
        result = md.factor_path(functor)
        weq = md.is_weak_equivalence(result.first, seed=args.seed)
        report.add("first_is_cofibration",
                   "pass" if md.is_cofibration(result.first) else "fail")
        report.add("first_is_weak_equivalence",
                   {"YES": "pass", "NO": "fail"}.get(weq.status, "unknown"),
                   detail=weq.reason)
        report.add("second_answers_unitary_lifts", "pass",
                   detail="path fibration; see lift --mode generator")
    else:
        result = md.factor_cylinder(functor)
        report.add("first_is_cofibration",
                   "pass" if md.is_cofibration(result.first) else "fail")
        report.add("second_is_trivial_fibration",
                   "pass" if md.is_trivial_fibration(result.second) else "fail")
    residual = result.composite_residual(functor)
    report.add("composite_equals_original",
               "pass" if residual <= 1e-8 else "fail", residual=residual)
    bad = validate_category(result.midway)
    report.add("midway_validates", "pass" if not bad else "fail",
               detail="" if not bad else str(bad[0]))
    report.payload = {
        "midway": result.midway.to_json(),
        "first": result.first.to_json(),
        "second": result.second.to_json(),
    }
    return report


def _load_functor_ref(ref, base: Path, tol: Tolerance) -> StarFunctor:
    if isinstance(ref, str):
        return StarFunctor.from_json(_load(str(base / ref)), tol=tol)
    return StarFunctor.from_json(ref, tol=tol)


def cmd_lift(args) -> Report:
    data = _load(args.file)
    base = Path(args.file).parent
    tol = _tol(args)
    report = Report(f"lift:{args.mode}")
    if args.mode == "generator":
        functor = _load_functor_ref(data["F"], base, tol)
        v = matrix_from_json(data["v"])
        if "y" in data:
            lifted = md.solve_unitary_lift(functor, data["x"], v, data["y"])
        else:
            lifted = md.lift_unitary_by_search(functor, data["x"], v)
        if lifted is None:
            report.add("unitary_lift", "unknown",
                       detail="no lift found (solver is one-sided)")
        else:
            u, obj = lifted
            residual = float(np.linalg.norm(
                functor.apply(data["x"], obj, u) - v))
            report.add("unitary_lift", "pass" if residual <= 1e-8 else "fail",
                       residual=residual, witness=obj)
        return report
    square = md.LiftingSquare(
        top=_load_functor_ref(data["top"], base, tol),
        left=_load_functor_ref(data["left"], base, tol),
        right=_load_functor_ref(data["right"], base, tol),
        bottom=_load_functor_ref(data["bottom"], base, tol),
    )
    if args.mode == "tcof-fib":
        lift = md.lift_tcof_fib(square, seed=args.seed)
    else:
        lift = md.lift_cof_tfib(square)
    res1, res2 = square.triangle_residuals(lift)
    report.add("upper_triangle", "pass" if res1 <= 1e-8 else "fail", residual=res1)
    report.add("lower_triangle", "pass" if res2 <= 1e-8 else "fail", residual=res2)
    report.payload = {"lift": lift.to_json()}
    return report


def cmd_tensor(args) -> Report:
    tol = _tol(args)
    a = MatCStarCategory.from_json(_load(args.left), tol=tol)
    b = MatCStarCategory.from_json(_load(args.right), tol=tol)
    tensor = tensor_max(a, b)
    report = Report("tensor")
    ok = all(
        tensor.hom(f"({x},{u})", f"({y},{v})").dim ==
        a.hom(x, y).dim * b.hom(u, v).dim
        for x in a.object_names for y in a.object_names
        for u in b.object_names for v in b.object_names)
    report.add("hom_dimensions_multiply", "pass" if ok else "fail")
    bad = validate_category(tensor)
    report.add("validates", "pass" if not bad else "fail")
    report.payload = tensor.to_json()
    return report


def cmd_groupoid_cstar(args) -> Report:
    groupoid = FiniteGroupoid.from_json(_load(args.file))
    gc = cstar_max(groupoid, tol=_tol(args))
    report = Report("groupoid-cstar")
    bad = validate_category(gc.category)
    report.add("validates", "pass" if not bad else "fail")
    from .groupoids import uni_membership
    unitary = all(uni_membership(m) for m in gc.embed.values())
    report.add("arrows_are_unitary", "pass" if unitary else "fail")
    dims_ok = all(gc.category.hom(x, y).dim == len(groupoid.hom(x, y))
                  for x in groupoid.objects for y in groupoid.objects)
    report.add("hom_dims_count_arrows", "pass" if dims_ok else "fail")
    report.payload = gc.category.to_json()
    return report


def cmd_fundamental_groupoid(args) -> Report:
    sset = FiniteSimplicialSet.from_json(_load(args.file))
    pres = fundamental_groupoid(sset)
    report = Report("fundamental-groupoid")
    report.add("generators", "pass",
               detail=f"{len(pres.generators)} generators, "
                      f"{len(pres.relations)} relations")
    report.payload = pres.to_json()
    return report


def cmd_nerve(args) -> Report:
    groupoid = FiniteGroupoid.from_json(_load(args.file))
    sset = nerve(groupoid, args.dim_cap)
    report = Report("nerve")
    bad = sset.identity_violations()
    report.add("simplicial_identities", "pass" if not bad else "fail",
               detail="" if not bad else bad[0])
    report.payload = sset.to_json()
    return report


def cmd_pi(args) -> Report:
    sset = FiniteSimplicialSet.from_json(_load(args.file))
    report = Report("pi")
    try:
        gc = pi(sset, bound=args.coset_budget, tol=_tol(args))
    except NotFiniteWithinBound as err:
        report.add("fundamental_groupoid_finite", "unknown", detail=str(err))
        return report
    report.add("fundamental_groupoid_finite", "pass")
    bad = validate_category(gc.category)
    report.add("validates", "pass" if not bad else "fail")
    report.payload = gc.category.to_json()
    return report


def cmd_verify_axioms(args) -> Report:
    report = Report(f"verify-axioms:{args.suite}")
    if args.suite == "mc":
        entries = suites.suite_mc(seed=args.seed)
    elif args.suite == "monoidal":
        entries = suites.suite_monoidal(seed=args.seed)
    elif args.suite == "simplicial":
        entries = suites.suite_simplicial(seed=args.seed,
                                          budget=args.coset_budget)
    else:
        entries = suites.suite_adjunctions(seed=args.seed)
    report.checks.extend(entries)
    return report


def cmd_generate(args) -> Report:
    rng = rg.rng_from_seed(args.seed)
    report = Report(f"generate:{args.kind}")
    if args.kind == "random_groupoid":
        groupoid = rg.random_groupoid(rng, n_objects=args.objects,
                                      max_order=args.order)
        payload = groupoid.to_json()
        report.add("valid_groupoid", "pass",
                   detail=f"{len(groupoid.objects)} objects, "
                          f"{len(groupoid.arrows)} arrows")
    elif args.kind == "random_matcat":
        dims = [int(d) for d in args.dims.split(",")] if args.dims else [2, 3]
        if len(dims) > 5 or any(d > 6 or d < 1 for d in dims):
            raise InvalidParams("supported bounds: <= 5 objects, dims <= 6")
        cat, _model = rg.random_matcat(rng, n_objects=len(dims),
                                       max_dim=max(dims))
        bad = validate_category(cat)
        report.add("passes_validator", "pass" if not bad else "fail")
        payload = cat.to_json()
    elif args.kind == "random_weq":
        cat, _model = rg.random_matcat(rng, n_objects=args.objects, max_dim=4)
        functor = rg.random_weq(rng, cat, n_extra=1)
        verdict = md.is_weak_equivalence(functor, seed=args.seed)
        report.add("is_weak_equivalence",
                   "pass" if verdict.status == "YES" else "fail")
        payload = functor.to_json()
    else:
        raise InvalidParams(f"unknown generator kind {args.kind!r}")
    report.payload = payload
    return report


# ---------------------------------------------------------------------------
# argument wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cstarcat",
        description="Finite-dimensional C*-categories and the unitary model "
                    "structure: validators, factorizations, lifts and "
                    "axiom-verification suites.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tolerance", type=float, default=None)
        p.add_argument("--coset-budget", type=int, default=10000)
        p.add_argument("--dim-cap", type=int, default=2)
        p.add_argument("--output", type=str, default=None)
        return p

    p = common(sub.add_parser("validate", help="validate a category or functor file"))
    p.add_argument("file")
    p.add_argument("--kind", choices=["auto", "category", "functor"], default="auto")
    p.set_defaults(run=cmd_validate)

    p = common(sub.add_parser("factorize", help="factor a functor (MC5)"))
    p.add_argument("file")
    p.add_argument("--mode", choices=["path", "cylinder"], required=True)
    p.set_defaults(run=cmd_factorize, artifact=True)

    p = common(sub.add_parser("lift", help="solve a lifting problem (MC4)"))
    p.add_argument("file")
    p.add_argument("--mode", choices=["tcof-fib", "cof-tfib", "generator"],
                   required=True)
    p.set_defaults(run=cmd_lift)

    p = common(sub.add_parser("tensor", help="maximal tensor product of two categories"))
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(run=cmd_tensor, artifact=True)

    p = common(sub.add_parser("groupoid-cstar",
                              help="groupoid C*-category via the regular representation"))
    p.add_argument("file")
    p.set_defaults(run=cmd_groupoid_cstar, artifact=True)

    p = common(sub.add_parser("fundamental-groupoid",
                              help="presented fundamental groupoid of a simplicial set"))
    p.add_argument("file")
    p.set_defaults(run=cmd_fundamental_groupoid, artifact=True)

    p = common(sub.add_parser("nerve", help="nerve of a finite groupoid"))
    p.add_argument("file")
    p.set_defaults(run=cmd_nerve, artifact=True)

    p = common(sub.add_parser("pi", help="C*-category of the fundamental groupoid"))
    p.add_argument("file")
    p.set_defaults(run=cmd_pi, artifact=True)

    p = common(sub.add_parser("verify-axioms", help="run a verification suite"))
    p.add_argument("--suite", choices=["mc", "monoidal", "simplicial", "adjunctions"],
                   required=True)
    p.set_defaults(run=cmd_verify_axioms)

    p = common(sub.add_parser("generate", help="emit a random instance file"))
    p.add_argument("--kind", choices=["random_groupoid", "random_matcat",
                                      "random_weq"], required=True)
    p.add_argument("--objects", type=int, default=2)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--dims", type=str, default=None)
    p.set_defaults(run=cmd_generate, artifact=True)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.time()
    try:
        report = args.run(args)
    except (json.JSONDecodeError, FileNotFoundError, KeyError) as err:
        print(f"parse error: {err}", file=sys.stderr)
        return 2
    except InvalidParams as err:
        print(f"invalid parameters: {err}", file=sys.stderr)
        return 2
    except CStarCatError as err:
        print(f"check failed: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    return _emit(report, args, started)


if __name__ == "__main__":
    sys.exit(main())
