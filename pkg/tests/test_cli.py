"""End-to-end CLI tests: exit codes, artifact chaining, determinism."""

import json

import numpy as np
import pytest

from cstarcat import model as md
from cstarcat import randgen as rg
from cstarcat.cli import main
from cstarcat.categories import MatCStarCategory, StarFunctor
from cstarcat.groupoids import FPGroupoid, FiniteGroupoid, cyclic_groupoid
from cstarcat.simplicial import FiniteSimplicialSet, standard


def write(path, data):
    path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    return str(path)


@pytest.fixture
def z2_file(tmp_path):
    return write(tmp_path / "z2.json", cyclic_groupoid(2).to_json())


@pytest.fixture
def weq_file(tmp_path):
    rng = rg.rng_from_seed(5)
    cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
    functor = rg.random_weq(rng, cat, n_extra=1)
    return write(tmp_path / "weq.json", functor.to_json())


def run(*argv):
    return main(list(argv))


# ---------------------------------------------------------------------------
# exit-code contract


def test_validate_pass_and_fail(tmp_path, z2_file, capsys):
    assert run("groupoid-cstar", z2_file,
               "--output", str(tmp_path / "cat.json")) == 0
    capsys.readouterr()
    assert run("validate", str(tmp_path / "cat.json")) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["status"] == "pass"

    broken = MatCStarCategory(
        [("x", 2)], {("x", "x"): [np.diag([1.0, 0]).astype(complex)]}).to_json()
    bad_file = write(tmp_path / "bad.json", broken)
    assert run("validate", bad_file) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["status"] == "fail"
    assert any(c["status"] == "fail" for c in out["checks"])


def test_parse_error_exits_2(tmp_path, capsys):
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{not json", encoding="utf-8")
    assert run("validate", str(garbled)) == 2
    assert run("validate", str(tmp_path / "missing.json")) == 2


def test_unknown_only_exits_3(tmp_path, capsys):
    boundary = write(tmp_path / "b2.json", standard("boundary", 2).to_json())
    assert run("pi", boundary) == 3
    out = json.loads(capsys.readouterr().out)
    assert out["status"] == "unknown"
    assert "NotFinite" in out["checks"][0]["detail"] or \
        "not finite" in out["checks"][0]["detail"]


def test_generate_bounds_checked(tmp_path):
    assert run("generate", "--kind", "random_matcat", "--dims", "9",
               "--seed", "1") == 2


# ---------------------------------------------------------------------------
# commands and chaining


def test_factorize_both_modes(weq_file, capsys):
    assert run("factorize", weq_file, "--mode", "path") == 0
    payload = json.loads(capsys.readouterr().out)["payload"]
    midway = MatCStarCategory.from_json(payload["midway"])
    assert len(midway.objects) >= 2
    assert run("factorize", weq_file, "--mode", "cylinder") == 0


def test_lift_square_via_files(tmp_path, weq_file, capsys):
    functor = StarFunctor.from_json(json.load(open(weq_file)))
    path = md.factor_path(functor)
    cylinder = md.factor_cylinder(functor)
    square = {
        "top": cylinder.first.to_json(),
        "left": path.first.to_json(),
        "right": cylinder.second.to_json(),
        "bottom": path.second.to_json(),
    }
    square_file = write(tmp_path / "square.json", square)
    assert run("lift", square_file, "--mode", "tcof-fib") == 0
    out = json.loads(capsys.readouterr().out)
    assert all(c["residual"] <= 1e-8 for c in out["checks"])
    assert run("lift", square_file, "--mode", "cof-tfib") == 0


def test_lift_generator_shorthand(tmp_path, capsys):
    from cstarcat.categories import full_matrix_category, identity_functor
    from cstarcat.linalg import matrix_to_json

    cat = full_matrix_category([2])
    ident = identity_functor(cat)
    v = np.array([[0, 1], [-1, 0]], dtype=complex)
    data = {"x": "m0", "v": matrix_to_json(v), "F": ident.to_json(), "y": "m0"}
    square_file = write(tmp_path / "gen.json", data)
    assert run("lift", square_file, "--mode", "generator") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["checks"][0]["residual"] <= 1e-8


def test_tensor_and_pi_chain(tmp_path, z2_file, capsys):
    cat_file = str(tmp_path / "cat.json")
    assert run("groupoid-cstar", z2_file, "--output", cat_file) == 0
    assert run("tensor", cat_file, cat_file,
               "--output", str(tmp_path / "tensor.json")) == 0
    tensored = MatCStarCategory.from_json(json.load(open(tmp_path / "tensor.json")))
    assert tensored.objects[0].dim == 4
    delta1 = write(tmp_path / "d1.json", standard("delta", 1, dim_cap=2).to_json())
    assert run("pi", delta1, "--output", str(tmp_path / "pi.json")) == 0
    picat = MatCStarCategory.from_json(json.load(open(tmp_path / "pi.json")))
    assert sorted(o.dim for o in picat.objects) == [2, 2]


def test_nerve_and_fundamental_groupoid_chain(tmp_path, z2_file, capsys):
    nerve_file = str(tmp_path / "nerve.json")
    assert run("nerve", z2_file, "--dim-cap", "2", "--output", nerve_file) == 0
    assert run("fundamental-groupoid", nerve_file,
               "--output", str(tmp_path / "fp.json")) == 0
    pres = FPGroupoid.from_json(json.load(open(tmp_path / "fp.json")))
    assert len(pres.objects) == 1
    # the nerve of Z/2 presents Z/2 back
    from cstarcat.groupoids import normalize_fp
    res = normalize_fp(pres)
    assert res.finite and res.groupoid.is_isomorphic_to(cyclic_groupoid(2))


def test_groupoid_cstar_hom_dims(z2_file, capsys):
    assert run("groupoid-cstar", z2_file) == 0
    out = json.loads(capsys.readouterr().out)
    cat = MatCStarCategory.from_json(out["payload"])
    assert cat.hom("z", "z").dim == 2


# ---------------------------------------------------------------------------
# round trips and determinism


def test_round_trip_of_bundled_files(tmp_path):
    instances = {
        "groupoid": cyclic_groupoid(3).to_json(),
        "sset": standard("horn", 2, 0).to_json(),
    }
    rng = rg.rng_from_seed(9)
    cat, _ = rg.random_matcat(rng, n_objects=2, max_dim=3)
    instances["category"] = cat.to_json()
    instances["functor"] = rg.random_weq(rng, cat).to_json()

    parsed = {
        "groupoid": FiniteGroupoid.from_json,
        "sset": FiniteSimplicialSet.from_json,
        "category": MatCStarCategory.from_json,
        "functor": StarFunctor.from_json,
    }
    for kind, blob in instances.items():
        first = json.dumps(blob, sort_keys=False)
        reparsed = parsed[kind](json.loads(first))
        second = json.dumps(reparsed.to_json(), sort_keys=False)
        assert first == second, f"{kind} does not round-trip"


@pytest.mark.parametrize("suite", ["mc", "monoidal", "simplicial", "adjunctions"])
def test_suites_are_byte_deterministic(tmp_path, suite):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert run("verify-axioms", "--suite", suite, "--seed", "7",
               "--output", str(out1)) == 0
    assert run("verify-axioms", "--suite", suite, "--seed", "7",
               "--output", str(out2)) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_generate_is_deterministic(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert run("generate", "--kind", "random_groupoid", "--seed", "11",
               "--objects", "3", "--order", "4", "--output", str(a)) == 0
    assert run("generate", "--kind", "random_groupoid", "--seed", "11",
               "--objects", "3", "--order", "4", "--output", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()
    groupoid = FiniteGroupoid.from_json(json.load(open(a)))
    assert len(groupoid.objects) == 3
