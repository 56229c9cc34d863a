"""Unit tests for relational structures, ages, and amalgamation."""

from itertools import permutations

import pytest

from orbitlab.actions import symmetric_action
from orbitlab.errors import MalformedInputError
from orbitlab.structures import (
    AmalgamationProblem,
    BuiltinAge,
    PairAge,
    StructureEmbedding,
    age_for,
    age_has_sap,
    arrangement_structure,
    automorphisms,
    canonical_structure,
    enumerate_embeddings,
    fixed_point_condition,
    format_structure,
    make_structure,
    parse_embedding_file,
    parse_structure,
    plain_set_structure,
    solve_amalgamation,
)


def linear(labels):
    return arrangement_structure("linear", labels)


def test_structure_validation():
    with pytest.raises(MalformedInputError):
        make_structure(("a", "a"), (), {})
    with pytest.raises(MalformedInputError):
        make_structure(("a",), (("r", 2),), {"r": {("a", "b")}})


def test_arrangement_structures():
    s = linear(("a", "b", "c"))
    assert s.relation("lt") == frozenset({("a", "b"), ("a", "c"), ("b", "c")})
    cyc = arrangement_structure("cyclic", (1, 2, 3))
    assert (1, 2, 3) in cyc.relation("cyc")
    assert (2, 1, 3) not in cyc.relation("cyc")
    sep = arrangement_structure("separation", (1, 2, 3, 4))
    assert (1, 3, 2, 4) in sep.relation("sep")
    assert (1, 2, 3, 4) not in sep.relation("sep")


def test_induced_substructure():
    s = linear(("a", "b", "c", "d"))
    t = s.induced(("b", "d"))
    assert t.universe == ("b", "d")
    assert t.relation("lt") == frozenset({("b", "d")})


def test_embeddings_of_linear_orders():
    small = linear(("x", "y"))
    big = linear(("a", "b", "c"))
    embs = enumerate_embeddings(small, big)
    assert [e.images for e in embs] == [("a", "b"), ("a", "c"), ("b", "c")]


def test_automorphism_counts():
    assert len(automorphisms(linear(("a", "b", "c")))) == 1
    assert len(automorphisms(plain_set_structure((1, 2, 3)))) == 6
    assert len(automorphisms(arrangement_structure("cyclic", (1, 2, 3, 4)))) == 4
    assert len(automorphisms(arrangement_structure("separation", (1, 2, 3, 4)))) == 8
    assert len(automorphisms(arrangement_structure("betweenness", (1, 2, 3)))) == 2


def test_canonical_form_is_iso_invariant():
    a = linear(("a", "b", "c"))
    b = arrangement_structure("linear", ("z", "x", "y"))
    assert a.canonical_form() == b.canonical_form()


def test_canonical_structure_and_fixed_points():
    S4 = symmetric_action(4)
    M = canonical_structure(S4, 2)
    # Sym-orbits on pairs: diagonal and off-diagonal
    assert len([r for r in M.signature if r[1] == 2]) == 2
    assert fixed_point_condition(S4, {1, 2})
    S3 = symmetric_action(3)
    assert not fixed_point_condition(S3, {1, 2})  # stabilizer fixes 3


def test_builtin_age_membership():
    age = BuiltinAge("cyclic")
    assert age.contains(arrangement_structure("cyclic", (3, 1, 2)))
    bad = make_structure((1, 2, 3), (("cyc", 3),), {"cyc": {(1, 2, 3)}})
    assert not age.contains(bad)  # a lone cyclic triple is not a cyclic order


def test_pair_age_membership():
    s = PairAge.from_pairs(("a", "b"), ((1, 2), (2, 1)))
    age = PairAge()
    assert age.contains(s)
    assert ("a", "b") in s.relation("eq_fs")
    # diagonal point forced by eq_ff + eq_ss cannot be denied
    bad = make_structure(
        ("a",),
        PairAge.signature,
        {"diag": set(), "eq_ff": set(), "eq_fs": {("a", "a")}},
    )
    # (a,a) tuples never appear for distinct-pair relations in realizable ones
    assert not age.contains(bad)


def test_pair_age_structures_on_counts():
    age = PairAge()
    singles = list(age.structures_on(("a",)))
    assert len(singles) == 2  # diagonal or not


def test_solve_amalgamation_linear_strong():
    sigma = linear(("s",))
    g1 = linear(("s", "x"))
    g2 = arrangement_structure("linear", ("y", "s"))
    p = AmalgamationProblem(
        sigma,
        g1,
        g2,
        StructureEmbedding(sigma, g1, ("s",)),
        StructureEmbedding(sigma, g2, ("s",)),
        BuiltinAge("linear"),
    )
    am = solve_amalgamation(p, strong=True)
    assert am is not None
    assert len(am.delta.universe) == 3  # pushout: no extra identifications
    # both squares commute over sigma
    assert am.g1.apply(("S", "s") if ("S", "s") in am.g1.mapping else "s") == am.g2.apply("s")


def test_pair_age_weak_but_not_strong():
    # sigma = one off-diagonal point; both sides add the mirror point that is
    # forced to coincide, so the strong (pushout) amalgam fails but a weak
    # amalgam that merges the two private points exists
    age = PairAge()
    sigma = PairAge.from_pairs(("a",), ((0, 1),))
    side = PairAge.from_pairs(("a", "b"), ((0, 1), (1, 0)))
    f = StructureEmbedding(sigma, side, ("a",))
    p = AmalgamationProblem(sigma, side, side, f, f, age)
    assert solve_amalgamation(p, strong=True) is None
    weak = solve_amalgamation(p, strong=False)
    assert weak is not None
    assert len(weak.delta.universe) == 2


def test_age_has_sap_small_caps():
    for name in ("set", "linear", "cyclic"):
        assert age_has_sap(name, 2).holds
    report = age_has_sap("pair", 2)
    assert not report.holds
    cert = report.certificate
    assert len(cert.gamma1.universe) <= 2 and len(cert.gamma2.universe) <= 2


def test_amalgam_embeddings_verified():
    report = age_has_sap("betweenness", 2)
    assert report.holds


def test_structure_text_round_trip():
    s = linear(("a", "b", "c"))
    assert parse_structure(format_structure(s)) == s
    with pytest.raises(MalformedInputError):
        parse_structure("lt/2: (a,b)")


def test_parse_embedding_file():
    text = """
[source]
universe = a
lt/2:
[target]
universe = a b
lt/2: (a,b)
[map]
a -> a
"""
    e = parse_embedding_file(text)
    assert e.images == ("a",)
    with pytest.raises(MalformedInputError):
        parse_embedding_file("[source]\nuniverse = a\n")
