"""Unit tests for the injection categories, checked against independent
brute-force oracles implemented directly from the relation definitions."""

from itertools import permutations

import pytest

from orbitlab.categories import (
    CategoryKind,
    InjectionMorphism,
    compose,
    endomorphism_group,
    factorize,
    format_morphism,
    hom_set,
    hom_size_formula,
    identity,
    is_morphism,
    parse_morphism,
)
from orbitlab.errors import MalformedInputError, ResourceCapError


# -- oracle: relations written out independently -------------------------------


def oracle_relation(kind, n, t):
    if kind is CategoryKind.FI:
        return False
    if kind is CategoryKind.OI:
        return t[0] < t[1]
    if kind is CategoryKind.BI:
        x, y, z = t
        return (y < x and x < z) or (z < x and x < y)
    if kind is CategoryKind.CI:
        x, y, z = t
        return sorted(((x, y, z), (y, z, x), (z, x, y)))[0] == tuple(sorted(t))
    if kind is CategoryKind.SI:
        x, y, z, w = t
        # walk the circle from x; z and w separated iff exactly one is met
        # before y
        def before_y(c):
            pos = x
            while True:
                pos = pos % n + 1
                if pos == y:
                    return False
                if pos == c:
                    return True

        return before_y(z) != before_y(w)
    raise AssertionError(kind)


ARITY = {
    CategoryKind.FI: 0,
    CategoryKind.OI: 2,
    CategoryKind.BI: 3,
    CategoryKind.CI: 3,
    CategoryKind.SI: 4,
}


def oracle_is_embedding(kind, m, n, image):
    if len(set(image)) != m:
        return False
    a = ARITY[kind]
    if a == 0 or m < a:
        return True
    for t in permutations(range(1, m + 1), a):
        mapped = tuple(image[i - 1] for i in t)
        if oracle_relation(kind, m, t) != oracle_relation(kind, n, mapped):
            return False
    return True


def oracle_hom(kind, m, n):
    return [
        img
        for img in permutations(range(1, n + 1), m)
        if oracle_is_embedding(kind, m, n, img)
    ]


# -- is_morphism ----------------------------------------------------------------


def test_is_morphism_examples():
    assert is_morphism(CategoryKind.OI, 2, 4, (1, 3))
    assert not is_morphism(CategoryKind.OI, 2, 4, (3, 1))
    assert is_morphism(CategoryKind.CI, 3, 4, (2, 3, 1))
    assert is_morphism(CategoryKind.BI, 3, 4, (4, 2, 1))


def test_is_morphism_against_oracle():
    for kind in CategoryKind:
        for m in range(0, 4):
            for n in range(m, 5):
                for img in permutations(range(1, n + 1), m):
                    assert is_morphism(kind, m, n, img) == oracle_is_embedding(
                        kind, m, n, img
                    )


def test_is_morphism_malformed_input():
    with pytest.raises(MalformedInputError):
        is_morphism(CategoryKind.OI, 2, 4, (1,))
    with pytest.raises(MalformedInputError):
        is_morphism(CategoryKind.OI, 2, 4, (1, 5))
    with pytest.raises(MalformedInputError):
        is_morphism(CategoryKind.OI, 2, 4, (0, 1))


def test_non_injective_is_false_not_error():
    assert not is_morphism(CategoryKind.FI, 2, 4, (3, 3))


# -- hom sets ----------------------------------------------------------------------


def test_hom_set_examples():
    assert len(hom_set(CategoryKind.FI, 2, 3)) == 6
    assert len(hom_set(CategoryKind.OI, 2, 4)) == 6
    assert len(hom_set(CategoryKind.SI, 4, 5)) == 40
    assert len(hom_set(CategoryKind.FI, 0, 7)) == 1
    assert hom_set(CategoryKind.OI, 3, 2) == []


def test_hom_set_matches_oracle_and_is_sorted():
    for kind in CategoryKind:
        for m in range(0, 4):
            for n in range(m, 5):
                got = [f.image for f in hom_set(kind, m, n)]
                assert got == sorted(oracle_hom(kind, m, n))


def test_hom_set_cap():
    with pytest.raises(ResourceCapError):
        hom_set(CategoryKind.FI, 5, 9, cap=10)


# -- composition ---------------------------------------------------------------------


def test_identity_law():
    f = InjectionMorphism(CategoryKind.OI, 2, 4, (1, 3))
    assert compose(identity(CategoryKind.OI, 2), f) == f
    assert compose(f, identity(CategoryKind.OI, 4)) == f


def test_compose_example():
    f = InjectionMorphism(CategoryKind.OI, 2, 3, (1, 3))
    g = InjectionMorphism(CategoryKind.OI, 3, 5, (1, 2, 4))
    assert compose(f, g).image == (1, 4)


def test_compose_mismatch():
    f = InjectionMorphism(CategoryKind.OI, 2, 3, (1, 3))
    g = InjectionMorphism(CategoryKind.OI, 2, 3, (1, 3))
    with pytest.raises(MalformedInputError):
        compose(f, g)
    h = InjectionMorphism(CategoryKind.FI, 3, 4, (1, 2, 3))
    with pytest.raises(MalformedInputError):
        compose(f, h)


def test_bi_reversal_sign_multiplicative():
    rev = InjectionMorphism(CategoryKind.BI, 3, 3, (3, 2, 1))
    assert compose(rev, rev) == identity(CategoryKind.BI, 3)


def test_associativity_random_sample():
    for kind in (CategoryKind.CI, CategoryKind.SI):
        for f in hom_set(kind, 3, 4) if kind is CategoryKind.CI else hom_set(kind, 4, 5):
            m = f.source
            for g in hom_set(kind, f.target, f.target + 1)[:3]:
                for h in hom_set(kind, g.target, g.target + 1)[:3]:
                    assert compose(compose(f, g), h) == compose(f, compose(g, h))


# -- factorization -----------------------------------------------------------------


def test_factorize_recomposes_everywhere():
    for kind in CategoryKind:
        for m in range(0, 4):
            for n in range(m, 5):
                for f in hom_set(kind, m, n):
                    eps_prime, g = factorize(f)
                    assert eps_prime.is_increasing
                    assert frozenset(eps_prime.image) == f.image_set
                    assert g.source == g.target == m
                    assert compose(g, eps_prime) == f


def test_factorize_uniqueness():
    # the pairing (increasing injection, endomorphism) -> morphism is injective
    kind = CategoryKind.CI
    seen = {}
    for f in hom_set(kind, 3, 5):
        key = factorize(f)
        assert key not in seen
        seen[key] = f


# -- endomorphism groups ---------------------------------------------------------------


def test_endomorphism_group_sizes():
    assert len(endomorphism_group(CategoryKind.FI, 3)) == 6
    assert len(endomorphism_group(CategoryKind.OI, 5)) == 1
    assert len(endomorphism_group(CategoryKind.BI, 3)) == 2
    assert len(endomorphism_group(CategoryKind.CI, 3)) == 3
    assert len(endomorphism_group(CategoryKind.SI, 4)) == 8


def test_si_endomorphisms_are_dihedral():
    ends = {e.image for e in endomorphism_group(CategoryKind.SI, 4)}
    rot = (2, 3, 4, 1)
    ref = (4, 3, 2, 1)
    group = {(1, 2, 3, 4)}
    frontier = [(1, 2, 3, 4)]
    while frontier:
        new = []
        for g in frontier:
            for h in (rot, ref):
                c = tuple(h[v - 1] for v in g)
                if c not in group:
                    group.add(c)
                    new.append(c)
        frontier = new
    assert ends == group


# -- serialization ------------------------------------------------------------------


def test_morphism_round_trip():
    for kind in CategoryKind:
        for f in hom_set(kind, 2, 4):
            assert parse_morphism(format_morphism(f)) == f


@pytest.mark.parametrize("kind", list(CategoryKind))
def test_factorize_hypothesis(kind):
    from hypothesis import given, settings
    from hypothesis import strategies as st

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def run(data):
        n = data.draw(st.integers(min_value=1, max_value=6))
        m = data.draw(st.integers(min_value=0, max_value=n))
        image = tuple(
            data.draw(
                st.permutations(range(1, n + 1)).map(lambda p: p[:m])
            )
        )
        if not is_morphism(kind, m, n, image):
            return
        f = InjectionMorphism(kind, m, n, image)
        eps_prime, g = factorize(f)
        assert compose(g, eps_prime) == f
        assert eps_prime.is_increasing

    run()


def test_parse_morphism_rejects_garbage():
    with pytest.raises(MalformedInputError):
        parse_morphism("XX 2->3 : [1,2]")
    with pytest.raises(MalformedInputError):
        parse_morphism("OI 2->3 [1,2]")
    with pytest.raises(MalformedInputError):
        parse_morphism("OI 2->3 : [3,1]")
