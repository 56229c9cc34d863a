"""The five injection categories FI, OI, BI, CI, SI on objects [n] = {1,...,n}.

Morphisms are injections that preserve *and* reflect the canonical relation
of their kind (no relation for FI, the linear order for OI, betweenness for
BI, the cyclic order for CI, the separation relation for SI).  Everything is
materialized explicitly: hom-sets are lists of image arrays, composition is
array lookup, and the unique factorization of a morphism into an increasing
injection after an endomorphism is computed directly and then verified.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from itertools import permutations
from math import factorial

from .errors import FalsificationError, MalformedInputError, ResourceCapError

# Raw injections enumerated per hom-set before filtering; 10!/0! fits.
DEFAULT_ENUMERATION_CAP = 4_000_000


class CategoryKind(Enum):
    FI = "FI"
    OI = "OI"
    BI = "BI"
    CI = "CI"
    SI = "SI"

    @classmethod
    def from_string(cls, s: str) -> "CategoryKind":
        try:
            return cls[s.strip().upper()]
        except KeyError:
            raise MalformedInputError(f"unknown category kind: {s!r}")


# Arity of the canonical relation; FI has none, OI's order is binary.
RELATION_ARITY = {
    CategoryKind.FI: 0,
    CategoryKind.OI: 2,
    CategoryKind.BI: 3,
    CategoryKind.CI: 3,
    CategoryKind.SI: 4,
}


def _cyclically_inside(n: int, a: int, b: int, c: int) -> bool:
    """True if c lies strictly inside the arc from a to b, walking 1,2,...,n,1."""
    return 0 < (c - a) % n < (b - a) % n


def in_relation(kind: CategoryKind, n: int, tup: tuple[int, ...]) -> bool:
    """Membership of a tuple of distinct points of [n] in the canonical relation."""
    if kind is CategoryKind.FI:
        return False
    if kind is CategoryKind.OI:
        x, y = tup
        return x < y
    if kind is CategoryKind.BI:
        x, y, z = tup  # x between y and z
        return y < x < z or z < x < y
    if kind is CategoryKind.CI:
        x, y, z = tup
        return x < y < z or y < z < x or z < x < y
    if kind is CategoryKind.SI:
        x, y, z, w = tup  # chord {x,y} separates {z,w}
        return _cyclically_inside(n, x, y, z) != _cyclically_inside(n, x, y, w)
    raise AssertionError(kind)


def canonical_relation(kind: CategoryKind, n: int) -> frozenset[tuple[int, ...]]:
    """All tuples of distinct points of [n] in the canonical relation of `kind`."""
    a = RELATION_ARITY[kind]
    if a == 0:
        return frozenset()
    return frozenset(
        t for t in permutations(range(1, n + 1), a) if in_relation(kind, n, t)
    )


def _validate_image(m: int, n: int, image) -> tuple[int, ...]:
    image = tuple(image)
    if len(image) != m:
        raise MalformedInputError(f"image has length {len(image)}, expected {m}")
    for v in image:
        if not isinstance(v, int) or not 1 <= v <= n:
            raise MalformedInputError(f"image entry {v!r} not in 1..{n}")
    return image


def is_morphism(kind: CategoryKind, m: int, n: int, image) -> bool:
    """Whether `image` defines an embedding [m] -> [n] of the given kind.

    Malformed input (wrong length, out-of-range entries) raises; a valid
    injection that fails the embedding condition returns False.
    """
    image = _validate_image(m, n, image)
    if len(set(image)) != m:
        return False
    a = RELATION_ARITY[kind]
    if a == 0 or m < a:
        return True
    for tup in permutations(range(1, m + 1), a):
        mapped = tuple(image[i - 1] for i in tup)
        if in_relation(kind, m, tup) != in_relation(kind, n, mapped):
            return False
    return True


@dataclass(frozen=True)
class InjectionMorphism:
    """An embedding [source] -> [target]; image[i] is the value of i+1."""

    kind: CategoryKind
    source: int
    target: int
    image: tuple[int, ...]

    def __post_init__(self):
        if not is_morphism(self.kind, self.source, self.target, self.image):
            raise MalformedInputError(
                f"{self.image} is not a {self.kind.value} morphism "
                f"[{self.source}] -> [{self.target}]"
            )

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    @property
    def image_set(self) -> frozenset[int]:
        return frozenset(self.image)

    @property
    def is_increasing(self) -> bool:
        return all(a < b for a, b in zip(self.image, self.image[1:]))

    def then(self, g: "InjectionMorphism") -> "InjectionMorphism":
        return compose(self, g)

    def __str__(self) -> str:
        return format_morphism(self)


def identity(kind: CategoryKind, n: int) -> InjectionMorphism:
    return InjectionMorphism(kind, n, n, tuple(range(1, n + 1)))


def compose(f: InjectionMorphism, g: InjectionMorphism) -> InjectionMorphism:
    """The composite of f: [m]->[n] followed by g: [n]->[r]."""
    if f.kind is not g.kind:
        raise MalformedInputError(f"kind mismatch: {f.kind} vs {g.kind}")
    if f.target != g.source:
        raise MalformedInputError(
            f"object mismatch: f lands in [{f.target}], g starts at [{g.source}]"
        )
    return InjectionMorphism(
        f.kind, f.source, g.target, tuple(g.image[v - 1] for v in f.image)
    )


def hom_set(
    kind: CategoryKind,
    m: int,
    n: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> list[InjectionMorphism]:
    """All morphisms [m] -> [n], sorted lexicographically by image array."""
    if m < 0 or n < 0:
        raise MalformedInputError("objects must be natural numbers")
    if m > n:
        return []
    raw = factorial(n) // factorial(n - m)
    if raw > cap:
        raise ResourceCapError(
            f"hom_set({kind.value}, {m}, {n}): {raw} injections exceeds cap {cap}"
        )
    out = []
    for image in permutations(range(1, n + 1), m):
        if is_morphism(kind, m, n, image):
            out.append(InjectionMorphism(kind, m, n, image))
    return out


def hom_size_formula(kind: CategoryKind, m: int, n: int) -> int:
    """Closed-form hom-set sizes, validated against enumeration in the tests."""
    if m > n:
        return 0
    if m == 0:
        return 1
    from math import comb

    if kind is CategoryKind.FI:
        return factorial(n) // factorial(n - m)
    if kind is CategoryKind.OI:
        return comb(n, m)
    if kind is CategoryKind.BI:
        return n if m == 1 else 2 * comb(n, m)
    if kind is CategoryKind.CI:
        return m * comb(n, m)
    if kind is CategoryKind.SI:
        if m == 1:
            return n
        if m == 2:
            return n * (n - 1)
        return 2 * m * comb(n, m)
    raise AssertionError(kind)


def factorize(f: InjectionMorphism) -> tuple[InjectionMorphism, InjectionMorphism]:
    """Split f into (eps_prime, g) with f = eps_prime after g.

    eps_prime is the unique strictly increasing injection with the same image
    set as f; g is the endomorphism of [m] positioning f's entries inside the
    sorted image.  Both are morphisms of f's kind; if g fails the embedding
    check that would falsify the factorization lemma, so it is raised loudly.
    """
    sorted_image = tuple(sorted(f.image))
    position = {v: i + 1 for i, v in enumerate(sorted_image)}
    g_image = tuple(position[v] for v in f.image)
    if not is_morphism(f.kind, f.source, f.source, g_image):
        raise FalsificationError(
            f"factorization of {f} produced a non-endomorphism g = {g_image}"
        )
    eps_prime = InjectionMorphism(f.kind, f.source, f.target, sorted_image)
    g = InjectionMorphism(f.kind, f.source, f.source, g_image)
    if compose(g, eps_prime) != f:
        raise FalsificationError(f"factorization of {f} does not recompose")
    return eps_prime, g


def endomorphism_group(
    kind: CategoryKind, n: int, verify: bool = True
) -> list[InjectionMorphism]:
    """hom_set(kind, n, n); with verify=True, checked to be a group."""
    ends = hom_set(kind, n, n)
    if verify:
        elems = {e.image for e in ends}
        for a in ends:
            inverse_image = tuple(sorted(range(1, n + 1), key=lambda i: a.image[i - 1]))
            if inverse_image not in elems:
                raise FalsificationError(f"endomorphism {a} has no inverse in the set")
            for b in ends:
                if compose(a, b).image not in elems:
                    raise FalsificationError(
                        f"endomorphisms not closed: {a} then {b}"
                    )
    return ends


_MORPHISM_RE = re.compile(
    r"^\s*(FI|OI|BI|CI|SI)\s+(\d+)\s*->\s*(\d+)\s*:\s*\[([\d,\s]*)\]\s*$",
    re.IGNORECASE,
)


def format_morphism(f: InjectionMorphism) -> str:
    body = ",".join(str(v) for v in f.image)
    return f"{f.kind.value} {f.source}->{f.target} : [{body}]"


def parse_morphism(text: str) -> InjectionMorphism:
    """Parse the `KIND m->n : [i1,i2,...,im]` serialization."""
    m = _MORPHISM_RE.match(text)
    if not m:
        raise MalformedInputError(f"cannot parse morphism: {text!r}")
    kind = CategoryKind.from_string(m.group(1))
    src, tgt = int(m.group(2)), int(m.group(3))
    body = m.group(4).strip()
    image = tuple(int(tok) for tok in body.split(",")) if body else ()
    return InjectionMorphism(kind, src, tgt, image)
