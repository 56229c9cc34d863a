"""Finite relational structures, embeddings, and amalgamation checking.

Built-in structure kinds mirror the five injection categories: plain sets,
linear orders, betweenness, cyclic orders and separation relations, each
induced by a linear or circular arrangement of the universe.  A further
"pair" age models points that are ordered pairs over a base set, carrying
coordinate-equality relations; it is the stock negative example for the
strong amalgamation property.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product

from .actions import FiniteAction, orbits
from .categories import CategoryKind, in_relation
from .errors import MalformedInputError, ResourceCapError

BUILTIN_KINDS = {
    "set": CategoryKind.FI,
    "linear": CategoryKind.OI,
    "betweenness": CategoryKind.BI,
    "cyclic": CategoryKind.CI,
    "separation": CategoryKind.SI,
}

_KIND_RELATION = {
    "linear": ("lt", 2),
    "betweenness": ("btw", 3),
    "cyclic": ("cyc", 3),
    "separation": ("sep", 4),
}


@dataclass(frozen=True)
class FiniteStructure:
    universe: tuple
    signature: tuple  # ((name, arity), ...)
    relations: tuple  # ((name, frozenset of tuples), ...), aligned with signature

    def __post_init__(self):
        uni = set(self.universe)
        if len(uni) != len(self.universe):
            raise MalformedInputError("universe labels must be distinct")
        rels = dict(self.relations)
        for name, arity in self.signature:
            for tup in rels.get(name, frozenset()):
                if len(tup) != arity or any(x not in uni for x in tup):
                    raise MalformedInputError(
                        f"tuple {tup} invalid for relation {name}/{arity}"
                    )

    @property
    def size(self) -> int:
        return len(self.universe)

    def relation(self, name) -> frozenset:
        return dict(self.relations)[name]

    def induced(self, subset) -> "FiniteStructure":
        subset = tuple(x for x in self.universe if x in set(subset))
        keep = set(subset)
        rels = tuple(
            (name, frozenset(t for t in tuples if all(x in keep for x in t)))
            for name, tuples in self.relations
        )
        return FiniteStructure(subset, self.signature, rels)

    def canonical_form(self):
        """Isomorphism invariant: minimal relation encoding over relabelings."""
        labels = list(range(len(self.universe)))
        best = None
        for perm in permutations(labels):
            relabel = dict(zip(self.universe, perm))
            enc = tuple(
                (name, tuple(sorted(tuple(relabel[x] for x in t) for t in tuples)))
                for name, tuples in self.relations
            )
            if best is None or enc < best:
                best = enc
        return (len(self.universe), self.signature, best)


def make_structure(universe, signature, relations) -> FiniteStructure:
    sig = tuple((str(n), int(a)) for n, a in signature)
    rels = {str(n): frozenset(map(tuple, ts)) for n, ts in dict(relations).items()}
    aligned = tuple((name, rels.get(name, frozenset())) for name, _ in sig)
    return FiniteStructure(tuple(universe), sig, aligned)


def plain_set_structure(labels) -> FiniteStructure:
    return make_structure(labels, (), {})


def arrangement_structure(kind_name: str, arrangement) -> FiniteStructure:
    """Structure on the given labels induced by a linear/circular arrangement."""
    if kind_name == "set":
        return plain_set_structure(arrangement)
    name, arity = _KIND_RELATION[kind_name]
    kind = BUILTIN_KINDS[kind_name]
    arrangement = tuple(arrangement)
    n = len(arrangement)
    pos = {x: i + 1 for i, x in enumerate(arrangement)}
    tuples = frozenset(
        t
        for t in permutations(arrangement, arity)
        if in_relation(kind, n, tuple(pos[x] for x in t))
    )
    return make_structure(sorted(arrangement), ((name, arity),), {name: tuples})


@dataclass(frozen=True)
class StructureEmbedding:
    source: FiniteStructure
    target: FiniteStructure
    images: tuple  # aligned with source.universe

    def __post_init__(self):
        if not _embedding_ok(self.source, self.target, self.images):
            raise MalformedInputError("not an embedding")

    def apply(self, x):
        return self.images[self.source.universe.index(x)]

    @property
    def mapping(self) -> dict:
        return dict(zip(self.source.universe, self.images))


def _embedding_ok(A: FiniteStructure, B: FiniteStructure, images) -> bool:
    if len(images) != len(A.universe):
        return False
    if len(set(images)) != len(images):
        return False
    tgt = set(B.universe)
    if any(y not in tgt for y in images):
        return False
    if A.signature != B.signature:
        return False
    m = dict(zip(A.universe, images))
    b_rels = dict(B.relations)
    for name, arity in A.signature:
        ra = A.relation(name)
        rb = b_rels[name]
        for tup in product(A.universe, repeat=arity):
            if (tup in ra) != (tuple(m[x] for x in tup) in rb):
                return False
    return True


def enumerate_embeddings(A: FiniteStructure, B: FiniteStructure) -> list[StructureEmbedding]:
    """All embeddings A -> B, ordered by image tuple over B's universe order."""
    out = []
    for images in permutations(B.universe, len(A.universe)):
        if _embedding_ok(A, B, images):
            out.append(StructureEmbedding(A, B, images))
    return out


def identity_embedding(A: FiniteStructure) -> StructureEmbedding:
    return StructureEmbedding(A, A, A.universe)


def automorphisms(A: FiniteStructure) -> list[StructureEmbedding]:
    return enumerate_embeddings(A, A)


# -- canonical structures from actions ----------------------------------------


def canonical_structure(action: FiniteAction, max_arity: int) -> FiniteStructure:
    """Universe [N] with one relation per orbit on each tuple power <= max_arity."""
    if max_arity > action.domain_size:
        raise MalformedInputError("max_arity exceeds domain size")
    signature = []
    relations = {}
    for n in range(1, max_arity + 1):
        for i, orb in enumerate(orbits(action, n, "power")):
            name = f"orbit{n}_{i}"
            signature.append((name, n))
            relations[name] = frozenset(orb.elements)
    return make_structure(range(1, action.domain_size + 1), signature, relations)


def fixed_point_condition(action: FiniteAction, gamma) -> bool:
    """True iff the pointwise stabilizer of gamma fixes nothing outside it."""
    gamma = set(gamma)
    if not gamma <= set(range(1, action.domain_size + 1)):
        raise MalformedInputError("gamma must be a subset of the domain")
    stab = action.pointwise_stabilizer(gamma)
    for x in range(1, action.domain_size + 1):
        if x in gamma:
            continue
        if all(g[x - 1] == x for g in stab):
            return False
    return True


# -- ages ----------------------------------------------------------------------


class BuiltinAge:
    """Membership by searching for an inducing arrangement; enumeration of all
    age structures on a fixed label set, deduplicated."""

    def __init__(self, kind_name: str):
        if kind_name not in BUILTIN_KINDS:
            raise MalformedInputError(f"unknown built-in age {kind_name!r}")
        self.kind_name = kind_name

    @property
    def signature(self):
        if self.kind_name == "set":
            return ()
        return (_KIND_RELATION[self.kind_name],)

    def structures_on(self, labels):
        labels = tuple(labels)
        if self.kind_name == "set":
            yield plain_set_structure(labels)
            return
        seen = set()
        for arr in permutations(labels):
            s = arrangement_structure(self.kind_name, arr)
            key = s.relations
            if key not in seen:
                seen.add(key)
                yield s

    def contains(self, s: FiniteStructure) -> bool:
        if s.signature != self.signature:
            return False
        if self.kind_name == "set":
            return True
        for arr in permutations(s.universe):
            if arrangement_structure(self.kind_name, arr).relations == s.relations:
                return True
        return False


def _set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


class PairAge:
    """Structures whose points are distinct ordered pairs over a base set.

    The signature records which coordinates coincide: a unary relation for
    diagonal points and four binary coordinate-equality relations.  A labeled
    structure belongs to the age iff some identification of the 2k coordinate
    slots realizes exactly the recorded relations with all pairs distinct.
    """

    signature = (
        ("diag", 1),
        ("eq_ff", 2),
        ("eq_fs", 2),
        ("eq_sf", 2),
        ("eq_ss", 2),
    )

    @staticmethod
    def from_pairs(labels, pairs) -> FiniteStructure:
        labels = tuple(labels)
        pairs = [tuple(p) for p in pairs]
        if len(labels) != len(pairs) or len(set(pairs)) != len(pairs):
            raise MalformedInputError("need one distinct pair per label")
        coord = dict(zip(labels, pairs))
        rels = {
            "diag": frozenset((x,) for x in labels if coord[x][0] == coord[x][1]),
            "eq_ff": frozenset(),
            "eq_fs": frozenset(),
            "eq_sf": frozenset(),
            "eq_ss": frozenset(),
        }
        rels = {k: set(v) for k, v in rels.items()}
        for x, y in permutations(labels, 2):
            (a, b), (c, d) = coord[x], coord[y]
            if a == c:
                rels["eq_ff"].add((x, y))
            if a == d:
                rels["eq_fs"].add((x, y))
            if b == c:
                rels["eq_sf"].add((x, y))
            if b == d:
                rels["eq_ss"].add((x, y))
        return make_structure(labels, PairAge.signature, rels)

    def structures_on(self, labels):
        labels = tuple(labels)
        k = len(labels)
        slots = list(range(2 * k))
        seen = set()
        for part in _set_partitions(slots):
            cls = {}
            for i, block in enumerate(part):
                for s in block:
                    cls[s] = i
            pairs = [(cls[2 * i], cls[2 * i + 1]) for i in range(k)]
            if len(set(pairs)) != k:
                continue
            s = PairAge.from_pairs(labels, pairs)
            if s.relations not in seen:
                seen.add(s.relations)
                yield s

    def contains(self, s: FiniteStructure) -> bool:
        if s.signature != PairAge.signature:
            return False
        return any(t.relations == s.relations for t in self.structures_on(s.universe))


def age_for(name: str):
    if name == "pair":
        return PairAge()
    return BuiltinAge(name)


# -- amalgamation ---------------------------------------------------------------


@dataclass(frozen=True)
class AmalgamationProblem:
    sigma: FiniteStructure
    gamma1: FiniteStructure
    gamma2: FiniteStructure
    f1: StructureEmbedding
    f2: StructureEmbedding
    age: object

    def __post_init__(self):
        if self.f1.source != self.sigma or self.f1.target != self.gamma1:
            raise MalformedInputError("f1 must embed sigma into gamma1")
        if self.f2.source != self.sigma or self.f2.target != self.gamma2:
            raise MalformedInputError("f2 must embed sigma into gamma2")
        for s in (self.sigma, self.gamma1, self.gamma2):
            if not self.age.contains(s):
                raise MalformedInputError("structure outside the age")


@dataclass(frozen=True)
class Amalgam:
    delta: FiniteStructure
    g1: StructureEmbedding
    g2: StructureEmbedding


def _pushout_labels(p: AmalgamationProblem):
    """Labels for the set pushout, plus the two canonical injections."""
    f1 = p.f1.mapping
    f2 = p.f2.mapping
    inv1 = {v: k for k, v in f1.items()}
    inv2 = {v: k for k, v in f2.items()}
    labels = [("S", a) for a in p.sigma.universe]
    m1 = {f1[a]: ("S", a) for a in p.sigma.universe}
    m2 = {f2[a]: ("S", a) for a in p.sigma.universe}
    for x in p.gamma1.universe:
        if x not in inv1:
            m1[x] = ("L", x)
            labels.append(("L", x))
    for x in p.gamma2.universe:
        if x not in inv2:
            m2[x] = ("R", x)
            labels.append(("R", x))
    return labels, m1, m2


def solve_amalgamation(
    p: AmalgamationProblem, strong: bool = True, label_cap: int = 10
) -> Amalgam | None:
    """Search for a (strong) amalgam of the problem within the age.

    For strong the universe is fixed to the set pushout; for weak, every way
    of additionally identifying points of the two sides is tried as well.
    Returns the first amalgam in a deterministic search order, or None.
    """
    labels, m1, m2 = _pushout_labels(p)
    if len(labels) > label_cap:
        raise ResourceCapError(f"pushout universe of size {len(labels)} exceeds cap")

    def try_universe(univ, map1, map2):
        img1 = tuple(map1[x] for x in p.gamma1.universe)
        img2 = tuple(map2[x] for x in p.gamma2.universe)
        for delta in p.age.structures_on(univ):
            if _embedding_ok(p.gamma1, delta, img1) and _embedding_ok(
                p.gamma2, delta, img2
            ):
                return Amalgam(
                    delta,
                    StructureEmbedding(p.gamma1, delta, img1),
                    StructureEmbedding(p.gamma2, delta, img2),
                )
        return None

    found = try_universe(tuple(labels), m1, m2)
    if found is not None or strong:
        return found

    # weak search: merge some of the private points of the two sides
    left = [x for x in labels if x[0] == "L"]
    right = [x for x in labels if x[0] == "R"]
    for k in range(1, min(len(left), len(right)) + 1):
        for lsel in combinations(left, k):
            for rsel in permutations(right, k):
                merge = dict(zip(lsel, rsel))
                univ = tuple(x for x in labels if x not in merge)
                map1 = {x: merge.get(y, y) for x, y in m1.items()}
                map2 = dict(m2)
                found = try_universe(univ, map1, map2)
                if found is not None:
                    return found
    return None


def _iso_classes(age, size: int):
    classes = {}
    for s in age.structures_on(tuple(range(1, size + 1))):
        key = s.canonical_form()
        if key not in classes:
            classes[key] = s
    return [classes[k] for k in sorted(classes)]


@dataclass(frozen=True)
class SapReport:
    holds: bool
    certificate: AmalgamationProblem | None


def age_has_sap(age, size_cap: int) -> SapReport:
    """Exhaustive strong-amalgamation check over diagrams with sides <= cap.

    Problems are enumerated up to isomorphism of the three structures and up
    to automorphisms of the sides acting on the embedding pair.
    """
    if size_cap < 1:
        raise MalformedInputError("size_cap must be >= 1")
    if isinstance(age, str):
        age = age_for(age)
    by_size = {k: _iso_classes(age, k) for k in range(0, size_cap + 1)}
    for s_size in range(0, size_cap + 1):
        for sigma in by_size[s_size]:
            for n1 in range(s_size, size_cap + 1):
                for gamma1 in by_size[n1]:
                    embs1 = enumerate_embeddings(sigma, gamma1)
                    if not embs1:
                        continue
                    auts1 = automorphisms(gamma1)
                    for n2 in range(s_size, size_cap + 1):
                        for gamma2 in by_size[n2]:
                            embs2 = enumerate_embeddings(sigma, gamma2)
                            if not embs2:
                                continue
                            auts2 = automorphisms(gamma2)
                            seen = set()
                            for f1 in embs1:
                                for f2 in embs2:
                                    key = min(
                                        (
                                            tuple(a1.apply(y) for y in f1.images),
                                            tuple(a2.apply(y) for y in f2.images),
                                        )
                                        for a1 in auts1
                                        for a2 in auts2
                                    )
                                    if key in seen:
                                        continue
                                    seen.add(key)
                                    problem = AmalgamationProblem(
                                        sigma, gamma1, gamma2, f1, f2, age
                                    )
                                    if solve_amalgamation(problem, strong=True) is None:
                                        return SapReport(False, problem)
    return SapReport(True, None)


# -- text format -----------------------------------------------------------------


def format_structure(s: FiniteStructure) -> str:
    lines = ["universe = " + " ".join(str(x) for x in s.universe)]
    for (name, arity), (_, tuples) in zip(s.signature, s.relations):
        body = " ".join(
            "(" + ",".join(str(x) for x in t) + ")" for t in sorted(tuples)
        )
        lines.append(f"{name}/{arity}: {body}".rstrip())
    return "\n".join(lines)


def parse_structure(text: str) -> FiniteStructure:
    """Parse `universe = a b c` followed by `R/3: (a,b,c) (b,a,c) ...` lines."""
    lines = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines or not lines[0].startswith("universe"):
        raise MalformedInputError("structure file must start with `universe = ...`")
    _, _, rest = lines[0].partition("=")
    universe = tuple(rest.split())
    signature = []
    relations = {}
    for ln in lines[1:]:
        head, _, body = ln.partition(":")
        if "/" not in head:
            raise MalformedInputError(f"bad relation header: {ln!r}")
        name, _, arity = head.strip().partition("/")
        tuples = set()
        for tok in body.split():
            if not (tok.startswith("(") and tok.endswith(")")):
                raise MalformedInputError(f"bad tuple token: {tok!r}")
            tuples.add(tuple(t.strip() for t in tok[1:-1].split(",") if t.strip()))
        signature.append((name.strip(), int(arity)))
        relations[name.strip()] = tuples
    return make_structure(universe, signature, relations)


def parse_embedding_file(text: str) -> StructureEmbedding:
    """Embedding file: `[source]` and `[target]` structure sections and a
    `[map]` section with `a -> x` lines."""
    sections = {}
    current = None
    for ln in text.splitlines():
        stripped = ln.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            current = stripped[1:-1].lower()
            sections[current] = []
        elif current is not None:
            sections[current].append(ln)
    for needed in ("source", "target", "map"):
        if needed not in sections:
            raise MalformedInputError(f"embedding file missing [{needed}] section")
    src = parse_structure("\n".join(sections["source"]))
    tgt = parse_structure("\n".join(sections["target"]))
    mapping = {}
    for ln in sections["map"]:
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        a, _, b = ln.partition("->")
        mapping[a.strip()] = b.strip()
    images = tuple(mapping.get(x) for x in src.universe)
    if any(v is None for v in images):
        raise MalformedInputError("map section does not cover the source universe")
    return StructureEmbedding(src, tgt, images)
