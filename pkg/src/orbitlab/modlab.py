"""Equivariant-module laboratory.

Free presheaves with generator width n have, at evaluation width s, one free
polynomial-module summand per category morphism [n] -> [s]; a category
morphism out of [s] acts by substituting variables in coefficients and
post-composing the basis morphisms.  Width components of finitely generated
subpresheaves are handled as submodules of a free module over the width-s
polynomial ring, with a straightforward Buchberger engine (position-over-term
extension of the chosen monomial order, basis positions ordered by the
lexicographic hom-set order).

Everything is truncated: statements are certified only up to a width W and,
when Buchberger pairs are discarded, up to a degree bound D.  Both appear in
every report.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .categories import (
    CategoryKind,
    InjectionMorphism,
    compose,
    endomorphism_group,
    factorize,
    hom_set,
)
from .errors import MalformedInputError, ResourceCapError
from .polynomials import (
    GREVLEX,
    CoefficientField,
    MonomialOrder,
    Polynomial,
    QQ,
    monomial_degree,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    parse_polynomial,
)

DEFAULT_PAIR_CAP = 20_000


# -- free-module vectors and Buchberger ---------------------------------------


class ModuleVector:
    """Element of R^rank with R the width-variable polynomial ring; terms map
    (position, monomial) to a nonzero coefficient."""

    __slots__ = ("width", "field", "rank", "terms")

    def __init__(self, width, field, rank, terms=None):
        self.width = width
        self.field = field
        self.rank = rank
        clean = {}
        for (pos, mono), c in (terms or {}).items():
            if not 0 <= pos < rank:
                raise MalformedInputError(f"position {pos} outside rank {rank}")
            c = field.coerce(c)
            if c != field.zero:
                clean[(pos, tuple(mono))] = c
        self.terms = clean

    def is_zero(self):
        return not self.terms

    def _check(self, other):
        if (self.width, self.field, self.rank) != (other.width, other.field, other.rank):
            raise MalformedInputError("module vector shape mismatch")

    def __add__(self, other):
        self._check(other)
        f = self.field
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = f.add(terms.get(k, f.zero), c)
        return ModuleVector(self.width, f, self.rank, terms)

    def __neg__(self):
        f = self.field
        return ModuleVector(
            self.width, f, self.rank, {k: f.neg(c) for k, c in self.terms.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def term_mul(self, mono, c):
        f = self.field
        c = f.coerce(c)
        mono = tuple(mono)
        return ModuleVector(
            self.width,
            f,
            self.rank,
            {
                (pos, tuple(a + b for a, b in zip(m, mono))): f.mul(cc, c)
                for (pos, m), cc in self.terms.items()
            },
        )

    def scale(self, c):
        return self.term_mul((0,) * self.width, c)

    def monic(self, order):
        (_, _), lc = self.leading(order)
        return self.scale(self.field.inv(lc))

    def leading(self, order: MonomialOrder):
        """Position-over-term: lower positions dominate."""
        key = max(self.terms, key=lambda k: (-k[0], order.key(k[1])))
        return key, self.terms[key]

    def degree(self):
        return max((monomial_degree(m) for _, m in self.terms), default=0)

    def __eq__(self, other):
        return (
            isinstance(other, ModuleVector)
            and self.width == other.width
            and self.field == other.field
            and self.rank == other.rank
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.width, self.rank, frozenset(self.terms.items())))

    def __repr__(self):
        return f"ModuleVector({self.terms})"


def normal_form(v: ModuleVector, basis, order: MonomialOrder) -> ModuleVector:
    """Remainder of multivariate division of v by the basis."""
    f = v.field
    remainder = {}
    work = v
    while not work.is_zero():
        (pos, mono), c = work.leading(order)
        reduced = False
        for g in basis:
            (gpos, gmono), gc = g.leading(order)
            if gpos == pos and monomial_divides(gmono, mono):
                factor = monomial_div(mono, gmono)
                coeff = f.mul(c, f.inv(gc))
                work = work - g.term_mul(factor, coeff)
                reduced = True
                break
        if not reduced:
            remainder[(pos, mono)] = c
            work = ModuleVector(
                v.width, f, v.rank, {k: cc for k, cc in work.terms.items() if k != (pos, mono)}
            )
    return ModuleVector(v.width, f, v.rank, remainder)


@dataclass(frozen=True)
class GroebnerBasis:
    vectors: tuple  # reduced, monic, deterministic order
    order: MonomialOrder
    degree_capped: bool  # True when S-pairs above the degree cap were skipped

    def contains(self, v: ModuleVector) -> bool:
        return normal_form(v, self.vectors, self.order).is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and self.order == other.order
            and set(self.vectors) == set(other.vectors)
        )

    def __hash__(self):
        return hash((self.order, frozenset(self.vectors)))


def groebner_basis(
    generators,
    order: MonomialOrder = GREVLEX,
    degree_cap: int | None = None,
    pair_cap: int = DEFAULT_PAIR_CAP,
) -> GroebnerBasis:
    """Reduced Groebner basis of the submodule generated by the vectors.

    S-pairs are only formed between elements with the same leading position.
    With a degree cap, pairs whose lcm degree exceeds the cap are dropped and
    the result is flagged as degree-truncated.
    """
    basis = [g for g in generators if not g.is_zero()]
    capped = False
    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    processed = 0
    while pairs:
        processed += 1
        if processed > pair_cap:
            raise ResourceCapError(f"S-pair queue exceeded cap {pair_cap}")
        i, j = pairs.pop(0)
        gi, gj = basis[i], basis[j]
        (pi_, mi), ci = gi.leading(order)
        (pj_, mj), cj = gj.leading(order)
        if pi_ != pj_:
            continue
        lcm = monomial_lcm(mi, mj)
        if degree_cap is not None and monomial_degree(lcm) > degree_cap:
            capped = True
            continue
        f = gi.field
        s = gi.term_mul(monomial_div(lcm, mi), f.inv(ci)) - gj.term_mul(
            monomial_div(lcm, mj), f.inv(cj)
        )
        r = normal_form(s, basis, order)
        if not r.is_zero():
            basis.append(r)
            pairs.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
    return GroebnerBasis(_reduce_basis(basis, order), order, capped)


def _reduce_basis(basis, order: MonomialOrder) -> tuple:
    basis = [g for g in basis if not g.is_zero()]
    # drop elements whose leading term another leading term divides
    kept = []
    for i, g in enumerate(basis):
        (pos, mono), _ = g.leading(order)
        redundant = False
        for j, h in enumerate(basis):
            if i == j:
                continue
            (hpos, hmono), _ = h.leading(order)
            if hpos == pos and monomial_divides(hmono, mono):
                if hmono != mono or j < i:
                    redundant = True
                    break
        if not redundant:
            kept.append(g)
    # tail-reduce each survivor against the others and normalize
    reduced = []
    for i, g in enumerate(kept):
        others = kept[:i] + kept[i + 1 :]
        r = normal_form(g, others, order)
        if not r.is_zero():
            reduced.append(r.monic(order))
    reduced.sort(key=lambda v: sorted(v.terms))
    return tuple(reduced)


def submodule_dimension_upto(
    gb: GroebnerBasis, width: int, rank: int, degree: int
) -> int:
    """k-dimension of the degree <= `degree` slice of the submodule, counted
    via leading terms (exact for degree-compatible orders, a profile metric
    for lex)."""
    leads = [g.leading(gb.order)[0] for g in gb.vectors]
    count = 0
    for pos in range(rank):
        for mono in _monomials_upto(width, degree):
            if any(p == pos and monomial_divides(m, mono) for p, m in leads):
                count += 1
    return count


def _monomials_upto(width: int, degree: int):
    def rec(prefix, remaining, slots):
        if slots == 0:
            yield tuple(prefix)
            return
        for e in range(remaining + 1):
            yield from rec(prefix + [e], remaining - e, slots - 1)

    yield from rec([], degree, width)


# -- presheaf elements ---------------------------------------------------------


@dataclass(frozen=True)
class PresheafElement:
    """Width-s value of an element of the free presheaf with generator width n:
    a coefficient polynomial in the width-s ring for each morphism [n] -> [s]."""

    kind: CategoryKind
    gen_width: int
    width: int
    coeffs: tuple  # ((InjectionMorphism, Polynomial), ...) sorted by image

    def __post_init__(self):
        for eps, poly in self.coeffs:
            if eps.kind is not self.kind or eps.source != self.gen_width:
                raise MalformedInputError(f"basis morphism {eps} has wrong shape")
            if eps.target != self.width or poly.width != self.width:
                raise MalformedInputError("coefficient lives in the wrong ring")

    @property
    def coeff_map(self) -> dict:
        return dict(self.coeffs)

    @property
    def field(self) -> CoefficientField:
        for _, poly in self.coeffs:
            return poly.field
        return QQ

    def is_zero(self):
        return all(p.is_zero() for _, p in self.coeffs)


def presheaf_element(kind, gen_width, width, coeff_map) -> PresheafElement:
    items = [
        (eps, poly)
        for eps, poly in coeff_map.items()
        if not poly.is_zero()
    ]
    items.sort(key=lambda it: it[0].image)
    return PresheafElement(kind, gen_width, width, tuple(items))


def apply_morphism(v: PresheafElement, pi: InjectionMorphism) -> PresheafElement:
    """Push v along pi: [s] -> [r]; coefficients get pi's substitution and
    basis morphisms are post-composed."""
    if pi.kind is not v.kind:
        raise MalformedInputError("kind mismatch")
    if pi.source != v.width:
        raise MalformedInputError(
            f"morphism starts at [{pi.source}], element has width {v.width}"
        )
    out = {}
    for eps, poly in v.coeffs:
        key = compose(eps, pi)
        moved = poly.substitute(pi.image, pi.target)
        out[key] = out[key] + moved if key in out else moved
    return presheaf_element(v.kind, v.gen_width, pi.target, out)


def component_basis(kind: CategoryKind, gen_width: int, width: int) -> list:
    """Ordered free-module basis of the width component: the hom-set in its
    canonical lexicographic order."""
    return hom_set(kind, gen_width, width)


def to_vector(v: PresheafElement, basis=None) -> ModuleVector:
    basis = basis if basis is not None else component_basis(v.kind, v.gen_width, v.width)
    index = {eps: i for i, eps in enumerate(basis)}
    terms = {}
    for eps, poly in v.coeffs:
        pos = index[eps]
        for mono, c in poly.terms.items():
            terms[(pos, mono)] = c
    return ModuleVector(v.width, v.field, len(basis), terms)


def from_vector(
    kind, gen_width, vec: ModuleVector, basis=None
) -> PresheafElement:
    basis = basis if basis is not None else component_basis(kind, gen_width, vec.width)
    polys = {}
    for (pos, mono), c in vec.terms.items():
        eps = basis[pos]
        poly = polys.get(eps, Polynomial.zero(vec.width, vec.field))
        polys[eps] = poly + Polynomial.monomial(vec.width, mono, c, vec.field)
    return presheaf_element(kind, gen_width, vec.width, polys)


@dataclass(frozen=True)
class TruncatedSubmodule:
    """Width component of the subpresheaf generated by the given elements."""

    kind: CategoryKind
    gen_width: int
    generators: tuple
    width: int
    basis: tuple  # morphisms indexing free-module positions
    groebner: GroebnerBasis

    @property
    def degree_capped(self) -> bool:
        return self.groebner.degree_capped


def width_component(
    kind: CategoryKind,
    generators,
    width: int,
    order: MonomialOrder = GREVLEX,
    degree_cap: int | None = None,
) -> TruncatedSubmodule:
    """Span at the given width of all morphism-images of the generators."""
    generators = tuple(generators)
    gen_widths = {g.gen_width for g in generators}
    if len(gen_widths) > 1:
        raise MalformedInputError("generators must share one generator width")
    gen_width = gen_widths.pop() if gen_widths else 0
    for g in generators:
        if g.kind is not kind:
            raise MalformedInputError("generator kind mismatch")
    # a generator at width > `width` has no morphisms into [width] and
    # contributes nothing; the hom-set loop below handles that uniformly
    basis = tuple(component_basis(kind, gen_width, width))
    vectors = []
    for g in generators:
        for pi in hom_set(kind, g.width, width):
            vectors.append(to_vector(apply_morphism(g, pi), basis))
    gb = groebner_basis(vectors, order, degree_cap)
    return TruncatedSubmodule(kind, gen_width, generators, width, basis, gb)


def membership(v: PresheafElement, M: TruncatedSubmodule) -> bool:
    if v.kind is not M.kind or v.gen_width != M.gen_width:
        raise MalformedInputError("element and submodule have different shapes")
    if v.width != M.width:
        raise MalformedInputError(
            f"element width {v.width} != component width {M.width}"
        )
    return M.groebner.contains(to_vector(v, M.basis))


# -- chain experiments ------------------------------------------------------------


@dataclass(frozen=True)
class WidthChainResult:
    width: int
    first_stable_index: int  # 1-based; earliest index whose component persists
    rank_profile: tuple  # leading-term dimension count per chain index
    monotone: bool  # consecutive components verified nested
    degree_capped: bool

    @property
    def stabilized(self) -> bool:
        """The component sequence is verified ascending and constant from the
        first stable index on; a violation would be a falsification and is
        surfaced through this flag."""
        return self.monotone and all(
            a <= b for a, b in zip(self.rank_profile, self.rank_profile[1:])
        )


@dataclass(frozen=True)
class ChainReport:
    kind: CategoryKind
    max_width: int
    degree_cap: int
    order: MonomialOrder
    results: tuple  # WidthChainResult per width 1..max_width

    @property
    def all_stabilized(self) -> bool:
        return all(r.stabilized for r in self.results)

    @property
    def width_uniform_index(self) -> bool:
        return len({r.first_stable_index for r in self.results}) == 1

    def to_json_obj(self):
        return [
            {
                "width": r.width,
                "chain_index": r.first_stable_index,
                "component_rank_profile": list(r.rank_profile),
                "stabilized": r.stabilized,
                "degree_capped": r.degree_capped,
            }
            for r in self.results
        ]


def chain_experiment(
    kind: CategoryKind,
    chain,
    max_width: int,
    degree_cap: int,
    order: MonomialOrder = GREVLEX,
) -> ChainReport:
    """Track an ascending chain of generator sets across widths.

    Each chain entry must contain the previous one (subobject ascent); for
    each width the report gives the earliest index from which the width
    component never changes again inside the window, plus a dimension
    profile of the degree-truncated components.
    """
    chain = [tuple(step) for step in chain]
    if not chain:
        raise MalformedInputError("empty chain")
    for prev, cur in zip(chain, chain[1:]):
        if not set(prev) <= set(cur):
            raise MalformedInputError("chain generator sets must be ascending")
    results = []
    for width in range(1, max_width + 1):
        components = [
            width_component(kind, step, width, order, degree_cap) for step in chain
        ]
        gbs = [c.groebner for c in components]
        first_stable = len(chain)
        for i in range(len(chain) - 1, -1, -1):
            if gbs[i] == gbs[-1]:
                first_stable = i + 1
            else:
                break
        rank = len(components[0].basis)
        profile = tuple(
            submodule_dimension_upto(gb, width, rank, degree_cap) for gb in gbs
        )
        monotone = all(
            all(later.contains(v) for v in earlier.vectors)
            for earlier, later in zip(gbs, gbs[1:])
        )
        results.append(
            WidthChainResult(
                width,
                first_stable,
                profile,
                monotone,
                any(gb.degree_capped for gb in gbs),
            )
        )
    return ChainReport(kind, max_width, degree_cap, order, tuple(results))


# -- restriction decomposition ------------------------------------------------------


@dataclass(frozen=True)
class RestrictionReport:
    kind: CategoryKind
    gen_width: int
    width: int
    ok: bool
    classes: tuple  # ((g image, tuple of morphism images), ...)
    failures: tuple


def restriction_decomposition_check(
    kind: CategoryKind, gen_width: int, width: int
) -> RestrictionReport:
    """Partition the hom-set by the endomorphism factor of the factorization.

    Verifies the class count equals the endomorphism group order, each class
    is in increasing-injection bijection with the OI hom-set, and increasing
    post-composition preserves classes.
    """
    if gen_width > width:
        raise MalformedInputError("need gen_width <= width")
    homs = hom_set(kind, gen_width, width)
    classes: dict = {}
    for eps in homs:
        eps_prime, g = factorize(eps)
        classes.setdefault(g.image, []).append((eps, eps_prime))
    ends = endomorphism_group(kind, gen_width, verify=False)
    oi_count = len(hom_set(CategoryKind.OI, gen_width, width))
    failures = []
    if len(classes) != len(ends):
        failures.append(
            f"{len(classes)} classes but {len(ends)} endomorphisms"
        )
    for g_image, members in classes.items():
        eps_primes = {ep.image for _, ep in members}
        if len(members) != oi_count or len(eps_primes) != oi_count:
            failures.append(
                f"class of g={g_image} has {len(members)} members, expected {oi_count}"
            )
    for pi in hom_set(CategoryKind.OI, width, width + 1):
        pi_kind = InjectionMorphism(kind, width, width + 1, pi.image)
        for g_image, members in classes.items():
            for eps, _ in members:
                _, g2 = factorize(compose(eps, pi_kind))
                if g2.image != g_image:
                    failures.append(
                        f"post-composition by {pi.image} moved {eps.image} "
                        f"from class {g_image} to {g2.image}"
                    )
    ordered = tuple(
        (g_image, tuple(eps.image for eps, _ in classes[g_image]))
        for g_image in sorted(classes)
    )
    return RestrictionReport(
        kind, gen_width, width, not failures, ordered, tuple(failures)
    )


# -- element files ---------------------------------------------------------------


def parse_element_line(
    line: str, field: CoefficientField = QQ
) -> PresheafElement:
    """One line `KIND n s : [image] : polynomial` describing a single term."""
    parts = line.split(":", 2)
    if len(parts) != 3:
        raise MalformedInputError(f"bad element line: {line!r}")
    head = parts[0].split()
    if len(head) != 3:
        raise MalformedInputError(f"bad element header: {parts[0]!r}")
    kind = CategoryKind.from_string(head[0])
    n, s = int(head[1]), int(head[2])
    image_text = parts[1].strip()
    if not (image_text.startswith("[") and image_text.endswith("]")):
        raise MalformedInputError(f"bad image: {image_text!r}")
    image = tuple(
        int(tok) for tok in image_text[1:-1].split(",") if tok.strip()
    )
    eps = InjectionMorphism(kind, n, s, image)
    poly = parse_polynomial(parts[2], s, field)
    return presheaf_element(kind, n, s, {eps: poly})


def parse_chain_file(text: str, field: CoefficientField = QQ) -> list:
    """Chain file: element lines, with `--` lines separating chain steps.
    Steps accumulate: each step's generators are added to the previous set."""
    steps = [[]]
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        if set(ln) == {"-"}:
            steps.append([])
            continue
        steps[-1].append(parse_element_line(ln, field))
    chain = []
    acc = []
    for step in steps:
        acc = acc + step
        chain.append(tuple(acc))
    return chain
