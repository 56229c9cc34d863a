"""orbitlab: finite combinatorics of injection categories, permutation
actions, amalgamation, orbit categories, and equivariant module experiments."""

from .errors import (
    FalsificationError,
    MalformedInputError,
    OrbitlabError,
    ResourceCapError,
)
from .categories import (
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
from .actions import (
    FiniteAction,
    FullnessWitness,
    GrowthProfile,
    LemmaReport,
    Orbit,
    growth_profile,
    is_t_dense,
    lemma_equivalence_check,
    mulclose,
    orbit_count,
    orbits,
    parse_group_file,
    perm_from_cycles,
    restriction_fullness_witness,
    same_orbits,
    stirling2,
    symmetric_action,
    trivial_action,
)
from .structures import (
    AmalgamationProblem,
    BuiltinAge,
    FiniteStructure,
    PairAge,
    SapReport,
    StructureEmbedding,
    age_for,
    age_has_sap,
    arrangement_structure,
    canonical_structure,
    enumerate_embeddings,
    fixed_point_condition,
    format_structure,
    make_structure,
    parse_embedding_file,
    parse_structure,
    solve_amalgamation,
)
from .orbitcat import (
    NoExtensionError,
    OrbitCategory,
    OrbitMorphism,
    OrbitObject,
    PhiIsoReport,
    orbit_hom,
    phi,
    phi_iso_report,
)
from .polynomials import (
    GREVLEX,
    LEX,
    CoefficientField,
    MonomialOrder,
    Polynomial,
    QQ,
    parse_polynomial,
)
from .modlab import (
    ChainReport,
    GroebnerBasis,
    ModuleVector,
    PresheafElement,
    TruncatedSubmodule,
    apply_morphism,
    chain_experiment,
    groebner_basis,
    membership,
    parse_chain_file,
    parse_element_line,
    presheaf_element,
    restriction_decomposition_check,
    width_component,
)

__version__ = "0.1.0"
