"""Finite orthomodular lattices, probability measures on them, and a search
toolkit for Reichenbachian common causes."""

from .causality import (
    CommonCauseCheck,
    CorrelationWitness,
    NotCorrelated,
    check_common_cause,
    correlated_pairs,
    correlation_from_atoms,
    correlation_witness,
    find_common_causes,
    has_nontrivial_common_cause,
    is_common_cause_closed,
)
from .extend import dyadic_refine, explain_in_extension, verify_embedding
from .greechie import GreechieDiagram, paste, parse_diagram
from .lattice import (
    BooleanLattice,
    LatticeError,
    OrthoLattice,
    TableLattice,
    benzene_ring,
    build_boolean,
    build_mo,
    distributivity_counterexample,
    is_distributive,
    is_orthomodular,
    verify_orthomodular,
)
from .states import (
    InvalidMeasure,
    Measure,
    classify_atomicity,
    is_faithful,
    measure_from_atom_weights,
    phi_atoms,
    q_decompose,
    random_state,
    validate_measure,
)

__version__ = "0.1.0"
