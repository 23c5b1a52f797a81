"""Quantum optical experiments with probabilistic n-photon sources as weighted hypergraphs."""
from .hypergraph import (
    Hyperedge, Hypergraph, HypergraphError, Incidence, Vertex,
    build_hypergraph, canonicalize, dumps, loads, polar_weight,
)
from .matching import (
    MatchingOverflowError, MatchingReport, brute_force_pm_oracle, enumerate_perfect_matchings,
    has_perfect_matching, max_disjoint_pm_family,
)
from .states import (
    QuantumState, SrvTriple, StateError, detection_probability, emission_state, fidelity,
    from_kets, ghz_state, post_selected_state, srv, srv_constructible, w_state,
)
from .optics import (
    OpticalElement, apply_beam_splitter, apply_mode_shifter, apply_path_identity,
    apply_phase_shifter, interference_sweep,
)
from .instances import (
    InstanceId, designer_search, gen_instance, max_ghz_dimension, verify_design,
)

__version__ = "0.1.0"
