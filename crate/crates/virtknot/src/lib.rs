//! Virtual knot computation from Gauss codes: writhe polynomial, chord and
//! vertex indices, intersection graphs with their rewriting moves,
//! diagram-level Reidemeister and shell moves, equivalence decision by
//! writhe-polynomial equality, and constructive realization of admissible
//! Laurent polynomials.

pub mod cli;
pub mod diagram;
pub mod graph;
pub mod invariants;
pub mod moves;
pub mod realize;
pub(crate) mod trimove;

pub use diagram::{
    diagram_to_json, parse_gauss_code, random_diagram, serialize_gauss_code, ChordId, DiagramError,
    EndpointRef, GaussDiagram, Role,
};
pub use graph::{
    apply_omega, build_intersection_graph, enumerate_omega_sites, export_graph, graphs_isomorphic,
    import_graph_json, GraphError, GraphFormat, IntersectionGraph, OmegaKind, OmegaSite, VertexId,
};
pub use invariants::{
    chord_index, graph_writhe_polynomial, graphs_equivalent, index_profile, is_realizable,
    parse_poly, writhe, writhe_polynomial, IndexProfile, LaurentPolynomial, PolyError,
};
pub use moves::{
    apply_move, bounded_equivalence_search, canonical_cyclic_key, enumerate_moves, fuzz_invariance,
    DiagramMoveSite, FuzzReport, MoveError, MoveKind, MoveTrace, TraceStep,
};
pub use realize::{
    decompose, generator_diagram, realize, GeneratorFamily, GeneratorSpec, RealizeError,
};
