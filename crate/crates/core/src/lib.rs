//! Certified upper bounds on simplicial complexity `SC^b_c(K)`.
//!
//! The pipeline: build `Sd^b(K×K)` ([`construct`]), search for a cover by
//! subcomplexes on which the two projection composites are joined by short
//! contiguity chains ([`cover`], [`chain_search`]), check the result
//! independently ([`cover::verify_certificate`]) and turn it into a
//! piecewise-linear motion planner ([`planner`]).

pub mod chain_search;
pub mod complex;
pub mod construct;
pub mod cover;
pub mod error;
pub mod examples;
pub mod io;
mod layered;
pub mod maps;
pub mod planner;

pub use chain_search::{find_chain, ChainStrategy};
pub use complex::{is_cover, Complex, Materialized, Simplex, Subcomplex, VertexId};
pub use construct::{
    approx_identity, barycentric_subdivision, iterated_subdivision, ordered_product, projection_composite,
    ApproxPolicy, ProductComplex, SubdivisionComplex, Tower, DEFAULT_SIZE_BUDGET,
};
pub use cover::{
    pad_certificate, refine_certificate, sc_upper_bound, seed_pieces, transport_certificate, verify_certificate,
    BoundReport, CertificateDefect, CertifiedPiece, CoverCertificate, Outcome, SearchConfig, SearchStats, SeedStyle,
};
pub use error::{Error, Result};
pub use examples::Example;
pub use maps::{
    contiguous_pair, pad_chain, refine_chain, transport_chain, verify_chain, ChainDefect, ContiguityChain,
    SimplicialMap,
};
pub use planner::{evaluate_path, induced_embedding, locate_carrier, make_path, Embedding, Location, PLPath, Planner};
