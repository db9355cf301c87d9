//! Max-plus inhomogeneous matrix products: critical graphs, CSR decompositions,
//! transient bounds and non-CSR word families.

pub mod bounds;
pub mod cli;
pub mod counterexamples;
pub mod csr;
pub mod ensemble;
pub mod error;
pub mod format;
pub mod graph;
pub mod reference;
pub mod semiring;
pub mod trellis;

pub use bounds::{ambient_csr_bound, schwarz, closed_form_value_check, weak_csr_bound, wielandt, BoundReport};
pub use counterexamples::{build_family, transient_nonexistence_scan, verify_family, Family, FamilyId};
pub use csr::{csr_critical_projections, csr_product, csr_terms, is_csr, rank_compress, CsrTerms, CsrVerdict, RankFactors};
pub use ensemble::{AssumptionReport, Ensemble, EnsembleFile, PathWeights, Profile};
pub use error::{Error, Result};
pub use graph::{CriticalComponent, CriticalStructure, WeightedDigraph};
pub use semiring::{MaxPlus, MaxPlusMatrix};
pub use trellis::{first_passage_weights, gamma_product, optimal_walk_lengths, Word};
