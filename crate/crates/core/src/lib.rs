//! Exact computation of all field isomorphisms `Q[x]/(g) -> Q[x]/(f)` between
//! algebraic number fields.
//!
//! Everything is exact: big-integer polynomial arithmetic, exact rational
//! Gram-Schmidt data inside LLL, and exact verification of every candidate
//! isomorphism. The pipeline factors `f` and `g` modulo several good primes,
//! Hensel-lifts the factorizations, and intersects the lattice of candidate
//! isomorphism vectors with sub-trace congruences before any per-root LLL
//! work starts. When the number of isomorphisms is one, the pre-processing
//! stage usually finds it outright.

pub mod driver;
pub mod error;
pub mod lattice;
pub mod modpoly;
pub mod parse;
pub mod polyz;
pub mod subtrace;

pub use driver::{
    find_isomorphism, find_isomorphism_with, method2_baseline, method2_baseline_with,
    pre_processing, pre_processing_with, verify_isomorphism, Config, IsoCandidate, IsoResult,
    LatticeState, PrimeData, RunReport,
};
pub use error::{Error, Result};
pub use lattice::{GsoProfile, IntMatrix};
pub use modpoly::{DistinctDegreeFactorization, ModPoly};
pub use parse::parse_poly;
pub use polyz::{BoundData, IntPoly, RatPoly};
pub use subtrace::{BasisImage, SubTraceMatrix};
