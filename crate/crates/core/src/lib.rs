//! Exact computations on the Köthe spaces `𝒦_α`: matrix entries, criterion
//! checks, and Kolmogorov diameters by sorting and by closed-form segments.
//!
//! Every module is generic over [`Scalar`]; the aliases below fix the exact
//! [`Rational`] instance, which is what all verdicts should be based on.

pub mod diameters;
pub mod error;
pub mod grid;
pub mod kothe;
pub mod logterm;
pub mod report;
pub mod scalar;
pub mod sequences;
pub mod verify;

pub use diameters::{
    closedform_diameters, first_disagreement, oracle_certified, oracle_diameters, DiameterEntry,
    DiameterTableOf, Formula, Interval, Method, RedRecord, Segment, SegmentPlan,
};
pub use error::{Error, Result};
pub use grid::{column_of, pair_index, unpair, BandIndexing, GridIndex};
pub use kothe::KotheFamily;
pub use logterm::{logterm_cmp, logterm_to_float, Clamp, FloatImage, LogTermOf};
pub use report::{CheckReport, Verdict, Witness};
pub use scalar::{a_pq, c_pq, parse_rational, rational_cmp, Rational, Scalar};
pub use sequences::{DeclaredClass, ExponentSequence, SequenceKind};

/// `e^{coeff·α_index}` with an exact rational coefficient.
pub type LogTerm = LogTermOf<Rational>;
/// Exact exponent sequence.
pub type Alpha = ExponentSequence<Rational>;
/// Exact diameter table.
pub type DiameterTable = DiameterTableOf<Rational>;
/// `𝒦_α` over an exact exponent sequence.
pub type Kothe = KotheFamily<Rational>;

/// Approximate `f64` instances, for quick previews only.
pub type AlphaF64 = ExponentSequence<f64>;
pub type DiameterTableF64 = DiameterTableOf<f64>;
