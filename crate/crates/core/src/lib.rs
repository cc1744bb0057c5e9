//! Finite-depth verification of symbolic-dynamics hypotheses: languages of shift
//! spaces, entropy and pressure estimates, specification certificates, language
//! decompositions, Gibbs and equilibrium-measure checks, and the β-transformation.
//!
//! Numerical code is generic over [`Real`] (`f32`/`f64`) and certified code over
//! [`Field`] (exact rationals, `Q(√d)`, outward-rounded intervals). The aliases below
//! fix the usual choices.

pub mod beta_map;
pub mod collection;
pub mod decomposition;
pub mod entropy;
pub mod error;
pub mod interval;
pub mod language;
pub mod linalg;
pub mod measures;
pub mod model;
pub mod potential;
pub mod pressure;
pub mod production;
pub mod quadratic;
pub mod scalar;
pub mod separated;
pub mod specification;
pub mod word;

use num_rational::BigRational;

pub use beta_map::{forward_nonexpansive_probe, BetaMap, Coding, CylinderInterval};
pub use collection::{OrbitCollection, WordPredicate};
pub use decomposition::{pressure_gap_report, verify_uniqueness_hypotheses, PressureGapReport, Decomposition, DecompositionRule, Split, UniquenessReport};
pub use entropy::{counting_bounds_check, entropy_estimate, CountingReport, GrowthEstimate, Verdict, Window};
pub use error::{Error, Result};
pub use interval::Interval;
pub use language::{enumerate_language, Budget, Enumerator, Language};
pub use measures::{
    empirical_mme, gibbs_check, parry_measure, periodic_counts, periodic_measure, CylinderMeasure, EmpiricalMeasure,
    GibbsReport, MarkovMeasure, PeriodicMeasure,
};
pub use model::{BetaShift, GapSet, ModelState, SGap, Sft, ShiftModel, Sofic};
pub use potential::{birkhoff_bracket, bowen_check, Bracket, LocallyConstant, Potential, Series};
pub use pressure::{partition_sum, pressure_estimate, transfer_pressure_estimate, PressureEstimate};
pub use production::{entropy_production_bound, subshift_gap_check, ProductionReport, SurgeryReport};
pub use quadratic::QuadSurd;
pub use scalar::{Field, Real};
pub use separated::{greedy_separated_set, separated_entropy, SeparatedSet};
pub use specification::{check_specification, SpecCertificate, SpecOptions, SpecOutcome, SpecVariant};
pub use word::{w, Word};

pub type Markov = MarkovMeasure<f64>;
pub type Growth = GrowthEstimate<f64>;
pub type Phi = Potential<f64>;
pub type Gibbs = GibbsReport<f64>;
pub type Pressure = PressureEstimate<f64>;
pub type ExactBetaMap = BetaMap<BigRational>;
pub type GoldenBetaMap = BetaMap<QuadSurd>;
pub type FloatBetaMap = BetaMap<Interval>;
