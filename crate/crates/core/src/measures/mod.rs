//! Invariant measures on shift spaces and the checks run against them.

pub mod empirical;
pub mod gibbs;
pub mod markov;
pub mod periodic;

pub use empirical::{empirical_equilibrium, empirical_mme, EmpiricalMeasure, EmpiricalTable};
pub use gibbs::{gibbs_check, GibbsReport, GibbsRow, K_STABILITY};
pub use markov::{parry_measure, static_entropy, weighted_gibbs_markov, CylinderMeasure, MarkovMeasure};
pub use periodic::{max_cylinder_deviation, periodic_counts, periodic_measure, PeriodicMeasure, PeriodicTable};
