//! Integrability and oscillation criteria for the dilatation: BMO and FMO
//! probes, the log-log ring estimate, Φ-integral conditions and radial
//! divergence.

mod oscillation;
mod phi;
mod radial;
mod report;

pub use oscillation::{bmo_norm, disc_oscillation, fmo_loglog_check, fmo_probe, BmoEstimate, LOGLOG_RADIUS};
pub use phi::{
    classify_increments, phi_divergence, phi_equivalents, IncrementFit, IntegralClass, PhiEquivalents, PhiFunction,
    DECADES, PHI_CATALOG, PHI_INTEGRALS,
};
pub use radial::{radial_divergence, theorem_applicability, Applicability, ApplicabilityOptions, RADIAL_OCTAVES};
pub use report::{
    fit_growth, linear_fit, write_reports_csv, CriterionReport, Evidence, GrowthFit, GrowthModel, Verdict, MIN_LADDER,
    MIN_R2,
};

#[cfg(test)]
mod tests;
