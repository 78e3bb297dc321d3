//! Numeric tolerances and size caps shared across the crate.
//!
//! Every constant here is a contract, not a tuning knob: tests and callers
//! rely on these exact values, so changing one is an API change.

/// Maximum allowed deviation of a pmf table from total mass 1.
///
/// Dense tables built from products of channel matrices accumulate rounding
/// on the order of `n * eps`; 1e-12 leaves three orders of headroom for the
/// largest tables the oracle is allowed to build (2^13 entries).
pub const PMF_SUM_TOL: f64 = 1e-12;

/// Step used when validating analytic derivatives against central finite
/// differences, and the agreement tolerance for that check.
///
/// With f in bits and |f'''| of order one on the probed interior, a step of
/// 1e-6 balances truncation (h^2) against cancellation (eps / h) so both sit
/// near 1e-9, comfortably inside the 1e-6 acceptance band.
#[cfg(test)]
pub const DERIV_STEP: f64 = 1e-6;
#[cfg(test)]
pub const DERIV_TOL: f64 = 1e-6;

/// Default grid step for parameter sweeps (distortion and rate grids).
pub const GRID_STEP_DEFAULT: f64 = 1e-3;

/// Closed-form conditional-entropy evaluation enumerates all subsets of the
/// helper set, so the helper count is capped at 20 (about 10^6 terms).
pub const PHI_HELPER_CAP: usize = 20;

/// The brute-force oracle materializes a table with 2^(2k+1) entries for
/// k helpers; 6 keeps that at 2^13, milliseconds of work.
pub const ORACLE_HELPER_CAP: usize = 6;

/// Default cap on the source count N for region construction. Overridable
/// at the CLI through the MHO_MAX_N environment variable.
pub const DEFAULT_MAX_N: usize = 8;
