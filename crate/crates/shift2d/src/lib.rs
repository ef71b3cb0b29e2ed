//! Weight files, named shifts, parameter atlases and the command-line front
//! end for the `shift2d-core` tests.

pub mod atlas;
pub mod audit;
pub mod check;
pub mod named;
pub mod numfmt;
pub mod svg;
pub mod weights_file;

use shift2d_core::PsdTolerance;

/// Environment variable overriding the relative PSD tolerance.
pub const TOL_ENV: &str = "SHIFT2D_TOL";

/// `PsdTolerance` from `SHIFT2D_TOL`, or the default when unset.
pub fn tolerance_from_env() -> Result<PsdTolerance, String> {
    match std::env::var(TOL_ENV) {
        Err(_) => Ok(PsdTolerance::default()),
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .and_then(PsdTolerance::new)
            .ok_or_else(|| format!("{TOL_ENV}={v:?} is not a nonnegative number")),
    }
}
