//! Transcription audit of the first semi-hyponormality clause.

use std::fmt::Write as _;

use serde::Serialize;
use shift2d_core::axy_region::{e3_as_printed, is_semihypo_cf, sh_direct_lambda_min, AxyPoint, BOUNDARY_BAND};
use shift2d_core::PsdTolerance;

use crate::atlas::{AtlasError, Window};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct E3Audit {
    pub a: f64,
    pub window: [f64; 4],
    pub grid: [usize; 2],
    /// In-class grid points.
    pub points: usize,
    /// Points with `|lambda_min|` of the direct route inside the boundary band.
    pub boundary_skipped: usize,
    /// Clause with the text's `-y^3` term against the direct route.
    pub printed_disagreements: usize,
    /// Clause with `-y^4` against the direct route.
    pub quartic_disagreements: usize,
    /// Up to five `(x, y)` where the printed clause disagrees.
    pub printed_examples: Vec<[f64; 2]>,
}

pub fn e3_audit(w: &Window, tol: PsdTolerance) -> Result<E3Audit, AtlasError> {
    w.validate()?;
    let mut a = E3Audit {
        a: w.a,
        window: [w.xmin, w.xmax, w.ymin, w.ymax],
        grid: [w.nx, w.ny],
        points: 0,
        boundary_skipped: 0,
        printed_disagreements: 0,
        quartic_disagreements: 0,
        printed_examples: Vec::new(),
    };
    for (x, y) in w.points() {
        let Ok(p) = AxyPoint::new(w.a, x, y) else { continue };
        a.points += 1;
        let lambda = sh_direct_lambda_min(&p, tol)?;
        if lambda.abs() < BOUNDARY_BAND {
            a.boundary_skipped += 1;
            continue;
        }
        let direct = lambda >= 0.0;
        if e3_as_printed(&p) != direct {
            a.printed_disagreements += 1;
            if a.printed_examples.len() < 5 {
                a.printed_examples.push([x, y]);
            }
        }
        if is_semihypo_cf(&p, tol)?.holds != direct {
            a.quartic_disagreements += 1;
        }
    }
    Ok(a)
}

impl E3Audit {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let [x0, x1, y0, y1] = self.window;
        let _ = writeln!(
            s,
            "semi-hyponormality clause audit at a = {} on [{x0}, {x1}] x [{y0}, {y1}], {}x{} grid",
            self.a, self.grid[0], self.grid[1]
        );
        let _ = writeln!(s, "in-class points: {} ({} inside the boundary band skipped)", self.points, self.boundary_skipped);
        let _ = writeln!(s, "as printed (-y^3): {} disagreements with the direct route", self.printed_disagreements);
        let _ = writeln!(s, "with -y^4:         {} disagreements with the direct route", self.quartic_disagreements);
        for [x, y] in &self.printed_examples {
            let _ = writeln!(s, "  printed clause wrong at x = {x}, y = {y}");
        }
        s
    }
}
