//! Verdict table for one diagram.

use std::fmt::Write as _;

use serde::Serialize;
use shift2d_core::hypo_tests::{
    entries_commute_test, k_hypo_profile, l_positivity_test, quasinormal_test, resolve_cap, semi_hypo_level,
    semi_hypo_test, six_point_test, weak_hypo_test, LambdaGrid, Outcome, Settings, TestError, TestVerdict,
};
use shift2d_core::{PsdTolerance, WeightDiagram};

use crate::numfmt::sig17;
use crate::weights_file::tail_id;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Highest moment order tested.
    pub kmax: usize,
    /// Level cap; required for formula tails.
    pub ncap: Option<usize>,
    pub tol: PsdTolerance,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { kmax: 5, ncap: None, tol: PsdTolerance::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub test: String,
    pub outcome: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
    pub levels_checked: usize,
    pub min_margin: f64,
}

impl CheckRow {
    fn from_verdict(test: &str, v: &TestVerdict) -> Self {
        CheckRow {
            test: test.to_string(),
            outcome: v.outcome.label(),
            passed: v.passed(),
            witness: v.witness.map(|w| w.to_string()),
            levels_checked: v.levels_checked,
            min_margin: v.min_margin,
        }
    }
}

/// `sqrt(l_mid[i]) - sqrt(r_mid[i])` on level one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootDifference {
    pub block: usize,
    pub trace: f64,
    pub det: f64,
    pub lambda_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub core: [usize; 2],
    pub tail: String,
    pub level_cap: usize,
    pub conclusive: bool,
    pub rows: Vec<CheckRow>,
    /// Empty when `L|K(1)` is not PSD.
    pub level_one_root_difference: Vec<RootDifference>,
}

impl CheckReport {
    pub fn row(&self, test: &str) -> Option<&CheckRow> {
        self.rows.iter().find(|r| r.test == test)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let (n1, n2) = (self.core[0], self.core[1]);
        let _ = writeln!(s, "shift: {}  core {n1}x{n2}  tail {}  level cap {}", self.name, self.tail, self.level_cap);
        if !self.conclusive {
            let _ = writeln!(s, "formula tail: passes up to the cap are reported as INCONCLUSIVE");
        }
        let width = self.rows.iter().map(|r| r.test.len()).max().unwrap_or(0);
        for r in &self.rows {
            let _ = write!(s, "{:width$}  {:12}", r.test, r.outcome);
            if let Some(w) = &r.witness {
                let _ = write!(s, "  {w}");
            }
            s.push('\n');
        }
        for d in &self.level_one_root_difference {
            let _ = writeln!(
                s,
                "level 1 block {}: sqrt(L) - sqrt(R) has tr = {}, det = {}, lambda_min = {}",
                d.block,
                sig17(d.trace),
                sig17(d.det),
                sig17(d.lambda_min)
            );
        }
        s
    }
}

fn k_hypo_row(d: &WeightDiagram, kmax: usize, s: &Settings) -> Result<CheckRow, TestError> {
    let profile = k_hypo_profile(d, kmax, s)?;
    let first_fail = profile.iter().find(|r| r.verdict.failed());
    let v = first_fail.map_or_else(|| profile.last().expect("kmax >= 1").verdict, |r| r.verdict);
    let mut row = CheckRow::from_verdict(&format!("k-hypo <= {kmax}"), &v);
    if let Some(r) = first_fail {
        row.witness = row.witness.map(|w| format!("order {}: {w}", r.order));
    }
    Ok(row)
}

pub fn run_check(d: &WeightDiagram, opts: &CheckOptions) -> Result<CheckReport, TestError> {
    if opts.kmax == 0 {
        return Err(TestError::InvalidOrder(0));
    }
    let s = Settings { cap: opts.ncap, tol: opts.tol };
    let cap = resolve_cap(d, s.cap)?;
    let mut rows = Vec::new();

    let validate = d.validate();
    rows.push(CheckRow {
        test: "validate".to_string(),
        outcome: if validate.is_ok() { Outcome::Pass.label() } else { Outcome::Fail.label() },
        passed: validate.is_ok(),
        witness: validate.err().map(|e| e.to_string()),
        levels_checked: 0,
        min_margin: f64::NAN,
    });
    rows.push(CheckRow::from_verdict("L-positive", &l_positivity_test(d, &s)?));
    rows.push(CheckRow::from_verdict("hyponormal (6pt)", &six_point_test(d, &s)?));
    rows.push(k_hypo_row(d, opts.kmax, &s)?);
    rows.push(CheckRow::from_verdict("semi-hypo", &semi_hypo_test(d, &s)?));
    rows.push(CheckRow::from_verdict("weak-hypo", &weak_hypo_test(d, &s, &LambdaGrid::default())?));
    rows.push(CheckRow::from_verdict("quasinormal", &quasinormal_test(d)));

    let ec = entries_commute_test(d, &s)?;
    let ec_outcome = match (ec.weights, cap.conclusive) {
        (false, _) => Outcome::Fail,
        (true, true) => Outcome::Pass,
        (true, false) => Outcome::Inconclusive,
    };
    rows.push(CheckRow {
        test: "entries-commute".to_string(),
        outcome: ec_outcome.label(),
        passed: ec.weights && cap.conclusive,
        witness: ec.witness.map(|w| w.to_string()),
        levels_checked: ec.levels_checked,
        min_margin: f64::NAN,
    });

    let level_one_root_difference = semi_hypo_level(d, 1, &s)
        .map(|v| {
            v.iter()
                .enumerate()
                .map(|(i, sd)| RootDifference { block: i + 1, trace: sd.trace, det: sd.det, lambda_min: sd.lambda_min })
                .collect()
        })
        .unwrap_or_default();

    let (n1, n2) = d.core_dims();
    Ok(CheckReport {
        name: d.name().to_string(),
        core: [n1, n2],
        tail: tail_id(d.tail()),
        level_cap: cap.level,
        conclusive: cap.conclusive,
        rows,
        level_one_root_difference,
    })
}
