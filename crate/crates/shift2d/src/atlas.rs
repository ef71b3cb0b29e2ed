//! Parameter sweeps over a rectangle of the `(x, y)` plane at fixed `a`.

use std::collections::BTreeMap;
use std::io;

use rayon::prelude::*;
use shift2d_core::axy_region::{classify, AxyPoint, Classification, Method, RegionError, RegionLabel};
use shift2d_core::PsdTolerance;
use thiserror::Error;

use crate::numfmt::sig17;

pub const CSV_HEADER: [&str; 10] =
    ["a", "x", "y", "label", "margin_sub", "margin_hypo", "margin_sh", "margin_wh", "boundary", "method"];

/// Label written for grid points outside the class.
pub const OUT_LABEL: &str = "OUT";

/// Grid over `[xmin, xmax] × [ymin, ymax]` with both end points included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub a: f64,
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Default for Window {
    fn default() -> Self {
        Window { a: 0.5, xmin: 0.45, xmax: 0.66, ymin: 0.95, ymax: 1.0, nx: 200, ny: 200 }
    }
}

#[derive(Debug, Error)]
pub enum AtlasError {
    #[error("invalid window: {0}")]
    Window(String),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()
}

impl Window {
    pub fn validate(&self) -> Result<(), AtlasError> {
        let bad = |m: String| Err(AtlasError::Window(m));
        if !(self.a > 0.0 && self.a < 1.0) {
            return bad(format!("a = {} is not in (0,1)", self.a));
        }
        for (lo, hi, axis) in [(self.xmin, self.xmax, "x"), (self.ymin, self.ymax, "y")] {
            if !(0.0 <= lo && lo < hi && hi <= 1.0) {
                return bad(format!("{axis} range [{lo}, {hi}] is not an interval inside [0, 1]"));
            }
        }
        if self.nx < 2 || self.ny < 2 {
            return bad(format!("grid {}x{} needs at least 2 points per axis", self.nx, self.ny));
        }
        Ok(())
    }

    pub fn xs(&self) -> Vec<f64> {
        grid(self.xmin, self.xmax, self.nx)
    }

    pub fn ys(&self) -> Vec<f64> {
        grid(self.ymin, self.ymax, self.ny)
    }

    /// Grid points in row-major `(x, y)` order: `x` outer, `y` inner.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let ys = self.ys();
        self.xs().into_iter().flat_map(|x| ys.iter().map(move |&y| (x, y))).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtlasRow {
    pub a: f64,
    pub x: f64,
    pub y: f64,
    /// `None` for points outside the class.
    pub class: Option<Classification>,
}

impl AtlasRow {
    pub fn label(&self) -> &'static str {
        self.class.as_ref().map_or(OUT_LABEL, |c| c.label.as_str())
    }
}

/// Classifies every grid point on the rayon pool; the result keeps grid order.
pub fn scan(w: &Window, method: Method, tol: PsdTolerance) -> Result<Vec<AtlasRow>, AtlasError> {
    w.validate()?;
    let a = w.a;
    w.points()
        .into_par_iter()
        .map(|(x, y)| {
            let class = match AxyPoint::new(a, x, y) {
                Ok(p) => Some(classify(&p, method, tol)?),
                Err(RegionError::OutOfClass(_)) => None,
                Err(e) => return Err(e.into()),
            };
            Ok(AtlasRow { a, x, y, class })
        })
        .collect()
}

pub fn write_csv<W: io::Write>(rows: &[AtlasRow], method: Method, out: W) -> Result<(), AtlasError> {
    let mut wr = csv::Writer::from_writer(out);
    wr.write_record(CSV_HEADER)?;
    for r in rows {
        let mut rec = vec![sig17(r.a), sig17(r.x), sig17(r.y), r.label().to_string()];
        match &r.class {
            Some(c) => {
                let m = c.margins;
                rec.extend([sig17(m.sub), sig17(m.hypo), sig17(m.sh), sig17(m.wh), c.boundary.to_string()]);
            }
            None => rec.extend(std::iter::repeat_n(String::new(), 5)),
        }
        rec.push(method.as_str().to_string());
        wr.write_record(&rec)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[AtlasRow], method: Method) -> Result<String, AtlasError> {
    let mut buf = Vec::new();
    write_csv(rows, method, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV is UTF-8"))
}

/// Number of rows per label, `OUT` included.
pub fn label_counts(rows: &[AtlasRow]) -> BTreeMap<&'static str, usize> {
    let mut m = BTreeMap::new();
    for r in rows {
        *m.entry(r.label()).or_insert(0) += 1;
    }
    m
}

/// In-class labels that occur, in legend order.
pub fn labels_present(rows: &[AtlasRow]) -> Vec<RegionLabel> {
    RegionLabel::ALL.into_iter().filter(|l| rows.iter().any(|r| r.class.is_some_and(|c| c.label == *l))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corners_only() {
        let w = Window { nx: 2, ny: 2, ..Window::default() };
        let rows = scan(&w, Method::ClosedForm, PsdTolerance::default()).unwrap();
        let xy: Vec<(f64, f64)> = rows.iter().map(|r| (r.x, r.y)).collect();
        assert_eq!(xy, vec![(0.45, 0.95), (0.45, 1.0), (0.66, 0.95), (0.66, 1.0)]);
        // ay >= x at (0.45, 0.95); y = 1 leaves the open cube
        assert_eq!(rows.iter().map(|r| r.label()).collect::<Vec<_>>(), vec!["OUT", "OUT", "WH_NOT_SH", "OUT"]);
        let csv = csv_string(&rows, Method::ClosedForm).unwrap();
        assert_eq!(csv.lines().count(), 5);
        assert_eq!(csv.lines().next().unwrap(), CSV_HEADER.join(","));
    }

    #[test]
    fn rejects_bad_windows() {
        for w in [
            Window { nx: 1, ..Window::default() },
            Window { xmin: 0.7, xmax: 0.6, ..Window::default() },
            Window { ymax: 1.2, ..Window::default() },
            Window { a: 1.0, ..Window::default() },
        ] {
            assert!(matches!(w.validate(), Err(AtlasError::Window(_))));
        }
    }
}
