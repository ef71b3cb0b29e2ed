use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use shift2d::atlas::{self, AtlasError, Window};
use shift2d::audit::e3_audit;
use shift2d::check::{run_check, CheckOptions};
use shift2d::named::{self, NamedError};
use shift2d::numfmt::{sig17, to_json};
use shift2d::weights_file::{self, LoadError};
use shift2d::{svg, tolerance_from_env};
use shift2d_core::axy_region::{classify, AxyPoint, Method, RegionError};
use shift2d_core::hypo_tests::TestError;
use shift2d_core::mat2::{is_psd, sqrt_psd};
use shift2d_core::{PsdTolerance, Sym2};

#[derive(Parser)]
#[command(name = "shift2d", version, about = "Hyponormality tests for 2-variable weighted shifts")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify one point (a, x, y) of the family W(a,x,y).
    Classify {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::ClosedForm)]
        method: MethodArg,
        #[arg(long)]
        json: bool,
    },
    /// Sweep a window of the (x, y) plane at fixed a and write a CSV (and SVG).
    Atlas {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MethodArg::ClosedForm)]
        method: MethodArg,
    },
    /// Run every test on a named or file-loaded shift.
    Check {
        #[arg(long, conflicts_with = "named", required_unless_present = "named")]
        weights: Option<PathBuf>,
        /// drury-arveson, helton-howe, ex215:A,B, ex216:A,B, axy:A,X,Y, embed:FILE
        #[arg(long)]
        named: Option<String>,
        #[arg(long, default_value_t = 5)]
        kmax: usize,
        /// Level cap (required for formula tails).
        #[arg(long)]
        ncap: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Square root of the symmetric matrix [[A11, A12], [A12, A22]].
    Sqrt2 {
        #[arg(long, num_args = 3, value_names = ["A11", "A12", "A22"], allow_negative_numbers = true)]
        m: Vec<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Count where the printed first semi-hyponormality clause disagrees with the direct route.
    AuditE3 {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        json: bool,
    },
    /// Write the weight file of a named shift.
    Export {
        #[arg(long)]
        named: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct WindowArgs {
    #[arg(long, default_value_t = 0.5)]
    a: f64,
    #[arg(long, default_value_t = 0.45)]
    xmin: f64,
    #[arg(long, default_value_t = 0.66)]
    xmax: f64,
    #[arg(long, default_value_t = 0.95)]
    ymin: f64,
    #[arg(long, default_value_t = 1.0)]
    ymax: f64,
    #[arg(long, default_value_t = 200)]
    nx: usize,
    #[arg(long, default_value_t = 200)]
    ny: usize,
}

impl From<&WindowArgs> for Window {
    fn from(w: &WindowArgs) -> Self {
        Window { a: w.a, xmin: w.xmin, xmax: w.xmax, ymin: w.ymin, ymax: w.ymax, nx: w.nx, ny: w.ny }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    ClosedForm,
    Direct,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::ClosedForm => Method::ClosedForm,
            MethodArg::Direct => Method::Direct,
        }
    }
}

/// Exit codes: 2 domain error, 3 numerical verdict error, 4 I/O.
enum Failure {
    Domain(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Numerical(m) | Failure::Io(m) => m,
        }
    }
}

impl From<RegionError> for Failure {
    fn from(e: RegionError) -> Self {
        match e {
            RegionError::OutOfClass(_) => Failure::Domain(e.to_string()),
            RegionError::Test(t) => t.into(),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<TestError> for Failure {
    fn from(e: TestError) -> Self {
        match e {
            TestError::Numerical(_) | TestError::Inconsistent(_) => Failure::Numerical(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl From<NamedError> for Failure {
    fn from(e: NamedError) -> Self {
        match e {
            NamedError::Load(l) => l.into(),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl From<AtlasError> for Failure {
    fn from(e: AtlasError) -> Self {
        match e {
            AtlasError::Window(_) => Failure::Domain(e.to_string()),
            AtlasError::Region(r) => r.into(),
            AtlasError::Io(_) | AtlasError::Csv(_) => Failure::Io(e.to_string()),
        }
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn print(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes());
}

#[derive(Serialize)]
struct ClassifyJson<'a> {
    a: f64,
    x: f64,
    y: f64,
    label: &'a str,
    subnormal: bool,
    hyponormal: bool,
    semi_hyponormal: bool,
    weakly_hyponormal: bool,
    margin_sub: f64,
    margin_hypo: f64,
    margin_sh: f64,
    margin_wh: f64,
    boundary: bool,
    method: &'a str,
}

fn cmd_classify(a: f64, x: f64, y: f64, method: Method, json: bool, tol: PsdTolerance) -> Result<(), Failure> {
    let p = AxyPoint::new(a, x, y)?;
    let c = classify(&p, method, tol)?;
    let m = c.margins;
    if json {
        let j = ClassifyJson {
            a,
            x,
            y,
            label: c.label.as_str(),
            subnormal: c.subnormal,
            hyponormal: c.hyponormal,
            semi_hyponormal: c.semi_hyponormal,
            weakly_hyponormal: c.weakly_hyponormal,
            margin_sub: m.sub,
            margin_hypo: m.hypo,
            margin_sh: m.sh,
            margin_wh: m.wh,
            boundary: c.boundary,
            method: method.as_str(),
        };
        print(&(to_json(&j) + "\n"));
    } else {
        let mut s = format!("label: {}\n", c.label);
        for (name, holds, margin) in [
            ("subnormal", c.subnormal, m.sub),
            ("hyponormal", c.hyponormal, m.hypo),
            ("semi-hyponormal", c.semi_hyponormal, m.sh),
            ("weakly hyponormal", c.weakly_hyponormal, m.wh),
        ] {
            s += &format!("{name:18} {holds:5}  margin {}\n", sig17(margin));
        }
        s += &format!("boundary: {}\nmethod: {}\n", c.boundary, method.as_str());
        print(&s);
    }
    Ok(())
}

fn cmd_atlas(w: Window, out: &Path, svg_path: Option<&Path>, method: Method, tol: PsdTolerance) -> Result<(), Failure> {
    let rows = atlas::scan(&w, method, tol)?;
    write_file(out, atlas::csv_string(&rows, method)?.as_bytes())?;
    if let Some(p) = svg_path {
        write_file(p, svg::render(&w, &rows).as_bytes())?;
    }
    let counts = atlas::label_counts(&rows);
    let summary: Vec<String> = counts.iter().map(|(l, n)| format!("{l}={n}")).collect();
    print(&format!("{} rows written to {}; {}\n", rows.len(), out.display(), summary.join(" ")));
    Ok(())
}

fn cmd_check(
    weights: Option<&Path>,
    named_spec: Option<&str>,
    opts: CheckOptions,
    json: bool,
) -> Result<(), Failure> {
    let d = match (weights, named_spec) {
        (Some(p), _) => weights_file::load(p)?,
        (None, Some(n)) => named::resolve(n)?,
        (None, None) => return Err(Failure::Domain("give --weights FILE or --named NAME".to_string())),
    };
    let report = run_check(&d, &opts)?;
    print(&if json { to_json(&report) + "\n" } else { report.to_text() });
    Ok(())
}

#[derive(Serialize)]
struct Sqrt2Json {
    sqrt: [f64; 3],
    trace: f64,
    det: f64,
    lambda_min: f64,
    sqrt_trace: f64,
    sqrt_det: f64,
}

fn cmd_sqrt2(m: &[f64], json: bool, tol: PsdTolerance) -> Result<(), Failure> {
    let mat = Sym2::new(m[0], m[1], m[2]).map_err(|e| Failure::Domain(e.to_string()))?;
    let check = is_psd(&mat, tol);
    let s = sqrt_psd(&mat, tol).map_err(|e| Failure::Numerical(e.to_string()))?;
    let j = Sqrt2Json {
        sqrt: [s.a11(), s.a12(), s.a22()],
        trace: mat.trace(),
        det: mat.det(),
        lambda_min: check.lambda_min,
        sqrt_trace: s.trace(),
        sqrt_det: s.det(),
    };
    if json {
        print(&(to_json(&j) + "\n"));
    } else {
        print(&format!(
            "sqrt(M) = [[{}, {}], [{}, {}]]\ntr M = {}\ndet M = {}\nlambda_min(M) = {}\ntr sqrt(M) = {}\ndet sqrt(M) = {}\n",
            sig17(s.a11()),
            sig17(s.a12()),
            sig17(s.a12()),
            sig17(s.a22()),
            sig17(j.trace),
            sig17(j.det),
            sig17(j.lambda_min),
            sig17(j.sqrt_trace),
            sig17(j.sqrt_det)
        ));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let tol = tolerance_from_env().map_err(Failure::Domain)?;
    match cli.cmd {
        Cmd::Classify { a, x, y, method, json } => cmd_classify(a, x, y, method.into(), json, tol),
        Cmd::Atlas { window, out, svg, method } => cmd_atlas((&window).into(), &out, svg.as_deref(), method.into(), tol),
        Cmd::Check { weights, named, kmax, ncap, json } => {
            cmd_check(weights.as_deref(), named.as_deref(), CheckOptions { kmax, ncap, tol }, json)
        }
        Cmd::Sqrt2 { m, json } => cmd_sqrt2(&m, json, tol),
        Cmd::AuditE3 { window, json } => {
            let a = e3_audit(&(&window).into(), tol)?;
            print(&if json { to_json(&a) + "\n" } else { a.to_text() });
            Ok(())
        }
        Cmd::Export { named, out } => {
            let d = named::resolve(&named)?;
            weights_file::save(&out, &d)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
