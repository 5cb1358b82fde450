//! Command-line front end: zero queries, anti-Stokes line export and
//! verification runs, with JSON or CSV output.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use zerokit::airy_zeros::alpha_from_airy_zero;
use zerokit::bessel_zeros::alpha_from_bessel_zero;
use zerokit::lg_geometry::{trace_asl, trace_eye_level, Coefficient, CurveSample, TraceOptions};
use zerokit::solver::{compute_all_zeros, SweepConfig, ZeroSet};
use zerokit::verify::{verify_zeros, Rectangle, Verification};
use zerokit::{Combination, Family, ImLimit, SolutionSpec, StringLabel, Zero};

/// Exit status for malformed input.
pub const EXIT_PARSE: u8 = 2;
/// Exit status for inputs outside the domain of the computation.
pub const EXIT_DOMAIN: u8 = 3;
/// Exit status when solver and argument-principle counts disagree.
pub const EXIT_MISMATCH: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "zerokit",
    version,
    about = "Complex zeros of Airy and Bessel equation solutions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zeros of cos α Ai(z) + sin α Bi(z) (or its derivative) in a region.
    AiryZeros(ZeroArgs),
    /// Zeros of cos α Jν(z) − sin α Yν(z) (or its derivative) in a region.
    BesselZeros(BesselArgs),
    /// Anti-Stokes line through a point, or a level curve of the Bessel eye.
    AslTrace(TraceArgs),
    /// Check a zero list against argument-principle counts.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Airy,
    Bessel,
}

#[derive(Debug, Clone, Args)]
pub struct ZeroArgs {
    /// α as "re,im", or h1 / h2 for the Im α → ∓∞ limits.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_combination, conflicts_with = "zero", required_unless_present = "zero")]
    pub alpha: Option<Combination>,
    /// A known zero "re,im"; α is inferred from it.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub zero: Option<C64>,
    /// Search region "re_lo,im_lo,re_hi,im_hi".
    #[arg(long, allow_hyphen_values = true, value_parser = parse_region)]
    pub region: Rectangle,
    /// Zeros of the derivative instead.
    #[arg(long)]
    pub deriv: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Relative tolerance of the refinement.
    #[arg(long, default_value_t = 1e-13)]
    pub tol: f64,
    #[arg(long = "max-iter", default_value_t = 30)]
    pub max_iter: usize,
    /// Launch abscissa of the real-axis sweeps (default: region edge).
    #[arg(long = "L", allow_hyphen_values = true)]
    pub launch: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct BesselArgs {
    /// Order ν (real; negative orders are reflected).
    #[arg(long, allow_hyphen_values = true)]
    pub nu: f64,
    #[command(flatten)]
    pub common: ZeroArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Order ν of the Bessel coefficient 1 − (ν² − ¼)/z².
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Level of the eye function F for a Bessel level curve.
    #[arg(long, conflicts_with = "start")]
    pub level: Option<f64>,
    /// Start point "re,im" of the line.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub start: Option<C64>,
    /// Arc length traced each way.
    #[arg(long = "L", default_value_t = 20.0)]
    pub arc: f64,
    /// Arc-length step.
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// JSON output of a previous zero query; when absent the zeros are
    /// recomputed.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub common: ZeroArgs,
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub enum Failure {
    Parse(String),
    Domain(String),
    /// Counts disagree; the report was still written.
    Mismatch,
    Other(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Domain(_) => EXIT_DOMAIN,
            Failure::Mismatch => EXIT_MISMATCH,
            Failure::Other(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Parse(m) => write!(f, "invalid input: {m}"),
            Failure::Domain(m) => write!(f, "{m}"),
            Failure::Mismatch => write!(
                f,
                "verification failed: solver and argument-principle counts differ"
            ),
            Failure::Other(m) => write!(f, "{m}"),
        }
    }
}

impl From<zerokit::Error> for Failure {
    fn from(e: zerokit::Error) -> Self {
        match e {
            zerokit::Error::Domain(_) | zerokit::Error::TurningPoint(_) => {
                Failure::Domain(e.to_string())
            }
            other => Failure::Other(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

fn floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!(
            "expected {n} comma-separated numbers, got {}",
            v.len()
        ));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err("numbers must be finite".into());
    }
    Ok(v)
}

pub fn parse_complex(s: &str) -> Result<C64, String> {
    let v = floats(s, 2)?;
    Ok(C64::new(v[0], v[1]))
}

pub fn parse_combination(s: &str) -> Result<Combination, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "h1" => Ok(Combination::hankel1()),
        "h2" => Ok(Combination::hankel2()),
        _ => parse_complex(s).map(Combination::Alpha),
    }
}

pub fn parse_region(s: &str) -> Result<Rectangle, String> {
    let v = floats(s, 4)?;
    Rectangle::from_bounds(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

/// Number written with 17 significant digits, `null` if not finite.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(transparent)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw =
            RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecOut {
    pub family: String,
    pub nu: Option<Num>,
    /// `[re, im]`, absent for the Hankel-type limits.
    pub alpha: Option<[Num; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub limit: Option<String>,
    pub deriv: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub derived_from_zero: Option<[Num; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroOut {
    pub re: Num,
    pub im: Num,
    pub residual: Num,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StringOut {
    pub label: String,
    pub seeds: Vec<[Num; 2]>,
    pub zeros: Vec<ZeroOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RectOut {
    pub bounds: [Num; 4],
    pub expected: usize,
    pub counted: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationOut {
    pub ok: bool,
    pub rectangles: Vec<RectOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub spec: SpecOut,
    pub strings: Vec<StringOut>,
    pub verification: VerificationOut,
    pub diagnostics: Vec<String>,
}

fn pair(z: C64) -> [Num; 2] {
    [Num(z.re), Num(z.im)]
}

fn spec_out(spec: &SolutionSpec, from_zero: Option<C64>) -> SpecOut {
    let (alpha, limit) = match spec.combination {
        Combination::Alpha(a) => (Some(pair(a)), None),
        Combination::Limit(ImLimit::MinusInfinity) => {
            (None, Some("im_alpha_to_minus_infinity".to_string()))
        }
        Combination::Limit(ImLimit::PlusInfinity) => {
            (None, Some("im_alpha_to_plus_infinity".to_string()))
        }
    };
    SpecOut {
        family: match spec.family {
            Family::Airy => "airy".into(),
            Family::Bessel { .. } => "bessel".into(),
        },
        nu: spec.nu().map(Num),
        alpha,
        limit,
        deriv: spec.deriv,
        derived_from_zero: from_zero.map(pair),
    }
}

/// Groups zeros by string, keeping the solver's ordering.
fn strings_out(zeros: &[Zero], set: Option<&ZeroSet>) -> Vec<StringOut> {
    let mut out: Vec<StringOut> = Vec::new();
    fn slot(out: &mut Vec<StringOut>, label: StringLabel) -> usize {
        match out.iter().position(|s| s.label == label.as_str()) {
            Some(i) => i,
            None => {
                out.push(StringOut {
                    label: label.as_str().into(),
                    seeds: Vec::new(),
                    zeros: Vec::new(),
                });
                out.len() - 1
            }
        }
    }
    if let Some(set) = set {
        for s in &set.report.strings {
            let i = slot(&mut out, s.label);
            out[i].seeds.extend(s.seeds.iter().map(|&z| pair(z)));
        }
    }
    for z in zeros {
        let i = slot(&mut out, z.string);
        out[i].zeros.push(ZeroOut {
            re: Num(z.z.re),
            im: Num(z.z.im),
            residual: Num(z.residual),
            k: z.index,
        });
    }
    out.sort_by_key(|s| label_rank(&s.label));
    out
}

fn label_rank(label: &str) -> usize {
    const ORDER: [StringLabel; 9] = [
        StringLabel::NegAxis,
        StringLabel::RayPlus,
        StringLabel::RayMinus,
        StringLabel::PosAxis,
        StringLabel::CutAbove,
        StringLabel::CutBelow,
        StringLabel::AiryUpper,
        StringLabel::AiryLower,
        StringLabel::Scan,
    ];
    ORDER
        .iter()
        .position(|l| l.as_str() == label)
        .unwrap_or(ORDER.len())
}

fn verification_out(v: &Verification) -> VerificationOut {
    VerificationOut {
        ok: v.ok,
        rectangles: v
            .rectangles
            .iter()
            .map(|r| RectOut {
                bounds: r.bounds.map(Num),
                expected: r.expected,
                counted: r.counted,
            })
            .collect(),
    }
}

fn csv(strings: &[StringOut]) -> String {
    let mut s = String::from("label,k,re,im,residual\n");
    for st in strings {
        for z in &st.zeros {
            let _ = writeln!(
                s,
                "{},{},{:.16e},{:.16e},{:.16e}",
                st.label, z.k, z.re.0, z.im.0, z.residual.0
            );
        }
    }
    s
}

fn spec_from(family: Family, args: &ZeroArgs) -> Result<(SolutionSpec, Option<C64>), Failure> {
    let combination = match (args.alpha, args.zero) {
        (Some(a), None) => a,
        (None, Some(z0)) => match family {
            Family::Airy => alpha_from_airy_zero(z0, args.deriv)?,
            Family::Bessel { nu } => alpha_from_bessel_zero(nu, z0, args.deriv)?,
        },
        _ => {
            return Err(Failure::Parse(
                "give exactly one of --alpha and --zero".into(),
            ))
        }
    };
    let mut spec = SolutionSpec {
        family,
        combination,
        deriv: false,
    };
    if args.deriv {
        spec = spec.derivative();
    }
    spec.validate()?;
    Ok((spec, args.zero))
}

fn family_of(family: FamilyArg, nu: Option<f64>) -> Result<Family, Failure> {
    match (family, nu) {
        (FamilyArg::Airy, None) => Ok(Family::Airy),
        (FamilyArg::Airy, Some(_)) => Err(Failure::Parse(
            "--nu applies to the bessel family only".into(),
        )),
        (FamilyArg::Bessel, Some(nu)) => Ok(Family::Bessel { nu }),
        (FamilyArg::Bessel, None) => Err(Failure::Parse("the bessel family needs --nu".into())),
    }
}

fn config(args: &ZeroArgs, parallel: bool) -> SweepConfig {
    SweepConfig {
        tol: args.tol,
        max_iter: args.max_iter,
        launch: args.launch,
        parallel,
        ..SweepConfig::default()
    }
}

/// Output of a command plus whether its verification passed.
struct Rendered {
    text: String,
    diagnostics: Vec<String>,
    ok: bool,
}

fn render(report: Report, format: Format) -> Result<Rendered, Failure> {
    let text = match format {
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(&report).map_err(|e| Failure::Other(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => csv(&report.strings),
    };
    Ok(Rendered {
        text,
        ok: report.verification.ok,
        diagnostics: report.diagnostics,
    })
}

fn zeros_command(family: Family, args: &ZeroArgs, parallel: bool) -> Result<Rendered, Failure> {
    let (spec, from_zero) = spec_from(family, args)?;
    let set = compute_all_zeros(&spec, &args.region, &config(args, parallel))?;
    let v = verify_zeros(&spec, &set.points(), &set.report.region)?;
    let mut diagnostics: Vec<String> = set.report.notes.clone();
    diagnostics.extend(set.report.diagnostics.iter().cloned());
    diagnostics.extend(v.diagnostics.iter().cloned());
    let report = Report {
        spec: spec_out(&spec, from_zero),
        strings: strings_out(&set.zeros, Some(&set)),
        verification: verification_out(&v),
        diagnostics,
    };
    render(report, args.format)
}

/// Zeros listed in a previous JSON report.
fn read_zeros(path: &PathBuf) -> Result<Vec<Zero>, Failure> {
    let text = std::fs::read_to_string(path)?;
    let report: Report = serde_json::from_str(&text)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let mut zeros = Vec::new();
    for s in &report.strings {
        let label = label_from(&s.label)
            .ok_or_else(|| Failure::Parse(format!("unknown string label {}", s.label)))?;
        for z in &s.zeros {
            zeros.push(Zero {
                z: C64::new(z.re.0, z.im.0),
                residual: z.residual.0,
                string: label,
                index: z.k,
            });
        }
    }
    Ok(zeros)
}

fn label_from(s: &str) -> Option<StringLabel> {
    serde_json::from_value(serde_json::Value::String(s.into())).ok()
}

fn verify_command(args: &VerifyArgs, parallel: bool) -> Result<Rendered, Failure> {
    let family = family_of(args.family, args.nu)?;
    let Some(path) = &args.input else {
        return zeros_command(family, &args.common, parallel);
    };
    let (spec, from_zero) = spec_from(family, &args.common)?;
    let zeros: Vec<Zero> = read_zeros(path)?
        .into_iter()
        .filter(|z| args.common.region.contains(z.z))
        .collect();
    let pts: Vec<C64> = zeros.iter().map(|z| z.z).collect();
    let v = verify_zeros(&spec, &pts, &args.common.region)?;
    let report = Report {
        spec: spec_out(&spec, from_zero),
        strings: strings_out(&zeros, None),
        verification: verification_out(&v),
        diagnostics: v.diagnostics.clone(),
    };
    render(report, args.common.format)
}

fn trace_command(args: &TraceArgs) -> Result<Rendered, Failure> {
    let opts = TraceOptions {
        step: args.step,
        ..TraceOptions::default()
    };
    if !(args.step > 0.0) || !(args.arc > 0.0) {
        return Err(Failure::Domain("--step and --L must be positive".into()));
    }
    let curve: CurveSample = match (args.family, args.nu, args.level, args.start) {
        (FamilyArg::Bessel, Some(nu), Some(level), None) => {
            trace_eye_level(nu, level, args.arc, opts)?
        }
        (FamilyArg::Bessel, Some(nu), None, Some(start)) => {
            trace_both_ways(start, &Coefficient::RiccatiBessel { nu }, args.arc, opts)?
        }
        (FamilyArg::Airy, None, None, Some(start)) => {
            trace_both_ways(start, &Coefficient::Airy, args.arc, opts)?
        }
        (FamilyArg::Airy, _, Some(_), _) => {
            return Err(Failure::Parse(
                "--level applies to the bessel family".into(),
            ))
        }
        (FamilyArg::Airy, Some(_), _, _) => {
            return Err(Failure::Parse("--nu applies to the bessel family".into()))
        }
        (FamilyArg::Bessel, None, _, _) => {
            return Err(Failure::Parse("the bessel family needs --nu".into()))
        }
        _ => {
            return Err(Failure::Parse(
                "give --start (or --level for the bessel family)".into(),
            ))
        }
    };
    let diagnostics = vec![format!("trace stopped: {:?}", curve.stop)];
    let text = match args.format {
        Format::Csv => curve.to_csv(),
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                label: &'a str,
                stop: zerokit::lg_geometry::TraceStop,
                points: Vec<[Num; 2]>,
            }
            let out = Out {
                label: &curve.label,
                stop: curve.stop,
                points: curve.points.iter().map(|&p| pair(p)).collect(),
            };
            let mut s =
                serde_json::to_string_pretty(&out).map_err(|e| Failure::Other(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    Ok(Rendered {
        text,
        diagnostics,
        ok: true,
    })
}

/// The line through `start` traced both ways and joined at `start`.
fn trace_both_ways(
    start: C64,
    coeff: &Coefficient,
    arc: f64,
    opts: TraceOptions,
) -> Result<CurveSample, Failure> {
    let fwd = trace_asl(start, coeff, 1, arc, opts)?;
    let bwd = trace_asl(start, coeff, -1, arc, opts)?;
    let mut points: Vec<C64> = bwd.points.iter().rev().copied().collect();
    points.extend(fwd.points.iter().skip(1));
    Ok(CurveSample {
        points,
        label: fwd.label,
        stop: fwd.stop,
    })
}

/// Runs one command, writing data to `out` and diagnostics to `err`.
pub fn run(
    cli: &Cli,
    parallel: bool,
    out: &mut impl Write,
    err: &mut impl Write,
) -> Result<(), Failure> {
    let rendered = match &cli.command {
        Command::AiryZeros(a) => zeros_command(Family::Airy, a, parallel)?,
        Command::BesselZeros(b) => zeros_command(Family::Bessel { nu: b.nu }, &b.common, parallel)?,
        Command::AslTrace(t) => trace_command(t)?,
        Command::Verify(v) => verify_command(v, parallel)?,
    };
    out.write_all(rendered.text.as_bytes())?;
    out.flush()?;
    for d in &rendered.diagnostics {
        writeln!(err, "{d}")?;
    }
    if rendered.ok {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

/// Thread cap from `ZEROKIT_THREADS`: `None` when unset, an error when not
/// a positive integer.
pub fn thread_cap(value: Option<&str>) -> Result<Option<usize>, Failure> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(v) => match v.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Parse(format!(
                "ZEROKIT_THREADS must be a positive integer, got {v:?}"
            ))),
        },
    }
}
