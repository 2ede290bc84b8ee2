//! Command surface of the `isoform` binary.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex;
use serde_json::{json, Value};

use isoform::isochrony::{isochrony_report, mirror_search, IsochronyOptions};
use isoform::isotropy::{check_a5_shortcut, check_characterization, isotropy, orbit_report, IsotropyKind, PointKind};
use isoform::json::{complex_to_value, form_from_str, form_to_value, group_from_value, map_to_value};
use isoform::portrait::{render_svg, sample_grid, samples_to_json, RenderOptions, Window};
use isoform::synthesis::{sample_stratum, stratum, synthesize, SynthesisSpec};
use isoform::{FiniteMobiusGroup, GroupTypeTag, RationalOneForm, SpherePoint};

pub mod verify;

#[derive(Debug, Parser)]
#[command(name = "isoform", version, about = "Isotropy, synthesis, isochrony and portraits of rational 1-forms on the sphere")]
pub struct Cli {
    /// Matching tolerance (chordal distance) used by every computation.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub eps: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Isotropy group of a form, with its orbit decomposition.
    Isotropy(FormArgs),
    /// Check the invariance characterization of a form against a group.
    Check(CheckArgs),
    /// Build a G-invariant form from a table cell.
    Synth(SynthArgs),
    /// Random form in a stratum (G, l1, l2).
    Sample(SampleArgs),
    /// Residues, isochrony and mirror certificate.
    Isochrony(IsochronyArgs),
    /// Phase portrait as SVG (and optionally field samples as JSON).
    Render(RenderArgs),
    /// Run the bundled reference forms and print a pass/fail table.
    VerifyPaper(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct FormArgs {
    /// Form JSON (points or coefficient encoding).
    #[arg(long)]
    pub form: PathBuf,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub io: FormArgs,
    /// Canonical group, e.g. Z3, D5, A4, S4, A5.
    #[arg(long, conflicts_with = "group_json", required_unless_present = "group_json")]
    pub group: Option<GroupTypeTag>,
    /// Group JSON ({"type", "n", "elements"?, "conjugator"?}).
    #[arg(long)]
    pub group_json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Group, e.g. Z3, D5, A4.
    #[arg(long)]
    pub group: GroupTypeTag,
    /// Table column l1 − l2; derived from --l1/--l2 when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub dif: Option<i32>,
    /// Number of full orbits of zeros.
    #[arg(long)]
    pub l1: Option<usize>,
    /// Number of full orbits of poles.
    #[arg(long)]
    pub l2: Option<usize>,
    /// Zero representatives "re,im;re,im" (random when omitted).
    #[arg(long, allow_hyphen_values = true)]
    pub zeros: Option<String>,
    /// Pole representatives "re,im;re,im" (random when omitted).
    #[arg(long, allow_hyphen_values = true)]
    pub poles: Option<String>,
    /// Scale factor λ as "re,im".
    #[arg(long, default_value = "0,-1", allow_hyphen_values = true)]
    pub lambda: String,
    /// For Z2 with dif = −1: use the other fixed point for the pole.
    #[arg(long)]
    pub swap_fixed_points: bool,
    /// Seed for random representatives.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the form JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Group, e.g. Z3, D5, A4.
    #[arg(long)]
    pub group: GroupTypeTag,
    /// Number of full orbits of zeros.
    #[arg(long)]
    pub l1: usize,
    /// Number of full orbits of poles.
    #[arg(long)]
    pub l2: usize,
    /// Seed for the sampled representatives (λ is −i).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the form JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IsochronyArgs {
    #[command(flatten)]
    pub io: FormArgs,
    /// Two-pole forms are isochronous only with vanishing residues.
    #[arg(long)]
    pub strict_two_pole: bool,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Form JSON (points or coefficient encoding).
    #[arg(long)]
    pub form: PathBuf,
    /// Plane window "x0,x1,y0,y1".
    #[arg(long, default_value = "-3,3,-3,3", allow_hyphen_values = true)]
    pub window: Window,
    /// Rotation θ: trajectories of e^{iθ}η.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    /// Streamline seeds per axis (0 for markers only).
    #[arg(long, default_value_t = 10)]
    pub grid: usize,
    /// Skip separatrices.
    #[arg(long)]
    pub no_separatrices: bool,
    /// Add a sphere panel.
    #[arg(long)]
    pub sphere: bool,
    /// Also write field samples on a grid to this JSON file.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Field samples per axis for --json.
    #[arg(long, default_value_t = 21)]
    pub samples: usize,
    /// SVG output path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Print the table as JSON.
    #[arg(long)]
    pub json: bool,
}

/// Failures, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad input or mathematical failure (exit 1).
    Domain(String),
    /// Filesystem trouble (exit 2).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<isoform::Error> for CliError {
    fn from(e: isoform::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_form(path: &Path, eps: f64) -> CliResult<RationalOneForm> {
    Ok(form_from_str(&read(path)?, eps)?)
}

fn emit(value: &Value, out: Option<&Path>) -> CliResult<String> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n";
    match out {
        Some(p) => write(p, &text).map(|_| String::new()),
        None => Ok(text),
    }
}

pub fn parse_complex(s: &str) -> CliResult<Complex<f64>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| CliError::Domain(format!("bad number {t:?}: {e}")));
    match parts[..] {
        [re, im] => Ok(Complex::new(num(re)?, num(im)?)),
        [re] => Ok(Complex::new(num(re)?, 0.0)),
        _ => Err(CliError::Domain(format!("expected re,im but got {s:?}"))),
    }
}

/// `"re,im;re,im;inf"`
pub fn parse_points(s: &str) -> CliResult<Vec<SpherePoint>> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| if t == "inf" { Ok(SpherePoint::Infinity) } else { parse_complex(t).map(SpherePoint::Finite) })
        .collect()
}

fn residues_value(form: &RationalOneForm) -> Value {
    Value::Array(
        form.residues()
            .iter()
            .map(|r| json!({ "pole": r.pole, "value": complex_to_value(r.value) }))
            .collect(),
    )
}

pub fn isotropy_value(form: &RationalOneForm, eps: f64) -> CliResult<Value> {
    let result = isotropy(form, eps)?;
    let warnings = &result.warnings;
    Ok(match &result.kind {
        IsotropyKind::ContinuousCStar { conjugator } => json!({
            "kind": "continuous_cstar",
            "conjugator": map_to_value(conjugator),
            "warnings": warnings,
        }),
        IsotropyKind::Finite(group) => {
            let tag = group.tag();
            let report = orbit_report(form, group, eps)?;
            let orbits: Vec<Value> = report
                .orbits
                .iter()
                .map(|o| {
                    json!({
                        "kind": if o.kind == PointKind::Zero { "zero" } else { "pole" },
                        "representative": o.representative,
                        "size": o.size,
                        "full": o.full,
                    })
                })
                .collect();
            json!({
                "kind": "finite",
                "group_type": tag.kind_name(),
                "n": tag.param(),
                "order": group.order(),
                "generators": group.generators(eps).iter().map(map_to_value).collect::<Vec<_>>(),
                "orbit_report": orbits,
                "l1": report.l1,
                "l2": report.l2,
                "warnings": warnings,
            })
        }
    })
}

fn check_value(form: &RationalOneForm, group: &FiniteMobiusGroup, eps: f64) -> CliResult<Value> {
    let report = check_characterization(form, group, eps)?;
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|f| json!({ "element": map_to_value(&f.element), "point": f.point, "reason": f.reason }))
        .collect();
    let mut v = json!({
        "group": group.tag().to_string(),
        "cond1": report.cond1,
        "cond2": report.cond2,
        "cond3": report.cond3,
        "maximal": report.maximal,
        "all": report.all(),
        "failures": failures,
    });
    if group.tag() == GroupTypeTag::A5 {
        v["a5_shortcut"] = json!(check_a5_shortcut(form, group, eps)?);
    }
    Ok(v)
}

pub fn isochrony_value(form: &RationalOneForm, strict_two_pole: bool, eps: f64) -> CliResult<Value> {
    let report = isochrony_report(form, IsochronyOptions { strict_two_pole, ..Default::default() });
    let mirror = match isotropy(form, eps)?.kind {
        IsotropyKind::Finite(g) if g.order() > 1 => mirror_search(form, &g, eps),
        _ => None,
    };
    let mut v = json!({
        "residues": residues_value(form),
        "is_isochronous": report.is_isochronous,
        "rotatable": report.rotatable,
        "theta": report.theta,
        "collinearity_defect": report.collinearity_defect,
        "mirror_found": mirror.is_some(),
    });
    if let Some(m) = mirror {
        v["mirror_circle"] = json!(m.circle_points);
    }
    Ok(v)
}

fn synth(args: &SynthArgs, eps: f64) -> CliResult<RationalOneForm> {
    let (l1, l2, dif) = match (args.l1, args.l2, args.dif) {
        (Some(l1), Some(l2), d) => (l1, l2, d.unwrap_or(l1 as i32 - l2 as i32)),
        (Some(l1), None, Some(d)) => (l1, usize::try_from(l1 as i32 - d).map_err(|_| CliError::Domain("negative l2".into()))?, d),
        (None, Some(l2), Some(d)) => (usize::try_from(l2 as i32 + d).map_err(|_| CliError::Domain("negative l1".into()))?, l2, d),
        (None, None, _) | (Some(_), None, None) | (None, Some(_), None) => {
            return Err(CliError::Domain("give two of --l1, --l2, --dif".into()))
        }
    };
    let lambda = parse_complex(&args.lambda)?;
    let zeros = args.zeros.as_deref().map(parse_points).transpose()?;
    let poles = args.poles.as_deref().map(parse_points).transpose()?;
    match (zeros, poles) {
        (None, None) if !args.swap_fixed_points => {
            stratum(args.group, dif, l1, l2)?;
            Ok(sample_stratum::<f64>(args.group, l1, l2, args.seed, eps)?.with_lambda(lambda))
        }
        (z, p) => {
            let mut spec = SynthesisSpec::new(args.group, dif, z.unwrap_or_default(), p.unwrap_or_default());
            if spec.zero_reps.len() != l1 || spec.pole_reps.len() != l2 {
                return Err(CliError::Domain(format!(
                    "got {} zero and {} pole representatives for l1={l1}, l2={l2}",
                    spec.zero_reps.len(),
                    spec.pole_reps.len()
                )));
            }
            spec.lambda = lambda;
            spec.swap_fixed_points = args.swap_fixed_points;
            Ok(synthesize(&spec, eps)?)
        }
    }
}

/// Runs one command and returns what goes to stdout.
pub fn run(cli: &Cli) -> CliResult<String> {
    let eps = cli.eps;
    if !(eps > 0.0 && eps < 1e-2) {
        return Err(CliError::Domain(format!("--eps must lie in (0, 1e-2), got {eps}")));
    }
    match &cli.command {
        Command::Isotropy(a) => emit(&isotropy_value(&load_form(&a.form, eps)?, eps)?, a.out.as_deref()),
        Command::Check(a) => {
            let form = load_form(&a.io.form, eps)?;
            let group = match (&a.group, &a.group_json) {
                (Some(tag), _) => FiniteMobiusGroup::canonical(*tag),
                (None, Some(p)) => {
                    let v: Value = serde_json::from_str(&read(p)?).map_err(|e| CliError::Domain(format!("{}: {e}", p.display())))?;
                    group_from_value(&v, eps)?
                }
                (None, None) => return Err(CliError::Domain("need --group or --group-json".into())),
            };
            emit(&check_value(&form, &group, eps)?, a.io.out.as_deref())
        }
        Command::Synth(a) => emit(&form_to_value(&synth(a, eps)?), a.out.as_deref()),
        Command::Sample(a) => emit(&form_to_value(&sample_stratum::<f64>(a.group, a.l1, a.l2, a.seed, eps)?), a.out.as_deref()),
        Command::Isochrony(a) => emit(&isochrony_value(&load_form(&a.io.form, eps)?, a.strict_two_pole, eps)?, a.io.out.as_deref()),
        Command::Render(a) => {
            let form = load_form(&a.form, eps)?;
            let opts = RenderOptions {
                window: a.window,
                theta: a.theta,
                grid: (a.grid, a.grid),
                separatrices: !a.no_separatrices,
                sphere: a.sphere,
                ..RenderOptions::default()
            };
            write(&a.out, &render_svg(&form, &opts, eps))?;
            if let Some(p) = &a.json {
                let samples = sample_grid(&form, &a.window, a.samples, a.samples, a.theta);
                emit(&samples_to_json(&samples), Some(p))?;
            }
            Ok(String::new())
        }
        Command::VerifyPaper(a) => {
            let report = verify::verify_paper(eps);
            let text = if a.json { emit(&report.to_json(), None)? } else { report.table() };
            if report.all_ok() {
                Ok(text)
            } else {
                Err(CliError::Domain(format!("{text}verify-paper: {} row(s) failed", report.failures())))
            }
        }
    }
}
