use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use quartic_finsler::catalog::{Family, Preset};
use quartic_finsler::classifier::{
    classify_direction, indicatrix, parameter_map, scan_circle, scan_sphere, DEFAULT_SPHERE_POINTS,
};
use quartic_finsler::error::{Error, Result};
use quartic_finsler::lagrangian::{BranchConvention, LagrangianSpec, DEFAULT_NULL_TOL};
use quartic_finsler::metric::{cartan_at, metric_at, Tolerances, DEFAULT_EIG_TOL};
use quartic_finsler::output::{self, Format};
use quartic_finsler::premetric::{assemble_chi, fresnel_tensor, BlockView};
use quartic_finsler::quartic::{load_quartic, save_quartic, SymQuartic};
use quartic_finsler::reproduce::{reproduce, ReproduceConfig};

#[derive(Parser)]
#[command(name = "qfinsler", version, about = "Pseudo-Finsler geometry of quartic forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Q, L and F at a direction
    Eval {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
        v: Vec1,
    },
    /// Metric, determinant and signature at a direction
    Metric {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
        v: Vec1,
        /// Also report the Cartan tensor
        #[arg(long)]
        cartan: bool,
    },
    /// Set label of a direction
    Classify {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
        v: Vec1,
    },
    /// Classify the unit circle (2D) or a quasi-random sample of the sphere (4D)
    Scan {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 720)]
        resolution: usize,
        /// Sample size for four-dimensional quartics
        #[arg(long, default_value_t = DEFAULT_SPHERE_POINTS)]
        points: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Determinant sign over a (k, angle) grid for a quartic family
    Map {
        /// power_sum, power_diff, ee, el or ll
        #[arg(long)]
        family: String,
        #[arg(long, value_parser = parse_pair, default_value = "1,50")]
        k_range: (f64, f64),
        #[arg(long, value_parser = parse_pair)]
        angle_range: Option<(f64, f64)>,
        /// Cells as `NKxNANGLE`
        #[arg(long, value_parser = parse_grid, default_value = "64x64")]
        grid: (usize, usize),
        /// Write the det = 0 curve to this CSV file
        #[arg(long)]
        curve: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Level set L = level
    Indicatrix {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        level: f64,
        #[arg(long, default_value_t = 512)]
        resolution: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Fresnel quartic of a medium
    Fresnel {
        /// vacuum or uniaxial(eps_o,eps_e,mu)
        #[arg(long, conflicts_with = "chi")]
        preset: Option<String>,
        /// JSON file of constitutive blocks {eps, pi, gamma, gamma_tilde}
        #[arg(long)]
        chi: Option<PathBuf>,
        #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
        q: Option<Vec1>,
        /// Write the quartic as JSON to this path
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Run the reference catalog and report pass/fail per item
    Reproduce {
        #[arg(long, default_value_t = 720)]
        resolution: usize,
        #[arg(long, default_value_t = 4096)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "text")]
        format: String,
    },
}

// a bare `Vec<f64>` field would make clap collect repeated flags
type Vec1 = Vec<f64>;

#[derive(Args)]
struct Source {
    /// euclid_square, power_sum, lorentz_square, power_diff, ee(k), el(k),
    /// ll(k), vacuum, uniaxial(eps_o,eps_e,mu)
    #[arg(long, conflicts_with = "quartic")]
    preset: Option<String>,
    /// JSON quartic file
    #[arg(long)]
    quartic: Option<PathBuf>,
    /// Family parameter for a bare ee/el/ll preset
    #[arg(long)]
    k: Option<f64>,
    /// restricted, abs or signed
    #[arg(long, default_value = "signed")]
    branch: String,
    /// Null-set tolerance relative to |v|^4 |M|
    #[arg(long, default_value_t = DEFAULT_NULL_TOL)]
    tol: f64,
    /// Zero-eigenvalue tolerance relative to the largest eigenvalue
    #[arg(long, default_value_t = DEFAULT_EIG_TOL)]
    eig_tol: f64,
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long, default_value = "csv")]
    format: String,
}

fn parse_vec(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad number `{x}`")))
        .collect()
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    match parse_vec(s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(format!("expected two numbers `a,b`, got `{s}`")),
    }
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected NxM, got `{s}`"))?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad grid size `{t}`"));
    Ok((p(a)?, p(b)?))
}

impl Source {
    fn tolerances(&self) -> Result<Tolerances> {
        if !(self.tol > 0.0 && self.eig_tol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        Ok(Tolerances {
            null: self.tol,
            eig: self.eig_tol,
        })
    }

    fn quartic(&self) -> Result<SymQuartic> {
        match (&self.preset, &self.quartic) {
            (Some(p), None) => Preset::parse(p, self.k)?.quartic(),
            (None, Some(path)) => load_quartic(&std::fs::read_to_string(path)?),
            _ => Err(Error::InvalidParameter("give exactly one of --preset or --quartic".into())),
        }
    }

    fn spec(&self) -> Result<(LagrangianSpec, Tolerances)> {
        let branch: BranchConvention = self.branch.parse()?;
        Ok((LagrangianSpec::new(self.quartic()?, branch), self.tolerances()?))
    }
}

impl Output {
    fn format(&self) -> Result<Format> {
        self.format.parse()
    }

    fn path(&self) -> Option<&Path> {
        self.out.as_deref()
    }
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    output::write_text(None, &output::to_json(value)?)
}

fn check_len(spec: &LagrangianSpec, v: &[f64]) -> Result<()> {
    if v.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: v.len(),
        });
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Eval { src, v } => {
            let (spec, tol) = src.spec()?;
            check_len(&spec, &v)?;
            print_json(&json!({
                "v": v,
                "q": spec.q(&v),
                "lagrangian": spec.lagrangian_value(&v),
                "finsler": spec.finsler_function(&v),
                "sign": spec.sign_class(&v, tol.null),
            }))?;
        }
        Command::Metric { src, v, cartan } => {
            let (spec, tol) = src.spec()?;
            check_len(&spec, &v)?;
            let sample = metric_at(&spec, &v, &tol)?;
            let mut value = serde_json::to_value(&sample)?;
            if cartan {
                value["cartan"] = match cartan_at(&spec, &v, &tol) {
                    Ok(c) => serde_json::to_value(c)?,
                    Err(_) => serde_json::Value::Null,
                };
            }
            print_json(&value)?;
        }
        Command::Classify { src, v } => {
            let (spec, tol) = src.spec()?;
            check_len(&spec, &v)?;
            let label = classify_direction(&spec, &v, &tol)?;
            print_json(&serde_json::to_value(label)?)?;
        }
        Command::Scan {
            src,
            resolution,
            points,
            out,
        } => {
            let (spec, tol) = src.spec()?;
            let format = out.format()?;
            let text = if spec.dim() == 2 {
                let map = scan_circle(&spec, resolution, &tol)?;
                match format {
                    Format::Csv => output::scan_csv(&map),
                    Format::Json => output::to_json(&map)?,
                }
            } else {
                output::to_json(&scan_sphere(&spec, points, &tol)?)?
            };
            output::write_text(out.path(), &text)?;
        }
        Command::Map {
            family,
            k_range,
            angle_range,
            grid,
            curve,
            out,
        } => {
            let family = Family::parse(&family)?;
            let map = parameter_map(family, k_range, angle_range.unwrap_or((0.0, 2.0 * PI)), grid)?;
            output::write_text(out.path(), &output::emit_map(&map, out.format()?)?)?;
            if let Some(path) = curve {
                output::write_text(Some(&path), &output::curve_csv(&map))?;
            }
        }
        Command::Indicatrix {
            src,
            level,
            resolution,
            out,
        } => {
            let (spec, _) = src.spec()?;
            let ind = indicatrix(&spec, level, resolution)?;
            let text = match out.format()? {
                Format::Csv => output::indicatrix_csv(&ind),
                Format::Json => output::to_json(&ind)?,
            };
            output::write_text(out.path(), &text)?;
        }
        Command::Fresnel { preset, chi, q, save } => {
            let quartic = match (preset, chi) {
                (Some(p), None) => Preset::parse(&p, None)?.fresnel_quartic()?,
                (None, Some(path)) => {
                    let blocks: BlockView = serde_json::from_str(&std::fs::read_to_string(path)?)?;
                    fresnel_tensor(&assemble_chi(&blocks)).into_quartic()
                }
                _ => return Err(Error::InvalidParameter("give exactly one of --preset or --chi".into())),
            };
            if let Some(path) = save {
                output::write_text(Some(&path), &save_quartic(&quartic)?)?;
            }
            let mut value = json!({ "quartic": quartic.to_literal() });
            if let Some(q) = q {
                value["q"] = json!(q);
                value["value"] = json!(quartic.try_eval(&q)?);
            }
            print_json(&value)?;
        }
        Command::Reproduce {
            resolution,
            points,
            out,
            format,
        } => {
            let cfg = ReproduceConfig {
                resolution,
                sphere_points: points,
                ..ReproduceConfig::default()
            };
            let report = reproduce(&cfg)?;
            let text = match format.as_str() {
                "text" => report.to_text(),
                "json" => output::to_json(&report)?,
                other => return Err(Error::InvalidParameter(format!("unknown format `{other}`"))),
            };
            output::write_text(out.as_deref(), &text)?;
            return Ok(report.all_passed());
        }
    }
    Ok(true)
}

fn error_json(kind: &str, message: &str) -> String {
    json!({ "error": { "kind": kind, "message": message } }).to_string()
}

fn init_threads() -> Result<()> {
    if let Ok(s) = std::env::var("QF_THREADS") {
        let n: usize = s
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::InvalidParameter(format!("QF_THREADS must be a positive integer, got `{s}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", error_json("usage", e.to_string().trim()));
            return ExitCode::from(2);
        }
    };
    match init_threads().and_then(|_| run(cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("{}", error_json(e.kind(), &e.to_string()));
            ExitCode::FAILURE
        }
    }
}
