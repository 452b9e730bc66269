use std::f64::consts::PI;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ultrapar::discreteness::{classify, orbit_necessary_check, planar_orbit_bruteforce, sweep, SweepSpec, Verdict};
use ultrapar::lattice::{check_translations, verify_relations};
use ultrapar::report::{self, OrbitPlot};
use ultrapar::triangle::{case_config, case_of, CaseTag, TriangleType};
use ultrapar::{Error, Exec};

/// Largest word length accepted by `orbit`.
const MAX_LEN_CAP: usize = 10;

#[derive(Parser, Debug)]
#[command(name = "ultrapar", version, about = "Ultra-parallel complex hyperbolic triangle groups [m,m,0;n1,n2,2]")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Triangle type, e.g. "[1.5,1.5,0;2,3,2]". The distance may be written as
    /// the letter m and supplied with --m.
    #[arg(long = "type", global = true, default_value = "[m,m,0;2,3,2]")]
    ty: String,

    /// Angular invariant in radians; accepts forms like pi, 2pi/3, 2*pi/3.
    #[arg(long, global = true, value_parser = parse_angle)]
    alpha: Option<f64>,

    /// Distance m (overrides the value in --type).
    #[arg(long, global = true, value_parser = parse_angle)]
    m: Option<f64>,

    #[arg(long = "m-range", global = true, value_parser = parse_range, default_value = "0:3")]
    m_range: (f64, f64),

    #[arg(long = "alpha-range", global = true, value_parser = parse_range, default_value = "0:2pi")]
    alpha_range: (f64, f64),

    /// Sweep resolution, m cells x alpha cells.
    #[arg(long, global = true, value_parser = parse_res, default_value = "200x200")]
    res: (usize, usize),

    #[arg(long = "max-len", global = true, default_value_t = 6)]
    max_len: usize,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Check every relation and closed-form translation for the case.
    Verify,
    /// Classify one (m, alpha) point.
    Classify,
    /// Classify a grid of (m, alpha) points.
    Sweep,
    /// Planar orbit points f(0) for words up to --max-len.
    Orbit,
    /// Lattice generators, translations and the commutator relation.
    LatticeInfo,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
    Svg,
}

/// Real number or multiple of pi: "1.5", "pi", "-pi/2", "2pi/3", "2*pi/3".
fn parse_angle(s: &str) -> Result<f64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (t.as_str(), None),
    };
    let coef = match num.strip_suffix("pi") {
        Some(c) => match c.strip_suffix('*').unwrap_or(c) {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| format!("cannot read {s:?} as a number"))?,
        },
        None => return Err(format!("cannot read {s:?} as a number")),
    };
    let den = match den {
        Some(d) => d.parse::<f64>().map_err(|_| format!("bad denominator in {s:?}"))?,
        None => 1.0,
    };
    Ok(coef * PI / den)
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let (a, b) = (parse_angle(a)?, parse_angle(b)?);
    if !(b > a) {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}

fn parse_res(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected NxM, got {s:?}"))?;
    let a = a.trim().parse().map_err(|_| format!("bad resolution {s:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad resolution {s:?}"))?;
    Ok((a, b))
}

enum Failure {
    /// Exit 1.
    Verification(String),
    /// Exit 2.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Case tag and distance m from --type and --m.
fn resolve(cli: &Cli, need_m: bool) -> Result<(CaseTag, f64), Failure> {
    let compact: String = cli.ty.chars().filter(|c| !c.is_whitespace()).collect();
    let placeholder = compact.starts_with("[m,m,");
    let parsed: TriangleType = if placeholder { compact.replacen("[m,m,", "[0,0,", 1) } else { compact }.parse()?;
    let m = match (cli.m, placeholder) {
        (Some(m), _) => m,
        (None, false) => parsed.m1,
        (None, true) if !need_m => 0.0,
        (None, true) => return Err(Failure::Usage("no distance given: put it in --type or pass --m".into())),
    };
    if !(m >= 0.0 && m.is_finite()) {
        return Err(Failure::Usage(format!("distance m = {m} must be a finite non-negative number")));
    }
    let tag = case_of(&parsed.with_m(m)?)?;
    Ok((tag, m))
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            stdout(text);
            Ok(())
        }
    }
}

/// Writes to standard output, treating a closed pipe as normal termination.
fn stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let alpha = cli.alpha.unwrap_or(PI);
    match cli.command {
        Command::Verify => {
            let (tag, m) = resolve(cli, true)?;
            let cfg = case_config(tag, m, alpha)?;
            let rep = verify_relations(tag, &cfg, cli.tol)?;
            let tr = check_translations(tag, &cfg)?;
            let v = report::verify_json(tag, &cfg, cli.tol, &rep, &tr);
            emit(cli, &report::to_json_string(&v))?;
            if v["passed"] != serde_json::Value::Bool(true) {
                return Err(Failure::Verification(format!(
                    "{tag}: verification failed (max residual {})",
                    report::fmt_num(rep.max_residual())
                )));
            }
        }
        Command::Classify => {
            let (tag, m) = resolve(cli, true)?;
            let cl = classify(tag, m, alpha)?;
            let nec = if cl.verdict == Verdict::DiscreteCertified {
                Some(orbit_necessary_check(tag, m, alpha, 8, Exec::default())?)
            } else {
                None
            };
            let json = report::to_json_string(&report::classify_json(&cl, nec.as_ref()));
            match (&cli.out, cli.format) {
                (Some(_), _) => {
                    stdout(&format!("{}\n", cl.verdict));
                    emit(cli, &json)?;
                }
                (None, Some(Format::Json)) => emit(cli, &json)?,
                (None, _) => stdout(&format!("{}\n{json}", cl.verdict)),
            }
        }
        Command::Sweep => {
            let (tag, _) = resolve(cli, false)?;
            let spec = SweepSpec {
                tag,
                m_range: cli.m_range,
                alpha_range: cli.alpha_range,
                res_m: cli.res.0,
                res_alpha: cli.res.1,
            };
            let grid = sweep(&spec)?;
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => report::sweep_csv(&grid)?,
                Format::Json => report::to_json_string(&report::sweep_json(&grid)),
                Format::Svg => report::sweep_svg(&grid),
            };
            emit(cli, &text)?;
        }
        Command::Orbit => {
            let (tag, m) = resolve(cli, true)?;
            if cli.max_len > MAX_LEN_CAP {
                return Err(Error::CapExceeded { len: cli.max_len, cap: MAX_LEN_CAP }.into());
            }
            let cfg = case_config(tag, m, alpha)?;
            let pts = planar_orbit_bruteforce(&cfg, cli.max_len, Exec::default());
            eprintln!("{} orbit points", pts.len());
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => report::orbit_csv(&pts),
                Format::Json => report::to_json_string(&report::orbit_json(tag, &cfg, cli.max_len, &pts)),
                Format::Svg => {
                    let title = format!(
                        "{tag} orbit f(0), m={}, alpha={}, words up to length {}",
                        report::fmt_num(m),
                        report::fmt_num(alpha),
                        cli.max_len
                    );
                    OrbitPlot::new(pts, title)?.to_svg()
                }
            };
            emit(cli, &text)?;
        }
        Command::LatticeInfo => {
            let (tag, m) = resolve(cli, true)?;
            let cfg = case_config(tag, m, alpha)?;
            emit(cli, &report::to_json_string(&report::lattice_info_json(tag, &cfg)))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("ultrapar: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("ultrapar: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("1.5").unwrap(), 1.5);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("2*PI/3").unwrap(), 2.0 * PI / 3.0);
        assert!(parse_angle("tau").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0:2pi").unwrap(), (0.0, 2.0 * PI));
        assert!(parse_range("3:1").is_err());
        assert_eq!(parse_res("200x100").unwrap(), (200, 100));
    }
}
