//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification or number-theoretic check came out negative
//! (failed verification, non-split prime, non-coprime pair), 2 usage, input or I/O errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::design::{
    contiguous_core, cross_difference, crt_array, hscrt_array, hscrt_array_with_strategy,
    physical_metrics, reduce_residues, sum_coarray, verify_crt_bijection, verify_hole_free,
    ArrayDesign, Strategy, Variant,
};
use crate::embedding::matrix_rep;
use crate::error::Error;
use crate::io::{export_csv, export_json, import_json};
use crate::ring::{are_coprime, bezout, conjugate_pair_coprime, ring_from_d};
use crate::splitting::split_prime;
use crate::svg::{render_svg, RenderOptions};

#[derive(Parser, Debug)]
#[command(
    name = "quadcrt",
    version,
    about = "Coprime planar sensor arrays over imaginary quadratic integer rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor a rational prime into conjugate prime ideals
    #[command(allow_negative_numbers = true)]
    Split(SplitArgs),
    /// Construct a CRT or hole-free (HSCRT) design
    #[command(allow_negative_numbers = true)]
    Design(DesignArgs),
    /// Summarize the cross-difference or sum coarray of a design file
    Coarray(CoarrayArgs),
    /// Check the structural claims of a design file
    Verify(VerifyArgs),
    /// Draw a design file as SVG
    Render(RenderArgs),
    /// Test two quadratic integers for coprimality
    #[command(allow_negative_numbers = true)]
    Coprime(CoprimeArgs),
}

#[derive(Args, Debug)]
struct SplitArgs {
    #[arg(short = 'D')]
    d: i64,
    #[arg(short = 'p')]
    p: i64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    HalfOpen,
    ClosedCell,
}

#[derive(Args, Debug)]
struct DesignArgs {
    #[arg(short = 'D')]
    d: i64,
    #[arg(short = 'p')]
    p: i64,
    /// Build the hole-free symmetric variant
    #[arg(long)]
    hole_free: bool,
    /// Force an enumeration strategy for the hole-free variant (skips the fallback)
    #[arg(long, value_enum, requires = "hole_free")]
    strategy: Option<StrategyArg>,
    /// Minimum sensor spacing recorded in the document
    #[arg(long, default_value_t = 1.0)]
    spacing: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; standard output when omitted
    #[arg(short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoarrayArgs {
    file: PathBuf,
    /// Use the sum coarray instead of the cross-difference coarray
    #[arg(long)]
    sum: bool,
    /// Check coverage of the contiguous core (HSCRT) or of all residues (CRT)
    #[arg(long)]
    check_contiguous: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    file: PathBuf,
}

#[derive(Args, Debug)]
struct RenderArgs {
    file: PathBuf,
    #[arg(short = 'o')]
    output: PathBuf,
    #[arg(long)]
    show_voronoi: bool,
    #[arg(long)]
    coarray: bool,
}

#[derive(Args, Debug)]
struct CoprimeArgs {
    #[arg(short = 'D')]
    d: i64,
    /// First element as `m1,m2`
    #[arg(long = "m", value_parser = parse_pair, allow_hyphen_values = true)]
    m: (i64, i64),
    /// Second element as `n1,n2`
    #[arg(long = "n", value_parser = parse_pair, allow_hyphen_values = true)]
    n: (i64, i64),
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two integers 'a,b', got '{s}'"))?;
    let num = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| format!("malformed integer '{}'", t.trim()))
    };
    Ok((num(a)?, num(b)?))
}

/// An error carrying its exit code.
struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotSplit { .. } | Error::NotCoprime | Error::HoleFreeFailed { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn io_fail(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 2,
        msg: format!("{}: {e}", path.display()),
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let text = e.to_string();
                    let line = text.lines().next().unwrap_or("usage error");
                    let _ = writeln!(err, "{line}");
                    2
                }
            };
        }
    };
    let res = match cli.command {
        Command::Split(a) => cmd_split(a, out),
        Command::Design(a) => cmd_design(a, out),
        Command::Coarray(a) => cmd_coarray(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Render(a) => cmd_render(a, out),
        Command::Coprime(a) => cmd_coprime(a, out),
    };
    match res {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn load(path: &Path) -> std::result::Result<ArrayDesign, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_fail(path, e))?;
    import_json(&text).map_err(|e| Failure {
        code: 2,
        msg: format!("{}: {e}", path.display()),
    })
}

fn emit(out: &mut dyn Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes()).map_err(|e| Failure {
        code: 2,
        msg: e.to_string(),
    })?;
    Ok(0)
}

fn cmd_split(a: SplitArgs, out: &mut dyn Write) -> Outcome {
    let ring = ring_from_d(a.d)?;
    let (pi, pih) = split_prime(a.p, &ring)?;
    let text = format!(
        "<{p}> = <{pi}><{pih}> in Z[{s}], D = {d}\n{pi}\tnorm {n1}\n{pih}\tnorm {n2}\n",
        p = a.p,
        s = ring.symbol(),
        d = ring.d(),
        n1 = pi.norm()?,
        n2 = pih.norm()?,
    );
    emit(out, &text)
}

fn cmd_design(a: DesignArgs, out: &mut dyn Write) -> Outcome {
    if !(a.spacing.is_finite() && a.spacing > 0.0) {
        return Err(Failure {
            code: 2,
            msg: format!("spacing must be positive, got {}", a.spacing),
        });
    }
    let ring = ring_from_d(a.d)?;
    let mut design = match (a.hole_free, a.strategy) {
        (false, _) => crt_array(&ring, a.p)?,
        (true, None) => hscrt_array(&ring, a.p)?,
        (true, Some(s)) => {
            let s = match s {
                StrategyArg::HalfOpen => Strategy::HalfOpen,
                StrategyArg::ClosedCell => Strategy::ClosedCell,
            };
            hscrt_array_with_strategy(&ring, a.p, s)?
        }
    };
    design.spacing = a.spacing;
    let text = match a.format {
        Format::Json => export_json(&design),
        Format::Csv => export_csv(&design),
    };
    match a.output {
        None => emit(out, &text),
        Some(path) => {
            std::fs::write(&path, text).map_err(|e| io_fail(&path, e))?;
            let mut note = format!(
                "{} design, D = {}, p = {}: {} sensors -> {}\n",
                design.variant.as_str(),
                ring.d(),
                a.p,
                design.sensor_count(),
                path.display()
            );
            if design.variant == Variant::Hscrt {
                let expected = 5 * a.p - 4;
                if design.sensor_count() as i64 != expected {
                    note.push_str(&format!(
                        "note: {} strategy gives {} sensors, formula 5p-4 = {expected}\n",
                        design.strategy.as_str(),
                        design.sensor_count()
                    ));
                }
            }
            emit(out, &note)
        }
    }
}

fn cmd_coarray(a: CoarrayArgs, out: &mut dyn Write) -> Outcome {
    let design = load(&a.file)?;
    let co = if a.sum {
        sum_coarray(&design)
    } else {
        cross_difference(&design)
    };
    let kind = if a.sum { "sum" } else { "cross-difference" };
    let mut text = format!(
        "{kind} coarray: {} distinct lags from {} pairs, max multiplicity {}\n",
        co.len(),
        co.total(),
        co.entries.values().max().copied().unwrap_or(0)
    );
    let mut code = 0;
    if a.check_contiguous {
        match design.variant {
            Variant::Hscrt => {
                let core = contiguous_core(&design.ring, design.p)?;
                let missing = core.iter().filter(|c| !co.contains(c)).count();
                text.push_str(&format!(
                    "contiguous core: {}/{} covered\n",
                    core.len() - missing,
                    core.len()
                ));
                if missing > 0 {
                    code = 1;
                }
            }
            Variant::Crt => {
                let hit = reduce_residues(&design, &co);
                let want = (design.p * design.p) as usize;
                text.push_str(&format!("residues mod pZ[q]: {hit}/{want} covered\n"));
                if hit != want {
                    code = 1;
                }
            }
        }
    }
    emit(out, &text)?;
    Ok(code)
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Outcome {
    let design = load(&a.file)?;
    let (passed, text) = match design.variant {
        Variant::Crt => {
            let r = verify_crt_bijection(&design)?;
            let mut t = format!(
                "CRT bijection: {}/{} residues, {} pairs, {} sensors (expected {})\n",
                r.residues_hit, r.residues_expected, r.pairs, r.sensor_count, r.expected_sensors
            );
            for c in r.collisions.iter().take(5) {
                let pairs: Vec<String> = c
                    .pairs
                    .iter()
                    .map(|(z1, z2)| format!("{z1}-{z2}"))
                    .collect();
                t.push_str(&format!(
                    "collision at {}: {}\n",
                    c.residue,
                    pairs.join(", ")
                ));
            }
            (r.passed, t)
        }
        Variant::Hscrt => {
            let r = verify_hole_free(&design)?;
            let m = physical_metrics(&design)?;
            let mut t = format!(
                "hole-free core: {}/{} covered, sum set == difference set: {}\n\
                 sensors: {} (5p-4 = {}), aperture perimeter {:.6}, area {:.6}\n",
                r.covered,
                r.core_size,
                r.sum_equals_difference,
                m.sensor_count,
                m.expected_sensor_count,
                m.perimeter,
                m.area
            );
            if let Some(first) = r.missing.first() {
                t.push_str(&format!(
                    "missing {} core points, first {first}\n",
                    r.missing.len()
                ));
            }
            (r.passed && r.sum_equals_difference, t)
        }
    };
    emit(out, &text)?;
    emit(out, if passed { "PASS\n" } else { "FAIL\n" })?;
    Ok(if passed { 0 } else { 1 })
}

fn cmd_render(a: RenderArgs, out: &mut dyn Write) -> Outcome {
    let design = load(&a.file)?;
    let svg = render_svg(
        &design,
        &RenderOptions {
            show_voronoi: a.show_voronoi,
            coarray: a.coarray,
        },
    );
    std::fs::write(&a.output, svg).map_err(|e| io_fail(&a.output, e))?;
    emit(out, &format!("wrote {}\n", a.output.display()))
}

fn cmd_coprime(a: CoprimeArgs, out: &mut dyn Write) -> Outcome {
    let ring = ring_from_d(a.d)?;
    let m = ring.elem(a.m.0, a.m.1);
    let n = ring.elem(a.n.0, a.n.1);
    let coprime = are_coprime(&m, &n)?;
    let mut text = format!(
        "{m} and {n}: {}\n",
        if coprime { "coprime" } else { "not coprime" }
    );
    if n == m.try_conjugate()? {
        text.push_str(&format!(
            "conjugate pair criterion: {}\n",
            conjugate_pair_coprime(m.m1(), m.m2(), &ring)
        ));
    }
    if coprime && ring.is_euclidean() {
        let (alpha, beta) = bezout(&m, &n)?;
        text.push_str(&format!(
            "bezout: ({m})({alpha}) + ({n})({beta}) = 1\nB_alpha = {}, B_beta = {}\n",
            matrix_rep(&alpha),
            matrix_rep(&beta)
        ));
    }
    emit(out, &text)?;
    Ok(if coprime { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("quadcrt").chain(args.iter().copied());
        let code = run_cli(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn pair_parsing() {
        assert_eq!(parse_pair("-1,4"), Ok((-1, 4)));
        assert_eq!(parse_pair(" 3 , -2 "), Ok((3, -2)));
        assert!(parse_pair("3").is_err());
        assert!(parse_pair("x,1").is_err());
    }

    #[test]
    fn split_output() {
        let (code, out, _) = run(&["split", "-D", "-1", "-p", "5"]);
        assert_eq!(code, 0);
        assert!(out.contains("2+1i") && out.contains("2-1i"));
        assert_eq!(out.matches("norm 5").count(), 2);
    }

    #[test]
    fn split_inert() {
        let (code, _, err) = run(&["split", "-D", "-1", "-p", "7"]);
        assert_eq!(code, 1);
        assert!(err.contains("inert prime"));
        assert_eq!(err.lines().count(), 1);
    }

    #[test]
    fn usage_errors() {
        for args in [
            &["split", "-D", "x", "-p", "5"][..],
            &["split", "--bogus"],
            &["nosuch"],
            &["split", "-D", "-4", "-p", "5"],
            &["coprime", "-D", "-1", "--m", "1", "--n", "1,1"],
        ] {
            let (code, _, err) = run(args);
            assert_eq!(code, 2, "{args:?}");
            assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        }
    }

    #[test]
    fn coprime_command() {
        let (code, out, _) = run(&["coprime", "-D", "-3", "--m", "1,2", "--n", "3,-2"]);
        assert_eq!(code, 0);
        assert!(out.contains("coprime") && out.contains("criterion: true"));
        let (code, _, _) = run(&["coprime", "-D", "-1", "--m", "1,1", "--n", "1,-1"]);
        assert_eq!(code, 1);
    }
}
