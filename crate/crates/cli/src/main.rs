use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use fqlines::census::{self, BoundHypotheses, CensusOptions};
use fqlines::field::parse_field_literal;
use fqlines::groebner::{certify_smooth_with, SmoothnessOptions, DEFAULT_DEGREE_CAP};
use fqlines::projective::{LineRep, EXTENSION_CAP};
use fqlines::{gallery, FieldSpec, Polynomial};

#[derive(Parser)]
#[command(
    name = "fqlines",
    version,
    about = "Rational lines against surfaces in P^3 over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every F_q-line and check the bounds (JSON report).
    Census(CensusArgs),
    /// Certify smoothness of the surface.
    Smooth(SurfaceArgs),
    /// Decide Frobenius classicality for Phi^r.
    Classical {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// Print the auxiliary polynomial sum X_i^(q^m) F_Xi(X^(q^n)).
    Aux {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        n: u32,
    },
    /// Hessian determinant and whether it vanishes on the surface.
    Hessian(SurfaceArgs),
    /// Every bound for given q and d (JSON), with hypotheses assumed.
    Bounds {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: u64,
        /// Number of rational points, used by the point-dependent bounds.
        #[arg(long, default_value_t = 0)]
        points: u64,
    },
    /// Classify one line given as "a0,a1,a2,a3|b0,b1,b2,b3".
    ClassifyLine {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        line: String,
    },
    /// Seeded search for smooth members of the space-filling family.
    Search {
        #[arg(long)]
        field: String,
        /// Number of candidates.
        #[arg(long, default_value_t = 100)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a gallery surface.
    Gallery(SurfaceArgs),
}

#[derive(Args, Clone)]
struct SurfaceArgs {
    /// Field literal "p" or "p^e".
    #[arg(long)]
    field: String,
    /// Polynomial text, or a path to a file containing it.
    #[arg(long, conflicts_with = "gallery")]
    surface: Option<String>,
    /// Gallery surface: katz, fermat, spacefilling, nonreflexive, random.
    #[arg(long)]
    gallery: Option<String>,
    /// Semicolon-separated forms for spacefilling (6) or nonreflexive (4).
    #[arg(long)]
    forms: Option<String>,
    /// Degree for the random gallery surface.
    #[arg(long, default_value_t = 3)]
    d: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Attempts for the random gallery surface.
    #[arg(long, default_value_t = 100)]
    attempts: u32,
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    groebner_cap: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long)]
    workers: Option<usize>,
    /// Largest extension degree for point scans (at most 3).
    #[arg(long, default_value_t = 2)]
    ext_cap: u32,
    /// Largest field order accepted.
    #[arg(long, default_value_t = 13)]
    budget: u64,
    /// Treat the surface as geometrically irreducible and reduced.
    #[arg(long)]
    assume_irreducible: bool,
    /// Skip smoothness, classicality and Gamma checks.
    #[arg(long)]
    no_hypotheses: bool,
}

/// A configuration or input problem; reported with exit code 2.
struct ConfigError(String);

impl<E: std::fmt::Display> From<E> for ConfigError {
    fn from(e: E) -> Self {
        ConfigError(e.to_string())
    }
}

type CliResult<T> = Result<T, ConfigError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(ConfigError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Census(args) => cmd_census(args),
        Command::Smooth(s) => {
            let (_, poly, _) = load_surface(&s)?;
            let opts = SmoothnessOptions {
                degree_cap: s.groebner_cap,
                ..Default::default()
            };
            emit_json(&certify_smooth_with(&poly, &opts), s.out.as_deref())?;
            Ok(0)
        }
        Command::Classical { surface, r } => {
            let (_, poly, _) = load_surface(&surface)?;
            #[derive(Serialize)]
            struct Out {
                r: u32,
                value: bool,
                method: &'static str,
            }
            let value = census::is_frobenius_classical(&poly, r)?;
            emit_json(
                &Out {
                    r,
                    value,
                    method: "divisibility",
                },
                surface.out.as_deref(),
            )?;
            Ok(0)
        }
        Command::Aux { surface, m, n } => {
            let (_, poly, _) = load_surface(&surface)?;
            emit_text(
                &census::aux_surface(&poly, m, n)?.to_string(),
                surface.out.as_deref(),
            )?;
            Ok(0)
        }
        Command::Hessian(s) => {
            let (_, poly, _) = load_surface(&s)?;
            #[derive(Serialize)]
            struct Out {
                determinant: String,
                vanishes_on_surface: bool,
            }
            let det = poly.hessian_det()?;
            let vanishes = census::hessian_vanishes_on(&poly)?;
            emit_json(
                &Out {
                    determinant: det.to_string(),
                    vanishes_on_surface: vanishes,
                },
                s.out.as_deref(),
            )?;
            Ok(0)
        }
        Command::Bounds { q, d, points } => {
            if q < 2 || d < 1 {
                return Err(ConfigError("bounds need q >= 2 and d >= 1".into()));
            }
            let hyp = BoundHypotheses {
                smooth: true,
                classical: Some(true),
                gamma_zero_dimensional: true,
                contained_lines: Some(0),
            };
            emit_json(&census::bound_sheet(q, d, points, &hyp), None)?;
            Ok(0)
        }
        Command::ClassifyLine { surface, line } => {
            let (field, poly, _) = load_surface(&surface)?;
            let l = LineRep::parse(&line, &field)?;
            emit_json(&census::classify_line(&poly, &l)?, surface.out.as_deref())?;
            Ok(0)
        }
        Command::Search {
            field,
            budget,
            seed,
            out,
        } => {
            let field = parse_field_literal(&field)?;
            if budget == 0 {
                return Err(ConfigError("search budget must be at least 1".into()));
            }
            emit_json(
                &gallery::search_smooth_spacefilling(&field, budget, seed),
                out.as_deref(),
            )?;
            Ok(0)
        }
        Command::Gallery(s) => {
            if s.gallery.is_none() {
                return Err(ConfigError("--gallery is required".into()));
            }
            let (_, poly, _) = load_surface(&s)?;
            emit_text(&poly.to_string(), s.out.as_deref())?;
            Ok(0)
        }
    }
}

fn cmd_census(args: CensusArgs) -> CliResult<u8> {
    if args.ext_cap == 0 || args.ext_cap > EXTENSION_CAP {
        return Err(ConfigError(format!(
            "--ext-cap must lie in 1..={EXTENSION_CAP}"
        )));
    }
    if args.workers == Some(0) {
        return Err(ConfigError("--workers must be positive".into()));
    }
    let (_, poly, source) = load_surface(&args.surface)?;
    let opts = CensusOptions {
        workers: args.workers,
        degree_cap: args.surface.groebner_cap,
        extension_cap: args.ext_cap,
        max_q: args.budget,
        assume_irreducible: args.assume_irreducible,
        check_hypotheses: !args.no_hypotheses,
        ..Default::default()
    };
    let mut report = census::full_census_with(&poly, &opts)?;
    report.surface.source = source;
    emit_json(&report, args.surface.out.as_deref())?;
    let violations = report.violations();
    if violations.is_empty() {
        Ok(0)
    } else {
        eprintln!("bound violated: {}", violations.join(", "));
        Ok(1)
    }
}

fn split_forms(field: &FieldSpec, text: &str) -> CliResult<Vec<Polynomial>> {
    text.split(';')
        .map(|t| Polynomial::parse(t, field, 4).map_err(ConfigError::from))
        .collect()
}

/// Resolves the field and surface; the string names where the surface came from.
fn load_surface(args: &SurfaceArgs) -> CliResult<(FieldSpec, Polynomial, String)> {
    let field = parse_field_literal(&args.field)?;
    match (&args.surface, &args.gallery) {
        (Some(text), None) => {
            let path = Path::new(text);
            let (body, source) = if path.is_file() {
                (std::fs::read_to_string(path)?, format!("file:{text}"))
            } else {
                (text.clone(), "inline".to_string())
            };
            let poly = Polynomial::parse(body.trim(), &field, 4)?;
            Ok((field, poly, source))
        }
        (None, Some(name)) => {
            let poly = gallery_surface(&field, name, args)?;
            Ok((field, poly, format!("gallery:{name}")))
        }
        _ => Err(ConfigError(
            "give exactly one of --surface or --gallery".into(),
        )),
    }
}

fn gallery_surface(field: &FieldSpec, name: &str, args: &SurfaceArgs) -> CliResult<Polynomial> {
    let forms = |n: usize| -> CliResult<Vec<Polynomial>> {
        let text = args.forms.as_deref().ok_or_else(|| {
            ConfigError(format!(
                "--forms with {n} semicolon-separated forms is required"
            ))
        })?;
        let forms = split_forms(field, text)?;
        if forms.len() != n {
            return Err(ConfigError(format!(
                "expected {n} forms, got {}",
                forms.len()
            )));
        }
        Ok(forms)
    };
    Ok(match name {
        "katz" => gallery::katz_surface(field),
        "fermat" => gallery::fermat_surface(field),
        "spacefilling" => {
            let f = forms(6)?;
            gallery::spacefilling_surface(field, &f.try_into().unwrap())?
        }
        "nonreflexive" => {
            let f = forms(4)?;
            gallery::nonreflexive_family(field, &f.try_into().unwrap())?
        }
        "random" => gallery::random_smooth_surface(field, args.d, args.seed, args.attempts)?,
        other => return Err(ConfigError(format!("unknown gallery surface {other:?}"))),
    })
}

fn emit_text(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> CliResult<()> {
    emit_text(&serde_json::to_string_pretty(value)?, out)
}
