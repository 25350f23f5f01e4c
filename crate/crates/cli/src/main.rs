use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mkw_core::cointeraction::{rho_graft, translate, TranslationVector};
use mkw_core::embedding::{canonical_lift, char_convolve, embed_rough_path, phi, phi_inverse, TruncChar};
use mkw_core::forest::enumerate_forests;
use mkw_core::growth::{f_decompose, natural_growth, primitive_projection};
use mkw_core::lincomb::{parse_rational, Comb};
use mkw_core::mkw::{mkw_antipode, mkw_coproduct};
use mkw_core::postlie::{concat_antipode, gl_antipode, gl_product, left_graft};
use mkw_core::regstruct::{
    bracket0, enumerate_reg_trees, phi_reg, phi_reg_inverse, reg_assoc_product, reg_deshuffle, reg_gl_product,
    reg_graft, DeformedMkw, RegCaps, RegComb,
};
use mkw_core::text::{parse_lincomb, parse_reg_comb};
use mkw_core::verify::{degree_cap, run_suite, SuiteOptions, SUITES};
use mkw_core::{Alphabet, Decoration, Error, LinComb, Rational};

#[derive(Parser)]
#[command(name = "mkw", version, about = "Exact algebra on decorated planar rooted forests")]
struct Cli {
    /// Decoration tokens, comma or space separated; inferred from the input when absent.
    #[arg(long, global = true)]
    alphabet: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Dimension of the decorations for the `reg-*` commands.
    #[arg(long, global = true, default_value_t = 1)]
    dim: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Mkw,
    Gl,
    Concat,
}

#[derive(Subcommand)]
enum Command {
    /// Left grafting A ⊲ B.
    Graft { a: String, b: String },
    /// Grossman–Larson product A ∗ B.
    GlProduct { a: String, b: String },
    /// The MKW coproduct.
    MkwCoproduct { x: String },
    Antipode {
        #[arg(long, value_enum)]
        which: Which,
        x: String,
    },
    /// Natural growth A ⊤ B.
    NaturalGrowth { a: String, b: String },
    /// Projection onto primitive elements.
    Pi { x: String },
    /// Decomposition through the maps F_i.
    FDecompose { x: String },
    Phi { x: String },
    PhiInv { x: String },
    /// The coaction dual to grafting.
    RhoGraft { x: String },
    /// Translation map T_v, with v given as `a=[b];b=[a][b]-[b][a]`.
    Translate {
        #[arg(long)]
        v: String,
        x: String,
        /// Truncation degree; defaults to the hard cap.
        #[arg(long = "N")]
        n: Option<usize>,
    },
    /// Canonical lift of increments `a=1/2,b=-3` at truncation N.
    Lift {
        #[arg(long)]
        increments: String,
        #[arg(long = "N")]
        n: usize,
        /// Emit `forest,value` lines instead of the series.
        #[arg(long)]
        csv: bool,
    },
    /// Convolution of the lifts of two increments, compared with the lift of their sum.
    Chen {
        x: String,
        y: String,
        #[arg(long = "N", default_value_t = 3)]
        n: usize,
    },
    /// Geometric embedding of the lift of the given increments.
    Embed {
        increments: String,
        #[arg(long = "N", default_value_t = 3)]
        n: usize,
    },
    /// Basis forests of a given degree in canonical order.
    Basis {
        #[arg(long)]
        degree: usize,
    },
    RegGlProduct { a: String, b: String },
    RegProduct { a: String, b: String },
    RegGraft { a: String, b: String },
    RegBracket { a: String, b: String },
    RegDeshuffle { x: String },
    /// Deformed MKW coproduct, by transposition inside the window.
    RegCoproduct {
        x: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, default_value_t = 2)]
        max_norm: usize,
    },
    RegPhi { x: String },
    RegPhiInv {
        x: String,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, default_value_t = 2)]
        max_norm: usize,
    },
    RegBasis {
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 2)]
        max_norm: usize,
    },
    /// Runs a verification suite; the exit code is 1 when a check fails.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Replacement fixture file for `paper-examples`.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Parse(#[from] mkw_core::ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

type Result<T> = std::result::Result<T, CliError>;

fn comb_json<K: Ord + Clone>(x: &Comb<K>) -> Value
where
    Comb<K>: Display,
{
    Value::Array(x.iter().map(|(k, c)| json!({"term": Comb::basis(k.clone()).to_string(), "coeff": c.to_string()})).collect())
}

struct Session {
    alphabet: Option<Alphabet>,
    format: Format,
    dim: usize,
}

impl Session {
    fn alphabet_for(&self, texts: &[&str]) -> Alphabet {
        self.alphabet.clone().or_else(|| Alphabet::infer_from(texts)).unwrap_or_else(Alphabet::plain)
    }

    fn forests(&self, texts: &[&str]) -> Result<(Vec<LinComb>, Alphabet)> {
        let a = self.alphabet_for(texts);
        let xs = texts.iter().map(|t| parse_lincomb(t, &a)).collect::<std::result::Result<_, _>>()?;
        Ok((xs, a))
    }

    fn regs(&self, texts: &[&str]) -> Result<Vec<RegComb>> {
        Ok(texts.iter().map(|t| parse_reg_comb(t, self.dim)).collect::<std::result::Result<_, _>>()?)
    }

    fn emit<K: Ord + Clone>(&self, x: &Comb<K>) -> String
    where
        Comb<K>: Display,
    {
        match self.format {
            Format::Text => x.to_string(),
            Format::Json => json!({"result": comb_json(x)}).to_string(),
        }
    }

    fn emit_char(&self, x: &TruncChar, csv: bool) -> String {
        match (self.format, csv) {
            (Format::Json, _) => x.to_json().to_string(),
            (Format::Text, true) => x.to_csv().trim_end().to_string(),
            (Format::Text, false) => x.series().to_string(),
        }
    }
}

fn parse_assignments<'a>(spec: &'a str, sep: char) -> Result<Vec<(&'a str, &'a str)>> {
    spec.split(sep)
        .filter(|s| !s.trim().is_empty())
        .map(|part| {
            part.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| CliError::Usage(format!("expected `letter=value`, got {part:?}")))
        })
        .collect()
}

fn letter(a: &Alphabet, token: &str) -> Result<Decoration> {
    a.get(token).cloned().ok_or_else(|| CliError::Usage(format!("{token:?} is not in the alphabet")))
}

fn increments(spec: &str, a: &Alphabet) -> Result<BTreeMap<Decoration, Rational>> {
    let mut out = BTreeMap::new();
    for (k, v) in parse_assignments(spec, ',')? {
        out.insert(letter(a, k)?, parse_rational(v)?);
    }
    Ok(out)
}

fn increment_alphabet(s: &Session, specs: &[&str]) -> Result<Alphabet> {
    if let Some(a) = &s.alphabet {
        return Ok(a.clone());
    }
    let mut tokens = Vec::new();
    for spec in specs {
        for (k, _) in parse_assignments(spec, ',')? {
            if !tokens.contains(&k) {
                tokens.push(k);
            }
        }
    }
    tokens.sort();
    Ok(Alphabet::new(tokens)?)
}

fn check_cap(n: usize) -> Result<()> {
    let cap = degree_cap();
    if n > cap {
        return Err(Error::DegreeCap { requested: n, cap }.into());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(String, bool)> {
    let alphabet = match &cli.alphabet {
        Some(s) => Some(Alphabet::new(s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()))?),
        None => None,
    };
    let s = Session { alphabet, format: cli.format, dim: cli.dim };
    let out = match cli.command {
        Command::Graft { a, b } => {
            let (x, _) = s.forests(&[&a, &b])?;
            s.emit(&left_graft(&x[0], &x[1]))
        }
        Command::GlProduct { a, b } => {
            let (x, _) = s.forests(&[&a, &b])?;
            s.emit(&gl_product(&x[0], &x[1]))
        }
        Command::MkwCoproduct { x } => s.emit(&mkw_coproduct(&s.forests(&[&x])?.0[0])),
        Command::Antipode { which, x } => {
            let x = &s.forests(&[&x])?.0[0];
            s.emit(&match which {
                Which::Mkw => mkw_antipode(x),
                Which::Gl => gl_antipode(x),
                Which::Concat => concat_antipode(x),
            })
        }
        Command::NaturalGrowth { a, b } => {
            let (x, _) = s.forests(&[&a, &b])?;
            s.emit(&natural_growth(&x[0], &x[1])?)
        }
        Command::Pi { x } => s.emit(&primitive_projection(&s.forests(&[&x])?.0[0])),
        Command::FDecompose { x } => {
            let parts = f_decompose(&s.forests(&[&x])?.0[0])?;
            match s.format {
                Format::Text => parts.iter().map(|(i, t)| format!("F_{i}: {t}")).collect::<Vec<_>>().join("\n"),
                Format::Json => {
                    let parts: Vec<Value> = parts.iter().map(|(i, t)| json!({"level": i, "tensor": comb_json(t)})).collect();
                    json!({"result": parts}).to_string()
                }
            }
        }
        Command::Phi { x } => s.emit(&phi(&s.forests(&[&x])?.0[0])),
        Command::PhiInv { x } => s.emit(&phi_inverse(&s.forests(&[&x])?.0[0])),
        Command::RhoGraft { x } => s.emit(&rho_graft(&s.forests(&[&x])?.0[0])),
        Command::Translate { v, x, n } => {
            let n = n.unwrap_or_else(degree_cap);
            check_cap(n)?;
            let pairs = parse_assignments(&v, ';')?;
            let mut texts: Vec<&str> = pairs.iter().map(|(_, t)| *t).collect();
            let keys: Vec<String> = pairs.iter().map(|(k, _)| format!("[{k}]")).collect();
            texts.extend(keys.iter().map(String::as_str));
            texts.push(&x);
            let a = s.alphabet_for(&texts);
            let mut map = BTreeMap::new();
            for (k, t) in &pairs {
                map.insert(letter(&a, k)?, parse_lincomb(t, &a)?);
            }
            let v = TranslationVector::new(map)?;
            s.emit(&translate(&v, &parse_lincomb(&x, &a)?, n))
        }
        Command::Lift { increments: spec, n, csv } => {
            check_cap(n)?;
            let a = increment_alphabet(&s, &[&spec])?;
            s.emit_char(&canonical_lift(&increments(&spec, &a)?, n, &a), csv)
        }
        Command::Chen { x, y, n } => {
            check_cap(n)?;
            let a = increment_alphabet(&s, &[&x, &y])?;
            let (ix, iy) = (increments(&x, &a)?, increments(&y, &a)?);
            let mut total = ix.clone();
            for (k, v) in &iy {
                *total.entry(k.clone()).or_default() += v;
            }
            let joined = char_convolve(&canonical_lift(&ix, n, &a), &canonical_lift(&iy, n, &a))?;
            let agrees = joined == canonical_lift(&total, n, &a);
            match s.format {
                Format::Text => format!("{}\nequals lift of total increment: {agrees}", joined.series()),
                Format::Json => json!({"result": joined.to_json(), "equals_total_lift": agrees}).to_string(),
            }
        }
        Command::Embed { increments: spec, n } => {
            check_cap(n)?;
            let a = increment_alphabet(&s, &[&spec])?;
            let y = embed_rough_path(&canonical_lift(&increments(&spec, &a)?, n, &a))?;
            s.emit_char(&y, false)
        }
        Command::Basis { degree } => {
            check_cap(degree)?;
            let a = s.alphabet.clone().unwrap_or_else(Alphabet::plain);
            let fs = enumerate_forests(degree, &a);
            match s.format {
                Format::Text => fs.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"),
                Format::Json => json!({"degree": degree, "forests": fs.iter().map(ToString::to_string).collect::<Vec<_>>()}).to_string(),
            }
        }
        Command::RegGlProduct { a, b } => {
            let x = s.regs(&[&a, &b])?;
            s.emit(&reg_gl_product(&x[0], &x[1]))
        }
        Command::RegProduct { a, b } => {
            let x = s.regs(&[&a, &b])?;
            s.emit(&reg_assoc_product(&x[0], &x[1]))
        }
        Command::RegGraft { a, b } => {
            let x = s.regs(&[&a, &b])?;
            s.emit(&reg_graft(&x[0], &x[1]))
        }
        Command::RegBracket { a, b } => {
            let x = s.regs(&[&a, &b])?;
            s.emit(&bracket0(&x[0], &x[1]))
        }
        Command::RegDeshuffle { x } => s.emit(&reg_deshuffle(&s.regs(&[&x])?[0])),
        Command::RegCoproduct { x, max_degree, max_norm } => {
            check_cap(max_degree)?;
            let dm = DeformedMkw::new(RegCaps { dim: s.dim, max_norm, max_degree });
            s.emit(&dm.coproduct(&s.regs(&[&x])?[0])?)
        }
        Command::RegPhi { x } => s.emit(&phi_reg(&s.regs(&[&x])?[0])),
        Command::RegPhiInv { x, max_degree, max_norm } => {
            check_cap(max_degree)?;
            let caps = RegCaps { dim: s.dim, max_norm, max_degree };
            s.emit(&phi_reg_inverse(&s.regs(&[&x])?[0], &caps)?)
        }
        Command::RegBasis { degree, max_norm } => {
            check_cap(degree)?;
            let ts = enumerate_reg_trees(degree, s.dim, max_norm);
            match s.format {
                Format::Text => ts.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"),
                Format::Json => json!({"degree": degree, "trees": ts.iter().map(ToString::to_string).collect::<Vec<_>>()}).to_string(),
            }
        }
        Command::Verify { suite, max_degree, fixture } => {
            let fixture = match fixture {
                Some(path) => Some(std::fs::read_to_string(&path).map_err(|source| CliError::Io { path, source })?),
                None => None,
            };
            if !SUITES.contains(&suite.as_str()) {
                return Err(Error::UnknownSuite(suite).into());
            }
            let report = run_suite(&suite, &SuiteOptions { max_degree, alphabet: s.alphabet.clone(), fixture })?;
            let text = match s.format {
                Format::Text => report.to_string().trim_end().to_string(),
                Format::Json => serde_json::to_string_pretty(&report.to_json()).expect("json value"),
            };
            return Ok((text, report.passed()));
        }
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, ok)) => {
            println!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Core(Error::UnknownSuite(_)) = e {
                eprintln!("known suites: {}", SUITES.join(", "));
            }
            ExitCode::from(2)
        }
    }
}
