//! Golden worked examples: a line-oriented fixture format, an evaluator for
//! the named operations, and exact replay.
//!
//! ```text
//! alphabet a b c d e f
//! grafting | graft | [a[b]] ; [c[d][e[f]]] | [c[a[b]][d][e[f]]] + …
//! ```
//!
//! Records are `name | op | arguments separated by ';' | expected`. The
//! directives `alphabet …` and `dim n` apply to the records that follow.

use std::fmt;

use crate::bck::{bck_primitive_projection, BckComb};
use crate::cointeraction::rho_graft;
use crate::embedding::{phi, phi_inverse};
use crate::error::{Error, ParseError, Result};
use crate::forest::Alphabet;
use crate::growth::{natural_growth, primitive_projection};
use crate::lincomb::{LinComb, TensorElem};
use crate::mkw::{mkw_antipode, mkw_coproduct};
use crate::postlie::{concat_antipode, gl_antipode, gl_product, left_graft};
use crate::regstruct::{bracket0, reg_assoc_product, reg_deshuffle, reg_gl_product, reg_graft, RegComb, RegTensor};
use crate::report::Check;
use crate::text::{parse_bck_comb, parse_lincomb, parse_reg_comb, parse_reg_tensor, parse_tensor};

pub const GOLDEN_EXAMPLES: &str = include_str!("../fixtures/golden_examples.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Example {
    pub line: usize,
    pub name: String,
    pub op: String,
    pub args: Vec<String>,
    pub expected: String,
    pub alphabet: Alphabet,
    pub dim: usize,
}

/// The result of an operation, typed by the space it lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Forests(LinComb),
    Tensor(TensorElem),
    NonPlanar(BckComb),
    Reg(RegComb),
    RegTensor(RegTensor),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Forests(x) => x.fmt(f),
            Value::Tensor(x) => x.fmt(f),
            Value::NonPlanar(x) => x.fmt(f),
            Value::Reg(x) => x.fmt(f),
            Value::RegTensor(x) => x.fmt(f),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Forests,
    Tensor,
    NonPlanar,
    Reg,
    RegTensor,
}

/// Operation name, argument count (`None` for a left fold over ≥ 2), input and output kinds.
const OPS: &[(&str, Option<usize>, Kind, Kind)] = &[
    ("graft", Some(2), Kind::Forests, Kind::Forests),
    ("gl-product", None, Kind::Forests, Kind::Forests),
    ("gl-antipode", Some(1), Kind::Forests, Kind::Forests),
    ("mkw-antipode", Some(1), Kind::Forests, Kind::Forests),
    ("concat-antipode", Some(1), Kind::Forests, Kind::Forests),
    ("mkw-coproduct", Some(1), Kind::Forests, Kind::Tensor),
    ("natural-growth", Some(2), Kind::Forests, Kind::Forests),
    ("pi", Some(1), Kind::Forests, Kind::Forests),
    ("rho-graft", Some(1), Kind::Forests, Kind::Tensor),
    ("phi", Some(1), Kind::Forests, Kind::Forests),
    ("phi-inv", Some(1), Kind::Forests, Kind::Forests),
    ("bck-pi", Some(1), Kind::NonPlanar, Kind::NonPlanar),
    ("reg-gl-product", None, Kind::Reg, Kind::Reg),
    ("reg-product", None, Kind::Reg, Kind::Reg),
    ("reg-graft", Some(2), Kind::Reg, Kind::Reg),
    ("reg-bracket0", None, Kind::Reg, Kind::Reg),
    ("reg-deshuffle", Some(1), Kind::Reg, Kind::RegTensor),
];

pub fn operation_names() -> impl Iterator<Item = &'static str> {
    OPS.iter().map(|o| o.0)
}

fn parse_value(kind: Kind, text: &str, alphabet: &Alphabet, dim: usize) -> Result<Value, ParseError> {
    Ok(match kind {
        Kind::Forests => Value::Forests(parse_lincomb(text, alphabet)?),
        Kind::Tensor => Value::Tensor(parse_tensor(text, alphabet)?),
        Kind::NonPlanar => Value::NonPlanar(parse_bck_comb(text, alphabet)?),
        Kind::Reg => Value::Reg(parse_reg_comb(text, dim)?),
        Kind::RegTensor => Value::RegTensor(parse_reg_tensor(text, dim)?),
    })
}

fn lookup(op: &str) -> Result<&'static (&'static str, Option<usize>, Kind, Kind)> {
    OPS.iter().find(|o| o.0 == op).ok_or_else(|| Error::Domain(format!("unknown operation {op:?}")))
}

fn fold<T>(xs: Vec<T>, f: impl Fn(&T, &T) -> T) -> T {
    let mut it = xs.into_iter();
    let first = it.next().expect("arity checked");
    it.fold(first, |acc, x| f(&acc, &x))
}

/// Evaluates `op` on textual arguments.
pub fn evaluate(op: &str, args: &[&str], alphabet: &Alphabet, dim: usize) -> Result<Value> {
    let &(name, arity, input, _) = lookup(op)?;
    match arity {
        Some(n) if args.len() != n => {
            return Err(Error::Domain(format!("{name} takes {n} argument(s), got {}", args.len())));
        }
        None if args.len() < 2 => return Err(Error::Domain(format!("{name} takes at least 2 arguments"))),
        _ => {}
    }
    let vals = args.iter().map(|a| parse_value(input, a, alphabet, dim)).collect::<Result<Vec<_>, _>>()?;
    let forests = || -> Vec<LinComb> {
        vals.iter().map(|v| match v {
            Value::Forests(x) => x.clone(),
            _ => unreachable!("parsed as forests"),
        }).collect()
    };
    let regs = || -> Vec<RegComb> {
        vals.iter().map(|v| match v {
            Value::Reg(x) => x.clone(),
            _ => unreachable!("parsed as decorated trees"),
        }).collect()
    };
    Ok(match name {
        "graft" => {
            let x = forests();
            Value::Forests(left_graft(&x[0], &x[1]))
        }
        "gl-product" => Value::Forests(fold(forests(), gl_product)),
        "gl-antipode" => Value::Forests(gl_antipode(&forests()[0])),
        "mkw-antipode" => Value::Forests(mkw_antipode(&forests()[0])),
        "concat-antipode" => Value::Forests(concat_antipode(&forests()[0])),
        "mkw-coproduct" => Value::Tensor(mkw_coproduct(&forests()[0])),
        "natural-growth" => {
            let x = forests();
            Value::Forests(natural_growth(&x[0], &x[1])?)
        }
        "pi" => Value::Forests(primitive_projection(&forests()[0])),
        "rho-graft" => Value::Tensor(rho_graft(&forests()[0])),
        "phi" => Value::Forests(phi(&forests()[0])),
        "phi-inv" => Value::Forests(phi_inverse(&forests()[0])),
        "bck-pi" => match &vals[0] {
            Value::NonPlanar(x) => Value::NonPlanar(bck_primitive_projection(x)),
            _ => unreachable!("parsed as non-planar forests"),
        },
        "reg-gl-product" => Value::Reg(fold(regs(), reg_gl_product)),
        "reg-product" => Value::Reg(fold(regs(), reg_assoc_product)),
        "reg-graft" => {
            let x = regs();
            Value::Reg(reg_graft(&x[0], &x[1]))
        }
        "reg-bracket0" => Value::Reg(fold(regs(), bracket0)),
        "reg-deshuffle" => Value::RegTensor(reg_deshuffle(&regs()[0])),
        _ => unreachable!("every listed operation is handled"),
    })
}

/// Parses the fixture format; the default alphabet is `o` and the default dimension 1.
pub fn parse_examples(text: &str) -> Result<Vec<Example>, ParseError> {
    let mut alphabet = Alphabet::plain();
    let mut dim = 1;
    let mut out = Vec::new();
    let mut offset = 0;
    for (i, raw) in text.lines().enumerate() {
        let here = offset;
        offset += raw.len() + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("alphabet ") {
            alphabet = Alphabet::new(rest.split_whitespace()).map_err(|e| e.shifted(here))?;
            continue;
        }
        if let Some(rest) = line.strip_prefix("dim ") {
            dim = rest.trim().parse().map_err(|_| ParseError::new(here, "dimension must be a positive integer"))?;
            continue;
        }
        let fields: Vec<&str> = raw.splitn(4, " | ").map(str::trim).collect();
        if fields.len() != 4 {
            return Err(ParseError::new(here, format!("line {}: expected 4 fields separated by ' | '", i + 1)));
        }
        out.push(Example {
            line: i + 1,
            name: fields[0].to_string(),
            op: fields[1].to_string(),
            args: fields[2].split(';').map(|s| s.trim().to_string()).collect(),
            expected: fields[3].to_string(),
            alphabet: alphabet.clone(),
            dim,
        });
    }
    Ok(out)
}

/// Evaluates one example and compares with its expected value exactly.
pub fn replay_one(ex: &Example) -> Check {
    let mut check = Check::new(format!("{} ({})", ex.name, ex.op));
    let args: Vec<&str> = ex.args.iter().map(String::as_str).collect();
    let outcome = lookup(&ex.op).and_then(|&(_, _, _, out)| {
        let want = parse_value(out, &ex.expected, &ex.alphabet, ex.dim)?;
        let got = evaluate(&ex.op, &args, &ex.alphabet, ex.dim)?;
        Ok((got, want))
    });
    match outcome {
        Ok((got, want)) => check.record(got == want, || format!("line {}: got {got}, expected {want}", ex.line)),
        Err(e) => check.record(false, || format!("line {}: {e}", ex.line)),
    }
    check
}

pub fn replay(examples: &[Example]) -> Vec<Check> {
    examples.iter().map(replay_one).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::all_passed;

    #[test]
    fn fixture_replays() {
        let examples = parse_examples(GOLDEN_EXAMPLES).unwrap();
        assert!(examples.len() >= 20);
        let checks = replay(&examples);
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
        assert!(all_passed(&checks), "{failed:#?}");
    }

    #[test]
    fn wrong_expectations_are_reported() {
        let text = "graft-bad | graft | [o] ; [o] | [o][o]\nbad-op | nope | [o] | [o]\n";
        let checks = replay(&parse_examples(text).unwrap());
        assert!(checks.iter().all(|c| !c.passed()));
        assert!(parse_examples("only | three | fields").is_err());
    }

    #[test]
    fn evaluate_checks_arity() {
        let a = Alphabet::plain();
        assert!(evaluate("graft", &["[o]"], &a, 1).is_err());
        assert_eq!(evaluate("gl-product", &["[o]", "[o]"], &a, 1).unwrap().to_string(), "[o[o]] + [o][o]");
    }
}
