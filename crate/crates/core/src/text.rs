//! Text syntax for linear combinations: `1/2 [o][o[o]] - [o[o][o]] + 1`,
//! tensors with legs joined by `⊗` or `|`, and `0` for the zero element.
//! A forest leg may be a shuffle `[b]⧢[d]`, expanded on parsing.

use crate::bck::{parse_np_forest, BckComb};
use crate::error::ParseError;
use crate::forest::{parse_forest, Alphabet};
use crate::lincomb::{parse_rational, shuffle, Comb, LinComb, Rational, TensorElem};
use crate::regstruct::{parse_reg_tree, RegComb, RegTree};

/// Splits at top-level `+` and `-`, returning `(offset, sign, term)`.
fn split_terms(text: &str) -> Result<Vec<(usize, bool, &str)>, ParseError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    for (i, c) in text.char_indices() {
        match c {
            '[' | '{' | '(' => depth += 1,
            ']' | '}' | ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(ParseError::new(i, format!("unbalanced {c:?}")));
                }
            }
            '+' | '-' if depth == 0 => {
                let piece = &text[start..i];
                if !piece.trim().is_empty() {
                    out.push((start, negative, piece));
                } else if !out.is_empty() || i > start + piece.len() {
                    return Err(ParseError::new(i, "missing term before sign"));
                }
                negative = c == '-';
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(ParseError::new(text.len(), "unbalanced brackets"));
    }
    let piece = &text[start..];
    if piece.trim().is_empty() {
        if !out.is_empty() || negative || start > 0 {
            return Err(ParseError::new(text.len(), "missing term after sign"));
        }
    } else {
        out.push((start, negative, piece));
    }
    Ok(out)
}

fn is_coefficient(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || c == '/') && s.starts_with(|c: char| c.is_ascii_digit())
}

/// Parses a signed sum of `coefficient element` terms with `element` read by `elem`.
pub fn parse_comb_with<K: Ord + Clone>(
    text: &str,
    mut elem: impl FnMut(&str) -> Result<Comb<K>, ParseError>,
) -> Result<Comb<K>, ParseError> {
    let mut out = Comb::zero();
    if text.trim() == "0" {
        return Ok(out);
    }
    for (offset, negative, term) in split_terms(text)? {
        let lead = term.len() - term.trim_start().len();
        let body = term.trim();
        let (coeff, rest, rest_offset) = match body.split_once(char::is_whitespace) {
            Some((c, r)) if is_coefficient(c) => {
                let skip = body.len() - r.len();
                (parse_rational(c).map_err(|e| e.shifted(offset + lead))?, r.trim(), skip + (r.len() - r.trim_start().len()))
            }
            _ => (Rational::from_integer(1.into()), body, 0),
        };
        let k = elem(rest).map_err(|e| e.shifted(offset + lead + rest_offset))?;
        out.add_scaled(&k, &if negative { -coeff } else { coeff });
    }
    Ok(out)
}

fn basis<K: Ord + Clone>(r: Result<K, ParseError>) -> Result<Comb<K>, ParseError> {
    r.map(Comb::basis)
}

/// A shuffle product of forests such as `[b][c]⧢[e]`.
fn shuffle_word(s: &str, alphabet: &Alphabet) -> Result<LinComb, ParseError> {
    let mut acc = LinComb::unit();
    let mut start = 0;
    for piece in s.split('⧢') {
        let f = parse_forest(piece, alphabet).map_err(|e| e.shifted(start))?;
        acc = shuffle(&acc, &LinComb::basis(f));
        start += piece.len() + '⧢'.len_utf8();
    }
    Ok(acc)
}

pub fn parse_lincomb(text: &str, alphabet: &Alphabet) -> Result<LinComb, ParseError> {
    parse_comb_with(text, |s| shuffle_word(s, alphabet))
}

fn split_legs(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if c == '⊗' || c == '|' {
            out.push((start, &s[start..i]));
            start = i + c.len_utf8();
        }
    }
    out.push((start, &s[start..]));
    out
}

pub fn parse_tensor(text: &str, alphabet: &Alphabet) -> Result<TensorElem, ParseError> {
    parse_comb_with(text, |s| {
        let legs = split_legs(s);
        if legs.len() != 2 {
            return Err(ParseError::new(0, format!("expected two tensor legs, found {}", legs.len())));
        }
        let leg = |(o, t): (usize, &str)| shuffle_word(t, alphabet).map_err(|e| e.shifted(o));
        Ok(TensorElem::pair(&leg(legs[0])?, &leg(legs[1])?))
    })
}

pub fn parse_bck_comb(text: &str, alphabet: &Alphabet) -> Result<BckComb, ParseError> {
    parse_comb_with(text, |s| basis(parse_np_forest(s, alphabet)))
}

pub fn parse_reg_comb(text: &str, d: usize) -> Result<RegComb, ParseError> {
    parse_comb_with(text, |s| basis(parse_reg_tree(s, d)))
}

pub fn parse_reg_tensor(text: &str, d: usize) -> Result<Comb<(RegTree, RegTree)>, ParseError> {
    parse_comb_with(text, |s| {
        let legs = split_legs(s);
        if legs.len() != 2 {
            return Err(ParseError::new(0, format!("expected two tensor legs, found {}", legs.len())));
        }
        let leg = |(o, t): (usize, &str)| -> Result<RegTree, ParseError> { parse_reg_tree(t.trim(), d).map_err(|e| e.shifted(o)) };
        Ok(Comb::basis((leg(legs[0])?, leg(legs[1])?)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{parse_forest, Forest};
    use crate::lincomb::frac;

    #[test]
    fn round_trips_display() {
        let a = Alphabet::plain();
        let x = parse_lincomb("1/2 [o][o[o]] - [o[o][o]] + 1 - 3 [o]", &a).unwrap();
        assert_eq!(x.coeff(&parse_forest("[o][o[o]]", &a).unwrap()), frac(1, 2));
        assert_eq!(x.coeff(&Forest::unit()), frac(1, 1));
        assert_eq!(parse_lincomb(&x.to_string(), &a).unwrap(), x);
        let t = parse_tensor("[o]⊗1 + 2 1 | [o[o]]", &a).unwrap();
        assert_eq!(parse_tensor(&t.to_string(), &a).unwrap(), t);
        assert!(parse_lincomb("0", &a).unwrap().is_zero());
        let sh = parse_tensor("[o]⧢[o[o]] | 1", &a).unwrap();
        assert_eq!(sh.len(), 2);
        let r = parse_reg_comb("[o{1}[o]{a=1}] - 1", 1).unwrap();
        assert_eq!(parse_reg_comb(&r.to_string(), 1).unwrap(), r);
    }

    #[test]
    fn errors_carry_positions() {
        let a = Alphabet::plain();
        let e = parse_lincomb("[o] + [o[x]]", &a).unwrap_err();
        assert_eq!(e.position, 9);
        assert!(parse_lincomb("[o] +", &a).is_err());
        assert!(parse_lincomb("[o]]", &a).is_err());
        assert!(parse_tensor("[o]", &a).is_err());
    }
}
