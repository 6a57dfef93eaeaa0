use crate::error::{Error, Result};

/// Ordered product of named generators with exponents.
pub type Monomial = Vec<(String, u32)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub monomial: Monomial,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Star,
    Caret,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let t: String = cs[start..i].iter().collect();
                out.push(Tok::Int(
                    t.parse().map_err(|_| Error::invalid(format!("integer {t} too large")))?,
                ));
            }
            a if a.is_alphabetic() || a == '_' => {
                let start = i;
                while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(cs[start..i].iter().collect()));
            }
            other => return Err(Error::invalid(format!("unexpected character {other:?} in {s:?}"))),
        }
    }
    Ok(out)
}

/// Parses sums of monomials like `2*X*Y^2 - Y + 1`.
pub fn parse_expr(s: &str) -> Result<Vec<Term>> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::invalid("empty expression"));
    }
    let mut terms = Vec::new();
    let mut i = 0;
    let bad = |what: &str| Error::invalid(format!("malformed expression {s:?}: {what}"));
    while i < toks.len() {
        let mut sign = 1i64;
        if terms.is_empty() || matches!(toks[i], Tok::Plus | Tok::Minus) {
            while let Some(t @ (Tok::Plus | Tok::Minus)) = toks.get(i) {
                if *t == Tok::Minus {
                    sign = -sign;
                }
                i += 1;
            }
        } else {
            return Err(bad("expected + or -"));
        }
        let mut coeff = sign;
        let mut mono: Monomial = Vec::new();
        loop {
            match toks.get(i) {
                Some(Tok::Int(n)) => {
                    coeff = coeff.checked_mul(*n).ok_or_else(|| bad("coefficient overflow"))?;
                    i += 1;
                }
                Some(Tok::Ident(name)) => {
                    i += 1;
                    let mut e = 1u32;
                    if toks.get(i) == Some(&Tok::Caret) {
                        match toks.get(i + 1) {
                            Some(Tok::Int(n)) if *n >= 0 && *n < u32::MAX as i64 => {
                                e = *n as u32;
                                i += 2;
                            }
                            _ => return Err(bad("exponent must be a natural number")),
                        }
                    }
                    if e > 0 {
                        match mono.last_mut() {
                            Some((last, k)) if last == name => *k += e,
                            _ => mono.push((name.clone(), e)),
                        }
                    }
                }
                _ => return Err(bad("expected a factor")),
            }
            if toks.get(i) == Some(&Tok::Star) {
                i += 1;
            } else {
                break;
            }
        }
        terms.push(Term {
            coeff,
            monomial: mono,
        });
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sums() {
        let t = parse_expr("2*X*Y^2 - Y + 1").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[0].coeff, 2);
        assert_eq!(t[0].monomial, vec![("X".into(), 1), ("Y".into(), 2)]);
        assert_eq!(t[1].coeff, -1);
        assert_eq!(t[2].monomial, vec![]);
    }

    #[test]
    fn merges_repeated_factors() {
        let t = parse_expr("X*X*Y").unwrap();
        assert_eq!(t[0].monomial, vec![("X".into(), 2), ("Y".into(), 1)]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_expr("X +* Y").is_err());
        assert!(parse_expr("X^").is_err());
        assert!(parse_expr("").is_err());
        assert!(parse_expr("X Y").is_err());
    }
}
