use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ExactError, IntPolynomial};

/// Parses either a comma-separated descending coefficient list (`1,-1,-1`)
/// or a sparse expression in one variable (`x^2 - x - 1`, `3*x^4 + 2`).
/// Whitespace is ignored everywhere.
pub fn parse_polynomial(text: &str) -> Result<IntPolynomial, ExactError> {
    let cleaned: Vec<(usize, char)> = text
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    if cleaned.is_empty() {
        return Err(ExactError::EmptyInput);
    }
    if cleaned.iter().any(|&(_, c)| c == ',') {
        parse_list(&cleaned)
    } else {
        SparseParser::new(&cleaned).parse()
    }
}

fn err(position: usize, message: impl Into<String>) -> ExactError {
    ExactError::Parse {
        position,
        message: message.into(),
    }
}

fn parse_list(chars: &[(usize, char)]) -> Result<IntPolynomial, ExactError> {
    let mut coeffs = Vec::new();
    for field in chars.split(|&(_, c)| c == ',') {
        let pos = field.first().map(|&(p, _)| p).unwrap_or(0);
        let s: String = field.iter().map(|&(_, c)| c).collect();
        if s.is_empty() {
            return Err(err(pos, "empty coefficient"));
        }
        let v: BigInt = s
            .parse()
            .map_err(|_| err(pos, format!("invalid integer `{s}`")))?;
        coeffs.push(v);
    }
    Ok(IntPolynomial::new(coeffs))
}

struct SparseParser<'a> {
    chars: &'a [(usize, char)],
    at: usize,
    var: Option<char>,
}

impl<'a> SparseParser<'a> {
    fn new(chars: &'a [(usize, char)]) -> Self {
        SparseParser {
            chars,
            at: 0,
            var: None,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars
            .get(self.at)
            .map(|&(p, _)| p)
            .unwrap_or_else(|| self.chars.last().map(|&(p, _)| p + 1).unwrap_or(0))
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.at;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.at += 1;
        }
        if self.at == start {
            None
        } else {
            Some(self.chars[start..self.at].iter().map(|&(_, c)| c).collect())
        }
    }

    fn parse(mut self) -> Result<IntPolynomial, ExactError> {
        let mut terms: BTreeMap<usize, BigInt> = BTreeMap::new();
        let mut first = true;
        while self.at < self.chars.len() {
            let mut negative = false;
            match self.peek() {
                Some('+') => self.at += 1,
                Some('-') => {
                    negative = true;
                    self.at += 1;
                }
                _ if first => {}
                Some(c) => {
                    return Err(err(self.pos(), format!("expected `+` or `-`, found `{c}`")))
                }
                None => unreachable!(),
            }
            first = false;
            let (coeff, power) = self.term()?;
            let entry = terms.entry(power).or_insert_with(BigInt::zero);
            if negative {
                *entry -= coeff;
            } else {
                *entry += coeff;
            }
        }
        let degree = terms.keys().next_back().copied().unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        for (p, c) in terms {
            coeffs[degree - p] = c;
        }
        Ok(IntPolynomial::new(coeffs))
    }

    fn term(&mut self) -> Result<(BigInt, usize), ExactError> {
        let start = self.pos();
        let coeff = match self.digits() {
            Some(s) => Some(s.parse::<BigInt>().map_err(|_| err(start, "bad integer"))?),
            None => None,
        };
        if coeff.is_some() && self.peek() == Some('*') {
            self.at += 1;
            if !matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
                return Err(err(self.pos(), "expected variable after `*`"));
            }
        }
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {
                match self.var {
                    None => self.var = Some(c),
                    Some(v) if v != c => {
                        return Err(err(self.pos(), format!("second variable `{c}`")))
                    }
                    _ => {}
                }
                self.at += 1;
                let power = if self.peek() == Some('^') {
                    self.at += 1;
                    let p = self.pos();
                    let s = self.digits().ok_or_else(|| err(p, "expected exponent"))?;
                    s.parse::<usize>()
                        .map_err(|_| err(p, "exponent too large"))?
                } else {
                    1
                };
                Ok((coeff.unwrap_or_else(BigInt::one), power))
            }
            _ => match coeff {
                Some(c) => Ok((c, 0)),
                None => Err(err(start, "expected coefficient or variable")),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn both_syntaxes() {
        assert_eq!(parse_polynomial("1,-1,-1").unwrap(), p(&[1, -1, -1]));
        assert_eq!(parse_polynomial("x^2 - x - 1").unwrap(), p(&[1, -1, -1]));
        assert_eq!(
            parse_polynomial("x^6 - x^5 - 6x^4 + 6x^3 + 8x^2 - 8x + 1").unwrap(),
            p(&[1, -1, -6, 6, 8, -8, 1])
        );
        assert_eq!(parse_polynomial(" 1 , 0 , -2 ").unwrap(), p(&[1, 0, -2]));
        assert_eq!(parse_polynomial("3*t^2+2t").unwrap(), p(&[3, 2, 0]));
        assert_eq!(parse_polynomial("-x+x^3").unwrap(), p(&[1, 0, -1, 0]));
        assert_eq!(parse_polynomial("7").unwrap(), p(&[7]));
    }

    #[test]
    fn round_trips_canonical_text() {
        let f = p(&[1, -2, -9, 4, 15, 3]);
        assert_eq!(parse_polynomial(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn rejects_malformed() {
        assert_eq!(parse_polynomial("   "), Err(ExactError::EmptyInput));
        assert!(matches!(
            parse_polynomial("x^"),
            Err(ExactError::Parse { .. })
        ));
        assert!(matches!(
            parse_polynomial("1,,2"),
            Err(ExactError::Parse { .. })
        ));
        assert!(matches!(
            parse_polynomial("x + y"),
            Err(ExactError::Parse { .. })
        ));
        assert!(matches!(
            parse_polynomial("2x 3"),
            Err(ExactError::Parse { .. })
        ));
        assert!(matches!(
            parse_polynomial("x**2"),
            Err(ExactError::Parse { .. })
        ));
    }
}
