use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::types::Code;

/// How the tokens of one role (features, or the class) map to values.
#[derive(Debug, Clone, PartialEq)]
pub enum Encoding {
    /// Every token is an integer; the code is the integer itself.
    Integer,
    /// Every token is a real number, kept as is.
    Real,
    /// Distinct tokens in canonical order; the code is the position.
    Dictionary { tokens: Vec<String>, numeric: bool },
}

/// Running summary of the tokens seen for one role.
#[derive(Debug, Clone)]
pub(crate) struct TokenScan {
    pub all_integer: bool,
    pub all_real: bool,
}

impl Default for TokenScan {
    fn default() -> Self {
        TokenScan { all_integer: true, all_real: true }
    }
}

impl TokenScan {
    pub fn observe(&mut self, token: &str) {
        if self.all_integer && token.parse::<Code>().is_err() {
            self.all_integer = false;
        }
        if self.all_real && !token.parse::<f64>().is_ok_and(f64::is_finite) {
            self.all_real = false;
        }
    }
}

fn token_order(a: &str, b: &str, numeric: bool) -> Ordering {
    if numeric {
        let (x, y): (f64, f64) = (a.parse().unwrap(), b.parse().unwrap());
        x.total_cmp(&y).then_with(|| a.cmp(b))
    } else {
        a.cmp(b)
    }
}

impl Encoding {
    /// Builds a dictionary ordered numerically when every token is a number,
    /// lexicographically otherwise.
    pub fn dictionary(tokens: BTreeSet<String>, numeric: bool) -> Self {
        let mut tokens: Vec<String> = tokens.into_iter().collect();
        tokens.sort_by(|a, b| token_order(a, b, numeric));
        Encoding::Dictionary { tokens, numeric }
    }

    pub fn is_discrete(&self) -> bool {
        !matches!(self, Encoding::Real)
    }

    pub fn code(&self, token: &str) -> Option<Code> {
        match self {
            Encoding::Integer => token.parse().ok(),
            Encoding::Real => None,
            Encoding::Dictionary { tokens, numeric } => {
                if *numeric && token.parse::<f64>().is_err() {
                    return None;
                }
                tokens.binary_search_by(|t| token_order(t, token, *numeric)).ok().map(|p| p as Code)
            }
        }
    }

    pub fn value(&self, token: &str) -> Option<f64> {
        match self {
            Encoding::Real => token.parse().ok(),
            _ => self.code(token).map(f64::from),
        }
    }

    pub fn decode_code(&self, code: Code) -> String {
        match self {
            Encoding::Dictionary { tokens, .. } => tokens[code as usize].clone(),
            _ => code.to_string(),
        }
    }

    pub fn decode_value(&self, value: f64) -> String {
        match self {
            Encoding::Dictionary { tokens, .. } => tokens[value as usize].clone(),
            _ => value.to_string(),
        }
    }
}
