//! Truth tables: the canonical oracle every transformation is checked
//! against. Assignment `i` sets `xj` to bit `j-1` of `i` (x1 is the least
//! significant index bit).

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    bits: Vec<bool>,
}

/// The built-in function families used throughout the test corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// The constant-1 function.
    Const1,
    /// `!x1 & !x2 & ... & !xn`.
    AndOfNegations,
    /// 1 iff exactly `k` of the `n` inputs are 1.
    ExactlyK,
}

impl TruthTable {
    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> TruthTable {
        TruthTable {
            n,
            bits: (0..1usize << n).map(f).collect(),
        }
    }

    pub fn from_bits(n: usize, bits: Vec<bool>) -> Result<TruthTable> {
        if bits.len() != 1 << n {
            return Err(Error::BadParameter(format!(
                "expected {} table bits for {n} variables, got {}",
                1usize << n,
                bits.len()
            )));
        }
        Ok(TruthTable { n, bits })
    }

    /// Parses a `2^n`-character 0/1 string, assignment index 0 first.
    pub fn parse_bits(n: usize, text: &str) -> Result<TruthTable> {
        let mut bits = Vec::with_capacity(text.len());
        for (i, c) in text.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::SyntaxError {
                        pos: i,
                        msg: format!("expected 0 or 1, found {c:?}"),
                    })
                }
            }
        }
        TruthTable::from_bits(n, bits)
    }

    /// Parses the two-line serialization: `vars <n>` then the bit string.
    pub fn parse(text: &str) -> Result<TruthTable> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::ParseError {
            line: 1,
            msg: "missing vars line".into(),
        })?;
        let n: usize = header
            .strip_prefix("vars")
            .map(str::trim)
            .ok_or_else(|| Error::ParseError {
                line: 1,
                msg: format!("expected `vars <n>`, found {header:?}"),
            })?
            .parse()
            .map_err(|e| Error::ParseError {
                line: 1,
                msg: format!("bad variable count: {e}"),
            })?;
        let bits = lines.next().ok_or_else(|| Error::ParseError {
            line: 2,
            msg: "missing table bits".into(),
        })?;
        TruthTable::parse_bits(n, bits)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    // A table over n variables always has 2^n >= 1 entries, so there is
    // no meaningful `is_empty` companion.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn bit(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn is_constant(&self) -> Option<bool> {
        if self.bits.iter().all(|&b| b) {
            Some(true)
        } else if self.bits.iter().all(|&b| !b) {
            Some(false)
        } else {
            None
        }
    }

    pub fn to_bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    /// The two-line text serialization; `parse(to_text(t)) == t`.
    pub fn to_text(&self) -> String {
        format!("vars {}\n{}\n", self.n, self.to_bit_string())
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bit_string())
    }
}

/// Generates a named family member. `k` is required exactly for
/// [`Family::ExactlyK`] and must satisfy `0 <= k <= n`.
pub fn gen_family(family: Family, n: usize, k: Option<usize>) -> Result<TruthTable> {
    if n == 0 {
        return Err(Error::BadParameter("n must be at least 1".into()));
    }
    match (family, k) {
        (Family::Const1, None) => Ok(TruthTable::from_fn(n, |_| true)),
        (Family::AndOfNegations, None) => Ok(TruthTable::from_fn(n, |idx| idx == 0)),
        (Family::ExactlyK, Some(k)) => {
            if k > n {
                return Err(Error::BadParameter(format!("k = {k} exceeds n = {n}")));
            }
            Ok(TruthTable::from_fn(n, |idx| idx.count_ones() as usize == k))
        }
        (Family::ExactlyK, None) => Err(Error::BadParameter(
            "exactly-k requires a k parameter".into(),
        )),
        (_, Some(_)) => Err(Error::BadParameter(
            "k is only meaningful for exactly-k".into(),
        )),
    }
}
