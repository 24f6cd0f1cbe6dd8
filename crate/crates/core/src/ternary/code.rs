use std::fmt;

use super::word::{One, TernaryWord, Zero};
use crate::error::{Budget, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CodeKind {
    /// Thermometer code with the ones filled in from the right:
    /// `v ↦ 0^(n−v) 1^v`, so width 4 encodes 1 as `0001`.
    Tc,
    /// Thermometer code with the ones filled in from the left:
    /// `v ↦ 1^v 0^(n−v)`. This is the order in which a tapped delay line
    /// presents its latches.
    TcLeading,
    /// Binary reflected Gray code, `v ↦ v ⊕ (v >> 1)`, MSB first.
    Brgc,
}

/// An injective map from `0..range()` to stable words of a fixed width.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Code {
    pub kind: CodeKind,
    pub width: usize,
}

impl Code {
    pub fn tc(width: usize) -> Self {
        Code {
            kind: CodeKind::Tc,
            width,
        }
    }

    pub fn tc_leading(width: usize) -> Self {
        Code {
            kind: CodeKind::TcLeading,
            width,
        }
    }

    pub fn brgc(width: usize) -> Self {
        assert!(width < 64, "BRGC width {width} too large");
        Code {
            kind: CodeKind::Brgc,
            width,
        }
    }

    /// Number of codewords.
    pub fn range(&self) -> usize {
        match self.kind {
            CodeKind::Tc | CodeKind::TcLeading => self.width + 1,
            CodeKind::Brgc => 1 << self.width,
        }
    }

    pub fn encode(&self, value: usize) -> Result<TernaryWord> {
        if value >= self.range() {
            return Err(Error::OutOfRange {
                value,
                reason: format!("{self} encodes 0..{}", self.range()),
            });
        }
        let n = self.width;
        Ok(match self.kind {
            CodeKind::Tc => TernaryWord::from_digits((0..n).map(|i| if i >= n - value { One } else { Zero })),
            CodeKind::TcLeading => TernaryWord::from_digits((0..n).map(|i| if i < value { One } else { Zero })),
            CodeKind::Brgc => {
                let v = value as u64;
                TernaryWord::from_bits(n, v ^ (v >> 1))
            }
        })
    }

    pub fn decode(&self, w: &TernaryWord) -> Result<usize> {
        let not_a_codeword = || Error::NotACodeword {
            word: w.to_string(),
            code: self.to_string(),
        };
        if w.width() != self.width || !w.is_stable() {
            return Err(not_a_codeword());
        }
        match self.kind {
            CodeKind::Tc | CodeKind::TcLeading => {
                let digits: Vec<bool> = w.iter().map(|d| d == One).collect();
                let ones = digits.iter().filter(|&&b| b).count();
                if self.encode(ones)? == *w {
                    Ok(ones)
                } else {
                    Err(not_a_codeword())
                }
            }
            CodeKind::Brgc => {
                let mut g = w.to_bits().ok_or_else(not_a_codeword)?;
                let mut v = 0u64;
                while g != 0 {
                    v ^= g;
                    g >>= 1;
                }
                Ok(v as usize)
            }
        }
    }

    /// Largest difference between decoded stable resolutions of `w`.
    /// Undefined (an error) if some resolution is not a codeword.
    pub fn precision(&self, w: &TernaryWord, budget: &Budget) -> Result<usize> {
        if w.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: w.width(),
            });
        }
        let mut lo = usize::MAX;
        let mut hi = 0;
        for r in w.res_full(budget)? {
            let v = self.decode(&r).map_err(|_| Error::PrecisionUndefined {
                word: w.to_string(),
                resolution: r.to_string(),
                code: self.to_string(),
            })?;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Ok(hi - lo)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            CodeKind::Tc => "TC",
            CodeKind::TcLeading => "TC(leading)",
            CodeKind::Brgc => "BRGC",
        };
        write!(f, "{name}/{}", self.width)
    }
}
