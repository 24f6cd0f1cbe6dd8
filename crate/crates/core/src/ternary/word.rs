use std::fmt;
use std::str::FromStr;

use crate::error::{Budget, Error, Result};

/// A single signal value: stable `0`, stable `1`, or metastable `M`.
///
/// The derived order is `Zero < One < Meta`, which is also the canonical
/// order used for words and cube sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Ternary {
    Zero = 0,
    One = 1,
    Meta = 2,
}

pub use Ternary::{Meta, One, Zero};

impl Ternary {
    pub const ALL: [Ternary; 3] = [Zero, One, Meta];

    pub fn from_bool(b: bool) -> Self {
        if b {
            One
        } else {
            Zero
        }
    }

    pub fn is_stable(self) -> bool {
        self != Meta
    }

    pub fn to_bool(self) -> Option<bool> {
        match self {
            Zero => Some(false),
            One => Some(true),
            Meta => None,
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(Zero),
            '1' => Some(One),
            'M' => Some(Meta),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Zero => '0',
            One => '1',
            Meta => 'M',
        }
    }

    /// `other ∈ Res_M(self)`.
    pub fn covers(self, other: Ternary) -> bool {
        self == Meta || self == other
    }

    /// Stable resolutions of this value, in order.
    pub fn resolutions(self) -> &'static [Ternary] {
        match self {
            Zero => &[Zero],
            One => &[One],
            Meta => &[Zero, One],
        }
    }

    pub fn and(self, other: Ternary) -> Self {
        match (self, other) {
            (Zero, _) | (_, Zero) => Zero,
            (One, One) => One,
            _ => Meta,
        }
    }

    pub fn or(self, other: Ternary) -> Self {
        match (self, other) {
            (One, _) | (_, One) => One,
            (Zero, Zero) => Zero,
            _ => Meta,
        }
    }

    pub fn xor(self, other: Ternary) -> Self {
        match (self, other) {
            (Meta, _) | (_, Meta) => Meta,
            (a, b) => Ternary::from_bool(a != b),
        }
    }

    /// Least value covering both: equal values stay, anything else is `M`.
    pub fn join(self, other: Ternary) -> Self {
        if self == other {
            self
        } else {
            Meta
        }
    }

    fn code(self) -> u64 {
        self as u64
    }

    fn from_code(c: u64) -> Self {
        match c {
            0 => Zero,
            1 => One,
            _ => Meta,
        }
    }
}

impl std::ops::Not for Ternary {
    type Output = Ternary;

    fn not(self) -> Ternary {
        match self {
            Zero => One,
            One => Zero,
            Meta => Meta,
        }
    }
}

impl fmt::Display for Ternary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

const DIGITS_PER_CHUNK: usize = 32;
const LOW_BITS: u64 = 0x5555_5555_5555_5555;
const HIGH_BITS: u64 = 0xAAAA_AAAA_AAAA_AAAA;

/// Fixed-width vector over {0, 1, M}, most significant digit first.
///
/// Digits are packed two bits each (`00` = 0, `01` = 1, `10` = M), with
/// digit 0 in the top bits of the first chunk. Unused trailing digits are
/// zero, so the derived ordering is lexicographic with `0 < 1 < M` for
/// words of equal width.
///
/// A word doubles as a *cube*: the set `Res_M(w)` of its partial
/// resolutions, with `M` acting as a wildcard over {0, 1, M}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TernaryWord {
    width: usize,
    chunks: Vec<u64>,
}

impl TernaryWord {
    pub fn zeros(width: usize) -> Self {
        TernaryWord {
            width,
            chunks: vec![0; width.div_ceil(DIGITS_PER_CHUNK)],
        }
    }

    pub fn filled(width: usize, value: Ternary) -> Self {
        let mut w = Self::zeros(width);
        if value != Zero {
            for i in 0..width {
                w.set(i, value);
            }
        }
        w
    }

    pub fn from_digits<I: IntoIterator<Item = Ternary>>(digits: I) -> Self {
        let digits: Vec<Ternary> = digits.into_iter().collect();
        let mut w = Self::zeros(digits.len());
        for (i, d) in digits.into_iter().enumerate() {
            w.set(i, d);
        }
        w
    }

    /// Stable word holding the low `width` bits of `value`, MSB first.
    pub fn from_bits(width: usize, value: u64) -> Self {
        debug_assert!(width <= 64);
        Self::from_digits((0..width).map(|i| Ternary::from_bool((value >> (width - 1 - i)) & 1 == 1)))
    }

    /// Inverse of [`TernaryWord::from_bits`]; `None` if any digit is `M`.
    pub fn to_bits(&self) -> Option<u64> {
        debug_assert!(self.width <= 64);
        let mut v = 0u64;
        for d in self.iter() {
            v = (v << 1) | d.to_bool()? as u64;
        }
        Some(v)
    }

    /// Word with base-3 index `index` in the lexicographic enumeration of
    /// `T^width` (digit values 0, 1, M = 0, 1, 2).
    pub fn from_ternary_index(width: usize, mut index: usize) -> Self {
        let mut w = Self::zeros(width);
        for i in (0..width).rev() {
            w.set(i, Ternary::from_code((index % 3) as u64));
            index /= 3;
        }
        w
    }

    pub fn ternary_index(&self) -> usize {
        self.iter().fold(0, |acc, d| acc * 3 + d as usize)
    }

    /// All words of the given width in lexicographic order.
    pub fn all(width: usize) -> impl Iterator<Item = TernaryWord> {
        (0..3usize.pow(width as u32)).map(move |i| Self::from_ternary_index(width, i))
    }

    /// All stable words of the given width in ascending binary order.
    pub fn all_stable(width: usize) -> impl Iterator<Item = TernaryWord> {
        (0..1u64 << width).map(move |v| Self::from_bits(width, v))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_empty(&self) -> bool {
        self.width == 0
    }

    pub fn get(&self, i: usize) -> Ternary {
        assert!(i < self.width, "digit {i} out of range for width {}", self.width);
        let shift = 62 - 2 * (i % DIGITS_PER_CHUNK);
        Ternary::from_code((self.chunks[i / DIGITS_PER_CHUNK] >> shift) & 3)
    }

    pub fn set(&mut self, i: usize, value: Ternary) {
        assert!(i < self.width, "digit {i} out of range for width {}", self.width);
        let shift = 62 - 2 * (i % DIGITS_PER_CHUNK);
        let chunk = &mut self.chunks[i / DIGITS_PER_CHUNK];
        *chunk = (*chunk & !(3 << shift)) | (value.code() << shift);
    }

    pub fn with(mut self, i: usize, value: Ternary) -> Self {
        self.set(i, value);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = Ternary> + '_ {
        (0..self.width).map(move |i| self.get(i))
    }

    pub fn meta_count(&self) -> usize {
        self.chunks.iter().map(|c| (c & HIGH_BITS).count_ones() as usize).sum()
    }

    pub fn is_stable(&self) -> bool {
        self.chunks.iter().all(|c| c & HIGH_BITS == 0)
    }

    pub fn meta_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(move |&i| self.get(i) == Meta)
    }

    pub fn concat(&self, other: &TernaryWord) -> TernaryWord {
        TernaryWord::from_digits(self.iter().chain(other.iter()))
    }

    pub fn slice(&self, start: usize, end: usize) -> TernaryWord {
        TernaryWord::from_digits((start..end).map(|i| self.get(i)))
    }

    /// `other ∈ Res_M(self)`, decided per bit. Both words must have the same
    /// width.
    pub fn covers(&self, other: &TernaryWord) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.chunks.iter().zip(&other.chunks).all(|(&a, &b)| {
            let meta = a & HIGH_BITS;
            let meta_mask = meta | (meta >> 1);
            (a ^ b) & !meta_mask == 0
        })
    }

    /// `Res_M(self) ∩ Res_M(other) ≠ ∅`: no position holds 0 in one word and
    /// 1 in the other.
    pub fn intersects(&self, other: &TernaryWord) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.chunks.iter().zip(&other.chunks).all(|(&a, &b)| {
            let ma = a & HIGH_BITS;
            let mb = b & HIGH_BITS;
            let meta_mask = ma | (ma >> 1) | mb | (mb >> 1);
            (a ^ b) & !meta_mask == 0
        })
    }

    /// Digit-wise [`Ternary::join`]: the smallest cube covering both words.
    pub fn join(&self, other: &TernaryWord) -> TernaryWord {
        debug_assert_eq!(self.width, other.width);
        let chunks = self
            .chunks
            .iter()
            .zip(&other.chunks)
            .map(|(&a, &b)| {
                let x = a ^ b;
                let neq = (x | (x >> 1)) & LOW_BITS;
                (a & !(neq | (neq << 1))) | (neq << 1)
            })
            .collect();
        TernaryWord {
            width: self.width,
            chunks,
        }
    }

    /// `w ∈ Res_M(self)` with a width check.
    pub fn res_contains(&self, w: &TernaryWord) -> Result<bool> {
        if self.width != w.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: w.width,
            });
        }
        Ok(self.covers(w))
    }

    /// `Res(self)`: every full stabilization, in ascending order.
    pub fn res_full(&self, budget: &Budget) -> Result<Vec<TernaryWord>> {
        let positions: Vec<usize> = self.meta_positions().collect();
        budget.check_meta(positions.len())?;
        let mut out = Vec::with_capacity(1 << positions.len());
        for bits in 0..1u64 << positions.len() {
            let mut w = self.clone();
            for (j, &p) in positions.iter().enumerate() {
                let bit = (bits >> (positions.len() - 1 - j)) & 1 == 1;
                w.set(p, Ternary::from_bool(bit));
            }
            out.push(w);
        }
        Ok(out)
    }

    /// `Res_M(self)`: every partial stabilization, in ascending order.
    pub fn res_partial(&self, budget: &Budget) -> Result<Vec<TernaryWord>> {
        let positions: Vec<usize> = self.meta_positions().collect();
        budget.check_meta(positions.len())?;
        let count = 3usize.pow(positions.len() as u32);
        let mut out = Vec::with_capacity(count);
        for idx in 0..count {
            let mut w = self.clone();
            let mut rest = idx;
            for &p in positions.iter().rev() {
                w.set(p, Ternary::from_code((rest % 3) as u64));
                rest /= 3;
            }
            out.push(w);
        }
        Ok(out)
    }
}

impl fmt::Display for TernaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.iter() {
            write!(f, "{}", d.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for TernaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TernaryWord({self})")
    }
}

impl FromStr for TernaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(Ternary::from_char)
            .collect::<Option<Vec<_>>>()
            .map(TernaryWord::from_digits)
            .ok_or_else(|| Error::InvalidWord(s.to_string()))
    }
}

/// Parses a word literal; panics on malformed input. Intended for tests and
/// hard-coded constants.
pub fn word(s: &str) -> TernaryWord {
    s.parse().unwrap_or_else(|e| panic!("{e}"))
}
