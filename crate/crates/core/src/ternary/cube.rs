use std::fmt;

use super::word::{Meta, Ternary, TernaryWord};
use crate::error::{Budget, Error, Result};

/// A finite union of cubes of a common width, kept in canonical form: no
/// member is contained in another member, and members are sorted
/// lexicographically (`0 < 1 < M`).
///
/// The denotation is the union of `Res_M(c)` over all members `c`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CubeSet {
    width: usize,
    cubes: Vec<TernaryWord>,
}

impl CubeSet {
    pub fn empty(width: usize) -> Self {
        CubeSet {
            width,
            cubes: Vec::new(),
        }
    }

    /// The set of every word of the given width.
    pub fn full(width: usize) -> Self {
        Self::singleton(TernaryWord::filled(width, Meta))
    }

    pub fn singleton(cube: TernaryWord) -> Self {
        CubeSet {
            width: cube.width(),
            cubes: vec![cube],
        }
    }

    /// Builds the canonical form of the given cubes. Fails if widths differ.
    pub fn new<I: IntoIterator<Item = TernaryWord>>(width: usize, cubes: I) -> Result<Self> {
        let cubes: Vec<TernaryWord> = cubes.into_iter().collect();
        if let Some(bad) = cubes.iter().find(|c| c.width() != width) {
            return Err(Error::WidthMismatch {
                expected: width,
                found: bad.width(),
            });
        }
        Ok(Self::canonical(width, cubes))
    }

    pub(crate) fn canonical(width: usize, mut cubes: Vec<TernaryWord>) -> Self {
        cubes.sort();
        cubes.dedup();
        // Drop members strictly contained in another member. A cube can only
        // be covered by one with at least as many M digits.
        let mut by_meta: Vec<usize> = (0..cubes.len()).collect();
        by_meta.sort_by_key(|&i| std::cmp::Reverse(cubes[i].meta_count()));
        let mut keep = vec![true; cubes.len()];
        for (pos, &i) in by_meta.iter().enumerate() {
            if by_meta[..pos].iter().any(|&j| keep[j] && cubes[j].covers(&cubes[i])) {
                keep[i] = false;
            }
        }
        let cubes = cubes
            .into_iter()
            .zip(keep)
            .filter_map(|(c, k)| k.then_some(c))
            .collect();
        CubeSet { width, cubes }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn cubes(&self) -> &[TernaryWord] {
        &self.cubes
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    /// The unique member, if the set is a single cube.
    pub fn as_single(&self) -> Option<&TernaryWord> {
        match self.cubes.as_slice() {
            [c] => Some(c),
            _ => None,
        }
    }

    pub fn union(&self, other: &CubeSet) -> Result<CubeSet> {
        CubeSet::new(self.width, self.cubes.iter().chain(&other.cubes).cloned())
    }

    /// Membership of a single word in the denotation.
    pub fn contains(&self, w: &TernaryWord) -> bool {
        w.width() == self.width && self.cubes.iter().any(|c| c.covers(w))
    }

    /// `Res_M(cube) ⊆ self`, decided exactly by splitting the cube on the
    /// positions where members disagree with it.
    pub fn contains_cube(&self, cube: &TernaryWord) -> bool {
        self.find_uncovered(cube).is_none()
    }

    /// Some word of `Res_M(cube)` outside the set, preferring words with
    /// more `M` digits; `None` if the cube is covered.
    pub fn find_uncovered(&self, cube: &TernaryWord) -> Option<TernaryWord> {
        if cube.width() != self.width {
            return Some(cube.clone());
        }
        let mut region: Vec<u8> = cube.iter().map(allowed).collect();
        let live: Vec<&TernaryWord> = self.cubes.iter().collect();
        uncovered_point(&mut region, &live).map(|p| {
            TernaryWord::from_digits(p.into_iter().map(|m| {
                if m & META_BIT != 0 {
                    Ternary::Meta
                } else if m & ONE_BIT != 0 {
                    Ternary::One
                } else {
                    Ternary::Zero
                }
            }))
        })
    }

    pub fn is_subset_of(&self, other: &CubeSet) -> bool {
        self.cubes.iter().all(|c| other.contains_cube(c))
    }

    /// Whether the denotations share at least one word.
    pub fn intersects(&self, other: &CubeSet) -> bool {
        self.cubes.iter().any(|a| other.cubes.iter().any(|b| a.intersects(b)))
    }

    /// Projection onto digit positions `start..end`.
    pub fn project(&self, start: usize, end: usize) -> CubeSet {
        Self::canonical(end - start, self.cubes.iter().map(|c| c.slice(start, end)).collect())
    }

    /// Flat enumeration of the denotation, sorted and without duplicates.
    pub fn members(&self, budget: &Budget) -> Result<Vec<TernaryWord>> {
        let mut out = Vec::new();
        for c in &self.cubes {
            out.extend(c.res_partial(budget)?);
            budget.check_states(out.len())?;
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Stable words in the denotation, sorted and without duplicates.
    pub fn stable_members(&self, budget: &Budget) -> Result<Vec<TernaryWord>> {
        let mut out = Vec::new();
        for c in &self.cubes {
            out.extend(c.res_full(budget)?);
            budget.check_states(out.len())?;
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

const ZERO_BIT: u8 = 1;
const ONE_BIT: u8 = 2;
const META_BIT: u8 = 4;
const ANY: u8 = ZERO_BIT | ONE_BIT | META_BIT;

fn allowed(t: Ternary) -> u8 {
    match t {
        Ternary::Zero => ZERO_BIT,
        Ternary::One => ONE_BIT,
        Ternary::Meta => ANY,
    }
}

fn uncovered_point(region: &mut [u8], candidates: &[&TernaryWord]) -> Option<Vec<u8>> {
    let live: Vec<&TernaryWord> = candidates
        .iter()
        .copied()
        .filter(|c| c.iter().zip(region.iter()).all(|(d, &r)| allowed(d) & r != 0))
        .collect();
    if live.is_empty() {
        return Some(
            region
                .iter()
                .map(|&r| {
                    [META_BIT, ZERO_BIT, ONE_BIT]
                        .into_iter()
                        .find(|b| r & b != 0)
                        .unwrap_or(META_BIT)
                })
                .collect(),
        );
    }
    if live
        .iter()
        .any(|c| c.iter().zip(region.iter()).all(|(d, &r)| r & !allowed(d) == 0))
    {
        return None;
    }
    // Some live cube fixes a digit that the region leaves open; split there.
    let pos = (0..region.len())
        .find(|&i| region[i].count_ones() > 1 && live.iter().any(|c| c.get(i) != Ternary::Meta))
        .expect("an intersecting, non-covering cube restricts an open position");
    let saved = region[pos];
    for bit in [META_BIT, ZERO_BIT, ONE_BIT] {
        if saved & bit == 0 {
            continue;
        }
        region[pos] = bit;
        if let Some(p) = uncovered_point(region, &live) {
            region[pos] = saved;
            return Some(p);
        }
    }
    region[pos] = saved;
    None
}

impl fmt::Display for CubeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.cubes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for CubeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubeSet{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ternary::word;
    use proptest::prelude::*;

    fn set(width: usize, cubes: &[&str]) -> CubeSet {
        CubeSet::new(width, cubes.iter().map(|s| word(s))).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(set(2, &["M1", "01"]).cubes(), &[word("M1")]);
        assert_eq!(set(2, &["1M", "0M"]).cubes(), &[word("0M"), word("1M")]);
        assert!(set(2, &[]).is_empty());
    }

    #[test]
    fn width_mismatch_rejected() {
        assert!(CubeSet::new(2, [word("0")]).is_err());
    }

    #[test]
    fn contains_cube_needs_splitting() {
        // {0M, 1M, M0, M1} covers everything except MM itself.
        let s = set(2, &["0M", "1M", "M0", "M1"]);
        assert!(s.contains_cube(&word("M0")));
        assert!(!s.contains_cube(&word("MM")));
        assert_eq!(s.find_uncovered(&word("MM")), Some(word("MM")));
        // {0, 1} does not cover the cube M: the literal M is missing.
        let s = set(1, &["0", "1"]);
        assert_eq!(s.find_uncovered(&word("M")), Some(word("M")));
        let s = set(1, &["0"]);
        assert_eq!(s.find_uncovered(&word("M")), Some(word("M")));
        assert_eq!(s.find_uncovered(&word("1")), Some(word("1")));
    }

    #[test]
    fn project_and_intersect() {
        let s = set(3, &["01M", "110"]);
        assert_eq!(s.project(1, 3), set(2, &["1M"]));
        assert!(s.intersects(&set(3, &["M10"])));
        assert!(!s.intersects(&set(3, &["00M"])));
    }

    fn arb_cubes(width: usize) -> impl Strategy<Value = Vec<TernaryWord>> {
        proptest::collection::vec(
            proptest::collection::vec(0u8..3, width)
                .prop_map(|d| TernaryWord::from_digits(d.into_iter().map(|x| Ternary::ALL[x as usize]))),
            0..8,
        )
    }

    fn oracle_contains(cubes: &[TernaryWord], w: &TernaryWord) -> bool {
        cubes
            .iter()
            .any(|c| c.iter().zip(w.iter()).all(|(a, b)| a == Ternary::Meta || a == b))
    }

    proptest! {
        #[test]
        fn canonicalization_preserves_denotation(
            (width, raw) in (1usize..=6).prop_flat_map(|w| (Just(w), arb_cubes(w)))
        ) {
            let canon = CubeSet::new(width, raw.clone()).unwrap();
            for w in TernaryWord::all(width) {
                prop_assert_eq!(canon.contains(&w), oracle_contains(&raw, &w));
            }
            let mut shuffled = raw.clone();
            shuffled.reverse();
            prop_assert_eq!(&CubeSet::new(width, shuffled).unwrap(), &canon);
            prop_assert_eq!(&CubeSet::new(width, canon.cubes().to_vec()).unwrap(), &canon);
        }

        #[test]
        fn contains_cube_matches_enumeration(raw in arb_cubes(4), probe in proptest::collection::vec(0u8..3, 4)) {
            let probe = TernaryWord::from_digits(probe.into_iter().map(|x| Ternary::ALL[x as usize]));
            let s = CubeSet::new(4, raw.clone()).unwrap();
            let expected = probe
                .res_partial(&Budget::default())
                .unwrap()
                .iter()
                .all(|w| oracle_contains(&raw, w));
            prop_assert_eq!(s.contains_cube(&probe), expected);
            if let Some(w) = s.find_uncovered(&probe) {
                prop_assert!(probe.covers(&w));
                prop_assert!(!oracle_contains(&raw, &w));
            }
        }
    }
}
