//! Schreier families `S_k`, `S_omega`, `S_1(F)` and explicit hereditary families.

mod mass;
mod ordinal;
pub mod oracle;
mod tree;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use mass::{family_mass, mass_of_weights};
pub use ordinal::{cb_explicit, cb_symbolic, OrdinalCNF};
pub use tree::{tree_decompose, AdmTree};

/// Default width limit for subset enumeration.
pub const DEFAULT_WINDOW: usize = 24;

/// Strictly increasing set of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FinSet(Vec<usize>);

impl FinSet {
    pub fn new(elements: Vec<usize>) -> Result<Self> {
        if elements.first() == Some(&0) {
            return Err(Error::Parse("set elements must be positive".into()));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse(format!("set {elements:?} is not strictly increasing")));
        }
        Ok(FinSet(elements))
    }

    /// Sorts and deduplicates.
    pub fn from_unsorted(mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        FinSet::new(elements)
    }

    pub fn range(lo: usize, hi: usize) -> Self {
        FinSet((lo.max(1)..=hi).collect())
    }

    pub fn empty() -> Self {
        FinSet(Vec::new())
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// `self < other` in the block order.
    pub fn precedes(&self, other: &FinSet) -> bool {
        match (self.max(), other.min()) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        }
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for FinSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        FinSet::new(Vec::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// A finite family of finite sets, optionally closed under subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitFamily {
    sets: BTreeSet<FinSet>,
    hereditary: bool,
}

impl ExplicitFamily {
    /// Applies the hereditary closure.
    pub fn closed(sets: impl IntoIterator<Item = FinSet>) -> Self {
        let mut all = BTreeSet::new();
        all.insert(FinSet::empty());
        for s in sets {
            let n = s.len();
            assert!(n <= 30, "explicit sets are limited to 30 elements");
            for mask in 0u64..(1u64 << n) {
                let sub = (0..n)
                    .filter(|k| mask >> k & 1 == 1)
                    .map(|k| s.0[k])
                    .collect();
                all.insert(FinSet(sub));
            }
        }
        ExplicitFamily {
            sets: all,
            hereditary: true,
        }
    }

    /// Stores the sets as given, without closure.
    pub fn raw(sets: impl IntoIterator<Item = FinSet>) -> Self {
        ExplicitFamily {
            sets: sets.into_iter().collect(),
            hereditary: false,
        }
    }

    pub fn sets(&self) -> &BTreeSet<FinSet> {
        &self.sets
    }

    pub fn is_hereditary(&self) -> bool {
        self.hereditary
    }

    pub fn contains(&self, set: &FinSet) -> bool {
        self.sets.contains(set)
    }
}

impl Serialize for ExplicitFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<&FinSet> = self.sets.iter().collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExplicitFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(ExplicitFamily::closed(Vec::<FinSet>::deserialize(d)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyDescriptor {
    #[serde(rename = "schreier")]
    Schreier(usize),
    /// Diagonal `F in S_omega iff F in S_min(F)`.
    #[serde(rename = "omega")]
    SchreierOmega,
    #[serde(rename = "s1of")]
    S1Of(Box<FamilyDescriptor>),
    #[serde(rename = "explicit")]
    Explicit(ExplicitFamily),
}

impl FamilyDescriptor {
    pub fn s1of(inner: FamilyDescriptor) -> Self {
        FamilyDescriptor::S1Of(Box::new(inner))
    }

    pub fn explicit(sets: impl IntoIterator<Item = FinSet>) -> Self {
        FamilyDescriptor::Explicit(ExplicitFamily::closed(sets))
    }
}

impl fmt::Display for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyDescriptor::Schreier(k) => write!(f, "S_{k}"),
            FamilyDescriptor::SchreierOmega => write!(f, "S_omega"),
            FamilyDescriptor::S1Of(inner) => write!(f, "S_1({inner})"),
            FamilyDescriptor::Explicit(e) => write!(f, "explicit({} sets)", e.sets.len()),
        }
    }
}

/// `{"family": ...}` file wrapper.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub family: FamilyDescriptor,
}

/// Incremental membership test for `S_k`.
///
/// Level `j` keeps the minimum and the number of level-`(j-1)` blocks of the
/// open level-`j` block; a new element opens a block at the lowest level that
/// still has room.
#[derive(Clone, Debug)]
pub struct SchreierAutomaton {
    k: usize,
    levels: Vec<(usize, usize)>,
    started: bool,
    alive: bool,
}

impl SchreierAutomaton {
    pub fn new(k: usize) -> Self {
        SchreierAutomaton {
            k,
            levels: vec![(0, 0); k + 1],
            started: false,
            alive: true,
        }
    }

    pub fn alive(&self) -> bool {
        self.alive
    }

    /// Appends `x` (larger than all previous elements); returns membership of the extended set.
    pub fn push(&mut self, x: usize) -> bool {
        if !self.alive {
            return false;
        }
        if !self.started {
            self.started = true;
            for j in 1..=self.k {
                self.levels[j] = (x, 1);
            }
            return true;
        }
        if self.k == 0 {
            self.alive = false;
            return false;
        }
        let mut j = 1;
        loop {
            let (m, c) = self.levels[j];
            if c < m {
                self.levels[j].1 += 1;
                return true;
            }
            if j == self.k {
                self.alive = false;
                return false;
            }
            self.levels[j] = (x, 1);
            j += 1;
        }
    }
}

pub fn schreier_member(elements: &[usize], k: usize) -> bool {
    let mut a = SchreierAutomaton::new(k);
    elements.iter().all(|&x| a.push(x))
}

/// Splits `elements` into maximal initial segments belonging to `S_k`.
pub fn greedy_blocks(elements: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut a = SchreierAutomaton::new(k);
    for &x in elements {
        if blocks.is_empty() || !a.push(x) {
            a = SchreierAutomaton::new(k);
            a.push(x);
            blocks.push(vec![x]);
        } else {
            blocks.last_mut().unwrap().push(x);
        }
    }
    blocks
}

/// Minimal number of pairwise disjoint inner members covering `elements`.
///
/// The piece holding the lowest uncovered element is grown through inner
/// members only, and only pieces maximal inside the uncovered part are tried:
/// for a hereditary inner family any cover can be rearranged into that form.
fn min_disjoint_cover(elements: &[usize], inner: &FamilyDescriptor, cap: usize) -> Option<usize> {
    let n = elements.len();
    assert!(n <= 24, "S_1(F) membership search is limited to 24 elements");
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut search = CoverSearch {
        elements,
        inner,
        inner_memo: HashMap::new(),
        cover_memo: HashMap::new(),
    };
    search.go(full, cap)
}

struct CoverSearch<'a> {
    elements: &'a [usize],
    inner: &'a FamilyDescriptor,
    inner_memo: HashMap<u32, bool>,
    cover_memo: HashMap<(u32, usize), Option<usize>>,
}

impl CoverSearch<'_> {
    fn is_inner(&mut self, mask: u32) -> bool {
        if let Some(r) = self.inner_memo.get(&mask) {
            return *r;
        }
        let set = FinSet(
            (0..self.elements.len())
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| self.elements[k])
                .collect(),
        );
        let r = member(&set, self.inner);
        self.inner_memo.insert(mask, r);
        r
    }

    /// Inner members inside `mask` containing its lowest bit, maximal within `mask`.
    fn maximal_pieces(&mut self, mask: u32) -> Vec<u32> {
        let low = mask & mask.wrapping_neg();
        let mut found = Vec::new();
        let mut stack = vec![(low, low.trailing_zeros() + 1)];
        while let Some((piece, from)) = stack.pop() {
            let mut extended = false;
            for k in from..32 {
                let bit = 1u32 << k;
                if mask & bit == 0 {
                    continue;
                }
                if self.is_inner(piece | bit) {
                    extended = true;
                    stack.push((piece | bit, k + 1));
                }
            }
            if !extended {
                let rest = mask & !piece;
                let maximal = (0..32)
                    .map(|k| 1u32 << k)
                    .filter(|b| rest & b != 0)
                    .all(|b| !self.is_inner(piece | b));
                if maximal {
                    found.push(piece);
                }
            }
        }
        found.sort_unstable();
        found.dedup();
        found
    }

    fn go(&mut self, mask: u32, cap: usize) -> Option<usize> {
        if mask == 0 {
            return Some(0);
        }
        if cap == 0 {
            return None;
        }
        if let Some(r) = self.cover_memo.get(&(mask, cap)) {
            return *r;
        }
        let low = mask & mask.wrapping_neg();
        let mut best: Option<usize> = None;
        if self.is_inner(low) {
            for piece in self.maximal_pieces(mask) {
                let limit = best.map_or(cap, |b| b - 1).min(cap);
                if limit == 0 {
                    break;
                }
                if let Some(c) = self.go(mask & !piece, limit - 1) {
                    best = Some(c + 1);
                    if c == 0 {
                        break;
                    }
                }
            }
        }
        self.cover_memo.insert((mask, cap), best);
        best
    }
}

pub fn member(set: &FinSet, family: &FamilyDescriptor) -> bool {
    let Some(m) = set.min() else {
        return true;
    };
    match family {
        FamilyDescriptor::Schreier(k) => schreier_member(&set.0, *k),
        FamilyDescriptor::SchreierOmega => schreier_member(&set.0, m),
        FamilyDescriptor::S1Of(inner) => {
            if set.len() > 24 {
                // Beyond the search limit only the Schreier identity is available.
                match inner.as_ref() {
                    FamilyDescriptor::Schreier(k) => schreier_member(&set.0, k + 1),
                    _ => panic!("S_1(F) membership for sets above 24 elements needs F = S_k"),
                }
            } else {
                min_disjoint_cover(&set.0, inner, m).map_or(false, |c| c <= m)
            }
        }
        FamilyDescriptor::Explicit(e) => e.contains(set),
    }
}

pub fn is_admissible(sets: &[FinSet], family: &FamilyDescriptor) -> Result<bool> {
    if sets.iter().any(|s| s.is_empty()) {
        return Err(Error::EmptyPiece);
    }
    if sets.windows(2).any(|w| !w[0].precedes(&w[1])) {
        return Ok(false);
    }
    let minima = FinSet(sets.iter().map(|s| s.0[0]).collect());
    Ok(member(&minima, family))
}

/// Members of `family` inside `[lo, hi]` that are maximal under inclusion, in lexicographic order.
pub fn maximal_sets(family: &FamilyDescriptor, lo: usize, hi: usize) -> Result<Vec<FinSet>> {
    maximal_sets_with_limit(family, lo, hi, DEFAULT_WINDOW)
}

pub fn maximal_sets_with_limit(
    family: &FamilyDescriptor,
    lo: usize,
    hi: usize,
    limit: usize,
) -> Result<Vec<FinSet>> {
    if lo == 0 || lo > hi {
        return Err(Error::Parse(format!("bad window ({lo},{hi})")));
    }
    if hi - lo + 1 > limit {
        return Err(Error::WindowTooLarge(format!(
            "window ({lo},{hi}) wider than {limit}"
        )));
    }
    let universe: Vec<usize> = (lo..=hi).collect();
    maximal_members_within(family, &universe, usize::MAX)
}

/// Maximal members contained in `universe` (hereditary families only).
pub fn maximal_members_within(
    family: &FamilyDescriptor,
    universe: &[usize],
    cap: usize,
) -> Result<Vec<FinSet>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    let mut count = 0usize;
    dfs_members(family, universe, 0, &mut current, &mut |f: &[usize]| {
        let set = FinSet(f.to_vec());
        let maximal = universe.iter().all(|&e| {
            if set.contains(e) {
                return true;
            }
            let mut g = f.to_vec();
            let pos = g.partition_point(|&x| x < e);
            g.insert(pos, e);
            !member(&FinSet(g), family)
        });
        if maximal {
            out.push(set);
        }
        count += 1;
        count <= cap
    })?;
    out.sort();
    Ok(out)
}

/// Depth-first walk over every member of a hereditary family inside `universe`.
/// The visitor returns `false` to abort with `WindowTooLarge`.
pub fn dfs_members(
    family: &FamilyDescriptor,
    universe: &[usize],
    from: usize,
    current: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<()> {
    if !visit(current) {
        return Err(Error::WindowTooLarge("member enumeration cap exceeded".into()));
    }
    for k in from..universe.len() {
        current.push(universe[k]);
        if member(&FinSet(current.clone()), family) {
            dfs_members(family, universe, k + 1, current, visit)?;
        }
        current.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> FinSet {
        FinSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn finset_validation() {
        assert!(FinSet::new(vec![1, 1]).is_err());
        assert!(FinSet::new(vec![0, 2]).is_err());
        assert!(FinSet::new(vec![]).is_ok());
        assert_eq!(FinSet::from_unsorted(vec![3, 1, 3]).unwrap(), s(&[1, 3]));
        assert_eq!(s(&[2, 5]).to_string(), "{2,5}");
    }

    #[test]
    fn small_memberships() {
        let s0 = FamilyDescriptor::Schreier(0);
        let s1 = FamilyDescriptor::Schreier(1);
        let s2 = FamilyDescriptor::Schreier(2);
        assert!(member(&s(&[1]), &s0));
        assert!(!member(&s(&[1, 2]), &s0));
        assert!(!member(&s(&[1, 2]), &s1));
        assert!(member(&s(&[2, 3]), &s1));
        assert!(member(&s(&[2, 3, 4, 5, 6, 7]), &s2));
        assert!(!member(&s(&[2, 3, 4, 5, 6, 7, 8]), &s2));
        assert!(member(&s(&[2, 3, 4]), &FamilyDescriptor::SchreierOmega));
        for f in [&s0, &s1, &s2, &FamilyDescriptor::SchreierOmega] {
            assert!(member(&FinSet::empty(), f));
        }
    }

    #[test]
    fn s1_characterisation() {
        let s1 = FamilyDescriptor::Schreier(1);
        for mask in 1u32..(1 << 10) {
            let set: Vec<usize> = (0..10).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect();
            assert_eq!(member(&s(&set), &s1), set.len() <= set[0]);
        }
    }

    #[test]
    fn s1of_is_not_required_to_be_successive() {
        let inner = FamilyDescriptor::explicit([s(&[3, 5]), s(&[4, 6])]);
        let f = FamilyDescriptor::s1of(inner);
        assert!(member(&s(&[3, 4, 5, 6]), &f));
        assert!(!member(&s(&[3, 4, 5, 6, 7, 8]), &f));
    }

    #[test]
    fn admissibility() {
        let s1 = FamilyDescriptor::Schreier(1);
        assert!(is_admissible(&[s(&[4]), s(&[5]), s(&[6]), s(&[7])], &s1).unwrap());
        assert!(!is_admissible(&[s(&[1]), s(&[2])], &s1).unwrap());
        assert!(is_admissible(&[s(&[2, 3]), s(&[4, 5, 6])], &s1).unwrap());
        assert!(!is_admissible(&[s(&[2, 5]), s(&[4, 6])], &s1).unwrap());
        assert_eq!(is_admissible(&[s(&[2]), FinSet::empty()], &s1), Err(Error::EmptyPiece));
    }

    #[test]
    fn maximal_sets_small_windows() {
        let s1 = FamilyDescriptor::Schreier(1);
        let got = maximal_sets(&s1, 2, 4).unwrap();
        assert_eq!(got, vec![s(&[2, 3]), s(&[2, 4]), s(&[3, 4])]);
        let got = maximal_sets(&FamilyDescriptor::Schreier(0), 1, 3).unwrap();
        assert_eq!(got, vec![s(&[1]), s(&[2]), s(&[3])]);
        let got = maximal_sets(&FamilyDescriptor::Schreier(2), 2, 7).unwrap();
        assert!(got.contains(&s(&[2, 3, 4, 5, 6, 7])));
        assert!(matches!(
            maximal_sets(&s1, 1, 40),
            Err(Error::WindowTooLarge(_))
        ));
    }

    #[test]
    fn greedy_blocks_split() {
        assert_eq!(
            greedy_blocks(&[2, 3, 4, 5, 6, 7], 1),
            vec![vec![2, 3], vec![4, 5, 6, 7]]
        );
        assert_eq!(greedy_blocks(&[1, 2, 3], 0), vec![vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn family_json_shapes() {
        let f: FamilyFile = serde_json::from_str(r#"{"family": {"schreier": 2}}"#).unwrap();
        assert_eq!(f.family, FamilyDescriptor::Schreier(2));
        let f: FamilyFile = serde_json::from_str(r#"{"family": "omega"}"#).unwrap();
        assert_eq!(f.family, FamilyDescriptor::SchreierOmega);
        let f: FamilyFile = serde_json::from_str(r#"{"family": {"s1of": {"schreier": 1}}}"#).unwrap();
        assert_eq!(f.family, FamilyDescriptor::s1of(FamilyDescriptor::Schreier(1)));
        let f: FamilyFile = serde_json::from_str(r#"{"family": {"explicit": [[1, 2]]}}"#).unwrap();
        let FamilyDescriptor::Explicit(e) = &f.family else { panic!() };
        assert_eq!(e.sets().len(), 4);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"family":{"explicit":[[],[1],[1,2],[2]]}}"#);
    }
}
