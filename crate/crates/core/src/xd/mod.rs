//! A desk-scale norming set `D` with sigma-coded special functionals (`p = 1`).
//!
//! `D` contains `+-e_i^*`, the weighted rules
//! `theta_n sum gamma_i f_i` over `S_n`-admissible `f_1 < ... < f_k` (`n in N`),
//! and the special rules `rho_l sum gamma_i E f_i` over sigma-chained sequences
//! (`l in L`), where `f_(i+1)` must carry the character `sigma(f_1, ..., f_i)`.
//! Only a finite inner part is ever built, so `||x||_D` is bounded from below,
//! and from above by the mixed Tsirelson norm over all pairs.

mod build;
mod claim;
mod lower;

pub use build::{build_d, norm_d_bounds, DFunctional, DSet, DEFAULT_CAP};
pub use claim::{claim_scan, i_n, j_n, ClaimReport};
pub use lower::norm_d_lower;

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::SpaceSpec;
use crate::rational::{parse_q, fmt_q, q, Q};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsFile", into = "ParamsFile")]
pub struct DSpaceParams {
    pub p: u32,
    /// `(n, theta_n)` for `n in N`, increasing.
    pub weights: Vec<(usize, Q)>,
    /// `(l, rho_l)` for `l in L`, increasing.
    pub special: Vec<(usize, Q)>,
    pub gamma_grid: Vec<Q>,
    /// `false` replaces the coding by the constant first character.
    pub growth: bool,
}

impl DSpaceParams {
    pub fn new(
        p: u32,
        mut weights: Vec<(usize, Q)>,
        mut special: Vec<(usize, Q)>,
        gamma_grid: Vec<Q>,
        growth: bool,
    ) -> Result<Self> {
        if p != 1 {
            return Err(Error::Unsupported("the norming set is built for p = 1 only".into()));
        }
        weights.sort_by_key(|(n, _)| *n);
        special.sort_by_key(|(l, _)| *l);
        if weights.is_empty() {
            return Err(Error::InvalidSpace("N is empty".into()));
        }
        for (_, t) in weights.iter().chain(&special) {
            if *t <= Q::zero() || *t >= Q::one() {
                return Err(Error::DegenerateTheta);
            }
        }
        // fails on irregular weights
        SpaceSpec::new(p, weights.clone(), true)?;
        if gamma_grid.iter().any(|g| g.abs() > Q::one()) {
            return Err(Error::InvalidSpace("gamma grid leaves the unit ball".into()));
        }
        if gamma_grid.iter().any(|g| !gamma_grid.contains(&-g)) {
            return Err(Error::InvalidSpace("gamma grid must be symmetric".into()));
        }
        Ok(DSpaceParams {
            p,
            weights,
            special,
            gamma_grid,
            growth,
        })
    }

    /// `N = {1,2,3,4}`, `theta_n = 2^-n`, `L = {1,2}`, `rho_l = 8^-l`, grid `{0, +-1, +-1/2}`.
    pub fn preset() -> Self {
        let weights = (1..=4).map(|n| (n, q(1, 1 << n))).collect();
        let special = vec![(1, q(1, 8)), (2, q(1, 64))];
        let grid = vec![q(0, 1), q(1, 1), q(-1, 1), q(1, 2), q(-1, 2)];
        DSpaceParams::new(1, weights, special, grid, true).unwrap()
    }

    /// The preset with the coding replaced by a constant.
    pub fn no_growth() -> Self {
        DSpaceParams {
            growth: false,
            ..Self::preset()
        }
    }

    pub fn characters(&self) -> Vec<usize> {
        self.weights.iter().map(|(n, _)| *n).collect()
    }

    pub fn theta(&self, n: usize) -> Option<&Q> {
        self.weights.iter().find(|(m, _)| *m == n).map(|(_, t)| t)
    }

    pub fn rho(&self, l: usize) -> Option<&Q> {
        self.special.iter().find(|(m, _)| *m == l).map(|(_, t)| t)
    }

    /// `T[(S_n, theta_n)_(n in N)]`, contained in `D`.
    pub fn z_space(&self) -> SpaceSpec {
        SpaceSpec::new(self.p, self.weights.clone(), true).expect("checked at construction")
    }

    /// Mixed Tsirelson space over all pairs of `N` and `L`; shared characters keep the larger weight.
    pub fn envelope_space(&self) -> SpaceSpec {
        let mut all: BTreeMap<usize, Q> = BTreeMap::new();
        for (n, t) in self.weights.iter().chain(&self.special) {
            let e = all.entry(*n).or_insert_with(|| t.clone());
            if t > e {
                *e = t.clone();
            }
        }
        SpaceSpec::new(self.p, all.into_iter().collect(), false).expect("weights in (0, 1)")
    }
}

#[derive(Serialize, Deserialize)]
struct ParamsFile {
    p: u32,
    #[serde(rename = "N")]
    weights: Vec<(usize, String)>,
    #[serde(rename = "L")]
    special: Vec<(usize, String)>,
    gamma: Vec<String>,
    #[serde(default = "yes")]
    growth: bool,
}

fn yes() -> bool {
    true
}

impl TryFrom<ParamsFile> for DSpaceParams {
    type Error = Error;

    fn try_from(f: ParamsFile) -> Result<Self> {
        let pairs = |v: Vec<(usize, String)>| -> Result<Vec<(usize, Q)>> {
            v.into_iter().map(|(n, t)| Ok((n, parse_q(&t)?))).collect()
        };
        let grid = f.gamma.iter().map(|g| parse_q(g)).collect::<Result<_>>()?;
        DSpaceParams::new(f.p, pairs(f.weights)?, pairs(f.special)?, grid, f.growth)
    }
}

impl From<DSpaceParams> for ParamsFile {
    fn from(d: DSpaceParams) -> Self {
        let pairs = |v: &[(usize, Q)]| v.iter().map(|(n, t)| (*n, fmt_q(t))).collect();
        ParamsFile {
            p: d.p,
            weights: pairs(&d.weights),
            special: pairs(&d.special),
            gamma: d.gamma_grid.iter().map(fmt_q).collect(),
            growth: d.growth,
        }
    }
}

/// Coefficients of a functional, `index -> coefficient`.
pub type Coeffs = BTreeMap<usize, Q>;

/// Canonical text of a word of functionals.
pub fn word_key(word: &[&Coeffs]) -> String {
    word.iter()
        .map(|f| {
            f.iter()
                .map(|(i, c)| format!("{i}:{}", fmt_q(c)))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join("|")
}

/// The injective coding of words into `N`.
///
/// Each new word takes the smallest free position at or after `maxsupp - 1`;
/// the character is the element of `N` at that position. Positions are handed
/// out in the order words are first coded, so the map is injective and
/// `maxsupp >= m` forces a position `>= m - 1`.
#[derive(Clone, Debug, Default)]
pub struct SigmaCoding {
    characters: Vec<usize>,
    growth: bool,
    positions: BTreeMap<String, usize>,
    taken: BTreeSet<usize>,
}

impl SigmaCoding {
    pub fn new(params: &DSpaceParams) -> Self {
        SigmaCoding {
            characters: params.characters(),
            growth: params.growth,
            ..Default::default()
        }
    }

    /// Position in `N` of `word`, assigning one on first use.
    pub fn position(&mut self, word: &[&Coeffs]) -> usize {
        if !self.growth {
            return 0;
        }
        let key = word_key(word);
        if let Some(p) = self.positions.get(&key) {
            return *p;
        }
        let maxsupp = word.last().and_then(|f| f.keys().next_back().copied()).unwrap_or(1);
        let mut pos = maxsupp.saturating_sub(1);
        while self.taken.contains(&pos) {
            pos += 1;
        }
        self.taken.insert(pos);
        self.positions.insert(key, pos);
        pos
    }

    /// `sigma(word)`, or `NOutOfRange` past the finite list `N`.
    pub fn code(&mut self, word: &[&Coeffs]) -> Result<usize> {
        let pos = self.position(word);
        self.characters
            .get(pos)
            .copied()
            .ok_or(Error::NOutOfRange(pos + 1, self.characters.len()))
    }

    /// Number of distinct coded words; equals the number of taken positions.
    pub fn injective(&self) -> bool {
        !self.growth || self.positions.len() == self.taken.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(entries: &[(usize, i64)]) -> Coeffs {
        entries.iter().map(|&(i, c)| (i, q(c, 2))).collect()
    }

    #[test]
    fn params_json() {
        let d = DSpaceParams::preset();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.contains(r#""N":[[1,"1/2"]"#));
        let back: DSpaceParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert!(DSpaceParams::new(2, d.weights.clone(), vec![], vec![], true).is_err());
        assert!(DSpaceParams::new(1, vec![(1, q(1, 2)), (2, q(1, 5))], vec![], vec![], true).is_err());
        assert_eq!(d.envelope_space().theta(2), Some(&q(1, 4)));
    }

    #[test]
    fn sigma_is_injective_and_grows() {
        let d = DSpaceParams::new(1, (1..=12).map(|n| (n, q(1, 1 << n))).collect(), vec![], vec![], true).unwrap();
        let mut s = SigmaCoding::new(&d);
        let a = coeffs(&[(1, 1)]);
        let b = coeffs(&[(1, -1)]);
        let c = coeffs(&[(3, 1)]);
        let e = coeffs(&[(7, 1)]);
        let (ca, cb) = (s.code(&[&a]).unwrap(), s.code(&[&b]).unwrap());
        assert_ne!(ca, cb);
        assert_eq!(s.code(&[&a]).unwrap(), ca);
        let (c3, c7) = (s.code(&[&c]).unwrap(), s.code(&[&e]).unwrap());
        assert!(c7 > c3 && c7 >= 7);
        assert!(s.injective());
        let far = coeffs(&[(40, 1)]);
        assert!(matches!(s.code(&[&far]), Err(Error::NOutOfRange(40, 12))));
    }
}
