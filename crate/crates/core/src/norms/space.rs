use num::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, pow, q, root_bounds, Q};

/// Parameters of `T^(p)[(S_n, theta_n)_n]` for a finite list of characters `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceSpec {
    p: u32,
    pairs: Vec<(usize, Q)>,
    regular: bool,
}

impl SpaceSpec {
    pub fn new(p: u32, mut pairs: Vec<(usize, Q)>, regular: bool) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidSpace("p must be a positive integer".into()));
        }
        if pairs.is_empty() {
            return Err(Error::InvalidSpace("at least one pair is required".into()));
        }
        pairs.sort_by_key(|(n, _)| *n);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidSpace("characters must be distinct".into()));
        }
        for (n, t) in &pairs {
            if *n == 0 {
                return Err(Error::InvalidSpace("characters start at 1".into()));
            }
            if *t <= Q::zero() || *t > Q::one() {
                return Err(Error::InvalidSpace(format!("theta_{n} = {t} is outside (0,1]")));
            }
        }
        if pairs.len() > 1 && pairs.iter().any(|(_, t)| t.is_one()) {
            return Err(Error::DegenerateTheta);
        }
        let spec = SpaceSpec { p, pairs, regular };
        if regular {
            if let Some(why) = spec.regularity_violation() {
                return Err(Error::InvalidSpace(format!("not regular: {why}")));
            }
        }
        Ok(spec)
    }

    /// `T[S_1, theta]` with `p = 1`.
    pub fn tsirelson(theta: Q) -> Self {
        SpaceSpec::new(1, vec![(1, theta)], true).expect("valid single pair")
    }

    pub fn single(p: u32, n: usize, theta: Q) -> Result<Self> {
        SpaceSpec::new(p, vec![(n, theta)], true)
    }

    /// `(S_n, 2^-n / (n+1))` for `n = 1..=k`.
    pub fn mixed_decay(p: u32, k: usize) -> Self {
        SpaceSpec::new(p, decay_pairs(k), true).expect("decay pairs are regular")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn pairs(&self) -> &[(usize, Q)] {
        &self.pairs
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    pub fn theta(&self, n: usize) -> Option<&Q> {
        self.pairs.iter().find(|(k, _)| *k == n).map(|(_, t)| t)
    }

    pub fn max_theta(&self) -> Q {
        self.pairs.iter().map(|(_, t)| t).max().cloned().unwrap()
    }

    pub fn max_character(&self) -> usize {
        self.pairs.last().unwrap().0
    }

    /// Single pair with `theta = 1`: the norm is taken to be the `l_p` norm.
    pub fn is_lp(&self) -> bool {
        self.pairs.len() == 1 && self.pairs[0].1.is_one()
    }

    pub fn with_p(&self, p: u32) -> Result<Self> {
        SpaceSpec::new(p, self.pairs.clone(), self.regular)
    }

    fn regularity_violation(&self) -> Option<String> {
        for w in self.pairs.windows(2) {
            if w[1].1 > w[0].1 {
                return Some(format!("theta_{} > theta_{}", w[1].0, w[0].0));
            }
        }
        for (n, a) in &self.pairs {
            for (m, b) in &self.pairs {
                if let Some(c) = self.theta(n + m) {
                    if *c < a * b {
                        return Some(format!("theta_{} < theta_{n} * theta_{m}", n + m));
                    }
                }
            }
        }
        None
    }
}

pub fn decay_pairs(k: usize) -> Vec<(usize, Q)> {
    (1..=k)
        .map(|n| (n, Q::new(1.into(), (num::BigInt::from(1) << n) * (n as i64 + 1))))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct SpaceFile {
    p: u32,
    pairs: Vec<(usize, String)>,
    #[serde(default)]
    regular: bool,
}

impl Serialize for SpaceSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpaceFile {
            p: self.p,
            pairs: self.pairs.iter().map(|(n, t)| (*n, fmt_q(t))).collect(),
            regular: self.regular,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpaceSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let f = SpaceFile::deserialize(d)?;
        let mut pairs = Vec::new();
        for (n, t) in f.pairs {
            pairs.push((n, parse_q(&t).map_err(D::Error::custom)?));
        }
        SpaceSpec::new(f.p, pairs, f.regular).map_err(D::Error::custom)
    }
}

/// `theta_bar_n = sup { prod theta_(n_i) : sum n_i >= n }` for `n = 1..=horizon`.
///
/// A product stays optimal after dropping factors while the sum stays `>= n`,
/// so only sums below `n + max N` matter.
pub fn regularize(pairs: &[(usize, Q)], horizon: usize) -> Vec<(usize, Q)> {
    if pairs.is_empty() {
        return Vec::new();
    }
    let top = pairs.iter().map(|(n, _)| *n).max().unwrap();
    let limit = horizon + top;
    let mut best: Vec<Option<Q>> = vec![None; limit + 1];
    best[0] = Some(Q::one());
    for s in 1..=limit {
        let mut b: Option<Q> = None;
        for (k, t) in pairs {
            if *k <= s {
                if let Some(prev) = &best[s - k] {
                    let v = prev * t;
                    if b.as_ref().map_or(true, |x| v > *x) {
                        b = Some(v);
                    }
                }
            }
        }
        best[s] = b;
    }
    (1..=horizon)
        .map(|n| {
            let v = (n..n + top)
                .filter_map(|s| best[s].clone())
                .max()
                .expect("some sum in [n, n + max N) is reachable");
            (n, v)
        })
        .collect()
}

/// Bounds on `max_{n <= horizon} theta_n^(1/n)` over the listed pairs, each root
/// rounded outward, with `upper - lower <= tol`.
pub fn theta_sup_bounds(pairs: &[(usize, Q)], horizon: usize, tol: &Q) -> Result<(Q, Q)> {
    if *tol <= Q::zero() {
        return Err(Error::ToleranceUnreachable);
    }
    let mut bits = 1u32;
    while pow(&q(1, 2), bits) > *tol {
        bits += 1;
        if bits > 4096 {
            return Err(Error::ToleranceUnreachable);
        }
    }
    let mut lower: Option<Q> = None;
    let mut upper: Option<Q> = None;
    for (n, t) in pairs.iter().filter(|(n, _)| *n <= horizon) {
        let (lo, hi) = root_bounds(t, *n as u32, bits);
        if lower.as_ref().map_or(true, |l| lo > *l) {
            lower = Some(lo);
        }
        if upper.as_ref().map_or(true, |u| hi > *u) {
            upper = Some(hi);
        }
    }
    match (lower, upper) {
        (Some(l), Some(u)) => Ok((l, u)),
        _ => Err(Error::ToleranceUnreachable),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SpaceSpec::new(1, vec![(1, q(1, 2))], true).is_ok());
        assert_eq!(
            SpaceSpec::new(1, vec![(1, q(1, 1)), (2, q(1, 2))], false),
            Err(Error::DegenerateTheta)
        );
        assert!(SpaceSpec::new(1, vec![(1, q(3, 2))], false).is_err());
        assert!(SpaceSpec::new(1, vec![(1, q(1, 2)), (1, q(1, 3))], false).is_err());
        assert!(SpaceSpec::new(1, vec![(1, q(1, 2)), (2, q(1, 5))], true).is_err());
        assert!(SpaceSpec::new(1, vec![(1, q(1, 2)), (2, q(1, 5))], false).is_ok());
        assert!(SpaceSpec::single(2, 1, q(1, 1)).unwrap().is_lp());
        let z = SpaceSpec::mixed_decay(1, 6);
        assert_eq!(z.theta(2), Some(&q(1, 12)));
    }

    #[test]
    fn json_shape() {
        let s: SpaceSpec = serde_json::from_str(r#"{"p": 1, "pairs": [[1, "1/2"]], "regular": true}"#).unwrap();
        assert_eq!(s, SpaceSpec::tsirelson(q(1, 2)));
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"p":1,"pairs":[[1,"1/2"]],"regular":true}"#
        );
    }

    #[test]
    fn regularization() {
        let r = regularize(&[(1, q(1, 2))], 4);
        assert_eq!(r, (1..=4).map(|n| (n, pow(&q(1, 2), n as u32))).collect::<Vec<_>>());
        let r = regularize(&[(2, q(1, 4))], 3);
        assert_eq!(r[2], (3, q(1, 16)));
        assert_eq!(r[0], (1, q(1, 4)));
        let z = decay_pairs(6);
        let r = regularize(&z, 8);
        for (n, t) in &z {
            assert!(r[n - 1].1 >= *t);
        }
        for a in 1..=4 {
            for b in 1..=4 {
                assert!(r[a + b - 1].1 >= &r[a - 1].1 * &r[b - 1].1);
            }
        }
    }

    #[test]
    fn sup_bounds() {
        let tol = q(1, 1_000_000);
        let pairs: Vec<(usize, Q)> = (1..=10).map(|n| (n, pow(&q(1, 2), n as u32))).collect();
        let (lo, hi) = theta_sup_bounds(&pairs, 10, &tol).unwrap();
        assert_eq!((lo, hi), (q(1, 2), q(1, 2)));
        let (lo, hi) = theta_sup_bounds(&[(1, q(1, 2))], 5, &tol).unwrap();
        assert_eq!((lo, hi), (q(1, 2), q(1, 2)));
        let (lo, hi) = theta_sup_bounds(&decay_pairs(20), 20, &tol).unwrap();
        assert!(&hi - &lo <= tol);
        let t20 = &decay_pairs(20)[19].1;
        assert!(pow(&lo, 20) <= *t20 && pow(&hi, 20) >= *t20);
        assert!(hi < q(1, 2));
        assert_eq!(theta_sup_bounds(&[(3, q(1, 8))], 2, &tol), Err(Error::ToleranceUnreachable));
    }
}
