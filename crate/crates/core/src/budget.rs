use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::rational::q;
use crate::vector::C00Vector;

/// Seeded search budget, written `seed=7,max=5000[,time=30][,support=64]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Budget {
    pub seed: u64,
    pub max_candidates: usize,
    /// Seconds; runs that hit it are no longer reproducible.
    pub time_limit: Option<f64>,
    /// Largest index a constructed vector may use.
    pub max_support: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            seed: 0,
            max_candidates: 2000,
            time_limit: None,
            max_support: 64,
        }
    }
}

impl Budget {
    pub fn new(seed: u64, max_candidates: usize) -> Self {
        Budget {
            seed,
            max_candidates,
            ..Budget::default()
        }
    }

    pub fn with_support(mut self, max_support: usize) -> Self {
        self.max_support = max_support;
        self
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn meter(&self) -> Meter {
        Meter {
            used: 0,
            max: self.max_candidates,
            deadline: self
                .time_limit
                .map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0))),
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seed={},max={},support={}", self.seed, self.max_candidates, self.max_support)?;
        if let Some(t) = self.time_limit {
            write!(f, ",time={t}")?;
        }
        Ok(())
    }
}

impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut b = Budget::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("budget field `{part}`")))?;
            let bad = || Error::Parse(format!("budget value `{part}`"));
            match k.trim() {
                "seed" => b.seed = v.trim().parse().map_err(|_| bad())?,
                "max" => b.max_candidates = v.trim().parse().map_err(|_| bad())?,
                "time" => b.time_limit = Some(v.trim().parse().map_err(|_| bad())?),
                "support" => b.max_support = v.trim().parse().map_err(|_| bad())?,
                _ => return Err(Error::Parse(format!("unknown budget field `{k}`"))),
            }
        }
        Ok(b)
    }
}

/// Nonempty vector on `lo..=hi` with coefficients in `{0, +-1/4, ..., +-1}`.
pub fn random_vector(rng: &mut impl Rng, p: u32, lo: usize, hi: usize) -> C00Vector {
    loop {
        let v = C00Vector::from_coeffs(p, (lo..=hi).map(|i| (i, q(rng.gen_range(-4..=4), 4))));
        if !v.is_empty() {
            return v;
        }
    }
}

/// Counts candidates against a budget.
pub struct Meter {
    used: usize,
    max: usize,
    deadline: Option<Instant>,
}

impl Meter {
    /// Takes one candidate; `false` once the budget is spent.
    pub fn take(&mut self) -> bool {
        if self.used >= self.max {
            return false;
        }
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                return false;
            }
        }
        self.used += 1;
        true
    }

    pub fn used(&self) -> usize {
        self.used
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_budget() {
        let b: Budget = "seed=7,max=5000".parse().unwrap();
        assert_eq!((b.seed, b.max_candidates, b.max_support), (7, 5000, 64));
        let b: Budget = "seed=1, max=3, time=2.5, support=40".parse().unwrap();
        assert_eq!(b.time_limit, Some(2.5));
        assert_eq!(b.max_support, 40);
        assert!("seed=x".parse::<Budget>().is_err());
        assert!("depth=3".parse::<Budget>().is_err());
        assert_eq!(b.to_string(), "seed=1,max=3,support=40,time=2.5");
    }

    #[test]
    fn meter_counts() {
        let mut m = Budget::new(0, 2).meter();
        assert!(m.take() && m.take() && !m.take());
        assert_eq!(m.used(), 2);
    }
}
