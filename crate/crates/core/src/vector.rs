//! Finitely supported vectors stored by p-th power magnitudes.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, pow, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub sign: i8,
    /// `|a_i|^p`, always positive.
    pub mag: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C00Vector {
    p: u32,
    entries: BTreeMap<usize, Entry>,
}

impl C00Vector {
    pub fn new(p: u32) -> Self {
        assert!(p >= 1, "p must be a positive integer");
        C00Vector {
            p,
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(p: u32, i: usize) -> Self {
        let mut v = C00Vector::new(p);
        v.set(i, 1, Q::one());
        v
    }

    /// Sum of unit vectors over `indices`.
    pub fn ones(p: u32, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = C00Vector::new(p);
        for i in indices {
            v.set(i, 1, Q::one());
        }
        v
    }

    /// Vector with the given p-th power magnitudes and positive signs.
    pub fn from_mags(p: u32, mags: impl IntoIterator<Item = (usize, Q)>) -> Self {
        let mut v = C00Vector::new(p);
        for (i, m) in mags {
            v.set(i, 1, m);
        }
        v
    }

    /// Vector with actual rational coefficients; magnitudes become `|a_i|^p`.
    pub fn from_coeffs(p: u32, coeffs: impl IntoIterator<Item = (usize, Q)>) -> Self {
        let mut v = C00Vector::new(p);
        for (i, a) in coeffs {
            let sign = if a.is_negative() { -1 } else { 1 };
            v.set(i, sign, pow(&a.abs(), p));
        }
        v
    }

    /// Zero magnitudes remove the entry. Index 0 is rejected.
    pub fn set(&mut self, i: usize, sign: i8, mag: Q) {
        assert!(i >= 1, "indices are 1-based");
        assert!(!mag.is_negative(), "magnitude must be nonnegative");
        if mag.is_zero() {
            self.entries.remove(&i);
        } else {
            let sign = if sign < 0 { -1 } else { 1 };
            self.entries.insert(i, Entry { sign, mag });
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Entry> {
        self.entries.get(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Entry)> {
        self.entries.iter().map(|(i, e)| (*i, e))
    }

    pub fn indices(&self) -> Vec<usize> {
        self.entries.keys().copied().collect()
    }

    pub fn mags(&self) -> Vec<Q> {
        self.entries.values().map(|e| e.mag.clone()).collect()
    }

    pub fn min_index(&self) -> Option<usize> {
        self.entries.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    /// `sum |a_i|^p`.
    pub fn sum_p(&self) -> Q {
        self.entries.values().fold(Q::zero(), |acc, e| acc + &e.mag)
    }

    /// `max |a_i|^p`, zero for the empty vector.
    pub fn max_p(&self) -> Q {
        self.entries
            .values()
            .map(|e| &e.mag)
            .max()
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Self {
        C00Vector {
            p: self.p,
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| keep(**i))
                .map(|(i, e)| (*i, e.clone()))
                .collect(),
        }
    }

    pub fn restrict_to(&self, set: &[usize]) -> Self {
        let mut v = C00Vector::new(self.p);
        for i in set {
            if let Some(e) = self.entries.get(i) {
                v.entries.insert(*i, e.clone());
            }
        }
        v
    }

    /// Multiplies every magnitude by `s`, i.e. scales the vector by `s^(1/p)`.
    pub fn scale_p(&self, s: &Q) -> Self {
        assert!(s.is_positive());
        C00Vector {
            p: self.p,
            entries: self
                .entries
                .iter()
                .map(|(i, e)| {
                    (
                        *i,
                        Entry {
                            sign: e.sign,
                            mag: &e.mag * s,
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn flip(&self, i: usize) -> Self {
        let mut v = self.clone();
        if let Some(e) = v.entries.get_mut(&i) {
            e.sign = -e.sign;
        }
        v
    }

    pub fn abs(&self) -> Self {
        let mut v = self.clone();
        for e in v.entries.values_mut() {
            e.sign = 1;
        }
        v
    }

    /// Sum of vectors with disjoint supports.
    pub fn disjoint_sum<'a>(p: u32, parts: impl IntoIterator<Item = &'a C00Vector>) -> Result<Self> {
        let mut v = C00Vector::new(p);
        for part in parts {
            if part.p != p {
                return Err(Error::InvalidSpace(format!("mixed p: {} vs {}", part.p, p)));
            }
            for (i, e) in &part.entries {
                if v.entries.insert(*i, e.clone()).is_some() {
                    return Err(Error::NotAdmissible(format!("overlapping index {i}")));
                }
            }
        }
        Ok(v)
    }

    /// `max supp self < min supp other`.
    pub fn precedes(&self, other: &C00Vector) -> bool {
        match (self.max_index(), other.min_index()) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct VectorFile {
    p: u32,
    coeffs: Vec<(usize, String)>,
}

impl Serialize for C00Vector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .entries
            .iter()
            .map(|(i, e)| {
                let m = if e.sign < 0 { -e.mag.clone() } else { e.mag.clone() };
                (*i, fmt_q(&m))
            })
            .collect();
        VectorFile { p: self.p, coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for C00Vector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let f = VectorFile::deserialize(d)?;
        if f.p == 0 {
            return Err(D::Error::custom("p must be positive"));
        }
        let mut v = C00Vector::new(f.p);
        for (i, s) in f.coeffs {
            if i == 0 {
                return Err(D::Error::custom("indices are 1-based"));
            }
            let m = parse_q(&s).map_err(D::Error::custom)?;
            let sign = if m.is_negative() { -1 } else { 1 };
            v.set(i, sign, m.abs());
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn json_round_trip() {
        let mut v = C00Vector::new(2);
        v.set(4, 1, q(1, 1));
        v.set(7, -1, q(1, 4));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"p":2,"coeffs":[[4,"1/1"],[7,"-1/4"]]}"#);
        let back: C00Vector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn coefficients_become_powers() {
        let v = C00Vector::from_coeffs(2, [(1, q(-1, 2)), (3, q(3, 1))]);
        assert_eq!(v.get(1).unwrap().mag, q(1, 4));
        assert_eq!(v.get(1).unwrap().sign, -1);
        assert_eq!(v.sum_p(), q(37, 4));
        assert_eq!(v.max_p(), q(9, 1));
    }

    #[test]
    fn disjoint_sum_rejects_overlap() {
        let a = C00Vector::ones(1, [1, 2]);
        let b = C00Vector::ones(1, [2, 3]);
        assert!(C00Vector::disjoint_sum(1, [&a, &b]).is_err());
        let c = C00Vector::ones(1, [3]);
        assert_eq!(C00Vector::disjoint_sum(1, [&a, &c]).unwrap().len(), 3);
        assert!(a.precedes(&c) && !a.precedes(&b));
    }
}
