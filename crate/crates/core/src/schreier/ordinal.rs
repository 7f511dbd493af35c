use std::collections::BTreeSet;
use std::fmt;

use super::{ExplicitFamily, FamilyDescriptor, FinSet};
use crate::error::{Error, Result};

/// Cantor normal form `omega^e_1 * c_1 + ... + omega^e_k * c_k`, `e_1 > ... > e_k`.
///
/// The derived order compares leading terms first, which is the ordinal order
/// for canonical forms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OrdinalCNF {
    terms: Vec<(OrdinalCNF, u64)>,
}

impl OrdinalCNF {
    pub fn zero() -> Self {
        OrdinalCNF { terms: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            OrdinalCNF::zero()
        } else {
            OrdinalCNF {
                terms: vec![(OrdinalCNF::zero(), n)],
            }
        }
    }

    pub fn omega() -> Self {
        OrdinalCNF::omega_pow(OrdinalCNF::nat(1))
    }

    pub fn omega_pow(e: OrdinalCNF) -> Self {
        OrdinalCNF { terms: vec![(e, 1)] }
    }

    /// Builds from terms, rejecting non-canonical input.
    pub fn from_terms(terms: Vec<(OrdinalCNF, u64)>) -> Result<Self> {
        if terms.iter().any(|t| t.1 == 0) || terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::Parse("terms are not in Cantor normal form".into()));
        }
        Ok(OrdinalCNF { terms })
    }

    pub fn terms(&self) -> &[(OrdinalCNF, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    /// Ordinal sum `self + other` (not commutative).
    pub fn add(&self, other: &OrdinalCNF) -> OrdinalCNF {
        let Some((lead, c)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(OrdinalCNF, u64)> =
            self.terms.iter().filter(|t| t.0 >= *lead).cloned().collect();
        let mut rest = other.terms.clone();
        if let Some(last) = terms.last() {
            if last.0 == *lead {
                let (_, a) = terms.pop().unwrap();
                rest[0].1 = a + c;
            }
        }
        terms.extend(rest);
        OrdinalCNF { terms }
    }

    pub fn succ(&self) -> OrdinalCNF {
        self.add(&OrdinalCNF::nat(1))
    }
}

impl fmt::Display for OrdinalCNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let base = match e.as_nat() {
                Some(0) => {
                    write!(f, "{c}")?;
                    continue;
                }
                Some(1) => "ω".to_string(),
                Some(n) => format!("ω^{n}"),
                None if e.terms.len() == 1 && e.terms[0].1 == 1 => format!("ω^{e}"),
                None => format!("ω^({e})"),
            };
            if *c == 1 {
                write!(f, "{base}")?;
            } else {
                write!(f, "{base}·{c}")?;
            }
        }
        Ok(())
    }
}

/// The ordinal `alpha` with `family = S_alpha`.
fn schreier_order(family: &FamilyDescriptor) -> Result<OrdinalCNF> {
    match family {
        FamilyDescriptor::Schreier(k) => Ok(OrdinalCNF::nat(*k as u64)),
        FamilyDescriptor::SchreierOmega => Ok(OrdinalCNF::omega()),
        FamilyDescriptor::S1Of(inner) => Ok(schreier_order(inner)?.succ()),
        FamilyDescriptor::Explicit(_) => Err(Error::Unsupported(
            "cb_symbolic is not defined for explicit families; use cb_explicit".into(),
        )),
    }
}

/// `CB(S_alpha) = omega^alpha + 1`, with `S_1(S_alpha) = S_(alpha+1)`.
pub fn cb_symbolic(family: &FamilyDescriptor) -> Result<OrdinalCNF> {
    Ok(OrdinalCNF::omega_pow(schreier_order(family)?).succ())
}

/// Number of derivative steps until the family is empty, where a member survives
/// a step iff it has a one-point extension in the current family.
pub fn cb_explicit(family: &FamilyDescriptor) -> Result<usize> {
    let FamilyDescriptor::Explicit(e) = family else {
        return Err(Error::Unsupported("cb_explicit needs an explicit family".into()));
    };
    cb_of(e)
}

fn cb_of(e: &ExplicitFamily) -> Result<usize> {
    if !e.is_hereditary() {
        return Err(Error::NotHereditary);
    }
    let universe: BTreeSet<usize> = e.sets().iter().flat_map(|s| s.elements().to_vec()).collect();
    let mut current: BTreeSet<FinSet> = e.sets().clone();
    let mut steps = 0;
    while !current.is_empty() {
        let next: BTreeSet<FinSet> = current
            .iter()
            .filter(|s| {
                universe.iter().any(|&x| {
                    if s.contains(x) {
                        return false;
                    }
                    let mut v = s.elements().to_vec();
                    v.push(x);
                    v.sort_unstable();
                    current.contains(&FinSet(v))
                })
            })
            .cloned()
            .collect();
        current = next;
        steps += 1;
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(e: OrdinalCNF) -> OrdinalCNF {
        OrdinalCNF::omega_pow(e)
    }

    #[test]
    fn arithmetic_and_order() {
        let one = OrdinalCNF::nat(1);
        let om = OrdinalCNF::omega();
        assert_eq!(one.add(&om), om);
        assert_eq!(om.add(&one).to_string(), "ω + 1");
        assert_eq!(OrdinalCNF::nat(2).add(&OrdinalCNF::nat(3)), OrdinalCNF::nat(5));
        assert_eq!(om.add(&om).to_string(), "ω·2");
        assert!(OrdinalCNF::nat(1000) < om);
        assert!(om.add(&OrdinalCNF::nat(7)) < w(OrdinalCNF::nat(2)));
        assert!(w(OrdinalCNF::nat(9)) < w(om.clone()));
        assert!(w(om.clone()) < w(om.succ()));
        assert_eq!(w(om.clone()).succ().to_string(), "ω^ω + 1");
        assert!(OrdinalCNF::from_terms(vec![(OrdinalCNF::nat(1), 1), (OrdinalCNF::nat(2), 1)]).is_err());
    }

    #[test]
    fn symbolic_indices() {
        let s = |k| FamilyDescriptor::Schreier(k);
        assert_eq!(cb_symbolic(&s(0)).unwrap(), OrdinalCNF::nat(2));
        assert_eq!(cb_symbolic(&s(1)).unwrap().to_string(), "ω + 1");
        assert_eq!(cb_symbolic(&s(2)).unwrap().to_string(), "ω^2 + 1");
        assert_eq!(cb_symbolic(&FamilyDescriptor::SchreierOmega).unwrap().to_string(), "ω^ω + 1");
        assert_eq!(
            cb_symbolic(&FamilyDescriptor::s1of(s(1))).unwrap(),
            cb_symbolic(&s(2)).unwrap()
        );
        assert_eq!(
            cb_symbolic(&FamilyDescriptor::s1of(FamilyDescriptor::SchreierOmega)).unwrap().to_string(),
            "ω^(ω + 1) + 1"
        );
        assert!(cb_symbolic(&FamilyDescriptor::explicit([])).is_err());
    }

    #[test]
    fn explicit_indices() {
        let fs = |v: &[usize]| FinSet::new(v.to_vec()).unwrap();
        assert_eq!(cb_explicit(&FamilyDescriptor::explicit([])).unwrap(), 1);
        let singles = FamilyDescriptor::explicit([fs(&[1]), fs(&[2]), fs(&[3])]);
        assert_eq!(cb_explicit(&singles).unwrap(), 2);
        let pairs = FamilyDescriptor::explicit((1..=9).map(|k| fs(&[k, k + 1])));
        assert_eq!(cb_explicit(&pairs).unwrap(), 3);
        let raw = FamilyDescriptor::Explicit(ExplicitFamily::raw([fs(&[1])]));
        assert_eq!(cb_explicit(&raw), Err(Error::NotHereditary));
    }
}
