use num::Zero;
use serde::{Deserialize, Serialize};

use super::space::SpaceSpec;
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::schreier::{is_admissible, FamilyDescriptor, FinSet};
use crate::vector::C00Vector;

/// Tree-analysis of a norming functional; `gamma` is left implicit at Hölder equality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormCertificate {
    Leaf { index: usize, sign: i8 },
    Node { character: usize, children: Vec<NormCertificate> },
}

impl NormCertificate {
    pub fn leaves(&self) -> Vec<usize> {
        match self {
            NormCertificate::Leaf { index, .. } => vec![*index],
            NormCertificate::Node { children, .. } => children.iter().flat_map(|c| c.leaves()).collect(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            NormCertificate::Leaf { .. } => 0,
            NormCertificate::Node { children, .. } => {
                1 + children.iter().map(|c| c.depth()).max().unwrap_or(0)
            }
        }
    }
}

/// Checks every node and returns `val_p`, a lower bound for `norm_p(x)`.
pub fn verify_certificate(cert: &NormCertificate, x: &C00Vector, space: &SpaceSpec) -> Result<Q> {
    walk(cert, x, space, "root")
}

fn walk(cert: &NormCertificate, x: &C00Vector, space: &SpaceSpec, path: &str) -> Result<Q> {
    match cert {
        NormCertificate::Leaf { index, .. } => match x.get(*index) {
            Some(e) => Ok(e.mag.clone()),
            None => Err(Error::LeafOutsideSupport(path.to_string())),
        },
        NormCertificate::Node { character, children } => {
            let theta = space
                .theta(*character)
                .ok_or_else(|| Error::UnknownCharacter(path.to_string()))?;
            if children.is_empty() {
                return Err(Error::BadAdmissibility(path.to_string()));
            }
            let mut sets = Vec::new();
            for c in children {
                let mut l = c.leaves();
                l.sort_unstable();
                let n = l.len();
                l.dedup();
                if l.len() != n {
                    return Err(Error::BadAdmissibility(path.to_string()));
                }
                sets.push(FinSet::new(l).map_err(|_| Error::BadAdmissibility(path.to_string()))?);
            }
            if !is_admissible(&sets, &FamilyDescriptor::Schreier(*character))? {
                return Err(Error::BadAdmissibility(path.to_string()));
            }
            let mut sum = Q::zero();
            for (k, c) in children.iter().enumerate() {
                sum += walk(c, x, space, &format!("{path}.{k}"))?;
            }
            Ok(theta * sum)
        }
    }
}
