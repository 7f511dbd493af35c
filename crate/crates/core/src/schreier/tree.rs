use super::{greedy_blocks, is_admissible, FamilyDescriptor, FinSet};
use crate::error::{Error, Result};

/// Tree of sets whose non-terminal nodes have successive, `S_1`-admissible children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmTree {
    pub set: FinSet,
    pub children: Vec<AdmTree>,
}

impl AdmTree {
    fn leaf(set: FinSet) -> Self {
        AdmTree {
            set,
            children: Vec::new(),
        }
    }

    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    pub fn terminals(&self) -> Vec<&FinSet> {
        if self.children.is_empty() {
            return vec![&self.set];
        }
        self.children.iter().flat_map(|c| c.terminals()).collect()
    }

    pub fn check_invariants(&self) -> bool {
        if self.children.is_empty() {
            return true;
        }
        let sets: Vec<FinSet> = self.children.iter().map(|c| c.set.clone()).collect();
        let admissible = is_admissible(&sets, &FamilyDescriptor::Schreier(1)).unwrap_or(false);
        let union: Vec<usize> = sets.iter().flat_map(|s| s.elements().to_vec()).collect();
        admissible && union == self.set.elements() && self.children.iter().all(|c| c.check_invariants())
    }
}

fn union(sets: &[FinSet]) -> FinSet {
    FinSet(sets.iter().flat_map(|s| s.elements().to_vec()).collect())
}

/// `S_M`-admissible sets arranged as an `S_1`-admissible tree of height at most `M`.
pub fn tree_decompose(sets: &[FinSet], m: usize) -> Result<AdmTree> {
    if sets.is_empty() {
        return Err(Error::NotAdmissible("no sets".into()));
    }
    if !is_admissible(sets, &FamilyDescriptor::Schreier(m))? {
        return Err(Error::NotAdmissible(format!("sequence is not S_{m}-admissible")));
    }
    Ok(build(sets, m))
}

fn build(sets: &[FinSet], m: usize) -> AdmTree {
    if sets.len() == 1 {
        return AdmTree::leaf(sets[0].clone());
    }
    if m <= 1 {
        return AdmTree {
            set: union(sets),
            children: sets.iter().cloned().map(AdmTree::leaf).collect(),
        };
    }
    let minima: Vec<usize> = sets.iter().map(|s| s.elements()[0]).collect();
    let blocks = greedy_blocks(&minima, m - 1);
    if blocks.len() == 1 {
        return build(sets, m - 1);
    }
    let mut children = Vec::new();
    let mut at = 0;
    for b in blocks {
        children.push(build(&sets[at..at + b.len()], m - 1));
        at += b.len();
    }
    AdmTree {
        set: union(sets),
        children,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn singles(v: &[usize]) -> Vec<FinSet> {
        v.iter().map(|&x| FinSet::new(vec![x]).unwrap()).collect()
    }

    #[test]
    fn examples() {
        let t = tree_decompose(&singles(&[4, 5, 6, 7]), 1).unwrap();
        assert_eq!(t.children.len(), 4);
        assert_eq!(t.height(), 1);

        let t = tree_decompose(&singles(&[2, 3, 4, 5, 6, 7]), 2).unwrap();
        assert_eq!(t.children.len(), 2);
        assert_eq!(t.children[0].set.elements(), &[2, 3]);
        assert_eq!(t.children[1].set.elements(), &[4, 5, 6, 7]);
        assert!(t.check_invariants());
        assert!(t.height() <= 2);

        assert!(matches!(
            tree_decompose(&singles(&[1, 2]), 1),
            Err(Error::NotAdmissible(_))
        ));
    }

    #[test]
    fn terminals_are_inputs() {
        let sets = vec![
            FinSet::new(vec![3, 4]).unwrap(),
            FinSet::new(vec![5]).unwrap(),
            FinSet::new(vec![6, 9]).unwrap(),
            FinSet::new(vec![10]).unwrap(),
            FinSet::new(vec![11]).unwrap(),
        ];
        let t = tree_decompose(&sets, 2).unwrap();
        let got: Vec<FinSet> = t.terminals().into_iter().cloned().collect();
        assert_eq!(got, sets);
        assert!(t.check_invariants());
    }
}
