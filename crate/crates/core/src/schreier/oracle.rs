//! Exhaustive decomposition search for `S_k` membership, kept as a test oracle.

use std::collections::HashMap;

#[derive(Default)]
pub struct ExhaustiveSchreier {
    memo: HashMap<(Vec<usize>, usize), bool>,
}

impl ExhaustiveSchreier {
    pub fn new() -> Self {
        Self::default()
    }

    /// Tries every split of `elements` into consecutive runs.
    pub fn member(&mut self, elements: &[usize], k: usize) -> bool {
        if elements.len() <= 1 {
            return true;
        }
        if k == 0 {
            return false;
        }
        let key = (elements.to_vec(), k);
        if let Some(r) = self.memo.get(&key) {
            return *r;
        }
        let r = self.split(elements, k, elements[0]);
        self.memo.insert(key, r);
        r
    }

    /// Can `rest` be cut into at most `budget` consecutive `S_(k-1)` runs?
    fn split(&mut self, rest: &[usize], k: usize, budget: usize) -> bool {
        if rest.is_empty() {
            return true;
        }
        if budget == 0 {
            return false;
        }
        for cut in (1..=rest.len()).rev() {
            if self.member(&rest[..cut], k - 1) && self.split(&rest[cut..], k, budget - 1) {
                return true;
            }
        }
        false
    }
}
