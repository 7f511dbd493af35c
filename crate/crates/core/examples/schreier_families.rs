//! Membership, maximal sets, CB indices and admissible trees.
use tsirelson::schreier::{cb_symbolic, maximal_sets, member, tree_decompose, FamilyDescriptor, FinSet};

fn main() -> tsirelson::Result<()> {
    let s2 = FamilyDescriptor::Schreier(2);
    for set in [vec![2, 3], vec![3, 4, 5, 6], vec![2, 3, 4, 5, 6, 7], vec![2, 3, 4, 5, 6, 7, 8]] {
        let f = FinSet::new(set)?;
        println!("{f} in S_2: {}", member(&f, &s2));
    }

    println!("maximal S_1 sets in [2, 6]:");
    for f in maximal_sets(&FamilyDescriptor::Schreier(1), 2, 6)? {
        println!("  {f}");
    }

    for fam in [
        FamilyDescriptor::Schreier(0),
        FamilyDescriptor::Schreier(1),
        FamilyDescriptor::Schreier(3),
        FamilyDescriptor::SchreierOmega,
        FamilyDescriptor::s1of(FamilyDescriptor::Schreier(1)),
    ] {
        println!("CB({fam}) = {}", cb_symbolic(&fam)?);
    }

    let pieces: Vec<FinSet> = (2..=7).map(|i| FinSet::new(vec![i])).collect::<Result<_, _>>()?;
    let tree = tree_decompose(&pieces, 2)?;
    println!("tree height {} over {} terminals", tree.height(), tree.terminals().len());
    Ok(())
}
