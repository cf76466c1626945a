use std::collections::HashSet;

use serde::Serialize;

use super::{ChainDecomposition, Ground};
use crate::subset::MaskSet;

/// Outcome of checking a claimed chain partition. Failures are data, not
/// errors, so that callers can print the report for corrupted input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub chains_valid: bool,
    pub disjoint: bool,
    pub covers_ground: bool,
    pub chain_count: usize,
    pub element_count: usize,
    pub ground_size: u128,
    pub passed: bool,
    /// First few human-readable problems, if any.
    pub problems: Vec<String>,
}

const MAX_PROBLEMS: usize = 8;

pub fn verify_chain_decomposition(d: &ChainDecomposition) -> VerificationReport {
    let n = d.n;
    let ground_size = d.ground.size(n);
    let mut problems = Vec::new();
    let mut note = |p: String| {
        if problems.len() < MAX_PROBLEMS {
            problems.push(p);
        }
    };

    let mut chains_valid = true;
    for (i, c) in d.chains.iter().enumerate() {
        if !c.is_valid() {
            chains_valid = false;
            note(format!("part {i} is not a strictly increasing chain"));
        }
    }

    let mut disjoint = true;
    let mut outside = 0usize;
    let mut distinct = 0u128;
    let mut seen_dense = (n <= 32).then(|| MaskSet::new(n));
    let mut seen_sparse: HashSet<u64> = HashSet::new();
    for (i, c) in d.chains.iter().enumerate() {
        for &x in c.elements() {
            if !d.ground.contains(n, x) {
                outside += 1;
                note(format!(
                    "part {i} contains {x:x}, which is outside the ground family"
                ));
                continue;
            }
            let fresh = match seen_dense.as_mut() {
                Some(set) => set.insert(x),
                None => seen_sparse.insert(x),
            };
            if fresh {
                distinct += 1;
            } else {
                disjoint = false;
                note(format!(
                    "element {x:x} appears in more than one place (part {i})"
                ));
            }
        }
    }
    let covers_ground = outside == 0 && distinct == ground_size;
    if distinct < ground_size {
        note(format!(
            "{} ground element(s) are not covered",
            ground_size - distinct
        ));
    }
    if matches!(d.ground, Ground::Explicit(_)) && outside > 0 {
        note(format!("{outside} element(s) outside explicit ground"));
    }

    VerificationReport {
        chains_valid,
        disjoint,
        covers_ground,
        chain_count: d.chains.len(),
        element_count: d.element_count(),
        ground_size,
        passed: chains_valid && disjoint && covers_ground,
        problems,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Chain;

    fn full_n2() -> ChainDecomposition {
        ChainDecomposition::new(
            2,
            Ground::Full,
            vec![
                Chain::new(vec![0b00, 0b01, 0b11]).unwrap(),
                Chain::new(vec![0b10]).unwrap(),
            ],
        )
    }

    #[test]
    fn accepts_valid_partition() {
        let r = verify_chain_decomposition(&full_n2());
        assert!(r.passed, "{r:?}");
        assert_eq!(r.chain_count, 2);
    }

    #[test]
    fn detects_shared_element() {
        let mut d = full_n2();
        d.chains[1] = Chain::new(vec![0b10, 0b11]).unwrap();
        let r = verify_chain_decomposition(&d);
        assert!(!r.passed && !r.disjoint);
        assert!(r.chains_valid);
    }

    #[test]
    fn detects_missing_empty_set() {
        let mut d = full_n2();
        d.chains[0] = Chain::new(vec![0b01, 0b11]).unwrap();
        let r = verify_chain_decomposition(&d);
        assert!(!r.passed && !r.covers_ground && r.disjoint);
    }

    #[test]
    fn detects_non_chain() {
        let mut d = full_n2();
        d.chains[0] = Chain::from_raw(vec![0b00, 0b11, 0b01]);
        let r = verify_chain_decomposition(&d);
        assert!(!r.passed && !r.chains_valid);
    }

    #[test]
    fn explicit_ground() {
        let d = ChainDecomposition::new(
            3,
            Ground::explicit(vec![0b001, 0b011]),
            vec![Chain::new(vec![0b001, 0b011]).unwrap()],
        );
        assert!(verify_chain_decomposition(&d).passed);
        let bad = ChainDecomposition::new(
            3,
            Ground::explicit(vec![0b001]),
            vec![Chain::new(vec![0b001, 0b011]).unwrap()],
        );
        assert!(!verify_chain_decomposition(&bad).passed);
    }
}
