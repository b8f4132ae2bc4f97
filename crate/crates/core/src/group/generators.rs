use super::{base_point, hash_to_group, GroupElement};
use std::sync::OnceLock;

pub const LABEL_H: &[u8] = b"dringct/H";
pub const LABEL_U: &[u8] = b"dringct/U";
pub const LABEL_RANGE_G: &[u8] = b"dringct/gens/range/G";
pub const LABEL_RANGE_H: &[u8] = b"dringct/gens/range/H";
pub const LABEL_TRIPTYCH: &[u8] = b"dringct/gens/triptych";

/// All public bases used by the protocol.
///
/// `g` blinds and `h` carries values (`Y = k·G + a·H`). `u` is the linking
/// base for key images. The vector bases feed the range proofs and the
/// matrix commitments of the ring signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub g: GroupElement,
    pub h: GroupElement,
    pub u: GroupElement,
    pub range_gens: Vec<(GroupElement, GroupElement)>,
    pub triptych_gens: Vec<GroupElement>,
}

/// Derives `count_range` range-proof base pairs and `count_triptych` matrix
/// commitment bases. Index `i` of each family depends only on its label and
/// `i`, so a longer set always extends a shorter one.
pub fn derive_generators(count_range: usize, count_triptych: usize) -> GeneratorSet {
    assert!(count_range > 0 && count_triptych > 0, "generator counts must be positive");
    let range_gens =
        (0..count_range as u64).map(|i| (hash_to_group(LABEL_RANGE_G, i), hash_to_group(LABEL_RANGE_H, i))).collect();
    let triptych_gens = (0..count_triptych as u64).map(|i| hash_to_group(LABEL_TRIPTYCH, i)).collect();
    GeneratorSet { g: base_point(), h: value_base(), u: link_base(), range_gens, triptych_gens }
}

/// The value base `H`.
pub fn value_base() -> GroupElement {
    static H: OnceLock<GroupElement> = OnceLock::new();
    *H.get_or_init(|| hash_to_group(LABEL_H, 0))
}

/// The linking base `U` of key images.
pub fn link_base() -> GroupElement {
    static U: OnceLock<GroupElement> = OnceLock::new();
    *U.get_or_init(|| hash_to_group(LABEL_U, 0))
}

impl GeneratorSet {
    pub fn range_g(&self, n: usize) -> Vec<GroupElement> {
        self.range_gens[..n].iter().map(|p| p.0).collect()
    }

    pub fn range_h(&self, n: usize) -> Vec<GroupElement> {
        self.range_gens[..n].iter().map(|p| p.1).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::identity;
    use std::collections::HashSet;

    #[test]
    fn deterministic() {
        let a = derive_generators(64, 32);
        let b = derive_generators(64, 32);
        assert_eq!(a, b);
    }

    #[test]
    fn h_is_distinct_from_g_and_identity() {
        let s = derive_generators(4, 4);
        assert_ne!(s.h, s.g);
        assert_ne!(s.h, identity());
        assert_ne!(s.u, s.h);
    }

    #[test]
    fn longer_sets_extend_shorter_ones() {
        let short = derive_generators(64, 64);
        let long = derive_generators(128, 64);
        // Recompute the expected prefix independently of either set.
        for i in 0..64u64 {
            let expect = (hash_to_group(LABEL_RANGE_G, i), hash_to_group(LABEL_RANGE_H, i));
            assert_eq!(long.range_gens[i as usize], expect);
            assert_eq!(short.range_gens[i as usize], expect);
        }
        assert_eq!(short.triptych_gens, long.triptych_gens);
    }

    #[test]
    fn pairwise_distinct() {
        let s = derive_generators(128, 32);
        let mut seen = HashSet::new();
        let all = [s.g, s.h, s.u]
            .into_iter()
            .chain(s.range_gens.iter().flat_map(|p| [p.0, p.1]))
            .chain(s.triptych_gens.iter().copied());
        for p in all {
            assert!(seen.insert(p.compress().to_bytes()));
        }
    }
}
