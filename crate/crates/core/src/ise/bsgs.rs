//! Baby-step giant-step for small discrete logarithms base `H`.
//!
//! Points are matched through the ristretto encoding of their double, which
//! can be computed in batches with one shared inversion. Doubling is a
//! bijection in a group of odd order, so `enc(2P) = enc(2Q)` iff `P = Q`.

use crate::group::{identity, value_base, GroupElement, Scalar};
use crate::par::Exec;
use std::collections::HashMap;
use std::sync::OnceLock;

/// Points per batched encoding.
const CHUNK: usize = 1 << 12;
/// Largest supported baby table.
pub const MAX_BABY_BITS: u32 = 24;

/// `{ enc(2·i·H)[..8] ↦ i }` for `i ∈ [0, 2^bits)`, plus the giant stride.
pub struct BabyTable {
    bits: u32,
    entries: HashMap<u64, u32>,
    stride: GroupElement,
}

fn key(bytes: &[u8; 32]) -> u64 {
    u64::from_le_bytes(bytes[..8].try_into().expect("8 bytes"))
}

/// Encodings of `2·(start + t·step)` for `t ∈ [0, len)`.
fn doubled_run(start: GroupElement, step: GroupElement, len: usize) -> Vec<[u8; 32]> {
    let mut pts = Vec::with_capacity(len);
    let mut p = start;
    for _ in 0..len {
        pts.push(p);
        p += step;
    }
    GroupElement::double_and_compress_batch(&pts).into_iter().map(|c| c.to_bytes()).collect()
}

impl BabyTable {
    pub fn build(bits: u32, exec: Exec) -> Self {
        assert!((1..=MAX_BABY_BITS).contains(&bits));
        let h = value_base();
        let size = 1usize << bits;
        let chunks = size.div_ceil(CHUNK);
        let parts = exec.map_range(chunks, |c| {
            let start = c * CHUNK;
            let len = CHUNK.min(size - start);
            doubled_run(Scalar::from(start as u64) * h, h, len)
        });
        let mut entries = HashMap::with_capacity(size);
        for (c, part) in parts.into_iter().enumerate() {
            for (t, enc) in part.iter().enumerate() {
                entries.entry(key(enc)).or_insert((c * CHUNK + t) as u32);
            }
        }
        Self { bits, entries, stride: Scalar::from(size as u64) * h }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Finds `a < bound` with `a·H = target`.
    pub fn solve(&self, target: &GroupElement, bound: u64, exec: Exec) -> Option<u64> {
        if bound == 0 {
            return None;
        }
        let h = value_base();
        let baby = 1u64 << self.bits;
        let giants = bound.div_ceil(baby);
        let chunks = giants.div_ceil(CHUNK as u64) as usize;
        let neg_stride = -self.stride;
        exec.find_map_first(chunks, |c| {
            let first = (c * CHUNK) as u64;
            let len = (CHUNK as u64).min(giants - first) as usize;
            let start = target - Scalar::from(first) * self.stride;
            doubled_run(start, neg_stride, len).iter().enumerate().find_map(|(t, enc)| {
                let i = *self.entries.get(&key(enc))? as u64;
                let a = (first + t as u64) * baby + i;
                // The table is keyed on an 8-byte prefix; confirm the match.
                (a < bound && Scalar::from(a) * h == *target).then_some(a)
            })
        })
    }
}

/// Baby table size for a search bound: `⌈log₂(bound)/2⌉` clamped to
/// `[16, MAX_BABY_BITS]`, so `2³²` uses `2¹⁶` entries and `2⁴⁰` uses `2²⁰`.
pub fn baby_bits_for(bound: u64) -> u32 {
    let log = 64 - bound.saturating_sub(1).leading_zeros();
    log.div_ceil(2).clamp(16, MAX_BABY_BITS)
}

/// Shared table for `bits`, built on first use.
pub fn table(bits: u32) -> &'static BabyTable {
    static TABLES: [OnceLock<BabyTable>; MAX_BABY_BITS as usize + 1] =
        [const { OnceLock::new() }; MAX_BABY_BITS as usize + 1];
    TABLES[bits as usize].get_or_init(|| BabyTable::build(bits, Exec::Parallel))
}

/// `a < bound` with `a·H = target`, using the cached table for the bound.
pub fn dlog(target: &GroupElement, bound: u64) -> Option<u64> {
    if *target == identity() {
        return (bound > 0).then_some(0);
    }
    table(baby_bits_for(bound)).solve(target, bound, Exec::Parallel)
}
