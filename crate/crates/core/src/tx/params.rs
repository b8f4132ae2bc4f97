use crate::group::{derive_generators, hash_to_scalar, GeneratorSet};
use crate::ise::triptych::{ring_depth, RING_BASE};
use crate::{RANGE_BITS, V_MAX};
use std::sync::OnceLock;

pub const DEFAULT_SECURITY: u32 = 128;
/// Largest ring.
pub const N_MAX: usize = 256;
/// Most spends per transaction.
pub const M_MAX: usize = 16;
/// Most outputs per transaction.
pub const T_MAX: usize = 16;

/// Protocol-wide constants and generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicParams {
    pub security: u32,
    /// Exclusive amount bound.
    pub v_max: u64,
    pub n_max: usize,
    pub m_max: usize,
    pub t_max: usize,
    pub gens: GeneratorSet,
    id: [u8; 32],
}

/// Deterministic parameters for the given security level. Only the
/// ristretto255 instantiation exists, so the level is recorded and bound into
/// every transcript but does not change the group.
pub fn setup(security: u32) -> PublicParams {
    let n_max = N_MAX;
    let m_max = M_MAX;
    let t_max = T_MAX;
    let depth = ring_depth(n_max).expect("n_max is a power of the ring base");
    let gens = derive_generators(RANGE_BITS * t_max.next_power_of_two(), depth * RING_BASE);
    let mut desc = Vec::new();
    for v in [security as u64, V_MAX, n_max as u64, m_max as u64, t_max as u64, RANGE_BITS as u64] {
        desc.extend_from_slice(&v.to_le_bytes());
    }
    let id = hash_to_scalar(b"dringct/pp", &desc).to_bytes();
    PublicParams { security, v_max: V_MAX, n_max, m_max, t_max, gens, id }
}

impl PublicParams {
    /// Process-wide copy of `setup(DEFAULT_SECURITY)`.
    pub fn standard() -> &'static PublicParams {
        static PP: OnceLock<PublicParams> = OnceLock::new();
        PP.get_or_init(|| setup(DEFAULT_SECURITY))
    }

    /// Digest identifying these parameters.
    pub fn id(&self) -> &[u8; 32] {
        &self.id
    }
}
