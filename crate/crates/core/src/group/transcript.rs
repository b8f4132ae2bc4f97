use super::{GroupElement, Scalar};
use sha3::{Digest, Sha3_512};

/// Fiat–Shamir transcript over SHA3-512.
///
/// Every append absorbs `len(label) ∥ label ∥ len(data) ∥ data`, so the
/// challenge stream depends on the exact sequence of appends. Each challenge
/// squeezes 64 bytes from a copy of the state, reduces them mod ℓ, and feeds
/// the result back so consecutive challenges differ.
#[derive(Clone)]
pub struct Transcript {
    state: Sha3_512,
}

impl std::fmt::Debug for Transcript {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Transcript")
    }
}

impl Transcript {
    pub fn new(protocol: &[u8]) -> Self {
        let mut t = Self { state: Sha3_512::new() };
        t.append_message(b"dringct/transcript", protocol);
        t
    }

    pub fn append_message(&mut self, label: &[u8], data: &[u8]) {
        self.state.update((label.len() as u64).to_le_bytes());
        self.state.update(label);
        self.state.update((data.len() as u64).to_le_bytes());
        self.state.update(data);
    }

    pub fn append_u64(&mut self, label: &[u8], v: u64) {
        self.append_message(label, &v.to_le_bytes());
    }

    pub fn append_point(&mut self, label: &[u8], p: &GroupElement) {
        self.append_message(label, p.compress().as_bytes());
    }

    pub fn append_points(&mut self, label: &[u8], ps: &[GroupElement]) {
        self.append_u64(label, ps.len() as u64);
        for p in ps {
            self.append_point(label, p);
        }
    }

    pub fn append_scalar(&mut self, label: &[u8], s: &Scalar) {
        self.append_message(label, s.as_bytes());
    }

    pub fn challenge_scalar(&mut self, label: &[u8]) -> Scalar {
        let mut fork = self.state.clone();
        fork.update(b"challenge");
        fork.update((label.len() as u64).to_le_bytes());
        fork.update(label);
        let c = Scalar::from_bytes_mod_order_wide(&fork.finalize().into());
        self.append_scalar(b"challenge-out", &c);
        c
    }
}
