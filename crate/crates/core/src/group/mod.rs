//! Prime-order group, hashing into it, and the byte-level codec shared by
//! every wire structure.
//!
//! The group is ristretto255: a prime-order quotient of Curve25519, so every
//! valid 32-byte encoding is an element of order ℓ and there is no cofactor to
//! clear. Scalars are the canonical little-endian residues mod ℓ.

mod codec;
mod generators;
mod transcript;

pub use codec::{Reader, Writer};
pub use generators::{derive_generators, link_base, value_base, GeneratorSet};
pub use transcript::Transcript;

pub use curve25519_dalek::ristretto::{CompressedRistretto, RistrettoPoint as GroupElement};
pub use curve25519_dalek::scalar::Scalar;

use curve25519_dalek::constants::{RISTRETTO_BASEPOINT_POINT, RISTRETTO_BASEPOINT_TABLE};
use curve25519_dalek::traits::Identity;
use rand::{CryptoRng, RngCore};
use sha3::{Digest, Sha3_512};

/// Size of every encoded scalar or group element.
pub const ATOM: usize = 32;

/// The base generator `G`.
pub fn base_point() -> GroupElement {
    RISTRETTO_BASEPOINT_POINT
}

/// `s·G` through the precomputed basepoint table.
pub fn mul_base(s: &Scalar) -> GroupElement {
    s * RISTRETTO_BASEPOINT_TABLE
}

pub fn identity() -> GroupElement {
    GroupElement::identity()
}

/// Maps `(domain, data)` to a scalar via SHA3-512 and a wide reduction mod ℓ.
///
/// The domain is length-prefixed so `("ab", "c")` and `("a", "bc")` differ.
pub fn hash_to_scalar(domain: &[u8], data: &[u8]) -> Scalar {
    let mut h = Sha3_512::new();
    h.update((domain.len() as u64).to_le_bytes());
    h.update(domain);
    h.update(data);
    Scalar::from_bytes_mod_order_wide(&h.finalize().into())
}

/// Hash-to-group with an ASCII label and an index, used for every auxiliary
/// generator. Output has no known discrete log relation to `G`.
pub fn hash_to_group(label: &[u8], index: u64) -> GroupElement {
    let mut data = Vec::with_capacity(label.len() + 8);
    data.extend_from_slice(label);
    data.extend_from_slice(&index.to_le_bytes());
    GroupElement::hash_from_bytes::<Sha3_512>(&data)
}

/// Uniform nonzero scalar.
pub fn random_scalar<R: RngCore + CryptoRng>(rng: &mut R) -> Scalar {
    loop {
        let s = Scalar::random(rng);
        if s != Scalar::ZERO {
            return s;
        }
    }
}

pub fn scalar_from_bytes(bytes: &[u8; 32]) -> Option<Scalar> {
    Option::from(Scalar::from_canonical_bytes(*bytes))
}

pub fn point_from_bytes(bytes: &[u8; 32]) -> Option<GroupElement> {
    CompressedRistretto(*bytes).decompress()
}
