//! Two twisted ElGamal ciphertexts under different keys hold the same amount:
//! `∃ k₁, k₂, a: X₁ = k₁·pk₁ ∧ Y₁ = k₁·G + a·H ∧ X₂ = k₂·pk₂ ∧ Y₂ = k₂·G + a·H`.
//!
//! Every point is some multiple of `H` once the `G` part is removed, so the
//! two `Y` equations reduce to `Y₁ − Y₂ = (k₁ − k₂)·G`. The proof shows the
//! key relations and that difference with shared responses.

use crate::error::Result;
use crate::group::{identity, mul_base, random_scalar, GroupElement, Reader, Scalar, Transcript, Writer};
use crate::ise::Coin;
use rand::{CryptoRng, RngCore};

pub const TAG_EQUAL: u8 = 0x14;
pub const EQUAL_ATOMS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EqualProof {
    pub commit_old: GroupElement,
    pub commit_new: GroupElement,
    pub commit_gap: GroupElement,
    pub z_old: Scalar,
    pub z_new: Scalar,
}

fn absorb_statement(t: &mut Transcript, pk_old: &GroupElement, old: &Coin, pk_new: &GroupElement, new: &Coin) {
    t.append_message(b"proof", b"equal");
    t.append_point(b"pk1", pk_old);
    t.append_point(b"X1", &old.x);
    t.append_point(b"Y1", &old.y);
    t.append_point(b"pk2", pk_new);
    t.append_point(b"X2", &new.x);
    t.append_point(b"Y2", &new.y);
}

/// `k_old` and `k_new` are the coin keys of `old` and `new`.
#[allow(clippy::too_many_arguments)]
pub fn prove_equal<R: RngCore + CryptoRng>(
    pk_old: &GroupElement,
    old: &Coin,
    k_old: &Scalar,
    pk_new: &GroupElement,
    new: &Coin,
    k_new: &Scalar,
    transcript: &mut Transcript,
    rng: &mut R,
) -> EqualProof {
    let r_old = random_scalar(rng);
    let r_new = random_scalar(rng);
    let commit_old = r_old * pk_old;
    let commit_new = r_new * pk_new;
    let commit_gap = mul_base(&(r_old - r_new));
    absorb_statement(transcript, pk_old, old, pk_new, new);
    transcript.append_point(b"A1", &commit_old);
    transcript.append_point(b"A2", &commit_new);
    transcript.append_point(b"A3", &commit_gap);
    let e = transcript.challenge_scalar(b"e");
    EqualProof { commit_old, commit_new, commit_gap, z_old: r_old + e * k_old, z_new: r_new + e * k_new }
}

pub fn verify_equal(
    pk_old: &GroupElement,
    old: &Coin,
    pk_new: &GroupElement,
    new: &Coin,
    proof: &EqualProof,
    transcript: &mut Transcript,
) -> bool {
    if *pk_old == identity() || *pk_new == identity() {
        return false;
    }
    absorb_statement(transcript, pk_old, old, pk_new, new);
    transcript.append_point(b"A1", &proof.commit_old);
    transcript.append_point(b"A2", &proof.commit_new);
    transcript.append_point(b"A3", &proof.commit_gap);
    let e = transcript.challenge_scalar(b"e");
    proof.z_old * pk_old == proof.commit_old + e * old.x
        && proof.z_new * pk_new == proof.commit_new + e * new.x
        && mul_base(&(proof.z_old - proof.z_new)) == proof.commit_gap + e * (old.y - new.y)
}

impl EqualProof {
    pub fn write(&self, w: &mut Writer) {
        w.proof_header(TAG_EQUAL, EQUAL_ATOMS);
        w.point(&self.commit_old).point(&self.commit_new).point(&self.commit_gap);
        w.scalar(&self.z_old).scalar(&self.z_new);
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        r.proof_header(TAG_EQUAL, EQUAL_ATOMS)?;
        Ok(Self {
            commit_old: r.point()?,
            commit_new: r.point()?,
            commit_gap: r.point()?,
            z_old: r.scalar()?,
            z_new: r.scalar()?,
        })
    }
}
