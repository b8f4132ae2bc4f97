//! Value conservation between two lists of commitments.
//!
//! With every commitment of the form `k·G + a·H`, the amounts balance exactly
//! when `Σ inputs − Σ outputs` has no `H` component. The proof is a Schnorr
//! proof of the discrete log of that difference to `G`.

use crate::error::Result;
use crate::group::{base_point, identity, mul_base, random_scalar, GroupElement, Reader, Scalar, Transcript, Writer};
use rand::{CryptoRng, RngCore};

pub const TAG_BALANCE: u8 = 0x13;
pub const BALANCE_ATOMS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BalanceProof {
    pub commitment: GroupElement,
    pub response: Scalar,
}

/// `Σ inputs − Σ outputs`.
pub fn balance_difference(inputs: &[GroupElement], outputs: &[GroupElement]) -> GroupElement {
    inputs.iter().sum::<GroupElement>() - outputs.iter().sum::<GroupElement>()
}

fn absorb_statement(t: &mut Transcript, inputs: &[GroupElement], outputs: &[GroupElement]) {
    t.append_message(b"proof", b"balance");
    t.append_points(b"in", inputs);
    t.append_points(b"out", outputs);
}

/// `blinding_gap` is `Σ input blindings − Σ output blindings`.
pub fn prove_balance<R: RngCore + CryptoRng>(
    inputs: &[GroupElement],
    outputs: &[GroupElement],
    blinding_gap: &Scalar,
    transcript: &mut Transcript,
    rng: &mut R,
) -> BalanceProof {
    let nonce = random_scalar(rng);
    let commitment = mul_base(&nonce);
    absorb_statement(transcript, inputs, outputs);
    transcript.append_point(b"A", &commitment);
    let e = transcript.challenge_scalar(b"e");
    BalanceProof { commitment, response: nonce + e * blinding_gap }
}

pub fn verify_balance(
    inputs: &[GroupElement],
    outputs: &[GroupElement],
    proof: &BalanceProof,
    transcript: &mut Transcript,
) -> bool {
    if proof.commitment == identity() {
        return false;
    }
    let diff = balance_difference(inputs, outputs);
    absorb_statement(transcript, inputs, outputs);
    transcript.append_point(b"A", &proof.commitment);
    let e = transcript.challenge_scalar(b"e");
    proof.response * base_point() == proof.commitment + e * diff
}

impl BalanceProof {
    pub fn write(&self, w: &mut Writer) {
        w.proof_header(TAG_BALANCE, BALANCE_ATOMS);
        w.point(&self.commitment).scalar(&self.response);
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        r.proof_header(TAG_BALANCE, BALANCE_ATOMS)?;
        Ok(Self { commitment: r.point()?, response: r.scalar()? })
    }
}
