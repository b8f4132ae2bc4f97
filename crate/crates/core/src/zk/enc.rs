//! Well-formedness of a twisted ElGamal ciphertext:
//! `∃ a, k: X = k·pk ∧ Y = k·G + a·H`.

use crate::error::Result;
use crate::group::{identity, mul_base, random_scalar, value_base, GroupElement, Reader, Scalar, Transcript, Writer};
use crate::ise::Coin;
use rand::{CryptoRng, RngCore};

pub const TAG_ENC: u8 = 0x11;
pub const ENC_ATOMS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EncProof {
    pub commit_x: GroupElement,
    pub commit_y: GroupElement,
    pub z_amount: Scalar,
    pub z_key: Scalar,
}

fn absorb_statement(t: &mut Transcript, pk: &GroupElement, coin: &Coin) {
    t.append_message(b"proof", b"enc");
    t.append_point(b"pk", pk);
    t.append_point(b"X", &coin.x);
    t.append_point(b"Y", &coin.y);
}

pub fn prove_enc<R: RngCore + CryptoRng>(
    pk: &GroupElement,
    coin: &Coin,
    a: u64,
    k: &Scalar,
    transcript: &mut Transcript,
    rng: &mut R,
) -> EncProof {
    let a_nonce = random_scalar(rng);
    let k_nonce = random_scalar(rng);
    let commit_x = k_nonce * pk;
    let commit_y = mul_base(&k_nonce) + a_nonce * value_base();
    absorb_statement(transcript, pk, coin);
    transcript.append_point(b"A1", &commit_x);
    transcript.append_point(b"A2", &commit_y);
    let e = transcript.challenge_scalar(b"e");
    EncProof { commit_x, commit_y, z_amount: a_nonce + e * Scalar::from(a), z_key: k_nonce + e * k }
}

pub fn verify_enc(pk: &GroupElement, coin: &Coin, proof: &EncProof, transcript: &mut Transcript) -> bool {
    if *pk == identity() {
        return false;
    }
    absorb_statement(transcript, pk, coin);
    transcript.append_point(b"A1", &proof.commit_x);
    transcript.append_point(b"A2", &proof.commit_y);
    let e = transcript.challenge_scalar(b"e");
    proof.z_key * pk == proof.commit_x + e * coin.x
        && mul_base(&proof.z_key) + proof.z_amount * value_base() == proof.commit_y + e * coin.y
}

impl EncProof {
    pub fn write(&self, w: &mut Writer) {
        w.proof_header(TAG_ENC, ENC_ATOMS);
        w.point(&self.commit_x).point(&self.commit_y).scalar(&self.z_amount).scalar(&self.z_key);
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        r.proof_header(TAG_ENC, ENC_ATOMS)?;
        Ok(Self { commit_x: r.point()?, commit_y: r.point()?, z_amount: r.scalar()?, z_key: r.scalar()? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ise::encrypt;
    use rand::rngs::OsRng;
    use rand::Rng;

    fn instance() -> (GroupElement, Coin, u64, Scalar) {
        let pk = mul_base(&random_scalar(&mut OsRng));
        let a = OsRng.gen_range(0..crate::V_MAX);
        let k = random_scalar(&mut OsRng);
        (pk, encrypt(&pk, a, &k).unwrap(), a, k)
    }

    #[test]
    fn honest_accepts_and_shifted_amount_rejects() {
        let (pk, coin, a, k) = instance();
        let t = Transcript::new(b"t");
        let proof = prove_enc(&pk, &coin, a, &k, &mut t.clone(), &mut OsRng);
        assert!(verify_enc(&pk, &coin, &proof, &mut t.clone()));
        let shifted = Coin { x: coin.x, y: coin.y + value_base() };
        assert!(!verify_enc(&pk, &shifted, &proof, &mut t.clone()));
        // Proof for the shifted coin with the stale witness fails too.
        let stale = prove_enc(&pk, &shifted, a, &k, &mut t.clone(), &mut OsRng);
        assert!(!verify_enc(&pk, &shifted, &stale, &mut t.clone()));
        assert!(!verify_enc(&identity(), &coin, &proof, &mut t.clone()));
    }

    #[test]
    fn fuzz_random_instances_and_bit_flips() {
        for _ in 0..100 {
            let (pk, coin, a, k) = instance();
            let t = Transcript::new(b"t");
            let proof = prove_enc(&pk, &coin, a, &k, &mut t.clone(), &mut OsRng);
            assert!(verify_enc(&pk, &coin, &proof, &mut t.clone()));

            let mut w = Writer::new();
            proof.write(&mut w);
            let mut bytes = w.into_bytes();
            let bit = OsRng.gen_range(24..bytes.len() * 8);
            bytes[bit / 8] ^= 1 << (bit % 8);
            if let Ok(mutated) = EncProof::read(&mut Reader::new(&bytes)) {
                assert!(!verify_enc(&pk, &coin, &mutated, &mut t.clone()));
            }
        }
    }

    #[test]
    fn transcript_binding() {
        let (pk, coin, a, k) = instance();
        let mut t = Transcript::new(b"t");
        t.append_message(b"ctx", b"abc");
        let proof = prove_enc(&pk, &coin, a, &k, &mut t.clone(), &mut OsRng);
        let mut other = Transcript::new(b"t");
        other.append_message(b"ctx", b"abd");
        assert!(!verify_enc(&pk, &coin, &proof, &mut other));
        assert!(verify_enc(&pk, &coin, &proof, &mut t));
    }
}
