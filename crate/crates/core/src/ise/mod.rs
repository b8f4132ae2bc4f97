//! Integrated signature and encryption: one key pair drives stealth
//! addressing, twisted ElGamal, Schnorr signatures and Triptych ring
//! signatures.

pub mod bsgs;
pub mod keys;
pub mod pke;
pub mod schnorr;
pub mod triptych;

pub use keys::{
    derive_coin_key, one_time_pk_gen, one_time_sk_gen, sender_coin_key, LongTermKeyPair, LongTermPublicKey,
    LongTermSecretKey,
};
pub use pke::{commit, decrypt, encrypt, open_with_coin_key, Coin};
pub use schnorr::{sign, verify, SchnorrSig};
pub use triptych::{key_image, link, sign_ring, verify_ring, RingSig, SpendSig};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{derive_generators, mul_base, random_scalar};
    use rand::rngs::OsRng;
    use rand::Rng;

    /// Schnorr and ring signatures under the same one-time key stay
    /// independently valid and tamper-evident when interleaved.
    #[test]
    fn interleaved_signature_usage() {
        let gens = derive_generators(8, 16);
        let sk = random_scalar(&mut OsRng);
        let pk = mul_base(&sk);
        let index = 3;
        let mut ring: Vec<_> = (0..8).map(|_| mul_base(&random_scalar(&mut OsRng))).collect();
        ring[index] = pk;
        let mut images = Vec::new();
        for round in 0..8u8 {
            let msg = [round; 4];
            let ds = sign(&sk, &msg, &mut OsRng);
            let lrs = sign_ring(&gens, &ring, index, &sk, &msg, &mut OsRng).unwrap();
            assert!(verify(&pk, &msg, &ds));
            assert!(verify_ring(&gens, &ring, &msg, &lrs));

            let mut bad_ds = ds;
            bad_ds.response += crate::group::Scalar::ONE;
            assert!(!verify(&pk, &msg, &bad_ds));
            // A ring signature's message does not authorize a Schnorr one.
            assert!(!verify(&pk, &[round ^ 1; 4], &ds));
            let mut bad_lrs = lrs.clone();
            bad_lrs.proof.z += crate::group::Scalar::ONE;
            assert!(!verify_ring(&gens, &ring, &msg, &bad_lrs));
            images.push(lrs.key_image);
        }
        assert!(images.windows(2).all(|w| w[0] == w[1]));
    }

    /// Sanity check that a verifier-side guess does no better than chance.
    /// The "distinguisher" guesses the ring position whose key is closest
    /// (bytewise) to the key image and to the first proof commitment.
    #[test]
    fn anonymity_smoke() {
        let gens = derive_generators(8, 16);
        let n = 8usize;
        let trials = 400;
        let mut hits = 0;
        for _ in 0..trials {
            let index = OsRng.gen_range(0..n);
            let sk = random_scalar(&mut OsRng);
            let ring: Vec<_> =
                (0..n).map(|i| if i == index { mul_base(&sk) } else { mul_base(&random_scalar(&mut OsRng)) }).collect();
            let sig = sign_ring(&gens, &ring, index, &sk, b"m", &mut OsRng).unwrap();
            let tag = sig.key_image.compress().to_bytes();
            let a = sig.proof.A.compress().to_bytes();
            let guess = (0..n)
                .min_by_key(|&i| {
                    let k = ring[i].compress().to_bytes();
                    k.iter()
                        .zip(tag.iter().zip(&a))
                        .map(|(x, (y, z))| (x ^ y).count_ones() + (x ^ z).count_ones())
                        .sum::<u32>()
                })
                .unwrap();
            hits += (guess == index) as usize;
        }
        let rate = hits as f64 / trials as f64;
        assert!(rate <= 1.0 / n as f64 + 0.1, "distinguisher rate {rate}");
    }
}
