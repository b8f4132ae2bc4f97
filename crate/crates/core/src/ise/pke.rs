//! Twisted ElGamal over one-time and representative keys.

use super::bsgs;
use crate::error::{Error, Result};
use crate::group::{identity, mul_base, value_base, GroupElement, Reader, Scalar, Writer};
use crate::V_MAX;
use std::ops::Add;

/// Ciphertext `(X, Y) = (k·pk, k·G + a·H)`. `Y` is a Pedersen commitment to
/// `a` with blinding `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coin {
    pub x: GroupElement,
    pub y: GroupElement,
}

impl Coin {
    pub fn zero() -> Self {
        Self { x: identity(), y: identity() }
    }

    pub fn write(&self, w: &mut Writer) {
        w.point(&self.x).point(&self.y);
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        Ok(Self { x: r.point()?, y: r.point()? })
    }
}

impl Add for Coin {
    type Output = Coin;
    fn add(self, rhs: Coin) -> Coin {
        Coin { x: self.x + rhs.x, y: self.y + rhs.y }
    }
}

impl std::iter::Sum for Coin {
    fn sum<I: Iterator<Item = Coin>>(iter: I) -> Coin {
        iter.fold(Coin::zero(), Add::add)
    }
}

/// `Y = k·G + a·H`.
pub fn commit(a: u64, k: &Scalar) -> GroupElement {
    mul_base(k) + Scalar::from(a) * value_base()
}

pub fn encrypt(pk: &GroupElement, a: u64, k: &Scalar) -> Result<Coin> {
    if a >= V_MAX {
        return Err(Error::AmountRange(a));
    }
    Ok(Coin { x: k * pk, y: commit(a, k) })
}

/// `Y − sk⁻¹·X = a·H`, then a small discrete log below `bound`.
pub fn decrypt(sk: &Scalar, coin: &Coin, bound: u64) -> Result<u64> {
    if *sk == Scalar::ZERO {
        return Err(Error::DlogNotFound);
    }
    let target = coin.y - sk.invert() * coin.x;
    bsgs::dlog(&target, bound).ok_or(Error::DlogNotFound)
}

/// Opening with the coin key instead of the decryption key:
/// `Y − k·G = a·H`.
pub fn open_with_coin_key(k: &Scalar, coin: &Coin, bound: u64) -> Result<u64> {
    bsgs::dlog(&(coin.y - mul_base(k)), bound).ok_or(Error::DlogNotFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::random_scalar;
    use crate::ise::keys::{derive_coin_key, one_time_pk_gen, one_time_sk_gen, sender_coin_key, LongTermKeyPair};
    use rand::rngs::OsRng;
    use rand::Rng;

    #[test]
    fn zero_amount_is_pure_blinding() {
        let k = random_scalar(&mut OsRng);
        let pk = mul_base(&random_scalar(&mut OsRng));
        assert_eq!(encrypt(&pk, 0, &k).unwrap().y, mul_base(&k));
    }

    #[test]
    fn additive_homomorphism() {
        let pk = mul_base(&random_scalar(&mut OsRng));
        let (k1, k2) = (random_scalar(&mut OsRng), random_scalar(&mut OsRng));
        let c = encrypt(&pk, 11, &k1).unwrap() + encrypt(&pk, 31, &k2).unwrap();
        assert_eq!(c, encrypt(&pk, 42, &(k1 + k2)).unwrap());
    }

    #[test]
    fn amount_range_enforced() {
        let pk = mul_base(&random_scalar(&mut OsRng));
        let k = random_scalar(&mut OsRng);
        assert_eq!(encrypt(&pk, V_MAX, &k), Err(Error::AmountRange(V_MAX)));
        let c = encrypt(&pk, V_MAX - 1, &k).unwrap();
        let sk = random_scalar(&mut OsRng);
        let c2 = encrypt(&mul_base(&sk), V_MAX - 1, &k).unwrap();
        assert_ne!(c, c2);
        assert_eq!(decrypt(&sk, &c2, V_MAX).unwrap(), V_MAX - 1);
    }

    #[test]
    fn decrypt_matches_linear_scan_for_small_amounts() {
        let sk = random_scalar(&mut OsRng);
        let pk = mul_base(&sk);
        let h = value_base();
        for _ in 0..16 {
            let a = OsRng.gen_range(0..1u64 << 10);
            let coin = encrypt(&pk, a, &random_scalar(&mut OsRng)).unwrap();
            let raw = coin.y - sk.invert() * coin.x;
            let scan = (0..1u64 << 10).find(|i| Scalar::from(*i) * h == raw);
            assert_eq!(scan, Some(a));
            assert_eq!(decrypt(&sk, &coin, V_MAX).unwrap(), a);
        }
    }

    #[test]
    fn decrypt_random_full_width() {
        let sk = random_scalar(&mut OsRng);
        let pk = mul_base(&sk);
        for _ in 0..4 {
            let a = OsRng.gen_range(0..V_MAX);
            let coin = encrypt(&pk, a, &random_scalar(&mut OsRng)).unwrap();
            assert_eq!(decrypt(&sk, &coin, V_MAX).unwrap(), a);
        }
    }

    #[test]
    fn wrong_key_finds_nothing() {
        let pk = mul_base(&random_scalar(&mut OsRng));
        let coin = encrypt(&pk, 5, &random_scalar(&mut OsRng)).unwrap();
        assert_eq!(decrypt(&random_scalar(&mut OsRng), &coin, V_MAX), Err(Error::DlogNotFound));
        assert_eq!(decrypt(&Scalar::ZERO, &coin, V_MAX), Err(Error::DlogNotFound));
    }

    #[test]
    fn send_receive_replay() {
        let receiver = LongTermKeyPair::generate(&mut OsRng);
        let r = random_scalar(&mut OsRng);
        let (pk, aux) = one_time_pk_gen(&receiver.public, &r);
        let k = sender_coin_key(&receiver.public, &r);
        let coin = encrypt(&pk, 123_456, &k).unwrap();

        let k_recv = derive_coin_key(&receiver.secret, &aux);
        assert_eq!(open_with_coin_key(&k_recv, &coin, V_MAX).unwrap(), 123_456);
        let sk = one_time_sk_gen(&pk, &aux, &receiver.secret).unwrap();
        assert_eq!(decrypt(&sk, &coin, V_MAX).unwrap(), 123_456);
    }
}
