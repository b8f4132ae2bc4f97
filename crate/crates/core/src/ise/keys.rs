//! Long-term and one-time (stealth) keys.

use crate::error::{Error, Result};
use crate::group::{hash_to_scalar, mul_base, random_scalar, GroupElement, Reader, Scalar, Writer};
use rand::{CryptoRng, RngCore};

const STEALTH_DOMAIN: &[u8] = b"dringct/stealth";
const COIN_DOMAIN: &[u8] = b"dringct/coin";

/// Long-term secret `(x₁, x₂)`. `spend` enters every one-time secret key and
/// doubles as the representative decryption key; `view` recovers the
/// stealth shared secret.
#[derive(Clone, PartialEq, Eq)]
pub struct LongTermSecretKey {
    pub spend: Scalar,
    pub view: Scalar,
}

impl std::fmt::Debug for LongTermSecretKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("LongTermSecretKey(..)")
    }
}

/// Long-term public key `(X₁, X₂) = (x₁·G, x₂·G)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LongTermPublicKey {
    pub spend: GroupElement,
    pub view: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LongTermKeyPair {
    pub secret: LongTermSecretKey,
    pub public: LongTermPublicKey,
}

impl LongTermKeyPair {
    pub fn generate<R: RngCore + CryptoRng>(rng: &mut R) -> Self {
        Self::from_secrets(random_scalar(rng), random_scalar(rng))
    }

    pub fn from_secrets(spend: Scalar, view: Scalar) -> Self {
        Self {
            public: LongTermPublicKey { spend: mul_base(&spend), view: mul_base(&view) },
            secret: LongTermSecretKey { spend, view },
        }
    }
}

impl LongTermSecretKey {
    pub fn public(&self) -> LongTermPublicKey {
        LongTermPublicKey { spend: mul_base(&self.spend), view: mul_base(&self.view) }
    }
}

impl LongTermPublicKey {
    /// 64 bytes: `X₁ ∥ X₂`.
    pub fn to_bytes(&self) -> [u8; 64] {
        let mut out = [0u8; 64];
        out[..32].copy_from_slice(self.spend.compress().as_bytes());
        out[32..].copy_from_slice(self.view.compress().as_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let key = Self { spend: r.point()?, view: r.point()? };
        r.finish()?;
        Ok(key)
    }

    /// Address form: 128 lowercase hex characters.
    pub fn to_hex(&self) -> String {
        hex::encode(self.to_bytes())
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = hex::decode(s.trim()).map_err(|_| Error::Decode { offset: 0, reason: "invalid hex" })?;
        if bytes.len() != 64 {
            return Err(Error::Decode { offset: bytes.len(), reason: "address must be 64 bytes" });
        }
        Self::from_bytes(&bytes)
    }

    pub fn write(&self, w: &mut Writer) {
        w.point(&self.spend).point(&self.view);
    }
}

fn stealth_scalar(shared: &GroupElement) -> Scalar {
    hash_to_scalar(STEALTH_DOMAIN, shared.compress().as_bytes())
}

fn coin_scalar(shared: &GroupElement) -> Scalar {
    hash_to_scalar(COIN_DOMAIN, shared.compress().as_bytes())
}

/// Sender side: `pk = X₁ + ℋ(r·X₂)·G`, `aux = r·G`.
pub fn one_time_pk_gen(ltpk: &LongTermPublicKey, r: &Scalar) -> (GroupElement, GroupElement) {
    debug_assert_ne!(*r, Scalar::ZERO);
    let shared = r * ltpk.view;
    let pk = ltpk.spend + mul_base(&stealth_scalar(&shared));
    (pk, mul_base(r))
}

/// Receiver side: `sk = x₁ + ℋ(x₂·aux)`, returned only if `sk·G = pk`.
pub fn one_time_sk_gen(pk: &GroupElement, aux: &GroupElement, ltsk: &LongTermSecretKey) -> Result<Scalar> {
    let sk = ltsk.spend + stealth_scalar(&(ltsk.view * aux));
    if mul_base(&sk) == *pk {
        Ok(sk)
    } else {
        Err(Error::NotOurs)
    }
}

/// Coin key the receiver derives from the stealth shared secret.
pub fn derive_coin_key(ltsk: &LongTermSecretKey, aux: &GroupElement) -> Scalar {
    coin_scalar(&(ltsk.view * aux))
}

/// Coin key as the sender sees it, from the same shared secret `r·X₂`.
pub fn sender_coin_key(ltpk: &LongTermPublicKey, r: &Scalar) -> Scalar {
    coin_scalar(&(r * ltpk.view))
}
