use crate::error::Result;
use crate::group::{hash_to_scalar, random_scalar, GroupElement, Reader, Scalar, Transcript, Writer};
use crate::ise::{decrypt, derive_coin_key, encrypt, one_time_pk_gen, one_time_sk_gen, sender_coin_key, Coin};
use crate::ise::{LongTermPublicKey, LongTermSecretKey};
use crate::zk::{prove_enc, EncProof};
use rand::{CryptoRng, RngCore};

/// A one-time key and the coin it holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Account {
    pub pk: GroupElement,
    pub coin: Coin,
}

impl Account {
    pub fn write(&self, w: &mut Writer) {
        w.point(&self.pk);
        self.coin.write(w);
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        Ok(Self { pk: r.point()?, coin: Coin::read(r)? })
    }
}

/// An account as the ledger currently sees it.
///
/// `enc_key` is the key the coin is encrypted under: the one-time `pk` until
/// the first representative change, then the representative's `X₁`.
/// `version` counts representative changes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AccountState {
    pub pk: GroupElement,
    pub coin: Coin,
    pub enc_key: GroupElement,
    pub aux: GroupElement,
    pub version: u32,
}

impl AccountState {
    pub fn fresh(account: &Account, aux: GroupElement) -> Self {
        Self { pk: account.pk, coin: account.coin, enc_key: account.pk, aux, version: 0 }
    }

    /// The owner's one-time secret key and current coin key.
    pub fn owner_keys(&self, ltsk: &LongTermSecretKey) -> Result<(Scalar, Scalar)> {
        let sk = one_time_sk_gen(&self.pk, &self.aux, ltsk)?;
        let coin_key = if self.version == 0 {
            derive_coin_key(ltsk, &self.aux)
        } else {
            crx_coin_key(&sk, self.version, &self.enc_key)
        };
        Ok((sk, coin_key))
    }
}

/// Coin key of the re-encryption that produces `version`, derived from the
/// account secret so the owner can always reopen the coin.
pub fn crx_coin_key(sk: &Scalar, version: u32, rep: &GroupElement) -> Scalar {
    let mut data = Vec::with_capacity(68);
    data.extend_from_slice(sk.as_bytes());
    data.extend_from_slice(&version.to_le_bytes());
    data.extend_from_slice(rep.compress().as_bytes());
    hash_to_scalar(b"dringct/crx-coin", &data)
}

/// A freshly built output together with what its creator knows about it.
#[derive(Clone, Debug)]
pub struct OutputSecret {
    pub account: Account,
    pub aux: GroupElement,
    pub amount: u64,
    pub coin_key: Scalar,
}

impl OutputSecret {
    pub fn new<R: RngCore + CryptoRng>(ltpk: &LongTermPublicKey, amount: u64, rng: &mut R) -> Result<Self> {
        let r = random_scalar(rng);
        let (pk, aux) = one_time_pk_gen(ltpk, &r);
        let coin_key = sender_coin_key(ltpk, &r);
        let coin = encrypt(&pk, amount, &coin_key)?;
        Ok(Self { account: Account { pk, coin }, aux, amount, coin_key })
    }

    pub fn prove(&self, transcript: &mut Transcript, rng: &mut (impl RngCore + CryptoRng)) -> EncProof {
        prove_enc(&self.account.pk, &self.account.coin, self.amount, &self.coin_key, transcript, rng)
    }
}

/// Standalone account creation with its own proof transcript. Transactions
/// build outputs through [`OutputSecret`] and bind the proofs to the whole
/// transaction instead.
pub fn create_account<R: RngCore + CryptoRng>(
    a: u64,
    ltpk: &LongTermPublicKey,
    rng: &mut R,
) -> Result<(Account, GroupElement, EncProof)> {
    let out = OutputSecret::new(ltpk, a, rng)?;
    let proof = out.prove(&mut account_transcript(&out.account, &out.aux), rng);
    Ok((out.account, out.aux, proof))
}

pub(crate) fn account_transcript(account: &Account, aux: &GroupElement) -> Transcript {
    let mut t = Transcript::new(b"dringct/account");
    t.append_point(b"aux", aux);
    t.append_point(b"pk", &account.pk);
    t
}

/// Decrypts a coin with either the one-time secret key or, after a
/// representative change, the representative's `x₁`.
pub fn reveal_balance(secret: &Scalar, coin: &Coin, bound: u64) -> Result<u64> {
    decrypt(secret, coin, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::ise::LongTermKeyPair;
    use crate::zk::verify_enc;
    use rand::rngs::OsRng;
    use rand::Rng;

    #[test]
    fn receiver_recovers_key_and_amount() {
        let kp = LongTermKeyPair::generate(&mut OsRng);
        for a in [5u64, 0] {
            let (account, aux, proof) = create_account(a, &kp.public, &mut OsRng).unwrap();
            assert!(verify_enc(&account.pk, &account.coin, &proof, &mut account_transcript(&account, &aux)));
            let state = AccountState::fresh(&account, aux);
            let (sk, k) = state.owner_keys(&kp.secret).unwrap();
            assert_eq!(reveal_balance(&sk, &account.coin, 1 << 16), Ok(a));
            assert_eq!(crate::ise::open_with_coin_key(&k, &account.coin, 1 << 16), Ok(a));
            let other = LongTermKeyPair::generate(&mut OsRng);
            assert_eq!(state.owner_keys(&other.secret), Err(Error::NotOurs));
            assert_eq!(reveal_balance(&other.secret.spend, &account.coin, 1 << 16), Err(Error::DlogNotFound));
        }
    }

    #[test]
    fn random_accounts_prove_and_reject_out_of_range() {
        let kp = LongTermKeyPair::generate(&mut OsRng);
        for _ in 0..100 {
            let a = OsRng.gen_range(0..crate::V_MAX);
            let (account, aux, proof) = create_account(a, &kp.public, &mut OsRng).unwrap();
            assert!(verify_enc(&account.pk, &account.coin, &proof, &mut account_transcript(&account, &aux)));
        }
        assert_eq!(create_account(1 << 32, &kp.public, &mut OsRng).unwrap_err(), Error::AmountRange(1 << 32));
    }

    #[test]
    fn crx_coin_keys_differ_per_version_and_rep() {
        let sk = random_scalar(&mut OsRng);
        let rep = crate::group::mul_base(&random_scalar(&mut OsRng));
        let rep2 = crate::group::mul_base(&random_scalar(&mut OsRng));
        assert_eq!(crx_coin_key(&sk, 1, &rep), crx_coin_key(&sk, 1, &rep));
        assert_ne!(crx_coin_key(&sk, 1, &rep), crx_coin_key(&sk, 2, &rep));
        assert_ne!(crx_coin_key(&sk, 1, &rep), crx_coin_key(&sk, 1, &rep2));
    }
}
