//! Passphrase-sealed wallet file.
//!
//! Envelope (JSON): `{version, salt, nonce, ciphertext}`, hex fields. The key
//! is Argon2id(passphrase, salt); the payload is ChaCha20-Poly1305 over the
//! JSON [`WalletData`] with the version and salt as associated data.

use crate::error::{CliError, CliResult};
use argon2::Argon2;
use chacha20poly1305::aead::{Aead, KeyInit, Payload};
use chacha20poly1305::{ChaCha20Poly1305, Key, Nonce};
use dringct::group::{scalar_from_bytes, GroupElement, Scalar};
use dringct::ise::LongTermKeyPair;
use dringct::ledger::{Ledger, OwnedAccount};
use rand::{CryptoRng, RngCore};
use serde::{Deserialize, Serialize};
use std::path::Path;

const WALLET_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope {
    version: u32,
    salt: String,
    nonce: String,
    ciphertext: String,
}

/// One account the wallet has seen on the ledger. The one-time secret key is
/// not kept; it is re-derived from the long-term key when spending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownAccount {
    pub offset: u32,
    pub pk: String,
    pub aux: String,
    pub amount: u64,
    pub coin_key: String,
    pub version: u32,
    pub spent: bool,
}

#[derive(Serialize, Deserialize)]
struct WalletData {
    spend: String,
    view: String,
    accounts: Vec<KnownAccount>,
}

#[derive(Debug)]
pub struct Wallet {
    pub keys: LongTermKeyPair,
    pub accounts: Vec<KnownAccount>,
}

fn hex_point(p: &GroupElement) -> String {
    hex::encode(p.compress().as_bytes())
}

fn parse32(s: &str) -> Option<[u8; 32]> {
    hex::decode(s).ok()?.try_into().ok()
}

fn parse_scalar(s: &str) -> CliResult<Scalar> {
    parse32(s).and_then(|b| scalar_from_bytes(&b)).ok_or_else(|| CliError::Io("wallet holds a malformed scalar".into()))
}

fn derive_key(passphrase: &str, salt: &[u8]) -> CliResult<[u8; 32]> {
    let mut key = [0u8; 32];
    Argon2::default()
        .hash_password_into(passphrase.as_bytes(), salt, &mut key)
        .map_err(|e| CliError::Io(format!("key derivation failed: {e}")))?;
    Ok(key)
}

fn associated_data(version: u32, salt: &str) -> Vec<u8> {
    format!("dringct-wallet/{version}/{salt}").into_bytes()
}

impl Wallet {
    pub fn generate<R: RngCore + CryptoRng>(rng: &mut R) -> Self {
        Self { keys: LongTermKeyPair::generate(rng), accounts: Vec::new() }
    }

    pub fn seal<R: RngCore + CryptoRng>(&self, passphrase: &str, rng: &mut R) -> CliResult<Vec<u8>> {
        let data = WalletData {
            spend: hex::encode(self.keys.secret.spend.to_bytes()),
            view: hex::encode(self.keys.secret.view.to_bytes()),
            accounts: self.accounts.clone(),
        };
        let plaintext = serde_json::to_vec(&data).map_err(|e| CliError::Io(e.to_string()))?;
        let mut salt = [0u8; 16];
        let mut nonce = [0u8; 12];
        rng.fill_bytes(&mut salt);
        rng.fill_bytes(&mut nonce);
        let salt_hex = hex::encode(salt);
        let cipher = ChaCha20Poly1305::new(Key::from_slice(&derive_key(passphrase, &salt)?));
        let aad = associated_data(WALLET_VERSION, &salt_hex);
        let ciphertext = cipher
            .encrypt(Nonce::from_slice(&nonce), Payload { msg: &plaintext, aad: &aad })
            .map_err(|_| CliError::Io("wallet encryption failed".into()))?;
        let envelope = Envelope {
            version: WALLET_VERSION,
            salt: salt_hex,
            nonce: hex::encode(nonce),
            ciphertext: hex::encode(ciphertext),
        };
        serde_json::to_vec_pretty(&envelope).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn open(bytes: &[u8], passphrase: &str) -> CliResult<Self> {
        let corrupt = || CliError::Io("wallet file is corrupt".into());
        let envelope: Envelope = serde_json::from_slice(bytes).map_err(|_| corrupt())?;
        if envelope.version != WALLET_VERSION {
            return Err(CliError::Io(format!("unsupported wallet version {}", envelope.version)));
        }
        let salt = hex::decode(&envelope.salt).map_err(|_| corrupt())?;
        let nonce: [u8; 12] = hex::decode(&envelope.nonce).ok().and_then(|n| n.try_into().ok()).ok_or_else(corrupt)?;
        let ciphertext = hex::decode(&envelope.ciphertext).map_err(|_| corrupt())?;
        let cipher = ChaCha20Poly1305::new(Key::from_slice(&derive_key(passphrase, &salt)?));
        let aad = associated_data(envelope.version, &envelope.salt);
        let plaintext = cipher
            .decrypt(Nonce::from_slice(&nonce), Payload { msg: &ciphertext, aad: &aad })
            .map_err(|_| CliError::Io("wallet integrity check failed (wrong passphrase or tampered file)".into()))?;
        let data: WalletData = serde_json::from_slice(&plaintext).map_err(|_| corrupt())?;
        let keys = LongTermKeyPair::from_secrets(parse_scalar(&data.spend)?, parse_scalar(&data.view)?);
        Ok(Self { keys, accounts: data.accounts })
    }

    pub fn load(path: &Path, passphrase: &str) -> CliResult<Self> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::open(&bytes, passphrase)
    }

    pub fn save<R: RngCore + CryptoRng>(&self, path: &Path, passphrase: &str, rng: &mut R) -> CliResult<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.seal(passphrase, rng)?)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Replaces the cached account list with a fresh ledger scan.
    pub fn refresh(&mut self, ledger: &Ledger) -> Vec<OwnedAccount> {
        let owned = ledger.scan(&self.keys.secret);
        self.accounts = owned
            .iter()
            .map(|o| KnownAccount {
                offset: o.offset,
                pk: hex_point(&o.state.pk),
                aux: hex_point(&o.state.aux),
                amount: o.amount,
                coin_key: hex::encode(o.coin_key.to_bytes()),
                version: o.state.version,
                spent: o.spent,
            })
            .collect();
        owned
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dringct::group::point_from_bytes;
    use rand::rngs::OsRng;

    fn parse_point(s: &str) -> Option<GroupElement> {
        parse32(s).and_then(|b| point_from_bytes(&b))
    }

    #[test]
    fn seal_open_and_tamper() {
        let mut w = Wallet::generate(&mut OsRng);
        w.accounts.push(KnownAccount {
            offset: 3,
            pk: hex_point(&w.keys.public.spend),
            aux: hex_point(&w.keys.public.view),
            amount: 9,
            coin_key: hex::encode(Scalar::ONE.to_bytes()),
            version: 0,
            spent: false,
        });
        let sealed = w.seal("pw", &mut OsRng).unwrap();
        let opened = Wallet::open(&sealed, "pw").unwrap();
        assert_eq!(opened.keys, w.keys);
        assert_eq!(opened.accounts, w.accounts);
        assert_eq!(parse_point(&opened.accounts[0].pk).unwrap(), w.keys.public.spend);
        assert!(Wallet::open(&sealed, "wrong").is_err());

        let mut envelope: Envelope = serde_json::from_slice(&sealed).unwrap();
        let mut ct = hex::decode(&envelope.ciphertext).unwrap();
        ct[5] ^= 1;
        envelope.ciphertext = hex::encode(ct);
        let tampered = serde_json::to_vec(&envelope).unwrap();
        assert_eq!(Wallet::open(&tampered, "pw").unwrap_err().exit_code(), 3);
        assert!(Wallet::open(b"not json", "pw").is_err());
    }
}
