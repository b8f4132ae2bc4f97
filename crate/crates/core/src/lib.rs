//! Delegated ring confidential transactions.
//!
//! Coins are twisted ElGamal ciphertexts under one-time stealth keys. Spends
//! are authorized by Triptych ring signatures whose key images expose double
//! spends, amounts are hidden behind aggregated Bulletproofs and a balance
//! proof, and an account's coin can be re-encrypted to a representative who
//! then learns only the homomorphic sum of the stake delegated to them.
//!
//! Module map:
//! - [`group`]: ristretto255, hashing, generators, transcripts, codec.
//! - [`ise`]: stealth keys, encryption, Schnorr and ring signatures.
//! - [`zk`]: proofs of encryption, range, balance and plaintext equality.
//! - [`tx`]: accounts, transfers ([`tx::DRingCtx`]) and representative
//!   changes ([`tx::Crx`]).
//! - [`ledger`]: append-only log, key-image registry and stake tallies.

pub mod error;
pub mod group;
pub mod ise;
pub mod ledger;
pub mod par;
pub mod tx;
pub mod zk;

pub use error::{Error, Result};
pub use par::Exec;

/// Exclusive upper bound on a single amount: `V = [0, 2³²)`.
pub const V_MAX: u64 = 1 << 32;
/// Bit width of the range proofs over amounts.
pub const RANGE_BITS: usize = 32;
