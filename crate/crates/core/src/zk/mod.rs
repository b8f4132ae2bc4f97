//! Fiat–Shamir proofs for ciphertext well-formedness, amount ranges, value
//! conservation and ciphertext equivalence. All are transparent.

pub mod balance;
pub mod enc;
pub mod equal;
pub mod ipp;
pub mod range;

pub use balance::{balance_difference, prove_balance, verify_balance, BalanceProof};
pub use enc::{prove_enc, verify_enc, EncProof};
pub use equal::{prove_equal, verify_equal, EqualProof};
pub use range::{prove_range, range_atoms, verify_range, RangeProof};
