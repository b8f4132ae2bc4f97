//! Accounts and the transaction types: funding mints, ring transfers
//! ([`DRingCtx`]) and representative changes ([`Crx`]).

mod account;
mod crx;
mod mint;
mod params;
mod ring;

pub use account::{create_account, crx_coin_key, reveal_balance, Account, AccountState, OutputSecret};
pub use crx::{create_crx, verify_crx, Crx, CRX_ATOMS};
pub use mint::{create_mint, verify_mint, Mint};
pub use params::{setup, PublicParams, DEFAULT_SECURITY, M_MAX, N_MAX, T_MAX};
pub use ring::{create_dringctx, verify_dringctx, verify_dringctx_with, DRingCtx, RingMember, SpendInput};

use crate::error::{Error, Result};
use crate::group::{GroupElement, Reader, Writer};
use crate::Exec;

pub const TAG_MINT: u8 = 0x01;
pub const TAG_DRINGCTX: u8 = 0x02;
pub const TAG_CRX: u8 = 0x03;
/// Wire format version carried in every transaction header.
pub const TX_VERSION: u8 = 1;
/// Largest account offset expressible in the 3-byte ring references.
pub const MAX_OFFSET: u32 = (1 << 24) - 1;
/// Longest accepted application message.
pub const MAX_MESSAGE: usize = 1 << 16;

/// Verification outcome: valid, invalid, or valid but linked to an earlier
/// spend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(i8)]
pub enum Verdict {
    Valid = 1,
    Invalid = 0,
    Linked = -1,
}

impl Verdict {
    pub fn code(self) -> i8 {
        self as i8
    }
}

/// Read access to ledger state needed by verification.
pub trait LedgerView: Sync {
    /// Current state of the account at `offset`.
    fn account(&self, offset: u32) -> Option<AccountState>;
    fn is_spent(&self, key_image: &GroupElement) -> bool;
    /// Whether some account already uses this one-time key.
    fn has_pk(&self, pk: &GroupElement) -> bool;
}

/// Any transaction the ledger stores.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transaction {
    Mint(Mint),
    Ring(DRingCtx),
    Crx(Crx),
}

impl Transaction {
    pub fn to_bytes(&self) -> Vec<u8> {
        match self {
            Transaction::Mint(t) => t.to_bytes(),
            Transaction::Ring(t) => t.to_bytes(),
            Transaction::Crx(t) => t.to_bytes(),
        }
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let tx = Self::read(&mut r)?;
        r.finish()?;
        Ok(tx)
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        let Some(&tag) = r.peek() else { return Err(r.error("empty transaction")) };
        match tag {
            TAG_MINT => Mint::read(r).map(Transaction::Mint),
            TAG_DRINGCTX => DRingCtx::read(r).map(Transaction::Ring),
            TAG_CRX => Crx::read(r).map(Transaction::Crx),
            _ => Err(r.error("unknown transaction tag")),
        }
    }

    pub fn verify(&self, pp: &PublicParams, view: &dyn LedgerView, exec: Exec) -> Verdict {
        match self {
            Transaction::Mint(t) => verify_mint(pp, t, view),
            Transaction::Ring(t) => verify_dringctx_with(pp, t, view, exec),
            Transaction::Crx(t) => verify_crx(pp, t, view),
        }
    }
}

fn write_header(w: &mut Writer, tag: u8) {
    w.u8(tag).u8(TX_VERSION);
}

fn read_header(r: &mut Reader<'_>, tag: u8) -> Result<()> {
    if r.u8()? != tag {
        return Err(Error::Decode { offset: r.position() - 1, reason: "unexpected transaction tag" });
    }
    if r.u8()? != TX_VERSION {
        return Err(Error::Decode { offset: r.position() - 1, reason: "unsupported transaction version" });
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use crate::ise::LongTermKeyPair;
    use std::collections::{HashMap, HashSet};

    /// Minimal in-memory view for unit tests.
    #[derive(Default)]
    pub struct MemView {
        pub accounts: Vec<AccountState>,
        pub spent: HashSet<[u8; 32]>,
        pub pks: HashMap<[u8; 32], u32>,
    }

    impl MemView {
        pub fn push(&mut self, account: &Account, aux: GroupElement) -> u32 {
            let offset = self.accounts.len() as u32;
            self.accounts.push(AccountState::fresh(account, aux));
            self.pks.insert(account.pk.compress().to_bytes(), offset);
            offset
        }

        pub fn spend(&mut self, key_image: &GroupElement) {
            self.spent.insert(key_image.compress().to_bytes());
        }
    }

    impl LedgerView for MemView {
        fn account(&self, offset: u32) -> Option<AccountState> {
            self.accounts.get(offset as usize).cloned()
        }
        fn is_spent(&self, key_image: &GroupElement) -> bool {
            self.spent.contains(&key_image.compress().to_bytes())
        }
        fn has_pk(&self, pk: &GroupElement) -> bool {
            self.pks.contains_key(&pk.compress().to_bytes())
        }
    }

    /// A funded account owned by `owner` plus its opening.
    pub fn fund(view: &mut MemView, owner: &LongTermKeyPair, a: u64) -> (u32, OutputSecret) {
        let out = OutputSecret::new(&owner.public, a, &mut rand::rngs::OsRng).unwrap();
        let offset = view.push(&out.account, out.aux);
        (offset, out)
    }
}
