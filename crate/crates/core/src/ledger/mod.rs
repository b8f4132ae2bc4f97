//! Append-only transaction log with a key-image registry, account index and
//! per-representative stake aggregation.
//!
//! Every account keeps its state history keyed by height, so any past
//! height can be viewed as a snapshot. That lets a full re-verification
//! check all stored transactions independently of one another.

mod store;

pub use store::{LEDGER_MAGIC, LEDGER_VERSION};

use crate::error::{Error, Result};
use crate::group::{GroupElement, Scalar};
use crate::ise::{decrypt, key_image, open_with_coin_key, Coin, LongTermSecretKey};
use crate::tx::{AccountState, LedgerView, PublicParams, RingMember, Transaction, Verdict, MAX_OFFSET};
use crate::{Exec, V_MAX};
use std::collections::HashMap;

/// Default search bound when decrypting an aggregate stake.
pub const TALLY_BOUND: u64 = 1 << 40;

#[derive(Clone, Debug, PartialEq, Eq)]
struct AccountHistory {
    /// Height of the funding transaction.
    created: u64,
    /// `(height, state)` in increasing height order.
    states: Vec<(u64, AccountState)>,
}

/// Sum of the coins currently encrypted under one representative key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StakeView {
    pub rep_key: GroupElement,
    pub aggregate: Coin,
    pub accounts: usize,
}

/// An account found by scanning with a long-term secret key.
#[derive(Clone, Debug)]
pub struct OwnedAccount {
    pub offset: u32,
    pub state: AccountState,
    pub sk: Scalar,
    pub coin_key: Scalar,
    pub amount: u64,
    pub spent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ledger {
    pp: PublicParams,
    txs: Vec<Transaction>,
    accounts: Vec<AccountHistory>,
    pk_index: HashMap<[u8; 32], u32>,
    /// Key image to the height of the transaction that spent it.
    key_images: HashMap<[u8; 32], u64>,
}

impl Default for Ledger {
    fn default() -> Self {
        Self::new(PublicParams::standard().clone())
    }
}

impl Ledger {
    pub fn new(pp: PublicParams) -> Self {
        Self { pp, txs: Vec::new(), accounts: Vec::new(), pk_index: HashMap::new(), key_images: HashMap::new() }
    }

    pub fn params(&self) -> &PublicParams {
        &self.pp
    }

    pub fn height(&self) -> u64 {
        self.txs.len() as u64
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.txs
    }

    pub fn account_count(&self) -> usize {
        self.accounts.len()
    }

    pub fn key_image_count(&self) -> usize {
        self.key_images.len()
    }

    /// State of the ledger before the transaction at `height` was applied.
    pub fn snapshot(&self, height: u64) -> Snapshot<'_> {
        Snapshot { ledger: self, height: height.min(self.height()) }
    }

    pub fn current(&self) -> Snapshot<'_> {
        self.snapshot(self.height())
    }

    pub fn verify(&self, tx: &Transaction) -> Verdict {
        tx.verify(&self.pp, &self.current(), Exec::default())
    }

    /// Verifies candidates against the current state concurrently. Each is
    /// judged alone; conflicts between candidates are not detected.
    pub fn verify_batch(&self, txs: &[Transaction], exec: Exec) -> Vec<Verdict> {
        let view = self.current();
        exec.map(txs, |tx| tx.verify(&self.pp, &view, Exec::Sequential))
    }

    /// Re-verifies every stored transaction against the snapshot it was
    /// appended to. Returns the heights that fail.
    pub fn reverify(&self, exec: Exec) -> Vec<u64> {
        exec.map_range(self.txs.len(), |h| {
            let view = self.snapshot(h as u64);
            (self.txs[h].verify(&self.pp, &view, Exec::Sequential) != Verdict::Valid).then_some(h as u64)
        })
        .into_iter()
        .flatten()
        .collect()
    }

    /// Verifies and records `tx`, returning the new height.
    pub fn append(&mut self, tx: Transaction) -> Result<u64> {
        let new_accounts = match &tx {
            Transaction::Mint(m) => m.outputs.len(),
            Transaction::Ring(r) => r.outputs.len(),
            Transaction::Crx(_) => 0,
        };
        if self.accounts.len() + new_accounts > MAX_OFFSET as usize + 1 {
            return Err(Error::Bounds("account offset"));
        }
        match self.verify(&tx) {
            Verdict::Valid => {}
            Verdict::Invalid => return Err(Error::Invalid),
            Verdict::Linked => return Err(Error::DoubleSpend),
        }
        self.apply(tx);
        Ok(self.height())
    }

    fn apply(&mut self, tx: Transaction) {
        let h = self.height();
        let mut fund = |outputs: &[crate::tx::Account], aux: &[GroupElement]| {
            for (o, a) in outputs.iter().zip(aux) {
                let offset = self.accounts.len() as u32;
                self.pk_index.insert(o.pk.compress().to_bytes(), offset);
                self.accounts.push(AccountHistory { created: h, states: vec![(h, AccountState::fresh(o, *a))] });
            }
        };
        match &tx {
            Transaction::Mint(m) => fund(&m.outputs, &m.aux),
            Transaction::Ring(r) => {
                fund(&r.outputs, &r.aux);
                for j in r.key_images() {
                    self.key_images.insert(j.compress().to_bytes(), h);
                }
            }
            Transaction::Crx(c) => {
                let history = &mut self.accounts[c.account_ref as usize];
                let mut state = history.states.last().expect("funded account").1;
                state.coin = c.new_coin;
                state.enc_key = c.new_rep;
                state.version += 1;
                history.states.push((h, state));
            }
        }
        self.txs.push(tx);
    }

    pub fn account(&self, offset: u32) -> Option<AccountState> {
        self.current().account(offset)
    }

    pub fn is_spent(&self, key_image: &GroupElement) -> bool {
        self.key_images.contains_key(&key_image.compress().to_bytes())
    }

    /// Current states at `offsets`, in order; duplicates are returned as is.
    pub fn resolve_ring(&self, offsets: &[u32]) -> Result<Vec<AccountState>> {
        offsets.iter().map(|o| self.account(*o).ok_or(Error::UnknownOffset(*o))).collect()
    }

    pub fn ring_members(&self, offsets: &[u32]) -> Result<Vec<RingMember>> {
        let states = self.resolve_ring(offsets)?;
        Ok(offsets.iter().zip(states).map(|(&offset, state)| RingMember { offset, state }).collect())
    }

    /// Sum of every current coin encrypted under `rep_key`.
    pub fn stake_aggregate(&self, rep_key: &GroupElement) -> StakeView {
        let coins: Vec<Coin> = self
            .accounts
            .iter()
            .map(|a| a.states.last().expect("funded account").1)
            .filter(|s| s.enc_key == *rep_key)
            .map(|s| s.coin)
            .collect();
        StakeView { rep_key: *rep_key, accounts: coins.len(), aggregate: coins.into_iter().sum() }
    }

    /// One view per representative that currently holds delegated coins.
    pub fn stake_table(&self) -> Vec<StakeView> {
        let mut reps: Vec<GroupElement> = Vec::new();
        for a in &self.accounts {
            let s = a.states.last().expect("funded account").1;
            if s.version > 0 && !reps.contains(&s.enc_key) {
                reps.push(s.enc_key);
            }
        }
        reps.iter().map(|r| self.stake_aggregate(r)).collect()
    }

    /// Every account addressed to `ltsk`, opened with its current coin key.
    pub fn scan(&self, ltsk: &LongTermSecretKey) -> Vec<OwnedAccount> {
        (0..self.accounts.len() as u32)
            .filter_map(|offset| {
                let state = self.account(offset)?;
                let (sk, coin_key) = state.owner_keys(ltsk).ok()?;
                let amount = open_with_coin_key(&coin_key, &state.coin, V_MAX).ok()?;
                let spent = self.is_spent(&key_image(&sk));
                Some(OwnedAccount { offset, state, sk, coin_key, amount, spent })
            })
            .collect()
    }
}

/// Decrypts an aggregate with the representative's `x₁`.
pub fn tally(rep_secret: &Scalar, view: &StakeView, bound: u64) -> Result<u64> {
    if view.accounts == 0 {
        return Ok(0);
    }
    decrypt(rep_secret, &view.aggregate, bound)
}

/// The ledger as it stood before a given height.
#[derive(Clone, Copy)]
pub struct Snapshot<'a> {
    ledger: &'a Ledger,
    height: u64,
}

impl LedgerView for Snapshot<'_> {
    fn account(&self, offset: u32) -> Option<AccountState> {
        let a = self.ledger.accounts.get(offset as usize)?;
        if a.created >= self.height {
            return None;
        }
        a.states.iter().rev().find(|(h, _)| *h < self.height).map(|(_, s)| *s)
    }

    fn is_spent(&self, key_image: &GroupElement) -> bool {
        self.ledger.key_images.get(&key_image.compress().to_bytes()).is_some_and(|h| *h < self.height)
    }

    fn has_pk(&self, pk: &GroupElement) -> bool {
        self.ledger.pk_index.get(&pk.compress().to_bytes()).is_some_and(|o| self.account(*o).is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{mul_base, random_scalar};
    use crate::ise::{encrypt, LongTermKeyPair};
    use crate::tx::{create_crx, create_dringctx, create_mint, SpendInput};
    use rand::rngs::OsRng;
    use rand::Rng;

    fn minted(ledger: &mut Ledger, owner: &LongTermKeyPair, amounts: &[u64]) {
        let outs: Vec<_> = amounts.iter().map(|a| (*a, owner.public)).collect();
        let (mint, _) = create_mint(ledger.params(), &outs, &mut OsRng).unwrap();
        ledger.append(Transaction::Mint(mint)).unwrap();
    }

    fn delegate(ledger: &mut Ledger, owner: &LongTermKeyPair, offset: u32, rep: &LongTermKeyPair) -> Transaction {
        let state = ledger.account(offset).unwrap();
        let (sk, k) = state.owner_keys(&owner.secret).unwrap();
        let a = open_with_coin_key(&k, &state.coin, 1 << 20).unwrap();
        let crx = create_crx(ledger.params(), offset, &state, &sk, a, &k, &rep.public, b"", &mut OsRng).unwrap();
        Transaction::Crx(crx)
    }

    #[test]
    fn append_replay_and_resolution() {
        let mut ledger = Ledger::default();
        assert_eq!(ledger.height(), 0);
        let alice = LongTermKeyPair::generate(&mut OsRng);
        let bob = LongTermKeyPair::generate(&mut OsRng);
        minted(&mut ledger, &alice, &[5, 6, 7, 8]);
        assert_eq!(ledger.height(), 1);
        let owned = ledger.scan(&alice.secret);
        assert_eq!(owned.iter().map(|o| o.amount).collect::<Vec<_>>(), vec![5, 6, 7, 8]);

        let ring = ledger.ring_members(&[0, 1, 2, 3]).unwrap();
        let o = &owned[2];
        let spend = SpendInput { index: 2, sk: o.sk, amount: 7, coin_key: o.coin_key };
        let tx = create_dringctx(ledger.params(), &ring, &[spend], &[(7, bob.public)], b"", &mut OsRng).unwrap();
        assert_eq!(ledger.append(Transaction::Ring(tx.clone())), Ok(2));
        assert_eq!(ledger.append(Transaction::Ring(tx)), Err(Error::DoubleSpend));
        assert_eq!(ledger.key_image_count(), 1);
        assert!(ledger.scan(&alice.secret)[2].spent);
        assert_eq!(ledger.scan(&bob.secret)[0].amount, 7);

        assert_eq!(ledger.resolve_ring(&[4, 4]).unwrap().len(), 2);
        assert_eq!(ledger.resolve_ring(&[5]), Err(Error::UnknownOffset(5)));
        assert!(ledger.reverify(Exec::Parallel).is_empty());
        assert!(ledger.reverify(Exec::Sequential).is_empty());
    }

    #[test]
    fn delegation_aggregates_and_stale_crx() {
        let mut ledger = Ledger::default();
        let owner = LongTermKeyPair::generate(&mut OsRng);
        let r1 = LongTermKeyPair::generate(&mut OsRng);
        let r2 = LongTermKeyPair::generate(&mut OsRng);
        let empty = ledger.stake_aggregate(&r1.public.spend);
        assert_eq!(empty.aggregate, Coin::zero());
        assert_eq!(tally(&r1.secret.spend, &empty, TALLY_BOUND), Ok(0));

        minted(&mut ledger, &owner, &[3, 4]);
        for offset in 0..2 {
            let crx = delegate(&mut ledger, &owner, offset, &r1);
            ledger.append(crx).unwrap();
        }
        let view = ledger.stake_aggregate(&r1.public.spend);
        assert_eq!(tally(&r1.secret.spend, &view, TALLY_BOUND), Ok(7));
        assert_eq!(tally(&r2.secret.spend, &view, 1 << 16), Err(Error::DlogNotFound));

        let stale = delegate(&mut ledger, &owner, 0, &r2);
        let fresh = delegate(&mut ledger, &owner, 0, &r2);
        ledger.append(fresh).unwrap();
        assert_eq!(ledger.append(stale), Err(Error::Invalid));
        assert_eq!(tally(&r1.secret.spend, &ledger.stake_aggregate(&r1.public.spend), TALLY_BOUND), Ok(4));
        assert_eq!(tally(&r2.secret.spend, &ledger.stake_aggregate(&r2.public.spend), TALLY_BOUND), Ok(3));
        assert_eq!(ledger.stake_table().len(), 2);

        // Versions only grow, and history keeps the earlier states.
        let history = &ledger.accounts[0].states;
        assert!(history.windows(2).all(|w| w[0].1.version < w[1].1.version && w[0].0 < w[1].0));
        assert!(ledger.reverify(Exec::default()).is_empty());
        // The owner can still find and open the delegated coin.
        assert_eq!(ledger.scan(&owner.secret).iter().map(|o| o.amount).sum::<u64>(), 7);
    }

    #[test]
    fn tally_is_linear_below_bound() {
        let x1 = random_scalar(&mut OsRng);
        let rep = mul_base(&x1);
        for total in 0..1u64 << 10 {
            let parts = [OsRng.gen_range(0..=total), 0];
            let parts = [parts[0], total - parts[0]];
            let aggregate = parts.iter().map(|a| encrypt(&rep, *a, &random_scalar(&mut OsRng)).unwrap()).sum();
            let view = StakeView { rep_key: rep, aggregate, accounts: 2 };
            assert_eq!(tally(&x1, &view, 1 << 10), Ok(total));
        }
    }
}
