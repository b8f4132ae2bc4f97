//! One function per subcommand. Each loads what it needs, performs a single
//! ledger operation per transaction and reports what it did.

use crate::error::{CliError, CliResult};
use crate::wallet::Wallet;
use dringct::ise::LongTermPublicKey;
use dringct::ledger::{tally, Ledger, OwnedAccount, TALLY_BOUND};
use dringct::tx::{create_crx, create_dringctx, create_mint, SpendInput, Transaction};
use dringct::Exec;
use rand::seq::{index, SliceRandom};
use rand::{CryptoRng, RngCore};
use std::collections::HashSet;
use std::path::Path;

/// Loads and fully re-verifies the ledger; a missing file is an empty
/// ledger only when `create` is set.
pub fn open_ledger(path: &Path, create: bool) -> CliResult<Ledger> {
    if create && !path.exists() {
        return Ok(Ledger::default());
    }
    if !path.exists() {
        return Err(CliError::Io(format!("{}: no such ledger", path.display())));
    }
    Ok(Ledger::load(path)?)
}

pub fn save_ledger(ledger: &Ledger, path: &Path) -> CliResult<()> {
    Ok(ledger.persist(path)?)
}

/// Mints one account per amount to `to`, returning the new offsets.
pub fn mint<R: RngCore + CryptoRng>(
    ledger: &mut Ledger,
    to: &LongTermPublicKey,
    amounts: &[u64],
    rng: &mut R,
) -> CliResult<Vec<u32>> {
    let outs: Vec<(u64, LongTermPublicKey)> = amounts.iter().map(|a| (*a, *to)).collect();
    let (tx, _) = create_mint(ledger.params(), &outs, rng)?;
    let first = ledger.account_count() as u32;
    ledger.append(Transaction::Mint(tx))?;
    Ok((first..ledger.account_count() as u32).collect())
}

pub struct SendRequest<'a> {
    pub to: LongTermPublicKey,
    pub amounts: &'a [u64],
    pub ring_size: usize,
    /// Explicit inputs; when empty, unspent accounts are picked largest first.
    pub from: &'a [u32],
    pub message: &'a [u8],
}

pub struct SendReceipt {
    pub height: u64,
    pub bytes: usize,
    pub inputs: Vec<u32>,
    pub ring: Vec<u32>,
    pub change: u64,
}

fn pick_inputs(owned: &[OwnedAccount], total: u64, max: usize) -> CliResult<Vec<&OwnedAccount>> {
    let mut unspent: Vec<&OwnedAccount> = owned.iter().filter(|a| !a.spent).collect();
    unspent.sort_by(|a, b| b.amount.cmp(&a.amount).then(a.offset.cmp(&b.offset)));
    let mut picked = Vec::new();
    let mut sum = 0u64;
    for a in unspent {
        if (sum >= total && !picked.is_empty()) || picked.len() == max {
            break;
        }
        sum += a.amount;
        picked.push(a);
    }
    if picked.is_empty() || sum < total {
        return Err(CliError::Invalid(format!("insufficient funds: {sum} available in {} accounts", picked.len())));
    }
    Ok(picked)
}

fn named_inputs<'a>(owned: &'a [OwnedAccount], from: &[u32]) -> CliResult<Vec<&'a OwnedAccount>> {
    from.iter()
        .map(|o| {
            owned
                .iter()
                .find(|a| a.offset == *o)
                .ok_or_else(|| CliError::Invalid(format!("account {o} is not owned by this wallet")))
        })
        .collect()
}

/// Builds, verifies and appends a DRingCTx. Decoys are drawn uniformly from
/// every account not known to be spent by this wallet.
pub fn send<R: RngCore + CryptoRng>(
    ledger: &mut Ledger,
    wallet: &Wallet,
    req: &SendRequest<'_>,
    rng: &mut R,
) -> CliResult<SendReceipt> {
    let pp = ledger.params().clone();
    let total: u64 = req.amounts.iter().try_fold(0u64, |s, a| s.checked_add(*a)).ok_or(dringct::Error::Unbalanced)?;
    let owned = ledger.scan(&wallet.keys.secret);
    let inputs =
        if req.from.is_empty() { pick_inputs(&owned, total, pp.m_max)? } else { named_inputs(&owned, req.from)? };
    let total_in: u64 = inputs.iter().map(|a| a.amount).sum();
    if total_in < total {
        return Err(CliError::Invalid(format!("inputs hold {total_in}, {total} requested")));
    }
    if req.ring_size < inputs.len() || req.ring_size > pp.n_max {
        return Err(dringct::Error::BadRingSize(req.ring_size).into());
    }
    let mut outs: Vec<(u64, LongTermPublicKey)> = req.amounts.iter().map(|a| (*a, req.to)).collect();
    let change = total_in - total;
    if change > 0 {
        outs.push((change, wallet.keys.public));
    }

    let exclude: HashSet<u32> =
        inputs.iter().map(|a| a.offset).chain(owned.iter().filter(|a| a.spent).map(|a| a.offset)).collect();
    let pool: Vec<u32> = (0..ledger.account_count() as u32).filter(|o| !exclude.contains(o)).collect();
    let decoys = (req.ring_size - inputs.len()).min(pool.len());
    let mut ring: Vec<u32> = index::sample(rng, pool.len(), decoys).into_iter().map(|i| pool[i]).collect();
    ring.extend(inputs.iter().map(|a| a.offset));
    ring.shuffle(rng);

    let members = ledger.ring_members(&ring)?;
    let spends: Vec<SpendInput> = inputs
        .iter()
        .map(|a| SpendInput {
            index: ring.iter().position(|o| *o == a.offset).expect("input is in the ring"),
            sk: a.sk,
            amount: a.amount,
            coin_key: a.coin_key,
        })
        .collect();
    let tx = create_dringctx(&pp, &members, &spends, &outs, req.message, rng)?;
    let tx = Transaction::Ring(tx);
    let bytes = tx.to_bytes().len();
    let height = ledger.append(tx)?;
    Ok(SendReceipt { height, bytes, inputs: inputs.iter().map(|a| a.offset).collect(), ring, change })
}

/// Issues one CRx per account, moving its coin to `rep`. Returns the
/// delegated offsets.
pub fn delegate<R: RngCore + CryptoRng>(
    ledger: &mut Ledger,
    wallet: &Wallet,
    rep: &LongTermPublicKey,
    from: &[u32],
    rng: &mut R,
) -> CliResult<Vec<u32>> {
    let owned = ledger.scan(&wallet.keys.secret);
    let targets: Vec<OwnedAccount> = if from.is_empty() {
        owned.iter().filter(|a| !a.spent).cloned().collect()
    } else {
        named_inputs(&owned, from)?.into_iter().cloned().collect()
    };
    if targets.is_empty() {
        return Err(CliError::Invalid("no unspent accounts to delegate".into()));
    }
    for a in &targets {
        let crx = create_crx(ledger.params(), a.offset, &a.state, &a.sk, a.amount, &a.coin_key, rep, b"", rng)?;
        ledger.append(Transaction::Crx(crx))?;
    }
    Ok(targets.iter().map(|a| a.offset).collect())
}

/// Total stake delegated to this wallet's representative key.
pub fn tally_for(ledger: &Ledger, wallet: &Wallet) -> CliResult<(u64, usize)> {
    let view = ledger.stake_aggregate(&wallet.keys.public.spend);
    Ok((tally(&wallet.keys.secret.spend, &view, TALLY_BOUND)?, view.accounts))
}

/// Re-verifies every stored transaction; returns the failing heights.
pub fn reverify(ledger: &Ledger) -> Vec<u64> {
    ledger.reverify(Exec::Parallel)
}
