//! Timing and size harness for transaction creation and verification.

use crate::error::{CliError, CliResult};
use dringct::ise::{LongTermKeyPair, LongTermPublicKey};
use dringct::ledger::Ledger;
use dringct::tx::{create_crx, create_dringctx, create_mint, SpendInput, Transaction, Verdict};
use rand::seq::SliceRandom;
use rand::{CryptoRng, RngCore};
use serde::Serialize;
use std::time::Instant;

pub const MIN_ITERATIONS: usize = 100;
const FUNDING: u64 = 1_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub op: &'static str,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub mean_us: f64,
    pub bytes: usize,
}

pub struct BenchGrid {
    pub ring_sizes: Vec<usize>,
    pub spends: usize,
    pub outputs: usize,
    pub iterations: usize,
}

/// Runs `f` once untimed, then `iterations` times; mean in microseconds.
fn mean_us<T>(iterations: usize, mut f: impl FnMut() -> CliResult<T>) -> CliResult<(f64, T)> {
    let mut last = f()?;
    let start = Instant::now();
    for _ in 0..iterations {
        last = f()?;
    }
    Ok((start.elapsed().as_secs_f64() * 1e6 / iterations as f64, last))
}

fn expect_valid(v: Verdict) -> CliResult<()> {
    match v {
        Verdict::Valid => Ok(()),
        other => Err(CliError::Invalid(format!("benchmark transaction verified as {}", other.code()))),
    }
}

fn split(total: u64, parts: usize) -> Vec<u64> {
    let share = total / parts as u64;
    let mut v = vec![share; parts];
    v[parts - 1] = total - share * (parts as u64 - 1);
    v
}

/// A ledger of `count` accounts owned by `owner`, each holding [`FUNDING`].
fn funded_ledger<R: RngCore + CryptoRng>(owner: &LongTermKeyPair, count: usize, rng: &mut R) -> CliResult<Ledger> {
    let mut ledger = Ledger::default();
    let batch = ledger.params().t_max;
    while ledger.account_count() < count {
        let n = batch.min(count - ledger.account_count());
        let (mint, _) = create_mint(ledger.params(), &vec![(FUNDING, owner.public); n], rng)?;
        ledger.append(Transaction::Mint(mint))?;
    }
    Ok(ledger)
}

pub fn run<R: RngCore + CryptoRng>(grid: &BenchGrid, rng: &mut R) -> CliResult<Vec<BenchRecord>> {
    let owner = LongTermKeyPair::generate(rng);
    let recipient: LongTermPublicKey = LongTermKeyPair::generate(rng).public;
    let (m, t) = (grid.spends, grid.outputs);
    let largest = grid.ring_sizes.iter().copied().max().unwrap_or(0).max(m);
    let ledger = funded_ledger(&owner, largest, rng)?;
    let pp = ledger.params().clone();
    let owned = ledger.scan(&owner.secret);
    let outs: Vec<(u64, LongTermPublicKey)> =
        split(FUNDING * m as u64, t).into_iter().map(|a| (a, recipient)).collect();

    let mut records = Vec::new();
    for &n in &grid.ring_sizes {
        if n < m {
            return Err(dringct::Error::BadRingSize(n).into());
        }
        let mut ring: Vec<u32> = (0..n as u32).collect();
        ring.shuffle(rng);
        let members = ledger.ring_members(&ring)?;
        let spends: Vec<SpendInput> = owned[..m]
            .iter()
            .map(|a| SpendInput {
                index: ring.iter().position(|o| *o == a.offset).expect("spent account is in the ring"),
                sk: a.sk,
                amount: a.amount,
                coin_key: a.coin_key,
            })
            .collect();
        let (create_us, tx) =
            mean_us(grid.iterations, || Ok(create_dringctx(&pp, &members, &spends, &outs, b"", rng)?))?;
        let tx = Transaction::Ring(tx);
        let bytes = tx.to_bytes().len();
        let (verify_us, _) = mean_us(grid.iterations, || expect_valid(ledger.verify(&tx)))?;
        records.push(BenchRecord { op: "CreateDRingCTx", n, m, t, mean_us: create_us, bytes });
        records.push(BenchRecord { op: "VerifyDRingCTx", n, m, t, mean_us: verify_us, bytes });
    }

    let a = &owned[0];
    let (create_us, crx) = mean_us(grid.iterations, || {
        Ok(create_crx(&pp, a.offset, &a.state, &a.sk, a.amount, &a.coin_key, &recipient, b"", rng)?)
    })?;
    let crx = Transaction::Crx(crx);
    let bytes = crx.to_bytes().len();
    let (verify_us, _) = mean_us(grid.iterations, || expect_valid(ledger.verify(&crx)))?;
    records.push(BenchRecord { op: "CreateCRx", n: 1, m: 1, t: 1, mean_us: create_us, bytes });
    records.push(BenchRecord { op: "VerifyCRx", n: 1, m: 1, t: 1, mean_us: verify_us, bytes });
    Ok(records)
}

pub fn write_csv<W: std::io::Write>(records: &[BenchRecord], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_preserves_total() {
        assert_eq!(split(2000, 2), vec![1000, 1000]);
        assert_eq!(split(7, 3), vec![2, 2, 3]);
        assert_eq!(split(5, 1), vec![5]);
    }

    #[test]
    fn csv_header_and_row_layout() {
        let rec = BenchRecord { op: "VerifyCRx", n: 1, m: 1, t: 1, mean_us: 12.5, bytes: 336 };
        let mut out = Vec::new();
        write_csv(&[rec], &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "op,N,M,T,mean_us,bytes\nVerifyCRx,1,1,1,12.5,336\n");
    }
}
