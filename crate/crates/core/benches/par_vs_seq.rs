use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use dringct::group::value_base;
use dringct::ise::bsgs::BabyTable;
use dringct::ise::LongTermKeyPair;
use dringct::ledger::Ledger;
use dringct::tx::{create_dringctx, create_mint, verify_dringctx_with, DRingCtx, SpendInput, Transaction};
use dringct::Exec;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

const STRATEGIES: [(&str, Exec); 2] = [("seq", Exec::Sequential), ("par", Exec::Parallel)];

/// A ledger with 32 funded accounts, 4 transfers already appended, and 4
/// more valid transfers ready to verify.
fn fixture() -> (Ledger, Vec<Transaction>) {
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let owner = LongTermKeyPair::generate(&mut rng);
    let mut ledger = Ledger::default();
    for _ in 0..2 {
        let (mint, _) = create_mint(ledger.params(), &[(100, owner.public); 16], &mut rng).unwrap();
        ledger.append(Transaction::Mint(mint)).unwrap();
    }
    let transfer = |ledger: &Ledger, pair: u32, rng: &mut ChaCha20Rng| -> DRingCtx {
        let ring: Vec<u32> = (0..16).collect();
        let members = ledger.ring_members(&ring).unwrap();
        let spends: Vec<SpendInput> = ledger
            .scan(&owner.secret)
            .into_iter()
            .filter(|a| a.offset / 2 == pair)
            .map(|a| SpendInput { index: a.offset as usize, sk: a.sk, amount: a.amount, coin_key: a.coin_key })
            .collect();
        create_dringctx(ledger.params(), &members, &spends, &[(150, owner.public), (50, owner.public)], b"", rng)
            .unwrap()
    };
    for pair in 0..4 {
        let tx = transfer(&ledger, pair, &mut rng);
        ledger.append(Transaction::Ring(tx)).unwrap();
    }
    let pending = (4..8).map(|pair| Transaction::Ring(transfer(&ledger, pair, &mut rng))).collect();
    (ledger, pending)
}

fn bsgs(c: &mut Criterion) {
    let mut group = c.benchmark_group("bsgs");
    group.sample_size(10);
    let table = BabyTable::build(16, Exec::Sequential);
    let target = dringct::group::Scalar::from(3_000_000_000u64) * value_base();
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new("build_2^16", name), &exec, |b, &exec| {
            b.iter(|| BabyTable::build(16, exec))
        });
        group.bench_with_input(BenchmarkId::new("solve_2^32", name), &exec, |b, &exec| {
            b.iter(|| table.solve(black_box(&target), 1 << 32, exec))
        });
    }
    group.finish();
}

fn ledger(c: &mut Criterion) {
    let (ledger, pending) = fixture();
    let mut group = c.benchmark_group("ledger");
    group.sample_size(10);
    let Transaction::Ring(single) = &pending[0] else { unreachable!() };
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::new("verify_spends", name), &exec, |b, &exec| {
            b.iter(|| verify_dringctx_with(ledger.params(), single, &ledger.current(), exec))
        });
        group.bench_with_input(BenchmarkId::new("verify_batch_4", name), &exec, |b, &exec| {
            b.iter(|| ledger.verify_batch(&pending, exec))
        });
        group
            .bench_with_input(BenchmarkId::new("reverify_6", name), &exec, |b, &exec| b.iter(|| ledger.reverify(exec)));
    }
    group.finish();
}

criterion_group!(benches, bsgs, ledger);
criterion_main!(benches);
