//! `dringct` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid transaction, 2 double spend, 3 I/O or
//! parse error.

mod bench;
mod commands;
mod error;
mod wallet;

use bench::{BenchGrid, MIN_ITERATIONS};
use clap::{Args, Parser, Subcommand};
use commands::SendRequest;
use dringct::ise::LongTermPublicKey;
use error::{CliError, CliResult};
use rand::rngs::OsRng;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use wallet::Wallet;

#[derive(Parser)]
#[command(name = "dringct", version, about = "Delegatable ring confidential transactions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct WalletArgs {
    #[arg(long)]
    wallet: PathBuf,
    /// Wallet passphrase.
    #[arg(long, env = "DRINGCT_PASSPHRASE", hide_env_values = true)]
    passphrase: String,
}

#[derive(Subcommand)]
enum Command {
    /// Create a new wallet and print its address.
    Keygen {
        #[command(flatten)]
        wallet: WalletArgs,
        /// Overwrite an existing wallet file.
        #[arg(long)]
        force: bool,
    },
    /// Print the wallet's address (128 hex characters).
    Address {
        #[command(flatten)]
        wallet: WalletArgs,
    },
    /// Issue new accounts to an address, one per amount.
    Mint {
        #[arg(long)]
        ledger: PathBuf,
        #[arg(long, value_parser = parse_address)]
        to: LongTermPublicKey,
        #[arg(long = "amount", required = true)]
        amounts: Vec<u64>,
    },
    /// Scan the ledger and list this wallet's accounts.
    Balance {
        #[arg(long)]
        ledger: PathBuf,
        #[command(flatten)]
        wallet: WalletArgs,
    },
    /// Transfer to an address, one output per amount, change back to self.
    Send {
        #[arg(long)]
        ledger: PathBuf,
        #[command(flatten)]
        wallet: WalletArgs,
        #[arg(long, value_parser = parse_address)]
        to: LongTermPublicKey,
        #[arg(long = "amount", required = true)]
        amounts: Vec<u64>,
        #[arg(long, default_value_t = 16)]
        ring_size: usize,
        /// Spend these account offsets instead of choosing automatically.
        #[arg(long = "from")]
        from: Vec<u32>,
        #[arg(long, default_value = "")]
        message: String,
    },
    /// Delegate accounts to a representative with one CRx each.
    Delegate {
        #[arg(long)]
        ledger: PathBuf,
        #[command(flatten)]
        wallet: WalletArgs,
        #[arg(long, value_parser = parse_address)]
        rep: LongTermPublicKey,
        /// Delegate only these offsets; default is every unspent account.
        #[arg(long = "from")]
        from: Vec<u32>,
    },
    /// Print the total stake delegated to this wallet.
    Tally {
        #[arg(long)]
        ledger: PathBuf,
        #[command(flatten)]
        wallet: WalletArgs,
    },
    /// Re-verify every transaction in the ledger.
    Verify {
        #[arg(long)]
        ledger: PathBuf,
    },
    /// Time creation and verification; writes `op,N,M,T,mean_us,bytes`.
    Bench {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = [16, 32, 64, 128, 256])]
        ring_sizes: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        spends: usize,
        #[arg(long, default_value_t = 2)]
        outputs: usize,
        #[arg(long, default_value_t = MIN_ITERATIONS, value_parser = parse_iterations)]
        iterations: usize,
    },
}

fn parse_address(s: &str) -> Result<LongTermPublicKey, String> {
    LongTermPublicKey::from_hex(s).map_err(|e| e.to_string())
}

fn parse_iterations(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < MIN_ITERATIONS {
        return Err(format!("at least {MIN_ITERATIONS} iterations are required"));
    }
    Ok(n)
}

fn open_wallet(args: &WalletArgs) -> CliResult<Wallet> {
    Wallet::load(&args.wallet, &args.passphrase)
}

fn save_wallet(wallet: &Wallet, args: &WalletArgs) -> CliResult<()> {
    wallet.save(&args.wallet, &args.passphrase, &mut OsRng)
}

fn refresh(wallet: &mut Wallet, args: &WalletArgs, ledger: &dringct::ledger::Ledger) -> CliResult<()> {
    wallet.refresh(ledger);
    save_wallet(wallet, args)
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Keygen { wallet, force } => {
            if wallet.wallet.exists() && !force {
                return Err(CliError::Io(format!("{} already exists", wallet.wallet.display())));
            }
            let w = Wallet::generate(&mut OsRng);
            save_wallet(&w, &wallet)?;
            println!("{}", w.keys.public.to_hex());
        }
        Command::Address { wallet } => println!("{}", open_wallet(&wallet)?.keys.public.to_hex()),
        Command::Mint { ledger: path, to, amounts } => {
            let mut ledger = commands::open_ledger(&path, true)?;
            let offsets = commands::mint(&mut ledger, &to, &amounts, &mut OsRng)?;
            commands::save_ledger(&ledger, &path)?;
            for (o, a) in offsets.iter().zip(&amounts) {
                println!("minted account {o} amount {a}");
            }
        }
        Command::Balance { ledger: path, wallet: args } => {
            let ledger = commands::open_ledger(&path, false)?;
            let mut w = open_wallet(&args)?;
            refresh(&mut w, &args, &ledger)?;
            let mut unspent = 0u64;
            for a in &w.accounts {
                let status = if a.spent { "spent" } else { "unspent" };
                println!("account {} amount {} version {} {status}", a.offset, a.amount, a.version);
                if !a.spent {
                    unspent += a.amount;
                }
            }
            println!("total {unspent}");
        }
        Command::Send { ledger: path, wallet: args, to, amounts, ring_size, from, message } => {
            let mut ledger = commands::open_ledger(&path, false)?;
            let mut w = open_wallet(&args)?;
            let req = SendRequest { to, amounts: &amounts, ring_size, from: &from, message: message.as_bytes() };
            let receipt = commands::send(&mut ledger, &w, &req, &mut OsRng)?;
            commands::save_ledger(&ledger, &path)?;
            refresh(&mut w, &args, &ledger)?;
            println!(
                "appended transfer at height {} ({} bytes), spent {:?} in ring of {}, change {}",
                receipt.height,
                receipt.bytes,
                receipt.inputs,
                receipt.ring.len(),
                receipt.change
            );
        }
        Command::Delegate { ledger: path, wallet: args, rep, from } => {
            let mut ledger = commands::open_ledger(&path, false)?;
            let mut w = open_wallet(&args)?;
            let result = commands::delegate(&mut ledger, &w, &rep, &from, &mut OsRng);
            // Delegations appended before a failure are kept.
            commands::save_ledger(&ledger, &path)?;
            refresh(&mut w, &args, &ledger)?;
            for o in result? {
                println!("delegated account {o}");
            }
        }
        Command::Tally { ledger: path, wallet: args } => {
            let ledger = commands::open_ledger(&path, false)?;
            let (total, accounts) = commands::tally_for(&ledger, &open_wallet(&args)?)?;
            println!("delegated accounts {accounts}");
            println!("total {total}");
        }
        Command::Verify { ledger: path } => {
            let ledger = commands::open_ledger(&path, false)?;
            let failing = commands::reverify(&ledger);
            if !failing.is_empty() {
                return Err(CliError::Invalid(format!("transactions at heights {failing:?} fail re-verification")));
            }
            println!("ok: {} transactions, {} accounts", ledger.height(), ledger.account_count());
        }
        Command::Bench { out, ring_sizes, spends, outputs, iterations } => {
            let grid = BenchGrid { ring_sizes, spends, outputs, iterations };
            let records = bench::run(&grid, &mut OsRng)?;
            match out {
                Some(path) => write_bench(&records, &path)?,
                None => bench::write_csv(&records, std::io::stdout().lock())?,
            }
        }
    }
    Ok(())
}

fn write_bench(records: &[bench::BenchRecord], path: &Path) -> CliResult<()> {
    bench::write_csv(records, std::fs::File::create(path)?)?;
    for r in records {
        println!("{} N={} M={} T={}: {:.1} us, {} bytes", r.op, r.n, r.m, r.t, r.mean_us, r.bytes);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
