//! On-disk format: `"DRCT" ∥ version ∥ (u32 length ∥ transaction)*`, each
//! transaction in its canonical encoding.

use super::Ledger;
use crate::error::{Error, Result};
use crate::group::{Reader, Writer};
use crate::tx::{PublicParams, Transaction};
use std::path::Path;

pub const LEDGER_MAGIC: &[u8; 4] = b"DRCT";
pub const LEDGER_VERSION: u8 = 1;
const MAX_RECORD: usize = 1 << 24;

impl Ledger {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.raw(LEDGER_MAGIC).u8(LEDGER_VERSION);
        for tx in &self.txs {
            w.var_bytes(&tx.to_bytes());
        }
        w.into_bytes()
    }

    /// Replays every record through [`Ledger::append`], so a loaded ledger
    /// is always fully verified. Decode errors carry file offsets.
    pub fn from_bytes(bytes: &[u8], pp: PublicParams) -> Result<Self> {
        let mut r = Reader::new(bytes);
        if r.take(4)? != LEDGER_MAGIC {
            return Err(Error::Decode { offset: 0, reason: "bad ledger magic" });
        }
        if r.u8()? != LEDGER_VERSION {
            return Err(Error::Decode { offset: 4, reason: "unsupported ledger version" });
        }
        let mut ledger = Ledger::new(pp);
        while r.remaining() > 0 {
            let record = r.var_bytes(MAX_RECORD)?;
            let start = r.position() - record.len();
            let tx = Transaction::from_bytes(&record).map_err(|e| match e {
                Error::Decode { offset, reason } => Error::Decode { offset: start + offset, reason },
                other => other,
            })?;
            ledger.append(tx)?;
        }
        Ok(ledger)
    }

    pub fn persist(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_bytes())?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?, PublicParams::standard().clone())
    }
}
