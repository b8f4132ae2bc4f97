use super::mint::{check_output_count, outputs_fresh, prove_outputs, read_outputs, verify_outputs, write_outputs};
use super::{read_header, write_header, Account, AccountState, LedgerView, OutputSecret, PublicParams, Verdict};
use super::{MAX_MESSAGE, MAX_OFFSET, TAG_DRINGCTX};
use crate::error::{Error, Result};
use crate::group::{mul_base, random_scalar, GroupElement, Reader, Scalar, Transcript, Writer};
use crate::ise::triptych::{key_image, padded_len, ring_depth, sign_spend, spend_atoms, verify_spend};
use crate::ise::{commit, LongTermPublicKey, SpendSig};
use crate::zk::{prove_balance, verify_balance, BalanceProof, EncProof, RangeProof};
use crate::Exec;
use rand::{CryptoRng, RngCore};
use std::collections::HashSet;

const TAG_SPEND: u8 = 0x15;

/// A ring member as the creator resolved it from the ledger.
#[derive(Clone, Copy, Debug)]
pub struct RingMember {
    pub offset: u32,
    pub state: AccountState,
}

/// What the spender knows about one real input.
#[derive(Clone, Debug)]
pub struct SpendInput {
    /// Position in the ring.
    pub index: usize,
    pub sk: Scalar,
    pub amount: u64,
    pub coin_key: Scalar,
}

/// A ring transfer: `M` spends hidden among `N` ring members, `T` outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DRingCtx {
    /// Account offsets of the ring, already padded to a power of two.
    pub ring: Vec<u32>,
    pub outputs: Vec<Account>,
    pub aux: Vec<GroupElement>,
    pub message: Vec<u8>,
    pub enc_proofs: Vec<EncProof>,
    pub range_proof: RangeProof,
    pub balance_proof: BalanceProof,
    pub spends: Vec<SpendSig>,
}

fn spend_transcript(base: &Transcript, m: usize) -> Transcript {
    let mut t = base.clone();
    t.append_u64(b"spend", m as u64);
    t
}

fn balance_transcript(base: &Transcript) -> Transcript {
    let mut t = base.clone();
    t.append_message(b"balance", b"");
    t
}

impl DRingCtx {
    fn body(ring: &[u32], m: usize, outputs: &[Account], aux: &[GroupElement], message: &[u8]) -> Vec<u8> {
        let mut w = Writer::new();
        write_header(&mut w, TAG_DRINGCTX);
        w.u16(ring.len() as u16).u8(m as u8).u8(outputs.len() as u8);
        ring.iter().for_each(|o| {
            w.u24(*o);
        });
        write_outputs(&mut w, outputs, aux);
        w.var_bytes(message);
        w.into_bytes()
    }

    fn transcript(pp: &PublicParams, body: &[u8], keys: &[GroupElement], commitments: &[GroupElement]) -> Transcript {
        let mut t = Transcript::new(b"dringct/dringctx");
        t.append_message(b"pp", pp.id());
        t.append_message(b"body", body);
        t.append_points(b"ring/pk", keys);
        t.append_points(b"ring/Y", commitments);
        t
    }

    pub fn key_images(&self) -> impl Iterator<Item = &GroupElement> {
        self.spends.iter().map(|s| s.key_image())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.raw(&Self::body(&self.ring, self.spends.len(), &self.outputs, &self.aux, &self.message));
        self.enc_proofs.iter().for_each(|p| p.write(&mut w));
        self.range_proof.write(&mut w);
        self.balance_proof.write(&mut w);
        for s in &self.spends {
            w.proof_header(TAG_SPEND, s.atoms());
            s.write(&mut w);
        }
        w.into_bytes()
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        read_header(r, TAG_DRINGCTX)?;
        let n = r.u16()? as usize;
        let depth = ring_depth(n).map_err(|_| Error::Decode { offset: r.position() - 2, reason: "bad ring size" })?;
        let m = r.u8()? as usize;
        let t = r.u8()? as usize;
        if m == 0 || t == 0 {
            return Err(r.error("empty spend or output list"));
        }
        let ring = (0..n).map(|_| r.u24()).collect::<Result<Vec<_>>>()?;
        let (outputs, aux) = read_outputs(r, t)?;
        let message = r.var_bytes(MAX_MESSAGE)?;
        let enc_proofs = (0..t).map(|_| EncProof::read(r)).collect::<Result<Vec<_>>>()?;
        let range_proof = RangeProof::read(r)?;
        let balance_proof = BalanceProof::read(r)?;
        let spends = (0..m)
            .map(|_| {
                r.proof_header(TAG_SPEND, spend_atoms(depth))?;
                SpendSig::read(r, depth)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { ring, outputs, aux, message, enc_proofs, range_proof, balance_proof, spends })
    }
}

/// Builds a transfer. `ring` may be any length up to `N_max`; it is padded by
/// repeating the last member.
pub fn create_dringctx<R: RngCore + CryptoRng>(
    pp: &PublicParams,
    ring: &[RingMember],
    spends: &[SpendInput],
    outs: &[(u64, LongTermPublicKey)],
    message: &[u8],
    rng: &mut R,
) -> Result<DRingCtx> {
    if ring.is_empty() || padded_len(ring.len()) > pp.n_max {
        return Err(Error::BadRingSize(ring.len()));
    }
    if spends.is_empty() || spends.len() > pp.m_max || spends.len() > ring.len() {
        return Err(Error::Bounds("spend count"));
    }
    check_output_count(pp, outs.len())?;
    if message.len() > MAX_MESSAGE {
        return Err(Error::Bounds("message length"));
    }
    let mut members = ring.to_vec();
    members.resize(padded_len(ring.len()), *ring.last().expect("nonempty ring"));
    if members.iter().any(|m| m.offset > MAX_OFFSET) {
        return Err(Error::Bounds("account offset"));
    }

    let mut images = HashSet::new();
    for s in spends {
        let member = ring.get(s.index).ok_or(Error::BadIndex)?;
        if mul_base(&s.sk) != member.state.pk || commit(s.amount, &s.coin_key) != member.state.coin.y {
            return Err(Error::BadSpendKey);
        }
        if s.amount >= pp.v_max {
            return Err(Error::AmountRange(s.amount));
        }
        if !images.insert(key_image(&s.sk).compress().to_bytes()) {
            return Err(Error::DuplicateKeyImage);
        }
    }
    if let Some(&(a, _)) = outs.iter().find(|(a, _)| *a >= pp.v_max) {
        return Err(Error::AmountRange(a));
    }
    let total_in: u128 = spends.iter().map(|s| s.amount as u128).sum();
    let total_out: u128 = outs.iter().map(|(a, _)| *a as u128).sum();
    if total_in != total_out {
        return Err(Error::Unbalanced);
    }

    let secrets = outs.iter().map(|(a, ltpk)| OutputSecret::new(ltpk, *a, rng)).collect::<Result<Vec<_>>>()?;
    let outputs: Vec<Account> = secrets.iter().map(|s| s.account).collect();
    let aux: Vec<GroupElement> = secrets.iter().map(|s| s.aux).collect();
    let offsets: Vec<u32> = members.iter().map(|m| m.offset).collect();
    let keys: Vec<GroupElement> = members.iter().map(|m| m.state.pk).collect();
    let commitments: Vec<GroupElement> = members.iter().map(|m| m.state.coin.y).collect();
    let body = DRingCtx::body(&offsets, spends.len(), &outputs, &aux, message);
    let base = DRingCtx::transcript(pp, &body, &keys, &commitments);

    let pseudo_keys: Vec<Scalar> = spends.iter().map(|_| random_scalar(rng)).collect();
    let spend_sigs = spends
        .iter()
        .zip(&pseudo_keys)
        .enumerate()
        .map(|(m, (s, pk))| {
            let pseudo_out = commit(s.amount, pk);
            let mut t = spend_transcript(&base, m);
            sign_spend(&pp.gens, &keys, &commitments, s.index, &s.sk, &s.coin_key, pseudo_out, pk, &mut t, rng)
        })
        .collect::<Result<Vec<_>>>()?;

    let (enc_proofs, range_proof) = prove_outputs(pp, &secrets, &base, rng)?;
    let pseudo_outs: Vec<GroupElement> = spend_sigs.iter().map(|s| s.pseudo_out).collect();
    let ys: Vec<GroupElement> = outputs.iter().map(|o| o.coin.y).collect();
    let gap = pseudo_keys.iter().sum::<Scalar>() - secrets.iter().map(|s| s.coin_key).sum::<Scalar>();
    let balance_proof = prove_balance(&pseudo_outs, &ys, &gap, &mut balance_transcript(&base), rng);

    Ok(DRingCtx {
        ring: offsets,
        outputs,
        aux,
        message: message.to_vec(),
        enc_proofs,
        range_proof,
        balance_proof,
        spends: spend_sigs,
    })
}

pub fn verify_dringctx(pp: &PublicParams, tx: &DRingCtx, view: &dyn LedgerView) -> Verdict {
    verify_dringctx_with(pp, tx, view, Exec::default())
}

/// Full check, returning [`Verdict::Linked`] only for transactions whose
/// proofs all verify but whose key images were already spent or repeat
/// within the transaction. Output keys already on the ledger make an
/// unlinked transaction invalid.
pub fn verify_dringctx_with(pp: &PublicParams, tx: &DRingCtx, view: &dyn LedgerView, exec: Exec) -> Verdict {
    let n = tx.ring.len();
    let m = tx.spends.len();
    let shape_ok = ring_depth(n).is_ok()
        && n <= pp.n_max
        && (1..=pp.m_max.min(n)).contains(&m)
        && check_output_count(pp, tx.outputs.len()).is_ok()
        && tx.aux.len() == tx.outputs.len()
        && tx.message.len() <= MAX_MESSAGE;
    if !shape_ok {
        return Verdict::Invalid;
    }
    let Some(states) = tx.ring.iter().map(|o| view.account(*o)).collect::<Option<Vec<_>>>() else {
        return Verdict::Invalid;
    };
    let keys: Vec<GroupElement> = states.iter().map(|s| s.pk).collect();
    let commitments: Vec<GroupElement> = states.iter().map(|s| s.coin.y).collect();
    let body = DRingCtx::body(&tx.ring, m, &tx.outputs, &tx.aux, &tx.message);
    let base = DRingCtx::transcript(pp, &body, &keys, &commitments);

    let spends_ok =
        exec.all(m, |i| verify_spend(&pp.gens, &keys, &commitments, &tx.spends[i], &mut spend_transcript(&base, i)));
    let pseudo_outs: Vec<GroupElement> = tx.spends.iter().map(|s| s.pseudo_out).collect();
    let ys: Vec<GroupElement> = tx.outputs.iter().map(|o| o.coin.y).collect();
    let valid = spends_ok
        && verify_outputs(pp, &tx.outputs, &tx.enc_proofs, &tx.range_proof, &base)
        && verify_balance(&pseudo_outs, &ys, &tx.balance_proof, &mut balance_transcript(&base));
    if !valid {
        return Verdict::Invalid;
    }
    let mut seen = HashSet::new();
    if tx.key_images().any(|j| !seen.insert(j.compress().to_bytes()) || view.is_spent(j)) {
        return Verdict::Linked;
    }
    if !outputs_fresh(&tx.outputs, view) {
        return Verdict::Invalid;
    }
    Verdict::Valid
}
