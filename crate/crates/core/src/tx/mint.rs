use super::{read_header, write_header, Account, LedgerView, OutputSecret, PublicParams, Verdict, TAG_MINT};
use crate::error::{Error, Result};
use crate::group::{identity, GroupElement, Reader, Scalar, Transcript, Writer};
use crate::ise::LongTermPublicKey;
use crate::zk::{prove_range, verify_enc, verify_range, EncProof, RangeProof};
use crate::RANGE_BITS;
use rand::{CryptoRng, RngCore};
use std::collections::HashSet;

/// Issuance of new accounts without inputs. Used for genesis balances and
/// tests; nothing bounds what a mint creates beyond the per-coin range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mint {
    pub outputs: Vec<Account>,
    pub aux: Vec<GroupElement>,
    pub enc_proofs: Vec<EncProof>,
    pub range_proof: RangeProof,
}

pub(crate) fn check_output_count(pp: &PublicParams, t: usize) -> Result<()> {
    if t == 0 || t > pp.t_max {
        return Err(Error::Bounds("output count"));
    }
    Ok(())
}

/// Output `Y`s padded with identity commitments to a power of two.
pub(crate) fn range_commitments(outputs: &[Account]) -> Vec<GroupElement> {
    let mut v: Vec<GroupElement> = outputs.iter().map(|o| o.coin.y).collect();
    v.resize(v.len().next_power_of_two(), identity());
    v
}

pub(crate) fn enc_transcript(base: &Transcript, t: usize) -> Transcript {
    let mut tr = base.clone();
    tr.append_u64(b"enc", t as u64);
    tr
}

pub(crate) fn range_transcript(base: &Transcript) -> Transcript {
    let mut tr = base.clone();
    tr.append_message(b"range", b"");
    tr
}

/// Encryption proofs per output and one aggregated range proof.
pub(crate) fn prove_outputs<R: RngCore + CryptoRng>(
    pp: &PublicParams,
    outs: &[OutputSecret],
    base: &Transcript,
    rng: &mut R,
) -> Result<(Vec<EncProof>, RangeProof)> {
    let enc = outs.iter().enumerate().map(|(t, o)| o.prove(&mut enc_transcript(base, t), rng)).collect();
    let padded = outs.len().next_power_of_two();
    let mut amounts: Vec<u64> = outs.iter().map(|o| o.amount).collect();
    let mut blinders: Vec<Scalar> = outs.iter().map(|o| o.coin_key).collect();
    amounts.resize(padded, 0);
    blinders.resize(padded, Scalar::ZERO);
    let (range, _) = prove_range(&pp.gens, &amounts, &blinders, RANGE_BITS, &mut range_transcript(base), rng)?;
    Ok((enc, range))
}

pub(crate) fn verify_outputs(
    pp: &PublicParams,
    outputs: &[Account],
    enc_proofs: &[EncProof],
    range: &RangeProof,
    base: &Transcript,
) -> bool {
    enc_proofs.len() == outputs.len()
        && outputs
            .iter()
            .zip(enc_proofs)
            .enumerate()
            .all(|(t, (o, p))| verify_enc(&o.pk, &o.coin, p, &mut enc_transcript(base, t)))
        && verify_range(&pp.gens, &range_commitments(outputs), RANGE_BITS, range, &mut range_transcript(base))
}

/// Output keys are non-trivial, distinct, and new to the ledger.
pub(crate) fn outputs_fresh(outputs: &[Account], view: &dyn LedgerView) -> bool {
    let mut seen = HashSet::new();
    outputs.iter().all(|o| o.pk != identity() && seen.insert(o.pk.compress().to_bytes()) && !view.has_pk(&o.pk))
}

pub(crate) fn write_outputs(w: &mut Writer, outputs: &[Account], aux: &[GroupElement]) {
    outputs.iter().for_each(|o| o.write(w));
    aux.iter().for_each(|a| {
        w.point(a);
    });
}

pub(crate) fn read_outputs(r: &mut Reader<'_>, t: usize) -> Result<(Vec<Account>, Vec<GroupElement>)> {
    let outputs = (0..t).map(|_| Account::read(r)).collect::<Result<Vec<_>>>()?;
    Ok((outputs, r.points(t)?))
}

impl Mint {
    fn write_body(outputs: &[Account], aux: &[GroupElement]) -> Vec<u8> {
        let mut w = Writer::new();
        write_header(&mut w, TAG_MINT);
        w.u8(outputs.len() as u8);
        write_outputs(&mut w, outputs, aux);
        w.into_bytes()
    }

    fn transcript(pp: &PublicParams, body: &[u8]) -> Transcript {
        let mut t = Transcript::new(b"dringct/mint");
        t.append_message(b"pp", pp.id());
        t.append_message(b"body", body);
        t
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.raw(&Self::write_body(&self.outputs, &self.aux));
        self.enc_proofs.iter().for_each(|p| p.write(&mut w));
        self.range_proof.write(&mut w);
        w.into_bytes()
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        read_header(r, TAG_MINT)?;
        let t = r.u8()? as usize;
        if t == 0 {
            return Err(r.error("mint without outputs"));
        }
        let (outputs, aux) = read_outputs(r, t)?;
        let enc_proofs = (0..t).map(|_| EncProof::read(r)).collect::<Result<Vec<_>>>()?;
        Ok(Self { outputs, aux, enc_proofs, range_proof: RangeProof::read(r)? })
    }
}

pub fn create_mint<R: RngCore + CryptoRng>(
    pp: &PublicParams,
    outs: &[(u64, LongTermPublicKey)],
    rng: &mut R,
) -> Result<(Mint, Vec<OutputSecret>)> {
    check_output_count(pp, outs.len())?;
    let secrets = outs.iter().map(|(a, ltpk)| OutputSecret::new(ltpk, *a, rng)).collect::<Result<Vec<_>>>()?;
    let outputs: Vec<Account> = secrets.iter().map(|s| s.account).collect();
    let aux: Vec<GroupElement> = secrets.iter().map(|s| s.aux).collect();
    let base = Mint::transcript(pp, &Mint::write_body(&outputs, &aux));
    let (enc_proofs, range_proof) = prove_outputs(pp, &secrets, &base, rng)?;
    Ok((Mint { outputs, aux, enc_proofs, range_proof }, secrets))
}

pub fn verify_mint(pp: &PublicParams, mint: &Mint, view: &dyn LedgerView) -> Verdict {
    if check_output_count(pp, mint.outputs.len()).is_err() || mint.aux.len() != mint.outputs.len() {
        return Verdict::Invalid;
    }
    let base = Mint::transcript(pp, &Mint::write_body(&mint.outputs, &mint.aux));
    if outputs_fresh(&mint.outputs, view)
        && verify_outputs(pp, &mint.outputs, &mint.enc_proofs, &mint.range_proof, &base)
    {
        Verdict::Valid
    } else {
        Verdict::Invalid
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ise::LongTermKeyPair;
    use crate::tx::testutil::MemView;
    use crate::tx::AccountState;
    use rand::rngs::OsRng;

    #[test]
    fn mint_round_trip_and_owner_opens() {
        let pp = PublicParams::standard();
        let kp = LongTermKeyPair::generate(&mut OsRng);
        let (mint, secrets) = create_mint(pp, &[(10, kp.public), (0, kp.public), (7, kp.public)], &mut OsRng).unwrap();
        let mut view = MemView::default();
        assert_eq!(verify_mint(pp, &mint, &view), Verdict::Valid);
        let bytes = mint.to_bytes();
        assert_eq!(Mint::read(&mut Reader::new(&bytes)).unwrap(), mint);
        for (o, s) in mint.outputs.iter().zip(&secrets) {
            let state = AccountState::fresh(o, s.aux);
            let (sk, k) = state.owner_keys(&kp.secret).unwrap();
            assert_eq!(k, s.coin_key);
            assert_eq!(crate::tx::reveal_balance(&sk, &o.coin, 1 << 8), Ok(s.amount));
        }
        // Replaying into a view that already holds the keys is rejected.
        view.push(&mint.outputs[0], mint.aux[0]);
        assert_eq!(verify_mint(pp, &mint, &view), Verdict::Invalid);
    }

    #[test]
    fn tampering_and_bounds() {
        let pp = PublicParams::standard();
        let kp = LongTermKeyPair::generate(&mut OsRng);
        let view = MemView::default();
        let (mint, _) = create_mint(pp, &[(3, kp.public)], &mut OsRng).unwrap();
        let mut bad = mint.clone();
        bad.aux[0] += crate::group::base_point();
        assert_eq!(verify_mint(pp, &bad, &view), Verdict::Invalid);
        let mut bad = mint.clone();
        bad.outputs[0].coin.y += crate::group::value_base();
        assert_eq!(verify_mint(pp, &bad, &view), Verdict::Invalid);
        assert_eq!(create_mint(pp, &[], &mut OsRng).unwrap_err(), Error::Bounds("output count"));
        assert_eq!(create_mint(pp, &[(1 << 32, kp.public)], &mut OsRng).unwrap_err(), Error::AmountRange(1 << 32));
    }
}
