use super::{crx_coin_key, read_header, write_header, AccountState, LedgerView, PublicParams, Verdict};
use super::{MAX_MESSAGE, MAX_OFFSET, TAG_CRX};
use crate::error::{Error, Result};
use crate::group::{identity, mul_base, GroupElement, Reader, Scalar, Transcript, Writer, ATOM};
use crate::ise::{commit, encrypt, sign, verify, Coin, LongTermPublicKey, SchnorrSig};
use crate::zk::equal::EQUAL_ATOMS;
use crate::zk::{prove_equal, verify_equal, EqualProof};
use rand::{CryptoRng, RngCore};

/// Group elements and scalars in a CRx: signature 2, new coin 2,
/// representative key 1, equality proof 5.
pub const CRX_ATOMS: usize = 2 + 2 + 1 + EQUAL_ATOMS;

/// Moves an account's coin to a new representative's key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crx {
    pub account_ref: u32,
    /// Version of the coin being replaced.
    pub version: u32,
    pub new_rep: GroupElement,
    pub new_coin: Coin,
    pub message: Vec<u8>,
    pub equal_proof: EqualProof,
    pub sig: SchnorrSig,
}

impl Crx {
    fn body(&self) -> Vec<u8> {
        let mut w = Writer::new();
        write_header(&mut w, TAG_CRX);
        w.u24(self.account_ref).u32(self.version).point(&self.new_rep);
        self.new_coin.write(&mut w);
        w.var_bytes(&self.message);
        w.into_bytes()
    }

    fn transcript(&self, pp: &PublicParams, state: &AccountState) -> Transcript {
        let mut t = Transcript::new(b"dringct/crx");
        t.append_message(b"pp", pp.id());
        t.append_message(b"body", &self.body());
        t.append_point(b"pk", &state.pk);
        t.append_point(b"enc_key", &state.enc_key);
        t.append_point(b"X", &state.coin.x);
        t.append_point(b"Y", &state.coin.y);
        t
    }

    /// Bytes the account key signs: everything but the signature.
    fn signed_message(&self, base: &Transcript) -> [u8; 32] {
        let mut t = base.clone();
        let mut w = Writer::new();
        self.equal_proof.write(&mut w);
        t.append_message(b"equal", w.as_bytes());
        t.challenge_scalar(b"sign").to_bytes()
    }

    fn equal_transcript(base: &Transcript) -> Transcript {
        let mut t = base.clone();
        t.append_message(b"equal", b"");
        t
    }

    /// Size of the cryptographic payload alone, without framing or message.
    pub fn atom_bytes(&self) -> usize {
        CRX_ATOMS * ATOM
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.raw(&self.body());
        self.equal_proof.write(&mut w);
        self.sig.write(&mut w);
        w.into_bytes()
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        read_header(r, TAG_CRX)?;
        let account_ref = r.u24()?;
        let version = r.u32()?;
        let new_rep = r.point()?;
        let new_coin = Coin::read(r)?;
        let message = r.var_bytes(MAX_MESSAGE)?;
        let equal_proof = EqualProof::read(r)?;
        let sig = SchnorrSig::read(r)?;
        Ok(Self { account_ref, version, new_rep, new_coin, message, equal_proof, sig })
    }
}

/// Re-encrypts the account at `offset` to `new_rep`'s `X₁`. `coin_key` opens
/// the current coin; the new coin key is derived from `sk` so the owner can
/// reopen it.
#[allow(clippy::too_many_arguments)]
pub fn create_crx<R: RngCore + CryptoRng>(
    pp: &PublicParams,
    offset: u32,
    state: &AccountState,
    sk: &Scalar,
    amount: u64,
    coin_key: &Scalar,
    new_rep: &LongTermPublicKey,
    message: &[u8],
    rng: &mut R,
) -> Result<Crx> {
    if offset > MAX_OFFSET {
        return Err(Error::Bounds("account offset"));
    }
    if message.len() > MAX_MESSAGE {
        return Err(Error::Bounds("message length"));
    }
    if amount >= pp.v_max {
        return Err(Error::AmountRange(amount));
    }
    let opens = commit(amount, coin_key) == state.coin.y && coin_key * state.enc_key == state.coin.x;
    if mul_base(sk) != state.pk || !opens {
        return Err(Error::BadSpendKey);
    }
    let version = state.version.checked_add(1).ok_or(Error::Bounds("account version"))?;
    let rep = new_rep.spend;
    let new_key = crx_coin_key(sk, version, &rep);
    let new_coin = encrypt(&rep, amount, &new_key)?;
    let mut crx = Crx {
        account_ref: offset,
        version: state.version,
        new_rep: rep,
        new_coin,
        message: message.to_vec(),
        equal_proof: EqualProof {
            commit_old: identity(),
            commit_new: identity(),
            commit_gap: identity(),
            z_old: Scalar::ZERO,
            z_new: Scalar::ZERO,
        },
        sig: SchnorrSig { commitment: identity(), response: Scalar::ZERO },
    };
    let base = crx.transcript(pp, state);
    crx.equal_proof = prove_equal(
        &state.enc_key,
        &state.coin,
        coin_key,
        &rep,
        &new_coin,
        &new_key,
        &mut Crx::equal_transcript(&base),
        rng,
    );
    crx.sig = sign(sk, &crx.signed_message(&base), rng);
    Ok(crx)
}

pub fn verify_crx(pp: &PublicParams, crx: &Crx, view: &dyn LedgerView) -> Verdict {
    let Some(state) = view.account(crx.account_ref) else { return Verdict::Invalid };
    if crx.version != state.version || crx.version == u32::MAX || crx.message.len() > MAX_MESSAGE {
        return Verdict::Invalid;
    }
    let base = crx.transcript(pp, &state);
    let ok = verify_equal(
        &state.enc_key,
        &state.coin,
        &crx.new_rep,
        &crx.new_coin,
        &crx.equal_proof,
        &mut Crx::equal_transcript(&base),
    ) && verify(&state.pk, &crx.signed_message(&base), &crx.sig);
    if ok {
        Verdict::Valid
    } else {
        Verdict::Invalid
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ise::LongTermKeyPair;
    use crate::tx::reveal_balance;
    use crate::tx::testutil::{fund, MemView};
    use rand::rngs::OsRng;

    fn apply(view: &mut MemView, crx: &Crx) {
        let s = &mut view.accounts[crx.account_ref as usize];
        s.coin = crx.new_coin;
        s.enc_key = crx.new_rep;
        s.version += 1;
    }

    #[test]
    fn honest_crx_size_and_decode() {
        let pp = PublicParams::standard();
        let owner = LongTermKeyPair::generate(&mut OsRng);
        let rep = LongTermKeyPair::generate(&mut OsRng);
        let mut view = MemView::default();
        let (offset, out) = fund(&mut view, &owner, 9);
        let state = view.account(offset).unwrap();
        let (sk, k) = state.owner_keys(&owner.secret).unwrap();
        let crx = create_crx(pp, offset, &state, &sk, 9, &k, &rep.public, b"", &mut OsRng).unwrap();
        assert_eq!(k, out.coin_key);
        assert_eq!(verify_crx(pp, &crx, &view), Verdict::Valid);
        assert_eq!(crx.atom_bytes(), 320);
        let bytes = crx.to_bytes();
        assert_eq!(bytes.len(), 336);
        assert_eq!(Crx::read(&mut Reader::new(&bytes)).unwrap(), crx);
        assert_eq!(reveal_balance(&rep.secret.spend, &crx.new_coin, 1 << 8), Ok(9));
    }

    #[test]
    fn chain_of_three_and_stale_versions() {
        let pp = PublicParams::standard();
        let owner = LongTermKeyPair::generate(&mut OsRng);
        let reps: Vec<_> = (0..3).map(|_| LongTermKeyPair::generate(&mut OsRng)).collect();
        let mut view = MemView::default();
        let (offset, _) = fund(&mut view, &owner, 12);
        let mut previous: Option<Crx> = None;
        for rep in &reps {
            let state = view.account(offset).unwrap();
            let (sk, k) = state.owner_keys(&owner.secret).unwrap();
            let crx = create_crx(pp, offset, &state, &sk, 12, &k, &rep.public, b"x", &mut OsRng).unwrap();
            assert_eq!(verify_crx(pp, &crx, &view), Verdict::Valid);
            apply(&mut view, &crx);
            assert_eq!(reveal_balance(&rep.secret.spend, &view.accounts[0].coin, 1 << 8), Ok(12));
            if let Some(p) = previous {
                assert_eq!(verify_crx(pp, &p, &view), Verdict::Invalid);
            }
            previous = Some(crx);
        }
    }

    #[test]
    fn wrong_signer_and_inflated_coin_reject() {
        let pp = PublicParams::standard();
        let owner = LongTermKeyPair::generate(&mut OsRng);
        let rep = LongTermKeyPair::generate(&mut OsRng);
        let mut view = MemView::default();
        let (offset, _) = fund(&mut view, &owner, 5);
        let (other, _) = fund(&mut view, &owner, 6);
        let state = view.account(offset).unwrap();
        let (sk, k) = state.owner_keys(&owner.secret).unwrap();
        assert_eq!(
            create_crx(pp, offset, &state, &sk, 6, &k, &rep.public, b"", &mut OsRng).unwrap_err(),
            Error::BadSpendKey
        );
        let crx = create_crx(pp, offset, &state, &sk, 5, &k, &rep.public, b"", &mut OsRng).unwrap();

        let mut inflated = crx.clone();
        inflated.new_coin.y += crate::group::value_base();
        assert_eq!(verify_crx(pp, &inflated, &view), Verdict::Invalid);

        let other_state = view.account(other).unwrap();
        let (other_sk, other_k) = other_state.owner_keys(&owner.secret).unwrap();
        let mut foreign = crx.clone();
        foreign.sig =
            create_crx(pp, other, &other_state, &other_sk, 6, &other_k, &rep.public, b"", &mut OsRng).unwrap().sig;
        assert_eq!(verify_crx(pp, &foreign, &view), Verdict::Invalid);
        let mut moved = crx.clone();
        moved.account_ref = other;
        assert_eq!(verify_crx(pp, &moved, &view), Verdict::Invalid);
        let mut unknown = crx;
        unknown.account_ref = 99;
        assert_eq!(verify_crx(pp, &unknown, &view), Verdict::Invalid);
    }
}
