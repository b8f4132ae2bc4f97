use crate::error::Result;
use crate::group::{identity, mul_base, random_scalar, GroupElement, Reader, Scalar, Transcript, Writer};
use rand::{CryptoRng, RngCore};

/// `(A, z)` with `z·G = A + ξ·pk`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchnorrSig {
    pub commitment: GroupElement,
    pub response: Scalar,
}

pub const SCHNORR_BYTES: usize = 64;

fn challenge(pk: &GroupElement, msg: &[u8], commitment: &GroupElement) -> Scalar {
    let mut t = Transcript::new(b"dringct/schnorr");
    t.append_point(b"pk", pk);
    t.append_message(b"msg", msg);
    t.append_point(b"A", commitment);
    t.challenge_scalar(b"xi")
}

pub fn sign<R: RngCore + CryptoRng>(sk: &Scalar, msg: &[u8], rng: &mut R) -> SchnorrSig {
    let pk = mul_base(sk);
    let alpha = random_scalar(rng);
    let commitment = mul_base(&alpha);
    let xi = challenge(&pk, msg, &commitment);
    SchnorrSig { commitment, response: alpha + xi * sk }
}

pub fn verify(pk: &GroupElement, msg: &[u8], sig: &SchnorrSig) -> bool {
    if *pk == identity() {
        return false;
    }
    let xi = challenge(pk, msg, &sig.commitment);
    mul_base(&sig.response) == sig.commitment + xi * pk
}

impl SchnorrSig {
    pub fn write(&self, w: &mut Writer) {
        w.point(&self.commitment).scalar(&self.response);
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        Ok(Self { commitment: r.point()?, response: r.scalar()? })
    }

    pub fn to_bytes(&self) -> [u8; SCHNORR_BYTES] {
        let mut w = Writer::new();
        self.write(&mut w);
        w.into_bytes().try_into().expect("64 bytes")
    }
}
