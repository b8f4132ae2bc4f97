//! Aggregated Bulletproofs range proofs over coin commitments.
//!
//! Commitments are `V_j = γ_j·G + v_j·H` with the value on `H` and the
//! blinding on `G`, so a coin's `Y` component is used as-is. One proof covers
//! `m` commitments (a power of two) at `bits` bits each.

#![allow(non_snake_case)]

use super::ipp::{self, InnerProductProof};
use crate::error::{Error, Result};
use crate::group::{
    mul_base, random_scalar, value_base, GeneratorSet, GroupElement, Reader, Scalar, Transcript, Writer,
};
use crate::ise::commit;
use curve25519_dalek::traits::{IsIdentity, VartimeMultiscalarMul};
use rand::{CryptoRng, RngCore};

pub const TAG_RANGE: u8 = 0x12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeProof {
    pub A: GroupElement,
    pub S: GroupElement,
    pub T1: GroupElement,
    pub T2: GroupElement,
    pub t_x: Scalar,
    pub t_x_blinding: Scalar,
    pub e_blinding: Scalar,
    pub ipp: InnerProductProof,
}

/// Atom count for `m` commitments at `bits` bits.
pub fn range_atoms(bits: usize, m: usize) -> usize {
    9 + 2 * (bits * m).trailing_zeros() as usize
}

fn check_shape(gens: &GeneratorSet, bits: usize, m: usize) -> Result<()> {
    if !(1..=64).contains(&bits) || !bits.is_power_of_two() {
        return Err(Error::Bounds("range width must be a power of two up to 64"));
    }
    if m == 0 || !m.is_power_of_two() {
        return Err(Error::BadBatch(m));
    }
    if bits * m > gens.range_gens.len() {
        return Err(Error::Bounds("aggregation exceeds range generators"));
    }
    Ok(())
}

fn powers(x: Scalar, n: usize) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(n);
    let mut p = Scalar::ONE;
    for _ in 0..n {
        out.push(p);
        p *= x;
    }
    out
}

fn absorb_statement(t: &mut Transcript, bits: usize, commitments: &[GroupElement]) {
    t.append_message(b"proof", b"range");
    t.append_u64(b"bits", bits as u64);
    t.append_points(b"V", commitments);
}

/// `z^{2+j}·2^{i mod bits}` for `i = j·bits + (i mod bits)`.
fn z_two_terms(z: Scalar, bits: usize, m: usize) -> Vec<Scalar> {
    let twos = powers(Scalar::from(2u64), bits);
    let mut zj = z * z;
    let mut out = Vec::with_capacity(bits * m);
    for _ in 0..m {
        out.extend(twos.iter().map(|t| zj * t));
        zj *= z;
    }
    out
}

/// Proves every `amounts[j] < 2^bits`. Returns the proof and the commitments
/// it verifies against.
pub fn prove_range<R: RngCore + CryptoRng>(
    gens: &GeneratorSet,
    amounts: &[u64],
    blinders: &[Scalar],
    bits: usize,
    transcript: &mut Transcript,
    rng: &mut R,
) -> Result<(RangeProof, Vec<GroupElement>)> {
    check_shape(gens, bits, amounts.len())?;
    if let Some(&a) = amounts.iter().find(|&&a| bits < 64 && a >> bits != 0) {
        return Err(Error::AmountRange(a));
    }
    Ok(prove_inner(gens, amounts, blinders, bits, transcript, rng))
}

/// Runs the prover on the low `bits` bits of each amount while committing to
/// the full amounts. Range-soundness tests use it to build the strongest
/// honest-looking forgery for out-of-range values.
#[doc(hidden)]
pub fn prove_range_unchecked<R: RngCore + CryptoRng>(
    gens: &GeneratorSet,
    amounts: &[u64],
    blinders: &[Scalar],
    bits: usize,
    transcript: &mut Transcript,
    rng: &mut R,
) -> Result<(RangeProof, Vec<GroupElement>)> {
    check_shape(gens, bits, amounts.len())?;
    Ok(prove_inner(gens, amounts, blinders, bits, transcript, rng))
}

fn prove_inner<R: RngCore + CryptoRng>(
    gens: &GeneratorSet,
    amounts: &[u64],
    blinders: &[Scalar],
    bits: usize,
    transcript: &mut Transcript,
    rng: &mut R,
) -> (RangeProof, Vec<GroupElement>) {
    assert_eq!(amounts.len(), blinders.len());
    let m = amounts.len();
    let nm = bits * m;
    let h = value_base();
    let G_vec = gens.range_g(nm);
    let H_vec = gens.range_h(nm);
    let V: Vec<GroupElement> = amounts.iter().zip(blinders).map(|(a, g)| commit(*a, g)).collect();
    absorb_statement(transcript, bits, &V);

    let a_L: Vec<Scalar> = amounts.iter().flat_map(|a| (0..bits).map(move |i| Scalar::from((a >> i) & 1))).collect();
    let a_R: Vec<Scalar> = a_L.iter().map(|b| b - Scalar::ONE).collect();

    let alpha = random_scalar(rng);
    let A =
        mul_base(&alpha) + GroupElement::vartime_multiscalar_mul(a_L.iter().chain(&a_R), G_vec.iter().chain(&H_vec));
    let s_L: Vec<Scalar> = (0..nm).map(|_| random_scalar(rng)).collect();
    let s_R: Vec<Scalar> = (0..nm).map(|_| random_scalar(rng)).collect();
    let rho = random_scalar(rng);
    let S = mul_base(&rho) + GroupElement::vartime_multiscalar_mul(s_L.iter().chain(&s_R), G_vec.iter().chain(&H_vec));

    transcript.append_point(b"A", &A);
    transcript.append_point(b"S", &S);
    let y = transcript.challenge_scalar(b"y");
    let z = transcript.challenge_scalar(b"z");

    let y_pow = powers(y, nm);
    let zt = z_two_terms(z, bits, m);
    let l0: Vec<Scalar> = a_L.iter().map(|a| a - z).collect();
    let l1 = s_L;
    let r0: Vec<Scalar> = (0..nm).map(|i| y_pow[i] * (a_R[i] + z) + zt[i]).collect();
    let r1: Vec<Scalar> = (0..nm).map(|i| y_pow[i] * s_R[i]).collect();
    let t1 = ipp::inner_product(&l0, &r1) + ipp::inner_product(&l1, &r0);
    let t2 = ipp::inner_product(&l1, &r1);

    let tau1 = random_scalar(rng);
    let tau2 = random_scalar(rng);
    let T1 = t1 * h + mul_base(&tau1);
    let T2 = t2 * h + mul_base(&tau2);
    transcript.append_point(b"T1", &T1);
    transcript.append_point(b"T2", &T2);
    let x = transcript.challenge_scalar(b"x");

    let l: Vec<Scalar> = (0..nm).map(|i| l0[i] + l1[i] * x).collect();
    let r: Vec<Scalar> = (0..nm).map(|i| r0[i] + r1[i] * x).collect();
    let t_x = ipp::inner_product(&l, &r);
    let z_pows = powers(z, m + 2);
    let t_x_blinding =
        tau2 * x * x + tau1 * x + blinders.iter().enumerate().map(|(j, g)| z_pows[j + 2] * g).sum::<Scalar>();
    let e_blinding = alpha + rho * x;

    transcript.append_scalar(b"t_x", &t_x);
    transcript.append_scalar(b"t_x_blinding", &t_x_blinding);
    transcript.append_scalar(b"e_blinding", &e_blinding);
    let w = transcript.challenge_scalar(b"w");
    let Q = w * h;

    let y_inv_pow = powers(y.invert(), nm);
    let H_prime: Vec<GroupElement> = H_vec.iter().zip(&y_inv_pow).map(|(p, s)| s * p).collect();
    let ipp = ipp::prove(transcript, &Q, G_vec, H_prime, l, r);

    (RangeProof { A, S, T1, T2, t_x, t_x_blinding, e_blinding, ipp }, V)
}

pub fn verify_range(
    gens: &GeneratorSet,
    commitments: &[GroupElement],
    bits: usize,
    proof: &RangeProof,
    transcript: &mut Transcript,
) -> bool {
    let m = commitments.len();
    if check_shape(gens, bits, m).is_err() {
        return false;
    }
    let nm = bits * m;
    let h = value_base();
    absorb_statement(transcript, bits, commitments);
    transcript.append_point(b"A", &proof.A);
    transcript.append_point(b"S", &proof.S);
    let y = transcript.challenge_scalar(b"y");
    let z = transcript.challenge_scalar(b"z");
    transcript.append_point(b"T1", &proof.T1);
    transcript.append_point(b"T2", &proof.T2);
    let x = transcript.challenge_scalar(b"x");
    transcript.append_scalar(b"t_x", &proof.t_x);
    transcript.append_scalar(b"t_x_blinding", &proof.t_x_blinding);
    transcript.append_scalar(b"e_blinding", &proof.e_blinding);
    let w = transcript.challenge_scalar(b"w");

    let y_pow = powers(y, nm);
    let z_pows = powers(z, m + 3);
    let sum_y: Scalar = y_pow.iter().sum();
    let sum_two = Scalar::from(((1u128 << bits) - 1) as u64);
    let delta = (z - z * z) * sum_y - (0..m).map(|j| z_pows[j + 3]).sum::<Scalar>() * sum_two;

    // t_x·H + τ_x·G = Σ z^{2+j}·V_j + δ·H + x·T1 + x²·T2
    let mut scalars = vec![proof.t_x - delta, proof.t_x_blinding, -x, -(x * x)];
    let mut points = vec![h, crate::group::base_point(), proof.T1, proof.T2];
    for (j, v) in commitments.iter().enumerate() {
        scalars.push(-z_pows[j + 2]);
        points.push(*v);
    }
    if !GroupElement::vartime_multiscalar_mul(&scalars, &points).is_identity() {
        return false;
    }

    let Some(v) = ipp::verification_scalars(&proof.ipp, nm, transcript) else { return false };
    let G_vec = gens.range_g(nm);
    let H_vec = gens.range_h(nm);
    let y_inv_pow = powers(y.invert(), nm);
    let zt = z_two_terms(z, bits, m);

    // a·Σ s_i·G_i + b·Σ s_i⁻¹·y^{-i}·H_i + (ab − t_x)·w·H + μ·G
    //   = A + x·S − z·ΣG_i + Σ (z + zt_i·y^{-i})·H_i + Σ u²·L + Σ u⁻²·R
    let (a, b) = (proof.ipp.a, proof.ipp.b);
    let mut scalars = Vec::with_capacity(2 * nm + 2 * v.u_sq.len() + 4);
    let mut points = Vec::with_capacity(scalars.capacity());
    scalars.extend(v.s.iter().map(|s| a * s + z));
    points.extend_from_slice(&G_vec[..nm]);
    for i in 0..nm {
        scalars.push(b * v.s_inv[i] * y_inv_pow[i] - z - zt[i] * y_inv_pow[i]);
        points.push(H_vec[i]);
    }
    scalars.push((a * b - proof.t_x) * w);
    points.push(h);
    scalars.push(proof.e_blinding);
    points.push(crate::group::base_point());
    scalars.push(-Scalar::ONE);
    points.push(proof.A);
    scalars.push(-x);
    points.push(proof.S);
    for (k, (L, R)) in proof.ipp.L.iter().zip(&proof.ipp.R).enumerate() {
        scalars.push(-v.u_sq[k]);
        points.push(*L);
        scalars.push(-v.u_inv_sq[k]);
        points.push(*R);
    }
    GroupElement::vartime_multiscalar_mul(&scalars, &points).is_identity()
}

impl RangeProof {
    pub fn atoms(&self) -> usize {
        9 + 2 * self.ipp.L.len()
    }

    pub fn write(&self, w: &mut Writer) {
        w.proof_header(TAG_RANGE, self.atoms());
        for p in [&self.A, &self.S, &self.T1, &self.T2] {
            w.point(p);
        }
        w.scalar(&self.t_x).scalar(&self.t_x_blinding).scalar(&self.e_blinding);
        for (l, r) in self.ipp.L.iter().zip(&self.ipp.R) {
            w.point(l).point(r);
        }
        w.scalar(&self.ipp.a).scalar(&self.ipp.b);
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        let atoms = r.proof_header_any(TAG_RANGE)?;
        if atoms < 9 || (atoms - 9) % 2 != 0 || atoms > 9 + 2 * 16 {
            return Err(r.error("bad range proof atom count"));
        }
        let rounds = (atoms - 9) / 2;
        let (A, S, T1, T2) = (r.point()?, r.point()?, r.point()?, r.point()?);
        let (t_x, t_x_blinding, e_blinding) = (r.scalar()?, r.scalar()?, r.scalar()?);
        let mut L = Vec::with_capacity(rounds);
        let mut R = Vec::with_capacity(rounds);
        for _ in 0..rounds {
            L.push(r.point()?);
            R.push(r.point()?);
        }
        let ipp = InnerProductProof { L, R, a: r.scalar()?, b: r.scalar()? };
        Ok(Self { A, S, T1, T2, t_x, t_x_blinding, e_blinding, ipp })
    }
}
