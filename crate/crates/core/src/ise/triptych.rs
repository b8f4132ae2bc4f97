//! Triptych linkable ring signatures with logarithmic proof size.
//!
//! The proof shows knowledge of an index `l` and a scalar `w` such that the
//! ring point `R_l = w·G` and `w·J = V`, where `J` is the published key image.
//! Plain signatures use `R_k = P_k`, `V = U` and `w = sk`, so `J = sk⁻¹·U`.
//!
//! Spend signatures also take per-member commitments `Q_k` and a pseudo-output
//! `C'`: with a transcript weight `μ` the ring becomes
//! `R_k = P_k + μ·(Q_k − C')` and `V = U + μ·K` where `K = s·J`. This proves
//! `P_l = sk·G` and `Q_l − C' = s·G` at the same hidden index.

#![allow(non_snake_case)]

use crate::error::{Error, Result};
use crate::group::{
    link_base, mul_base, random_scalar, GeneratorSet, GroupElement, Reader, Scalar, Transcript, Writer,
};
use curve25519_dalek::traits::{IsIdentity, VartimeMultiscalarMul};
use rand::{CryptoRng, RngCore};

/// Digit base of ring indices; rings hold `RING_BASE^m` members.
pub const RING_BASE: usize = 2;

/// Number of digits `m` for a ring of `len` members, rejecting sizes that
/// are not a power of the base or that would make the proof trivial.
pub fn ring_depth(len: usize) -> Result<usize> {
    if len < RING_BASE {
        return Err(Error::BadRingSize(len));
    }
    let mut m = 0;
    let mut size = 1;
    while size < len {
        size *= RING_BASE;
        m += 1;
    }
    if size != len {
        return Err(Error::BadRingSize(len));
    }
    Ok(m)
}

/// Pads by repeating the last member up to the next power of the base.
pub fn padded_len(len: usize) -> usize {
    let mut size = RING_BASE;
    while size < len {
        size *= RING_BASE;
    }
    size
}

fn digits(mut k: usize, m: usize) -> Vec<usize> {
    (0..m)
        .map(|_| {
            let d = k % RING_BASE;
            k /= RING_BASE;
            d
        })
        .collect()
}

/// Atom count of a core proof at depth `m`.
pub fn core_atoms(m: usize) -> usize {
    4 + 2 * m + m * (RING_BASE - 1) + 3
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriptychProof {
    pub A: GroupElement,
    pub B: GroupElement,
    pub C: GroupElement,
    pub D: GroupElement,
    pub X: Vec<GroupElement>,
    pub Y: Vec<GroupElement>,
    /// `f_{j,i}` for `i ≥ 1`, row-major; `f_{j,0}` is implied.
    pub f: Vec<Scalar>,
    pub z_A: Scalar,
    pub z_C: Scalar,
    pub z: Scalar,
}

impl TriptychProof {
    pub fn depth(&self) -> usize {
        self.X.len()
    }

    pub fn write(&self, w: &mut Writer) {
        for p in [&self.A, &self.B, &self.C, &self.D] {
            w.point(p);
        }
        self.X.iter().chain(&self.Y).for_each(|p| {
            w.point(p);
        });
        self.f.iter().for_each(|s| {
            w.scalar(s);
        });
        w.scalar(&self.z_A).scalar(&self.z_C).scalar(&self.z);
    }

    pub fn read(r: &mut Reader<'_>, m: usize) -> Result<Self> {
        Ok(Self {
            A: r.point()?,
            B: r.point()?,
            C: r.point()?,
            D: r.point()?,
            X: r.points(m)?,
            Y: r.points(m)?,
            f: r.scalars(m * (RING_BASE - 1))?,
            z_A: r.scalar()?,
            z_C: r.scalar()?,
            z: r.scalar()?,
        })
    }
}

/// Optional commitment shift applied to every ring member.
#[derive(Clone, Copy)]
pub struct Shift<'a> {
    pub commitments: &'a [GroupElement],
    pub offset: GroupElement,
    pub weight: Scalar,
}

/// The ring as a linear form over its public points.
#[derive(Clone, Copy)]
pub struct RingPoints<'a> {
    pub keys: &'a [GroupElement],
    pub shift: Option<Shift<'a>>,
}

impl RingPoints<'_> {
    fn len(&self) -> usize {
        self.keys.len()
    }

    /// Appends the terms of `Σ_k c_k·R_k` to a multiscalar accumulator.
    fn push_terms(&self, coeffs: &[Scalar], scalars: &mut Vec<Scalar>, points: &mut Vec<GroupElement>) {
        scalars.extend_from_slice(coeffs);
        points.extend_from_slice(self.keys);
        if let Some(s) = &self.shift {
            scalars.extend(coeffs.iter().map(|c| c * s.weight));
            points.extend_from_slice(s.commitments);
            scalars.push(-(s.weight * coeffs.iter().sum::<Scalar>()));
            points.push(s.offset);
        }
    }
}

fn matrix_commit(gens: &GeneratorSet, entries: &[Scalar], blind: &Scalar) -> GroupElement {
    mul_base(blind) + GroupElement::vartime_multiscalar_mul(entries, &gens.triptych_gens[..entries.len()])
}

fn absorb(t: &mut Transcript, J: &GroupElement, V: &GroupElement, p: &TriptychProof) {
    t.append_message(b"triptych", b"core");
    t.append_point(b"J", J);
    t.append_point(b"V", V);
    t.append_point(b"A", &p.A);
    t.append_point(b"B", &p.B);
    t.append_point(b"C", &p.C);
    t.append_point(b"D", &p.D);
    t.append_points(b"X", &p.X);
    t.append_points(b"Y", &p.Y);
}

fn check_gens(gens: &GeneratorSet, m: usize) -> Result<()> {
    if gens.triptych_gens.len() < m * RING_BASE {
        return Err(Error::Bounds("ring exceeds matrix commitment generators"));
    }
    Ok(())
}

/// Proves `R_index = w·G ∧ w·J = V`.
#[allow(clippy::too_many_arguments)]
pub fn prove_core<R: RngCore + CryptoRng>(
    gens: &GeneratorSet,
    ring: RingPoints<'_>,
    index: usize,
    w: &Scalar,
    J: &GroupElement,
    V: &GroupElement,
    transcript: &mut Transcript,
    rng: &mut R,
) -> Result<TriptychProof> {
    let N = ring.len();
    let m = ring_depth(N)?;
    check_gens(gens, m)?;
    if index >= N {
        return Err(Error::BadIndex);
    }
    let n = RING_BASE;
    let l = digits(index, m);

    let r_A = random_scalar(rng);
    let r_B = random_scalar(rng);
    let r_C = random_scalar(rng);
    let r_D = random_scalar(rng);

    let mut a = vec![Scalar::ZERO; m * n];
    let mut sigma = vec![Scalar::ZERO; m * n];
    for j in 0..m {
        let mut row_sum = Scalar::ZERO;
        for i in 1..n {
            let v = random_scalar(rng);
            a[j * n + i] = v;
            row_sum += v;
        }
        a[j * n] = -row_sum;
        sigma[j * n + l[j]] = Scalar::ONE;
    }
    let c_entries: Vec<Scalar> = a.iter().zip(&sigma).map(|(a, s)| a * (Scalar::ONE - s - s)).collect();
    let d_entries: Vec<Scalar> = a.iter().map(|a| -(a * a)).collect();

    let A = matrix_commit(gens, &a, &r_A);
    let B = matrix_commit(gens, &sigma, &r_B);
    let C = matrix_commit(gens, &c_entries, &r_C);
    let D = matrix_commit(gens, &d_entries, &r_D);

    // Coefficients of p_k(x) = Π_j (σ_{j,k_j}·x + a_{j,k_j}), lowest degree first.
    let mut coeffs = vec![vec![Scalar::ZERO; N]; m + 1];
    let mut poly = vec![Scalar::ZERO; m + 1];
    for k in 0..N {
        poly.iter_mut().for_each(|c| *c = Scalar::ZERO);
        poly[0] = Scalar::ONE;
        for (j, &kj) in digits(k, m).iter().enumerate() {
            let (s, c) = (sigma[j * n + kj], a[j * n + kj]);
            for deg in (0..=j + 1).rev() {
                let lower = if deg > 0 { poly[deg - 1] * s } else { Scalar::ZERO };
                poly[deg] = poly[deg] * c + lower;
            }
        }
        for (row, c) in coeffs.iter_mut().zip(&poly) {
            row[k] = *c;
        }
    }

    let rho: Vec<Scalar> = (0..m).map(|_| random_scalar(rng)).collect();
    let mut X = Vec::with_capacity(m);
    for j in 0..m {
        let mut scalars = Vec::with_capacity(2 * N + 2);
        let mut points = Vec::with_capacity(2 * N + 2);
        ring.push_terms(&coeffs[j], &mut scalars, &mut points);
        scalars.push(rho[j]);
        points.push(crate::group::base_point());
        X.push(GroupElement::vartime_multiscalar_mul(&scalars, &points));
    }
    let Y: Vec<GroupElement> = rho.iter().map(|r| r * J).collect();

    let mut proof =
        TriptychProof { A, B, C, D, X, Y, f: Vec::new(), z_A: Scalar::ZERO, z_C: Scalar::ZERO, z: Scalar::ZERO };
    absorb(transcript, J, V, &proof);
    let xi = transcript.challenge_scalar(b"xi");

    proof.f =
        (0..m).flat_map(|j| (1..n).map(move |i| (j, i))).map(|(j, i)| sigma[j * n + i] * xi + a[j * n + i]).collect();
    proof.z_A = r_A + xi * r_B;
    proof.z_C = xi * r_C + r_D;
    let mut xi_pow = Scalar::ONE;
    let mut rho_sum = Scalar::ZERO;
    for r in &rho {
        rho_sum += r * xi_pow;
        xi_pow *= xi;
    }
    proof.z = w * xi_pow - rho_sum;
    Ok(proof)
}

pub fn verify_core(
    gens: &GeneratorSet,
    ring: RingPoints<'_>,
    J: &GroupElement,
    V: &GroupElement,
    proof: &TriptychProof,
    transcript: &mut Transcript,
) -> bool {
    let N = ring.len();
    let Ok(m) = ring_depth(N) else { return false };
    if check_gens(gens, m).is_err()
        || proof.X.len() != m
        || proof.Y.len() != m
        || proof.f.len() != m * (RING_BASE - 1)
        || J.is_identity()
    {
        return false;
    }
    if let Some(s) = &ring.shift {
        if s.commitments.len() != N {
            return false;
        }
    }
    let n = RING_BASE;
    absorb(transcript, J, V, proof);
    let xi = transcript.challenge_scalar(b"xi");

    let mut f = vec![Scalar::ZERO; m * n];
    for j in 0..m {
        let mut row_sum = Scalar::ZERO;
        for i in 1..n {
            let v = proof.f[j * (n - 1) + i - 1];
            f[j * n + i] = v;
            row_sum += v;
        }
        f[j * n] = xi - row_sum;
    }

    if matrix_commit(gens, &f, &proof.z_A) != proof.A + xi * proof.B {
        return false;
    }
    let f_quad: Vec<Scalar> = f.iter().map(|v| v * (xi - v)).collect();
    if matrix_commit(gens, &f_quad, &proof.z_C) != xi * proof.C + proof.D {
        return false;
    }

    let t: Vec<Scalar> =
        (0..N).map(|k| digits(k, m).iter().enumerate().map(|(j, &kj)| f[j * n + kj]).product()).collect();
    let mut xi_pows = Vec::with_capacity(m + 1);
    let mut p = Scalar::ONE;
    for _ in 0..=m {
        xi_pows.push(p);
        p *= xi;
    }

    let mut scalars = Vec::with_capacity(2 * N + m + 2);
    let mut points = Vec::with_capacity(2 * N + m + 2);
    ring.push_terms(&t, &mut scalars, &mut points);
    scalars.extend(xi_pows[..m].iter().map(|x| -x));
    points.extend_from_slice(&proof.X[..m]);
    scalars.push(-proof.z);
    points.push(crate::group::base_point());
    if !GroupElement::vartime_multiscalar_mul(&scalars, &points).is_identity() {
        return false;
    }

    let mut scalars = vec![xi_pows[m], -proof.z];
    let mut points = vec![*V, *J];
    scalars.extend(xi_pows[..m].iter().map(|x| -x));
    points.extend_from_slice(&proof.Y[..m]);
    GroupElement::vartime_multiscalar_mul(&scalars, &points).is_identity()
}

/// Linkable ring signature: key image `J` and a Triptych proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSig {
    pub key_image: GroupElement,
    pub proof: TriptychProof,
}

impl RingSig {
    pub fn atoms(&self) -> usize {
        1 + core_atoms(self.proof.depth())
    }

    pub fn write(&self, w: &mut Writer) {
        w.point(&self.key_image);
        self.proof.write(w);
    }

    pub fn read(r: &mut Reader<'_>, m: usize) -> Result<Self> {
        Ok(Self { key_image: r.point()?, proof: TriptychProof::read(r, m)? })
    }
}

/// `J = sk⁻¹·U`.
pub fn key_image(sk: &Scalar) -> GroupElement {
    sk.invert() * link_base()
}

fn lrs_transcript(ring: &[GroupElement], msg: &[u8]) -> Transcript {
    let mut t = Transcript::new(b"dringct/lrs");
    t.append_points(b"ring", ring);
    t.append_message(b"msg", msg);
    t
}

pub fn sign_ring<R: RngCore + CryptoRng>(
    gens: &GeneratorSet,
    ring: &[GroupElement],
    index: usize,
    sk: &Scalar,
    msg: &[u8],
    rng: &mut R,
) -> Result<RingSig> {
    ring_depth(ring.len())?;
    if ring.get(index) != Some(&mul_base(sk)) {
        return Err(Error::BadIndex);
    }
    let J = key_image(sk);
    let mut t = lrs_transcript(ring, msg);
    let keys = RingPoints { keys: ring, shift: None };
    let proof = prove_core(gens, keys, index, sk, &J, &link_base(), &mut t, rng)?;
    Ok(RingSig { key_image: J, proof })
}

pub fn verify_ring(gens: &GeneratorSet, ring: &[GroupElement], msg: &[u8], sig: &RingSig) -> bool {
    let mut t = lrs_transcript(ring, msg);
    verify_core(gens, RingPoints { keys: ring, shift: None }, &sig.key_image, &link_base(), &sig.proof, &mut t)
}

/// Same signer iff the key images are equal.
pub fn link(a: &RingSig, b: &RingSig) -> bool {
    a.key_image == b.key_image
}

/// Spend authorization inside a transaction: ring signature plus the
/// pseudo-output `C'` and auxiliary image `K = (k_l − k')·J` that tie the
/// hidden member's coin to `C'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpendSig {
    pub pseudo_out: GroupElement,
    pub aux_image: GroupElement,
    pub sig: RingSig,
}

/// Atom count of a spend signature at depth `m`.
pub fn spend_atoms(m: usize) -> usize {
    3 + core_atoms(m)
}

impl SpendSig {
    pub fn key_image(&self) -> &GroupElement {
        &self.sig.key_image
    }

    pub fn atoms(&self) -> usize {
        spend_atoms(self.sig.proof.depth())
    }

    pub fn write(&self, w: &mut Writer) {
        w.point(&self.pseudo_out).point(&self.aux_image);
        self.sig.write(w);
    }

    pub fn read(r: &mut Reader<'_>, m: usize) -> Result<Self> {
        Ok(Self { pseudo_out: r.point()?, aux_image: r.point()?, sig: RingSig::read(r, m)? })
    }
}

fn spend_weight(t: &mut Transcript, J: &GroupElement, K: &GroupElement, pseudo_out: &GroupElement) -> Scalar {
    t.append_message(b"spend", b"");
    t.append_point(b"J", J);
    t.append_point(b"K", K);
    t.append_point(b"C'", pseudo_out);
    t.challenge_scalar(b"mu")
}

/// Signs for ring member `index` whose coin commitment is `commitments[index]`
/// with blinding `coin_key`; the pseudo-output is blinded by `pseudo_key`.
#[allow(clippy::too_many_arguments)]
pub fn sign_spend<R: RngCore + CryptoRng>(
    gens: &GeneratorSet,
    keys: &[GroupElement],
    commitments: &[GroupElement],
    index: usize,
    sk: &Scalar,
    coin_key: &Scalar,
    pseudo_out: GroupElement,
    pseudo_key: &Scalar,
    transcript: &mut Transcript,
    rng: &mut R,
) -> Result<SpendSig> {
    ring_depth(keys.len())?;
    if keys.len() != commitments.len() {
        return Err(Error::BadRingSize(commitments.len()));
    }
    if keys.get(index) != Some(&mul_base(sk)) {
        return Err(Error::BadIndex);
    }
    let s = coin_key - pseudo_key;
    if commitments[index] - pseudo_out != mul_base(&s) {
        return Err(Error::BadSpendKey);
    }
    let J = key_image(sk);
    let K = s * J;
    let mu = spend_weight(transcript, &J, &K, &pseudo_out);
    let ring = RingPoints { keys, shift: Some(Shift { commitments, offset: pseudo_out, weight: mu }) };
    let V = link_base() + mu * K;
    let proof = prove_core(gens, ring, index, &(sk + mu * s), &J, &V, transcript, rng)?;
    Ok(SpendSig { pseudo_out, aux_image: K, sig: RingSig { key_image: J, proof } })
}

pub fn verify_spend(
    gens: &GeneratorSet,
    keys: &[GroupElement],
    commitments: &[GroupElement],
    spend: &SpendSig,
    transcript: &mut Transcript,
) -> bool {
    if keys.len() != commitments.len() {
        return false;
    }
    let J = spend.sig.key_image;
    let mu = spend_weight(transcript, &J, &spend.aux_image, &spend.pseudo_out);
    let ring = RingPoints { keys, shift: Some(Shift { commitments, offset: spend.pseudo_out, weight: mu }) };
    let V = link_base() + mu * spend.aux_image;
    verify_core(gens, ring, &J, &V, &spend.sig.proof, transcript)
}
