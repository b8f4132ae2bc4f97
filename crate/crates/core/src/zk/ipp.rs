//! Inner-product argument: for public `P`, `Q` and bases `G`, `H`, knowledge
//! of `a`, `b` with `P = <a, G> + <b, H> + <a, b>·Q`, in `2·log₂(n)` points.

#![allow(non_snake_case)]

use crate::group::{GroupElement, Scalar, Transcript};
use curve25519_dalek::traits::VartimeMultiscalarMul;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerProductProof {
    pub L: Vec<GroupElement>,
    pub R: Vec<GroupElement>,
    pub a: Scalar,
    pub b: Scalar,
}

pub fn inner_product(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Proves over power-of-two length vectors.
pub fn prove(
    transcript: &mut Transcript,
    Q: &GroupElement,
    mut G: Vec<GroupElement>,
    mut H: Vec<GroupElement>,
    mut a: Vec<Scalar>,
    mut b: Vec<Scalar>,
) -> InnerProductProof {
    let mut n = G.len();
    assert!(n.is_power_of_two() && H.len() == n && a.len() == n && b.len() == n);
    transcript.append_u64(b"ipp/n", n as u64);
    let mut Ls = Vec::new();
    let mut Rs = Vec::new();
    while n > 1 {
        let h = n / 2;
        let (a_lo, a_hi) = a.split_at(h);
        let (b_lo, b_hi) = b.split_at(h);
        let (G_lo, G_hi) = G.split_at(h);
        let (H_lo, H_hi) = H.split_at(h);
        let c_L = inner_product(a_lo, b_hi);
        let c_R = inner_product(a_hi, b_lo);
        let L = GroupElement::vartime_multiscalar_mul(
            a_lo.iter().chain(b_hi).chain(std::iter::once(&c_L)),
            G_hi.iter().chain(H_lo).chain(std::iter::once(Q)),
        );
        let R = GroupElement::vartime_multiscalar_mul(
            a_hi.iter().chain(b_lo).chain(std::iter::once(&c_R)),
            G_lo.iter().chain(H_hi).chain(std::iter::once(Q)),
        );
        transcript.append_point(b"L", &L);
        transcript.append_point(b"R", &R);
        let u = transcript.challenge_scalar(b"u");
        let u_inv = u.invert();

        let a2: Vec<Scalar> = (0..h).map(|i| a_lo[i] * u + a_hi[i] * u_inv).collect();
        let b2: Vec<Scalar> = (0..h).map(|i| b_lo[i] * u_inv + b_hi[i] * u).collect();
        let G2: Vec<GroupElement> =
            (0..h).map(|i| GroupElement::vartime_multiscalar_mul([u_inv, u], [G_lo[i], G_hi[i]])).collect();
        let H2: Vec<GroupElement> =
            (0..h).map(|i| GroupElement::vartime_multiscalar_mul([u, u_inv], [H_lo[i], H_hi[i]])).collect();
        a = a2;
        b = b2;
        G = G2;
        H = H2;
        Ls.push(L);
        Rs.push(R);
        n = h;
    }
    InnerProductProof { L: Ls, R: Rs, a: a[0], b: b[0] }
}

/// Verification scalars: challenges `u_k` and the per-index base weights
/// `s_i`, where `s_i` multiplies `G_i` and `s_i⁻¹` multiplies `H_i`.
pub struct Verification {
    pub u_sq: Vec<Scalar>,
    pub u_inv_sq: Vec<Scalar>,
    pub s: Vec<Scalar>,
    pub s_inv: Vec<Scalar>,
}

/// Replays the challenges. `None` if the proof length does not match `n`.
pub fn verification_scalars(proof: &InnerProductProof, n: usize, transcript: &mut Transcript) -> Option<Verification> {
    let rounds = proof.L.len();
    if !n.is_power_of_two() || 1usize << rounds != n || proof.R.len() != rounds {
        return None;
    }
    transcript.append_u64(b"ipp/n", n as u64);
    let mut u = Vec::with_capacity(rounds);
    for (L, R) in proof.L.iter().zip(&proof.R) {
        transcript.append_point(b"L", L);
        transcript.append_point(b"R", R);
        u.push(transcript.challenge_scalar(b"u"));
    }
    let mut u_inv = u.clone();
    Scalar::batch_invert(&mut u_inv);
    let s: Vec<Scalar> = (0..n)
        .map(|i| (0..rounds).map(|k| if (i >> (rounds - 1 - k)) & 1 == 1 { u[k] } else { u_inv[k] }).product())
        .collect();
    let mut s_inv = s.clone();
    Scalar::batch_invert(&mut s_inv);
    Some(Verification {
        u_sq: u.iter().map(|x| x * x).collect(),
        u_inv_sq: u_inv.iter().map(|x| x * x).collect(),
        s,
        s_inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{hash_to_group, random_scalar};
    use curve25519_dalek::traits::IsIdentity;
    use rand::rngs::OsRng;

    fn check(
        proof: &InnerProductProof,
        P: &GroupElement,
        Q: &GroupElement,
        G: &[GroupElement],
        H: &[GroupElement],
        t: &mut Transcript,
    ) -> bool {
        let Some(v) = verification_scalars(proof, G.len(), t) else { return false };
        let mut scalars: Vec<Scalar> = v.s.iter().map(|s| proof.a * s).collect();
        scalars.extend(v.s_inv.iter().map(|s| proof.b * s));
        scalars.push(proof.a * proof.b);
        scalars.extend(v.u_sq.iter().map(|x| -x));
        scalars.extend(v.u_inv_sq.iter().map(|x| -x));
        scalars.push(-Scalar::ONE);
        let points =
            G.iter().chain(H).chain(std::iter::once(Q)).chain(&proof.L).chain(&proof.R).chain(std::iter::once(P));
        GroupElement::vartime_multiscalar_mul(scalars, points).is_identity()
    }

    #[test]
    fn completes_and_rejects_tampering() {
        for n in [1usize, 2, 8, 32] {
            let G: Vec<_> = (0..n as u64).map(|i| hash_to_group(b"ipp-test/G", i)).collect();
            let H: Vec<_> = (0..n as u64).map(|i| hash_to_group(b"ipp-test/H", i)).collect();
            let Q = hash_to_group(b"ipp-test/Q", 0);
            let a: Vec<_> = (0..n).map(|_| random_scalar(&mut OsRng)).collect();
            let b: Vec<_> = (0..n).map(|_| random_scalar(&mut OsRng)).collect();
            let P = GroupElement::vartime_multiscalar_mul(
                a.iter().chain(&b).chain(std::iter::once(&inner_product(&a, &b))),
                G.iter().chain(&H).chain(std::iter::once(&Q)),
            );
            let proof = prove(&mut Transcript::new(b"ipp"), &Q, G.clone(), H.clone(), a, b);
            assert_eq!(proof.L.len(), n.trailing_zeros() as usize);
            assert!(check(&proof, &P, &Q, &G, &H, &mut Transcript::new(b"ipp")));
            assert!(!check(&proof, &(P + Q), &Q, &G, &H, &mut Transcript::new(b"ipp")));
            let mut bad = proof.clone();
            bad.a += Scalar::ONE;
            assert!(!check(&bad, &P, &Q, &G, &H, &mut Transcript::new(b"ipp")));
        }
    }
}
