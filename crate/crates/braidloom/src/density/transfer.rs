//! Auxiliary generators and the net transfer.
//!
//! The generator images converge as k grows: their eigenvectors approach a
//! fixed limit frame `M_inf(z)` while the nontrivial eigenvalue behaves as
//! `-exp(-2 i pi / k)`. Auxiliary generators combine the limit frame with
//! the eigenvalues of a fixed `k0`, so one epsilon-net built from them can
//! serve every large k: replace each auxiliary letter by the `2m`-th power
//! of the true generator, where `m` matches the eigenvalue phases, and
//! verify the substitution numerically entry by entry.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::matrix::{pd, ComplexMatrix, C_ONE};
use crate::pathmodel::{enumerate_basis, root_of_unity_base, zigzag_steps};

use super::{EpsilonNet, GeneratorSet, NetEntry, Provenance};

/// The limit frame: (1/sqrt(2z)) [[sqrt(z+1), -sqrt(z-1)], [sqrt(z-1), sqrt(z+1)]].
pub fn m_infinity(z: usize) -> [[f64; 2]; 2] {
    let z = z as f64;
    let s = 1.0 / (2.0 * z).sqrt();
    [
        [s * (z + 1.0).sqrt(), -s * (z - 1.0).sqrt()],
        [s * (z - 1.0).sqrt(), s * (z + 1.0).sqrt()],
    ]
}

fn aux_block(z: usize, k0: usize) -> [[Complex64; 2]; 2] {
    let a_inv = C_ONE / root_of_unity_base(k0);
    let phase = -Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI / k0 as f64);
    let m = m_infinity(z);
    let eig = [phase, C_ONE];
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..2 {
                acc += Complex64::new(m[r][l], 0.0) * eig[l] * Complex64::new(m[c][l], 0.0);
            }
            out[r][c] = a_inv * acc;
        }
    }
    out
}

fn check_k0(k0: usize) -> Result<()> {
    if k0 < 5 || k0 == 6 {
        return Err(Error::ExcludedK(k0));
    }
    Ok(())
}

/// The seven auxiliary generators on the 14-walk space: the block pattern of
/// the large-k generators with `M_inf(z)` frames and fixed-`k0` eigenvalues.
pub fn aux_generators(k0: usize) -> Result<GeneratorSet> {
    check_k0(k0)?;
    // the nonzero pattern stabilizes for k > 5; build it at k = 7
    let basis = enumerate_basis(8, 7, Some(1))?;
    let a_inv = C_ONE / root_of_unity_base(k0);
    let nontrivial_1x1 = a_inv * -Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI / k0 as f64);
    let mut elements = Vec::with_capacity(7);
    for i in 1..=7usize {
        let mut m = ComplexMatrix::zeros(basis.len());
        let mut done = vec![false; basis.len()];
        for (p, path) in basis.paths().iter().enumerate() {
            if done[p] {
                continue;
            }
            let (s1, s2) = (path.steps()[i - 1], path.steps()[i]);
            if s1 == s2 {
                m[(p, p)] = a_inv; // trivial monotone block
                done[p] = true;
                continue;
            }
            let z = path.site_before(i);
            if z == 1 {
                // only the rise-fall walk exists at the bottom site
                m[(p, p)] = nontrivial_1x1;
                done[p] = true;
                continue;
            }
            let mut flipped = path.steps().to_vec();
            flipped[i - 1] = -s1;
            flipped[i] = -s2;
            let q = basis
                .position(&flipped)
                .expect("mixing partner exists in the stabilized pattern");
            // basis order within the block: (rise-fall, fall-rise)
            let (up_idx, down_idx) = if s1 > 0 { (p, q) } else { (q, p) };
            let block = aux_block(z, k0);
            m[(up_idx, up_idx)] = block[0][0];
            m[(up_idx, down_idx)] = block[0][1];
            m[(down_idx, up_idx)] = block[1][0];
            m[(down_idx, down_idx)] = block[1][1];
            done[p] = true;
            done[q] = true;
        }
        elements.push(m);
    }
    GeneratorSet::new(
        format!("aux(k0={k0})"),
        elements,
        Provenance::Auxiliary { k0 },
    )
}

/// The first two auxiliary generators restricted to the 2x2 block holding
/// the zig-zag walk (the same block as [`GeneratorSet::su2_block`]).
pub fn aux_su2_block(k0: usize) -> Result<GeneratorSet> {
    check_k0(k0)?;
    let full = aux_generators(k0)?;
    let basis = enumerate_basis(8, 7, Some(1))?;
    let alpha = basis.position(&zigzag_steps(8)).unwrap();
    let mut partner_steps = zigzag_steps(8);
    partner_steps[1] = 1;
    partner_steps[2] = -1;
    let partner = basis.position(&partner_steps).unwrap();
    let pair = [alpha, partner];
    let elements = full.elements()[..2]
        .iter()
        .map(|m| ComplexMatrix::from_fn(2, |r, c| m[(pair[r], pair[c])]))
        .collect();
    GeneratorSet::new(
        format!("aux-block(k0={k0})"),
        elements,
        Provenance::Auxiliary { k0 },
    )
}

/// The power-matching exponent `m = floor(((2 + k0)/k0) / (4/k))`.
pub fn transfer_exponent(k: usize, k0: usize) -> usize {
    (k * (2 + k0)) / (4 * k0)
}

/// A transferred net with its measured worst-case deviation.
#[derive(Debug, Clone)]
pub struct TransferredNet {
    pub net: EpsilonNet,
    pub max_deviation: f64,
    pub exponent: usize,
}

/// Transfer a commutator net over the auxiliary generators to the true
/// generators at `k`: each auxiliary letter becomes the `2m`-th power of the
/// corresponding `k`-generator, and every transferred entry is verified
/// against its source in projective distance. The commutator structure of
/// the entries makes the global generator phases cancel; the verification
/// is numeric rather than assumed, and refuses when `k` is too small to
/// keep the worst entry within the net's epsilon.
pub fn transfer_net(
    hat_net: &EpsilonNet,
    k_gens: &GeneratorSet,
    k: usize,
    k0: usize,
) -> Result<TransferredNet> {
    check_k0(k0)?;
    if k <= k0 {
        return Err(Error::Invalid(format!(
            "transfer requires k > k0, got k = {k}, k0 = {k0}"
        )));
    }
    let m = transfer_exponent(k, k0);
    let mut entries = Vec::with_capacity(hat_net.entries.len());
    let mut max_deviation: f64 = 0.0;
    for (idx, hat) in hat_net.entries.iter().enumerate() {
        let word = hat.word.letterwise_power(2 * m);
        let matrix = k_gens.evaluate(&word);
        let deviation = pd(&matrix, &hat.matrix);
        if deviation > hat_net.epsilon {
            return Err(Error::TransferDeviation {
                entry: idx,
                deviation,
                limit: hat_net.epsilon,
            });
        }
        max_deviation = max_deviation.max(deviation);
        entries.push(NetEntry { word, matrix });
    }
    Ok(TransferredNet {
        net: EpsilonNet {
            epsilon: hat_net.epsilon,
            entries,
            coverage: hat_net.coverage,
        },
        max_deviation,
        exponent: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::net::build_commutator_net;
    use crate::numerics::matrix::unitary_eigen;
    use crate::pathmodel::ModelParams;

    #[test]
    fn limit_frame_values() {
        let m1 = m_infinity(1);
        assert!((m1[0][0] - 1.0).abs() < 1e-12);
        assert!(m1[0][1].abs() < 1e-12);
        assert!(m1[1][0].abs() < 1e-12);
        let m2 = m_infinity(2);
        assert!((m2[0][0] - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((m2[0][1] + 0.5).abs() < 1e-12);
        assert!((m2[1][0] - 0.5).abs() < 1e-12);
        assert!((m2[1][1] - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn aux_generators_are_unitary_with_fixed_eigenvalues() {
        let gens = aux_generators(7).unwrap();
        assert_eq!(gens.len(), 7);
        assert_eq!(gens.dim, 14);
        let a_inv = C_ONE / root_of_unity_base(7);
        let nontrivial = a_inv * -Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI / 7.0);
        for g in gens.elements() {
            assert!(g.unitary_defect() < 1e-10);
            let (vals, _) = unitary_eigen(g).unwrap();
            for v in vals {
                let d1 = (v - a_inv).norm();
                let d2 = (v - nontrivial).norm();
                assert!(d1 < 1e-9 || d2 < 1e-9, "eigenvalue {v}");
            }
        }
        assert!(matches!(aux_generators(6), Err(Error::ExcludedK(6))));
        assert!(matches!(aux_generators(4), Err(Error::ExcludedK(4))));
    }

    #[test]
    fn exponent_arithmetic() {
        assert_eq!(transfer_exponent(70, 7), 22);
        assert_eq!(transfer_exponent(35, 7), 11);
        assert_eq!(transfer_exponent(140, 7), 45);
    }

    #[test]
    fn frames_converge_to_the_limit() {
        // || M_k(z) - M_inf(z) || decreasing in k for z = 2, 3
        for z in [2usize, 3] {
            let mut previous = f64::INFINITY;
            for k in [20usize, 40, 80, 160] {
                let params = ModelParams::new(k).unwrap();
                let (lp, lm) = (params.lambda(z + 1), params.lambda(z - 1));
                let norm = (lp + lm).sqrt();
                let mk = [
                    [lp.sqrt() / norm, -(lm.sqrt()) / norm],
                    [lm.sqrt() / norm, lp.sqrt() / norm],
                ];
                let mi = m_infinity(z);
                let mut dev: f64 = 0.0;
                for r in 0..2 {
                    for c in 0..2 {
                        dev = dev.max((mk[r][c] - mi[r][c]).abs());
                    }
                }
                assert!(dev < previous, "k = {k}, z = {z}");
                previous = dev;
            }
        }
    }

    #[test]
    fn eigenvalue_truncation_bound_at_k70() {
        let k = 70;
        let k0 = 7;
        let m = transfer_exponent(k, k0);
        let target = Complex64::from_polar(
            1.0,
            -std::f64::consts::PI * (2.0 + k0 as f64) / k0 as f64,
        );
        let achieved = Complex64::from_polar(1.0, -4.0 * m as f64 * std::f64::consts::PI / k as f64);
        assert!((target - achieved).norm() < 4.0 * std::f64::consts::PI / k as f64);
    }

    #[test]
    fn transferred_block_net_tracks_its_source() {
        let hat_gens = aux_su2_block(7).unwrap();
        let hat_net = build_commutator_net(&hat_gens, 0.3, 2);
        assert!(hat_net.entries.len() > 3);
        let k = 140;
        let k_gens = GeneratorSet::su2_block(k).unwrap();
        let transferred = transfer_net(&hat_net, &k_gens, k, 7).unwrap();
        assert_eq!(transferred.net.entries.len(), hat_net.entries.len());
        assert!(
            transferred.max_deviation < 0.1,
            "deviation {}",
            transferred.max_deviation
        );
        // words are certificates after substitution too
        for e in transferred.net.entries.iter().take(5) {
            assert!(pd(&k_gens.evaluate(&e.word), &e.matrix) < 1e-10);
        }
    }
}
