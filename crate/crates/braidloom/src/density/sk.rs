//! Solovay-Kitaev recursion over a word net.
//!
//! Depth 0 is a nearest-entry lookup. Each further level writes the residual
//! between the target and its coarser approximation as a balanced group
//! commutator and recurses on the two halves, contracting the error like
//! `eps -> c eps^{3/2}` once the base net is fine enough. On one-qubit
//! blocks the commutator split is exact (axis-angle construction); in higher
//! dimension it is built from a zero-diagonal Lie-algebra split and verified,
//! falling back to the coarser approximation when the split is
//! ill-conditioned (tiny rotation angles).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::matrix::{
    hermitian_eigen, pd, su_project, unitary_eigen, ComplexMatrix, C_ONE, C_ZERO,
};

use super::su2::{cross3, dot3, normalize3, so3_angle, so3_axis, so3_of, su2_of_axis_angle};
use super::{EpsilonNet, GeneratorSet, GeneratorWord, Synthesis};

const COVERAGE_REQUIRED: f64 = 0.99;
const ANGLE_FLOOR: f64 = 1e-6;

/// Approximate a special unitary by a word over the net's generators.
///
/// Depth 0 works with any net and honestly returns the nearest entry; the
/// recursion itself insists on a certified net (coverage at least 0.99).
pub fn solovay_kitaev(
    target: &ComplexMatrix,
    net: &EpsilonNet,
    gens: &GeneratorSet,
    depth: usize,
) -> Result<Synthesis> {
    if net.entries.is_empty() {
        return Err(Error::Invalid("empty net".into()));
    }
    if net.dim() != target.dim() || gens.dim != target.dim() {
        return Err(Error::DimensionMismatch {
            left: net.dim().max(gens.dim),
            right: target.dim(),
        });
    }
    if depth >= 1 {
        let fraction = net.coverage.map(|c| c.fraction).unwrap_or(0.0);
        if fraction < COVERAGE_REQUIRED {
            return Err(Error::CoverageInsufficient {
                coverage: fraction,
                required: COVERAGE_REQUIRED,
            });
        }
    }
    let starget = su_project(target)?;
    let (word, raw) = recurse(&starget, net, gens, depth)?;
    let distance = pd(&raw, target);
    Ok(Synthesis {
        word,
        matrix: raw,
        distance,
    })
}

#[allow(clippy::only_used_in_recursion)]
fn recurse(
    target: &ComplexMatrix,
    net: &EpsilonNet,
    gens: &GeneratorSet,
    depth: usize,
) -> Result<(GeneratorWord, ComplexMatrix)> {
    if depth == 0 {
        let (idx, _) = net.nearest(target).expect("net is nonempty");
        return Ok((net.entries[idx].word.clone(), net.entries[idx].matrix.clone()));
    }
    let (word_prev, raw_prev) = recurse(target, net, gens, depth - 1)?;
    let su_prev = su_project(&raw_prev)?;
    // align the representative's phase with the target before the split
    let tr = su_prev.inner_trace(target);
    let phase = if tr.norm() > 1e-12 {
        tr / tr.norm()
    } else {
        C_ONE
    };
    let delta = target.mul(&su_prev.adjoint()).scale(C_ONE / phase);

    let Some((v, w)) = balanced_commutator(&delta) else {
        return Ok((word_prev, raw_prev));
    };
    let (vw, vraw) = recurse(&v, net, gens, depth - 1)?;
    let (ww, wraw) = recurse(&w, net, gens, depth - 1)?;
    let word = vw
        .concat(&ww)
        .concat(&vw.inverse())
        .concat(&ww.inverse())
        .concat(&word_prev);
    let raw = vraw
        .mul(&wraw)
        .mul(&vraw.adjoint())
        .mul(&wraw.adjoint())
        .mul(&raw_prev);
    Ok((word, raw))
}

/// Split a near-identity special unitary as a balanced group commutator
/// `delta ~ V W V' W'`.
fn balanced_commutator(delta: &ComplexMatrix) -> Option<(ComplexMatrix, ComplexMatrix)> {
    if delta.dim() == 2 {
        balanced_commutator_su2(delta)
    } else {
        balanced_commutator_general(delta)
    }
}

fn balanced_commutator_su2(delta: &ComplexMatrix) -> Option<(ComplexMatrix, ComplexMatrix)> {
    let r = so3_of(delta);
    let phi = so3_angle(&r);
    if !(ANGLE_FLOOR..=2.0).contains(&phi) {
        return None;
    }
    let axis = so3_axis(&r);

    // rotations by theta about orthogonal axes commutate to a rotation by
    // phi with sin(phi/2) = 2 sin^2(theta/2) sqrt(1 - sin^4(theta/2))
    let goal = (phi / 2.0).sin();
    let f = |theta: f64| {
        let s = (theta / 2.0).sin().powi(2);
        2.0 * s * (1.0 - s * s).sqrt()
    };
    // f increases monotonically up to its peak f = 1 at
    // theta = 2 asin(2^{-1/4}), which covers every goal = sin(phi/2)
    let (mut lo, mut hi) = (0.0f64, 2.0 * 2f64.powf(-0.25).asin());
    if f(hi) < goal {
        return None;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < goal {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);

    let v0 = su2_of_axis_angle([1.0, 0.0, 0.0], theta / 2.0);
    let w0 = su2_of_axis_angle([0.0, 1.0, 0.0], theta / 2.0);
    let k = v0.mul(&w0).mul(&v0.adjoint()).mul(&w0.adjoint());
    let rk = so3_of(&k);
    let k_axis = so3_axis(&rk);

    // rotate the commutator axis onto delta's axis
    let c = dot3(k_axis, axis).clamp(-1.0, 1.0);
    let s = if c > 1.0 - 1e-14 {
        ComplexMatrix::identity(2)
    } else {
        let perp = if c < -1.0 + 1e-14 {
            // antipodal: any axis orthogonal to k_axis works
            let trial = if k_axis[0].abs() < 0.9 {
                [1.0, 0.0, 0.0]
            } else {
                [0.0, 1.0, 0.0]
            };
            normalize3(cross3(k_axis, trial))
        } else {
            normalize3(cross3(k_axis, axis))
        };
        su2_of_axis_angle(perp, c.acos() / 2.0)
    };
    let v = s.mul(&v0).mul(&s.adjoint());
    let w = s.mul(&w0).mul(&s.adjoint());

    let recon = v.mul(&w).mul(&v.adjoint()).mul(&w.adjoint());
    if pd(&recon, delta) > 1e-9 {
        return None;
    }
    Some((v, w))
}

/// Exponential of `i H` for Hermitian `H`.
fn exp_i_hermitian(h: &ComplexMatrix) -> ComplexMatrix {
    let (eigs, v) = hermitian_eigen(h);
    let d = ComplexMatrix::diagonal(
        &eigs
            .iter()
            .map(|&e| Complex64::from_polar(1.0, e))
            .collect::<Vec<_>>(),
    );
    v.mul(&d).mul(&v.adjoint())
}

/// Unitary frame whose conjugation drives the diagonal of a (traceless)
/// Hermitian matrix to zero, built one column at a time from vectors with a
/// vanishing Rayleigh quotient.
fn zero_diagonal_frame(h: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = h.dim();
    if n == 1 {
        return Some(ComplexMatrix::identity(1));
    }
    let (eigs, v) = hermitian_eigen(h);
    let (lo, hi) = (eigs[0], eigs[n - 1]);
    if hi < -1e-12 || lo > 1e-12 {
        return None;
    }
    let (hi, lo) = (hi.max(0.0), lo.min(0.0));
    // x = cos(t) v_max + sin(t) v_min with tan^2 t = hi / (-lo)
    let t = if -lo < 1e-300 {
        0.0
    } else {
        (hi / -lo).sqrt().atan()
    };
    let x: Vec<Complex64> = (0..n)
        .map(|r| v[(r, n - 1)] * t.cos() + v[(r, 0)] * t.sin())
        .collect();

    // complete x to a unitary frame
    let mut cols: Vec<Vec<Complex64>> = vec![x];
    for i in 0..n {
        if cols.len() == n {
            break;
        }
        let mut e = vec![C_ZERO; n];
        e[i] = C_ONE;
        for c in &cols {
            let pr: Complex64 = c.iter().zip(&e).map(|(a, b)| a.conj() * b).sum();
            for (ev, cv) in e.iter_mut().zip(c) {
                *ev -= pr * cv;
            }
        }
        let norm: f64 = e.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for ev in e.iter_mut() {
                *ev /= norm;
            }
            cols.push(e);
        }
    }
    if cols.len() != n {
        return None;
    }
    let q1 = ComplexMatrix::from_fn(n, |r, c| cols[c][r]);
    // recurse on the trailing block
    let h1 = q1.adjoint().mul(h).mul(&q1);
    let mut sub = ComplexMatrix::zeros(n - 1);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            sub[(i, j)] = h1[(i + 1, j + 1)];
        }
    }
    let q_rec = zero_diagonal_frame(&sub)?;
    let mut q2 = ComplexMatrix::identity(n);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            q2[(i + 1, j + 1)] = q_rec[(i, j)];
        }
    }
    Some(q1.mul(&q2))
}

fn balanced_commutator_general(delta: &ComplexMatrix) -> Option<(ComplexMatrix, ComplexMatrix)> {
    let n = delta.dim();
    let (vals, vecs) = unitary_eigen(delta).ok()?;
    let mut args: Vec<f64> = vals.iter().map(|v| v.arg()).collect();
    // pull the branch back so the angles sum to ~zero (det = 1)
    let total: f64 = args.iter().sum();
    let wraps = (total / (2.0 * std::f64::consts::PI)).round() as i64;
    if wraps != 0 {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| args[b].abs().total_cmp(&args[a].abs()));
        for &i in order.iter().take(wraps.unsigned_abs() as usize) {
            args[i] -= 2.0 * std::f64::consts::PI * wraps.signum() as f64;
        }
    }
    let angle_scale = args.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    if angle_scale < ANGLE_FLOOR {
        return None;
    }
    // H Hermitian with delta = exp(i H)
    let mut h = ComplexMatrix::zeros(n);
    for (col, &a) in args.iter().enumerate() {
        for r in 0..n {
            for s in 0..n {
                h[(r, s)] += vecs[(r, col)] * Complex64::new(a, 0.0) * vecs[(s, col)].conj();
            }
        }
    }

    let q = zero_diagonal_frame(&h)?;
    let ht = q.adjoint().mul(&h).mul(&q); // zero diagonal
    // B = i diag(b); solve [B, C] = i Ht entrywise
    let b_diag: Vec<f64> = (0..n).map(|j| j as f64 - (n as f64 - 1.0) / 2.0).collect();
    let mut c = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                // [i diag(b), C]_ij = i (b_i - b_j) C_ij = (i Ht)_ij
                c[(i, j)] = ht[(i, j)] / Complex64::new(b_diag[i] - b_diag[j], 0.0);
            }
        }
    }
    // balance the norms
    let b_norm = b_diag.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let c_norm = crate::numerics::matrix::operator_norm(&c).max(1e-12);
    let sigma = (c_norm / b_norm).sqrt();
    let b_h = ComplexMatrix::diagonal(
        &b_diag
            .iter()
            .map(|&x| Complex64::new(x * sigma, 0.0))
            .collect::<Vec<_>>(),
    );
    let c_scaled = c.scale(Complex64::new(1.0 / sigma, 0.0));
    // C is anti-Hermitian: write C = i Ch with Ch Hermitian
    let ch = c_scaled.scale(Complex64::new(0.0, -1.0));

    let v = q.mul(&exp_i_hermitian(&b_h)).mul(&q.adjoint());
    let w = q.mul(&exp_i_hermitian(&ch)).mul(&q.adjoint());
    let recon = v.mul(&w).mul(&v.adjoint()).mul(&w.adjoint());
    // accept only if the split genuinely improves on doing nothing
    let quality = pd(&recon, delta);
    let scale = pd(delta, &ComplexMatrix::identity(n));
    if quality > 0.5 * scale {
        return None;
    }
    Some((su_project(&v).ok()?, su_project(&w).ok()?))
}
