//! The path-model representation of the braid group.
//!
//! For an integer `k >= 3` the model acts on n-step walks over the line graph
//! with sites `1..=k-1` that start at site 1 and never leave the graph. The
//! Temperley-Lieb generator images `Phi_i` mix only walks that differ in
//! steps `i, i+1`, with weights built from `lambda_j = sin(j pi / k)`, and the
//! braid generator images are `rho_i = A Phi_i + A^{-1} I` with
//! `A = i e^{-i pi/(2k)}`. Since `rho_i` never changes the endpoint of a
//! walk, the representation splits into fixed-endpoint sectors; everything
//! braid-expectation related runs in the endpoint-1 sector where the zig-zag
//! walk lives.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::braid::{plat_writhe, BraidWord};
use crate::error::{Error, Result};
use crate::numerics::matrix::{ComplexMatrix, C_ONE, C_ZERO};

/// `A = i e^{-i pi/(2k)}`, the evaluation base shared by the bracket oracle
/// and the unitary model.
pub fn root_of_unity_base(k: usize) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_2 - std::f64::consts::PI / (2.0 * k as f64))
}

/// Fixed numeric data of the model at a given `k`.
#[derive(Debug, Clone)]
pub struct ModelParams {
    pub k: usize,
    pub theta: f64,
    pub a: Complex64,
    pub d: f64,
    lambda: Vec<f64>,
}

impl ModelParams {
    pub fn new(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::Invalid(format!("k must be at least 3, got {k}")));
        }
        let theta = std::f64::consts::PI / k as f64;
        let lambda = (0..=k)
            .map(|j| {
                if j == 0 || j == k {
                    0.0
                } else {
                    (j as f64 * theta).sin()
                }
            })
            .collect();
        let params = Self {
            k,
            theta,
            a: root_of_unity_base(k),
            d: 2.0 * theta.cos(),
            lambda,
        };
        debug_assert!(params.self_check() < 1e-12);
        Ok(params)
    }

    /// `lambda_j = sin(j pi / k)`; exactly zero at `j = 0` and `j = k`.
    pub fn lambda(&self, j: usize) -> f64 {
        self.lambda[j]
    }

    /// Deviation of `-(A^2 + A^{-2})` from `d`.
    pub fn self_check(&self) -> f64 {
        let a2 = self.a * self.a;
        (-(a2 + 1.0 / a2) - Complex64::new(self.d, 0.0)).norm()
    }
}

/// One walk: its steps (+1 up, -1 down) and the derived site sequence
/// `z_1..z_{n+1}` with `z_1 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathState {
    steps: Vec<i8>,
    sites: Vec<usize>,
}

impl PathState {
    pub fn steps(&self) -> &[i8] {
        &self.steps
    }

    /// Site before taking step `i` (1-based), i.e. `z_i`.
    pub fn site_before(&self, i: usize) -> usize {
        self.sites[i - 1]
    }

    pub fn endpoint(&self) -> usize {
        *self.sites.last().unwrap()
    }
}

fn sites_of(steps: &[i8]) -> Vec<usize> {
    let mut sites = Vec::with_capacity(steps.len() + 1);
    let mut z = 1i64;
    sites.push(1);
    for &s in steps {
        z += s as i64;
        sites.push(z as usize);
    }
    sites
}

/// Canonically ordered basis of n-step walks from site 1, optionally with a
/// fixed endpoint. The order is lexicographic on the step sequence with
/// up before down.
#[derive(Debug, Clone)]
pub struct PathBasis {
    pub n: usize,
    pub k: usize,
    pub endpoint: Option<usize>,
    paths: Vec<PathState>,
    index: HashMap<Vec<i8>, usize>,
}

impl PathBasis {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> &[PathState] {
        &self.paths
    }

    pub fn path(&self, i: usize) -> &PathState {
        &self.paths[i]
    }

    pub fn position(&self, steps: &[i8]) -> Option<usize> {
        self.index.get(steps).copied()
    }
}

pub fn enumerate_basis(n: usize, k: usize, endpoint: Option<usize>) -> Result<PathBasis> {
    if k < 3 {
        return Err(Error::Invalid(format!("k must be at least 3, got {k}")));
    }
    if let Some(e) = endpoint {
        if e < 1 || e > k - 1 {
            return Err(Error::EndpointOutOfRange {
                endpoint: e,
                max: k - 1,
            });
        }
    }
    let mut paths = Vec::new();
    let mut steps = Vec::with_capacity(n);
    walk(1, n, k, endpoint, &mut steps, &mut paths);
    let index = paths
        .iter()
        .enumerate()
        .map(|(i, p): (usize, &PathState)| (p.steps.clone(), i))
        .collect();
    Ok(PathBasis {
        n,
        k,
        endpoint,
        paths,
        index,
    })
}

fn walk(
    site: usize,
    remaining: usize,
    k: usize,
    endpoint: Option<usize>,
    steps: &mut Vec<i8>,
    out: &mut Vec<PathState>,
) {
    if remaining == 0 {
        if endpoint.is_none_or(|e| e == site) {
            let steps = steps.clone();
            let sites = sites_of(&steps);
            out.push(PathState { steps, sites });
        }
        return;
    }
    if site < k - 1 {
        steps.push(1);
        walk(site + 1, remaining - 1, k, endpoint, steps, out);
        steps.pop();
    }
    if site > 1 {
        steps.push(-1);
        walk(site - 1, remaining - 1, k, endpoint, steps, out);
        steps.pop();
    }
}

fn check_generator_index(i: usize, n: usize) -> Result<()> {
    if i < 1 || i + 1 > n {
        return Err(Error::GeneratorOutOfRange {
            index: i,
            max: n.saturating_sub(1),
        });
    }
    Ok(())
}

/// The Temperley-Lieb generator image `Phi_i` on the given basis.
///
/// Columns are source paths. A path descending then ascending at steps
/// `i, i+1` keeps weight `lambda_{z-1}/lambda_z` and couples to its
/// step-flipped partner with weight `sqrt(lambda_{z+1} lambda_{z-1})/lambda_z`;
/// ascending-then-descending paths mirror this with `lambda_{z+1}/lambda_z`
/// on the diagonal; monotone pairs are annihilated. All entries are real.
pub fn phi_matrix(i: usize, basis: &PathBasis) -> Result<ComplexMatrix> {
    check_generator_index(i, basis.n)?;
    let params = ModelParams::new(basis.k)?;
    let mut m = ComplexMatrix::zeros(basis.len());
    for (col, p) in basis.paths.iter().enumerate() {
        let s1 = p.steps[i - 1];
        let s2 = p.steps[i];
        if s1 == s2 {
            continue;
        }
        let z = p.site_before(i);
        let diag = if s1 < 0 {
            params.lambda(z - 1) / params.lambda(z)
        } else {
            params.lambda(z + 1) / params.lambda(z)
        };
        m[(col, col)] = Complex64::new(diag, 0.0);
        let off = (params.lambda(z + 1) * params.lambda(z - 1)).sqrt() / params.lambda(z);
        if off > 0.0 {
            let mut flipped = p.steps.clone();
            flipped[i - 1] = -s1;
            flipped[i] = -s2;
            let row = basis
                .position(&flipped)
                .expect("nonzero coupling implies the partner path is legal");
            m[(row, col)] = Complex64::new(off, 0.0);
        }
    }
    Ok(m)
}

/// `rho(sigma_i^{sign}) = (A Phi_i + A^{-1} I)^{sign}` on the basis; the
/// inverse is the conjugate transpose.
pub fn rho_generator(i: usize, basis: &PathBasis, sign: i8) -> Result<ComplexMatrix> {
    let params = ModelParams::new(basis.k)?;
    let phi = phi_matrix(i, basis)?;
    let mut m = phi.scale(params.a);
    let a_inv = C_ONE / params.a;
    for idx in 0..basis.len() {
        m[(idx, idx)] += a_inv;
    }
    if sign >= 0 {
        Ok(m)
    } else {
        Ok(m.adjoint())
    }
}

/// Cache of generator images for repeated word evaluation on one basis.
pub struct RhoCache<'a> {
    basis: &'a PathBasis,
    forward: Vec<ComplexMatrix>,
    inverse: Vec<ComplexMatrix>,
}

impl<'a> RhoCache<'a> {
    pub fn new(basis: &'a PathBasis) -> Result<Self> {
        let mut forward = Vec::with_capacity(basis.n.saturating_sub(1));
        let mut inverse = Vec::with_capacity(basis.n.saturating_sub(1));
        for i in 1..basis.n {
            let f = rho_generator(i, basis, 1)?;
            inverse.push(f.adjoint());
            forward.push(f);
        }
        Ok(Self {
            basis,
            forward,
            inverse,
        })
    }

    pub fn basis(&self) -> &PathBasis {
        self.basis
    }

    pub fn generator(&self, letter: i32) -> &ComplexMatrix {
        let idx = letter.unsigned_abs() as usize - 1;
        if letter > 0 {
            &self.forward[idx]
        } else {
            &self.inverse[idx]
        }
    }

    /// `rho(b) |v>` without forming the full product.
    pub fn apply_word(&self, b: &BraidWord, v: &[Complex64]) -> Vec<Complex64> {
        let mut v = v.to_vec();
        for &letter in b.letters().iter().rev() {
            v = self.generator(letter).apply(&v);
        }
        v
    }
}

/// Ordered product of generator images over the word's letters, first letter
/// leftmost, so that `rho_of_word(compose(b1, b2)) = rho_of_word(b1) * rho_of_word(b2)`.
pub fn rho_of_word(b: &BraidWord, basis: &PathBasis) -> Result<ComplexMatrix> {
    if b.strands() != basis.n {
        return Err(Error::StrandMismatch {
            left: b.strands(),
            right: basis.n,
        });
    }
    for &l in b.letters() {
        check_generator_index(l.unsigned_abs() as usize, basis.n)?;
    }
    let cache = RhoCache::new(basis)?;
    let mut acc = ComplexMatrix::identity(basis.len());
    for &letter in b.letters() {
        acc = acc.mul(cache.generator(letter));
    }
    Ok(acc)
}

/// Step sequence of the zig-zag walk `1 -> 2 -> 1 -> 2 -> ...`.
pub fn zigzag_steps(n: usize) -> Vec<i8> {
    (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect()
}

/// `<alpha| rho(b) |alpha>` on the endpoint-1 sector.
///
/// Valid restriction: the generators preserve endpoints and the zig-zag walk
/// ends at site 1.
pub fn alpha_expectation(b: &BraidWord, k: usize) -> Result<Complex64> {
    let n = b.strands();
    if !n.is_multiple_of(2) {
        return Err(Error::OddStrands(n));
    }
    let basis = enumerate_basis(n, k, Some(1))?;
    for &l in b.letters() {
        check_generator_index(l.unsigned_abs() as usize, n)?;
    }
    let alpha = basis
        .position(&zigzag_steps(n))
        .expect("the zig-zag walk is always legal");
    let mut v = vec![C_ZERO; basis.len()];
    v[alpha] = C_ONE;
    let cache = RhoCache::new(&basis)?;
    let w = cache.apply_word(b, &v);
    Ok(w[alpha])
}

/// `N = sum_l lambda_l dim(H_{n,k,l})`.
pub fn big_n(n: usize, k: usize) -> Result<f64> {
    let params = ModelParams::new(k)?;
    let basis = enumerate_basis(n, k, None)?;
    let mut counts = vec![0usize; k];
    for p in basis.paths() {
        counts[p.endpoint()] += 1;
    }
    Ok((1..k).map(|l| params.lambda(l) * counts[l] as f64).sum())
}

/// The approximation scale `Delta = (lambda_1 / N) d^{n-1} (-A)^{3w}`.
pub fn delta_scale(b: &BraidWord, k: usize) -> Result<Complex64> {
    let n = b.strands();
    if !n.is_multiple_of(2) {
        return Err(Error::OddStrands(n));
    }
    let params = ModelParams::new(k)?;
    let w = plat_writhe(b)?;
    let n_total = big_n(n, k)?;
    let scale = params.lambda(1) / n_total * params.d.powi(n as i32 - 1);
    Ok((-params.a).powi(3 * w as i32) * scale)
}
