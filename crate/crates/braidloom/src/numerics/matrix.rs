//! Dense complex matrices at desk scale (dims up to a few hundred).
//!
//! Everything downstream — representation images, encoded gates, net entries —
//! lives in this type. The solvers are deliberately simple: cyclic Jacobi
//! sweeps for Hermitian eigenproblems (and through them singular values), LU
//! for determinants. At these dimensions that is both fast and accurate.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix, row-major, dimension fixed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C_ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C_ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for l in 0..d {
                let a = self.data[i * d + l];
                if a == C_ZERO {
                    continue;
                }
                let rr = &rhs.data[l * d..(l + 1) * d];
                let or = &mut out.data[i * d..(i + 1) * d];
                for j in 0..d {
                    or[j] += a * rr[j];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(&rhs.data) {
            *o += r;
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (o, r) in out.data.iter_mut().zip(&rhs.data) {
            *o -= r;
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for o in out.data.iter_mut() {
            *o *= c;
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        Self::from_fn(d, |i, j| self.data[j * d + i].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// `trace(self^dagger rhs)` without forming the product.
    pub fn inner_trace(&self, rhs: &Self) -> Complex64 {
        assert_eq!(self.dim, rhs.dim);
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let d = self.dim;
        (0..d)
            .map(|i| {
                let row = &self.data[i * d..(i + 1) * d];
                row.iter().zip(v).map(|(a, x)| a * x).sum()
            })
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-entry deviation of `U^dagger U` from the identity.
    pub fn unitary_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut acc = C_ZERO;
                for l in 0..d {
                    acc += self.data[l * d + i].conj() * self.data[l * d + j];
                }
                if i == j {
                    acc -= C_ONE;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_defect() <= tol
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        let (da, db) = (self.dim, rhs.dim);
        Self::from_fn(da * db, |i, j| {
            self.data[(i / db) * da + (j / db)] * rhs.data[(i % db) * db + (j % db)]
        })
    }

    /// Determinant by LU with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        let d = self.dim;
        let mut a = self.data.clone();
        let mut det = C_ONE;
        for col in 0..d {
            let (pivot, pnorm) = (col..d)
                .map(|r| (r, a[r * d + col].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if pnorm == 0.0 {
                return C_ZERO;
            }
            if pivot != col {
                for j in 0..d {
                    a.swap(col * d + j, pivot * d + j);
                }
                det = -det;
            }
            let p = a[col * d + col];
            det *= p;
            for r in col + 1..d {
                let f = a[r * d + col] / p;
                if f == C_ZERO {
                    continue;
                }
                for j in col..d {
                    let v = a[col * d + j];
                    a[r * d + j] -= f * v;
                }
            }
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
///
/// Returns `(eigenvalues, V)` with `A V = V diag(eigenvalues)`; eigenvalues
/// ascending, V unitary (columns are eigenvectors).
pub fn hermitian_eigen(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let d = a.dim();
    let mut m = a.clone();
    let mut v = ComplexMatrix::identity(d);
    let scale = m.frobenius_norm().max(1e-300);

    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..d {
            for q in p + 1..d {
                off += m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = m[(p, q)];
                if apq.norm() <= 1e-18 * scale {
                    continue;
                }
                let phase = apq / apq.norm();
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = I with G[p][p]=c, G[p][q]=s*phase, G[q][p]=-s*conj(phase), G[q][q]=c
                // m <- G^dagger m G ; v <- v G
                for r in 0..d {
                    let mp = m[(r, p)];
                    let mq = m[(r, q)];
                    m[(r, p)] = c * mp - s * phase.conj() * mq;
                    m[(r, q)] = s * phase * mp + c * mq;
                }
                for r in 0..d {
                    let mp = m[(p, r)];
                    let mq = m[(q, r)];
                    m[(p, r)] = c * mp - s * phase * mq;
                    m[(q, r)] = s * phase.conj() * mp + c * mq;
                }
                for r in 0..d {
                    let vp = v[(r, p)];
                    let vq = v[(r, q)];
                    v[(r, p)] = c * vp - s * phase.conj() * vq;
                    v[(r, q)] = s * phase * vp + c * vq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    let eig: Vec<f64> = (0..d).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| eig[i].total_cmp(&eig[j]));
    let eigs: Vec<f64> = order.iter().map(|&i| eig[i]).collect();
    let vs = ComplexMatrix::from_fn(d, |r, c| v[(r, order[c])]);
    (eigs, vs)
}

fn opnorm_2x2(m: &ComplexMatrix) -> f64 {
    // largest eigenvalue of the 2x2 Gram matrix, written through the
    // half-difference to avoid cancellation when the singular values almost
    // coincide (the common case: near-unitary inputs)
    let g11 = m[(0, 0)].norm_sqr() + m[(1, 0)].norm_sqr();
    let g22 = m[(0, 1)].norm_sqr() + m[(1, 1)].norm_sqr();
    let g12 = m[(0, 0)].conj() * m[(0, 1)] + m[(1, 0)].conj() * m[(1, 1)];
    let mid = 0.5 * (g11 + g22);
    let half = 0.5 * (g11 - g22);
    let eig = mid + (half * half + g12.norm_sqr()).sqrt();
    eig.max(0.0).sqrt()
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    match m.dim() {
        0 => 0.0,
        1 => m[(0, 0)].norm(),
        2 => opnorm_2x2(m),
        _ => {
            let g = m.adjoint().mul(m);
            let (eigs, _) = hermitian_eigen(&g);
            eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt()
        }
    }
}

/// Phase-minimized operator-norm distance between two unitaries.
///
/// The generators carry a global phase, so all gate-distance bookkeeping in
/// the crate runs through this. Nonnegative, symmetric, zero iff the inputs
/// agree up to a phase.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ProjectiveDistance {
    pub value: f64,
}

/// `min_phi || U - e^{i phi} V ||` in operator norm.
///
/// The minimizing phase is taken from `trace(V^dagger U)` when that trace is
/// nonzero; when it vanishes the minimum is found by a scan over 10^3 phases.
pub fn proj_distance(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<ProjectiveDistance> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    Ok(ProjectiveDistance {
        value: pd(u, v),
    })
}

pub(crate) fn pd(u: &ComplexMatrix, v: &ComplexMatrix) -> f64 {
    let tr = v.inner_trace(u);
    if tr.norm() > 1e-12 {
        let phase = tr / tr.norm();
        operator_norm(&u.sub(&v.scale(phase)))
    } else {
        pd_scan(u, v, 1000)
    }
}

/// Independent 1-D scan over phases; also serves as the oracle in tests.
pub fn pd_scan(u: &ComplexMatrix, v: &ComplexMatrix, steps: usize) -> f64 {
    let mut best = f64::INFINITY;
    for s in 0..steps {
        let phi = 2.0 * std::f64::consts::PI * (s as f64) / (steps as f64);
        let d = operator_norm(&u.sub(&v.scale(Complex64::from_polar(1.0, phi))));
        best = best.min(d);
    }
    best
}

/// Cheap bounds used to prune pairwise distance checks in net construction:
/// `pd_frobenius / sqrt(dim) <= pd <= pd_frobenius`.
pub(crate) fn pd_frobenius(u: &ComplexMatrix, v: &ComplexMatrix) -> f64 {
    let d = u.dim() as f64;
    let tr = v.inner_trace(u).norm();
    (2.0 * d - 2.0 * tr).max(0.0).sqrt()
}

/// Phase-minimized distance restricted to a subspace: `min_phi ||(U - phi V) P||`
/// where P has the given orthonormal columns. Found by scan plus refinement.
pub fn pd_on_subspace(u: &ComplexMatrix, v: &ComplexMatrix, columns: &[Vec<Complex64>]) -> f64 {
    let d = u.dim();
    let r = columns.len();
    let norm_at = |phi: f64| -> f64 {
        let phase = Complex64::from_polar(1.0, phi);
        // rows of (U - phase V) applied to each column
        let mut rect = vec![vec![C_ZERO; r]; d];
        for (cidx, col) in columns.iter().enumerate() {
            let uc = u.apply(col);
            let vc = v.apply(col);
            for (row, (uci, vci)) in rect.iter_mut().zip(uc.iter().zip(&vc)) {
                row[cidx] = uci - phase * vci;
            }
        }
        // largest singular value of the d x r block via the r x r Gram matrix
        let mut gram = ComplexMatrix::zeros(r);
        for a in 0..r {
            for b in 0..r {
                let acc: Complex64 = rect.iter().map(|row| row[a].conj() * row[b]).sum();
                gram[(a, b)] = acc;
            }
        }
        let (eigs, _) = hermitian_eigen(&gram);
        eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt()
    };

    let steps = 512;
    let mut best = (0.0, f64::INFINITY);
    for s in 0..steps {
        let phi = 2.0 * std::f64::consts::PI * (s as f64) / (steps as f64);
        let val = norm_at(phi);
        if val < best.1 {
            best = (phi, val);
        }
    }
    // golden-section refinement around the best grid point
    let (mut lo, mut hi) = (
        best.0 - 2.0 * std::f64::consts::PI / steps as f64,
        best.0 + 2.0 * std::f64::consts::PI / steps as f64,
    );
    for _ in 0..40 {
        let m1 = lo + (hi - lo) * 0.381966;
        let m2 = hi - (hi - lo) * 0.381966;
        if norm_at(m1) < norm_at(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    norm_at(0.5 * (lo + hi)).min(best.1)
}

/// Map a unitary to its special-unitary representative `(det U)^{-1/d} U`,
/// using the principal branch of the determinant root. Downstream uses are
/// phase-insensitive, so the branch choice is unobservable.
pub fn su_project(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    let defect = u.unitary_defect();
    if defect > 1e-6 {
        return Err(Error::NotUnitary { defect });
    }
    let det = u.determinant();
    let root = Complex64::from_polar(det.norm().powf(1.0 / u.dim() as f64), det.arg() / u.dim() as f64);
    Ok(u.scale(C_ONE / root))
}

/// Eigendecomposition of a unitary matrix.
///
/// U is normal, so it is diagonalized through the Hermitian combination
/// `c U + conj(c) U^dagger` for a generic phase c; the result is verified by
/// residuals and the phase re-drawn on the (measure-zero) collisions.
pub fn unitary_eigen(u: &ComplexMatrix) -> Result<(Vec<Complex64>, ComplexMatrix)> {
    let d = u.dim();
    let ud = u.adjoint();
    for angle in [0.7362947, 1.9148203, 0.2890317, 2.5310819, 1.1230984] {
        let c = Complex64::from_polar(1.0, angle);
        let h = u.scale(c).add(&ud.scale(c.conj()));
        let (_, v) = hermitian_eigen(&h);
        let mut vals = Vec::with_capacity(d);
        let mut ok = true;
        for col in 0..d {
            let vec: Vec<Complex64> = (0..d).map(|r| v[(r, col)]).collect();
            let uv = u.apply(&vec);
            let lambda: Complex64 = vec.iter().zip(&uv).map(|(a, b)| a.conj() * b).sum();
            let res: f64 = uv
                .iter()
                .zip(&vec)
                .map(|(a, b)| (a - lambda * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if res > 1e-8 {
                ok = false;
                break;
            }
            vals.push(lambda);
        }
        if ok {
            return Ok((vals, v));
        }
    }
    Err(Error::Invalid(
        "unitary eigendecomposition did not converge".into(),
    ))
}

/// Standard normal via Box-Muller.
fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of the
/// R diagonal absorbed.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
                .collect()
        })
        .collect();
    // modified Gram-Schmidt
    for j in 0..dim {
        for i in 0..j {
            let proj: Complex64 = cols[i]
                .iter()
                .zip(&cols[j])
                .map(|(a, b)| a.conj() * b)
                .sum();
            let (head, tail) = cols.split_at_mut(j);
            for (cj, ci) in tail[0].iter_mut().zip(&head[i]) {
                *cj -= proj * ci;
            }
        }
        let norm: f64 = cols[j].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let lead = cols[j].iter().find(|c| c.norm() > 1e-12 * norm).copied().unwrap_or(C_ONE);
        let phase = lead / lead.norm();
        for c in cols[j].iter_mut() {
            *c /= norm * phase;
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

pub fn haar_special_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    su_project(&haar_unitary(dim, rng)).expect("haar sample is unitary")
}
