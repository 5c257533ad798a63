//! Constructive bridge machinery.
//!
//! Given density on two orthogonal subspaces A and B (dim B > dim A >= 1)
//! and one unitary W that mixes them, any unitary on the direct sum can be
//! approximated by a finite product of exact SU(A) elements, exact SU(B)
//! elements and W. The engine is a vector-moving iteration: align the A- and
//! B-components of a state with two marked vectors `u*`, `v*`, apply the
//! (corrected) bridge, collapse the B-part back onto `v*`, and repeat; the
//! A-amplitude decays geometrically with the bridge's diagonal rate `|a|`.
//! Synthesis then factors a target through one eigenvector at a time,
//! absorbing the remainder into an exact element of the bigger subspace.

use std::cell::RefCell;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::matrix::{
    haar_special_unitary, hermitian_eigen, pd, su_project, unitary_eigen, ComplexMatrix, C_ONE,
    C_ZERO,
};

// ---------------------------------------------------------------------------
// ambient vector helpers
// ---------------------------------------------------------------------------

type Vector = Vec<Complex64>;

fn vdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn vnorm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn vscale(a: &[Complex64], c: Complex64) -> Vector {
    a.iter().map(|x| x * c).collect()
}

fn vsub(a: &[Complex64], b: &[Complex64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn vnormalize(a: &[Complex64]) -> Vector {
    vscale(a, C_ONE / vnorm(a))
}

/// An orthonormal frame spanning a subspace of the ambient space.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn new(ambient: usize, vectors: Vec<Vector>) -> Result<Self> {
        let mut basis: Vec<Vector> = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch {
                    left: v.len(),
                    right: ambient,
                });
            }
            let mut v = v;
            for b in &basis {
                let c = vdot(b, &v);
                v = vsub(&v, &vscale(b, c));
            }
            let n = vnorm(&v);
            if n < 1e-10 {
                return Err(Error::Invalid(
                    "subspace vectors are linearly dependent".into(),
                ));
            }
            basis.push(vscale(&v, C_ONE / Complex64::new(n, 0.0)));
        }
        Ok(Self { ambient, basis })
    }

    /// Span of standard basis vectors.
    pub fn standard(ambient: usize, indices: &[usize]) -> Self {
        let basis = indices
            .iter()
            .map(|&i| {
                let mut v = vec![C_ZERO; ambient];
                v[i] = C_ONE;
                v
            })
            .collect();
        Self { ambient, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Orthogonal projection onto the subspace, in ambient coordinates.
    pub fn project(&self, v: &[Complex64]) -> Vector {
        let mut out = vec![C_ZERO; self.ambient];
        for b in &self.basis {
            let c = vdot(b, v);
            for i in 0..self.ambient {
                out[i] += c * b[i];
            }
        }
        out
    }

    fn union(&self, other: &Subspace) -> Subspace {
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().cloned());
        Subspace {
            ambient: self.ambient,
            basis,
        }
    }

    fn from_frame(ambient: usize, basis: Vec<Vector>) -> Subspace {
        Subspace { ambient, basis }
    }
}

/// A unitary mapping `x` to `y` exactly, supported on `span{x, y}` (plus a
/// determinant-compensating phase on a second frame vector when the two are
/// parallel). Returns `None` only when `dim(within) = 1` and a nontrivial
/// phase would be required, which SU(1) cannot supply.
fn frame_rotation(within: &Subspace, x: &[Complex64], y: &[Complex64]) -> Option<ComplexMatrix> {
    let ambient = within.ambient();
    let a = vdot(x, y);
    let perp = vsub(y, &vscale(x, a));
    let b = vnorm(&perp);
    let mut m = ComplexMatrix::identity(ambient);
    if b > 1e-12 {
        let e2 = vscale(&perp, C_ONE / Complex64::new(b, 0.0));
        let bb = Complex64::new(b, 0.0);
        for i in 0..ambient {
            for j in 0..ambient {
                m[(i, j)] += (a - C_ONE) * x[i] * x[j].conj()
                    + bb * e2[i] * x[j].conj()
                    - bb * x[i] * e2[j].conj()
                    + (a.conj() - C_ONE) * e2[i] * e2[j].conj();
            }
        }
        Some(m)
    } else {
        // y = a x with |a| = 1
        if (a - C_ONE).norm() < 1e-14 {
            return Some(m);
        }
        // compensate the determinant on another frame vector
        let other = within
            .basis()
            .iter()
            .find(|v| vdot(v, x).norm() < 0.999)?;
        let mut e2: Vector = {
            let c = vdot(x, other);
            vnormalize(&vsub(other, &vscale(x, c)))
        };
        if vnorm(&e2) < 0.5 {
            return None;
        }
        e2 = vnormalize(&e2);
        for i in 0..ambient {
            for j in 0..ambient {
                m[(i, j)] += (a - C_ONE) * x[i] * x[j].conj()
                    + (a.conj() - C_ONE) * e2[i] * e2[j].conj();
            }
        }
        Some(m)
    }
}

// ---------------------------------------------------------------------------
// factor sequences over the alphabet SU(A), SU(B), W
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub enum BridgeFactor {
    /// Exact special unitary supported on the small subspace.
    InA(ComplexMatrix),
    /// Exact special unitary supported on the big subspace.
    InB(ComplexMatrix),
    Bridge,
    BridgeInverse,
}

/// A product of bridge factors, listed in application order (the first
/// factor acts first on a state).
#[derive(Debug, Clone, Default)]
pub struct FactorSequence {
    pub factors: Vec<BridgeFactor>,
}

impl FactorSequence {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn evaluate(&self, w: &ComplexMatrix) -> ComplexMatrix {
        let dim = w.dim();
        let w_inv = w.adjoint();
        let mut acc = ComplexMatrix::identity(dim);
        for f in &self.factors {
            let m = match f {
                BridgeFactor::InA(m) | BridgeFactor::InB(m) => m,
                BridgeFactor::Bridge => w,
                BridgeFactor::BridgeInverse => &w_inv,
            };
            acc = m.mul(&acc);
        }
        acc
    }

    pub fn inverse(&self) -> Self {
        let factors = self
            .factors
            .iter()
            .rev()
            .map(|f| match f {
                BridgeFactor::InA(m) => BridgeFactor::InA(m.adjoint()),
                BridgeFactor::InB(m) => BridgeFactor::InB(m.adjoint()),
                BridgeFactor::Bridge => BridgeFactor::BridgeInverse,
                BridgeFactor::BridgeInverse => BridgeFactor::Bridge,
            })
            .collect();
        Self { factors }
    }

    pub fn extended(mut self, other: &Self) -> Self {
        self.factors.extend(other.factors.iter().cloned());
        self
    }
}

// ---------------------------------------------------------------------------
// the vector-moving iteration
// ---------------------------------------------------------------------------

/// Everything fixed for one (A, B, W) triple.
struct Engine<'a> {
    sa: &'a Subspace,
    sb: &'a Subspace,
    w: &'a ComplexMatrix,
}

/// The marked vectors and corrected bridge of the iteration.
struct Setup {
    v_star: Vector,
    u_star: Vector,
    /// factors of the corrected bridge (application order)
    w_tilde: FactorSequence,
    w_tilde_mat: ComplexMatrix,
    /// geometric decay rate of the A-amplitude
    rate: f64,
}

/// Realizes an arbitrary unitary of the big subspace in the factor alphabet.
type BigRotor<'e> = &'e dyn Fn(&ComplexMatrix) -> Result<(FactorSequence, ComplexMatrix)>;

/// A mover built inside a generalized pair of subspaces: the small side, the
/// big side, a bridge given as a factor sequence, and a synthesizer that
/// realizes arbitrary unitaries of the big side in the factor alphabet.
struct MoverSpace<'e> {
    small: Subspace,
    big: Subspace,
    bridge_seq: FactorSequence,
    bridge_mat: ComplexMatrix,
    big_rotor: BigRotor<'e>,
}

impl<'e> MoverSpace<'e> {
    fn setup(&self) -> Result<Setup> {
        let (da, db) = (self.small.dim(), self.big.dim());
        // v*: a big-side vector the bridge keeps inside the big side
        let mut m = ComplexMatrix::zeros(db.max(da));
        // use a db x db Gram of the small-side components
        let cols: Vec<Vector> = self
            .big
            .basis()
            .iter()
            .map(|b| {
                let wb = self.bridge_mat.apply(b);
                self.small.project(&wb)
            })
            .collect();
        for i in 0..db {
            for j in 0..db {
                m[(i, j)] = vdot(&cols[i], &cols[j]);
            }
        }
        let (eigs, vecs) = hermitian_eigen(&m);
        debug_assert!(eigs[0].abs() < 1e-8, "null space must exist: {:?}", eigs);
        let mut v_star = vec![C_ZERO; self.small.ambient()];
        for (j, b) in self.big.basis().iter().enumerate() {
            let c = vecs[(j, 0)];
            for i in 0..v_star.len() {
                v_star[i] += c * b[i];
            }
        }
        let v_star = vnormalize(&v_star);

        // u*: the small-side vector the bridge moves hardest into the big side
        let mut n = ComplexMatrix::zeros(da);
        let acols: Vec<Vector> = self
            .small
            .basis()
            .iter()
            .map(|a| {
                let wa = self.bridge_mat.apply(a);
                self.big.project(&wa)
            })
            .collect();
        for i in 0..da {
            for j in 0..da {
                n[(i, j)] = vdot(&acols[i], &acols[j]);
            }
        }
        let (eigs_n, vecs_n) = hermitian_eigen(&n);
        let sigma = eigs_n.last().copied().unwrap_or(0.0).max(0.0).sqrt();
        if sigma < 1e-8 {
            return Err(Error::NotABridge {
                max_projection: sigma,
            });
        }
        let mut u_star = vec![C_ZERO; self.small.ambient()];
        for (j, a) in self.small.basis().iter().enumerate() {
            let c = vecs_n[(j, da - 1)];
            for i in 0..u_star.len() {
                u_star[i] += c * a[i];
            }
        }
        let u_star = vnormalize(&u_star);

        // correct the bridge so its A-component at u* points back at u*
        let wu = self.bridge_mat.apply(&u_star);
        let pa = self.small.project(&wu);
        let rate = vnorm(&pa);
        let mut w_tilde = self.bridge_seq.clone();
        let mut w_tilde_mat = self.bridge_mat.clone();
        if rate > 1e-12 {
            if let Some(u_corr) = frame_rotation(&self.small, &vnormalize(&pa), &u_star) {
                w_tilde.factors.push(BridgeFactor::InA(u_corr.clone()));
                w_tilde_mat = u_corr.mul(&w_tilde_mat);
            }
        }
        Ok(Setup {
            v_star,
            u_star,
            w_tilde,
            w_tilde_mat,
            rate,
        })
    }

    /// Drive `psi` toward `v*`. Returns the factors, the reached state, and
    /// the A-residual recorded before each bridge application.
    fn descend(
        &self,
        setup: &Setup,
        psi: &[Complex64],
        eps: f64,
        fixed_iterations: Option<usize>,
    ) -> Result<(FactorSequence, Vector, Vec<f64>)> {
        let mut factors = FactorSequence::empty();
        let mut current = vnormalize(psi);
        let mut residuals = Vec::new();

        let align = |current: &mut Vector,
                         factors: &mut FactorSequence,
                         from_part: Vector,
                         to: &Vector,
                         small_side: bool|
         -> Result<()> {
            let n = vnorm(&from_part);
            if n < 1e-12 {
                return Ok(());
            }
            let dir = vnormalize(&from_part);
            let overlap = vdot(&dir, to);
            if (overlap - C_ONE).norm() < 1e-14 {
                return Ok(());
            }
            let space = if small_side { &self.small } else { &self.big };
            let Some(r) = frame_rotation(space, &dir, to) else {
                return Ok(()); // one-dimensional with a phase: it rides along
            };
            if small_side {
                factors.factors.push(BridgeFactor::InA(r.clone()));
                *current = r.apply(current);
            } else {
                let (seq, mat) = (self.big_rotor)(&r)?;
                factors.factors.extend(seq.factors);
                *current = mat.apply(current);
            }
            Ok(())
        };

        // initial alignment of both components
        let pa = self.small.project(&current);
        align(&mut current, &mut factors, pa, &setup.u_star, true)?;
        let pb = self.big.project(&current);
        align(&mut current, &mut factors, pb, &setup.v_star, false)?;

        let max_iter = fixed_iterations.unwrap_or_else(|| {
            let r = setup.rate.clamp(1e-12, 1.0 - 1e-9);
            ((eps / 2.0).ln() / r.ln()).ceil().max(1.0) as usize + 4
        });
        for _ in 0..max_iter {
            let residual = vnorm(&self.small.project(&current));
            residuals.push(residual);
            if fixed_iterations.is_none() && residual <= eps {
                break;
            }
            // bridge
            factors.factors.extend(setup.w_tilde.factors.iter().cloned());
            current = setup.w_tilde_mat.apply(&current);
            // collapse the B-part onto v*, re-align the A-part onto u*
            let pb = self.big.project(&current);
            align(&mut current, &mut factors, pb, &setup.v_star, false)?;
            let pa = self.small.project(&current);
            align(&mut current, &mut factors, pa, &setup.u_star, true)?;
        }
        Ok((factors, current, residuals))
    }

    /// Mover `psi -> phi` (both unit vectors of the ambient space).
    fn mover(&self, psi: &[Complex64], phi: &[Complex64], eps: f64) -> Result<FactorSequence> {
        if vnorm(&vsub(psi, phi)) < 1e-13 {
            return Ok(FactorSequence::empty());
        }
        let setup = self.setup()?;
        let (s_psi, _, _) = self.descend(&setup, psi, eps / 2.0, None)?;
        let (s_phi, _, _) = self.descend(&setup, phi, eps / 2.0, None)?;
        Ok(s_psi.extended(&s_phi.inverse()))
    }
}

fn atomic_big_rotor() -> impl Fn(&ComplexMatrix) -> Result<(FactorSequence, ComplexMatrix)> {
    |m: &ComplexMatrix| {
        Ok((
            FactorSequence {
                factors: vec![BridgeFactor::InB(m.clone())],
            },
            m.clone(),
        ))
    }
}

fn validate(sa: &Subspace, sb: &Subspace, w: &ComplexMatrix) -> Result<()> {
    if sa.ambient() != w.dim() || sb.ambient() != w.dim() {
        return Err(Error::DimensionMismatch {
            left: sa.ambient().max(sb.ambient()),
            right: w.dim(),
        });
    }
    if sb.dim() <= sa.dim() || sa.dim() == 0 {
        return Err(Error::Invalid(format!(
            "bridge machinery needs dim B > dim A >= 1, got {} and {}",
            sb.dim(),
            sa.dim()
        )));
    }
    if sa.dim() + sb.dim() != w.dim() {
        return Err(Error::Invalid(
            "the subspaces must decompose the ambient space".into(),
        ));
    }
    for a in sa.basis() {
        for b in sb.basis() {
            if vdot(a, b).norm() > 1e-10 {
                return Err(Error::Invalid("subspaces are not orthogonal".into()));
            }
        }
    }
    let defect = w.unitary_defect();
    if defect > 1e-8 {
        return Err(Error::NotUnitary { defect });
    }
    Ok(())
}

/// Approximate a transformation taking `psi` to `phi` by a finite product of
/// exact SU(A), SU(B) elements and the bridge.
pub fn bridge_move(
    sa: &Subspace,
    sb: &Subspace,
    w: &ComplexMatrix,
    psi: &[Complex64],
    phi: &[Complex64],
    eps: f64,
) -> Result<FactorSequence> {
    validate(sa, sb, w)?;
    let rotor = atomic_big_rotor();
    let space = MoverSpace {
        small: sa.clone(),
        big: sb.clone(),
        bridge_seq: FactorSequence {
            factors: vec![BridgeFactor::Bridge],
        },
        bridge_mat: w.clone(),
        big_rotor: &rotor,
    };
    let seq = space.mover(psi, phi, eps)?;
    let got = seq.evaluate(w).apply(psi);
    let err = vnorm(&vsub(&got, phi));
    if err > eps {
        // one refinement pass with a tighter internal budget
        let seq = space.mover(psi, phi, eps / 8.0)?;
        return Ok(seq);
    }
    Ok(seq)
}

/// Diagnostics of the raw descent: the A-residual before each bridge
/// application and the predicted geometric rate `|a|`.
#[derive(Debug, Clone)]
pub struct BridgeTrace {
    pub residuals: Vec<f64>,
    pub rate: f64,
}

pub fn bridge_move_trace(
    sa: &Subspace,
    sb: &Subspace,
    w: &ComplexMatrix,
    psi: &[Complex64],
    iterations: usize,
) -> Result<BridgeTrace> {
    validate(sa, sb, w)?;
    let rotor = atomic_big_rotor();
    let space = MoverSpace {
        small: sa.clone(),
        big: sb.clone(),
        bridge_seq: FactorSequence {
            factors: vec![BridgeFactor::Bridge],
        },
        bridge_mat: w.clone(),
        big_rotor: &rotor,
    };
    let setup = space.setup()?;
    let (_, _, residuals) = space.descend(&setup, psi, 0.0, Some(iterations))?;
    Ok(BridgeTrace {
        residuals,
        rate: setup.rate,
    })
}

/// Approximate an arbitrary special unitary on `A (+) B` by a finite product
/// of exact SU(A), SU(B) elements and the bridge, working one adapted basis
/// vector of A at a time.
pub fn bridge_synthesize(
    sa: &Subspace,
    sb: &Subspace,
    w: &ComplexMatrix,
    target: &ComplexMatrix,
    eps: f64,
) -> Result<FactorSequence> {
    validate(sa, sb, w)?;
    if target.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            left: target.dim(),
            right: w.dim(),
        });
    }
    let target = su_project(target)?;
    let engine = Engine { sa, sb, w };

    // trivial cases
    if pd(&target, &ComplexMatrix::identity(target.dim())) < 1e-12 {
        return Ok(FactorSequence::empty());
    }
    let acts_only_on = |space: &Subspace, other: &Subspace| -> bool {
        other.basis().iter().all(|v| {
            let tv = target.apply(v);
            vnorm(&vsub(&tv, v)) < 1e-12
        }) && space.basis().iter().all(|v| {
            let tv = target.apply(v);
            vnorm(&other.project(&tv)) < 1e-12
        })
    };
    if acts_only_on(sb, sa) {
        return Ok(FactorSequence {
            factors: vec![BridgeFactor::InB(target.clone())],
        });
    }
    if acts_only_on(sa, sb) {
        return Ok(FactorSequence {
            factors: vec![BridgeFactor::InA(target.clone())],
        });
    }

    let rng = RefCell::new(ChaCha8Rng::seed_from_u64(0x6272696467656c21));
    let mut best: Option<(FactorSequence, f64)> = None;
    for attempt in 0..3 {
        let eps_internal = eps / (8.0 * 4f64.powi(attempt));
        let seq = synth_level(&engine, sa.dim(), &target, eps_internal, &rng)?;
        let measured = pd(&seq.evaluate(w), &target);
        if measured <= eps {
            return Ok(seq);
        }
        if best.as_ref().is_none_or(|(_, d)| measured < *d) {
            best = Some((seq, measured));
        }
    }
    // return the best effort; the caller measures the achieved distance
    Ok(best.expect("at least one attempt ran").0)
}

/// Synthesize a target supported on `B_i = B (+) span{u_1..u_i}` (and
/// acting as the identity on `u_{i+1}..u_n`).
fn synth_level(
    engine: &Engine<'_>,
    level: usize,
    target: &ComplexMatrix,
    eps: f64,
    rng: &RefCell<ChaCha8Rng>,
) -> Result<FactorSequence> {
    let (sa, sb, w) = (engine.sa, engine.sb, engine.w);
    if level == 0 {
        // clean the target to an exact B-supported unitary
        let cleaned = project_to_subspace_unitary(target, sb);
        return Ok(FactorSequence {
            factors: vec![BridgeFactor::InB(cleaned)],
        });
    }
    let i = level;
    let u_i = sa.basis()[i - 1].clone();
    // the mover's first entry moves; every other A-basis vector must stay
    // fixed so the inner bridges preserve span{u_i} (+) B exactly
    let mut rest: Vec<Vector> = vec![u_i.clone()];
    rest.extend(
        sa.basis()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i - 1)
            .map(|(_, v)| v.clone()),
    );

    // B_{i-1} = B (+) span{u_1..u_{i-1}}
    let b_prev = sb.union(&Subspace::from_frame(
        sa.ambient(),
        sa.basis()[..i - 1].to_vec(),
    ));

    // the mover u_i -> v_1 that leaves u_{i+1}..u_n untouched
    let t_seq = mover_fixing_rest(engine, &rest, eps / 16.0, rng)?;
    let t_mat = t_seq.evaluate(w);

    // an eigenvector of the target inside B_i
    let (vals, vecs) = unitary_eigen(target)?;
    let mut psi: Vector = (0..target.dim()).map(|r| vecs[(r, 0)]).collect();
    let mut theta = vals[0];
    for col in 0..vals.len() {
        if (vals[col] - C_ONE).norm() > (theta - C_ONE).norm() {
            theta = vals[col];
            psi = (0..target.dim()).map(|r| vecs[(r, col)]).collect();
        }
    }

    // W_psi: psi -> u_i, built over (span{u_i}, B_{i-1}) with bridge T
    let small = Subspace::from_frame(sa.ambient(), vec![u_i.clone()]);
    type BoxedRotor<'a> = Box<dyn Fn(&ComplexMatrix) -> Result<(FactorSequence, ComplexMatrix)> + 'a>;
    let rotor_prev: BoxedRotor<'_> =
        if i == 1 {
            Box::new(|m: &ComplexMatrix| {
                Ok((
                    FactorSequence {
                        factors: vec![BridgeFactor::InB(m.clone())],
                    },
                    m.clone(),
                ))
            })
        } else {
            let engine2 = Engine { sa, sb, w };
            Box::new(move |m: &ComplexMatrix| {
                let seq = synth_level(&engine2, i - 1, m, eps / 16.0, rng)?;
                let mat = seq.evaluate(w);
                Ok((seq, mat))
            })
        };
    let space = MoverSpace {
        small,
        big: b_prev.clone(),
        bridge_seq: t_seq.clone(),
        bridge_mat: t_mat.clone(),
        big_rotor: rotor_prev.as_ref(),
    };
    let w_psi = space.mover(&psi, &u_i, eps / 16.0)?;
    let w_psi_mat = w_psi.evaluate(w);

    // V1 in SU(B): phase theta on v_1, phase -theta on v_2
    let v1 = &sb.basis()[0];
    let v2 = &sb.basis()[1];
    let mut v1_mat = ComplexMatrix::identity(w.dim());
    for a in 0..w.dim() {
        for b in 0..w.dim() {
            v1_mat[(a, b)] += (theta - C_ONE) * v1[a] * v1[b].conj()
                + (theta.conj() - C_ONE) * v2[a] * v2[b].conj();
        }
    }

    // X = T^{-1} V1 T (application order: T, V1, T^{-1})
    let x_seq = t_seq
        .clone()
        .extended(&FactorSequence {
            factors: vec![BridgeFactor::InB(v1_mat.clone())],
        })
        .extended(&t_seq.inverse());
    let x_mat = x_seq.evaluate(w);

    // V2 = (W_psi target W_psi^{-1}) X^{-1}, an element of SU(B_{i-1})
    let v2_raw = w_psi_mat
        .mul(target)
        .mul(&w_psi_mat.adjoint())
        .mul(&x_mat.adjoint());
    let v2_clean = project_to_subspace_unitary(&v2_raw, &b_prev);
    let v2_seq = if i == 1 {
        FactorSequence {
            factors: vec![BridgeFactor::InB(v2_clean)],
        }
    } else {
        synth_level(engine, i - 1, &v2_clean, eps / 16.0, rng)?
    };

    // target = W_psi^{-1} V2 X W_psi; application order: W_psi, X, V2, W_psi^{-1}
    Ok(w_psi
        .clone()
        .extended(&x_seq)
        .extended(&v2_seq)
        .extended(&w_psi.inverse()))
}

/// Extract the block of `m` on the subspace, polar-unitarize it, and embed
/// it back as identity elsewhere.
fn project_to_subspace_unitary(m: &ComplexMatrix, space: &Subspace) -> ComplexMatrix {
    let d = space.dim();
    let mut block = ComplexMatrix::zeros(d);
    for (i, bi) in space.basis().iter().enumerate() {
        let mbj: Vec<Vector> = space.basis().iter().map(|bj| m.apply(bj)).collect();
        for (j, col) in mbj.iter().enumerate() {
            block[(i, j)] = vdot(bi, col);
        }
    }
    // polar: block (block^dagger block)^{-1/2}
    let g = block.adjoint().mul(&block);
    let (eigs, v) = hermitian_eigen(&g);
    let inv_sqrt = ComplexMatrix::diagonal(
        &eigs
            .iter()
            .map(|&e| Complex64::new(1.0 / e.max(1e-300).sqrt(), 0.0))
            .collect::<Vec<_>>(),
    );
    let unitary_block = block.mul(&v).mul(&inv_sqrt).mul(&v.adjoint());
    // embed
    let ambient = space.ambient();
    let mut out = ComplexMatrix::identity(ambient);
    for (i, bi) in space.basis().iter().enumerate() {
        for (j, bj) in space.basis().iter().enumerate() {
            let c = unitary_block[(i, j)] - if i == j { C_ONE } else { C_ZERO };
            for r in 0..ambient {
                for s in 0..ambient {
                    out[(r, s)] += c * bi[r] * bj[s].conj();
                }
            }
        }
    }
    out
}

/// Lemma-style mover: take `rest[0]` to the first B basis vector while
/// leaving `rest[1..]` unchanged, using bridges that fix the trailing
/// vectors (built by conjugating random in-subspace rotations through an
/// auxiliary mover when more than one vector must be preserved).
fn mover_fixing_rest(
    engine: &Engine<'_>,
    rest: &[Vector],
    eps: f64,
    rng: &RefCell<ChaCha8Rng>,
) -> Result<FactorSequence> {
    let (sa, sb, w) = (engine.sa, engine.sb, engine.w);
    let rotor = atomic_big_rotor();
    let mut bridge_seq = FactorSequence {
        factors: vec![BridgeFactor::Bridge],
    };
    let mut bridge_mat = w.clone();
    let mut active: Vec<Vector> = rest.to_vec();

    while active.len() > 1 {
        let span = Subspace::from_frame(sa.ambient(), active.clone());
        let space = MoverSpace {
            small: span.clone(),
            big: sb.clone(),
            bridge_seq: bridge_seq.clone(),
            bridge_mat: bridge_mat.clone(),
            big_rotor: &rotor,
        };
        let last = active.last().unwrap().clone();
        let t_tilde = space.mover(&last, &sb.basis()[0], eps / 8.0)?;

        // search a conjugated random rotation that still mixes the leading
        // vectors with B
        let b_rest = Subspace::from_frame(sa.ambient(), sb.basis()[1..].to_vec());
        let mut found = false;
        for _ in 0..40 {
            let u_rand = random_su_on(&span, rng);
            let v_rand = random_su_on(&b_rest, rng);
            let candidate_seq = t_tilde
                .clone()
                .extended(&FactorSequence {
                    factors: vec![BridgeFactor::InB(v_rand), BridgeFactor::InA(u_rand)],
                })
                .extended(&t_tilde.inverse());
            let candidate_mat = candidate_seq.evaluate(w);
            let mixes = active[..active.len() - 1].iter().any(|u| {
                vnorm(&sb.project(&candidate_mat.apply(u))) > 0.05
            });
            if mixes {
                bridge_seq = candidate_seq;
                bridge_mat = candidate_mat;
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::Invalid(
                "could not construct a mixing bridge for the inner subspace".into(),
            ));
        }
        active.pop();
    }

    let span = Subspace::from_frame(sa.ambient(), active.clone());
    let space = MoverSpace {
        small: span,
        big: sb.clone(),
        bridge_seq,
        bridge_mat,
        big_rotor: &rotor,
    };
    space.mover(&active[0], &sb.basis()[0], eps)
}

fn random_su_on(space: &Subspace, rng: &RefCell<ChaCha8Rng>) -> ComplexMatrix {
    let d = space.dim();
    let ambient = space.ambient();
    if d == 0 {
        return ComplexMatrix::identity(ambient);
    }
    let block = haar_special_unitary(d, &mut *rng.borrow_mut());
    let mut out = ComplexMatrix::identity(ambient);
    for (i, bi) in space.basis().iter().enumerate() {
        for (j, bj) in space.basis().iter().enumerate() {
            let c = block[(i, j)] - if i == j { C_ONE } else { C_ZERO };
            for r in 0..ambient {
                for s in 0..ambient {
                    out[(r, s)] += c * bi[r] * bj[s].conj();
                }
            }
        }
    }
    out
}
