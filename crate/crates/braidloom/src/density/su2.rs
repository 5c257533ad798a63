//! SU(2) synthesis from two generators.
//!
//! Strategy: breadth-first search finds two distinct words whose images lie
//! within a small distance of each other; their quotient `g` is a rotation by
//! a tiny angle about some axis. Powers of `g` sweep one continuous rotation
//! family `R`, conjugating by a non-commuting generator `T` sweeps a second
//! family `S` about a tilted axis, and a generalized Euler factorization
//! writes any target rotation as an alternating product of the two families.
//! Every factor angle is then realized by an integer power of `g`, so the
//! only error is angle truncation, one half-step per factor.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::matrix::{pd, su_project, ComplexMatrix};

use super::{GeneratorWord, Synthesis};

// ---------------------------------------------------------------------------
// small 3-vector / SO(3) helpers (shared with the Solovay-Kitaev commutator)
// ---------------------------------------------------------------------------

pub(crate) type V3 = [f64; 3];
pub(crate) type M3 = [[f64; 3]; 3];

pub(crate) fn dot3(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm3(a: V3) -> f64 {
    dot3(a, a).sqrt()
}

pub(crate) fn normalize3(a: V3) -> V3 {
    let n = norm3(a);
    [a[0] / n, a[1] / n, a[2] / n]
}

pub(crate) fn mat3_apply(m: &M3, v: V3) -> V3 {
    [
        dot3(m[0], v),
        dot3(m[1], v),
        dot3(m[2], v),
    ]
}

pub(crate) fn mat3_mul(a: &M3, b: &M3) -> M3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|l| a[i][l] * b[l][j]).sum();
        }
    }
    out
}

pub(crate) fn mat3_transpose(a: &M3) -> M3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

/// Rodrigues rotation about a unit axis.
pub(crate) fn rot3(axis: V3, angle: f64) -> M3 {
    let (s, c) = angle.sin_cos();
    let [x, y, z] = axis;
    let t = 1.0 - c;
    [
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ]
}

fn pauli() -> [ComplexMatrix; 3] {
    let i = Complex64::new(0.0, 1.0);
    let mut sx = ComplexMatrix::zeros(2);
    sx[(0, 1)] = Complex64::new(1.0, 0.0);
    sx[(1, 0)] = Complex64::new(1.0, 0.0);
    let mut sy = ComplexMatrix::zeros(2);
    sy[(0, 1)] = -i;
    sy[(1, 0)] = i;
    let mut sz = ComplexMatrix::zeros(2);
    sz[(0, 0)] = Complex64::new(1.0, 0.0);
    sz[(1, 1)] = Complex64::new(-1.0, 0.0);
    [sx, sy, sz]
}

/// The rotation induced by conjugation, `(R v) . sigma = U (v . sigma) U^dagger`.
/// Phase-blind, and a homomorphism from U(2) onto SO(3).
pub(crate) fn so3_of(u: &ComplexMatrix) -> M3 {
    let sigma = pauli();
    let ud = u.adjoint();
    let mut r = [[0.0; 3]; 3];
    for (j, sj) in sigma.iter().enumerate() {
        let m = u.mul(sj).mul(&ud);
        for (i, si) in sigma.iter().enumerate() {
            r[i][j] = 0.5 * si.inner_trace(&m).re;
        }
    }
    r
}

/// Rotation angle in `[0, pi]` of an SO(3) matrix.
pub(crate) fn so3_angle(r: &M3) -> f64 {
    let tr = r[0][0] + r[1][1] + r[2][2];
    ((tr - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
}

/// Axis of an SO(3) rotation with angle away from 0 and pi.
pub(crate) fn so3_axis(r: &M3) -> V3 {
    normalize3([
        r[2][1] - r[1][2],
        r[0][2] - r[2][0],
        r[1][0] - r[0][1],
    ])
}

/// `cos(half) I - i sin(half) (n . sigma)`: the SU(2) rotation whose SO(3)
/// image under [`so3_of`] is `rot3(n, 2 * half)` (conjugation by
/// `exp(i theta n.sigma)` turns the Pauli vector by `-2 theta`, hence the
/// minus sign here).
pub(crate) fn su2_of_axis_angle(axis: V3, half: f64) -> ComplexMatrix {
    let (s, c) = (-half).sin_cos();
    let i = Complex64::new(0.0, 1.0);
    let [x, y, z] = axis;
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 0)] = Complex64::new(c, 0.0) + i * s * z;
    m[(0, 1)] = i * s * x + Complex64::new(s * y, 0.0);
    m[(1, 0)] = i * s * x - Complex64::new(s * y, 0.0);
    m[(1, 1)] = Complex64::new(c, 0.0) - i * s * z;
    m
}

/// Canonical projective quaternion of an SU(2) matrix: components
/// `(w, x, y, z)` of `U = w + i (x sx + y sy + z sz)`, sign-fixed.
fn quat_of(u: &ComplexMatrix) -> [f64; 4] {
    let mut q = [
        0.5 * (u[(0, 0)].re + u[(1, 1)].re),
        0.5 * (u[(0, 1)].im + u[(1, 0)].im),
        0.5 * (u[(0, 1)].re - u[(1, 0)].re),
        0.5 * (u[(0, 0)].im - u[(1, 1)].im),
    ];
    let n = (q.iter().map(|c| c * c).sum::<f64>()).sqrt();
    for c in q.iter_mut() {
        *c /= n;
    }
    for c in q {
        if c.abs() > 1e-9 {
            if c < 0.0 {
                for v in q.iter_mut() {
                    *v = -*v;
                }
            }
            break;
        }
    }
    q
}

fn quat_chordal(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    let direct: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let flipped: f64 = a.iter().zip(b).map(|(x, y)| (x + y) * (x + y)).sum();
    direct.min(flipped).sqrt()
}

// ---------------------------------------------------------------------------
// breadth-first pair search with grid hashing
// ---------------------------------------------------------------------------

struct PairSearch {
    gens: [ComplexMatrix; 2],
    inv: [ComplexMatrix; 2],
    words: Vec<Vec<i32>>,
    matrices: Vec<ComplexMatrix>,
    quats: Vec<[f64; 4]>,
    grid: HashMap<[i64; 4], Vec<usize>>,
    cell: f64,
    frontier: Vec<usize>,
    distinct_cap_hit: bool,
}

const EXACT_DUP: f64 = 1e-9;
const ELEMENT_CAP: usize = 400_000;

impl PairSearch {
    fn new(s1: ComplexMatrix, s2: ComplexMatrix, cell: f64) -> Self {
        let inv = [s1.adjoint(), s2.adjoint()];
        let mut search = Self {
            gens: [s1, s2],
            inv,
            words: Vec::new(),
            matrices: Vec::new(),
            quats: Vec::new(),
            grid: HashMap::new(),
            cell,
            frontier: Vec::new(),
            distinct_cap_hit: false,
        };
        search.insert(Vec::new(), ComplexMatrix::identity(2));
        search.frontier = vec![0];
        search
    }

    fn key(&self, q: &[f64; 4]) -> [i64; 4] {
        let mut k = [0i64; 4];
        for (i, c) in q.iter().enumerate() {
            k[i] = (c / self.cell).floor() as i64;
        }
        k
    }

    fn neighbors_within(&self, q: &[f64; 4], radius: f64) -> Vec<(usize, f64)> {
        let base = self.key(q);
        let mut out = Vec::new();
        let reach = (radius / self.cell).ceil() as i64;
        let mut offset = [0i64; 4];
        #[allow(clippy::too_many_arguments)]
        fn rec(
            dim: usize,
            reach: i64,
            base: &[i64; 4],
            offset: &mut [i64; 4],
            grid: &HashMap<[i64; 4], Vec<usize>>,
            quats: &[[f64; 4]],
            q: &[f64; 4],
            radius: f64,
            out: &mut Vec<(usize, f64)>,
        ) {
            if dim == 4 {
                let mut key = *base;
                for i in 0..4 {
                    key[i] += offset[i];
                }
                if let Some(bucket) = grid.get(&key) {
                    for &idx in bucket {
                        let d = quat_chordal(&quats[idx], q);
                        if d <= radius {
                            out.push((idx, d));
                        }
                    }
                }
                return;
            }
            for o in -reach..=reach {
                offset[dim] = o;
                rec(dim + 1, reach, base, offset, grid, quats, q, radius, out);
            }
        }
        rec(
            0,
            reach,
            &base,
            &mut offset,
            &self.grid,
            &self.quats,
            q,
            radius,
            &mut out,
        );
        out
    }

    fn insert(&mut self, word: Vec<i32>, m: ComplexMatrix) -> usize {
        let q = quat_of(&m);
        let key = self.key(&q);
        let idx = self.words.len();
        self.words.push(word);
        self.matrices.push(m);
        self.quats.push(q);
        self.grid.entry(key).or_default().push(idx);
        idx
    }

    /// Grow one BFS level. Returns candidate near-pairs `(new, old, chordal
    /// distance)` and whether the level added any new projective element.
    fn grow_level(&mut self, pair_radius: f64) -> (Vec<(usize, usize, f64)>, bool) {
        let mut candidates = Vec::new();
        let mut next = Vec::new();
        let frontier = std::mem::take(&mut self.frontier);
        for idx in frontier {
            for letter in [1i32, -1, 2, -2] {
                if self.words[idx].last() == Some(&-letter) {
                    continue;
                }
                if self.words.len() >= ELEMENT_CAP {
                    self.distinct_cap_hit = true;
                    break;
                }
                let gen = match letter {
                    1 => &self.gens[0],
                    -1 => &self.inv[0],
                    2 => &self.gens[1],
                    _ => &self.inv[1],
                };
                let m = self.matrices[idx].mul(gen);
                let q = quat_of(&m);
                let near = self.neighbors_within(&q, pair_radius.max(EXACT_DUP));
                if near.iter().any(|&(_, d)| d <= EXACT_DUP) {
                    continue; // a relation: the group element is already known
                }
                let mut word = self.words[idx].clone();
                word.push(letter);
                let new_idx = self.insert(word, m);
                for (old, d) in near {
                    candidates.push((new_idx, old, d));
                }
                next.push(new_idx);
            }
        }
        let grew = !next.is_empty();
        self.frontier = next;
        (candidates, grew)
    }
}

/// A near-identity group element: word, matrix, SO(3) rotation data.
struct SmallRotation {
    word: Vec<i32>,
    angle: f64,
    axis: V3,
}

// ---------------------------------------------------------------------------
// generalized Euler factorization about two fixed axes
// ---------------------------------------------------------------------------

/// Solve `m = rot(a, t1) rot(b, t2) rot(a, t3)` exactly, if possible.
fn solve_two_axis(a: V3, b: V3, m: &M3) -> Option<[f64; 3]> {
    let c = dot3(a, b);
    if 1.0 - c * c < 1e-10 {
        return None;
    }
    let ma = mat3_apply(m, a);
    let e = dot3(a, ma);
    let cos_beta = (e - c * c) / (1.0 - c * c);
    if cos_beta.abs() > 1.0 + 1e-9 {
        return None;
    }
    let beta0 = cos_beta.clamp(-1.0, 1.0).acos();
    for beta in [beta0, -beta0] {
        let w = mat3_apply(&rot3(b, beta), a);
        let u = [ma[0] - e * a[0], ma[1] - e * a[1], ma[2] - e * a[2]];
        let v = [w[0] - e * a[0], w[1] - e * a[1], w[2] - e * a[2]];
        let t1 = if norm3(u) < 1e-9 || norm3(v) < 1e-9 {
            0.0
        } else {
            dot3(a, cross3(v, u)).atan2(dot3(v, u))
        };
        // n = rot(a, -t1) m rot(b, -beta)^... extract the trailing a-rotation
        let n = mat3_mul(&mat3_mul(&rot3(b, -beta), &rot3(a, -t1)), m);
        // n should fix a; measure its rotation angle about a
        let mut u0 = if a[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let pa = dot3(u0, a);
        u0 = normalize3([u0[0] - pa * a[0], u0[1] - pa * a[1], u0[2] - pa * a[2]]);
        let nu = mat3_apply(&n, u0);
        let t3 = dot3(a, cross3(u0, nu)).atan2(dot3(u0, nu));
        let recon = mat3_mul(&mat3_mul(&rot3(a, t1), &rot3(b, beta)), &rot3(a, t3));
        let err: f64 = (0..3)
            .map(|i| (0..3).map(|j| (recon[i][j] - m[i][j]).powi(2)).sum::<f64>())
            .sum::<f64>()
            .sqrt();
        if err < 1e-9 {
            return Some([t1, beta, t3]);
        }
    }
    None
}

#[derive(Clone, Copy, Debug)]
enum Axis {
    A,
    B,
}

/// Factor an arbitrary rotation as an alternating product about the two
/// axes. When the three-factor form is unreachable (the axes are not
/// orthogonal, so a single sandwich does not cover all of SO(3)), extra
/// trailing rotations walk the target into range.
fn factor_rotation(a: V3, b: V3, m: &M3) -> Option<Vec<(Axis, f64)>> {
    let mut suffix: Vec<(Axis, f64)> = Vec::new();
    let mut current = *m;
    for _ in 0..40 {
        if let Some([t1, t2, t3]) = solve_two_axis(a, b, &current) {
            let mut out = vec![(Axis::A, t1), (Axis::B, t2), (Axis::A, t3)];
            out.extend(suffix.into_iter().rev());
            return Some(out);
        }
        // append rot(a, gamma) rot(b, delta) on the right to pull
        // a . (current a) into the solvable range
        let mut best: Option<(f64, f64, f64)> = None;
        for gi in 0..48 {
            let gamma = 2.0 * std::f64::consts::PI * gi as f64 / 48.0;
            for di in 0..48 {
                let delta = 2.0 * std::f64::consts::PI * di as f64 / 48.0;
                let trial = mat3_mul(
                    &mat3_mul(&current, &rot3(b, -delta)),
                    &rot3(a, -gamma),
                );
                let e = dot3(a, mat3_apply(&trial, a));
                if best.is_none_or(|(be, _, _)| e > be) {
                    best = Some((e, delta, gamma));
                }
            }
        }
        let (_e_best, delta, gamma) = best?;
        suffix.push((Axis::B, delta));
        suffix.push((Axis::A, gamma));
        current = mat3_mul(&mat3_mul(&current, &rot3(b, -delta)), &rot3(a, -gamma));
    }
    None
}

// ---------------------------------------------------------------------------
// the synthesis entry point
// ---------------------------------------------------------------------------

/// Fast register-level 2x2 products for evaluating very long words.
type Mat2 = [[Complex64; 2]; 2];

fn mat2_of(m: &ComplexMatrix) -> Mat2 {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

fn mat2_adjoint(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

fn mat2_back(a: &Mat2) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = a[i][j];
        }
    }
    m
}

fn eval_word_2x2(g1: &ComplexMatrix, g2: &ComplexMatrix, letters: &[i32]) -> ComplexMatrix {
    let table = [
        mat2_of(g1),
        mat2_adjoint(&mat2_of(g1)),
        mat2_of(g2),
        mat2_adjoint(&mat2_of(g2)),
    ];
    let mut acc: Mat2 = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    for &l in letters {
        let idx = match l {
            1 => 0,
            -1 => 1,
            2 => 2,
            _ => 3,
        };
        acc = mat2_mul(&acc, &table[idx]);
    }
    mat2_back(&acc)
}

/// Approximate an SU(2) target by a word over two generators.
///
/// Errors with [`Error::FiniteImage`] when the generated group saturates
/// under breadth-first closure (the excluded-k cases). Otherwise a rotation
/// seed is extracted — preferably the quotient of a close word pair from
/// breadth-first search; when the group's arithmetic rigidity starves the
/// pair search, a short word with a well-distributed power orbit — and the
/// generalized Euler factors are realized by integer powers of the seed,
/// chosen by scanning the orbit for the closest angle.
pub fn su2_generate(
    g1: &ComplexMatrix,
    g2: &ComplexMatrix,
    target: &ComplexMatrix,
    eps: f64,
) -> Result<Synthesis> {
    if g1.dim() != 2 || g2.dim() != 2 || target.dim() != 2 {
        return Err(Error::DimensionMismatch {
            left: g1.dim().max(g2.dim()),
            right: target.dim(),
        });
    }
    if eps <= 0.0 {
        return Err(Error::Invalid("eps must be positive".into()));
    }
    let s1 = su_project(g1)?;
    let s2 = su_project(g2)?;
    let starget = su_project(target)?;

    // exact hits first
    for (word, m) in [
        (GeneratorWord::empty(), ComplexMatrix::identity(2)),
        (GeneratorWord(vec![1]), s1.clone()),
        (GeneratorWord(vec![-1]), s1.adjoint()),
        (GeneratorWord(vec![2]), s2.clone()),
        (GeneratorWord(vec![-2]), s2.adjoint()),
    ] {
        let d = pd(&m, &starget);
        if d < 1e-12 {
            let matrix = eval_word_2x2(g1, g2, word.letters());
            return Ok(Synthesis {
                word,
                matrix,
                distance: d,
            });
        }
    }

    let mut lambda_max = eps / 6.0;
    let mut bfs_exhausted = false;
    let mut best: Option<Synthesis> = None;
    for attempt in 0..5 {
        let seeds: Vec<SmallRotation> = if bfs_exhausted {
            short_orbit_seeds(&s1, &s2)
        } else {
            match find_small_rotation(&s1, &s2, lambda_max) {
                Ok(g) => vec![g],
                Err(Error::FiniteImage) => return Err(Error::FiniteImage),
                Err(_) => {
                    // the pair search ran out without saturating: the group
                    // is infinite but rigid; fall back to orbit seeds
                    bfs_exhausted = true;
                    short_orbit_seeds(&s1, &s2)
                }
            }
        };
        let power_cap = 25_000usize << attempt;
        for g in &seeds {
            if let Some(result) =
                synthesize_with_seed(g1, g2, &s1, &s2, &starget, g, power_cap, eps)
            {
                if result.distance <= eps {
                    return Ok(result);
                }
                if best.as_ref().is_none_or(|b| result.distance < b.distance) {
                    best = Some(result);
                }
            }
        }
        lambda_max /= 2.0;
    }
    best.ok_or_else(|| Error::Invalid("synthesis failed to converge".into()))
}

/// BFS until a pair of distinct words lands within `2 sin(lambda_max / 2)`
/// of each other projectively; their quotient is the small-rotation seed.
fn find_small_rotation(
    s1: &ComplexMatrix,
    s2: &ComplexMatrix,
    lambda_max: f64,
) -> Result<SmallRotation> {
    // chordal quaternion distance ~ half the SO(3) angle between elements
    let radius = lambda_max / 2.0;
    let mut search = PairSearch::new(s1.clone(), s2.clone(), radius.max(1e-6));
    let mut best: Option<SmallRotation> = None;
    for _level in 0..60 {
        let (candidates, grew) = search.grow_level(radius);
        for (new, old, _) in candidates {
            let m = search.matrices[new].mul(&search.matrices[old].adjoint());
            let r = so3_of(&m);
            let angle = so3_angle(&r);
            if angle < 1e-8 || angle > 2.0 * lambda_max {
                continue;
            }
            let mut word = search.words[new].clone();
            word.extend(search.words[old].iter().rev().map(|l| -l));
            let axis = so3_axis(&r);
            if best.as_ref().is_none_or(|b| angle > b.angle) {
                best = Some(SmallRotation { word, angle, axis });
            }
        }
        if let Some(b) = best.take() {
            return Ok(b);
        }
        if !grew {
            // closure saturated: the generated image is finite
            return Err(Error::FiniteImage);
        }
        if search.distinct_cap_hit {
            break;
        }
    }
    Err(Error::Invalid(
        "no near-identity pair found within the search budget".into(),
    ))
}

/// Short words whose power orbits resolve angles well, ranked by a coarse
/// equidistribution probe. Used when close word pairs are out of reach.
fn short_orbit_seeds(s1: &ComplexMatrix, s2: &ComplexMatrix) -> Vec<SmallRotation> {
    let mut words: Vec<Vec<i32>> = Vec::new();
    let mut frontier: Vec<Vec<i32>> = vec![vec![]];
    for _ in 0..3 {
        let mut next = Vec::new();
        for w in &frontier {
            for l in [1i32, -1, 2, -2] {
                if w.last() == Some(&-l) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut candidates = Vec::new();
    for w in words.into_iter().filter(|w| w.len() >= 2) {
        let m = eval_word_2x2(s1, s2, &w);
        let m = match su_project(&m) {
            Ok(m) => m,
            Err(_) => continue,
        };
        let r = so3_of(&m);
        let angle = so3_angle(&r);
        if !(1e-6..=std::f64::consts::PI - 1e-6).contains(&angle) {
            continue;
        }
        // probe: how well do the first 4096 powers resolve a spread of angles?
        let probes = [0.41f64, 1.13, 1.87, 2.53, -0.77, -1.99, 2.99, -2.61];
        let mut worst: f64 = 0.0;
        for &t in &probes {
            let (_, err) = best_power(angle, t, 4096, 0.0);
            worst = worst.max(err);
        }
        candidates.push((worst, w, angle, so3_axis(&r)));
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.len().cmp(&b.1.len())));
    candidates
        .into_iter()
        .take(6)
        .map(|(_, word, angle, axis)| SmallRotation { word, angle, axis })
        .collect()
}

fn wrap_angle(t: f64) -> f64 {
    let mut t = t.rem_euclid(2.0 * std::f64::consts::PI);
    if t > std::f64::consts::PI {
        t -= 2.0 * std::f64::consts::PI;
    }
    t
}

/// Signed power `m` with `m * lambda` closest to `t` modulo a full turn,
/// scanning up to `cap`; returns early on the smallest power within `tol`.
fn best_power(lambda: f64, t: f64, cap: usize, tol: f64) -> (i64, f64) {
    let mut best = (0i64, wrap_angle(t).abs());
    if best.1 <= tol {
        return best;
    }
    let mut pos = 0.0f64;
    let mut neg = 0.0f64;
    for m in 1..=cap {
        pos = wrap_angle(pos + lambda);
        neg = wrap_angle(neg - lambda);
        let ep = wrap_angle(pos - t).abs();
        if ep < best.1 {
            best = (m as i64, ep);
            if ep <= tol {
                return best;
            }
        }
        let en = wrap_angle(neg - t).abs();
        if en < best.1 {
            best = (-(m as i64), en);
            if en <= tol {
                return best;
            }
        }
    }
    best
}

#[allow(clippy::too_many_arguments)]
fn synthesize_with_seed(
    g1: &ComplexMatrix,
    g2: &ComplexMatrix,
    s1: &ComplexMatrix,
    s2: &ComplexMatrix,
    starget: &ComplexMatrix,
    g: &SmallRotation,
    power_cap: usize,
    eps: f64,
) -> Option<Synthesis> {
    // pick the conjugator whose tilted axis is most independent of g's axis
    let conjugators: [&[i32]; 6] = [&[1], &[2], &[1, 2], &[2, 1], &[1, 1], &[2, 2]];
    let mut t_best: Option<(Vec<i32>, V3, f64)> = None;
    for t in conjugators {
        let rt = so3_of(&eval_word_2x2(s1, s2, t));
        let b_axis = mat3_apply(&mat3_transpose(&rt), g.axis);
        let sep = norm3(cross3(g.axis, b_axis));
        if t_best.as_ref().is_none_or(|(_, _, s)| sep > *s) {
            t_best = Some((t.to_vec(), b_axis, sep));
        }
    }
    let (t_word, b_axis, sep) = t_best?;
    if sep < 0.05 {
        return None;
    }

    let m_target = so3_of(starget);
    let factors = factor_rotation(g.axis, b_axis, &m_target)?;
    // SO(3) angle truncation tol per factor; SU(2) error is half of it
    let tol = eps / (2.0 * factors.len() as f64 + 2.0);

    let mut letters: Vec<i32> = Vec::new();
    let g_inverse: Vec<i32> = g.word.iter().rev().map(|l| -l).collect();
    let push_g_power = |letters: &mut Vec<i32>, n: i64| {
        for _ in 0..n.unsigned_abs() {
            if n > 0 {
                letters.extend_from_slice(&g.word);
            } else {
                letters.extend_from_slice(&g_inverse);
            }
        }
    };
    for (axis, t) in factors {
        let (n, _err) = best_power(g.angle, wrap_angle(t), power_cap, tol);
        match axis {
            Axis::A => push_g_power(&mut letters, n),
            Axis::B => {
                letters.extend(t_word.iter().rev().map(|l| -l));
                push_g_power(&mut letters, n);
                letters.extend_from_slice(&t_word);
            }
        }
    }

    let word = GeneratorWord(letters);
    let matrix = eval_word_2x2(g1, g2, word.letters());
    let projected = su_project(&matrix).ok()?;
    let distance = pd(&projected, starget);
    Some(Synthesis {
        word,
        matrix,
        distance,
    })
}
