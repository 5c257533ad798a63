//! Decoupling search: drive one homomorphic image toward a target while the
//! other image approaches the identity.
//!
//! The underlying existence statement is nonconstructive, so this is a
//! budgeted search, not an algorithm with a guarantee: the contract is best
//! effort with measured distances. The search exploits dimension mismatch
//! the way the theory does — words that nearly collide on the bigger side
//! quotient to moves that are almost trivial there, iterated commutators
//! sharpen that triviality quadratically, and a beam over the resulting
//! move library steers the small side toward the target.

use std::collections::HashMap;

use crate::numerics::matrix::{pd, pd_frobenius, ComplexMatrix};

use super::{GeneratorSet, GeneratorWord};

/// A pair of homomorphic images for the same abstract generators.
#[derive(Debug, Clone)]
pub struct PairedRep {
    pub a: GeneratorSet,
    pub b: GeneratorSet,
}

impl PairedRep {
    pub fn evaluate(&self, word: &GeneratorWord) -> (ComplexMatrix, ComplexMatrix) {
        (self.a.evaluate(word), self.b.evaluate(word))
    }
}

#[derive(Debug, Clone)]
pub struct DecoupleOutcome {
    pub word: GeneratorWord,
    pub dist_a: f64,
    pub dist_b: f64,
    pub success: bool,
    pub evaluations: usize,
}

struct Move {
    word: GeneratorWord,
    a: ComplexMatrix,
    b: ComplexMatrix,
    b_dist: f64,
}

/// Cheap surrogate for the projective distance used inside search loops.
fn fast_pd(u: &ComplexMatrix, v: &ComplexMatrix) -> f64 {
    pd_frobenius(u, v)
}

/// Best-effort word with `tau_a(word) ~ target_a` and `tau_b(word) ~ 1`.
///
/// `budget` caps the number of word evaluations. Never fails: when the
/// budget runs out (or the reps are too correlated for decoupling, as when
/// the dimensions agree), the best word found is returned with
/// `success = false`.
pub fn decouple_search(
    reps: &PairedRep,
    target_a: &ComplexMatrix,
    eps: f64,
    budget: usize,
) -> DecoupleOutcome {
    let id_a = ComplexMatrix::identity(reps.a.dim);
    let id_b = ComplexMatrix::identity(reps.b.dim);
    let mut evaluations = 0usize;

    let score = |a: &ComplexMatrix, b: &ComplexMatrix| -> (f64, f64) {
        (pd(a, target_a), pd(b, &id_b))
    };

    // the identity word: exact when the target is trivial
    let (d_a0, d_b0) = score(&id_a, &id_b);
    let mut best = DecoupleOutcome {
        word: GeneratorWord::empty(),
        dist_a: d_a0,
        dist_b: d_b0,
        success: d_a0 <= eps && d_b0 <= eps,
        evaluations: 0,
    };
    if best.success {
        return best;
    }

    // Stage 1: enumerate base words breadth-first.
    let n_gens = reps.a.len() as i32;
    let mut words: Vec<(GeneratorWord, ComplexMatrix, ComplexMatrix)> =
        vec![(GeneratorWord::empty(), id_a.clone(), id_b.clone())];
    let mut frontier: Vec<usize> = vec![0];
    let base_cap = (budget / 10).clamp(256, 8192);
    'grow: while words.len() < base_cap {
        let mut next = Vec::new();
        for &idx in &frontier {
            for g in 1..=n_gens {
                for letter in [g, -g] {
                    if words[idx].0.letters().last() == Some(&-letter) {
                        continue;
                    }
                    let mut l = words[idx].0.letters().to_vec();
                    l.push(letter);
                    let a = words[idx].1.mul(reps.a.image(letter));
                    let b = words[idx].2.mul(reps.b.image(letter));
                    evaluations += 1;
                    next.push(words.len());
                    words.push((GeneratorWord(l), a, b));
                    if words.len() >= base_cap {
                        break 'grow;
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    // Stage 2: close pairs on the B side quotient to near-trivial moves.
    // Bucket by the B-side trace to find close pairs in roughly linear time.
    let mut buckets: HashMap<i64, Vec<usize>> = HashMap::new();
    let quantum = 0.05;
    for (i, (_, _, b)) in words.iter().enumerate() {
        let key = (b.trace().norm() / quantum).floor() as i64;
        buckets.entry(key).or_default().push(i);
    }
    let mut moves: Vec<Move> = Vec::new();
    let pair_cap = budget / 4;
    let mut pair_checks = 0usize;
    let mut keys: Vec<i64> = buckets.keys().copied().collect();
    keys.sort_unstable();
    'pairs: for &key in &keys {
        let bucket = &buckets[&key];
        let mut candidates = bucket.clone();
        if let Some(adj) = buckets.get(&(key + 1)) {
            candidates.extend(adj.iter().copied());
        }
        for (pos, &i) in candidates.iter().enumerate() {
            for &j in candidates.iter().skip(pos + 1) {
                pair_checks += 1;
                if pair_checks > pair_cap {
                    break 'pairs;
                }
                let d = fast_pd(&words[i].2, &words[j].2);
                if d < 0.5 {
                    let word = words[i].0.concat(&words[j].0.inverse());
                    let a = words[i].1.mul(&words[j].1.adjoint());
                    let b = words[i].2.mul(&words[j].2.adjoint());
                    evaluations += 1;
                    let b_dist = pd(&b, &id_b);
                    if b_dist > 1e-12 || pd(&a, &id_a) > 1e-9 {
                        moves.push(Move { word, a, b, b_dist });
                    }
                }
            }
        }
    }
    moves.sort_by(|x, y| x.b_dist.total_cmp(&y.b_dist));
    moves.truncate(200);

    // Stage 3: commutator boosting — [m1, m2] is quadratically closer to
    // the identity on the B side while staying generic on the A side.
    for _round in 0..2 {
        if moves.is_empty() {
            break;
        }
        let mut boosted: Vec<Move> = Vec::new();
        let take = moves.len().min(24);
        for i in 0..take {
            for j in 0..take {
                if i == j {
                    continue;
                }
                if evaluations + 1 > budget {
                    break;
                }
                let word = GeneratorWord::commutator(&moves[i].word, &moves[j].word);
                let a = {
                    let (m1, m2) = (&moves[i].a, &moves[j].a);
                    m1.mul(m2).mul(&m1.adjoint()).mul(&m2.adjoint())
                };
                let b = {
                    let (m1, m2) = (&moves[i].b, &moves[j].b);
                    m1.mul(m2).mul(&m1.adjoint()).mul(&m2.adjoint())
                };
                evaluations += 1;
                let b_dist = pd(&b, &id_b);
                if pd(&a, &id_a) > 1e-9 {
                    boosted.push(Move { word, a, b, b_dist });
                }
            }
        }
        boosted.sort_by(|x, y| x.b_dist.total_cmp(&y.b_dist));
        boosted.truncate(200);
        // keep boosting only while it helps
        if boosted
            .first()
            .is_some_and(|m| m.b_dist < moves[0].b_dist * 0.8)
        {
            moves = boosted;
        } else {
            moves.extend(boosted);
            moves.sort_by(|x, y| x.b_dist.total_cmp(&y.b_dist));
            moves.truncate(200);
            break;
        }
    }

    // include inverses of the best moves
    let inverses: Vec<Move> = moves
        .iter()
        .take(100)
        .map(|m| Move {
            word: m.word.inverse(),
            a: m.a.adjoint(),
            b: m.b.adjoint(),
            b_dist: m.b_dist,
        })
        .collect();
    moves.extend(inverses);

    // Stage 4: beam search over products of library moves.
    #[derive(Clone)]
    struct State {
        word: GeneratorWord,
        a: ComplexMatrix,
        b: ComplexMatrix,
        d_a: f64,
        d_b: f64,
    }
    let objective = |d_a: f64, d_b: f64| d_a.max(d_b);
    let mut beam = vec![State {
        word: GeneratorWord::empty(),
        a: id_a.clone(),
        b: id_b.clone(),
        d_a: d_a0,
        d_b: d_b0,
    }];
    let beam_width = 32;
    let note_leader = |s: &State, evaluations: usize, best: &mut DecoupleOutcome| {
        if objective(s.d_a, s.d_b) < objective(best.dist_a, best.dist_b) {
            *best = DecoupleOutcome {
                word: s.word.clone(),
                dist_a: s.d_a,
                dist_b: s.d_b,
                success: s.d_a <= eps && s.d_b <= eps,
                evaluations,
            };
        }
    };
    for _depth in 0..16 {
        if evaluations >= budget || best.success {
            break;
        }
        let mut pool: Vec<State> = Vec::new();
        for s in &beam {
            for m in moves.iter().take(200) {
                if evaluations + 1 > budget {
                    break;
                }
                let a = s.a.mul(&m.a);
                let b = s.b.mul(&m.b);
                evaluations += 1;
                // cheap filter before the exact distances
                if fast_pd(&a, target_a) > (s.d_a + 0.8) * (reps.a.dim as f64).sqrt() {
                    continue;
                }
                let d_a = pd(&a, target_a);
                let d_b = pd(&b, &id_b);
                pool.push(State {
                    word: s.word.concat(&m.word),
                    a,
                    b,
                    d_a,
                    d_b,
                });
            }
        }
        if pool.is_empty() {
            break;
        }
        pool.sort_by(|x, y| objective(x.d_a, x.d_b).total_cmp(&objective(y.d_a, y.d_b)));
        pool.truncate(beam_width);
        note_leader(&pool[0], evaluations, &mut best);
        beam = pool;
    }

    // hill-climb from the best state until no single move improves it
    if !best.success && !moves.is_empty() {
        let mut current = State {
            word: best.word.clone(),
            a: reps.a.evaluate(&best.word),
            b: reps.b.evaluate(&best.word),
            d_a: best.dist_a,
            d_b: best.dist_b,
        };
        loop {
            if evaluations >= budget || best.success {
                break;
            }
            let mut improved = false;
            for m in &moves {
                if evaluations + 1 > budget {
                    break;
                }
                let a = current.a.mul(&m.a);
                let b = current.b.mul(&m.b);
                evaluations += 1;
                let d_a = pd(&a, target_a);
                let d_b = pd(&b, &id_b);
                if objective(d_a, d_b) < objective(current.d_a, current.d_b) - 1e-12 {
                    current = State {
                        word: current.word.concat(&m.word),
                        a,
                        b,
                        d_a,
                        d_b,
                    };
                    note_leader(&current, evaluations, &mut best);
                    improved = true;
                    break;
                }
            }
            if !improved {
                break;
            }
        }
    }

    best.evaluations = evaluations;
    best
}
