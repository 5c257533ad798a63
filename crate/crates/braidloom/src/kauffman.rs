//! Exact Kauffman bracket and Jones polynomial of plat closures.
//!
//! The ground-truth oracle is a brute-force sum over all `2^m` crossing
//! smoothings: each positive crossing resolves to the cap-cup tangle with
//! weight `A` or to the identity with weight `A^{-1}` (signs swap the
//! weights), closed loops contribute the loop value `d = -A^2 - A^{-2}`, and
//! the result is normalized so a single unknot gives 1. A transfer-matrix
//! evaluation through the diagram monoid is provided behind the same
//! interface for crossing counts beyond the brute-force budget; it is
//! validated against the oracle on small words.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

use crate::braid::{plat_close, plat_writhe, BraidWord, Crossing};
use crate::error::{Error, Result};
use crate::numerics::laurent::LaurentPolynomial;
use crate::pathmodel::root_of_unity_base;

/// Brute-force budget: beyond this many crossings `bracket` refuses and the
/// transfer-matrix path must be used.
pub const STATE_SUM_BUDGET: usize = 30;

/// Perfect matching of the `n` boundary columns (1-based; slot 0 unused).
type Matching = Vec<u8>;

fn cap_matching(n: usize) -> Matching {
    let mut m = vec![0u8; n + 1];
    for j in (1..=n).step_by(2) {
        m[j] = (j + 1) as u8;
        m[j + 1] = j as u8;
    }
    m
}

/// Apply the cap-cup tangle at columns (i, i+1); returns the number of
/// closed loops produced (0 or 1).
fn apply_e(m: &mut Matching, i: usize) -> usize {
    let j = m[i] as usize;
    let l = m[i + 1] as usize;
    if j == i + 1 {
        // the incoming arc already joins i and i+1: a circle closes
        return 1;
    }
    m[j] = l as u8;
    m[l] = j as u8;
    m[i] = (i + 1) as u8;
    m[i + 1] = i as u8;
    0
}

/// Count the circles formed when the matching meets the bottom cups.
fn closing_loops(m: &Matching, n: usize) -> usize {
    let mut seen = vec![false; n + 1];
    let mut loops = 0;
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        loops += 1;
        let mut c = start;
        loop {
            seen[c] = true;
            let via_match = m[c] as usize;
            seen[via_match] = true;
            // bottom cup partner
            let via_cup = if via_match % 2 == 1 {
                via_match + 1
            } else {
                via_match - 1
            };
            c = via_cup;
            if c == start {
                break;
            }
        }
    }
    loops
}

fn d_powers(up_to: usize) -> Vec<LaurentPolynomial> {
    let d = LaurentPolynomial::loop_value();
    let mut powers = vec![LaurentPolynomial::one()];
    for _ in 0..up_to {
        let next = powers.last().unwrap() * &d;
        powers.push(next);
    }
    powers
}

/// `(-A)^p` as an exact Laurent monomial.
fn neg_a_pow(p: i64) -> LaurentPolynomial {
    let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
    LaurentPolynomial::monomial(p, sign)
}

/// Kauffman bracket of the plat closure by exhaustive state sum.
///
/// Normalization: a single unknot evaluates to 1 (each smoothed diagram
/// contributes `d^{loops - 1}`).
pub fn bracket(b: &BraidWord) -> Result<LaurentPolynomial> {
    let diagram = plat_close(b)?;
    let crossings = diagram.crossings();
    let m = crossings.len();
    if m > STATE_SUM_BUDGET {
        return Err(Error::CrossingBudget {
            crossings: m,
            budget: STATE_SUM_BUDGET,
        });
    }
    let n = diagram.strands();

    // tally exact counts per (A-exponent, loop count)
    let mut tally: HashMap<(i64, usize), BigInt> = HashMap::new();
    for state in 0u64..(1u64 << m) {
        let mut matching = cap_matching(n);
        let mut loops = 0usize;
        let mut exponent = 0i64;
        for (idx, c) in crossings.iter().enumerate() {
            let pick_e = (state >> idx) & 1 == 1;
            if pick_e {
                exponent += c.sign as i64;
                loops += apply_e(&mut matching, c.position);
            } else {
                exponent -= c.sign as i64;
            }
        }
        loops += closing_loops(&matching, n);
        *tally.entry((exponent, loops)).or_insert_with(BigInt::zero) += 1;
    }

    let max_loops = tally.keys().map(|&(_, l)| l).max().unwrap_or(1);
    let powers = d_powers(max_loops.saturating_sub(1));
    let mut out = LaurentPolynomial::zero();
    for ((exponent, loops), count) in tally {
        let mut term = LaurentPolynomial::monomial(exponent, count);
        term = &term * &powers[loops - 1];
        out = &out + &term;
    }
    Ok(out)
}

/// Transfer-matrix bracket: propagate Laurent-weighted matchings row by row
/// through the diagram monoid. Polynomial in the crossing count; no budget.
pub fn bracket_fast(b: &BraidWord) -> Result<LaurentPolynomial> {
    let diagram = plat_close(b)?;
    let n = diagram.strands();
    let mut states: HashMap<Matching, LaurentPolynomial> = HashMap::new();
    states.insert(cap_matching(n), LaurentPolynomial::one());
    let d = LaurentPolynomial::loop_value();

    for &Crossing { position, sign } in diagram.crossings() {
        let mut next: HashMap<Matching, LaurentPolynomial> = HashMap::new();
        let mut push = |m: Matching, p: LaurentPolynomial| {
            let slot = next.entry(m).or_insert_with(LaurentPolynomial::zero);
            *slot = &*slot + &p;
        };
        for (matching, poly) in states {
            let id_weight = LaurentPolynomial::monomial(-(sign as i64), 1);
            push(matching.clone(), &poly * &id_weight);
            let mut e_matching = matching;
            let closed = apply_e(&mut e_matching, position);
            let mut e_weight = LaurentPolynomial::monomial(sign as i64, 1);
            if closed == 1 {
                e_weight = &e_weight * &d;
            }
            push(e_matching, &poly * &e_weight);
        }
        states = next;
    }

    let mut out = LaurentPolynomial::zero();
    for (matching, poly) in &states {
        let loops = closing_loops(matching, n);
        let mut term = poly.clone();
        for _ in 0..loops - 1 {
            term = &term * &d;
        }
        out = &out + &term;
    }
    Ok(out)
}

/// Jones polynomial of the plat closure: `(-A)^{-3 w} <bracket>` using the
/// deterministic orientation from component tracing.
pub fn jones(b: &BraidWord) -> Result<LaurentPolynomial> {
    let w = plat_writhe(b)?;
    Ok(&neg_a_pow(-3 * w) * &bracket(b)?)
}

/// Jones polynomial evaluated at `A = i e^{-i pi/(2k)}`, i.e. at
/// `t = A^{-4} = e^{-2 pi i / k}`.
pub fn jones_at_root(b: &BraidWord, k: usize) -> Result<Complex64> {
    if k < 3 {
        return Err(Error::Invalid(format!("k must be at least 3, got {k}")));
    }
    jones(b)?.eval(root_of_unity_base(k))
}
