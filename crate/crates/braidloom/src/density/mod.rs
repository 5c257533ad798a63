//! Constructive density machinery: SU(2) synthesis from two generators, the
//! bridge iteration for growing dense subgroups, decoupling search,
//! epsilon-net construction, the auxiliary-generator net transfer, and
//! Solovay-Kitaev.

pub mod bridge;
pub mod decouple;
pub mod net;
pub mod sk;
pub mod su2;
pub mod transfer;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::matrix::{pd, ComplexMatrix};
use crate::pathmodel::{enumerate_basis, rho_generator, zigzag_steps};

pub use bridge::{bridge_move, bridge_move_trace, bridge_synthesize, BridgeFactor, FactorSequence, Subspace};
pub use decouple::{decouple_search, DecoupleOutcome, PairedRep};
pub use net::{build_commutator_net, build_net, coverage};
pub use sk::solovay_kitaev;
pub use su2::su2_generate;
pub use transfer::{aux_generators, aux_su2_block, m_infinity, transfer_exponent, transfer_net, TransferredNet};

/// A word over an abstract generator set: signed 1-based indices, earlier
/// letters leftmost in the product.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GeneratorWord(pub Vec<i32>);

impl GeneratorWord {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Self(letters)
    }

    /// `u v u^{-1} v^{-1}`.
    pub fn commutator(u: &Self, v: &Self) -> Self {
        u.concat(v).concat(&u.inverse()).concat(&v.inverse())
    }

    /// The word with every letter repeated `reps` times (used by the net
    /// transfer, where each generator becomes a power of another).
    pub fn letterwise_power(&self, reps: usize) -> Self {
        let mut letters = Vec::with_capacity(self.0.len() * reps);
        for &l in &self.0 {
            for _ in 0..reps {
                letters.push(l);
            }
        }
        Self(letters)
    }
}

/// Where a generator set came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    /// The seven braid-generator images on `H_{8,k,1}`, or a block of them.
    PathModel { k: usize },
    /// Auxiliary generators: limit eigenvectors with fixed-`k0` eigenvalues.
    Auxiliary { k0: usize },
    Abstract,
}

/// A finite set of unitaries with verified inverses.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub name: String,
    pub dim: usize,
    pub provenance: Provenance,
    elements: Vec<ComplexMatrix>,
    inverses: Vec<ComplexMatrix>,
}

impl GeneratorSet {
    pub fn new(
        name: impl Into<String>,
        elements: Vec<ComplexMatrix>,
        provenance: Provenance,
    ) -> Result<Self> {
        let dim = elements
            .first()
            .map(|m| m.dim())
            .ok_or_else(|| Error::Invalid("empty generator set".into()))?;
        let mut inverses = Vec::with_capacity(elements.len());
        for e in &elements {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: e.dim(),
                    right: dim,
                });
            }
            let defect = e.unitary_defect();
            if defect > 1e-10 {
                return Err(Error::NotUnitary { defect });
            }
            let inv = e.adjoint();
            debug_assert!(inv.mul(e).sub(&ComplexMatrix::identity(dim)).frobenius_norm() < 1e-9);
            inverses.push(inv);
        }
        Ok(Self {
            name: name.into(),
            dim,
            provenance,
            elements,
            inverses,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// Image of a signed 1-based letter.
    pub fn image(&self, letter: i32) -> &ComplexMatrix {
        let idx = letter.unsigned_abs() as usize - 1;
        if letter > 0 {
            &self.elements[idx]
        } else {
            &self.inverses[idx]
        }
    }

    /// Ordered product of the word's letter images, first letter leftmost.
    pub fn evaluate(&self, word: &GeneratorWord) -> ComplexMatrix {
        let mut acc = ComplexMatrix::identity(self.dim);
        for &l in word.letters() {
            acc = acc.mul(self.image(l));
        }
        acc
    }

    /// The seven generator images on the endpoint-1 sector of eight strands.
    pub fn path_model(k: usize) -> Result<Self> {
        let basis = enumerate_basis(8, k, Some(1))?;
        let elements = (1..=7)
            .map(|i| rho_generator(i, &basis, 1))
            .collect::<Result<Vec<_>>>()?;
        Self::new(format!("rho(k={k})"), elements, Provenance::PathModel { k })
    }

    /// The images of the first two generators restricted to the invariant
    /// 2x2 block containing the zig-zag walk. The first generator is
    /// diagonal there, the second mixes the pair; together they generate a
    /// dense subgroup of the block's unitaries away from the excluded k.
    pub fn su2_block(k: usize) -> Result<Self> {
        let basis = enumerate_basis(8, k, Some(1))?;
        let alpha = basis
            .position(&zigzag_steps(8))
            .expect("zig-zag walk is legal");
        let mut partner_steps = zigzag_steps(8);
        partner_steps[1] = 1;
        partner_steps[2] = -1;
        let partner = basis
            .position(&partner_steps)
            .expect("the partner walk is legal for k >= 4");
        let pair = [alpha, partner];
        let restrict = |m: &ComplexMatrix| {
            ComplexMatrix::from_fn(2, |r, c| m[(pair[r], pair[c])])
        };
        let elements = (1..=2)
            .map(|i| rho_generator(i, &basis, 1).map(|m| restrict(&m)))
            .collect::<Result<Vec<_>>>()?;
        // the pair spans an invariant block of both generators, so the
        // restrictions stay unitary
        Self::new(
            format!("rho-block(k={k})"),
            elements,
            Provenance::PathModel { k },
        )
    }
}

/// A synthesized word together with its evaluated image and measured
/// projective distance to the target. Words are certificates: the matrix is
/// always the literal re-evaluation of the word.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub word: GeneratorWord,
    pub matrix: ComplexMatrix,
    pub distance: f64,
}

/// Coverage certificate: fraction of Haar-random unitaries of the net's
/// dimension that land within epsilon of some entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub samples: usize,
    pub fraction: f64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct NetEntry {
    pub word: GeneratorWord,
    pub matrix: ComplexMatrix,
}

/// A finite word net: entries pairwise more than `epsilon/2` apart in
/// projective distance, each stored matrix equal to its word's evaluation.
#[derive(Debug, Clone)]
pub struct EpsilonNet {
    pub epsilon: f64,
    pub entries: Vec<NetEntry>,
    pub coverage: Option<Coverage>,
}

impl EpsilonNet {
    pub fn dim(&self) -> usize {
        self.entries.first().map(|e| e.matrix.dim()).unwrap_or(0)
    }

    /// Index and projective distance of the entry closest to the target.
    pub fn nearest(&self, target: &ComplexMatrix) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, e) in self.entries.iter().enumerate() {
            let d = pd(target, &e.matrix);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        best
    }

    /// Serialize as JSON lines: a meta record followed by one record per
    /// entry with the word, the row-major `[re, im]` matrix, and the
    /// re-evaluation check distance.
    pub fn to_jsonl(&self, gens: &GeneratorSet) -> String {
        let mut out = String::new();
        let meta = serde_json::json!({
            "kind": "meta",
            "epsilon": self.epsilon,
            "dim": self.dim(),
            "entries": self.entries.len(),
            "generators": gens.name,
            "coverage": self.coverage.map(|c| c.fraction),
            "coverage_samples": self.coverage.map(|c| c.samples),
            "coverage_seed": self.coverage.map(|c| c.seed),
        });
        out.push_str(&meta.to_string());
        out.push('\n');
        for e in &self.entries {
            let dist_check = pd(&gens.evaluate(&e.word), &e.matrix);
            let flat: Vec<[f64; 2]> = (0..e.matrix.dim())
                .flat_map(|i| {
                    (0..e.matrix.dim()).map(move |j| {
                        let c = e.matrix[(i, j)];
                        [c.re, c.im]
                    })
                })
                .collect();
            let rec = serde_json::json!({
                "word": e.word.letters(),
                "matrix": flat,
                "dist_check": dist_check,
            });
            out.push_str(&rec.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let meta_line = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            message: "empty net file".into(),
        })?;
        let meta: serde_json::Value =
            serde_json::from_str(meta_line).map_err(|e| Error::Parse {
                line: 1,
                message: e.to_string(),
            })?;
        let epsilon = meta["epsilon"].as_f64().ok_or_else(|| Error::Parse {
            line: 1,
            message: "missing epsilon in meta record".into(),
        })?;
        let coverage = meta["coverage"].as_f64().map(|fraction| Coverage {
            samples: meta["coverage_samples"].as_u64().unwrap_or(0) as usize,
            fraction,
            seed: meta["coverage_seed"].as_u64().unwrap_or(0),
        });
        let mut entries = Vec::new();
        for (ln, line) in lines.enumerate() {
            let rec: serde_json::Value = serde_json::from_str(line).map_err(|e| Error::Parse {
                line: ln + 2,
                message: e.to_string(),
            })?;
            let word = GeneratorWord(
                rec["word"]
                    .as_array()
                    .ok_or_else(|| Error::Parse {
                        line: ln + 2,
                        message: "missing word".into(),
                    })?
                    .iter()
                    .map(|v| v.as_i64().unwrap_or(0) as i32)
                    .collect(),
            );
            let flat = rec["matrix"].as_array().ok_or_else(|| Error::Parse {
                line: ln + 2,
                message: "missing matrix".into(),
            })?;
            let dim = (flat.len() as f64).sqrt().round() as usize;
            let mut matrix = ComplexMatrix::zeros(dim);
            for i in 0..dim {
                for j in 0..dim {
                    let pair = &flat[i * dim + j];
                    matrix[(i, j)] = Complex64::new(
                        pair[0].as_f64().unwrap_or(0.0),
                        pair[1].as_f64().unwrap_or(0.0),
                    );
                }
            }
            entries.push(NetEntry { word, matrix });
        }
        Ok(Self {
            epsilon,
            entries,
            coverage,
        })
    }
}
