//! Four-step qubit encoding, encoded gates, and the eight-strand reduction.
//!
//! Bit 0 is carried by the walk `1->2->1->2->1`, bit 1 by `1->2->3->2->1`;
//! an n-qubit string occupies `4n` strands and the zig-zag walk is the
//! encoding of the all-zeros string. A gate on qubits `(s, s+1)` embeds into
//! the `4n`-strand group by shifting every eight-strand generator index by
//! `4(s-1)`, and on the encoded subspace the embedded word factors as
//! identity (x) eight-strand action (x) identity.

use num_complex::Complex64;

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::numerics::matrix::ComplexMatrix;
use crate::pathmodel::{enumerate_basis, phi_matrix, PathBasis};

/// Step sequence encoding one bit.
pub fn encoded_bit_steps(bit: u8) -> [i8; 4] {
    if bit == 0 {
        [1, -1, 1, -1]
    } else {
        [1, 1, -1, -1]
    }
}

/// Step sequence encoding a bit string (most significant qubit first).
pub fn encoded_string_steps(bits: &[u8]) -> Vec<i8> {
    bits.iter()
        .flat_map(|&b| encoded_bit_steps(b).into_iter())
        .collect()
}

/// The encoded computational subspace S inside `H_{4n,k,1}`.
#[derive(Debug, Clone)]
pub struct EncodedBasis {
    pub qubits: usize,
    pub k: usize,
    basis: PathBasis,
    code_index: Vec<usize>,
}

impl EncodedBasis {
    pub fn new(qubits: usize, k: usize) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::Invalid("at least one qubit required".into()));
        }
        let basis = enumerate_basis(4 * qubits, k, Some(1))?;
        let code_index = (0..1usize << qubits)
            .map(|x| {
                let bits: Vec<u8> = (0..qubits)
                    .map(|q| ((x >> (qubits - 1 - q)) & 1) as u8)
                    .collect();
                basis
                    .position(&encoded_string_steps(&bits))
                    .expect("encoded walks are always legal")
            })
            .collect();
        Ok(Self {
            qubits,
            k,
            basis,
            code_index,
        })
    }

    pub fn basis(&self) -> &PathBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Path index of the encoded bit string `x` (msb = qubit 1).
    pub fn path_of(&self, x: usize) -> usize {
        self.code_index[x]
    }

    pub fn code_indices(&self) -> &[usize] {
        &self.code_index
    }

    /// The zig-zag walk, i.e. the encoding of the all-zeros string.
    pub fn alpha_index(&self) -> usize {
        self.code_index[0]
    }
}

/// Encode a `2^n`-dimensional unitary as an operator on `H_{4n,k,1}`:
/// the gate's matrix elements on the encoded strings, identity elsewhere.
pub fn encode_gate(u: &ComplexMatrix, qubits: usize, k: usize) -> Result<ComplexMatrix> {
    let code = EncodedBasis::new(qubits, k)?;
    encode_gate_on(u, &code)
}

/// Same as [`encode_gate`] with a prebuilt [`EncodedBasis`].
pub fn encode_gate_on(u: &ComplexMatrix, code: &EncodedBasis) -> Result<ComplexMatrix> {
    let n_states = 1usize << code.qubits;
    if u.dim() != n_states {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: n_states,
        });
    }
    let defect = u.unitary_defect();
    if defect > 1e-10 {
        return Err(Error::NotUnitary { defect });
    }
    let dim = code.dim();
    let mut out = ComplexMatrix::identity(dim);
    for j in 0..n_states {
        let cj = code.path_of(j);
        out[(cj, cj)] = Complex64::new(0.0, 0.0);
        for i in 0..n_states {
            out[(code.path_of(i), cj)] = u[(i, j)];
        }
    }
    Ok(out)
}

/// Embed an eight-strand generator word at encoded-qubit position `s`
/// (acting on qubits `s, s+1` of `n`): every letter index shifts by `4(s-1)`.
pub fn reduce_to_b8(letters: &[i32], position: usize, qubits: usize) -> Result<BraidWord> {
    if position < 1 || position + 1 > qubits {
        return Err(Error::Invalid(format!(
            "gate position {position} out of range for {qubits} qubits"
        )));
    }
    let shift = 4 * (position - 1) as i32;
    let shifted: Vec<i32> = letters
        .iter()
        .map(|&l| {
            if l == 0 || l.abs() > 7 {
                return Err(Error::GeneratorOutOfRange {
                    index: l.unsigned_abs() as usize,
                    max: 7,
                });
            }
            Ok(if l > 0 { l + shift } else { l - shift })
        })
        .collect::<Result<_>>()?;
    BraidWord::new(4 * qubits, shifted)
}

/// One invariant block of a generator on `H_{8,k,1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// Basis indices, ascending.
    pub indices: Vec<usize>,
    /// Whether the Temperley-Lieb image is nonzero on this block.
    pub nontrivial: bool,
}

/// Partition of the `H_{8,k,1}` basis into invariant blocks of one generator.
#[derive(Debug, Clone)]
pub struct BlockStructure {
    pub generator: usize,
    pub blocks: Vec<Block>,
}

impl BlockStructure {
    pub fn nontrivial_blocks(&self) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(|b| b.nontrivial)
    }
}

/// Blocks of generator `i` on `H_{8,k,1}`, computed from the nonzero
/// pattern of the Temperley-Lieb image.
pub fn block_structure(i: usize, k: usize) -> Result<BlockStructure> {
    if k < 5 {
        return Err(Error::Invalid(format!(
            "block structure needs k >= 5, got {k}"
        )));
    }
    if !(1..=7).contains(&i) {
        return Err(Error::GeneratorOutOfRange { index: i, max: 7 });
    }
    let basis = enumerate_basis(8, k, Some(1))?;
    let phi = phi_matrix(i, &basis)?;
    let dim = basis.len();
    let mut assigned = vec![false; dim];
    let mut blocks = Vec::new();
    for p in 0..dim {
        if assigned[p] {
            continue;
        }
        let mut indices = vec![p];
        assigned[p] = true;
        for q in p + 1..dim {
            if phi[(p, q)].norm() > 0.0 || phi[(q, p)].norm() > 0.0 {
                indices.push(q);
                assigned[q] = true;
            }
        }
        let nontrivial = indices
            .iter()
            .any(|&a| indices.iter().any(|&b| phi[(a, b)].norm() > 0.0));
        blocks.push(Block { indices, nontrivial });
    }
    Ok(BlockStructure {
        generator: i,
        blocks,
    })
}

/// Canonical published labeling of `H_{8,k,1}` for `k > 5`: the nontrivial
/// blocks of the seven generators in the standard 14-path numbering.
/// Singletons are height-1 diagonal blocks; pairs mix under the generator.
pub const REFERENCE_BLOCKS: [&[&[usize]]; 7] = [
    &[&[1], &[3], &[5], &[7], &[9]],
    &[&[1, 2], &[3, 4], &[5, 6], &[7, 8], &[9, 12]],
    &[&[1], &[3], &[6, 10], &[8, 11], &[12, 13]],
    &[&[1, 5], &[2, 6], &[3, 7], &[4, 8], &[13, 14]],
    &[&[1], &[2], &[7, 9], &[8, 12], &[11, 13]],
    &[&[1, 3], &[2, 4], &[5, 7], &[6, 8], &[10, 11]],
    &[&[1], &[2], &[5], &[6], &[10]],
];

/// Reference structure adapted to `k`: at `k = 5` label 14 is absent (its
/// walk leaves the graph) and the pair (13,14) degenerates to the
/// nontrivial singleton (13).
fn reference_for(k: usize) -> Vec<Vec<Vec<usize>>> {
    REFERENCE_BLOCKS
        .iter()
        .map(|gen| {
            gen.iter()
                .map(|block| {
                    let filtered: Vec<usize> = block
                        .iter()
                        .copied()
                        .filter(|&l| k > 5 || l != 14)
                        .collect();
                    filtered
                })
                .filter(|b| !b.is_empty())
                .collect()
        })
        .collect()
}

/// A bijection from basis indices to the published labels, consistent with
/// all seven computed block structures.
#[derive(Debug, Clone)]
pub struct Labeling {
    /// `label_of[path_index] = label` (1-based).
    pub label_of: Vec<usize>,
    /// Whether more than one consistent bijection exists (the returned one
    /// is the lexicographically least).
    pub ambiguous: bool,
}

/// Reconstruct the published path labels from first principles: search for
/// a bijection under which every computed block structure matches the
/// reference exactly. Fails loudly if no bijection exists.
pub fn reconstruct_labels(k: usize) -> Result<Labeling> {
    let structures: Vec<BlockStructure> = (1..=7)
        .map(|i| block_structure(i, k))
        .collect::<Result<_>>()?;
    let dim = enumerate_basis(8, k, Some(1))?.len();
    let reference = reference_for(k);
    let labels: Vec<usize> = (1..=dim).collect();

    // Per-generator roles: 0 trivial, 1 nontrivial singleton, 2 in a pair.
    // Pairs additionally record the partner.
    let mut path_role = vec![[0u8; 7]; dim];
    let mut path_partner = vec![[usize::MAX; 7]; dim];
    for (g, s) in structures.iter().enumerate() {
        for block in &s.blocks {
            match (block.indices.len(), block.nontrivial) {
                (1, false) => {}
                (1, true) => path_role[block.indices[0]][g] = 1,
                (2, true) => {
                    let (a, b) = (block.indices[0], block.indices[1]);
                    path_role[a][g] = 2;
                    path_role[b][g] = 2;
                    path_partner[a][g] = b;
                    path_partner[b][g] = a;
                }
                _ => {
                    return Err(Error::Invalid(format!(
                        "unexpected block {:?} for generator {}",
                        block.indices,
                        g + 1
                    )))
                }
            }
        }
    }

    let mut label_role = vec![[0u8; 7]; dim + 1];
    let mut label_partner = vec![[usize::MAX; 7]; dim + 1];
    for (g, gen_blocks) in reference.iter().enumerate() {
        for block in gen_blocks {
            match block.len() {
                1 => label_role[block[0]][g] = 1,
                2 => {
                    label_role[block[0]][g] = 2;
                    label_role[block[1]][g] = 2;
                    label_partner[block[0]][g] = block[1];
                    label_partner[block[1]][g] = block[0];
                }
                _ => unreachable!(),
            }
        }
    }

    // candidate labels per path, by role signature
    let candidates: Vec<Vec<usize>> = (0..dim)
        .map(|p| {
            labels
                .iter()
                .copied()
                .filter(|&l| label_role[l] == path_role[p])
                .collect()
        })
        .collect();

    let mut assignment = vec![0usize; dim];
    let mut used = vec![false; dim + 1];
    let mut solutions: Vec<Vec<usize>> = Vec::new();
    search(
        0,
        dim,
        &candidates,
        &path_partner,
        &label_partner,
        &mut assignment,
        &mut used,
        &mut solutions,
    );
    match solutions.len() {
        0 => Err(Error::NoConsistentLabeling),
        n => Ok(Labeling {
            label_of: solutions[0].clone(),
            ambiguous: n > 1,
        }),
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    p: usize,
    dim: usize,
    candidates: &[Vec<usize>],
    path_partner: &[[usize; 7]],
    label_partner: &[[usize; 7]],
    assignment: &mut Vec<usize>,
    used: &mut Vec<bool>,
    solutions: &mut Vec<Vec<usize>>,
) {
    if solutions.len() >= 2 {
        return;
    }
    if p == dim {
        solutions.push(assignment.clone());
        return;
    }
    'next: for &l in &candidates[p] {
        if used[l] {
            continue;
        }
        for g in 0..7 {
            let partner = path_partner[p][g];
            if partner != usize::MAX && partner < p {
                // the partner is already assigned; labels must pair up
                if label_partner[assignment[partner]][g] != l {
                    continue 'next;
                }
            }
        }
        assignment[p] = l;
        used[l] = true;
        search(
            p + 1,
            dim,
            candidates,
            path_partner,
            label_partner,
            assignment,
            used,
            solutions,
        );
        used[l] = false;
    }
    assignment[p] = 0;
}
