//! End-to-end pipeline: parse a circuit of adjacent two-qubit gates, compile
//! every gate into an eight-strand word through the epsilon-net and
//! Solovay-Kitaev, embed the words into the full braid group, and report the
//! certified error budget next to the measured amplitudes.

use num_complex::Complex64;
use serde_json::json;

use crate::braid::BraidWord;
use crate::density::{solovay_kitaev, EpsilonNet, GeneratorSet, GeneratorWord};
use crate::encoding::{encode_gate_on, reduce_to_b8, EncodedBasis};
use crate::error::{Error, Result};
use crate::numerics::matrix::{pd, pd_on_subspace, ComplexMatrix, C_ONE, C_ZERO};
use crate::pathmodel::{alpha_expectation, delta_scale};

// ---------------------------------------------------------------------------
// circuit representation and parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct Gate {
    pub name: String,
    /// 1-based position: the gate acts on qubits (position, position + 1).
    pub position: usize,
    /// 4x4 unitary on the two qubits, most significant qubit first.
    pub matrix: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct CircuitIR {
    pub qubits: usize,
    /// Gates in application order (the first gate acts first on the state).
    pub gates: Vec<Gate>,
}

fn hadamard() -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(2, |i, j| {
        Complex64::new(if (i, j) == (1, 1) { -s } else { s }, 0.0)
    })
}

fn t_gate() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[C_ONE, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)])
}

/// The named two-qubit gates of the circuit format.
pub fn named_gate(name: &str) -> Option<ComplexMatrix> {
    let id2 = ComplexMatrix::identity(2);
    match name {
        "HI" => Some(hadamard().kron(&id2)),
        "IH" => Some(id2.kron(&hadamard())),
        "TI" => Some(t_gate().kron(&id2)),
        "IT" => Some(id2.kron(&t_gate())),
        "CNOT" => {
            let mut m = ComplexMatrix::zeros(4);
            m[(0, 0)] = C_ONE;
            m[(1, 1)] = C_ONE;
            m[(2, 3)] = C_ONE;
            m[(3, 2)] = C_ONE;
            Some(m)
        }
        "CZ" => Some(ComplexMatrix::diagonal(&[C_ONE, C_ONE, C_ONE, -C_ONE])),
        "SWAP" => {
            let mut m = ComplexMatrix::zeros(4);
            m[(0, 0)] = C_ONE;
            m[(1, 2)] = C_ONE;
            m[(2, 1)] = C_ONE;
            m[(3, 3)] = C_ONE;
            Some(m)
        }
        _ => None,
    }
}

/// Parse the circuit text format: a `qubits N` header, then one gate per
/// line, either `NAME POSITION` or `U POSITION re,im ... re,im` with sixteen
/// row-major entries.
pub fn parse_circuit(text: &str) -> Result<CircuitIR> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty circuit file".into(),
    })?;
    let qubits = header
        .strip_prefix("qubits ")
        .and_then(|s| s.trim().parse::<usize>().ok())
        .ok_or(Error::Parse {
            line: hline,
            message: format!("expected 'qubits N', got '{header}'"),
        })?;
    if qubits < 2 {
        return Err(Error::Parse {
            line: hline,
            message: "at least two qubits are required for two-qubit gates".into(),
        });
    }
    let mut gates = Vec::new();
    for (ln, line) in lines {
        let mut tok = line.split_whitespace();
        let name = tok.next().unwrap().to_string();
        let position = tok
            .next()
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or(Error::Parse {
                line: ln,
                message: format!("missing or bad position in '{line}'"),
            })?;
        if position < 1 || position + 1 > qubits {
            return Err(Error::NonAdjacentGate {
                line: ln,
                position,
                qubits,
            });
        }
        let matrix = if name == "U" {
            let entries: Vec<&str> = tok.collect();
            if entries.len() != 16 {
                return Err(Error::Parse {
                    line: ln,
                    message: format!("explicit gate needs 16 entries, got {}", entries.len()),
                });
            }
            let mut m = ComplexMatrix::zeros(4);
            for (idx, e) in entries.iter().enumerate() {
                let (re, im) = e.split_once(',').ok_or(Error::Parse {
                    line: ln,
                    message: format!("bad entry '{e}', expected 're,im'"),
                })?;
                let re: f64 = re.parse().map_err(|_| Error::Parse {
                    line: ln,
                    message: format!("bad real part '{re}'"),
                })?;
                let im: f64 = im.parse().map_err(|_| Error::Parse {
                    line: ln,
                    message: format!("bad imaginary part '{im}'"),
                })?;
                m[(idx / 4, idx % 4)] = Complex64::new(re, im);
            }
            m
        } else {
            named_gate(&name).ok_or(Error::Parse {
                line: ln,
                message: format!("unknown gate '{name}'"),
            })?
        };
        let defect = matrix.unitary_defect();
        if defect > 1e-10 {
            return Err(Error::Parse {
                line: ln,
                message: format!("gate matrix is not unitary (defect {defect:.2e})"),
            });
        }
        gates.push(Gate {
            name,
            position,
            matrix,
        });
    }
    Ok(CircuitIR { qubits, gates })
}

/// Embed a two-qubit gate at `position` into the `2^n`-dimensional space.
pub fn embed_two_qubit(u4: &ComplexMatrix, position: usize, qubits: usize) -> ComplexMatrix {
    let pre = ComplexMatrix::identity(1 << (position - 1));
    let post = ComplexMatrix::identity(1 << (qubits - position - 1));
    pre.kron(u4).kron(&post)
}

/// The circuit's full unitary (first gate applied first).
pub fn circuit_unitary(c: &CircuitIR) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(1 << c.qubits);
    for g in &c.gates {
        u = embed_two_qubit(&g.matrix, g.position, c.qubits).mul(&u);
    }
    u
}

/// `<0^n | U | 0^n>`.
pub fn circuit_amplitude(c: &CircuitIR) -> Complex64 {
    circuit_unitary(c)[(0, 0)]
}

/// `<alpha| encode(U_L) ... encode(U_1) |alpha>`: the all-exact encoded
/// amplitude, isolating the encoding and reduction bookkeeping from any
/// synthesis error.
pub fn exact_encoded_amplitude(c: &CircuitIR, k: usize) -> Result<Complex64> {
    let code = EncodedBasis::new(c.qubits, k)?;
    let alpha = code.alpha_index();
    let mut v = vec![C_ZERO; code.dim()];
    v[alpha] = C_ONE;
    for g in &c.gates {
        let full = embed_two_qubit(&g.matrix, g.position, c.qubits);
        let encoded = encode_gate_on(&full, &code)?;
        v = encoded.apply(&v);
    }
    Ok(v[alpha])
}

// ---------------------------------------------------------------------------
// gate compilation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct GateSynthesis {
    pub word: GeneratorWord,
    /// Projective distance to the encoded gate on the encoded 4-dim subspace.
    pub s_distance: f64,
    /// Projective distance on the whole endpoint-1 sector.
    pub full_distance: f64,
}

/// Compile one two-qubit gate into a word over the seven eight-strand
/// generators, driving the Solovay-Kitaev recursion as deep as the net's
/// coverage supports and measuring the result on the encoded subspace.
pub fn compile_gate(
    u4: &ComplexMatrix,
    k: usize,
    delta: f64,
    net: &EpsilonNet,
    gens: &GeneratorSet,
) -> Result<GateSynthesis> {
    if u4.dim() != 4 {
        return Err(Error::DimensionMismatch {
            left: u4.dim(),
            right: 4,
        });
    }
    let code = EncodedBasis::new(2, k)?;
    let target = encode_gate_on(u4, &code)?;
    let dim = code.dim();
    let s_cols: Vec<Vec<Complex64>> = code
        .code_indices()
        .iter()
        .map(|&p| {
            let mut v = vec![C_ZERO; dim];
            v[p] = C_ONE;
            v
        })
        .collect();

    let assess = |word: GeneratorWord, matrix: ComplexMatrix| -> GateSynthesis {
        GateSynthesis {
            s_distance: pd_on_subspace(&matrix, &target, &s_cols),
            full_distance: pd(&matrix, &target),
            word,
        }
    };

    fn consider(best: &mut Option<GateSynthesis>, cand: GateSynthesis) {
        if best.as_ref().is_none_or(|b| cand.s_distance < b.s_distance) {
            *best = Some(cand);
        }
    }

    // single-letter shortcuts: a generator that happens to act exactly like
    // the encoded gate on the code subspace wins outright
    let mut best: Option<GateSynthesis> = None;
    consider(&mut best, assess(GeneratorWord::empty(), ComplexMatrix::identity(dim)));
    for g in 1..=gens.len() as i32 {
        for letter in [g, -g] {
            let m = gens.image(letter).clone();
            consider(&mut best, assess(GeneratorWord(vec![letter]), m));
        }
    }
    if best.as_ref().is_some_and(|b| b.s_distance < 1e-9) {
        return Ok(best.unwrap());
    }

    let coverage_ok = net.coverage.map(|c| c.fraction).unwrap_or(0.0) >= 0.99;
    let max_depth = if coverage_ok { 2 } else { 0 };
    for depth in 0..=max_depth {
        let s = solovay_kitaev(&target, net, gens, depth)?;
        let cand = assess(s.word, s.matrix);
        let good_enough = cand.s_distance <= delta;
        consider(&mut best, cand);
        if good_enough {
            break;
        }
    }
    Ok(best.unwrap())
}

// ---------------------------------------------------------------------------
// circuit compilation and the report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PromiseClass {
    Low,
    High,
    OutsidePromise,
}

impl PromiseClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            PromiseClass::Low => "LOW",
            PromiseClass::High => "HIGH",
            PromiseClass::OutsidePromise => "OUTSIDE_PROMISE",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "LOW" => Some(PromiseClass::Low),
            "HIGH" => Some(PromiseClass::High),
            "OUTSIDE_PROMISE" => Some(PromiseClass::OutsidePromise),
            _ => None,
        }
    }
}

pub fn classify_value(value: f64) -> PromiseClass {
    if value < 0.1 {
        PromiseClass::Low
    } else if value > 0.9 {
        PromiseClass::High
    } else {
        PromiseClass::OutsidePromise
    }
}

/// Classify `|<alpha| rho(b) |alpha>|` against the promise thresholds.
pub fn classify_promise(b: &BraidWord, k: usize) -> Result<(PromiseClass, f64)> {
    let value = alpha_expectation(b, k)?.norm();
    Ok((classify_value(value), value))
}

#[derive(Debug, Clone)]
pub struct GateReport {
    pub name: String,
    pub position: usize,
    pub delta_budget: f64,
    pub s_distance: f64,
    pub full_distance: f64,
    pub word_len: usize,
}

#[derive(Debug, Clone)]
pub struct CompilationReport {
    pub qubits: usize,
    pub k: usize,
    pub epsilon: f64,
    pub braid: BraidWord,
    pub gates: Vec<GateReport>,
    /// Sum of measured per-gate encoded-subspace distances.
    pub certified_bound: f64,
    /// The budgeted prefix bounds `i * epsilon / L`.
    pub claim_bounds: Vec<f64>,
    pub predicted_amplitude: Complex64,
    pub path_amplitude: Complex64,
    pub amplitude_error: f64,
    pub writhe: i64,
    pub delta_scale: Complex64,
    pub promise: PromiseClass,
    pub promise_value: f64,
    /// True only when the certified bound separates the promise thresholds.
    pub promise_certified: bool,
}

/// Compile a circuit gate by gate with the per-gate budget `epsilon / L`,
/// embed and concatenate the words (last gate on top, so the matrix product
/// runs in application order), and measure everything the report promises.
pub fn compile_circuit(
    c: &CircuitIR,
    k: usize,
    epsilon: f64,
    net: &EpsilonNet,
    gens: &GeneratorSet,
) -> Result<CompilationReport> {
    let n = c.qubits;
    let l = c.gates.len().max(1);
    let delta = epsilon / l as f64;

    let mut gate_reports = Vec::with_capacity(c.gates.len());
    let mut braids: Vec<BraidWord> = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        let synth = compile_gate(&g.matrix, k, delta, net, gens)?;
        braids.push(reduce_to_b8(synth.word.letters(), g.position, n)?);
        gate_reports.push(GateReport {
            name: g.name.clone(),
            position: g.position,
            delta_budget: delta,
            s_distance: synth.s_distance,
            full_distance: synth.full_distance,
            word_len: synth.word.len(),
        });
    }

    // application order: the first gate's braid sits at the bottom
    let mut letters = Vec::new();
    for b in braids.iter().rev() {
        letters.extend_from_slice(b.letters());
    }
    let braid = BraidWord::new(4 * n, letters)?;

    let predicted = circuit_amplitude(c);
    let path = alpha_expectation(&braid, k)?;
    let certified_bound: f64 = gate_reports.iter().map(|g| g.s_distance).sum();
    let claim_bounds = (1..=c.gates.len())
        .map(|i| i as f64 * epsilon / l as f64)
        .collect();
    let value = path.norm();
    let promise = classify_value(value);
    // the promise call is certified only if the error bound cannot move the
    // value across the nearer threshold
    let promise_certified = match promise {
        PromiseClass::Low => value + certified_bound < 0.1,
        PromiseClass::High => value - certified_bound > 0.9,
        PromiseClass::OutsidePromise => false,
    };

    Ok(CompilationReport {
        qubits: n,
        k,
        epsilon,
        writhe: crate::braid::plat_writhe(&braid)?,
        delta_scale: delta_scale(&braid, k)?,
        gates: gate_reports,
        certified_bound,
        claim_bounds,
        predicted_amplitude: predicted,
        amplitude_error: (predicted - path).norm(),
        path_amplitude: path,
        promise,
        promise_value: value,
        promise_certified,
        braid,
    })
}

impl CompilationReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "qubits": self.qubits,
            "k": self.k,
            "epsilon": self.epsilon,
            "strands": self.braid.strands(),
            "braid": self.braid.letters(),
            "gates": self.gates.iter().map(|g| json!({
                "name": g.name,
                "position": g.position,
                "delta_budget": g.delta_budget,
                "s_distance": g.s_distance,
                "full_distance": g.full_distance,
                "word_len": g.word_len,
            })).collect::<Vec<_>>(),
            "certified_bound": self.certified_bound,
            "claim_bounds": self.claim_bounds,
            "predicted_amplitude": [self.predicted_amplitude.re, self.predicted_amplitude.im],
            "path_amplitude": [self.path_amplitude.re, self.path_amplitude.im],
            "amplitude_error": self.amplitude_error,
            "writhe": self.writhe,
            "delta_scale": [self.delta_scale.re, self.delta_scale.im],
            "promise": self.promise.as_str(),
            "promise_value": self.promise_value,
            "promise_certified": self.promise_certified,
            "metadata": {
                "crossing_sign_convention": "positive letter carries writhe +1 (unknot calibration)",
                "jones_normalization": "unknot maps to 1; multiply by the loop value for the d-normalization",
                "t_branch": "t^{1/2} = A^{-2}",
            },
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let get = |field: &str| -> Result<&serde_json::Value> {
            v.get(field).ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("report is missing '{field}'"),
            })
        };
        let strands = get("strands")?.as_u64().unwrap_or(0) as usize;
        let letters: Vec<i32> = get("braid")?
            .as_array()
            .map(|a| a.iter().map(|x| x.as_i64().unwrap_or(0) as i32).collect())
            .unwrap_or_default();
        let braid = BraidWord::new(strands, letters)?;
        let complex = |field: &str| -> Result<Complex64> {
            let a = get(field)?.as_array().ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("'{field}' must be [re, im]"),
            })?;
            Ok(Complex64::new(
                a[0].as_f64().unwrap_or(0.0),
                a[1].as_f64().unwrap_or(0.0),
            ))
        };
        let gates = get("gates")?
            .as_array()
            .map(|arr| {
                arr.iter()
                    .map(|g| GateReport {
                        name: g["name"].as_str().unwrap_or("?").to_string(),
                        position: g["position"].as_u64().unwrap_or(1) as usize,
                        delta_budget: g["delta_budget"].as_f64().unwrap_or(0.0),
                        s_distance: g["s_distance"].as_f64().unwrap_or(0.0),
                        full_distance: g["full_distance"].as_f64().unwrap_or(0.0),
                        word_len: g["word_len"].as_u64().unwrap_or(0) as usize,
                    })
                    .collect()
            })
            .unwrap_or_default();
        Ok(CompilationReport {
            qubits: get("qubits")?.as_u64().unwrap_or(0) as usize,
            k: get("k")?.as_u64().unwrap_or(0) as usize,
            epsilon: get("epsilon")?.as_f64().unwrap_or(0.0),
            braid,
            gates,
            certified_bound: get("certified_bound")?.as_f64().unwrap_or(0.0),
            claim_bounds: get("claim_bounds")?
                .as_array()
                .map(|a| a.iter().map(|x| x.as_f64().unwrap_or(0.0)).collect())
                .unwrap_or_default(),
            predicted_amplitude: complex("predicted_amplitude")?,
            path_amplitude: complex("path_amplitude")?,
            amplitude_error: get("amplitude_error")?.as_f64().unwrap_or(0.0),
            writhe: get("writhe")?.as_i64().unwrap_or(0),
            delta_scale: complex("delta_scale")?,
            promise: PromiseClass::parse(get("promise")?.as_str().unwrap_or(""))
                .unwrap_or(PromiseClass::OutsidePromise),
            promise_value: get("promise_value")?.as_f64().unwrap_or(0.0),
            promise_certified: get("promise_certified")?.as_bool().unwrap_or(false),
        })
    }
}

/// One line of the verification output.
#[derive(Debug, Clone)]
pub struct VerifyLine {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

/// Recompute everything derivable from the braid alone and compare with the
/// stored report values.
pub fn verify_report(report: &CompilationReport) -> Result<Vec<VerifyLine>> {
    let mut lines = Vec::new();
    let path = alpha_expectation(&report.braid, report.k)?;
    lines.push(VerifyLine {
        check: "path_amplitude".into(),
        pass: (path - report.path_amplitude).norm() < 1e-9,
        detail: format!("recomputed {path}"),
    });
    let w = crate::braid::plat_writhe(&report.braid)?;
    lines.push(VerifyLine {
        check: "writhe".into(),
        pass: w == report.writhe,
        detail: format!("recomputed {w}"),
    });
    let ds = delta_scale(&report.braid, report.k)?;
    lines.push(VerifyLine {
        check: "delta_scale".into(),
        pass: (ds - report.delta_scale).norm() < 1e-9,
        detail: format!("recomputed {ds}"),
    });
    let (promise, value) = classify_promise(&report.braid, report.k)?;
    lines.push(VerifyLine {
        check: "promise".into(),
        pass: promise == report.promise && (value - report.promise_value).abs() < 1e-9,
        detail: format!("recomputed {} at {value:.6}", promise.as_str()),
    });
    lines.push(VerifyLine {
        check: "amplitude_error_vs_bound".into(),
        pass: report.amplitude_error <= report.certified_bound + 1e-9,
        detail: format!(
            "measured {:.6} <= certified {:.6}",
            report.amplitude_error, report.certified_bound
        ),
    });
    Ok(lines)
}
