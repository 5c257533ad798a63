//! braidloom command line: exact Jones evaluation of plat closures, the
//! path-model representation, epsilon-net management, and circuit-to-braid
//! compilation with certified error reports.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use braidloom::braid::{plat_writhe, BraidWord};
use braidloom::compiler::{compile_circuit, parse_circuit, verify_report, CompilationReport};
use braidloom::density::{
    aux_generators, aux_su2_block, build_commutator_net, build_net, coverage, transfer_net,
    EpsilonNet, GeneratorSet,
};
use braidloom::encoding::{block_structure, reconstruct_labels};
use braidloom::kauffman::{bracket, bracket_fast, jones, jones_at_root, STATE_SUM_BUDGET};
use braidloom::numerics::laurent::LaurentPolynomial;
use braidloom::numerics::matrix::ComplexMatrix;
use braidloom::pathmodel::{alpha_expectation, delta_scale, enumerate_basis, rho_generator};

#[derive(Parser)]
#[command(name = "braidloom", about = "Jones polynomials of plat closures and circuit-to-braid compilation", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NetSpace {
    /// The seven generators on the endpoint-1 sector of eight strands.
    Full,
    /// The first two generators on the invariant 2x2 block.
    Block,
    /// Auxiliary generators (limit frames, fixed-k0 eigenvalues).
    AuxFull,
    /// Auxiliary generators restricted to the 2x2 block.
    AuxBlock,
}

#[derive(Subcommand)]
enum Command {
    /// Kauffman bracket / Jones polynomial of a braid's plat closure.
    Jones {
        #[arg(long)]
        braid: PathBuf,
        #[arg(long)]
        k: usize,
        /// Print the exact Laurent polynomial (state-sum oracle).
        #[arg(long)]
        exact: bool,
        /// Use the transfer-matrix evaluation (no crossing budget).
        #[arg(long)]
        fast: bool,
    },
    /// Dump the generator images of the path-model representation.
    Rep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = true)]
        dump_generators: bool,
    },
    /// Path-model expectation value of a braid word.
    Expect {
        #[arg(long)]
        braid: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Block structure of the seven generators and the reconstructed labels.
    Blocks {
        #[arg(long)]
        k: usize,
    },
    /// Build, transfer or re-certify epsilon nets.
    Net {
        #[command(subcommand)]
        action: NetAction,
    },
    /// Compile a circuit into a braid word with a certified error report.
    Compile {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute everything derivable from a report's braid and compare.
    Verify {
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Subcommand)]
enum NetAction {
    Build {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 7)]
        k0: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = NetSpace::Full)]
        space: NetSpace,
        /// Store group commutators of short words instead of plain words.
        #[arg(long)]
        commutator: bool,
        #[arg(long)]
        out: PathBuf,
    },
    Transfer {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 7)]
        k0: usize,
        #[arg(long)]
        out: PathBuf,
    },
    Coverage {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0x636f766572)]
        seed: u64,
    },
}

fn load_braid(path: &PathBuf) -> Result<BraidWord> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(BraidWord::from_text(&text)?)
}

fn generators_for(space: NetSpace, k: usize, k0: usize) -> Result<GeneratorSet> {
    Ok(match space {
        NetSpace::Full => GeneratorSet::path_model(k)?,
        NetSpace::Block => GeneratorSet::su2_block(k)?,
        NetSpace::AuxFull => aux_generators(k0)?,
        NetSpace::AuxBlock => aux_su2_block(k0)?,
    })
}

fn laurent_json(p: &LaurentPolynomial) -> serde_json::Value {
    json!(p.to_string())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Jones { braid, k, exact, fast } => {
            let b = load_braid(&braid)?;
            let br = if fast || b.crossings() > STATE_SUM_BUDGET {
                bracket_fast(&b)?
            } else {
                bracket(&b)?
            };
            let w = plat_writhe(&b)?;
            let v = jones(&b).or_else(|_| -> braidloom::Result<_> {
                // beyond the oracle budget: apply the writhe factor to the
                // fast bracket instead
                let sign = if (3 * w).rem_euclid(2) == 0 { 1 } else { -1 };
                let factor = LaurentPolynomial::monomial(-3 * w, sign);
                Ok(&factor * &br)
            })?;
            let value = jones_at_root(&b, k).or_else(|_| v.eval(braidloom::pathmodel::root_of_unity_base(k)))?;
            let d = LaurentPolynomial::loop_value();
            let out = json!({
                "polynomial": if exact { laurent_json(&v) } else { serde_json::Value::Null },
                "bracket": if exact { laurent_json(&br) } else { serde_json::Value::Null },
                "value": [value.re, value.im],
                "writhe": w,
                "k": k,
                "normalization": {
                    "convention": "unknot_to_one",
                    "polynomial_unknot_to_d": if exact { laurent_json(&(&v * &d)) } else { serde_json::Value::Null },
                },
                "metadata": {
                    "crossing_sign_convention": "positive letter carries writhe +1 (unknot calibration)",
                    "t_branch": "t^{1/2} = A^{-2}",
                },
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Rep { n, k, dump_generators } => {
            let basis = enumerate_basis(n, k, Some(1))?;
            let mut gens = Vec::new();
            if dump_generators {
                for i in 1..n {
                    let m = rho_generator(i, &basis, 1)?;
                    gens.push(matrix_json(&m));
                }
            }
            let out = json!({
                "n": n,
                "k": k,
                "dim": basis.len(),
                "endpoint": 1,
                "generators": gens,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Expect { braid, k } => {
            let b = load_braid(&braid)?;
            let v = alpha_expectation(&b, k)?;
            let d = delta_scale(&b, k)?;
            let out = json!({
                "re": v.re,
                "im": v.im,
                "delta": [d.re, d.im],
                "abs": v.norm(),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Blocks { k } => {
            let labeling = reconstruct_labels(k)?;
            let mut per_generator = Vec::new();
            for i in 1..=7 {
                let s = block_structure(i, k)?;
                per_generator.push(json!({
                    "generator": i,
                    "blocks": s.blocks.iter().map(|b| json!({
                        "paths": b.indices,
                        "labels": b.indices.iter().map(|&p| labeling.label_of[p]).collect::<Vec<_>>(),
                        "nontrivial": b.nontrivial,
                    })).collect::<Vec<_>>(),
                }));
            }
            let out = json!({
                "k": k,
                "labeling": labeling.label_of,
                "ambiguous": labeling.ambiguous,
                "structure": per_generator,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Net { action } => match action {
            NetAction::Build { k, k0, eps, max_len, space, commutator, out } => {
                let gens = generators_for(space, k, k0)?;
                let net = if commutator {
                    build_commutator_net(&gens, eps, max_len)
                } else {
                    build_net(&gens, eps, max_len)
                };
                fs::write(&out, net.to_jsonl(&gens))?;
                eprintln!(
                    "net: {} entries at eps {eps}, coverage {:?}",
                    net.entries.len(),
                    net.coverage
                );
            }
            NetAction::Transfer { input, k, k0, out } => {
                let text = fs::read_to_string(&input)?;
                let hat = EpsilonNet::from_jsonl(&text)?;
                let gens = if hat.dim() == 2 {
                    GeneratorSet::su2_block(k)?
                } else {
                    GeneratorSet::path_model(k)?
                };
                let t = transfer_net(&hat, &gens, k, k0)?;
                fs::write(&out, t.net.to_jsonl(&gens))?;
                eprintln!(
                    "transferred {} entries with exponent m = {}, max deviation {:.4}",
                    t.net.entries.len(),
                    t.exponent,
                    t.max_deviation
                );
            }
            NetAction::Coverage { input, samples, seed } => {
                let text = fs::read_to_string(&input)?;
                let net = EpsilonNet::from_jsonl(&text)?;
                let cert = coverage(&net, samples, seed);
                println!(
                    "{}",
                    json!({
                        "entries": net.entries.len(),
                        "epsilon": net.epsilon,
                        "samples": cert.samples,
                        "fraction": cert.fraction,
                        "seed": cert.seed,
                    })
                );
            }
        },
        Command::Compile { circuit, k, eps, net, out } => {
            let text = fs::read_to_string(&circuit)?;
            let c = parse_circuit(&text)?;
            let net_text = fs::read_to_string(&net)?;
            let net = EpsilonNet::from_jsonl(&net_text)?;
            let gens = GeneratorSet::path_model(k)?;
            if net.dim() != gens.dim {
                bail!(
                    "net dimension {} does not match the generator dimension {}",
                    net.dim(),
                    gens.dim
                );
            }
            let report = compile_circuit(&c, k, eps, &net, &gens)?;
            let rendered = serde_json::to_string_pretty(&report.to_json())?;
            match out {
                Some(path) => fs::write(path, &rendered)?,
                None => println!("{rendered}"),
            }
            eprintln!(
                "compiled {} gates; certified bound {:.4}; promise {} (certified: {})",
                report.gates.len(),
                report.certified_bound,
                report.promise.as_str(),
                report.promise_certified
            );
        }
        Command::Verify { report } => {
            let text = fs::read_to_string(&report)?;
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let report = CompilationReport::from_json(&value)?;
            let lines = verify_report(&report)?;
            let mut all = true;
            for l in &lines {
                println!("{} {}: {}", if l.pass { "PASS" } else { "FAIL" }, l.check, l.detail);
                all &= l.pass;
            }
            if !all {
                bail!("verification failed");
            }
        }
    }
    Ok(())
}

fn matrix_json(m: &ComplexMatrix) -> serde_json::Value {
    let flat: Vec<[f64; 2]> = (0..m.dim())
        .flat_map(|i| (0..m.dim()).map(move |j| [m[(i, j)].re, m[(i, j)].im]))
        .collect();
    json!({ "dim": m.dim(), "entries": flat })
}
