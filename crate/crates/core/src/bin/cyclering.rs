use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cyclering::cycle_ring::CycleRingElement;
use cyclering::genus::{enumerate_genus_with, GenusData, GenusLimits};
use cyclering::isometry::{automorphism_info_with, is_isometric_with, SearchLimits};
use cyclering::json::*;
use cyclering::linalg::{parse_rational, RationalMatrix};
use cyclering::qseries::theta_expansion;
use cyclering::special_cycles::{
    eisenstein_coefficient, inner_product, reduced_special_cycle, sc_pairing_matrix, sc_radical_rank, special_cycle,
    CycleGenerator,
};
use cyclering::verify::{run_suite, SUITES};
use cyclering::weights::{rep_number_weighted, WeightFunction};
use cyclering::{Error, Result};

/// Exact lattice computations and the special-cycle ring of a positive
/// definite lattice. Lattice arguments are JSON files or bundled names
/// (I1…I8, D4, E8, E8E8, D16+); genus arguments are genus JSON files or
/// lattices, whose genus is then enumerated. JSON arguments such as --T
/// may be file paths or inline JSON.
#[derive(Parser)]
#[command(name = "cyclering", version)]
struct Cli {
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a genus by p-neighbors.
    Genus {
        /// Bundled lattice name or lattice JSON
        lattice: String,
        /// Neighbor prime when a genus is enumerated
        #[arg(long, default_value_t = 3)]
        prime: u64,
        /// Stop with an error beyond this many classes
        #[arg(long, default_value_t = 64)]
        max_classes: usize,
    },
    /// Orders of O(L) and SO(L) with generators.
    Aut {
        /// Bundled lattice name or lattice JSON
        lattice: String,
    },
    /// An isometry U with UᵀG₁U = G₂, or "distinct".
    Isom { a: String, b: String },
    /// Weighted representation number of a Gram target.
    Rep {
        /// Bundled lattice name or lattice JSON
        lattice: String,
        /// Gram target: matrix JSON, or a scalar such as 1/2
        #[arg(long = "T")]
        t: String,
        /// Weight JSON; defaults to the trivial weight
        #[arg(long)]
        weight: Option<String>,
    },
    /// Special cycle: sharp class per genus class, flat reps and A(T).
    Cycle {
        /// Genus JSON file, or a lattice whose genus is enumerated
        genus: String,
        /// Gram target: matrix JSON, or a scalar such as 1/2
        #[arg(long = "T")]
        t: String,
        /// Weight JSON; defaults to the trivial weight
        #[arg(long)]
        weight: Option<String>,
        /// Neighbor prime when a genus is enumerated
        #[arg(long, default_value_t = 3)]
        prime: u64,
    },
    /// Inner product of two flat special cycles.
    Pair {
        /// Genus JSON file, or a lattice whose genus is enumerated
        genus: String,
        /// First Gram target
        #[arg(long = "T1")]
        t1: String,
        /// Second Gram target
        #[arg(long = "T2")]
        t2: String,
        /// Weight for T1
        #[arg(long)]
        weight1: Option<String>,
        /// Weight for T2
        #[arg(long)]
        weight2: Option<String>,
        /// Neighbor prime when a genus is enumerated
        #[arg(long, default_value_t = 3)]
        prime: u64,
    },
    /// Truncated theta series of a genus.
    Theta {
        /// Genus JSON file, or a lattice whose genus is enumerated
        genus: String,
        /// Degree of the theta series
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Bound on the trace of 2T.
        #[arg(long)]
        bound: String,
        /// Weight JSON; defaults to the trivial weight
        #[arg(long)]
        weight: Option<String>,
        /// Neighbor prime when a genus is enumerated
        #[arg(long, default_value_t = 3)]
        prime: u64,
    },
    /// Cycle ring arithmetic on element JSON files.
    Ring {
        #[arg(value_parser = ["mul", "deg", "pair", "reduce"])]
        op: String,
        /// Ring element JSON
        a: String,
        /// Second element, for mul and pair
        b: Option<String>,
        /// Cutoff for list-form elements
        #[arg(long)]
        cutoff: Option<usize>,
        /// Ambient rank for list-form elements
        #[arg(long)]
        ambient: Option<usize>,
    },
    /// Pairing matrix between two generator families.
    GramMatrix {
        /// Genus JSON file, or a lattice whose genus is enumerated
        genus: String,
        /// List of targets, or of {"T": ..., "weight": ...}.
        #[arg(long)]
        left: String,
        /// Same format as --left
        #[arg(long)]
        right: String,
        /// Neighbor prime when a genus is enumerated
        #[arg(long, default_value_t = 3)]
        prime: u64,
    },
    /// Rank and left kernel of a pairing matrix.
    ScRank {
        /// Pairing matrix JSON, as written by gram-matrix
        matrix: String,
    },
    /// Run a verification suite, or `all`.
    Verify {
        /// product-formula, truncation-hom, siegel-e8, genus16, radical, orbit-sum or all
        suite: String,
    },
}

fn json_arg(arg: &str) -> Result<Value> {
    let p = Path::new(arg);
    if p.is_file() {
        return read_json(p);
    }
    match serde_json::from_str(arg) {
        Ok(v) => Ok(v),
        Err(_) if parse_rational(arg).is_ok() => Ok(Value::String(arg.to_string())),
        Err(_) => Err(Error::Parse(format!("`{arg}` is neither a file nor JSON"))),
    }
}

fn load_genus(arg: &str, prime: u64) -> Result<Arc<GenusData>> {
    if Path::new(arg).is_file() {
        let v = read_json(Path::new(arg))?;
        if v.get("classes").is_some() {
            return Ok(Arc::new(genus_from_json(&v)?));
        }
    }
    let l = load_lattice(arg)?;
    let limits = GenusLimits { search: SearchLimits::from_env(), ..GenusLimits::default() };
    Ok(Arc::new(enumerate_genus_with(&l, prime, &limits)?))
}

fn weight_arg(arg: Option<&str>, n: usize, genus: &GenusData) -> Result<WeightFunction> {
    match arg {
        None => Ok(WeightFunction::trivial(n)),
        Some(a) => weight_from_json(&json_arg(a)?, Some(&genus.base)),
    }
}

fn generators(v: &Value, genus: &GenusData) -> Result<Vec<CycleGenerator>> {
    let list = v.as_array().ok_or_else(|| Error::Parse("generator family must be a list".into()))?;
    list.iter()
        .map(|g| {
            let (t, w) = match g.get("T") {
                Some(t) => (target_from_json(t)?, g.get("weight")),
                None => (target_from_json(g)?, None),
            };
            let w = match w {
                Some(w) => weight_from_json(w, Some(&genus.base))?,
                None => WeightFunction::trivial(t.n()),
            };
            Ok((t, w))
        })
        .collect()
}

fn ring_arg(arg: &str, cutoff: Option<usize>, ambient: Option<usize>) -> Result<CycleRingElement> {
    ring_element_from_json(&json_arg(arg)?, cutoff, ambient)
}

/// The result, a one-line summary, and whether verification passed.
fn run(cmd: Command) -> Result<(Value, String, bool)> {
    let limits = SearchLimits::from_env();
    Ok(match cmd {
        Command::Genus { lattice, prime, max_classes } => {
            let l = load_lattice(&lattice)?;
            let gl = GenusLimits { max_classes, search: limits, ..GenusLimits::default() };
            let g = enumerate_genus_with(&l, prime, &gl)?;
            let summary = format!("{} classes, mass {}", g.class_count(), g.mass);
            (genus_to_json(&g), summary, true)
        }
        Command::Aut { lattice } => {
            let a = automorphism_info_with(&load_lattice(&lattice)?, limits)?;
            let summary = format!("|O| = {}, |SO| = {}, {} generators", a.order_o, a.order_so, a.generators.len());
            (aut_to_json(&a), summary, true)
        }
        Command::Isom { a, b } => {
            let w = is_isometric_with(&load_lattice(&a)?, &load_lattice(&b)?, limits)?;
            match w {
                Some(u) => {
                    let rows: Vec<String> = u.matrix().iter().map(|r| format!("{r:?}")).collect();
                    (json!({ "isometric": true, "witness": u.matrix() }), rows.join("\n"), true)
                }
                None => (json!({ "isometric": false, "witness": null }), "distinct".into(), true),
            }
        }
        Command::Rep { lattice, t, weight } => {
            let l = load_lattice(&lattice)?;
            let t = target_from_json(&json_arg(&t)?)?;
            let w = match weight {
                None => WeightFunction::trivial(t.n()),
                Some(a) => weight_from_json(&json_arg(&a)?, Some(&l))?,
            };
            let r = rep_number_weighted(&l, &t, &w)?;
            (json!({ "T": target_to_json(&t), "rep": rational_to_json(&r) }), format!("rep = {r}"), true)
        }
        Command::Cycle { genus, t, weight, prime } => {
            let g = load_genus(&genus, prime)?;
            let t = target_from_json(&json_arg(&t)?)?;
            let w = weight_arg(weight.as_deref(), t.n(), &g)?;
            let z = special_cycle(&g, &t, &w)?;
            let flat = z.flat()?;
            let a = eisenstein_coefficient(&g, &t, &w)?.value;
            let reps: Vec<Value> = flat.rep().iter().map(rational_to_json).collect();
            let summary = format!("rep = {:?}, A = {a}", flat.rep().iter().map(ToString::to_string).collect::<Vec<_>>());
            let v = json!({
                "T": target_to_json(&t),
                "grade": t.n(),
                "cutoff": z.cutoff(),
                "sharp": z.values().iter().map(ring_element_to_json).collect::<Vec<_>>(),
                "invariant": z.is_invariant(),
                "rep": reps,
                "A": rational_to_json(&a),
            });
            (v, summary, true)
        }
        Command::Pair { genus, t1, t2, weight1, weight2, prime } => {
            let g = load_genus(&genus, prime)?;
            let t1 = target_from_json(&json_arg(&t1)?)?;
            let t2 = target_from_json(&json_arg(&t2)?)?;
            let z1 = reduced_special_cycle(&g, &t1, &weight_arg(weight1.as_deref(), t1.n(), &g)?)?;
            let z2 = reduced_special_cycle(&g, &t2, &weight_arg(weight2.as_deref(), t2.n(), &g)?)?;
            let ip = inner_product(&z1, &z2)?;
            (json!({ "inner_product": rational_to_json(&ip) }), format!("⟨z1, z2⟩ = {ip}"), true)
        }
        Command::Theta { genus, n, bound, weight, prime } => {
            let g = load_genus(&genus, prime)?;
            let w = weight_arg(weight.as_deref(), n, &g)?;
            let table = theta_expansion(&g, n, &parse_rational(&bound)?, &w)?;
            let summary = format!("{} coefficients", table.entries.len());
            (coefficient_table_to_json(&table), summary, true)
        }
        Command::Ring { op, a, b, cutoff, ambient } => {
            let za = ring_arg(&a, cutoff, ambient)?;
            let other = || -> Result<CycleRingElement> {
                let b = b.as_deref().ok_or_else(|| Error::Parse(format!("`ring {op}` needs two elements")))?;
                ring_arg(b, Some(za.cutoff()), ambient)
            };
            match op.as_str() {
                "mul" => {
                    let p = za.mul(&other()?)?;
                    let s = p.to_string();
                    (json!({ "cutoff": p.cutoff(), "terms": ring_element_to_json(&p) }), s, true)
                }
                "deg" => {
                    let d = za.degree();
                    (json!({ "degree": rational_to_json(&d) }), format!("deg = {d}"), true)
                }
                "pair" => {
                    let p = za.pair(&other()?)?;
                    (json!({ "pair": rational_to_json(&p) }), format!("pair = {p}"), true)
                }
                _ => {
                    let r = za.reduce_to_truncated();
                    let coeffs: Vec<Value> = r.coeffs().iter().map(rational_to_json).collect();
                    (json!({ "cutoff": r.cutoff(), "coeffs": coeffs }), r.to_string(), true)
                }
            }
        }
        Command::GramMatrix { genus, left, right, prime } => {
            let g = load_genus(&genus, prime)?;
            let l = generators(&json_arg(&left)?, &g)?;
            let r = generators(&json_arg(&right)?, &g)?;
            let m = sc_pairing_matrix(&g, &l, &r)?;
            let summary = format!("{}×{} pairing matrix", m.rows(), m.cols());
            (json!({ "matrix": rational_matrix_to_json(&m) }), summary, true)
        }
        Command::ScRank { matrix } => {
            let v = json_arg(&matrix)?;
            let m: RationalMatrix = rational_matrix_from_json(v.get("matrix").unwrap_or(&v))?;
            let (rank, kernel) = sc_radical_rank(&m);
            let kernel: Vec<Value> = kernel.iter().map(|k| Value::Array(k.iter().map(rational_to_json).collect())).collect();
            let summary = format!("rank {rank}, kernel dimension {}", kernel.len());
            (json!({ "rank": rank, "kernel": kernel, "lower_bound": true }), summary, true)
        }
        Command::Verify { suite } => {
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut reports = Vec::new();
            let mut lines = Vec::new();
            let mut ok = true;
            for name in names {
                let r = run_suite(name)?;
                ok &= r.passed();
                for c in &r.checks {
                    lines.push(format!("[{}] {}: {} ({})", if c.passed { "pass" } else { "FAIL" }, r.suite, c.name, c.detail));
                }
                reports.push(r.to_json());
            }
            let v = if reports.len() == 1 { reports.remove(0) } else { json!({ "passed": ok, "suites": reports }) };
            (v, lines.join("\n"), ok)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((value, summary, passed)) => {
            let written = match &cli.out {
                Some(path) => write_json(path, &value).map(|_| println!("{summary}")),
                None => serde_json::to_string_pretty(&value).map(|s| println!("{s}")).map_err(Error::from),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if cli.out.is_none() && !summary.is_empty() {
                eprintln!("{summary}");
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
