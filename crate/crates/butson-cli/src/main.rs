//! Command-line front end: construction, verification, bent-sequence
//! search, existence sieve, and the metric invariants of Butson Hadamard
//! codes. Identical inputs and budgets produce byte-identical JSON output
//! regardless of thread count.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use butson::autgroup::{build_digraph, GraphMode};
use butson::bent::{census, eigenspace_search, exhaustive_search, BentSolution};
use butson::constructions::{check_mm_condition, mm_sequence, MMSpec};
use butson::existence::exclusion_report;
use butson::metrics::{
    covering_bounds, covering_radius, design_strength, distance_spectrum, is_antipodal,
    min_sq_distance, smallest_attainable_at_least, sphere_covering_bound, spherical_embed,
};
use butson::{ButsonMatrix, Error, Scalar};

#[derive(Parser)]
#[command(
    name = "butson",
    version,
    about = "Butson Hadamard matrices, self-dual bent sequences, and their codes",
    long_about = "Construct and verify Butson-type Hadamard matrices in logarithmic form, \
search for self-dual bent sequences HX = λ·μ_k(X), test arithmetic existence \
conditions, and compute metric invariants (Chinese-Euclidean covering radius, \
distance spectrum, spherical design strength, Levenshtein-type bounds) of the \
attached Z_q codes.\n\n\
Sequence search offers two methods: exhaustive enumeration of Ω_q^n and an \
eigenspace method driven by linear algebra with exact re-verification. No \
Groebner-basis solver is provided; these two methods replace polynomial-system \
solving for this problem."
)]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Cap on enumerated candidates/compositions per operation.
    #[arg(long, global = true, default_value_t = butson::DEFAULT_CANDIDATE_BUDGET)]
    budget: u128,

    /// Report format (top-level flag: `butson --format json <command>`).
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Seed for randomized property-test helpers. Core computations are
    /// deterministic and ignore it.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Verified enumeration of all of Ω_q^n.
    Exhaustive,
    /// Eigenspace method: nullspace bases of the exact product matrix,
    /// greedy submatrix, Ω_q^l sweep, exact sieve.
    Eigen,
}

#[derive(Subcommand)]
enum Command {
    /// Exactly verify HH* = nI over Z[ζ_q] for a matrix file.
    Verify { file: PathBuf },

    /// Search for self-dual bent sequences HX = λ·μ_k(X).
    Search {
        file: PathBuf,
        /// Multiplier index, coprime to q.
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Method::Exhaustive)]
        method: Method,
    },

    /// Search and group solutions by exact λ.
    Census {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Method::Exhaustive)]
        method: Method,
    },

    /// Generate a matrix and write it in the text interchange format.
    #[command(subcommand)]
    Construct(Construct),

    /// Arithmetic existence sieve: can |λ|² = n for a sum of n q-th roots?
    Exclude {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        /// Print only the admissible value list.
        #[arg(long)]
        values: bool,
    },

    /// Chinese-Euclidean covering radius of C_H by exhaustive sweep.
    Covradius {
        file: PathBuf,
        /// Also search for a bent sequence with this multiplier and print
        /// the lower/upper bound sandwich.
        #[arg(long)]
        k: Option<usize>,
    },

    /// Pairwise Chinese-Euclidean distance set of C_H.
    Spectrum { file: PathBuf },

    /// Spherical design strength and covering bound of the embedded code.
    #[command(name = "design-strength")]
    DesignStrength { file: PathBuf },

    /// Covering-radius bounds from the code parameters alone.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        /// The matrix is dephased (enables the upper bound for even q).
        #[arg(long)]
        dephased: bool,
        /// A bent sequence is known to exist (enables the lower bound).
        #[arg(long)]
        bent: bool,
    },

    /// Export the automorphism-encoding digraph of a matrix.
    Autgraph {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Plain)]
        mode: Mode,
        /// Multiplier for the strong graph.
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// Fourier-type matrix of order q^r: entry x·y over Z_q^r.
    Fourier {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Group-invariant matrix of order q^{2m}: entry (x₁−y₁)·(x₂−y₂).
    #[command(name = "group-invariant")]
    GroupInvariant {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kronecker product of two matrix files over the same root order.
    Kronecker {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Permutation-parameterised sequence family from a JSON spec
    /// {"q":…, "m":…, "variant":"plain"|"shifted", "k":…, "phi":[…]}.
    Mm {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Plain,
    Strong,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Dot,
    Dimacs,
}

struct Report {
    text: String,
    json: serde_json::Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let _ = cli.seed; // reserved for property-test helpers
    match run(&cli) {
        Ok(report) => {
            let body = match cli.format {
                Format::Text => report.text,
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report.json).expect("serializable");
                    s.push('\n');
                    s
                }
            };
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, body) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => {
                    let mut stdout = std::io::stdout().lock();
                    if stdout.write_all(body.as_bytes()).is_err() {
                        return ExitCode::from(2);
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn load_matrix(path: &PathBuf) -> Result<ButsonMatrix, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    ButsonMatrix::parse(&text)
}

fn scalar_json(s: &Scalar) -> serde_json::Value {
    serde_json::to_value(s).expect("scalar serializes")
}

fn solution_json(sol: &BentSolution, q: usize) -> serde_json::Value {
    sol.to_json(q)
}

fn lambda_text(sol: &BentSolution) -> String {
    let coeffs = sol
        .lambda
        .to_i64_coeffs()
        .expect("searchable-scale coefficients");
    format!("{coeffs:?}")
}

fn run_search(
    h: &ButsonMatrix,
    k: usize,
    method: Method,
    budget: u128,
) -> Result<Vec<BentSolution>, Error> {
    match method {
        Method::Exhaustive => exhaustive_search(h, k, budget),
        Method::Eigen => eigenspace_search(h, k, budget),
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Exhaustive => "exhaustive",
        Method::Eigen => "eigen",
    }
}

fn matrix_report(h: &ButsonMatrix, out: &Option<PathBuf>) -> Result<Report, Error> {
    let text = h.serialize();
    if let Some(path) = out {
        std::fs::write(path, &text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }
    let rows: Vec<Vec<u32>> = (0..h.n()).map(|i| h.row(i).to_vec()).collect();
    Ok(Report {
        text,
        json: json!({
            "op": "construct",
            "n": h.n(),
            "q": h.q(),
            "butson": h.verify_butson(),
            "rows": rows,
        }),
    })
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let budget = cli.budget;
    match &cli.command {
        Command::Verify { file } => {
            let h = load_matrix(file)?;
            let ok = h.verify_butson();
            let dephased = (0..h.n()).all(|i| h.entry(i, 0) == 0 && h.entry(0, i) == 0);
            Ok(Report {
                text: format!(
                    "BH({}, {}): {}{}\n",
                    h.n(),
                    h.q(),
                    if ok {
                        "verified"
                    } else {
                        "NOT a Butson matrix"
                    },
                    if dephased { " (dephased)" } else { "" },
                ),
                json: json!({
                    "op": "verify",
                    "n": h.n(),
                    "q": h.q(),
                    "butson": ok,
                    "dephased": dephased,
                }),
            })
        }

        Command::Search { file, k, method } => {
            let h = load_matrix(file)?;
            let sols = run_search(&h, *k, *method, budget)?;
            let mut text = String::new();
            for sol in &sols {
                text.push_str(&format!("x={:?} lambda={}\n", sol.x, lambda_text(sol)));
            }
            text.push_str(&format!(
                "{} solution(s) on BH({}, {}) with k={} ({})\n",
                sols.len(),
                h.n(),
                h.q(),
                k,
                method_name(*method)
            ));
            let json_sols: Vec<serde_json::Value> =
                sols.iter().map(|s| solution_json(s, h.q())).collect();
            Ok(Report {
                text,
                json: json!({
                    "op": "search",
                    "n": h.n(),
                    "q": h.q(),
                    "k": k,
                    "method": method_name(*method),
                    "count": sols.len(),
                    "solutions": json_sols,
                }),
            })
        }

        Command::Census { file, k, method } => {
            let h = load_matrix(file)?;
            let sols = run_search(&h, *k, *method, budget)?;
            let c = census(*k, &sols);
            let counts: Vec<String> = c.entries.iter().map(|e| e.count.to_string()).collect();
            let text = format!(
                "{} {} {} {}\n",
                h.n(),
                h.q(),
                c.entries.len(),
                if counts.is_empty() {
                    "0".to_string()
                } else {
                    counts.join("; ")
                }
            );
            let lambdas: Vec<serde_json::Value> = c
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "lambda": e.lambda.to_i64_coeffs().expect("fits"),
                        "count": e.count,
                    })
                })
                .collect();
            Ok(Report {
                text,
                json: json!({
                    "op": "census",
                    "n": h.n(),
                    "q": h.q(),
                    "k": k,
                    "method": method_name(*method),
                    "distinct_lambdas": c.entries.len(),
                    "lambdas": lambdas,
                    "total": c.total,
                }),
            })
        }

        Command::Construct(what) => match what {
            Construct::Fourier { q, r, out } => {
                if *q < 2 || *r < 1 {
                    return Err(Error::InvalidInput(
                        "fourier requires q >= 2, r >= 1".into(),
                    ));
                }
                matrix_report(&ButsonMatrix::fourier(*q, *r), out)
            }
            Construct::GroupInvariant { q, m, out } => {
                if *q < 2 || *m < 1 {
                    return Err(Error::InvalidInput(
                        "group-invariant requires q >= 2, m >= 1".into(),
                    ));
                }
                matrix_report(&ButsonMatrix::group_invariant(*q, *m), out)
            }
            Construct::Kronecker { a, b, out } => {
                let ha = load_matrix(a)?;
                let hb = load_matrix(b)?;
                matrix_report(&ha.kronecker(&hb)?, out)
            }
            Construct::Mm { spec, out } => {
                let text = std::fs::read_to_string(spec).map_err(|e| {
                    Error::InvalidInput(format!("cannot read {}: {e}", spec.display()))
                })?;
                let spec: MMSpec = serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidInput(format!("bad spec: {e}")))?;
                let (h, x) = mm_sequence(&spec)?;
                let condition = check_mm_condition(&spec)?;
                let verified = butson::bent::verify_bent(&h, &x, spec.k)?;
                let mut report = matrix_report(&h, out)?;
                report.text.push_str(&format!(
                    "sequence exponents: {:?}\ncondition: {}\nverified lambda: {}\n",
                    x,
                    condition,
                    match &verified {
                        Some(l) => format!("{:?}", l.to_i64_coeffs().expect("fits")),
                        None => "not bent".to_string(),
                    }
                ));
                report.json["op"] = json!("construct-mm");
                report.json["sequence"] = json!(x);
                report.json["condition"] = json!(condition);
                report.json["k"] = json!(spec.k);
                report.json["lambda"] = match verified {
                    Some(l) => json!(l.to_i64_coeffs().expect("fits")),
                    None => serde_json::Value::Null,
                };
                Ok(report)
            }
        },

        Command::Exclude { n, q, values } => {
            let rep = exclusion_report(*n, *q, budget)?;
            let value_list: Vec<String> = rep.values.iter().map(Scalar::to_string).collect();
            let text = if *values {
                format!("{}\n", value_list.join(";"))
            } else {
                format!(
                    "{} {} {} {} {}\n",
                    rep.n,
                    rep.q,
                    rep.compositions,
                    value_list.join(";"),
                    if rep.excluded {
                        "EXCLUDED"
                    } else {
                        "NOT EXCLUDED"
                    }
                )
            };
            Ok(Report {
                text,
                json: json!({
                    "op": "exclude",
                    "n": rep.n,
                    "q": rep.q,
                    "compositions": rep.compositions.to_string(),
                    "values": rep.values.iter().map(scalar_json).collect::<Vec<_>>(),
                    "excluded": rep.excluded,
                }),
            })
        }

        Command::Covradius { file, k } => {
            let h = load_matrix(file)?;
            let code = h.full_code();
            let r = covering_radius(&code, budget)?;
            let dephased = (0..h.n()).all(|i| h.entry(i, 0) == 0 && h.entry(0, i) == 0);
            let bent_found = match k {
                // existence only: the early-exit sweep beats a full search
                Some(k) => Some(butson::bent::any_bent(&h, *k, budget)?),
                None => None,
            };
            let (lower, upper) =
                covering_bounds(h.n(), h.q(), dephased, bent_found.unwrap_or(false));
            let mut text = format!(
                "r_CE(C_H) = {} ({}, {} sweep over {} vectors)\n",
                r.value,
                if r.value.is_exact() { "exact" } else { "float" },
                if r.reduced { "sliced" } else { "full" },
                r.examined,
            );
            if let Some(found) = bent_found {
                text.push_str(&format!(
                    "bent sequence with k={}: {}\n",
                    k.unwrap(),
                    if found { "found" } else { "none" }
                ));
            }
            if let Some(l) = lower {
                text.push_str(&format!("lower bound 2n-2√n = {l:.6}\n"));
            }
            if let Some(u) = upper {
                text.push_str(&format!("upper bound 2n-√(2n) = {u:.6}\n"));
            }
            Ok(Report {
                text,
                json: json!({
                    "op": "covradius",
                    "n": h.n(),
                    "q": h.q(),
                    "value": r.value.value(),
                    "exact": r.value.is_exact(),
                    "method": if r.reduced { "slice-sweep" } else { "full-sweep" },
                    "examined": r.examined.to_string(),
                    "bent_found": bent_found,
                    "lower_bound": lower,
                    "upper_bound": upper,
                }),
            })
        }

        Command::Spectrum { file } => {
            let h = load_matrix(file)?;
            let rep = distance_spectrum(&h);
            let obs: Vec<String> = rep.observed.iter().map(Scalar::to_string).collect();
            let form: Vec<String> = rep.formula.iter().map(Scalar::to_string).collect();
            Ok(Report {
                text: format!(
                    "observed: {}\npredicted: {}\ncontained: {}\n",
                    obs.join(";"),
                    form.join(";"),
                    rep.contained
                ),
                json: json!({
                    "op": "spectrum",
                    "n": h.n(),
                    "q": h.q(),
                    "observed": rep.observed.iter().map(scalar_json).collect::<Vec<_>>(),
                    "formula": rep.formula.iter().map(scalar_json).collect::<Vec<_>>(),
                    "contained": rep.contained,
                }),
            })
        }

        Command::DesignStrength { file } => {
            let h = load_matrix(file)?;
            let s = spherical_embed(&h.full_code());
            let strength = design_strength(&s);
            let antipodal = is_antipodal(&s);
            let rho = min_sq_distance(&s);
            let bound = sphere_covering_bound(&s);
            let mut text = format!(
                "{} points in R^{}\nstrength: {}\nantipodal: {}\nmin squared distance: {:.9}\n",
                s.points.len(),
                s.dim,
                strength,
                antipodal,
                rho
            );
            match &bound {
                Some(b) => text.push_str(&format!(
                    "sphere covering bound: {:.9} ({})\n",
                    b.value, b.hypothesis
                )),
                None => text.push_str("sphere covering bound: none applicable\n"),
            }
            Ok(Report {
                text,
                json: json!({
                    "op": "design-strength",
                    "points": s.points.len(),
                    "dim": s.dim,
                    "strength": strength,
                    "antipodal": antipodal,
                    "min_sq_distance": rho,
                    "sphere_bound": bound.map(|b| json!({
                        "value": b.value,
                        "exact": false,
                        "hypothesis": b.hypothesis,
                    })),
                }),
            })
        }

        Command::Bounds {
            n,
            q,
            dephased,
            bent,
        } => {
            let (lower, upper) = covering_bounds(*n, *q, *dephased, *bent);
            let attainable = lower.and_then(|l| smallest_attainable_at_least(*n, *q, l));
            let mut text = format!("BH({n}, {q})");
            match lower {
                Some(l) => text.push_str(&format!(" lower {l:.6}")),
                None => text.push_str(" lower n/a (needs --bent)"),
            }
            match upper {
                Some(u) => text.push_str(&format!(" upper {u:.6}")),
                None => text.push_str(" upper n/a (needs --dephased and even q)"),
            }
            if let Some(a) = attainable {
                text.push_str(&format!(" attainable>=lower {a} (integral weights)"));
            }
            text.push('\n');
            Ok(Report {
                text,
                json: json!({
                    "op": "bounds",
                    "n": n,
                    "q": q,
                    "lower": lower,
                    "upper": upper,
                    "attainable_lower": attainable,
                }),
            })
        }

        Command::Autgraph {
            file,
            mode,
            k,
            format,
        } => {
            let h = load_matrix(file)?;
            let g = match mode {
                Mode::Plain => build_digraph(&h, GraphMode::Plain)?,
                Mode::Strong => build_digraph(&h, GraphMode::Strong(*k))?,
            };
            let text = match format {
                GraphFormat::Dot => g.to_dot(),
                GraphFormat::Dimacs => g.to_dimacs(),
            };
            Ok(Report {
                json: json!({
                    "op": "autgraph",
                    "vertices": g.vertex_count(),
                    "arcs": g.arc_count(),
                    "graph": text,
                }),
                text,
            })
        }
    }
}
