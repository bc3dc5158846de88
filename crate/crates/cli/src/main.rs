use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use qtoric::cohomology::{char_numbers, classical_numbers, presentation, Monomial};
use qtoric::families::{self, count_alpha, count_alpha_closed_form};
use qtoric::gkm::{build_gkm, gkm_equiv, reconstruct_lambda, GkmGraph};
use qtoric::oracle::{betti_oracle, integrate_oracle};
use qtoric::polytope::validate_polytope;
use qtoric::{canonical_form, strong_equiv, weak_equiv, Error, QuasitoricDocument, QuasitoricPair};

/// Quasitoric manifolds from polytope and characteristic-matrix data.
#[derive(Parser)]
#[command(name = "qtoric", version)]
struct Cli {
    /// Worker threads; affects speed only.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a document describes a valid pair.
    Validate { file: PathBuf },
    /// Cohomology presentation and Betti numbers.
    Betti {
        file: PathBuf,
        /// Recompute the Betti numbers by rank computation in the face ring.
        #[arg(long)]
        oracle: bool,
    },
    /// Pairing of a top-degree monomial with the fundamental class.
    Integrate {
        file: PathBuf,
        /// Facet indices with repetition, e.g. 0,0,3.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        monomial: Vec<usize>,
        /// Evaluate in the face ring instead of by localization.
        #[arg(long)]
        oracle: bool,
    },
    /// All top-degree characteristic numbers.
    Charnum { file: PathBuf },
    /// Pontryagin and top Chern pairings and the signature.
    Classical { file: PathBuf },
    /// Canonical form under weak equivalence.
    Canon { file: PathBuf },
    /// Weak equivariant equivalence with a witness.
    Equiv { a: PathBuf, b: PathBuf },
    /// Strong equivariant equivalence with a witness.
    StrongEquiv { a: PathBuf, b: PathBuf },
    /// GKM graph of a pair.
    Gkm { file: PathBuf },
    /// Characteristic vectors, up to sign, from a GKM graph or a pair.
    Reconstruct { file: PathBuf },
    /// Label-preserving isomorphism of GKM graphs.
    GkmEquiv { a: PathBuf, b: PathBuf },
    /// Print a named family member as a document.
    #[command(subcommand)]
    Family(Family),
    /// Weak-equivalence classes of bounded matrices over a polytope.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        bound: i64,
        /// Largest admissible size of the unpruned search space.
        #[arg(long, default_value_t = families::DEFAULT_SEARCH_CAP)]
        cap: u128,
    },
    /// Classes among the prism family compared with the closed form.
    CountAlpha {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bar: bool,
    },
}

#[derive(Subcommand)]
enum Family {
    Prism(PrismArgs),
    Product {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
    },
    Cpn {
        #[arg(long)]
        n: usize,
    },
    Hirzebruch {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
    },
}

#[derive(Args)]
struct PrismArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
}

enum Failure {
    Usage(String),
    Io(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Io(_) => 2,
            Failure::Data(e) if e.is_internal() => 3,
            Failure::Data(_) => 2,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            Failure::Usage(m) => ("usage", m.clone()),
            Failure::Io(m) => ("io", m.clone()),
            Failure::Data(e) => (e.kind(), e.to_string()),
        };
        json!({ "error": { "kind": kind, "message": message } })
    }
}

type Outcome = Result<Value, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<QuasitoricPair, Failure> {
    Ok(QuasitoricDocument::parse(&read(path)?)?.to_pair()?)
}

/// Polytope fields of a document; any characteristic matrix is ignored.
#[derive(Deserialize)]
struct PolytopeDocument {
    dim: usize,
    facets: usize,
    vertices: Vec<Vec<usize>>,
}

/// A GKM graph given directly, or built from a pair document.
fn load_graph(path: &Path) -> Result<GkmGraph, Failure> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Document(e.to_string()))?;
    if value.get("edges").is_some() {
        Ok(serde_json::from_value(value).map_err(|e| Error::Document(e.to_string()))?)
    } else {
        Ok(build_gkm(&QuasitoricDocument::parse(&text)?.to_pair()?)?)
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("output types serialize")
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { file } => {
            load(&file)?;
            Ok(json!({ "valid": true }))
        }
        Command::Betti { file, oracle } => {
            let q = load(&file)?;
            let pres = presentation(&q);
            let mut out = json!({ "betti": pres.betti, "presentation": to_value(&pres) });
            if oracle {
                out["oracle"] = to_value(&betti_oracle(&q)?);
            }
            Ok(out)
        }
        Command::Integrate { file, monomial, oracle } => {
            let q = load(&file)?;
            let mon = Monomial::from_factors(q.facet_count(), &monomial)?;
            let value = if oracle { integrate_oracle(&q, &mon)? } else { qtoric::cohomology::integrate(&q, &mon)? };
            Ok(json!({ "value": value }))
        }
        Command::Charnum { file } => {
            let v = char_numbers(&load(&file)?)?;
            let entries: Vec<Value> =
                v.entries.iter().map(|(f, x)| json!({ "monomial": f, "value": x })).collect();
            Ok(json!({ "dim": v.dim, "facets": v.facets, "entries": entries }))
        }
        Command::Classical { file } => Ok(to_value(&classical_numbers(&load(&file)?)?)),
        Command::Canon { file } => {
            let form = canonical_form(&load(&file)?)?;
            Ok(json!({ "key": form.to_string(), "form": to_value(&form) }))
        }
        Command::Equiv { a, b } => {
            let w = weak_equiv(&load(&a)?, &load(&b)?)?;
            Ok(json!({ "equivalent": w.is_some(), "witness": to_value(&w) }))
        }
        Command::StrongEquiv { a, b } => {
            let w = strong_equiv(&load(&a)?, &load(&b)?)?;
            Ok(json!({ "equivalent": w.is_some(), "witness": to_value(&w) }))
        }
        Command::Gkm { file } => Ok(to_value(&build_gkm(&load(&file)?)?)),
        Command::Reconstruct { file } => {
            let lambda = reconstruct_lambda(&load_graph(&file)?)?;
            Ok(json!({ "lambda": lambda.to_rows() }))
        }
        Command::GkmEquiv { a, b } => {
            let w = gkm_equiv(&load_graph(&a)?, &load_graph(&b)?)?;
            Ok(json!({ "equivalent": w.is_some(), "witness": to_value(&w) }))
        }
        Command::Family(f) => {
            let q = match f {
                Family::Prism(PrismArgs { n, k }) => families::prism_family(n, k)?,
                Family::Product { dims } => families::product_family(&dims)?,
                Family::Cpn { n } => families::projective_space(n)?,
                Family::Hirzebruch { a } => families::hirzebruch(a)?,
            };
            Ok(to_value(&QuasitoricDocument::from_pair(&q)))
        }
        Command::Enumerate { file, bound, cap } => {
            let doc: PolytopeDocument =
                serde_json::from_str(&read(&file)?).map_err(|e| Error::Document(e.to_string()))?;
            let p = validate_polytope(&doc.vertices, doc.dim, doc.facets)?;
            Ok(to_value(&families::enumerate_classes_with_cap(&p, bound, cap)?))
        }
        Command::CountAlpha { n, bar } => {
            if n < 3 {
                return Err(Failure::Usage("--n must be at least 3".into()));
            }
            let count = count_alpha(n, bar)?;
            let closed = count_alpha_closed_form(n, bar).expect("n >= 3");
            Ok(json!({ "count": count, "closed_form": closed, "match": count == closed }))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let f = Failure::Usage(e.to_string().trim_end().to_string());
            eprintln!("{}", f.to_json());
            return ExitCode::from(f.exit_code());
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            let f = Failure::Usage(e.to_string());
            eprintln!("{}", f.to_json());
            return ExitCode::from(f.exit_code());
        }
    }
    match run(cli) {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("json value"));
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.exit_code())
        }
    }
}
