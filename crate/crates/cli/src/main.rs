mod cache;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use zsring::automorphism::orbits;
use zsring::claims::{sigma_term, verify_theorem_with};
use zsring::family::default_family;
use zsring::psi::PsiSpec;
use zsring::report::report_for;
use zsring::search::longest_free_sequence_from;
use zsring::tfunc::t_function;
use zsring::witness::build_witness_with;
use zsring::{Error, FiniteRing, SearchConfig, Target, WeightGroup};

use cache::Cache;
use output::{Format, Output};

#[derive(Parser)]
#[command(name = "zsring", version, about = "Weighted zero-sum constants of finite commutative rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Append to --out instead of replacing it.
    #[arg(long, global = true)]
    append: bool,
}

#[derive(Args)]
struct RingArg {
    /// Ring spec, e.g. "Z/12" or "GF(4) x GF(2)[x]/x^2".
    #[arg(long)]
    ring: String,
}

#[derive(Args)]
struct Weighted {
    #[arg(long)]
    ring: String,
    /// id | full | swap(i,j) | frobenius(i) | aut(k), joined by "+", or gens:<file>.
    #[arg(long, default_value = "id")]
    psi: String,
}

#[derive(Args)]
struct Budget {
    /// Expanded-state budget per exhaustive search.
    #[arg(long)]
    max_states: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// List the idempotents.
    Idempotents(RingArg),
    /// List the units.
    Units(RingArg),
    /// Maximal ideals with their index and a generating set.
    SpecPrimes(RingArg),
    /// Orbits of the weight group on the maximal ideals.
    Orbits(Weighted),
    /// T(m; h) with its maximizing profile.
    Tfunc {
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        h: u32,
    },
    /// Weighted Davenport constant of the unit group.
    Davenport {
        #[command(flatten)]
        w: Weighted,
        #[command(flatten)]
        budget: Budget,
    },
    /// Weighted Erdős–Burgess constant of the ring.
    Burgess {
        #[command(flatten)]
        w: Weighted,
        #[command(flatten)]
        budget: Budget,
    },
    /// Build the lower-bound witness and check its claims.
    Witness {
        #[command(flatten)]
        w: Weighted,
        #[command(flatten)]
        budget: Budget,
        /// Also compute the exact Erdős–Burgess constant.
        #[arg(long)]
        exact: bool,
    },
    /// Witness, claims and the exact constant compared against the bound.
    Verify {
        #[command(flatten)]
        w: Weighted,
        #[command(flatten)]
        budget: Budget,
    },
    /// Tabulate a family of (ring, weight group) instances.
    Sweep {
        /// JSON file {"rings": [...], "psi": [...]}; defaults to every supported ring.
        #[arg(long)]
        family: Option<PathBuf>,
        /// Largest ring order of the default family.
        #[arg(long, default_value_t = 64, conflicts_with = "family")]
        max_order: u64,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        budget: Budget,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
enum Status {
    Done,
    /// A search ran out of budget; the output is partial.
    Incomplete,
    /// A verification check failed.
    Failed,
    /// Some sweep instances errored.
    Errors,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Done => 0,
            Status::Errors => 1,
            Status::Incomplete => 2,
            Status::Failed => 3,
        }
    }
}

struct Instance {
    ring: FiniteRing,
    psi: String,
    group: WeightGroup,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<Status> {
    let cache = Cache::from_env();
    let (out, status) = dispatch(&cli.command, cache.as_ref())?;
    out.emit(cli.format, cli.out.as_deref(), cli.append)?;
    Ok(status)
}

fn dispatch(cmd: &Command, cache: Option<&Cache>) -> Result<(Output, Status)> {
    let done = |o| Ok((o, Status::Done));
    match cmd {
        Command::Idempotents(r) => {
            let ring = parse_ring(&r.ring)?;
            done(element_list(&ring, &ring.idempotents()))
        }
        Command::Units(r) => {
            let ring = parse_ring(&r.ring)?;
            done(element_list(&ring, &ring.units()))
        }
        Command::SpecPrimes(r) => done(spec_primes(&parse_ring(&r.ring)?)?),
        Command::Orbits(w) => done(orbit_table(&instance(w)?)?),
        Command::Tfunc { m, h } => {
            let t = serde_json::to_value(t_function(*m, *h))?;
            done(Output::single(t.clone(), vec!["m", "h", "value", "profile"], t))
        }
        Command::Davenport { w, budget } => search(&instance(w)?, Target::One, budget, cache),
        Command::Burgess { w, budget } => search(&instance(w)?, Target::Idempotents, budget, cache),
        Command::Witness { w, budget, exact } => witness(&instance(w)?, budget, *exact, false, cache),
        Command::Verify { w, budget } => witness(&instance(w)?, budget, true, true, cache),
        Command::Sweep { family, max_order, jobs, budget } => sweep(family.as_deref(), *max_order, *jobs, budget, cache),
    }
}

/// Parses a ring spec; syntax errors point at the offending byte.
fn parse_ring(text: &str) -> Result<FiniteRing> {
    FiniteRing::from_spec(text).map_err(|e| match &e {
        Error::Syntax { offset, .. } => {
            let pad = text.get(..*offset).map_or(*offset, |s| s.chars().count());
            anyhow!("{e}\n  {text}\n  {}^", " ".repeat(pad))
        }
        _ => anyhow!("{e}"),
    })
}

/// Resolves a weight descriptor, returning its canonical label.
fn parse_psi(ring: &FiniteRing, text: &str) -> Result<(String, WeightGroup)> {
    let spec = match text.trim().strip_prefix("gens:") {
        Some(path) => load_tables(Path::new(path))?,
        None => PsiSpec::parse(text)?,
    };
    let group = spec.resolve(ring)?;
    Ok((spec.to_string(), group))
}

/// A gens file is a JSON array of permutation tables over the element indices.
/// Its label hashes the tables, so the cache key follows content, not path.
fn load_tables(path: &Path) -> Result<PsiSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let tables: Vec<Vec<u32>> = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let digest = Sha256::digest(serde_json::to_string(&tables)?.as_bytes());
    let hex: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
    Ok(PsiSpec::Tables { label: format!("gens:{hex}"), tables })
}

fn instance(w: &Weighted) -> Result<Instance> {
    let ring = parse_ring(&w.ring)?;
    let (psi, group) = parse_psi(&ring, &w.psi)?;
    Ok(Instance { ring, psi, group })
}

fn config(base: SearchConfig, budget: &Budget) -> SearchConfig {
    SearchConfig { max_states: budget.max_states.unwrap_or(base.max_states), ..base }
}

fn element_list(ring: &FiniteRing, elems: &[zsring::Elem]) -> Output {
    let rendered: Vec<String> = elems.iter().map(|&e| ring.render(e)).collect();
    Output {
        json: json!({ "ring": ring.canonical_spec(), "count": rendered.len(), "elements": rendered }),
        columns: vec!["element"],
        rows: rendered.iter().map(|e| json!({ "element": e })).collect(),
        lines: false,
    }
}

fn spec_primes(ring: &FiniteRing) -> Result<Output> {
    let rows: Vec<Value> = ring
        .prime_ideals()?
        .iter()
        .map(|p| {
            let gens: Vec<String> = ring.ideal_generators(&p.ideal).iter().map(|&e| ring.render(e)).collect();
            json!({ "id": p.id, "generators": gens, "index": p.index, "size": p.ideal.size() })
        })
        .collect();
    Ok(Output {
        json: json!({ "ring": ring.canonical_spec(), "primes": rows }),
        columns: vec!["id", "index", "size", "generators"],
        rows,
        lines: false,
    })
}

fn orbit_table(inst: &Instance) -> Result<Output> {
    let primes = inst.ring.prime_ideals()?;
    let rows: Vec<Value> = orbits(&inst.ring, &inst.group, &primes)?
        .iter()
        .map(|o| {
            let index = primes.iter().find(|p| p.id == o.primes[0]).map_or(0, |p| p.index);
            json!({ "primes": o.primes, "size": o.size, "stabilizer-size": o.stabilizer_size, "index": index })
        })
        .collect();
    Ok(Output {
        json: json!({
            "ring": inst.ring.canonical_spec(),
            "psi": inst.psi,
            "psi-order": inst.group.len(),
            "orbits": rows,
        }),
        columns: vec!["primes", "size", "stabilizer-size", "index"],
        rows,
        lines: false,
    })
}

fn search(inst: &Instance, target: Target, budget: &Budget, cache: Option<&Cache>) -> Result<(Output, Status)> {
    let (name, base) = match target {
        Target::One => ("D", SearchConfig::davenport()),
        Target::Idempotents => ("I", SearchConfig::burgess()),
    };
    let ring = inst.ring.canonical_spec();
    let key = Cache::key(name, &ring, &inst.psi, "");
    let doc = Cache::fetch(
        cache,
        &key,
        || {
            let out = longest_free_sequence_from(&inst.ring, &inst.group, target, &config(base, budget), 0)?;
            Ok(json!({
                "ring": ring,
                "psi": inst.psi,
                "psi-order": inst.group.len(),
                name: out.complete.then_some(out.length + 1),
                "lower-bound": out.length + 1,
                "complete": out.complete,
                "witness": out.witness.render(&inst.ring),
                "states": out.states,
            }))
        },
        |v| v["complete"] == true,
    )?;
    let status = if doc["complete"] == true { Status::Done } else { Status::Incomplete };
    let columns = vec!["ring", "psi", name, "lower-bound", "complete"];
    Ok((Output::single(doc.clone(), columns, doc), status))
}

/// `witness` and `verify`: the witness report, optionally with the exact
/// constant and, for `verify`, the overall verdict.
fn witness(inst: &Instance, budget: &Budget, exact: bool, verdict: bool, cache: Option<&Cache>) -> Result<(Output, Status)> {
    let ring = inst.ring.canonical_spec();
    let command = if verdict {
        "verify"
    } else if exact {
        "witness-exact"
    } else {
        "witness"
    };
    let key = Cache::key(command, &ring, &inst.psi, "");
    let doc = Cache::fetch(cache, &key, || witness_doc(inst, budget, exact, verdict), |v| v["complete"] == true)?;
    let status = if doc["complete"] != true {
        Status::Incomplete
    } else if verdict && doc["pass"] != true {
        Status::Failed
    } else {
        Status::Done
    };
    let row = json!({
        "ring": doc["ring-spec"],
        "psi": doc["psi-descriptor"],
        "D_psi": doc["davenport"],
        "sigma_term": doc["sigma-term"],
        "I_psi": doc["burgess"],
        "bound": doc["bound"],
        "equality": doc["equality"],
        "pass": doc["pass"],
        "witness": doc["witness"],
    });
    let columns = if verdict {
        vec!["ring", "psi", "D_psi", "sigma_term", "I_psi", "bound", "equality", "pass"]
    } else {
        vec!["ring", "psi", "D_psi", "sigma_term", "I_psi", "bound", "equality", "witness"]
    };
    Ok((Output::single(doc, columns, row), status))
}

fn witness_doc(inst: &Instance, budget: &Budget, exact: bool, verdict: bool) -> Result<Value> {
    let (ring, psi) = (&inst.ring, &inst.group);
    let w = match build_witness_with(ring, psi, &config(SearchConfig::davenport(), budget)) {
        Ok(w) => w,
        Err(Error::SearchIncomplete { best }) => {
            return Ok(json!({
                "ring-spec": ring.canonical_spec(),
                "psi-descriptor": inst.psi,
                "complete": false,
                "davenport-lower-bound": best,
            }))
        }
        Err(e) => return Err(e.into()),
    };
    let mut report = report_for(ring, psi, &inst.psi, &w, false)?;
    let theorem = if exact {
        match verify_theorem_with(ring, psi, &w, &config(SearchConfig::burgess(), budget)) {
            Ok(t) => Some(t),
            Err(Error::SearchIncomplete { .. }) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    if let Some(t) = &theorem {
        report.burgess = Some(t.burgess);
        report.equality = Some(t.equality);
    }
    let claims_pass = report.claims.values().all(|v| v.pass);
    let mut doc = serde_json::to_value(&report)?;
    doc["complete"] = json!(!exact || theorem.is_some());
    doc["free"] = json!(w.free);
    if verdict {
        let holds = theorem.as_ref().is_some_and(|t| t.inequality && t.prediction_holds);
        doc["theorem"] = serde_json::to_value(&theorem)?;
        doc["pass"] = json!(claims_pass && w.free && holds);
    }
    Ok(doc)
}

#[derive(Deserialize)]
struct FamilyFile {
    rings: Vec<String>,
    #[serde(default = "default_psi")]
    psi: Vec<String>,
}

fn default_psi() -> Vec<String> {
    vec!["id".to_string()]
}

const SWEEP_COLUMNS: [&str; 8] = ["ring", "psi", "D_psi", "sigma_term", "I_psi", "bound", "equality", "runtime_ms"];

fn sweep(family: Option<&Path>, max_order: u64, jobs: usize, budget: &Budget, cache: Option<&Cache>) -> Result<(Output, Status)> {
    let mut status = Status::Done;
    let instances: Vec<Instance> = match family {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let file: FamilyFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            let mut out = Vec::new();
            for spec in &file.rings {
                let ring = parse_ring(spec)?;
                for psi in &file.psi {
                    // descriptors that do not apply to this ring (say a swap of a
                    // single factor) are skipped
                    match parse_psi(&ring, psi) {
                        Ok((psi, group)) => out.push(Instance { ring: ring.clone(), psi, group }),
                        Err(e) => eprintln!("skipping {} with {psi}: {e:#}", ring.canonical_spec()),
                    }
                }
            }
            out
        }
        None => default_family(max_order)?.into_iter().map(|m| Instance { ring: m.ring, psi: m.psi.to_string(), group: m.group }).collect(),
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let results: Vec<Result<Value>> = pool.install(|| instances.par_iter().map(|inst| sweep_row(inst, budget, cache)).collect());
    let mut rows = Vec::new();
    for (inst, r) in instances.iter().zip(results) {
        match r {
            Ok(row) => {
                if row["I_psi"].is_null() && status == Status::Done {
                    status = Status::Incomplete;
                }
                rows.push(row);
            }
            Err(e) => {
                eprintln!("{} with {}: {e:#}", inst.ring.canonical_spec(), inst.psi);
                status = Status::Errors;
            }
        }
    }
    Ok((Output { json: Value::Array(rows.clone()), columns: SWEEP_COLUMNS.to_vec(), rows, lines: true }, status))
}

/// One sweep row. A cached row keeps the runtime of the run that produced it.
fn sweep_row(inst: &Instance, budget: &Budget, cache: Option<&Cache>) -> Result<Value> {
    let ring = inst.ring.canonical_spec();
    let key = Cache::key("sweep-row", &ring, &inst.psi, "");
    Cache::fetch(
        cache,
        &key,
        || {
            let start = Instant::now();
            let w = build_witness_with(&inst.ring, &inst.group, &config(SearchConfig::davenport(), budget))?;
            let burgess = match verify_theorem_with(&inst.ring, &inst.group, &w, &config(SearchConfig::burgess(), budget)) {
                Ok(t) => Some(t.burgess),
                Err(Error::SearchIncomplete { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let sigma = sigma_term(&w);
            let bound = w.davenport + sigma;
            if !w.free {
                bail!("witness is not free");
            }
            Ok(json!({
                "ring": ring,
                "psi": inst.psi,
                "D_psi": w.davenport,
                "sigma_term": sigma,
                "I_psi": burgess,
                "bound": bound,
                "equality": burgess.map(|i| i == bound),
                "runtime_ms": start.elapsed().as_millis() as u64,
            }))
        },
        |v| !v["I_psi"].is_null(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caret_points_at_offset() {
        let msg = parse_ring("Z/0").unwrap_err().to_string();
        assert!(msg.contains("byte 2"), "{msg}");
        assert!(msg.ends_with("\n  Z/0\n    ^"), "{msg}");
    }

    #[test]
    fn cli_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
