use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use steiner_core::constructions::{best_mols, product_lift, transversal_design, TransversalDesign};
use steiner_core::design::{self, Design};
use steiner_core::group::{parse_generator_file, PermGroup, DEFAULT_ORDER_CAP};
use steiner_core::invariants::{self, DEFAULT_POINT_BOUND};
use steiner_core::search::{load_config, search};

#[derive(Parser)]
#[command(name = "steiner", version, about = "Steiner system search and verification engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the divisibility conditions for S(2,k,v)
    Admissible {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        v: usize,
    },
    /// Verify pair coverage of every design in a file
    Verify {
        file: PathBuf,
        /// Expected block size; inferred from the first block when absent
        #[arg(long)]
        k: Option<usize>,
    },
    /// Compute fingerprints; validates tokens already present in the file
    Fingerprint {
        file: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Exact isomorphism test between the first designs of two files
    Isomorphic {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Print the point bijection when one exists
        #[arg(long)]
        dump: bool,
        #[arg(long, default_value_t = DEFAULT_POINT_BOUND)]
        bound: usize,
    },
    /// Run the base-block exact-cover search from a config file
    Search {
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        max_solutions: Option<u64>,
        #[arg(long)]
        node_cap: Option<u64>,
        /// Cooperative time budget in seconds
        #[arg(long)]
        time_budget: Option<u64>,
    },
    /// Recursive constructions (transversal designs and the product lift)
    Construct {
        #[command(subcommand)]
        what: ConstructCommand,
    },
    /// Group order and point-orbit structure of a generator file
    Orbits { file: PathBuf },
}

#[derive(Subcommand)]
enum ConstructCommand {
    /// Emit TD(k, n) blocks in the design line format
    Td(TdArgs),
    /// Lift S(2,k,v) to S(2,k,kv) through a TD(k,v)
    Product {
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Args)]
struct TdArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
}

struct Report {
    subcommand: &'static str,
    inputs: Vec<String>,
    fields: Vec<(String, String)>,
    started: Instant,
}

impl Report {
    fn new(subcommand: &'static str) -> Self {
        Report {
            subcommand,
            inputs: Vec::new(),
            fields: Vec::new(),
            started: Instant::now(),
        }
    }

    fn input(&mut self, path: &Path) {
        self.inputs.push(path.display().to_string());
    }

    fn set(&mut self, key: &str, value: impl ToString) {
        self.fields.push((key.to_string(), value.to_string()));
    }

    /// Trailing machine-readable block. Everything except wall_ms is a
    /// deterministic function of the inputs.
    fn print(&self) {
        println!();
        println!("subcommand={}", self.subcommand);
        if !self.inputs.is_empty() {
            println!("inputs={}", self.inputs.join(","));
        }
        for (k, v) in &self.fields {
            println!("{k}={v}");
        }
        println!("deterministic=seedless");
        println!("wall_ms={}", self.started.elapsed().as_millis());
    }
}

fn read_designs(path: &Path, k: Option<usize>) -> Result<Vec<(String, Design)>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let designs = design::parse_file(&text, k)
        .with_context(|| format!("parsing {}", path.display()))?;
    if designs.is_empty() {
        bail!("{}: no designs found", path.display());
    }
    Ok(designs)
}

/// Exit 0 on success/PASS, 1 on FAIL or negative result, 2 on usage errors
/// (clap handles the last). Errors print to stderr and exit 1.
fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Admissible { k, v } => {
            if k < 2 || v < k {
                bail!("need k >= 2 and v >= k");
            }
            let mut report = Report::new("admissible");
            let res = design::admissible(k, v);
            report.set("k", k);
            report.set("v", v);
            report.set("admissible", res.admissible);
            match res.params {
                Some(p) => {
                    println!("admissible: r={} b={}", p.r, p.b);
                    report.set("r", p.r);
                    report.set("b", p.b);
                }
                None => println!("inadmissible: {}", res.reason.unwrap_or_default()),
            }
            report.print();
            Ok(res.admissible)
        }
        Command::Verify { file, k } => {
            let mut report = Report::new("verify");
            report.input(&file);
            let designs = read_designs(&file, k)?;
            let mut all_pass = true;
            for (i, (fp, d)) in designs.iter().enumerate() {
                let res = d.verify();
                println!("design {i} [{fp}]: {}", res.summary());
                all_pass &= res.pass;
            }
            report.set("designs", designs.len());
            report.set("outcome", if all_pass { "PASS" } else { "FAIL" });
            report.print();
            Ok(all_pass)
        }
        Command::Fingerprint { file, k } => {
            let mut report = Report::new("fingerprint");
            report.input(&file);
            let designs = read_designs(&file, k)?;
            let mut mismatches = 0usize;
            for (token, d) in &designs {
                let fp = invariants::fingerprint(d)?;
                if token != &fp && token != "-" {
                    mismatches += 1;
                }
                println!("{}", design::serialize(d, &fp));
            }
            report.set("designs", designs.len());
            report.set("token_mismatches", mismatches);
            report.print();
            Ok(true)
        }
        Command::Isomorphic {
            file_a,
            file_b,
            dump,
            bound,
        } => {
            let mut report = Report::new("isomorphic");
            report.input(&file_a);
            report.input(&file_b);
            let a = &read_designs(&file_a, None)?[0].1;
            let b = &read_designs(&file_b, None)?[0].1;
            let fp_a = invariants::fingerprint(a)?;
            let fp_b = invariants::fingerprint(b)?;
            report.set("fingerprint_a", &fp_a);
            report.set("fingerprint_b", &fp_b);
            let result = if fp_a != fp_b {
                None // different fingerprints certify non-isomorphism
            } else {
                invariants::are_isomorphic(a, b, bound)?
            };
            match &result {
                Some(sigma) => {
                    println!("isomorphic");
                    if dump {
                        let images: Vec<String> = sigma.iter().map(|q| q.to_string()).collect();
                        println!("bijection: {}", images.join(" "));
                    }
                    report.set("outcome", "isomorphic");
                }
                None => {
                    println!("not isomorphic");
                    report.set("outcome", "non-isomorphic");
                }
            }
            report.print();
            Ok(result.is_some())
        }
        Command::Search {
            config,
            threads,
            max_solutions,
            node_cap,
            time_budget,
        } => {
            let mut report = Report::new("search");
            report.input(&config);
            let mut cfg = load_config(&config)?;
            if let Some(m) = max_solutions {
                cfg.limits.max_solutions = Some(m);
            }
            if let Some(n) = node_cap {
                cfg.limits.node_cap = Some(n);
            }
            if let Some(t) = time_budget {
                cfg.limits.time_budget = Some(Duration::from_secs(t));
            }
            cfg.limits.threads = threads.max(1);
            report.set("config_digest", config_digest(&config)?);
            report.set("group_order", cfg.group.order());
            report.set("orbits", cfg.group.point_orbits().structure());
            let outcome = search(&cfg)?;
            for sol in &outcome.solutions {
                let fp = invariants::fingerprint(&sol.design)?;
                println!("{}", design::serialize(&sol.design, &fp));
            }
            report.set("candidates", outcome.candidate_count);
            report.set("solutions", outcome.solutions.len());
            report.set(
                "exhaustive",
                if outcome.exhaustive { "true" } else { "false (counts are lower bounds)" },
            );
            report.print();
            Ok(!outcome.solutions.is_empty())
        }
        Command::Construct { what } => match what {
            ConstructCommand::Td(TdArgs { k, n }) => {
                let mut report = Report::new("construct-td");
                let mols = best_mols(n)?;
                let td = transversal_design(k, n, &mols)?;
                print_td(&td);
                report.set("k", k);
                report.set("n", n);
                report.set("blocks", td.blocks.len());
                report.print();
                Ok(true)
            }
            ConstructCommand::Product { design: path, k } => {
                let mut report = Report::new("construct-product");
                report.input(&path);
                let (_, d) = read_designs(&path, None)?.remove(0);
                if d.k() != k {
                    bail!("design has k={}, requested k={k}", d.k());
                }
                let d = d.verified()?;
                let mols = best_mols(d.v())?;
                let td = transversal_design(k, d.v(), &mols)?;
                let lifted = product_lift(&d, &td)?;
                let fp = invariants::fingerprint(&lifted)?;
                println!("{}", design::serialize(&lifted, &fp));
                report.set("v", lifted.v());
                report.set("k", k);
                report.set("blocks", lifted.blocks().len());
                report.set("outcome", "PASS");
                report.print();
                Ok(true)
            }
        },
        Command::Orbits { file } => {
            let mut report = Report::new("orbits");
            report.input(&file);
            let text = std::fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))?;
            let (degree, gens) = parse_generator_file(&text)?;
            let group = PermGroup::generate(degree, gens, DEFAULT_ORDER_CAP)?;
            let orbits = group.point_orbits();
            println!(
                "group of order {} on {} points, orbits {}",
                group.order(),
                degree,
                orbits.structure()
            );
            report.set("degree", degree);
            report.set("order", group.order());
            report.set("orbits", orbits.structure());
            report.print();
            Ok(true)
        }
    }
}

fn print_td(td: &TransversalDesign) {
    println!("# TD({},{}): groups are consecutive ranges of {} points", td.k, td.n, td.n);
    for g in 0..td.k {
        println!("# group {g}: {}..{}", g * td.n, (g + 1) * td.n - 1);
    }
    let as_design = Design::new(td.k * td.n, td.k, td.blocks.clone());
    let blocks: Vec<String> = as_design
        .blocks()
        .iter()
        .map(|b| b.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))
        .collect();
    println!("td: {}", blocks.join("; "));
}

/// Short content digest so reports tie back to exact config bytes.
fn config_digest(path: &Path) -> Result<String> {
    use std::hash::{Hash, Hasher};
    let bytes = std::fs::read(path)?;
    let mut hasher = std::collections::hash_map::DefaultHasher::new();
    bytes.hash(&mut hasher);
    Ok(format!("{:016x}", hasher.finish()))
}
