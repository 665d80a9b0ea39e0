use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use artinhexa::braid::{classify, rho_torus_witness, PureBraid};
use artinhexa::data::DataSource;
use artinhexa::free_product::{even_power_form, rho, BraidWord};
use artinhexa::harness::{self, RunConfig, SymmetryMode};
use artinhexa::hexatangle::{self, fmt_pairing, HexFilling, LinearCell, Param};
use artinhexa::triviality::{self, DEFAULT_BUDGET};
use artinhexa::{
    gen_from_hex, gen_from_params, rat_group, verify_artin, Presentation, SurgeryParams,
};

const GRAMMAR: &str = "\
Input grammars:
  word       1 | x<i>[^k]*x<j>[^k]...          e.g. x1^-1*x2*x3^2
  filling    alpha,beta,gamma,delta,epsilon,eta  e.g. 1,1,1,0,0,0
  params     m,n,p,e,e1,f1                       e.g. 1,1,0,0,0,1
  blocks     e1,f1;e2,f2;...                     e.g. 1,1;2,-1
  braid word 1 | s1|s2[^k]*...                   e.g. s1*s2^-1*s1
  cell       [±]TERM((+|-)TERM)*, TERM = INT | alpha..eta, one variable at most
  range      LO..HI                              e.g. -5..5
  presentation file: `rank N` then one word per line

Set ARTINHEXA_DATA to read table files from a directory instead of the
bundled copies.";

#[derive(Parser)]
#[command(name = "artinhexa", version, about = "Artin presentations from hexatangle fillings", after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Condition {
    W,
    F,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum Symmetries {
    All,
    Id,
}

#[derive(clap::Args)]
struct BatchArgs {
    /// Comma-separated table ids.
    #[arg(long, default_value = "1,2,3", value_delimiter = ',')]
    tables: Vec<u8>,
    /// Range of every free variable.
    #[arg(long, default_value = "-5..5", value_parser = parse_range, allow_hyphen_values = true)]
    param_range: (i64, i64),
    #[arg(long, value_enum, default_value = "all")]
    symmetries: Symmetries,
    /// Include mirror images (negate all six fillings).
    #[arg(long, value_enum, default_value = "off")]
    mirror: OnOff,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Simplifier move budget per presentation.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Artin presentation of a filling or of surgery parameters.
    GenPresentation {
        #[arg(
            long,
            allow_hyphen_values = true,
            conflicts_with = "params",
            required_unless_present = "params"
        )]
        hex: Option<HexFilling>,
        #[arg(long, allow_hyphen_values = true)]
        params: Option<SurgeryParams>,
    },
    /// Check the W and F product identities of a presentation file.
    VerifyArtin {
        #[arg(long)]
        file: PathBuf,
        /// Exit with status 1 unless this identity holds.
        #[arg(long, value_enum, default_value = "both")]
        condition: Condition,
    },
    /// Run the triviality simplifier and print the verdict as JSON.
    Simplify {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Include the move log (otherwise only its length).
        #[arg(long)]
        emit_log: bool,
    },
    /// Classify the closure of a pure 3-braid.
    ClassifyBraid {
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        blocks: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        twist: i64,
        /// Also print the even-power test on the image in Z2 * Z3.
        #[arg(long)]
        witness: bool,
    },
    /// Image of a braid word in Z2 * Z3.
    Rho {
        #[arg(long, allow_hyphen_values = true)]
        braid_word: BraidWord,
        /// Also test whether the image is conjugate to an even power.
        #[arg(long)]
        even_power: bool,
    },
    /// Apply symmetry `index` (1..=24) to a filling.
    Symmetry {
        #[arg(long)]
        index: usize,
        #[arg(long, allow_hyphen_values = true)]
        hex: HexFilling,
    },
    /// All symmetry images of a filling, sorted.
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        hex: HexFilling,
        #[arg(long)]
        mirror: bool,
    },
    /// Check the symmetry table (or the generated control) for group structure.
    ValidateSymmetries {
        /// Validate the tetrahedral control instead of the data table.
        #[arg(long)]
        control: bool,
    },
    /// Parse a table cell and evaluate it.
    ParseCell {
        #[arg(allow_hyphen_values = true)]
        cell: String,
        /// Variable values, e.g. gamma=2,alpha=-1.
        #[arg(long, allow_hyphen_values = true)]
        assign: Option<String>,
    },
    /// Run the full pipeline over the filling tables.
    RunTables {
        #[command(flatten)]
        batch: BatchArgs,
        /// JSON lines instead of TSV.
        #[arg(long)]
        json: bool,
        /// Skip the simplifier; divisors are still computed.
        #[arg(long)]
        no_simplify: bool,
    },
    /// Check the example relator tables and look them up in a batch run.
    MatchExamples {
        #[command(flatten)]
        batch: BatchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Drop the last relator of a presentation file.
    RatGroup {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got `{s}`"))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound `{hi}`"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn read_presentation(path: &PathBuf) -> Result<Presentation> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse()
        .with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn config(b: &BatchArgs) -> RunConfig {
    RunConfig {
        tables: b.tables.clone(),
        range: b.param_range,
        symmetries: match b.symmetries {
            Symmetries::All => SymmetryMode::All,
            Symmetries::Id => SymmetryMode::Identity,
        },
        mirror: matches!(b.mirror, OnOff::On),
        jobs: b.jobs,
        budget: b.budget,
        simplify: true,
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    match cli.command {
        Command::GenPresentation { hex, params } => {
            let p = match (hex, params) {
                (Some(h), _) => gen_from_hex(&h),
                (None, Some(s)) => gen_from_params(&s),
                (None, None) => bail!("one of --hex or --params is required"),
            };
            write!(out, "{p}")?;
        }
        Command::VerifyArtin { file, condition } => {
            let p = read_presentation(&file)?;
            let c = verify_artin(&p)?;
            writeln!(out, "W {}", c.w)?;
            writeln!(out, "F {}", c.f)?;
            let ok = match condition {
                Condition::W => c.w,
                Condition::F => c.f,
                Condition::Both => c.w && c.f,
            };
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Simplify {
            file,
            budget,
            emit_log,
        } => {
            let p = read_presentation(&file)?;
            let v = triviality::simplify(&p, budget);
            let mut json = serde_json::to_value(&v)?;
            if !emit_log {
                json["moves"] = serde_json::json!(v.moves.len());
            }
            writeln!(out, "{json}")?;
        }
        Command::ClassifyBraid {
            blocks,
            twist,
            witness,
        } => {
            let b = PureBraid::new(artinhexa::braid::parse_blocks(&blocks)?, twist);
            writeln!(out, "{}", classify(&b))?;
            if witness {
                let n = b.cyclic_normalize();
                match rho_torus_witness(&n) {
                    Ok(w) => writeln!(out, "even-power {w}")?,
                    Err(e) => writeln!(out, "even-power n/a ({e})")?,
                }
            }
        }
        Command::Rho {
            braid_word,
            even_power,
        } => {
            let w = rho(&braid_word);
            writeln!(out, "{w}")?;
            if even_power {
                writeln!(out, "even-power {}", even_power_form(&w))?;
            }
        }
        Command::Symmetry { index, hex } => {
            writeln!(out, "{}", hexatangle::apply_symmetry(index, &hex)?)?;
        }
        Command::Orbit { hex, mirror } => {
            for h in hexatangle::orbit(&hex, mirror) {
                writeln!(out, "{h}")?;
            }
        }
        Command::ValidateSymmetries { control } => {
            let table = if control {
                hexatangle::tetrahedral_control()
            } else {
                harness::load_symmetries(&DataSource::from_env())?
            };
            let report = hexatangle::validate_symmetry_table(&table);
            write!(out, "{report}")?;
            for p in &report.opposite_pairings {
                writeln!(out, "opposite pairs: {}", fmt_pairing(p))?;
            }
        }
        Command::ParseCell { cell, assign } => {
            let c: LinearCell = cell.parse()?;
            let mut a = BTreeMap::new();
            for kv in assign
                .iter()
                .flat_map(|s| s.split(','))
                .filter(|s| !s.trim().is_empty())
            {
                let (k, v) = kv
                    .split_once('=')
                    .with_context(|| format!("expected name=value, got `{kv}`"))?;
                let p: Param = k.trim().parse()?;
                a.insert(
                    p,
                    v.trim()
                        .parse::<i64>()
                        .with_context(|| format!("bad value `{v}`"))?,
                );
            }
            writeln!(out, "{c}")?;
            if c.var.is_none() || !a.is_empty() {
                let vals: Vec<String> = c.values(&a)?.iter().map(i64::to_string).collect();
                writeln!(out, "{}", vals.join(" "))?;
            }
        }
        Command::RunTables {
            batch,
            json,
            no_simplify,
        } => {
            let mut cfg = config(&batch);
            cfg.simplify = !no_simplify;
            let report = harness::run_tables(&DataSource::from_env(), &cfg)?;
            let text = if json {
                report.to_json_lines()
            } else {
                report.to_tsv()
            };
            emit(&batch.out, &text)?;
            eprintln!("{}", report.summary());
        }
        Command::MatchExamples { batch, json } => {
            let source = DataSource::from_env();
            let cfg = config(&batch);
            let mut batch_cfg = cfg.clone();
            batch_cfg.simplify = false;
            let report = harness::run_tables(&source, &batch_cfg)?;
            let examples = harness::load_examples(&source)?;
            let checks =
                harness::match_examples(&report, &examples, cfg.range, cfg.budget, cfg.jobs)?;
            let text = if json {
                checks
                    .iter()
                    .map(|c| serde_json::to_string(c).map(|s| s + "\n"))
                    .collect::<Result<String, _>>()?
            } else {
                harness::examples_tsv(&checks)
            };
            emit(&batch.out, &text)?;
            let unmatched: Vec<String> = checks
                .iter()
                .filter(|c| c.matched == 0)
                .map(|c| format!("{}:{}", c.id.table, c.id.row))
                .collect();
            eprintln!(
                "examples={} matched={} unmatched: {}",
                checks.len(),
                checks.len() - unmatched.len(),
                if unmatched.is_empty() {
                    "none".to_string()
                } else {
                    unmatched.join(" ")
                }
            );
        }
        Command::RatGroup { file, budget } => {
            let p = read_presentation(&file)?;
            let trivial =
                triviality::simplify(&p, budget).tag == triviality::TrivialityTag::Trivial;
            let r = rat_group(&p, trivial);
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            write!(out, "{}", r.presentation)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e)
            if e.downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
