//! Batch pipeline over the filling tables: instantiate, apply symmetries,
//! generate presentations, verify, simplify, classify, and compare with
//! the example relator tables.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::artin::{gen_from_hex, verify_artin, Presentation};
use crate::braid::classify;
use crate::data::DataSource;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::hexatangle::{HexFilling, Param, ParamTable, SymmetryTable};
use crate::triviality::{simplify, TrivialityTag, DEFAULT_BUDGET};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryMode {
    All,
    Identity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub tables: Vec<u8>,
    pub range: (i64, i64),
    pub symmetries: SymmetryMode,
    /// Also emit the mirror image of every filling.
    pub mirror: bool,
    pub jobs: usize,
    pub budget: u64,
    /// Run the simplifier on every row (it dominates the cost).
    pub simplify: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tables: vec![1, 2, 3],
            range: (-5, 5),
            symmetries: SymmetryMode::All,
            mirror: false,
            jobs: 1,
            budget: DEFAULT_BUDGET,
            simplify: true,
        }
    }
}

/// Identifies an example relator triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExampleRef {
    pub table: u8,
    pub row: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub table: u8,
    pub row: usize,
    /// `name=value` pairs, `-` when the row has no free variables.
    pub assignment: String,
    /// `+`/`-` per `±` cell, `-` when there are none.
    pub branch: String,
    pub symmetry: usize,
    pub mirror: bool,
    pub filling: HexFilling,
    pub relators: Vec<Word>,
    pub w: bool,
    pub f: bool,
    pub divisors: Vec<i64>,
    /// `Trivial`, `NotTrivial`, `Unknown`, or `-` when not run.
    pub verdict: String,
    pub braid: String,
    pub example: Option<ExampleRef>,
}

pub const TSV_HEADER: &str =
    "table\trow\tassignment\tbranch\tsymmetry\tmirror\tfilling\trelators\tW\tF\tdivisors\tverdict\tbraid\texample";

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

impl ReportRow {
    pub fn to_tsv(&self) -> String {
        let example = self
            .example
            .map_or("-".to_string(), |e| format!("{}:{}", e.table, e.row));
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.table,
            self.row,
            self.assignment,
            self.branch,
            self.symmetry,
            if self.mirror { "mirror" } else { "-" },
            self.filling,
            join(&self.relators, ", "),
            self.w,
            self.f,
            join(&self.divisors, ","),
            self.verdict,
            self.braid,
            example,
        )
    }
}

fn fmt_assignment(a: &BTreeMap<Param, i64>) -> String {
    if a.is_empty() {
        return "-".into();
    }
    a.iter()
        .map(|(p, v)| format!("{p}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// One example relator triple, possibly with symbolic exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleRow {
    pub id: ExampleRef,
    pub text: [String; 3],
    pub relators: [Expr; 3],
}

impl ExampleRow {
    pub fn vars(&self) -> Vec<Param> {
        let mut v: Vec<Param> = self.relators.iter().flat_map(Expr::vars).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn is_concrete(&self) -> bool {
        self.vars().is_empty()
    }

    pub fn instantiate(&self, a: &BTreeMap<Param, i64>) -> Result<Presentation> {
        let rels = self
            .relators
            .iter()
            .map(|e| e.eval(a))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(3, rels)
    }

    /// Every instantiation over `lo..=hi`, one for a concrete row.
    pub fn instances(&self, lo: i64, hi: i64) -> Vec<(BTreeMap<Param, i64>, Presentation)> {
        let mut assignments = vec![BTreeMap::new()];
        for v in self.vars() {
            assignments = assignments
                .into_iter()
                .flat_map(|a| {
                    (lo..=hi).map(move |x| {
                        let mut a = a.clone();
                        a.insert(v, x);
                        a
                    })
                })
                .collect();
        }
        assignments
            .into_iter()
            .map(|a| {
                let p = self.instantiate(&a).expect("all variables bound");
                (a, p)
            })
            .collect()
    }
}

/// Header `table row r1 r2 r3`, tab-separated.
pub fn parse_examples(text: &str) -> Result<Vec<ExampleRow>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split('\t').map(str::trim).collect();
        let bad = |m: String| Error::data("examples.tsv", format!("line {}: {m}", i + 1));
        let [table, row, r1, r2, r3] = cells[..] else {
            return Err(bad(format!("{} cells, expected 5", cells.len())));
        };
        let table = table
            .parse()
            .map_err(|_| bad(format!("bad table `{table}`")))?;
        let row = row.parse().map_err(|_| bad(format!("bad row `{row}`")))?;
        let parse = |s: &str| s.parse::<Expr>().map_err(|e| bad(format!("`{s}`: {e}")));
        out.push(ExampleRow {
            id: ExampleRef { table, row },
            text: [r1.into(), r2.into(), r3.into()],
            relators: [parse(r1)?, parse(r2)?, parse(r3)?],
        });
    }
    Ok(out)
}

pub fn load_examples(source: &DataSource) -> Result<Vec<ExampleRow>> {
    parse_examples(&source.read("examples.tsv")?)
}

/// Relator triples of the examples, instantiated over the grid, keyed to
/// the first example producing them.
pub fn example_index(examples: &[ExampleRow], range: (i64, i64)) -> HashMap<Vec<Word>, ExampleRef> {
    let mut index = HashMap::new();
    for ex in examples {
        for (_, p) in ex.instances(range.0, range.1) {
            index.entry(p.relators).or_insert(ex.id);
        }
    }
    index
}

struct Job {
    table: u8,
    row: usize,
    assignment: String,
    branch: String,
    symmetry: usize,
    mirror: bool,
    filling: HexFilling,
}

fn process(job: &Job, budget: Option<u64>, index: &HashMap<Vec<Word>, ExampleRef>) -> ReportRow {
    let pres = gen_from_hex(&job.filling);
    let check = verify_artin(&pres).expect("generated presentations have rank 3");
    let (divisors, verdict) = match budget {
        Some(b) => {
            let v = simplify(&pres, b);
            (v.divisors, v.tag.to_string())
        }
        None => (
            crate::triviality::abelian_invariants(&pres).divisors,
            "-".to_string(),
        ),
    };
    let braid = classify(&job.filling.to_surgery().braid).to_string();
    let example = index.get(&pres.relators).copied();
    ReportRow {
        table: job.table,
        row: job.row,
        assignment: job.assignment.clone(),
        branch: job.branch.clone(),
        symmetry: job.symmetry,
        mirror: job.mirror,
        filling: job.filling,
        relators: pres.relators,
        w: check.w,
        f: check.f,
        divisors,
        verdict,
        braid,
        example,
    }
}

/// Every job in report order.
fn jobs(tables: &[ParamTable], symmetries: &SymmetryTable, cfg: &RunConfig) -> Vec<Job> {
    let ks: Vec<usize> = match cfg.symmetries {
        SymmetryMode::All => (1..=symmetries.len()).collect(),
        SymmetryMode::Identity => vec![1],
    };
    let mut out = Vec::new();
    for t in tables {
        for row in &t.rows {
            for inst in row.instantiate_range(cfg.range.0, cfg.range.1) {
                let assignment = fmt_assignment(&inst.assignment);
                let branch = if inst.branch.is_empty() {
                    "-".to_string()
                } else {
                    inst.branch.clone()
                };
                for &k in &ks {
                    let image = symmetries.rows[k - 1].apply(&inst.filling);
                    let mirrors: &[bool] = if cfg.mirror { &[false, true] } else { &[false] };
                    for &mirror in mirrors {
                        out.push(Job {
                            table: t.id,
                            row: row.row,
                            assignment: assignment.clone(),
                            branch: branch.clone(),
                            symmetry: k,
                            mirror,
                            filling: if mirror { image.mirror() } else { image },
                        });
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn to_tsv(&self) -> String {
        let mut s = String::with_capacity(self.rows.len() * 160);
        s.push_str(TSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.to_tsv());
            s.push('\n');
        }
        s
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            s.push_str(&serde_json::to_string(r).expect("report rows serialize"));
            s.push('\n');
        }
        s
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for r in &self.rows {
            s.rows += 1;
            s.w += r.w as usize;
            s.f += r.f as usize;
            s.trivial_divisors += r.divisors.iter().all(|&d| d == 1) as usize;
            *s.verdicts.entry(r.verdict.clone()).or_default() += 1;
            s.matched += r.example.is_some() as usize;
        }
        s
    }

    /// Rows failing the W identity or with nontrivial abelian invariants.
    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows
            .iter()
            .filter(|r| !r.w || r.divisors.iter().any(|&d| d != 1))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: usize,
    pub w: usize,
    pub f: usize,
    pub trivial_divisors: usize,
    pub verdicts: BTreeMap<String, usize>,
    pub matched: usize,
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "rows={} W={} F={} divisors(1,1,1)={} matched={}",
            self.rows, self.w, self.f, self.trivial_divisors, self.matched
        )?;
        for (k, v) in &self.verdicts {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

pub fn load_tables(source: &DataSource, ids: &[u8]) -> Result<Vec<ParamTable>> {
    ids.iter().map(|&id| ParamTable::load(source, id)).collect()
}

pub fn load_symmetries(source: &DataSource) -> Result<SymmetryTable> {
    SymmetryTable::parse(&source.read("symmetries.tsv")?)
}

/// Run the pipeline. Output order depends only on the inputs, never on
/// `cfg.jobs`.
pub fn run_tables(source: &DataSource, cfg: &RunConfig) -> Result<Report> {
    let tables = load_tables(source, &cfg.tables)?;
    let symmetries = load_symmetries(source)?;
    let index = example_index(&load_examples(source)?, cfg.range);
    let jobs = jobs(&tables, &symmetries, cfg);
    let budget = cfg.simplify.then_some(cfg.budget);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let rows = pool.install(|| {
        jobs.par_iter()
            .map(|j| process(j, budget, &index))
            .collect()
    });
    Ok(Report { rows })
}

/// Outcome for one example triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleCheck {
    pub id: ExampleRef,
    pub concrete: bool,
    pub instances: usize,
    /// Instances with the W or F identity.
    pub artin: usize,
    pub w: usize,
    pub f: usize,
    pub trivial: usize,
    /// Instances whose relators some report row reproduces.
    pub matched: usize,
    /// First report row reproducing an instance: `(table, row, symmetry)`.
    pub first_match: Option<(u8, usize, usize)>,
}

/// Check every example against the Artin identities and the simplifier,
/// and look each instance up in `report`.
pub fn match_examples(
    report: &Report,
    examples: &[ExampleRow],
    range: (i64, i64),
    budget: u64,
    jobs: usize,
) -> Result<Vec<ExampleCheck>> {
    let mut seen: HashMap<&[Word], (u8, usize, usize)> = HashMap::new();
    for r in &report.rows {
        seen.entry(r.relators.as_slice())
            .or_insert((r.table, r.row, r.symmetry));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        examples
            .par_iter()
            .map(|ex| {
                let mut c = ExampleCheck {
                    id: ex.id,
                    concrete: ex.is_concrete(),
                    instances: 0,
                    artin: 0,
                    w: 0,
                    f: 0,
                    trivial: 0,
                    matched: 0,
                    first_match: None,
                };
                for (_, p) in ex.instances(range.0, range.1) {
                    c.instances += 1;
                    let a = verify_artin(&p).expect("rank 3");
                    c.w += a.w as usize;
                    c.f += a.f as usize;
                    c.artin += a.any() as usize;
                    c.trivial += (simplify(&p, budget).tag == TrivialityTag::Trivial) as usize;
                    if let Some(&hit) = seen.get(p.relators.as_slice()) {
                        c.matched += 1;
                        c.first_match.get_or_insert(hit);
                    }
                }
                c
            })
            .collect()
    }))
}

pub fn examples_tsv(checks: &[ExampleCheck]) -> String {
    let mut s =
        String::from("table\trow\tkind\tinstances\tartin\tW\tF\ttrivial\tmatched\tfirst_match\n");
    for c in checks {
        let first = c
            .first_match
            .map_or("-".to_string(), |(t, r, k)| format!("{t}:{r}@{k}"));
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            c.id.table,
            c.id.row,
            if c.concrete { "concrete" } else { "parametric" },
            c.instances,
            c.artin,
            c.w,
            c.f,
            c.trivial,
            c.matched,
            first
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;

    fn small() -> RunConfig {
        RunConfig {
            tables: vec![1],
            range: (-1, 1),
            symmetries: SymmetryMode::Identity,
            ..RunConfig::default()
        }
    }

    #[test]
    fn first_row_matches_table_five() {
        let report = run_tables(&DataSource::Bundled, &small()).unwrap();
        let r = &report.rows[0];
        assert_eq!(
            (r.table, r.row, r.branch.as_str(), r.symmetry),
            (1, 1, "+++", 1)
        );
        assert_eq!(
            join(&r.relators, ", "),
            "x1^-1, x2^-1*x3^-1*x2^-1, x3^-1*x2^-1"
        );
        assert!(r.w);
        assert_eq!(r.verdict, "Trivial");
        assert_eq!(r.example, Some(ExampleRef { table: 5, row: 1 }));
    }

    #[test]
    fn trivial_rows_have_trivial_divisors() {
        let report = run_tables(&DataSource::Bundled, &small()).unwrap();
        for r in &report.rows {
            if r.verdict == "Trivial" {
                assert_eq!(r.divisors, vec![1, 1, 1]);
            }
        }
    }

    #[test]
    fn examples_parse() {
        let ex = parse_examples(data::EXAMPLES).unwrap();
        assert_eq!(ex.len(), 120);
        assert_eq!(ex[0].id, ExampleRef { table: 5, row: 1 });
        assert!(ex[0].is_concrete());
    }

    #[test]
    fn corrupted_example_is_unmatched() {
        let report = run_tables(&DataSource::Bundled, &small()).unwrap();
        let ex = parse_examples("table\trow\tr1\tr2\tr3\n5\t99\tx1^-7\tx2^5*x1\tx3^3\n").unwrap();
        let c = match_examples(&report, &ex, (-1, 1), 1000, 1).unwrap();
        assert_eq!(c[0].matched, 0);
    }
}
