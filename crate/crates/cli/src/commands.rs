use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigUint;
use permclass::invariants::INVARIANT_NAMES;
use permclass::meta::strategy_disagreements;
use permclass::oracle::{self, Provenance, STORED_KEY, ROWS};
use permclass::{
    class_of, enumerate_classes, invariant_report, lift_partition, parse_partition, repeated_down_jump,
    stooge_sets, symmetry_orbit, EngineConfig, Mode, ParseOptions, Partition, Perm, StoogeNormalizer,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::output::{Output, Table};
use crate::{ClassesArgs, Command, CountArgs, InvariantArgs, StoogeArgs, TableArgs, TheoremCommand, VerifyArgs};

pub fn run(cmd: &Command, cfg: &EngineConfig) -> Result<(Output, u8)> {
    match cmd {
        Command::Count(a) => count(a, cfg).map(|o| (o, 0)),
        Command::Classes(a) => classes(a, cfg).map(|o| (o, 0)),
        Command::Invariant(a) => invariant(a).map(|o| (o, 0)),
        Command::Table(a) => table(a).map(|o| (o, 0)),
        Command::Verify(a) => verify(a, cfg),
        Command::Orbit(a) => orbit(&a.partition).map(|o| (o, 0)),
        Command::Stooge(a) => stooge(a, cfg).map(|o| (o, 0)),
        Command::Theorem(t) => theorem(t, cfg).map(|o| (o, 0)),
    }
}

fn partition(text: &str) -> Result<Partition> {
    let (k, warnings) = parse_partition(text, ParseOptions::default())?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(k)
}

fn perm(text: &str) -> Result<Perm> {
    Ok(text.parse()?)
}

const COUNT_HEADER: [&str; 6] = ["relation", "n", "mode", "classes", "trivial", "identity_class_size"];

#[derive(Serialize)]
struct CountRecord {
    relation: String,
    n: usize,
    mode: Mode,
    classes: usize,
    trivial: u64,
    identity_class_size: u64,
    /// (size, how many classes have it), ascending by size.
    size_multiset: Vec<(u64, u64)>,
}

impl CountRecord {
    fn csv(&self) -> Vec<String> {
        vec![
            self.relation.clone(),
            self.n.to_string(),
            self.mode.to_string(),
            self.classes.to_string(),
            self.trivial.to_string(),
            self.identity_class_size.to_string(),
        ]
    }
}

fn count_one(k: &Partition, n: usize, mode: Mode, cfg: &EngineConfig) -> Result<CountRecord> {
    let dec = enumerate_classes(n, k, mode, cfg)?;
    let mut sizes: BTreeMap<u64, u64> = BTreeMap::new();
    for &s in dec.class_sizes() {
        *sizes.entry(s).or_default() += 1;
    }
    Ok(CountRecord {
        relation: k.to_string(),
        n,
        mode,
        classes: dec.num_classes(),
        trivial: dec.num_trivial(),
        identity_class_size: dec.class_size_of(&Perm::identity(n)),
        size_multiset: sizes.into_iter().collect(),
    })
}

fn count(a: &CountArgs, cfg: &EngineConfig) -> Result<Output> {
    let k = partition(&a.partition)?;
    let records = a.n.0.clone().map(|n| count_one(&k, n, a.mode, cfg)).collect::<Result<Vec<_>>>()?;
    let mut text = String::new();
    for r in &records {
        let sizes: Vec<String> = r.size_multiset.iter().map(|(s, m)| format!("{s}x{m}")).collect();
        writeln!(
            text,
            "{} n={} mode={} classes={} trivial={} identity_class_size={} sizes={}",
            r.relation,
            r.n,
            r.mode,
            r.classes,
            r.trivial,
            r.identity_class_size,
            sizes.join(",")
        )
        .unwrap();
    }
    let table = Table { header: COUNT_HEADER.to_vec(), rows: records.iter().map(CountRecord::csv).collect() };
    Ok(Output::new(text, &records)?.with_table(table))
}

#[derive(Serialize)]
struct ClassListing {
    relation: String,
    mode: Mode,
    permutation: Perm,
    size: usize,
    members: Vec<Perm>,
}

fn classes(a: &ClassesArgs, cfg: &EngineConfig) -> Result<Output> {
    let k = partition(&a.partition)?;
    if let Some(text) = &a.perm {
        let p = perm(text)?;
        if a.n.is_some_and(|n| n != p.len()) {
            return Err(CliError::Usage(format!("--n disagrees with the length of {p}")));
        }
        let members = class_of(&p, &k, a.mode, cfg.class_cap)?;
        let text: String = members.iter().map(|q| format!("{q}\n")).collect();
        let listing = ClassListing { relation: k.to_string(), mode: a.mode, permutation: p, size: members.len(), members };
        return Output::new(text, &listing);
    }
    let n = a.n.ok_or_else(|| CliError::Usage("classes needs --n or --perm".into()))?;
    let dec = enumerate_classes(n, &k, a.mode, cfg)?;
    let report = dec.report(&k);
    let reps = dec.representatives();
    let mut text = format!("{} n={} mode={} classes={}\n", report.partition, n, a.mode, report.num_classes);
    let mut rows = Vec::new();
    for (id, rep) in reps.iter().enumerate() {
        let size = dec.class_sizes()[id];
        writeln!(text, "{rep} {size}").unwrap();
        rows.push(vec![rep.to_string(), size.to_string()]);
    }
    Ok(Output::new(text, &report)?.with_table(Table { header: vec!["representative", "size"], rows }))
}

fn invariant(a: &InvariantArgs) -> Result<Output> {
    let p = perm(&a.perm)?;
    let k = a.partition.as_deref().map(partition).transpose()?;
    let report = invariant_report(&p, k.as_ref());
    if let Some(name) = &a.name {
        if !INVARIANT_NAMES.contains(&name.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown invariant {name:?}; known: {}",
                INVARIANT_NAMES.join(", ")
            )));
        }
        let entry = report.values.get(name).ok_or_else(|| {
            CliError::Usage(format!("{name} does not belong to {}", report.relation_key.clone().unwrap_or_default()))
        })?;
        let value = serde_json::to_value(&entry.value)?;
        return Output::new(format!("{name} = {value}"), &value);
    }
    let mut text = format!("permutation {p}\n");
    for (name, e) in &report.values {
        writeln!(text, "{name} = {} [{}]", serde_json::to_string(&e.value)?, e.relation).unwrap();
    }
    Output::new(text, &report)
}

#[derive(Serialize)]
struct TableRecord {
    relation: String,
    formula: String,
    source: &'static str,
    values: BTreeMap<usize, String>,
}

/// Canonical relation keys to work on; every row when none are named.
fn selected(relations: &[String]) -> Result<Vec<String>> {
    if relations.is_empty() {
        return Ok(ROWS.iter().map(|r| r.key.to_string()).collect());
    }
    relations
        .iter()
        .map(|r| {
            let key = partition(r)?.to_string();
            if key != STORED_KEY {
                oracle::find_row(&key)?;
            }
            Ok(key)
        })
        .collect()
}

fn formula_of(key: &str) -> String {
    match oracle::find_row(key) {
        Ok(row) => row.formula.to_string(),
        Err(_) => "stored values".to_string(),
    }
}

fn table(a: &TableArgs) -> Result<Output> {
    let mut records = Vec::new();
    let mut rows = Vec::new();
    let mut text = String::new();
    for key in selected(&a.relation)? {
        let t = oracle::table(&key, a.n.0.clone())?;
        let source = match t.provenance {
            Provenance::Formula => "formula",
            Provenance::Table => "table",
        };
        let values: BTreeMap<usize, String> = t.values.iter().map(|(n, v)| (*n, v.to_string())).collect();
        let line: Vec<String> = values.iter().map(|(n, v)| format!("{n}:{v}")).collect();
        writeln!(text, "{key}  {}  {}", formula_of(&key), line.join(" ")).unwrap();
        for (n, v) in &values {
            rows.push(vec![key.clone(), n.to_string(), v.clone(), source.to_string()]);
        }
        records.push(TableRecord { relation: key, formula: formula_of(&t.relation_key), source, values });
    }
    let table = Table { header: vec!["relation", "n", "expected", "source"], rows };
    Ok(Output::new(text, &records)?.with_table(table))
}

#[derive(Deserialize)]
struct ExpectedRow {
    relation: String,
    n: usize,
    expected: String,
}

fn read_expected(path: &Path) -> Result<BTreeMap<(String, usize), BigUint>> {
    let mut out = BTreeMap::new();
    let mut rd = csv::Reader::from_path(path)?;
    for row in rd.deserialize::<ExpectedRow>() {
        let row = row?;
        let key = partition(&row.relation)?.to_string();
        let v: BigUint = row
            .expected
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad expected value {:?} for {key} n={}", row.expected, row.n)))?;
        out.insert((key, row.n), v);
    }
    Ok(out)
}

#[derive(Serialize)]
struct VerifyRecord {
    #[serde(flatten)]
    count: CountRecord,
    expected: String,
    status: &'static str,
}

#[derive(Serialize)]
struct VerifyReport {
    checked: usize,
    mismatches: usize,
    results: Vec<VerifyRecord>,
}

fn verify(a: &VerifyArgs, cfg: &EngineConfig) -> Result<(Output, u8)> {
    let overrides = match &a.expected {
        Some(p) => read_expected(p)?,
        None => BTreeMap::new(),
    };
    let mut results = Vec::new();
    for key in selected(&a.relation)? {
        let mut expected = oracle::table(&key, a.n.0.clone())?.values;
        for ((rel, n), v) in &overrides {
            if *rel == key && a.n.0.contains(n) {
                expected.insert(*n, v.clone());
            }
        }
        let k = partition(&key)?;
        for (n, want) in expected {
            let count = count_one(&k, n, Mode::Factor, cfg)?;
            let status = if BigUint::from(count.classes) == want { "pass" } else { "fail" };
            results.push(VerifyRecord { count, expected: want.to_string(), status });
        }
    }
    let mismatches = results.iter().filter(|r| r.status == "fail").count();
    let mut text = String::new();
    for r in &results {
        writeln!(
            text,
            "{} {} n={} expected={} classes={}",
            r.status.to_uppercase(),
            r.count.relation,
            r.count.n,
            r.expected,
            r.count.classes
        )
        .unwrap();
    }
    writeln!(text, "checked {} mismatches {}", results.len(), mismatches).unwrap();
    for r in results.iter().filter(|r| r.status == "fail") {
        writeln!(text, "- {} n={}: expected {}", r.count.relation, r.count.n, r.expected).unwrap();
        writeln!(text, "+ {} n={}: engine {}", r.count.relation, r.count.n, r.count.classes).unwrap();
    }
    let mut header = COUNT_HEADER.to_vec();
    header.extend(["expected", "status"]);
    let rows = results
        .iter()
        .map(|r| {
            let mut row = r.count.csv();
            row.push(r.expected.clone());
            row.push(r.status.to_string());
            row
        })
        .collect();
    let report = VerifyReport { checked: results.len(), mismatches, results };
    let out = Output::new(text, &report)?.with_table(Table { header, rows });
    Ok((out, if mismatches == 0 { 0 } else { 1 }))
}

fn orbit(text: &str) -> Result<Output> {
    let images: Vec<String> = symmetry_orbit(&partition(text)?).iter().map(|k| k.to_string()).collect();
    let rows = images.iter().map(|s| vec![s.clone()]).collect();
    Ok(Output::new(images.join("\n"), &images)?.with_table(Table { header: vec!["relation"], rows }))
}

#[derive(Serialize)]
struct Normalized {
    relation: String,
    input: Perm,
    output: Perm,
}

fn stooge(a: &StoogeArgs, cfg: &EngineConfig) -> Result<Output> {
    let k = partition(&a.partition)?;
    if let Some(text) = &a.perm {
        let p = perm(text)?;
        let out = StoogeNormalizer::new(p.len(), &k, cfg)?.normalize(&p)?;
        let text = format!("{p} -> {out}");
        return Output::new(text, &Normalized { relation: k.to_string(), input: p, output: out });
    }
    let n = a.n.ok_or_else(|| CliError::Usage("stooge needs --n or --perm".into()))?;
    let sets = stooge_sets(n, &k, cfg)?;
    let join = |v: &[Perm]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
    let text = format!("L: {}\nR: {}\nI: {}", join(&sets.l), join(&sets.r), join(&sets.i));
    Output::new(text, &sets)
}

#[derive(Serialize)]
struct StrategyReport {
    relation: String,
    n: usize,
    independent: bool,
    disagreements: Vec<Perm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Trace>,
}

#[derive(Serialize)]
struct Trace {
    input: Perm,
    strategy: permclass::Strategy,
    avoider: Perm,
    steps: usize,
}

fn theorem(t: &TheoremCommand, cfg: &EngineConfig) -> Result<Output> {
    match t {
        TheoremCommand::AvoiderCriterion(a) => {
            let r = permclass::avoider_criterion(&partition(&a.partition)?, a.k, a.check_to, cfg)?;
            let mut text = format!(
                "{} k={} N_k={} A_k={} holds={} propagation_ok={} checked_to={}\n",
                r.partition, r.k, r.n_k, r.a_k, r.holds, r.propagation_ok, r.propagation_checked_to
            );
            for c in &r.checked {
                writeln!(text, "n={} classes={} avoiders={}", c.n, c.classes, c.avoiders).unwrap();
            }
            Output::new(text, &r)
        }
        TheoremCommand::AdjacentSubword(a) => {
            let r = permclass::adjacent_equals_subword(&partition(&a.partition)?, a.k, a.check_to, cfg)?;
            let mut text = format!(
                "{} k={} equal_at_k={} propagation_ok={} checked_to={}\n",
                r.partition, r.k, r.equal_at_k, r.propagation_ok, r.propagation_checked_to
            );
            for c in &r.checked {
                writeln!(text, "n={} factor={} subword={} equal={}", c.n, c.factor_classes, c.subword_classes, c.equal)
                    .unwrap();
            }
            Output::new(text, &r)
        }
        TheoremCommand::Strategy(a) => {
            let k = partition(&a.partition)?;
            let disagreements = strategy_disagreements(a.n, &k);
            let trace = match &a.perm {
                Some(text) => {
                    let p = perm(text)?;
                    let (avoider, steps) = repeated_down_jump(&p, &k, a.strategy);
                    Some(Trace { input: p, strategy: a.strategy, avoider, steps })
                }
                None => None,
            };
            let mut text = format!(
                "{} n={} independent={} disagreements={}\n",
                k,
                a.n,
                disagreements.is_empty(),
                disagreements.len()
            );
            if let Some(t) = &trace {
                writeln!(text, "{} -> {} in {} steps ({})", t.input, t.avoider, t.steps, t.strategy).unwrap();
            }
            let r = StrategyReport { relation: k.to_string(), n: a.n, independent: disagreements.is_empty(), disagreements, trace };
            Output::new(text, &r)
        }
        TheoremCommand::Lift(a) => {
            let lifted = lift_partition(&partition(&a.partition)?)?.to_string();
            Output::new(lifted.clone(), &lifted)
        }
    }
}

#[derive(Serialize)]
struct RelationInfo {
    relation: &'static str,
    formula: &'static str,
    min_n: usize,
}

pub fn list_relations() -> Result<(Output, u8)> {
    let infos: Vec<RelationInfo> =
        ROWS.iter().map(|r| RelationInfo { relation: r.key, formula: r.formula, min_n: r.min_n }).collect();
    let text: String = infos.iter().map(|i| format!("{}  n>={}  {}\n", i.relation, i.min_n, i.formula)).collect();
    let rows = infos.iter().map(|i| vec![i.relation.to_string(), i.min_n.to_string(), i.formula.to_string()]).collect();
    let out = Output::new(text, &infos)?.with_table(Table { header: vec!["relation", "min_n", "formula"], rows });
    Ok((out, 0))
}
