//! Batch driver: parse a run configuration, execute one verification
//! task, and emit a JSON report with one entry per check. Exit code 0
//! means every check passed, 1 means some check failed, 2 means the
//! configuration or a resource bound was rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::Value;

use crate::affine::{self, DeltaElement, ExtAffineElement};
use crate::coeff::{is_prime, CoeffDomain};
use crate::cosets::{enumerate_polys, CosetCtx, CosetError};
use crate::finite_hecke::instances;
use crate::finite_hecke::suite::run_instance_suite;
use crate::localfield::{monomial_matrix, Config, GroupElement, Matrix, TruncatedLaurent};
use crate::prop_hecke::{
    perm_residues, structure_constants_record, verify_relation, GeneratorTag, HeckeCtx,
};
use crate::report::{all_passed, Check};
use crate::rng::Rng;
use crate::weyl::{verify_identities, Permutation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Task {
    WeylIdentities,
    AffinePresentation { word_len: usize },
    CosetLemmas { z_samples: usize },
    Relations { which: Vec<u8> },
    StructConst { a: String, b: String },
    FiniteHecke { demo: String },
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    pub q: u64,
    /// 0 selects the rationals, otherwise a prime different from the
    /// residue characteristic.
    pub ell: u64,
    pub prec: usize,
    pub window: i64,
    pub task: Task,
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl RunConfig {
    fn defaults(task: Task) -> RunConfig {
        RunConfig {
            n: 2,
            q: 2,
            ell: 0,
            prec: 6,
            window: 2,
            task,
            out: None,
        }
    }

    pub fn domain(&self) -> CoeffDomain {
        if self.ell == 0 {
            CoeffDomain::Rational
        } else {
            CoeffDomain::PrimeField(self.ell)
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if ![2, 3, 4].contains(&self.q) {
            return Err(ConfigError(format!("q = {} not in {{2, 3, 4}}", self.q)));
        }
        let p = if self.q == 4 { 2 } else { self.q };
        if self.ell != 0 && (!is_prime(self.ell) || self.ell == p) {
            return Err(ConfigError(format!(
                "ell = {} must be 0 or a prime different from {p}",
                self.ell
            )));
        }
        let n_range = match self.task {
            Task::WeylIdentities | Task::AffinePresentation { .. } => 2..=6,
            Task::Relations { .. } | Task::StructConst { .. } => 1..=4,
            Task::CosetLemmas { .. } => 1..=3,
            Task::FiniteHecke { .. } => 1..=8,
        };
        if !n_range.contains(&self.n) {
            return Err(ConfigError(format!(
                "n = {} out of range {:?} for this task",
                self.n, n_range
            )));
        }
        if (self.prec as i64) < 2 * self.window + 2 {
            return Err(ConfigError(format!(
                "prec {} below 2*window + 2 = {}",
                self.prec,
                2 * self.window + 2
            )));
        }
        Ok(())
    }
}

/// Key-value configuration file: one `key = value` per line, keys among
/// n, q, ell, prec, valuation_window; # starts a comment.
pub fn apply_config_file(cfg: &mut RunConfig, text: &str) -> Result<(), ConfigError> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError(format!(
                "line {}: expected key = value",
                lineno + 1
            )));
        };
        let (k, v) = (k.trim(), v.trim());
        let parse = |v: &str| -> Result<i64, ConfigError> {
            v.parse()
                .map_err(|_| ConfigError(format!("line {}: bad number {v}", lineno + 1)))
        };
        match k {
            "n" => cfg.n = parse(v)? as usize,
            "q" => cfg.q = parse(v)? as u64,
            "ell" => cfg.ell = parse(v)? as u64,
            "prec" => cfg.prec = parse(v)? as usize,
            "valuation_window" | "window" => cfg.window = parse(v)?,
            other => return Err(ConfigError(format!("unknown key {other}"))),
        }
    }
    Ok(())
}

/// Command-line grammar: `<task> [task args] [--flag value]...`.
pub fn parse_args(args: &[String]) -> Result<RunConfig, ConfigError> {
    let Some(task_name) = args.first() else {
        return Err(ConfigError(
            "usage: hecke <weyl-identities|affine-presentation|coset-lemmas|relations|structconst|finite-hecke> [args] [--n N] [--q Q] [--ell L] [--prec P] [--window V] [--config FILE] [--out FILE]"
                .into(),
        ));
    };
    let mut rest: Vec<String> = Vec::new();
    let mut flags: BTreeMap<String, String> = BTreeMap::new();
    let mut i = 1;
    while i < args.len() {
        if let Some(name) = args[i].strip_prefix("--") {
            let Some(v) = args.get(i + 1) else {
                return Err(ConfigError(format!("flag --{name} needs a value")));
            };
            flags.insert(name.to_string(), v.clone());
            i += 2;
        } else {
            rest.push(args[i].clone());
            i += 1;
        }
    }
    let task = match task_name.as_str() {
        "weyl-identities" => Task::WeylIdentities,
        "affine-presentation" => Task::AffinePresentation {
            word_len: flags
                .get("word-len")
                .map(|v| v.parse().map_err(|_| ConfigError("bad --word-len".into())))
                .transpose()?
                .unwrap_or(6),
        },
        "coset-lemmas" => Task::CosetLemmas {
            z_samples: flags
                .get("z-samples")
                .map(|v| {
                    v.parse()
                        .map_err(|_| ConfigError("bad --z-samples".into()))
                })
                .transpose()?
                .unwrap_or(100),
        },
        "relations" => {
            let which = if let Some(list) = rest.first() {
                let mut v = Vec::new();
                for part in list.split(',') {
                    let r: u8 = part
                        .trim()
                        .parse()
                        .map_err(|_| ConfigError(format!("bad relation number {part}")))?;
                    if !(1..=7).contains(&r) {
                        return Err(ConfigError(format!("relation {r} out of 1..7")));
                    }
                    v.push(r);
                }
                v
            } else {
                (1..=7).collect()
            };
            Task::Relations { which }
        }
        "structconst" => {
            if rest.len() != 2 {
                return Err(ConfigError("structconst needs two operands".into()));
            }
            Task::StructConst {
                a: rest[0].clone(),
                b: rest[1].clone(),
            }
        }
        "finite-hecke" => {
            let demo = rest
                .first()
                .cloned()
                .unwrap_or_else(|| "s3-trivial".to_string());
            Task::FiniteHecke { demo }
        }
        other => return Err(ConfigError(format!("unknown task {other}"))),
    };
    let mut cfg = RunConfig::defaults(task);
    if matches!(
        cfg.task,
        Task::WeylIdentities | Task::AffinePresentation { .. }
    ) {
        cfg.n = 6;
    }
    if let Some(path) = flags.get("config") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {path}: {e}")))?;
        apply_config_file(&mut cfg, &text)?;
    }
    let parse_num = |key: &str, v: &String| -> Result<i64, ConfigError> {
        v.parse()
            .map_err(|_| ConfigError(format!("bad --{key} {v}")))
    };
    for (k, v) in &flags {
        match k.as_str() {
            "n" => cfg.n = parse_num(k, v)? as usize,
            "q" => cfg.q = parse_num(k, v)? as u64,
            "ell" => cfg.ell = parse_num(k, v)? as u64,
            "prec" => cfg.prec = parse_num(k, v)? as usize,
            "window" => cfg.window = parse_num(k, v)?,
            "out" => cfg.out = Some(PathBuf::from(v)),
            "config" | "word-len" | "z-samples" => {}
            other => return Err(ConfigError(format!("unknown flag --{other}"))),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Serialize)]
pub struct Report {
    pub task: String,
    pub params: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub artifact: Option<Value>,
}

fn cli_error(e: impl fmt::Display) -> ConfigError {
    ConfigError(e.to_string())
}

/// Parses a basis operand: `id`, `tau<i>`, `tau0inv`, `s<i>`,
/// `k:<residues csv>` (row-major), or `mono:<t-exponents csv>`.
fn parse_operand(cfg: &Config, text: &str) -> Result<GroupElement, ConfigError> {
    let n = cfg.n;
    if text == "id" {
        return Ok(GroupElement::identity(n));
    }
    if text == "tau0inv" {
        return Ok(GeneratorTag::TauZeroInverse.group_element(cfg));
    }
    if let Some(i) = text.strip_prefix("tau") {
        let i: usize = i
            .parse()
            .map_err(|_| ConfigError(format!("bad tau index in {text}")))?;
        if i >= n {
            return Err(ConfigError(format!("tau{i} needs i < n = {n}")));
        }
        return Ok(GeneratorTag::Tau(i).group_element(cfg));
    }
    if let Some(i) = text.strip_prefix('s') {
        if let Ok(i) = i.parse::<usize>() {
            if i == 0 || i >= n {
                return Err(ConfigError(format!("s{i} needs 1 <= i < n = {n}")));
            }
            let w = Permutation::simple(n, i);
            return Ok(GeneratorTag::KElement(perm_residues(&w)).group_element(cfg));
        }
    }
    if let Some(csv) = text.strip_prefix("k:") {
        let vals: Result<Vec<u8>, _> = csv.split(',').map(|v| v.trim().parse::<u8>()).collect();
        let vals = vals.map_err(|_| ConfigError(format!("bad residues in {text}")))?;
        if vals.len() != n * n || vals.iter().any(|&v| v as u64 >= cfg.q()) {
            return Err(ConfigError(format!(
                "k: wants {} residues below {}",
                n * n,
                cfg.q()
            )));
        }
        if crate::localfield::fq_det(&cfg.fq, n, &vals) == 0 {
            return Err(ConfigError("k: residue matrix is singular".into()));
        }
        return Ok(GeneratorTag::KElement(vals).group_element(cfg));
    }
    if let Some(csv) = text.strip_prefix("mono:") {
        let vals: Result<Vec<i64>, _> = csv.split(',').map(|v| v.trim().parse::<i64>()).collect();
        let vals = vals.map_err(|_| ConfigError(format!("bad exponents in {text}")))?;
        if vals.len() != n {
            return Err(ConfigError(format!("mono: wants {n} exponents")));
        }
        return Ok(monomial_matrix(cfg, &ExtAffineElement::from_exps(vals)));
    }
    Err(ConfigError(format!("cannot parse operand {text}")))
}

pub fn run(rc: &RunConfig) -> Result<Report, ConfigError> {
    rc.validate()?;
    let mut params: BTreeMap<String, Value> = BTreeMap::new();
    params.insert("n".into(), rc.n.into());
    params.insert("q".into(), rc.q.into());
    params.insert("ell".into(), rc.ell.into());
    params.insert("prec".into(), rc.prec.into());
    params.insert("window".into(), rc.window.into());
    let mut artifact = None;
    let (task_name, checks): (String, Vec<Check>) = match &rc.task {
        Task::WeylIdentities => {
            let mut checks = verify_identities(rc.n, rc.n <= 5);
            checks.push(affine::verify_conjugation_identity(rc.n));
            ("weyl-identities".into(), checks)
        }
        Task::AffinePresentation { word_len } => {
            // cap the word universe so the rewriting closure stays small
            let mut len = *word_len;
            let words = |l: usize| -> u128 {
                let a = rc.n as u128;
                (0..=(l as u32 + 2)).map(|k| a.pow(k)).sum()
            };
            while len > 2 && words(len) > 400_000 {
                len -= 1;
            }
            params.insert("word_len".into(), len.into());
            let rep = affine::verify_presentation(rc.n, len);
            ("affine-presentation".into(), rep.checks)
        }
        Task::CosetLemmas { z_samples } => {
            params.insert("z_samples".into(), (*z_samples).into());
            let cfg = Config::new(rc.n, rc.q, rc.prec, rc.window).map_err(cli_error)?;
            let ctx = CosetCtx::new(&cfg);
            let mut checks = Vec::new();
            checks.extend(coset_tau_products(&ctx).map_err(cli_error)?);
            checks.push(coset_absorption(&ctx).map_err(cli_error)?);
            checks.extend(coset_monomial(&ctx, *z_samples).map_err(cli_error)?);
            ("coset-lemmas".into(), checks)
        }
        Task::Relations { which } => {
            let cfg = Config::new(rc.n, rc.q, rc.prec, rc.window).map_err(cli_error)?;
            let ctx = HeckeCtx::new(&cfg, rc.domain()).map_err(cli_error)?;
            let mut checks = Vec::new();
            for &r in which {
                let mut batch = verify_relation(&ctx, r).map_err(cli_error)?;
                for c in &mut batch {
                    c.name = format!("relation{r}_{}", c.name);
                }
                checks.extend(batch);
            }
            ("relations".into(), checks)
        }
        Task::StructConst { a, b } => {
            let cfg = Config::new(rc.n, rc.q, rc.prec, rc.window).map_err(cli_error)?;
            let ctx = HeckeCtx::new(&cfg, rc.domain()).map_err(cli_error)?;
            let ga = parse_operand(&cfg, a)?;
            let gb = parse_operand(&cfg, b)?;
            let ida = ctx.cosets.canonical(&ga).map_err(cli_error)?;
            let idb = ctx.cosets.canonical(&gb).map_err(cli_error)?;
            let record = structure_constants_record(&ctx, &ida, &idb).map_err(cli_error)?;
            let nterms = record.terms.len();
            artifact = Some(serde_json::to_value(&record).map_err(cli_error)?);
            (
                "structconst".into(),
                vec![Check::pass(
                    "structure_constants",
                    format!("{nterms} terms for {a} * {b}"),
                )],
            )
        }
        Task::FiniteHecke { demo } => {
            let domain = rc.domain();
            let inst = match demo.as_str() {
                "s3-trivial" => instances::s3_instance(domain, false),
                "s3-sign" => instances::s3_instance(domain, true),
                "gl2f2" => instances::gl2f2_instance(domain),
                other => return Err(ConfigError(format!("unknown demo {other}"))),
            }
            .map_err(cli_error)?;
            params.insert("demo".into(), demo.clone().into());
            let checks = run_instance_suite(&inst).map_err(cli_error)?;
            ("finite-hecke".into(), checks)
        }
    };
    Ok(Report {
        task: task_name,
        params,
        checks,
        artifact,
    })
}

/// Exhaustive generator-pair product check within the window.
fn coset_tau_products(ctx: &CosetCtx) -> Result<Vec<Check>, CosetError> {
    let n = ctx.cfg.n;
    let v = ctx.cfg.window;
    // all dominant exponent vectors bounded by the window
    let mut monoid: Vec<DeltaElement> = Vec::new();
    let mut stack = vec![vec![]];
    while let Some(cur) = stack.pop() {
        if cur.len() == n - 1 {
            monoid.push(DeltaElement::monoid(cur).unwrap());
            continue;
        }
        let lo = *cur.last().unwrap_or(&0);
        for a in lo..=v {
            let mut next = cur.clone();
            next.push(a);
            stack.push(next);
        }
    }
    let mut pairs = 0;
    let mut failures = Vec::new();
    for a in &monoid {
        for b in &monoid {
            let prod = a.mul(b);
            if prod.valuations().iter().any(|&x| x.abs() > v) {
                continue;
            }
            pairs += 1;
            if !ctx.verify_tau_products(a, b)? {
                failures.push(format!("{a:?} * {b:?}"));
            }
        }
    }
    Ok(vec![Check::of(
        "tau_double_coset_products",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{pairs} dominant pairs inside window {v}")
        } else {
            format!("failures: {failures:?}")
        },
    )])
}

fn coset_absorption(ctx: &CosetCtx) -> Result<Check, CosetError> {
    let n = ctx.cfg.n;
    let (pair_depth, validated) = if n <= 2 { (3, 64) } else { (2, 12) };
    let out = ctx.verify_absorption(pair_depth, validated)?;
    Ok(Check::of(
        "unipotent_absorption",
        out.consistent(),
        format!(
            "{} samples, {} in K1, {} excluded, {} enumeration-validated, {} counterexamples",
            out.samples,
            out.in_k1,
            out.excluded_by_valuation,
            out.enumeration_validated,
            out.counterexamples
        ),
    ))
}

fn coset_monomial(ctx: &CosetCtx, z_samples: usize) -> Result<Vec<Check>, CosetError> {
    let cfg = ctx.cfg;
    let n = cfg.n;
    let q = cfg.q();
    let mut checks = Vec::new();
    let taus: Vec<DeltaElement> = (1..n).map(|i| DeltaElement::tau(n, i)).collect();
    if taus.is_empty() {
        checks.push(Check::pass("monomial_intersection", "rank 1: nothing to scan"));
        return Ok(checks);
    }
    let z_matrix = |entries: &[TruncatedLaurent]| -> GroupElement {
        let mut m = Matrix::identity(n);
        let mut k = 0;
        for r in 0..n {
            for c in (r + 1)..n {
                m.set(r, c, entries[k].clone());
                k += 1;
            }
        }
        GroupElement::with_det_val(m, 0)
    };
    if n <= 2 {
        // exhaustive z with short polynomial entries
        let polys = enumerate_polys(q, 0, 3);
        let mut all_ok = true;
        let mut tau_at_one = true;
        let mut count = 0;
        for tau in &taus {
            for e in &polys {
                let z = z_matrix(&[e.clone()]);
                let out = ctx.verify_monomial_intersection(tau, &z, 3)?;
                count += 1;
                all_ok &= out.only_tau_class();
                if e.is_exactly_zero() {
                    tau_at_one &= out.contains_tau;
                }
            }
        }
        checks.push(Check::of(
            "monomial_intersection_exhaustive",
            all_ok && tau_at_one,
            format!("{count} (tau, z) pairs, depth 3"),
        ));
    } else {
        let mut rng = Rng::new(0x2e7a);
        let mut all_ok = true;
        let mut count = 0;
        let cells = n * (n - 1) / 2;
        while count < z_samples {
            for tau in &taus {
                if count >= z_samples {
                    break;
                }
                let entries: Vec<TruncatedLaurent> = (0..cells)
                    .map(|_| {
                        let coeffs: Vec<u8> = (0..3).map(|_| rng.below(q) as u8).collect();
                        TruncatedLaurent::poly(0, coeffs)
                    })
                    .collect();
                let z = z_matrix(&entries);
                let out = ctx.verify_monomial_intersection(tau, &z, 2)?;
                all_ok &= out.only_tau_class();
                count += 1;
            }
        }
        // the identity z must recover tau itself
        let id_entries = vec![TruncatedLaurent::zero(); cells];
        let base = ctx.verify_monomial_intersection(&taus[0], &z_matrix(&id_entries), 2)?;
        checks.push(Check::of(
            "monomial_intersection_randomized",
            all_ok && base.contains_tau,
            format!("{count} random z samples, depth 2"),
        ));
    }
    Ok(checks)
}

pub fn report_to_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("serializable report")
}

/// Serializes the report (fixed field order) and returns the process
/// exit code.
pub fn execute(rc: &RunConfig) -> (String, i32) {
    match run(rc) {
        Ok(report) => {
            let code = if all_passed(&report.checks) { 0 } else { 1 };
            (report_to_json(&report), code)
        }
        Err(e) => {
            let err = serde_json::json!({ "error": e.to_string() });
            (serde_json::to_string_pretty(&err).unwrap(), 2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_relations_task() {
        let rc = parse_args(&args(&[
            "relations", "1,7", "--n", "2", "--q", "3", "--ell", "2",
        ]))
        .unwrap();
        assert_eq!(rc.task, Task::Relations { which: vec![1, 7] });
        assert_eq!((rc.n, rc.q, rc.ell), (2, 3, 2));
    }

    #[test]
    fn reject_bad_ell() {
        assert!(parse_args(&args(&["relations", "--q", "2", "--ell", "2"])).is_err());
        assert!(parse_args(&args(&["relations", "--q", "4", "--ell", "2"])).is_err());
        assert!(parse_args(&args(&["relations", "--q", "4", "--ell", "3"])).is_ok());
    }

    #[test]
    fn config_file_round_trip() {
        let mut rc = RunConfig::defaults(Task::WeylIdentities);
        apply_config_file(
            &mut rc,
            "n = 3\nq = 2 # residue field\nell = 3\nprec = 8\nvaluation_window = 2\n",
        )
        .unwrap();
        assert_eq!((rc.n, rc.q, rc.ell, rc.prec, rc.window), (3, 2, 3, 8, 2));
    }

    #[test]
    fn structconst_identity_echoes() {
        let rc = RunConfig {
            n: 2,
            q: 2,
            ell: 0,
            prec: 6,
            window: 2,
            task: Task::StructConst {
                a: "id".into(),
                b: "tau1".into(),
            },
            out: None,
        };
        let report = run(&rc).unwrap();
        let artifact = report.artifact.unwrap();
        let terms = artifact["terms"].as_array().unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0]["value"], "1");
        assert_eq!(terms[0]["coset"]["cartan"], serde_json::json!([0, 1]));
    }

    #[test]
    fn weyl_task_runs_small() {
        let rc = RunConfig {
            n: 3,
            q: 2,
            ell: 0,
            prec: 6,
            window: 2,
            task: Task::WeylIdentities,
            out: None,
        };
        let report = run(&rc).unwrap();
        assert!(all_passed(&report.checks));
    }
}
