//! Job configuration, command dispatch, and canonical report envelopes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::checkers::{self, Caps, Criterion, CriterionOptions, Verdict};
use crate::cohomology;
use crate::error::{Error, Result};
use crate::oracle::{self, DEFAULT_ORACLE_CAP};
use crate::root_datum::{CartanType, Family, Preset, RootDatum};
use crate::weights::{self, ModPCharacter, UnderlineWeight};

pub const SCHEMA_VERSION: u32 = 1;
pub const THREADS_ENV: &str = "SATAKE_LAB_THREADS";
pub const MAX_RANK: usize = 8;
pub const MAX_LATTICE_RANK: usize = 16;
/// Bound on weight and root coordinates read from a config.
pub const MAX_ENTRY: i64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Check,
    Kostant,
    GroupCohomology,
    LeftAdjoint,
    Satake,
    Pseries,
    Parameters,
    OracleVerify,
    ReportAll,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Check,
        Command::Kostant,
        Command::GroupCohomology,
        Command::LeftAdjoint,
        Command::Satake,
        Command::Pseries,
        Command::Parameters,
        Command::OracleVerify,
        Command::ReportAll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Kostant => "kostant",
            Command::GroupCohomology => "group-cohomology",
            Command::LeftAdjoint => "left-adjoint",
            Command::Satake => "satake",
            Command::Pseries => "pseries",
            Command::Parameters => "parameters",
            Command::OracleVerify => "oracle-verify",
            Command::ReportAll => "report-all",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown command {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weyl: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub underline: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<u64>,
    /// Largest `dim N_0` the Chevalley–Eilenberg oracle accepts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<usize>,
}

impl CapsConfig {
    pub fn resolve(&self) -> Caps {
        let d = Caps::default();
        Caps {
            weyl: self.weyl.unwrap_or(d.weyl),
            underline: self.underline.unwrap_or(d.underline),
            dim: self.dim.map_or(d.dim, u128::from),
        }
    }

    pub fn oracle_cap(&self) -> usize {
        self.oracle.unwrap_or(DEFAULT_ORACLE_CAP)
    }
}

/// A single job, read from one JSON document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub family: Family,
    pub rank: usize,
    pub preset: Preset,
    pub p: u64,
    pub f: usize,
    /// 1-based simple-root indices of the Levi.
    #[serde(rename = "J", default)]
    pub j: Vec<usize>,
    /// One integer vector per embedding; all zero when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<CapsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_format: Option<OutputFormat>,
    /// Exponents of the principal-series character on `T`, trivial when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi0: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simple_roots: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simple_coroots: Option<Vec<Vec<i64>>>,
    /// Restricts `parameters` to these subsets (1-based).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter_subsets: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mt_refined: Option<bool>,
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// Parses a config, reporting the line and column of malformed input.
pub fn parse_config(text: &str) -> Result<JobConfig> {
    serde_json::from_str(text)
        .map_err(|e| Error::Config(format!("line {}, column {}: {e}", e.line(), e.column())))
}

/// A validated job ready to run.
#[derive(Debug, Clone)]
pub struct Job {
    pub config: JobConfig,
    pub command: Command,
    pub datum: RootDatum,
    /// 0-based.
    pub j: Vec<usize>,
    pub lambda: UnderlineWeight,
    pub caps: Caps,
}

impl JobConfig {
    pub fn validate(&self) -> Result<Job> {
        let command = self
            .command
            .ok_or_else(|| Error::Config("field `command`: missing".into()))?;
        if !is_prime(self.p) {
            return Err(Error::Config(format!("field `p`: {} is not prime", self.p)));
        }
        if self.f == 0 {
            return Err(Error::Config("field `f`: must be at least 1".into()));
        }
        weights::residue_modulus(self.p, self.f)
            .map_err(|e| Error::Config(format!("fields `p`, `f`: {e}")))?;
        if self.rank > MAX_RANK {
            return Err(Error::Config(format!(
                "field `rank`: {} exceeds the supported maximum {MAX_RANK}",
                self.rank
            )));
        }
        for (field, rows) in [
            ("lambda", &self.lambda),
            ("simple_roots", &self.simple_roots),
            ("simple_coroots", &self.simple_coroots),
        ] {
            if rows.iter().flatten().flatten().any(|x| x.abs() > MAX_ENTRY) {
                return Err(Error::Config(format!(
                    "field `{field}`: entries must lie in -{MAX_ENTRY}..={MAX_ENTRY}"
                )));
            }
        }
        if let Some(v) = self
            .simple_roots
            .iter()
            .chain(&self.simple_coroots)
            .flatten()
            .find(|v| v.len() > MAX_LATTICE_RANK)
        {
            return Err(Error::Config(format!(
                "raw vectors of length {} exceed the lattice rank limit {MAX_LATTICE_RANK}",
                v.len()
            )));
        }
        let ty = CartanType::new(self.family, self.rank)
            .map_err(|e| Error::Config(format!("fields `family`, `rank`: {e}")))?;
        let datum = match self.preset {
            Preset::Raw => {
                let (Some(r), Some(c)) = (&self.simple_roots, &self.simple_coroots) else {
                    return Err(Error::Config(
                        "preset Raw needs `simple_roots` and `simple_coroots`".into(),
                    ));
                };
                RootDatum::from_raw(ty, r.clone(), c.clone())
            }
            preset => {
                if self.simple_roots.is_some() || self.simple_coroots.is_some() {
                    return Err(Error::Config(
                        "`simple_roots`/`simple_coroots` are only read with preset Raw".into(),
                    ));
                }
                RootDatum::build(ty, preset)
            }
        }
        .map_err(|e| Error::Config(format!("field `preset`: {e}")))?;
        let n = datum.rank();
        let j = one_based_to_zero("J", &self.j, n)?;
        let d = datum.lattice_rank;
        let lambda = match &self.lambda {
            None => UnderlineWeight::zero(d, self.f),
            Some(l) => {
                if l.len() != self.f {
                    return Err(Error::Config(format!(
                        "field `lambda`: expected {} vectors (one per embedding), got {}",
                        self.f,
                        l.len()
                    )));
                }
                if let Some((k, v)) = l.iter().enumerate().find(|(_, v)| v.len() != d) {
                    return Err(Error::Config(format!(
                        "field `lambda[{k}]`: expected length {d}, got {}",
                        v.len()
                    )));
                }
                UnderlineWeight::new(l.clone())
            }
        };
        if let Some(chi) = &self.chi0 {
            if chi.len() != d {
                return Err(Error::Config(format!(
                    "field `chi0`: expected {d} exponents, got {}",
                    chi.len()
                )));
            }
        }
        if let Some(subsets) = &self.parameter_subsets {
            for (k, s) in subsets.iter().enumerate() {
                one_based_to_zero(&format!("parameter_subsets[{k}]"), s, n)?;
            }
        }
        Ok(Job {
            command,
            datum,
            j,
            lambda,
            caps: self.caps.clone().unwrap_or_default().resolve(),
            config: self.clone(),
        })
    }
}

fn one_based_to_zero(field: &str, idx: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(idx.len());
    for &i in idx {
        if i == 0 || i > n {
            return Err(Error::Config(format!(
                "field `{field}`: index {i} outside 1..={n}"
            )));
        }
        if !out.contains(&(i - 1)) {
            out.push(i - 1);
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEnvelope {
    pub schema_version: u32,
    pub command: Command,
    pub config: JobConfig,
    pub datum: Value,
    pub results: Value,
    pub verdicts: BTreeMap<String, Verdict>,
    /// SHA-256 of the canonical envelope without timings.
    pub digest: String,
    /// Wall-clock milliseconds per stage; not part of the digest.
    pub timings: BTreeMap<String, f64>,
}

impl ReportEnvelope {
    /// 0 if every recorded verdict passed or did not apply, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.verdicts.values().any(|v| *v == Verdict::Fail) {
            2
        } else {
            0
        }
    }

    fn canonical_value(&self) -> Value {
        json!({
            "schema_version": self.schema_version,
            "command": self.command,
            "config": self.config,
            "datum": self.datum,
            "results": self.results,
            "verdicts": self.verdicts,
        })
    }

    /// Serialization with sorted keys and without timings.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut v = self.canonical_value();
        v["digest"] = Value::String(self.digest.clone());
        serde_json::to_vec(&v).expect("JSON values serialize")
    }

    /// Full JSON document with sorted keys.
    pub fn to_json(&self, pretty: bool) -> String {
        let v = serde_json::to_value(self).expect("envelope serializes");
        if pretty {
            serde_json::to_string_pretty(&v)
        } else {
            serde_json::to_string(&v)
        }
        .expect("JSON values serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let ty = format!("{}{}", self.config.family, self.config.rank);
        out.push_str(&format!(
            "satake-lab {} (schema {})\n",
            self.command, self.schema_version
        ));
        out.push_str(&format!(
            "type {ty} {:?}, p = {}, f = {}, J = {:?}\n",
            self.config.preset, self.config.p, self.config.f, self.config.j
        ));
        for (k, v) in &self.verdicts {
            out.push_str(&format!("{k}: {v:?}\n"));
        }
        out.push_str(&format!("digest {}\n\n", self.digest));
        out.push_str(&serde_json::to_string_pretty(&self.results).expect("JSON values serialize"));
        out.push('\n');
        out
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

struct Outcome {
    results: Value,
    verdicts: BTreeMap<String, Verdict>,
}

impl Outcome {
    fn new(results: Value) -> Self {
        Outcome {
            results,
            verdicts: BTreeMap::new(),
        }
    }

    fn verdict(mut self, k: &str, v: Verdict) -> Self {
        self.verdicts.insert(k.to_string(), v);
        self
    }
}

fn verdict_of(pass: bool) -> Verdict {
    if pass {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Converts assumption failures into a failed verdict and passes other errors on.
fn assumption_guard(r: Result<Outcome>) -> Result<Outcome> {
    match r {
        Err(Error::AssumptionViolated(msg)) => {
            Ok(Outcome::new(json!({ "assumption_violated": msg }))
                .verdict("assumptions", Verdict::Fail))
        }
        Err(Error::OrthogonalityFails(report)) => {
            Ok(Outcome::new(json!({ "orthogonality": to_value(&*report) }))
                .verdict("orthogonality", Verdict::Fail))
        }
        other => other,
    }
}

fn run_check(job: &Job) -> Result<Outcome> {
    let Job {
        datum,
        j,
        lambda,
        caps,
        config,
        ..
    } = job;
    let (p, f) = (config.p, config.f);
    let bound = checkers::check_p_bound(datum, p);
    let small = weights::is_p_small(datum, lambda, p)?;
    let mut results = serde_json::Map::new();
    results.insert("p_bound".into(), to_value(&bound));
    results.insert("p_small".into(), to_value(&small.small));
    let mut out_verdicts = BTreeMap::new();
    out_verdicts.insert("p_bound".to_string(), bound.verdict);
    out_verdicts.insert("p_small".to_string(), verdict_of(small.small));

    if small.small {
        let ortho = checkers::check_orthogonality_direct(datum, j, lambda, p, f, caps)?;
        out_verdicts.insert("orthogonality".to_string(), ortho.verdict);
        results.insert("orthogonality".into(), to_value(&ortho));
        let opts = CriterionOptions {
            refined_mt: config.mt_refined.unwrap_or(false),
        };
        let mut crit = serde_json::Map::new();
        for c in Criterion::ALL {
            let v =
                match checkers::check_sufficient_criterion(datum, j, lambda, p, f, c, opts, caps) {
                    Ok(r) => to_value(&r),
                    Err(Error::WrongMode(msg)) => {
                        json!({ "verdict": Verdict::NotApplicable, "notes": [msg] })
                    }
                    Err(e) => return Err(e),
                };
            crit.insert(c.name().to_string(), v);
        }
        results.insert("criteria".into(), Value::Object(crit));
    }
    results.insert("xi".into(), to_value(&crate::levi::xi_and_hm(datum, j)?));
    if bound.passed() {
        results.insert(
            "valuations".into(),
            to_value(&checkers::p_valuation_table(datum, j, p)?),
        );
    }
    Ok(Outcome {
        results: Value::Object(results),
        verdicts: out_verdicts,
    })
}

fn chi0_of(job: &Job) -> Result<ModPCharacter> {
    let (p, f) = (job.config.p, job.config.f);
    match &job.config.chi0 {
        None => cohomology::trivial_character(&job.datum, p, f),
        Some(e) => {
            let modulus = weights::residue_modulus(p, f)?;
            Ok(ModPCharacter {
                modulus,
                basis_tag: "T".into(),
                exponents: e.iter().map(|x| x % modulus).collect(),
            })
        }
    }
}

fn run_single(job: &Job, command: Command) -> Result<Outcome> {
    let Job {
        datum,
        j,
        lambda,
        caps,
        config,
        ..
    } = job;
    let (p, f) = (config.p, config.f);
    let outcome = match command {
        Command::Check => run_check(job),
        Command::Kostant => cohomology::kostant_report(datum, j, lambda, p, f, caps)
            .map(|r| Outcome::new(to_value(&r)).verdict("assumptions", Verdict::Pass)),
        Command::GroupCohomology => {
            cohomology::group_cohomology_report(datum, j, lambda, p, f, caps)
                .map(|r| Outcome::new(to_value(&r)).verdict("assumptions", Verdict::Pass))
        }
        Command::LeftAdjoint => cohomology::left_adjoint_report(datum, j, lambda, p, f, caps)
            .map(|r| Outcome::new(to_value(&r)).verdict("assumptions", Verdict::Pass)),
        Command::Satake => {
            cohomology::satake_target_report(datum, j, lambda, p, f, caps).map(|r| {
                Outcome::new(to_value(&r))
                    .verdict("assumptions", Verdict::Pass)
                    .verdict("orthogonality", r.orthogonality.verdict)
            })
        }
        Command::Pseries => {
            let chi0 = chi0_of(job)?;
            cohomology::principal_series_report(datum, &chi0, p, f, caps)
                .map(|r| Outcome::new(to_value(&r)).verdict("assumptions", Verdict::Pass))
        }
        Command::Parameters => {
            let subsets = config.parameter_subsets.as_ref().map(|s| {
                s.iter()
                    .map(|x| x.iter().map(|i| i - 1).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            });
            let small = weights::is_p_small(datum, lambda, p)?;
            if !small.small {
                Err(Error::AssumptionViolated("lambda is not p-small".into()))
            } else {
                cohomology::parameter_support(datum, lambda, p, f, caps, subsets.as_deref())
                    .map(|r| Outcome::new(to_value(&r)).verdict("assumptions", Verdict::Pass))
            }
        }
        Command::OracleVerify => run_oracle(job),
        Command::ReportAll => unreachable!("report-all is expanded by the caller"),
    };
    assumption_guard(outcome)
}

fn run_oracle(job: &Job) -> Result<Outcome> {
    let Job {
        datum,
        j,
        caps,
        config,
        ..
    } = job;
    let (p, f) = (config.p, config.f);
    let bound = checkers::check_p_bound(datum, p);
    if !bound.passed() {
        return Err(Error::AssumptionViolated(format!(
            "p = {p} does not exceed h + 1 = {}",
            datum.coxeter_number_max() + 1
        )));
    }
    let cap = config.caps.clone().unwrap_or_default().oracle_cap();
    let cmp = oracle::compare_with_kostant(datum, j, p, f, caps, cap)?;
    let mut results = json!({
        "coefficients": "trivial",
        "comparison": to_value(&cmp),
    });
    if !job.lambda.is_zero() {
        results["notes"] = json!(["the oracle compares trivial coefficients; lambda is not used"]);
    }
    Ok(Outcome::new(results).verdict("oracle_agreement", verdict_of(cmp.agree)))
}

/// Runs a job on the current rayon pool.
pub fn run(job: &Job) -> Result<ReportEnvelope> {
    let mut timings = BTreeMap::new();
    let commands: Vec<Command> = if job.command == Command::ReportAll {
        Command::ALL
            .into_iter()
            .filter(|&c| c != Command::ReportAll)
            .collect()
    } else {
        vec![job.command]
    };
    let mut verdicts = BTreeMap::new();
    let results = if job.command == Command::ReportAll {
        let mut all = serde_json::Map::new();
        for c in commands {
            let start = Instant::now();
            let value = match run_single(job, c) {
                Ok(o) => {
                    for (k, v) in o.verdicts {
                        verdicts.insert(format!("{c}.{k}"), v);
                    }
                    o.results
                }
                // Each section reports its own error so that the rest still run.
                Err(e) => json!({ "error": e.to_string() }),
            };
            timings.insert(c.name().to_string(), start.elapsed().as_secs_f64() * 1e3);
            all.insert(c.name().to_string(), value);
        }
        Value::Object(all)
    } else {
        let start = Instant::now();
        let o = run_single(job, job.command)?;
        timings.insert(
            job.command.name().to_string(),
            start.elapsed().as_secs_f64() * 1e3,
        );
        verdicts = o.verdicts;
        o.results
    };
    let mut config = job.config.clone();
    config.command = Some(job.command);
    let mut env = ReportEnvelope {
        schema_version: SCHEMA_VERSION,
        command: job.command,
        config,
        datum: datum_summary(&job.datum),
        results,
        verdicts,
        digest: String::new(),
        timings,
    };
    let bytes = serde_json::to_vec(&env.canonical_value()).expect("JSON values serialize");
    env.digest = hex::encode(Sha256::digest(&bytes));
    Ok(env)
}

fn datum_summary(d: &RootDatum) -> Value {
    json!({
        "cartan_type": d.cartan_type.to_string(),
        "preset": d.preset,
        "lattice_rank": d.lattice_rank,
        "simple_roots": d.simple_roots,
        "simple_coroots": d.simple_coroots,
        "cartan_matrix": d.cartan_matrix(),
        "positive_roots": d.roots().iter().map(|r| &r.vector).collect::<Vec<_>>(),
        "two_rho": d.two_rho(),
        "coxeter_numbers": d.positive_roots().coxeter_numbers,
    })
}

/// Thread count from `SATAKE_LAB_THREADS`; 0 or unset means automatic.
pub fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(s) => s.trim().parse().map_err(|_| {
            Error::Config(format!(
                "{THREADS_ENV}: expected a non-negative integer, got {s:?}"
            ))
        }),
    }
}

/// Runs `job` on a dedicated pool of `threads` workers (0 = automatic).
pub fn run_with_threads(job: &Job, threads: usize) -> Result<ReportEnvelope> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| run(job))
}
