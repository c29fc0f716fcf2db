//! Batch front end: configurations in, deterministic reports out.

mod config;
mod render;

pub use config::{
    emit_config, parse_config, FaultConfig, FaultKind, LimitsConfig, MonadConfig, OpConfig, OtherConfig, RunConfig,
    CONFIG_VERSION,
};
pub use render::{emit_report, Format};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::{correctness_check, kernel_partition, modularity_profile, stability_check, CorrectnessReport};
use crate::analysis::{ModularityProfile, StabilityReport};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::fixtures::{merge_elements, remove_element, CorruptedBind};
use crate::monad::check_monad_laws;
use crate::presets::{preset_info, PRESETS};
use crate::report::{all_passed, CheckResult, Status};
use crate::signature::{check_lemma2_stabilization, verify_theorem1, CheckOptions, FactoredMonad, Lemma2Report};

/// Version of the machine report layout.
pub const REPORT_SCHEMA: u32 = 1;

/// Members listed per block in partition sections.
pub const BLOCK_SAMPLE: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subcommand {
    Factor,
    Laws,
    Theory,
    Stability,
    Modularity,
    Presets,
}

impl Subcommand {
    pub const ALL: [Subcommand; 6] = [
        Subcommand::Factor,
        Subcommand::Laws,
        Subcommand::Theory,
        Subcommand::Stability,
        Subcommand::Modularity,
        Subcommand::Presets,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Subcommand::Factor => "factor",
            Subcommand::Laws => "laws",
            Subcommand::Theory => "theory",
            Subcommand::Stability => "stability",
            Subcommand::Modularity => "modularity",
            Subcommand::Presets => "presets",
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Subcommand::ALL.into_iter().find(|c| c.id() == s).ok_or_else(|| Error::Unknown {
            kind: "subcommand",
            name: s.to_string(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalityRow {
    pub x: usize,
    /// `|T X|`
    pub carrier: usize,
    /// `|R X|`
    pub size: usize,
    pub layer_trace: Vec<usize>,
    pub n_bijective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRow {
    pub value: String,
    pub size: usize,
    /// The first [`BLOCK_SAMPLE`] members in enumeration order.
    pub members: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSection {
    pub x: usize,
    pub depth: usize,
    pub terms: usize,
    pub blocks: Vec<BlockRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresetRow {
    pub name: String,
    pub monad: String,
    pub ops: Vec<String>,
    pub formula: String,
    pub description: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sections {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cardinalities: Vec<CardinalityRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stabilization: Vec<Lemma2Report>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub partitions: Vec<PartitionSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub correctness: Vec<CorrectnessReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability: Option<StabilityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modularity: Option<ModularityProfile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub presets: Vec<PresetRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub tool_version: String,
    pub subcommand: Subcommand,
    pub seed: u64,
    pub passed: bool,
    /// Wall-clock milliseconds; only set on request since it breaks
    /// byte-identical output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
    pub checks: Vec<CheckResult>,
    pub sections: Sections,
}

impl RunReport {
    fn new(sub: Subcommand, config: Option<&RunConfig>) -> Self {
        RunReport {
            schema: REPORT_SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: sub,
            seed: config.map_or(0, |c| c.seed),
            passed: true,
            timing_ms: None,
            config: config.cloned(),
            checks: Vec::new(),
            sections: Sections::default(),
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Process exit status for an error that prevented a report.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InstanceTooLarge { .. } => 3,
        _ => 2,
    }
}

fn flag(name: &str, objects: &[usize], ok: bool, detail: impl FnOnce() -> String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        objects: objects.to_vec(),
        status: if ok { Status::Pass } else { Status::Fail },
        cases: 1,
        space: "1".to_string(),
        exhaustive: true,
        detail: if ok { None } else { Some(detail()) },
    }
}

fn apply_fault(f: &mut FactoredMonad, config: &RunConfig) -> Result<()> {
    let Some(fault) = config.fault else { return Ok(()) };
    let x = fault.object;
    let bad = |what: &str| Error::Config(format!("fault: {what} needs a larger R({x})"));
    match fault.kind {
        FaultKind::CorruptBind => Ok(()),
        FaultKind::MergeN => {
            f.prepare(x)?;
            if f.entry(x)?.len() < 2 {
                return Err(bad("merge-n"));
            }
            merge_elements(f, x, 0, 1)
        }
        FaultKind::RemoveElement => {
            f.prepare(x)?;
            let len = f.entry(x)?.len();
            if len == 0 {
                return Err(bad("remove-element"));
            }
            remove_element(f, x, len - 1).map(|_| ())
        }
    }
}

fn factored(config: &RunConfig) -> Result<FactoredMonad> {
    let mut f = FactoredMonad::new(config.interpretation()?, config.limits());
    for &x in &config.objects {
        f.prepare(x)?;
    }
    apply_fault(&mut f, config)?;
    Ok(f)
}

fn run_factor(config: &RunConfig, report: &mut RunReport) -> Result<()> {
    let mut f = factored(config)?;
    let mut objects = config.objects.clone();
    objects.sort_unstable();
    objects.dedup();
    for &x in &objects {
        let entry = f.entry(x)?;
        report.sections.cardinalities.push(CardinalityRow {
            x,
            carrier: entry.carrier_size(),
            size: entry.len(),
            layer_trace: entry.layer_trace().to_vec(),
            n_bijective: entry.n().is_bijective(),
        });
        let lemma = check_lemma2_stabilization(&f, x)?;
        report.checks.push(flag("stabilization", &[x], lemma.passed(), || {
            lemma.detail.clone().unwrap_or_else(|| format!("layer trace {:?}", lemma.layer_trace))
        }));
        report.sections.stabilization.push(lemma);
    }
    let opts = CheckOptions {
        budget: config.budget,
        seed: config.seed,
        term_depth: config.depth.min(CheckOptions::default().term_depth),
    };
    let small = config.theorem_objects();
    for &x in &small {
        for &y in &small {
            for &z in &small {
                let t = verify_theorem1(&mut f, x, y, z, &opts)?;
                report.checks.extend(t.checks);
            }
        }
    }
    Ok(())
}

fn run_laws(config: &RunConfig, report: &mut RunReport) -> Result<()> {
    let m = config.monad_spec()?;
    let objects: Vec<FinSet> = config.objects.iter().map(|&x| FinSet::new(x)).collect();
    let laws = match config.fault.map(|f| f.kind) {
        Some(FaultKind::CorruptBind) => check_monad_laws(&CorruptedBind { inner: m }, &objects, config.budget, config.seed),
        _ => check_monad_laws(&m, &objects, config.budget, config.seed),
    };
    report.checks = laws.checks;
    Ok(())
}

fn run_theory(config: &RunConfig, report: &mut RunReport) -> Result<()> {
    let interp = config.interpretation()?;
    let mut f = factored(config)?;
    for &x in &config.objects {
        let p = kernel_partition(interp.signature(), &interp, &FinSet::new(x), config.depth, config.limits.max_terms)?;
        report.sections.partitions.push(PartitionSection {
            x,
            depth: config.depth,
            terms: p.terms.len(),
            blocks: p
                .blocks
                .iter()
                .map(|b| BlockRow {
                    value: b.value.clone(),
                    size: b.members.len(),
                    members: b.members.iter().take(BLOCK_SAMPLE).map(|&i| p.term(i)).collect(),
                })
                .collect(),
        });
        let c = correctness_check(&mut f, x, config.depth)?;
        report.checks.push(flag("correctness", &[x], c.agree, || {
            c.counterexample.clone().unwrap_or_default()
        }));
        report.sections.correctness.push(c);
    }
    Ok(())
}

fn run_stability(config: &RunConfig, report: &mut RunReport) -> Result<()> {
    let a = config.interpretation()?;
    let b = config.other_interpretation()?;
    let s = stability_check(a.signature(), &a, &b, &config.objects, config.depth, config.limits.max_terms)?;
    for row in &s.rows {
        report.checks.push(flag("stability", &[row.x], row.equal, || {
            row.distinguishing.clone().unwrap_or_default()
        }));
    }
    report.sections.stability = Some(s);
    Ok(())
}

fn run_modularity(config: &RunConfig, report: &mut RunReport) -> Result<()> {
    let interp = config.interpretation()?;
    let formula = config
        .formula
        .as_deref()
        .ok_or_else(|| Error::Config("formula: required by the modularity subcommand".into()))?;
    let p = modularity_profile(&interp, interp.signature(), &config.objects, formula, &config.limits())?;
    for row in &p.rows {
        report.checks.push(flag("modularity", &[row.x], row.matches, || match row.expected {
            Some(e) => format!("|R {}| = {}, formula gives {e}", row.x, row.size),
            None => format!("|R {}| = {}, formula overflows", row.x, row.size),
        }));
    }
    report.sections.modularity = Some(p);
    Ok(())
}

fn list_presets(report: &mut RunReport) -> Result<()> {
    for name in PRESETS {
        let info = preset_info(name)?;
        report.sections.presets.push(PresetRow {
            name: info.name.to_string(),
            monad: info.monad.to_string(),
            ops: info.ops.iter().map(|s| s.to_string()).collect(),
            formula: info.formula.to_string(),
            description: info.description.to_string(),
        });
    }
    Ok(())
}

/// Runs one subcommand. `config` may be `None` only for `presets`.
pub fn run(sub: Subcommand, config: Option<&RunConfig>) -> Result<RunReport> {
    let mut report = RunReport::new(sub, config);
    let need = || config.ok_or_else(|| Error::Config(format!("{sub} needs a --config file")));
    match sub {
        Subcommand::Factor => run_factor(need()?, &mut report)?,
        Subcommand::Laws => run_laws(need()?, &mut report)?,
        Subcommand::Theory => run_theory(need()?, &mut report)?,
        Subcommand::Stability => run_stability(need()?, &mut report)?,
        Subcommand::Modularity => run_modularity(need()?, &mut report)?,
        Subcommand::Presets => list_presets(&mut report)?,
    }
    report.passed = all_passed(&report.checks);
    Ok(report)
}
