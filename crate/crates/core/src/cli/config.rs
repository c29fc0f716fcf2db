//! Run configurations: TOML in, a fully resolved [`RunConfig`] out, and back.
//!
//! Every optional field of the input is filled in on parse, so the emitted
//! form of a parsed config is explicit and parses back to the same value.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{FinFun, FinSet, DEFAULT_MAX_CARRIER};
use crate::monad::{Monad, MonadKind, MonadSpec};
use crate::presets::{builtin_effect, builtin_shape, preset_info};
use crate::signature::{Interpretation, Limits, Operation, Signature};

pub const CONFIG_VERSION: u32 = 1;

pub const DEFAULT_OBJECTS: [usize; 4] = [0, 1, 2, 3];
pub const DEFAULT_DEPTH: usize = 3;
pub const DEFAULT_BUDGET: u64 = 100_000;
pub const DEFAULT_PARAM: usize = 2;
pub const DEFAULT_THEOREM_MAX: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonadConfig {
    /// Catalog id: identity, exception, reader, state, powerset,
    /// continuation or state_exc.
    pub kind: String,
    /// `|E|`, `|S|` or `|A|`; ignored by identity and powerset.
    pub size: usize,
}

impl MonadConfig {
    pub fn kind(&self) -> Result<MonadKind> {
        MonadKind::from_id(&self.kind, self.size)
    }
}

/// One operation and its generic effect `A → T B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpConfig {
    pub name: String,
    /// `|A|`
    pub params: usize,
    /// `|B|`
    pub arity: usize,
    /// Built-in effect the table was generated from, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    /// Carrier indices into `T B`, one per parameter.
    pub table: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitsConfig {
    pub max_carrier: usize,
    pub max_terms: usize,
    pub max_round_work: usize,
}

impl Default for LimitsConfig {
    fn default() -> Self {
        let l = Limits::default();
        LimitsConfig {
            max_carrier: DEFAULT_MAX_CARRIER,
            max_terms: l.max_terms,
            max_round_work: l.max_round_work,
        }
    }
}

/// The second interpretation of a stability run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OtherConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub monad: MonadConfig,
    pub ops: Vec<OpConfig>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaultKind {
    /// Run `laws` against a monad whose bind is perturbed.
    CorruptBind,
    /// Identify two elements of `R X` before the checks.
    MergeN,
    /// Drop the last element of `R X` before the checks.
    RemoveElement,
}

impl FaultKind {
    pub fn id(self) -> &'static str {
        match self {
            FaultKind::CorruptBind => "corrupt-bind",
            FaultKind::MergeN => "merge-n",
            FaultKind::RemoveElement => "remove-element",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultConfig {
    pub kind: FaultKind,
    pub object: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub objects: Vec<usize>,
    pub depth: usize,
    pub budget: u64,
    pub seed: u64,
    /// Largest object size used in the theorem and strength checks.
    pub theorem_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    pub monad: MonadConfig,
    pub limits: LimitsConfig,
    pub ops: Vec<OpConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability: Option<OtherConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fault: Option<FaultConfig>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMonad {
    kind: String,
    size: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOp {
    name: String,
    params: Option<usize>,
    arity: Option<usize>,
    builtin: Option<String>,
    table: Option<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLimits {
    max_carrier: Option<usize>,
    max_terms: Option<usize>,
    max_round_work: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOther {
    preset: Option<String>,
    monad: Option<RawMonad>,
    ops: Option<Vec<RawOp>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFault {
    kind: FaultKind,
    object: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    version: Option<u32>,
    preset: Option<String>,
    objects: Option<Vec<usize>>,
    depth: Option<usize>,
    budget: Option<u64>,
    seed: Option<u64>,
    theorem_max: Option<usize>,
    formula: Option<String>,
    monad: Option<RawMonad>,
    limits: Option<RawLimits>,
    ops: Option<Vec<RawOp>>,
    stability: Option<RawOther>,
    fault: Option<RawFault>,
}

fn field(name: &str, e: Error) -> Error {
    match e {
        Error::Config(msg) => Error::Config(format!("{name}.{msg}")),
        other => Error::Config(format!("{name}: {other}")),
    }
}

fn resolve_monad(raw: Option<RawMonad>, preset: Option<&str>, max_carrier: usize) -> Result<(MonadConfig, MonadSpec)> {
    let config = match (raw, preset) {
        (Some(m), _) => MonadConfig {
            kind: m.kind,
            size: m.size.unwrap_or(DEFAULT_PARAM),
        },
        (None, Some(p)) => MonadConfig {
            kind: preset_info(p)?.monad.to_string(),
            size: DEFAULT_PARAM,
        },
        (None, None) => return Err(Error::Config("monad: required when no preset is given".into())),
    };
    let kind = config.kind().map_err(|e| field("monad", Error::Config(format!("kind: {e}"))))?;
    Ok((config, MonadSpec::new(kind).with_max_carrier(max_carrier)))
}

fn resolve_op(raw: RawOp, monad: &MonadSpec) -> Result<OpConfig> {
    let builtin = match (&raw.builtin, &raw.table) {
        (Some(b), _) => Some(b.clone()),
        (None, None) => Some(raw.name.clone()),
        (None, Some(_)) => None,
    };
    let (params, arity, generated) = match &builtin {
        Some(b) => {
            let (a, n) = builtin_shape(b, monad.kind())?;
            (a, n, Some(builtin_effect(b, monad)?.table().to_vec()))
        }
        None => (
            raw.params.ok_or_else(|| Error::Config("params: required with an explicit table".into()))?,
            raw.arity.ok_or_else(|| Error::Config("arity: required with an explicit table".into()))?,
            None,
        ),
    };
    for (label, given, want) in [("params", raw.params, params), ("arity", raw.arity, arity)] {
        if given.is_some_and(|g| g != want) {
            return Err(Error::Config(format!(
                "{label}: built-in {} has {label} {want}, not {}",
                builtin.as_deref().unwrap_or_default(),
                given.unwrap_or_default()
            )));
        }
    }
    let table = match (raw.table, generated) {
        (Some(t), Some(g)) if t != g => {
            return Err(Error::Config(format!(
                "table: {t:?} disagrees with built-in {} {g:?}",
                builtin.as_deref().unwrap_or_default()
            )))
        }
        (Some(t), _) => t,
        (None, Some(g)) => g,
        (None, None) => unreachable!("no table and no built-in"),
    };
    let tb = monad.carrier_size(arity)?;
    if table.len() != params {
        return Err(Error::Config(format!("table: has {} entries, expected {params}", table.len())));
    }
    if let Some(&bad) = table.iter().find(|&&t| t >= tb) {
        return Err(Error::Config(format!("table: entry {bad} is outside T({arity}) of size {tb}")));
    }
    Ok(OpConfig {
        name: raw.name,
        params,
        arity,
        builtin,
        table,
    })
}

fn resolve_ops(raw: Option<Vec<RawOp>>, preset: Option<&str>, monad: &MonadSpec, at: &str) -> Result<Vec<OpConfig>> {
    let raw = match (raw, preset) {
        (Some(ops), _) => ops,
        (None, Some(p)) => preset_info(p)?
            .ops
            .iter()
            .map(|&name| RawOp {
                name: name.to_string(),
                params: None,
                arity: None,
                builtin: Some(name.to_string()),
                table: None,
            })
            .collect(),
        (None, None) => Vec::new(),
    };
    let ops = raw
        .into_iter()
        .enumerate()
        .map(|(i, op)| resolve_op(op, monad).map_err(|e| field(&format!("{at}[{i}]"), e)))
        .collect::<Result<Vec<_>>>()?;
    for (i, op) in ops.iter().enumerate() {
        if ops[..i].iter().any(|o| o.name == op.name) {
            return Err(Error::Config(format!("{at}[{i}].name: duplicate operation {}", op.name)));
        }
    }
    Ok(ops)
}

fn check_preset(p: &Option<String>, at: &str) -> Result<()> {
    match p {
        Some(name) => preset_info(name).map(|_| ()).map_err(|e| Error::Config(format!("{at}: {e}"))),
        None => Ok(()),
    }
}

/// Parses a TOML run configuration and fills in every default.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
    let version = raw.version.unwrap_or(CONFIG_VERSION);
    if version != CONFIG_VERSION {
        return Err(Error::Config(format!("version: unsupported config version {version}")));
    }
    check_preset(&raw.preset, "preset")?;
    let preset = raw.preset.as_deref();

    let limits = {
        let d = LimitsConfig::default();
        let l = raw.limits.unwrap_or(RawLimits {
            max_carrier: None,
            max_terms: None,
            max_round_work: None,
        });
        LimitsConfig {
            max_carrier: l.max_carrier.unwrap_or(d.max_carrier),
            max_terms: l.max_terms.unwrap_or(d.max_terms),
            max_round_work: l.max_round_work.unwrap_or(d.max_round_work),
        }
    };
    let (monad, spec) = resolve_monad(raw.monad, preset, limits.max_carrier)?;
    let ops = resolve_ops(raw.ops, preset, &spec, "ops")?;

    let stability = match raw.stability {
        None => None,
        Some(other) => {
            check_preset(&other.preset, "stability.preset")?;
            let p = other.preset.as_deref();
            let (m, s) = resolve_monad(other.monad, p, limits.max_carrier).map_err(|e| field("stability", e))?;
            let ops = resolve_ops(other.ops, p, &s, "stability.ops")?;
            Some(OtherConfig {
                preset: other.preset,
                monad: m,
                ops,
            })
        }
    };

    let objects = raw.objects.unwrap_or_else(|| DEFAULT_OBJECTS.to_vec());
    let theorem_max = raw.theorem_max.unwrap_or(DEFAULT_THEOREM_MAX);
    let formula = match raw.formula {
        Some(f) => Some(f),
        None => preset.map(|p| preset_info(p).map(|i| i.formula.to_string())).transpose()?,
    };
    if let Some(f) = &formula {
        crate::analysis::Formula::parse(f).map_err(|e| Error::Config(format!("formula: {e}")))?;
    }
    let fault = raw.fault.map(|f| FaultConfig {
        kind: f.kind,
        object: f.object.unwrap_or_else(|| {
            objects
                .iter()
                .copied()
                .filter(|&x| x <= theorem_max)
                .max()
                .unwrap_or(DEFAULT_THEOREM_MAX)
        }),
    });

    Ok(RunConfig {
        version,
        preset: raw.preset,
        objects,
        depth: raw.depth.unwrap_or(DEFAULT_DEPTH),
        budget: raw.budget.unwrap_or(DEFAULT_BUDGET),
        seed: raw.seed.unwrap_or(0),
        theorem_max,
        formula,
        monad,
        limits,
        ops,
        stability,
        fault,
    })
}

fn build(monad: &MonadConfig, ops: &[OpConfig], max_carrier: usize) -> Result<Interpretation> {
    let spec = MonadSpec::new(monad.kind()?).with_max_carrier(max_carrier);
    let mut operations = Vec::with_capacity(ops.len());
    let mut effects = Vec::with_capacity(ops.len());
    for op in ops {
        operations.push(Operation::new(op.name.clone(), FinSet::new(op.params), FinSet::new(op.arity))?);
        effects.push(FinFun::from_table(op.params, spec.carrier_size(op.arity)?, op.table.clone())?);
    }
    Interpretation::new(spec, Signature::new(operations)?, effects)
}

impl RunConfig {
    /// Config for a preset with every other field at its default.
    pub fn for_preset(name: &str) -> Result<RunConfig> {
        parse_config(&format!("preset = {}", toml::Value::String(name.to_string())))
    }

    pub fn monad_spec(&self) -> Result<MonadSpec> {
        Ok(MonadSpec::new(self.monad.kind()?).with_max_carrier(self.limits.max_carrier))
    }

    pub fn interpretation(&self) -> Result<Interpretation> {
        build(&self.monad, &self.ops, self.limits.max_carrier)
    }

    pub fn other_interpretation(&self) -> Result<Interpretation> {
        let other = self
            .stability
            .as_ref()
            .ok_or_else(|| Error::Config("stability: required by the stability subcommand".into()))?;
        build(&other.monad, &other.ops, self.limits.max_carrier)
    }

    pub fn limits(&self) -> Limits {
        Limits {
            max_terms: self.limits.max_terms,
            max_round_work: self.limits.max_round_work,
        }
    }

    /// Objects no larger than `theorem_max`, sorted and deduplicated.
    pub fn theorem_objects(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.objects.iter().copied().filter(|&x| x <= self.theorem_max).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn list(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("[{}]", items.join(", "))
}

fn emit_monad(out: &mut String, table: &str, m: &MonadConfig) {
    let _ = writeln!(out, "\n[{table}]\nkind = {}\nsize = {}", quote(&m.kind), m.size);
}

fn emit_ops(out: &mut String, table: &str, monad: &MonadConfig, ops: &[OpConfig], max_carrier: usize) {
    let spec = monad.kind().ok().map(|k| MonadSpec::new(k).with_max_carrier(max_carrier));
    for op in ops {
        let _ = writeln!(out, "\n# {} : {} -> T {}", op.name, op.params, op.arity);
        if let Some(spec) = &spec {
            for (a, &t) in op.table.iter().enumerate() {
                let _ = writeln!(out, "#   {a} |-> {}", spec.decode(op.arity, t));
            }
        }
        let _ = writeln!(out, "[[{table}]]\nname = {}\nparams = {}\narity = {}", quote(&op.name), op.params, op.arity);
        if let Some(b) = &op.builtin {
            let _ = writeln!(out, "builtin = {}", quote(b));
        }
        let _ = writeln!(out, "table = {}", list(&op.table));
    }
}

/// Writes `config` back as TOML, with the decoded value of every table entry
/// in a comment above its operation.
pub fn emit_config(config: &RunConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "version = {}", config.version);
    if let Some(p) = &config.preset {
        let _ = writeln!(out, "preset = {}", quote(p));
    }
    let _ = writeln!(out, "objects = {}", list(&config.objects));
    let _ = writeln!(out, "depth = {}", config.depth);
    let _ = writeln!(out, "budget = {}", config.budget);
    let _ = writeln!(out, "seed = {}", config.seed);
    let _ = writeln!(out, "theorem_max = {}", config.theorem_max);
    if let Some(f) = &config.formula {
        let _ = writeln!(out, "formula = {}", quote(f));
    }
    emit_monad(&mut out, "monad", &config.monad);
    let l = &config.limits;
    let _ = writeln!(
        out,
        "\n[limits]\nmax_carrier = {}\nmax_terms = {}\nmax_round_work = {}",
        l.max_carrier, l.max_terms, l.max_round_work
    );
    emit_ops(&mut out, "ops", &config.monad, &config.ops, l.max_carrier);
    if let Some(other) = &config.stability {
        out.push_str("\n[stability]\n");
        if let Some(p) = &other.preset {
            let _ = writeln!(out, "preset = {}", quote(p));
        }
        emit_monad(&mut out, "stability.monad", &other.monad);
        emit_ops(&mut out, "stability.ops", &other.monad, &other.ops, l.max_carrier);
    }
    if let Some(f) = &config.fault {
        let _ = writeln!(out, "\n[fault]\nkind = {}\nobject = {}", quote(f.kind.id()), f.object);
    }
    out
}
