use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::report::Status;

use super::{emit_config, RunReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    /// TOML, same layout as [`RunReport`]'s serde form.
    Machine,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "human" => Ok(Format::Human),
            "machine" => Ok(Format::Machine),
            other => Err(Error::Unknown {
                kind: "format",
                name: other.to_string(),
            }),
        }
    }
}

pub fn emit_report(report: &RunReport, format: Format) -> Result<String> {
    match format {
        Format::Machine => toml::to_string(report).map_err(|e| Error::Config(format!("report serialization: {e}"))),
        Format::Human => Ok(human(report)),
    }
}

/// Left-aligned columns, two spaces apart, indented by two.
struct Table {
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table {
            rows: vec![header.iter().map(|s| s.to_string()).collect()],
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn write(&self, out: &mut String) {
        let cols = self.rows[0].len();
        let widths: Vec<usize> = (0..cols)
            .map(|c| self.rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        for r in &self.rows {
            let mut line = String::from(" ");
            for (c, cell) in r.iter().enumerate() {
                let pad = widths[c] - cell.chars().count();
                line.push(' ');
                line.push_str(cell);
                if c + 1 < cols {
                    line.push_str(&" ".repeat(pad + 1));
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
    }
}

fn objects(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("({})", items.join(","))
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn human(r: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "effect-factor {} {}", r.tool_version, r.subcommand);
    let count = |s: Status| r.checks.iter().filter(|c| c.status == s).count();
    let _ = writeln!(
        out,
        "result: {} ({} checks, {} failed, {} skipped)",
        if r.passed { "PASS" } else { "FAIL" },
        r.checks.len(),
        count(Status::Fail),
        count(Status::Skipped)
    );
    let _ = writeln!(out, "seed: {}", r.seed);
    if let Some(ms) = r.timing_ms {
        let _ = writeln!(out, "time: {ms} ms");
    }
    if let Some(c) = &r.config {
        let ops: Vec<&str> = c.ops.iter().map(|o| o.name.as_str()).collect();
        let _ = writeln!(out, "monad: {}({})  ops: {{{}}}", c.monad.kind, c.monad.size, ops.join(", "));
    }

    let s = &r.sections;
    if !s.cardinalities.is_empty() {
        out.push_str("\ncardinalities\n");
        let mut t = Table::new(&["|X|", "|T X|", "|R X|", "n bijective", "layer trace"]);
        for row in &s.cardinalities {
            t.row(vec![
                row.x.to_string(),
                row.carrier.to_string(),
                row.size.to_string(),
                yes(row.n_bijective),
                format!("{:?}", row.layer_trace),
            ]);
        }
        t.write(&mut out);
    }
    if !s.stabilization.is_empty() {
        out.push_str("\nstabilization\n");
        let mut t = Table::new(&["|X|", "rounds", "final", "monotone", "bounded", "closed"]);
        for l in &s.stabilization {
            t.row(vec![
                l.x.to_string(),
                l.rounds_to_fixpoint.to_string(),
                l.final_size.to_string(),
                yes(l.monotone),
                yes(l.bounded),
                yes(l.closed),
            ]);
        }
        t.write(&mut out);
    }
    for p in &s.partitions {
        let _ = writeln!(out, "\nkernel partition |X| = {}, depth ≤ {}: {} terms, {} blocks", p.x, p.depth, p.terms, p.blocks.len());
        let mut t = Table::new(&["block", "value", "terms", "members"]);
        for (i, b) in p.blocks.iter().enumerate() {
            let more = if b.size > b.members.len() { ", ..." } else { "" };
            t.row(vec![i.to_string(), b.value.clone(), b.size.to_string(), format!("{}{more}", b.members.join(", "))]);
        }
        t.write(&mut out);
    }
    if !s.correctness.is_empty() {
        out.push_str("\ncorrectness\n");
        let mut t = Table::new(&["|X|", "depth", "terms", "blocks in T", "blocks in R", "agree"]);
        for c in &s.correctness {
            t.row(vec![
                c.x.to_string(),
                c.depth.to_string(),
                c.terms.to_string(),
                c.blocks_in_t.to_string(),
                c.blocks_in_r.to_string(),
                yes(c.agree),
            ]);
        }
        t.write(&mut out);
    }
    if let Some(st) = &s.stability {
        let _ = writeln!(out, "\nstability {} vs {}, depth ≤ {}", st.monad_a, st.monad_b, st.depth);
        let mut t = Table::new(&["|X|", "terms", "blocks A", "blocks B", "equal"]);
        for row in &st.rows {
            t.row(vec![
                row.x.to_string(),
                row.terms.to_string(),
                row.blocks_a.to_string(),
                row.blocks_b.to_string(),
                yes(row.equal),
            ]);
        }
        t.write(&mut out);
    }
    if let Some(m) = &s.modularity {
        let _ = writeln!(out, "\nmodularity {} = {} at parameter {}", m.formula, m.expression, m.param);
        let mut t = Table::new(&["|X|", "|R X|", "expected", "match"]);
        for row in &m.rows {
            t.row(vec![
                row.x.to_string(),
                row.size.to_string(),
                row.expected.map_or("overflow".to_string(), |e| e.to_string()),
                yes(row.matches),
            ]);
        }
        t.write(&mut out);
        let _ = writeln!(out, "  ({})", m.note);
    }
    if !s.presets.is_empty() {
        out.push_str("\npresets\n");
        let mut t = Table::new(&["name", "monad", "ops", "|R X|", "description"]);
        for p in &s.presets {
            t.row(vec![
                p.name.clone(),
                p.monad.clone(),
                format!("{{{}}}", p.ops.join(", ")),
                p.formula.clone(),
                p.description.clone(),
            ]);
        }
        t.write(&mut out);
    }

    if !r.checks.is_empty() {
        // one line per check name, in first-seen order
        let mut names: Vec<&str> = Vec::new();
        for c in &r.checks {
            if !names.contains(&c.name.as_str()) {
                names.push(&c.name);
            }
        }
        out.push_str("\nchecks\n");
        let mut t = Table::new(&["check", "tuples", "pass", "fail", "skipped", "cases", "exhaustive"]);
        for name in names {
            let group: Vec<_> = r.checks.iter().filter(|c| c.name == name).collect();
            let n = |s: Status| group.iter().filter(|c| c.status == s).count().to_string();
            let cases: u64 = group.iter().map(|c| c.cases).sum();
            let run: Vec<_> = group.iter().filter(|c| c.status != Status::Skipped).collect();
            t.row(vec![
                name.to_string(),
                group.len().to_string(),
                n(Status::Pass),
                n(Status::Fail),
                n(Status::Skipped),
                cases.to_string(),
                if run.iter().all(|c| c.exhaustive) { "all" } else if run.iter().any(|c| c.exhaustive) { "some" } else { "none" }
                    .to_string(),
            ]);
        }
        t.write(&mut out);
        for (label, status) in [("failures", Status::Fail), ("skipped", Status::Skipped)] {
            let hits: Vec<_> = r.checks.iter().filter(|c| c.status == status).collect();
            if hits.is_empty() {
                continue;
            }
            let _ = writeln!(out, "\n{label}");
            for c in hits {
                let _ = writeln!(out, "  {} {}: {}", c.name, objects(&c.objects), c.detail.as_deref().unwrap_or(""));
            }
        }
    }

    if let Some(c) = &r.config {
        out.push_str("\nconfiguration\n");
        for line in emit_config(c).lines() {
            if line.is_empty() {
                out.push('\n');
            } else {
                let _ = writeln!(out, "  {line}");
            }
        }
    }
    out
}
