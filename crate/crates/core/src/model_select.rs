//! Empirical-O degree selection over nested polynomial fits.
//!
//! Scanning `d = d_min..=d_max`, degree `d` is accepted when its own
//! highest-order term is significant at `alpha` and the new term of the
//! degree `d + 1` fit is not. Significance means `sig < alpha` strictly.
//! When no degree satisfies both, the verdict is `d_max`, flagged cap-limited.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyfit::{fit_report, DataPoint, RegressionReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionPolicy {
    pub alpha: f64,
    pub d_min: usize,
    pub d_max: usize,
}

impl Default for SelectionPolicy {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            d_min: 1,
            d_max: 4,
        }
    }
}

impl SelectionPolicy {
    pub fn validate(&self, m: usize) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidPolicy(format!(
                "alpha must be in (0,1), got {}",
                self.alpha
            )));
        }
        if self.d_min < 1 || self.d_min > self.d_max {
            return Err(Error::InvalidPolicy(format!(
                "need 1 <= d_min <= d_max, got d_min={} d_max={}",
                self.d_min, self.d_max
            )));
        }
        if m < self.d_max + 2 {
            return Err(Error::TooFewPoints {
                degree: self.d_max,
                needed: self.d_max + 2,
                got: m,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    /// Highest term significant, extension's term not: stop here.
    Selected,
    /// Highest term significant and so is the extension's: keep going.
    Extend,
    /// Highest term not significant: keep going.
    NotSignificant,
    /// Examined only as the extension of the selected degree.
    ExtensionCheck,
    /// Reached `d_max` without a stopping pair.
    Cap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub degree: usize,
    pub t: Option<f64>,
    pub sig: Option<f64>,
    pub significant: bool,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalOVerdict {
    pub selected_degree: usize,
    pub label: String,
    pub cap_limited: bool,
    /// All `y` equal; no polynomial trend to select.
    pub degenerate: bool,
    pub alpha: f64,
    pub trace: Vec<TraceRow>,
    /// Serialized as a list ordered by degree so the document survives
    /// formats whose map keys must be strings.
    #[serde(with = "reports_by_degree")]
    pub per_degree: BTreeMap<usize, RegressionReport>,
}

mod reports_by_degree {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serializer};

    use crate::polyfit::RegressionReport;

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<usize, RegressionReport>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        s.collect_seq(map.values())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<usize, RegressionReport>, D::Error> {
        let reports = Vec::<RegressionReport>::deserialize(d)?;
        Ok(reports.into_iter().map(|r| (r.model.degree, r)).collect())
    }
}

pub fn verdict_label(degree: usize) -> String {
    format!("O_emp(p^{degree})")
}

fn is_significant(report: &RegressionReport, alpha: f64) -> bool {
    if report.exact_fit {
        // a perfect fit leaves no noise to test against; any nonzero term is real
        return report.highest_term().b != 0.0;
    }
    report.highest_term().sig.is_some_and(|s| s < alpha)
}

pub fn select_degree(points: &[DataPoint], policy: SelectionPolicy) -> Result<EmpiricalOVerdict> {
    policy.validate(points.len())?;

    let first_y = points[0].y;
    if points.iter().all(|p| p.y == first_y) {
        return Ok(EmpiricalOVerdict {
            selected_degree: 0,
            label: verdict_label(0),
            cap_limited: false,
            degenerate: true,
            alpha: policy.alpha,
            trace: Vec::new(),
            per_degree: BTreeMap::new(),
        });
    }

    let mut per_degree = BTreeMap::new();
    for d in policy.d_min..=policy.d_max {
        per_degree.insert(d, fit_report(points, d, "p")?);
    }
    let significant: BTreeMap<usize, bool> = per_degree
        .iter()
        .map(|(&d, r)| (d, is_significant(r, policy.alpha)))
        .collect();

    let mut trace = Vec::new();
    let mut selected = None;
    for d in policy.d_min..=policy.d_max {
        let own = significant[&d];
        let decision = if d == policy.d_max {
            Decision::Cap
        } else if !own {
            Decision::NotSignificant
        } else if significant[&(d + 1)] {
            Decision::Extend
        } else {
            Decision::Selected
        };
        trace.push(row(&per_degree[&d], own, decision));
        if decision == Decision::Selected {
            selected = Some(d);
            let next = d + 1;
            trace.push(row(
                &per_degree[&next],
                significant[&next],
                Decision::ExtensionCheck,
            ));
            break;
        }
    }

    let (selected_degree, cap_limited) = match selected {
        Some(d) => (d, false),
        None => (policy.d_max, true),
    };
    Ok(EmpiricalOVerdict {
        selected_degree,
        label: verdict_label(selected_degree),
        cap_limited,
        degenerate: false,
        alpha: policy.alpha,
        trace,
        per_degree,
    })
}

fn row(report: &RegressionReport, significant: bool, decision: Decision) -> TraceRow {
    let top = report.highest_term();
    TraceRow {
        degree: report.model.degree,
        t: top.t,
        sig: top.sig,
        significant,
        decision,
    }
}

fn fmt_opt(v: Option<f64>, prec: usize) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.prec$}"))
}

/// Plain-text summary: label, decision trace, and per-degree fit quality.
pub fn render_verdict(verdict: &EmpiricalOVerdict) -> String {
    let mut out = String::new();
    let mut flags = Vec::new();
    if verdict.cap_limited {
        flags.push("cap-limited");
    }
    if verdict.degenerate {
        flags.push("degenerate");
    }
    let _ = write!(out, "Empirical O verdict: c_avg(p) = {}", verdict.label);
    if !flags.is_empty() {
        let _ = write!(out, "  [{}]", flags.join(", "));
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "alpha = {}", verdict.alpha);
    let _ = writeln!(out);

    let _ = writeln!(out, "Decision trace (highest-order term of each fit)");
    let _ = writeln!(
        out,
        "{:>6}  {:>10}  {:>10}  {:>11}  decision",
        "degree", "t", "sig", "significant"
    );
    for r in &verdict.trace {
        let decision = match r.decision {
            Decision::Selected => "selected",
            Decision::Extend => "extend",
            Decision::NotSignificant => "not significant, extend",
            Decision::ExtensionCheck => "extension term not significant",
            Decision::Cap => "cap reached",
        };
        let _ = writeln!(
            out,
            "{:>6}  {:>10}  {:>10}  {:>11}  {}",
            r.degree,
            fmt_opt(r.t, 3),
            fmt_opt(r.sig, 4),
            if r.significant { "yes" } else { "no" },
            decision
        );
    }

    if !verdict.per_degree.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:>6}  {:>9}  {:>12}",
            "degree", "R Square", "Adjusted R²"
        );
        for (d, report) in &verdict.per_degree {
            let _ = writeln!(
                out,
                "{:>6}  {:>9.4}  {:>12.4}",
                d, report.summary.r_squared, report.summary.adjusted_r_squared
            );
        }
    }
    out
}
