//! Self-contained JSON report for one pipeline run.
//!
//! `schema` is bumped on breaking layout changes; consumers should check it.
//! Re-running the tool with the echoed input reproduces the report except
//! for `timings_ms`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// What the run was asked to do, replayable as CLI flags.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputEcho {
    Scenario {
        name: String,
        k: String,
        formulation: String,
        saturate: bool,
    },
    System {
        path: String,
        text: String,
    },
    Poly {
        text: String,
    },
}

/// How the elimination ideal projected down to the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocusOutcome {
    /// A genuine curve; `locus` carries its canonical text.
    Curve,
    /// The constraints are contradictory: no point satisfies them.
    EmptyLocus,
    /// The statement holds identically: every mover position satisfies it.
    WholePlane,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorReport {
    pub text: String,
    pub multiplicity: u32,
    pub degree: u32,
    /// Label counts over curve samples of this factor; present when the
    /// scenario defines a classification.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<BTreeMap<String, usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalPointReport {
    /// Index into `factors` of the factor this point was found on.
    pub factor: usize,
    pub x: String,
    pub y: String,
    pub kind: String,
    pub on_curve: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hessian_det_sign: Option<i8>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MembershipReport {
    pub x: String,
    pub y: String,
    pub on_locus: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineReport {
    pub schema: u32,
    pub version: String,
    pub input: InputEcho,
    pub outcome: LocusOutcome,
    /// Canonical text of the locus polynomial; absent unless `outcome` is
    /// `curve`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub locus: Option<String>,
    pub factors: Vec<FactorReport>,
    pub critical_points: Vec<CriticalPointReport>,
    /// Label counts summed over all factors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<BTreeMap<String, usize>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub membership: Vec<MembershipReport>,
    pub timings_ms: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub errors: Vec<String>,
}

impl PipelineReport {
    pub fn new(input: InputEcho) -> Self {
        PipelineReport {
            schema: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION").to_owned(),
            input,
            outcome: LocusOutcome::EmptyLocus,
            locus: None,
            factors: Vec::new(),
            critical_points: Vec::new(),
            classification: None,
            membership: Vec::new(),
            timings_ms: BTreeMap::new(),
            errors: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    /// Human-readable summary mirroring the JSON content.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self.outcome {
            LocusOutcome::EmptyLocus => out.push_str("empty locus\n"),
            LocusOutcome::WholePlane => out.push_str("whole plane\n"),
            LocusOutcome::Curve => {
                if let Some(locus) = &self.locus {
                    out.push_str("locus: ");
                    out.push_str(locus);
                    out.push('\n');
                }
                for (i, f) in self.factors.iter().enumerate() {
                    out.push_str(&format!(
                        "factor {}: degree {} multiplicity {}: {}\n",
                        i + 1,
                        f.degree,
                        f.multiplicity,
                        f.text
                    ));
                    if let Some(counts) = &f.classification {
                        let parts: Vec<String> =
                            counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
                        out.push_str(&format!("  samples: {}\n", parts.join(" ")));
                    }
                }
                for c in &self.critical_points {
                    out.push_str(&format!(
                        "critical point on factor {}: ({}, {}) {}{}\n",
                        c.factor + 1,
                        c.x,
                        c.y,
                        c.kind,
                        if c.on_curve { "" } else { " (membership uncertain)" }
                    ));
                }
            }
        }
        for m in &self.membership {
            out.push_str(&format!(
                "point ({}, {}): {}\n",
                m.x,
                m.y,
                if m.on_locus { "on the locus" } else { "not on the locus" }
            ));
        }
        for e in &self.errors {
            out.push_str(&format!("error: {e}\n"));
        }
        out
    }
}
