//! JSON shapes of everything the CLI prints.

use std::collections::BTreeMap;

use legiplan_core::{ClosedLoopRun, CostBreakdown, LegibilityReport, Mode};
use serde::Serialize;

use crate::scenario::ModeFile;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BreakdownJson {
    pub goal_term: f64,
    pub clearance_term: f64,
    pub approach_term: f64,
    pub smooth_term: f64,
    pub speed_term: f64,
    pub sim_term: f64,
    pub fov_term: f64,
    pub total: f64,
    pub collided: bool,
}

impl From<&CostBreakdown> for BreakdownJson {
    fn from(b: &CostBreakdown) -> Self {
        Self {
            goal_term: b.goal_term,
            clearance_term: b.clearance_term,
            approach_term: b.approach_term,
            smooth_term: b.smooth_term,
            speed_term: b.speed_term,
            sim_term: b.sim_term,
            fov_term: b.fov_term,
            total: b.total,
            collided: b.collided,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LegibilityReportJson {
    pub mode: ModeFile,
    pub partial_fractions: Vec<f64>,
    pub posteriors: Vec<BTreeMap<String, f64>>,
    pub correctness: Vec<f64>,
    pub argmax_correct: Vec<bool>,
    pub score: f64,
}

impl From<&LegibilityReport> for LegibilityReportJson {
    fn from(r: &LegibilityReport) -> Self {
        Self {
            mode: r.mode.into(),
            partial_fractions: r.partial_fractions.clone(),
            posteriors: r
                .posteriors
                .iter()
                .map(|p| p.iter().cloned().collect())
                .collect(),
            correctness: r.correctness.clone(),
            argmax_correct: r.argmax_correct.clone(),
            score: r.score,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunSummary {
    pub mode: ModeFile,
    pub seed: u64,
    pub reached: bool,
    pub cycles_used: usize,
    pub steps: usize,
    pub path_length: f64,
    pub min_clearance: f64,
}

impl RunSummary {
    pub fn new(run: &ClosedLoopRun, mode: Mode, seed: u64, dt: f64) -> Self {
        Self {
            mode: mode.into(),
            seed,
            reached: run.reached,
            cycles_used: run.cycles_used,
            steps: run.steps.len(),
            path_length: run.executed(dt).arc_length(),
            min_clearance: run.min_clearance(),
        }
    }
}

/// Side-by-side evaluation of the two planners on one scenario.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CompareReport {
    pub seed: u64,
    #[serde(rename = "L_baseline")]
    pub l_baseline: f64,
    #[serde(rename = "L_legible")]
    pub l_legible: f64,
    #[serde(rename = "L_delta")]
    pub l_delta: f64,
    pub partial_fractions: Vec<f64>,
    pub c_baseline: Vec<f64>,
    pub c_legible: Vec<f64>,
    pub c_delta: Vec<f64>,
    pub baseline_run: RunSummary,
    pub legible_run: RunSummary,
    pub baseline: LegibilityReportJson,
    pub legible: LegibilityReportJson,
}

impl CompareReport {
    pub fn new(
        seed: u64,
        baseline: &LegibilityReport,
        legible: &LegibilityReport,
        baseline_run: RunSummary,
        legible_run: RunSummary,
    ) -> Self {
        Self {
            seed,
            l_baseline: baseline.score,
            l_legible: legible.score,
            l_delta: legible.score - baseline.score,
            partial_fractions: baseline.partial_fractions.clone(),
            c_baseline: baseline.correctness.clone(),
            c_legible: legible.correctness.clone(),
            c_delta: legible
                .correctness
                .iter()
                .zip(&baseline.correctness)
                .map(|(l, b)| l - b)
                .collect(),
            baseline_run,
            legible_run,
            baseline: baseline.into(),
            legible: legible.into(),
        }
    }
}

/// Error document written to stderr.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ErrorJson {
    pub error: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub breakdown: Option<BreakdownJson>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
