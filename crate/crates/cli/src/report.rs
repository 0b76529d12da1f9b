use std::fmt::Write as _;

use ctrlmeas::algorithms::{BenchRow, PipelineReport, PipelineResult};
use ctrlmeas::Outcome;
use serde::Serialize;

use crate::io::MatrixFile;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResultValue {
    Matrix(MatrixFile),
    Phase([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub n_r: usize,
    pub analytic_p: f64,
    pub empirical_p: f64,
    pub sigma: f64,
    pub controlled_success_rate: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthRow {
    pub n_controls: usize,
    pub single_qubit_gates: usize,
    pub toffoli_gates: usize,
    pub depth: usize,
    /// Depth of the whole row-sum circuit: H layer, flip, CNOT.
    pub pipeline_depth: usize,
}

/// Everything a command prints. Serialized fields keep declaration order, so
/// equal inputs give byte-identical JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JsonReport {
    pub command: String,
    pub exit_code: i32,
    /// `one`, `zero`, `not_measured`, `unitary`, `error` or `n/a`.
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch_weight: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovered_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<ResultValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bench: Option<BenchReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<Vec<DepthRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::One => "one",
        Outcome::Zero => "zero",
        Outcome::NotMeasured => "not_measured",
    }
}

impl JsonReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            exit_code: 0,
            outcome: "n/a".into(),
            branch_weight: None,
            recovered_norm: None,
            gate_depth: None,
            result: None,
            max_deviation: None,
            bench: None,
            depth: None,
            message: None,
        }
    }

    pub fn error(command: &str, e: &CliError) -> Self {
        Self {
            exit_code: e.exit_code(),
            outcome: "error".into(),
            message: Some(e.to_string()),
            ..Self::new(command)
        }
    }

    pub fn from_pipeline(command: &str, r: &PipelineReport<f64>) -> Self {
        let result = match &r.result {
            PipelineResult::Matrix(d) => {
                Some(ResultValue::Matrix(MatrixFile::from_matrix(&d.matrix)))
            }
            PipelineResult::Phase(p) => Some(ResultValue::Phase([p.re, p.im])),
            PipelineResult::Absent => None,
        };
        Self {
            outcome: outcome_name(r.outcome).into(),
            branch_weight: Some(r.branch_weight),
            recovered_norm: r.recovered_norm,
            gate_depth: Some(r.gate_depth),
            result,
            ..Self::new(command)
        }
    }

    pub fn from_bench(command: &str, b: &BenchRow) -> Self {
        Self {
            outcome: "n/a".into(),
            bench: Some(BenchReport {
                n_r: b.n_r,
                analytic_p: b.analytic_p,
                empirical_p: b.empirical_p,
                sigma: b.sigma,
                controlled_success_rate: b.controlled_success_rate,
                trials: b.trials,
            }),
            ..Self::new(command)
        }
    }

    pub fn from_depth(command: &str, rows: Vec<DepthRow>) -> Self {
        Self {
            depth: Some(rows),
            ..Self::new(command)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}: {}", self.command, self.outcome);
        if let Some(m) = &self.message {
            let _ = writeln!(s, "{m}");
        }
        if let Some(w) = self.branch_weight {
            let _ = writeln!(s, "branch_weight  {w:.12e}");
        }
        if let Some(n) = self.recovered_norm {
            let _ = writeln!(s, "recovered_norm {n:.12e}");
        }
        if let Some(d) = self.gate_depth {
            let _ = writeln!(s, "gate_depth     {d}");
        }
        match &self.result {
            Some(ResultValue::Phase([re, im])) => {
                let _ = writeln!(s, "phase          {re:+.12} {im:+.12}i");
            }
            Some(ResultValue::Matrix(m)) => {
                let _ = writeln!(s, "result ({}x{})", m.rows, m.cols);
                for row in m.data.chunks(m.cols) {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|[re, im]| format!("{re:+.10}{im:+.10}i"))
                        .collect();
                    let _ = writeln!(s, "  {}", cells.join("  "));
                }
            }
            None => {}
        }
        if let Some(d) = self.max_deviation {
            let _ = writeln!(s, "max_deviation  {d:.3e}");
        }
        if let Some(b) = &self.bench {
            let _ = writeln!(s, "n_r analytic_p empirical_p sigma controlled trials");
            let _ = writeln!(
                s,
                "{} {:.6} {:.6} {:.6} {:.3} {}",
                b.n_r, b.analytic_p, b.empirical_p, b.sigma, b.controlled_success_rate, b.trials
            );
        }
        if let Some(rows) = &self.depth {
            let _ = writeln!(s, "n  singles  toffoli  depth  pipeline");
            for r in rows {
                let _ = writeln!(
                    s,
                    "{:<2} {:>8} {:>8} {:>6} {:>9}",
                    r.n_controls, r.single_qubit_gates, r.toffoli_gates, r.depth, r.pipeline_depth
                );
            }
        }
        s
    }
}
