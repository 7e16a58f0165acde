//! Report records and their JSON and CSV renderings.

use odesurf::functionals::{BoundaryLimitRow, GaussBonnetReport, LpDiagnostic, Verdict};
use odesurf::quadrature::IntegralResult;
use odesurf::surface::Edge;
use serde::{Deserialize, Serialize};

use crate::num::{fmt9, round9, sig9, sig9_pairs};
use crate::spec::{CurveSpec, SurfaceSpecJson};
use crate::CliError;

/// Exit status for a converged computation.
pub const EXIT_OK: i32 = 0;
/// Exit status for a spec, validation or I/O error.
pub const EXIT_ERROR: i32 = 1;
/// Exit status when the integral did not converge, in particular when it was
/// diagnosed divergent.
pub const EXIT_NOT_CONVERGED: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// An [`IntegralResult`] with every number rounded for output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadSummary {
    #[serde(with = "sig9")]
    pub value: f64,
    #[serde(with = "sig9")]
    pub error_estimate: f64,
    /// `inf` once the tail map has been applied.
    #[serde(with = "sig9")]
    pub final_half_width: f64,
    pub converged: bool,
    pub diverged: bool,
    #[serde(with = "sig9_pairs")]
    pub tail_history: Vec<(f64, f64)>,
}

impl From<&IntegralResult> for QuadSummary {
    fn from(r: &IntegralResult) -> Self {
        QuadSummary {
            value: round9(r.value),
            error_estimate: round9(r.error_estimate),
            final_half_width: round9(r.final_half_width),
            converged: r.converged,
            diverged: r.diverged,
            tail_history: r.tail_history.iter().map(|&(t, v)| (round9(t), round9(v))).collect(),
        }
    }
}

impl QuadSummary {
    pub fn exit_code(&self) -> i32 {
        if self.converged {
            EXIT_OK
        } else {
            EXIT_NOT_CONVERGED
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveQuantity {
    Kappa,
    Theta,
    AbsTheta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub curve: CurveSpec,
    pub quantity: CurveQuantity,
    pub result: QuadSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceGaussReport {
    pub surface: SurfaceSpecJson,
    pub absolute: bool,
    pub result: QuadSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussBonnetSummary {
    pub surface: SurfaceSpecJson,
    #[serde(with = "sig9")]
    pub k_total: f64,
    #[serde(with = "sig9")]
    pub abs_k_total: f64,
    #[serde(with = "sig9")]
    pub theta1: f64,
    #[serde(with = "sig9")]
    pub theta2: f64,
    #[serde(with = "sig9")]
    pub residual: f64,
    pub converged: bool,
    pub diverged: bool,
    pub k_result: QuadSummary,
    pub abs_k_result: QuadSummary,
    pub theta1_result: QuadSummary,
    pub theta2_result: QuadSummary,
}

impl GaussBonnetSummary {
    pub fn new(surface: SurfaceSpecJson, r: &GaussBonnetReport) -> Self {
        GaussBonnetSummary {
            surface,
            k_total: round9(r.k_total),
            abs_k_total: round9(r.abs_k_total),
            theta1: round9(r.theta1),
            theta2: round9(r.theta2),
            residual: round9(r.residual),
            converged: r.converged,
            diverged: r.diverged,
            k_result: (&r.k_result).into(),
            abs_k_result: (&r.abs_k_result).into(),
            theta1_result: (&r.theta1_result).into(),
            theta2_result: (&r.theta2_result).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanLpReport {
    pub surface: SurfaceSpecJson,
    #[serde(with = "sig9")]
    pub p: f64,
    pub verdict: Verdict,
    pub result: QuadSummary,
}

impl MeanLpReport {
    pub fn new(surface: SurfaceSpecJson, d: &LpDiagnostic) -> Self {
        MeanLpReport { surface, p: round9(d.p), verdict: d.verdict, result: (&d.result).into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRow {
    #[serde(with = "sig9")]
    pub r: f64,
    pub edge: Edge,
    #[serde(with = "sig9")]
    pub edge_integral: f64,
    #[serde(with = "sig9")]
    pub target: f64,
    #[serde(with = "sig9")]
    pub deviation: f64,
}

impl From<&BoundaryLimitRow> for BoundaryRow {
    fn from(r: &BoundaryLimitRow) -> Self {
        BoundaryRow {
            r: round9(r.r),
            edge: r.edge,
            edge_integral: round9(r.edge_integral),
            target: round9(r.target),
            deviation: round9((r.edge_integral - r.target).abs()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub surface: SurfaceSpecJson,
    pub rows: Vec<BoundaryRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Num(#[serde(with = "sig9")] f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    pub fn num(x: f64) -> Cell {
        Cell::Num(round9(x))
    }

    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt9(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// A rectangular table, the CSV shape of every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric cell at `row`, `name`.
    pub fn get(&self, row: usize, name: &str) -> Option<f64> {
        self.rows.get(row)?.get(self.column(name)?)?.as_f64()
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }
}

/// One row per tail-history entry, each repeating the summary.
fn history_table(label: &[(&str, Cell)], q: &QuadSummary) -> Table {
    let mut cols: Vec<&str> = label.iter().map(|(c, _)| *c).collect();
    cols.extend(["value", "error_estimate", "converged", "diverged", "half_width", "partial_value"]);
    let mut t = Table::new(&cols);
    let history: Vec<(f64, f64)> = if q.tail_history.is_empty() { vec![(f64::NAN, f64::NAN)] } else { q.tail_history.clone() };
    for (w, v) in history {
        let mut row: Vec<Cell> = label.iter().map(|(_, c)| c.clone()).collect();
        row.extend([
            Cell::Num(q.value),
            Cell::Num(q.error_estimate),
            Cell::Bool(q.converged),
            Cell::Bool(q.diverged),
            Cell::Num(w),
            Cell::Num(v),
        ]);
        t.push(row);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub table: String,
    #[serde(flatten)]
    pub body: Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "report", rename_all = "kebab-case")]
pub enum Report {
    Curve(CurveReport),
    SurfaceGauss(SurfaceGaussReport),
    GaussBonnet(GaussBonnetSummary),
    MeanLp(MeanLpReport),
    BoundaryLimit(BoundaryReport),
    Table(TableReport),
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self {
            Report::Curve(r) => r.result.exit_code(),
            Report::SurfaceGauss(r) => r.result.exit_code(),
            Report::GaussBonnet(r) => {
                if r.converged {
                    EXIT_OK
                } else {
                    EXIT_NOT_CONVERGED
                }
            }
            Report::MeanLp(r) => match r.verdict {
                Verdict::Convergent => EXIT_OK,
                _ => EXIT_NOT_CONVERGED,
            },
            Report::BoundaryLimit(_) | Report::Table(_) => EXIT_OK,
        }
    }

    pub fn table(&self) -> Table {
        match self {
            Report::Curve(r) => {
                let q = match r.quantity {
                    CurveQuantity::Kappa => "kappa",
                    CurveQuantity::Theta => "theta",
                    CurveQuantity::AbsTheta => "abs_theta",
                };
                history_table(&[("quantity", Cell::text(q))], &r.result)
            }
            Report::SurfaceGauss(r) => {
                let q = if r.absolute { "abs_k_total" } else { "k_total" };
                history_table(&[("quantity", Cell::text(q))], &r.result)
            }
            Report::GaussBonnet(r) => {
                let mut t =
                    Table::new(&["k_total", "abs_k_total", "theta1", "theta2", "residual", "converged", "diverged"]);
                t.push(vec![
                    Cell::Num(r.k_total),
                    Cell::Num(r.abs_k_total),
                    Cell::Num(r.theta1),
                    Cell::Num(r.theta2),
                    Cell::Num(r.residual),
                    Cell::Bool(r.converged),
                    Cell::Bool(r.diverged),
                ]);
                t
            }
            Report::MeanLp(r) => {
                let v = serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                history_table(&[("p", Cell::Num(r.p)), ("verdict", Cell::Text(v))], &r.result)
            }
            Report::BoundaryLimit(r) => {
                let mut t = Table::new(&["r", "edge", "edge_integral", "target", "deviation"]);
                for row in &r.rows {
                    let edge = serde_json::to_value(row.edge).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                    t.push(vec![
                        Cell::Num(row.r),
                        Cell::Text(edge),
                        Cell::Num(row.edge_integral),
                        Cell::Num(row.target),
                        Cell::Num(row.deviation),
                    ]);
                }
                t
            }
            Report::Table(r) => r.body.clone(),
        }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.table().to_csv(),
        }
    }

    pub fn from_json(text: &str) -> Result<Report, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::MalformedSpec(e.to_string()))
    }
}
