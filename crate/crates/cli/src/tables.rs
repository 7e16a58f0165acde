//! The published example tables, recomputed next to their printed values.
//!
//! Each table carries our numbers, the printed numbers (`printed_*`) and the
//! absolute deviation between them (`dev_*`).

use odesurf::functionals::{gauss_bonnet_check, mean_curvature_lp, Verdict};
use odesurf::odecurve::Atom;
use odesurf::quadrature::QuadConfig;
use odesurf::surface::gauss_density_at;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::report::{Cell, Table, TableReport};
use crate::spec::{CurveSpec, SurfaceSpecJson};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TableId {
    Ex83,
    Ex85,
    Ex86,
    Ex88,
}

impl TableId {
    pub fn name(self) -> &'static str {
        match self {
            TableId::Ex83 => "ex83",
            TableId::Ex85 => "ex85",
            TableId::Ex86 => "ex86",
            TableId::Ex88 => "ex88",
        }
    }
}

/// Printed row of the all-real Gauss-Bonnet table.
#[derive(Debug, Clone, Copy)]
pub struct Ex85Row {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub k_total: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub residual: f64,
    pub abs_k_total: f64,
}

const fn row85(a1: f64, a2: f64, b1: f64, b2: f64, k: f64, t1: f64, t2: f64, e: f64, abs_k: f64) -> Ex85Row {
    Ex85Row { a: [a1, a2], b: [b1, b2], k_total: k, theta1: t1, theta2: t2, residual: e, abs_k_total: abs_k }
}

pub const EX85_ROWS: [Ex85Row; 8] = [
    row85(0.0, -1.0, 0.0, -1.0, -1.8649, 1.10423, 1.10423, 1e-3, 1.866),
    row85(0.0, -2.0, 0.0, -3.0, -2.0356, 1.07859, 1.04485, 7e-4, 2.26658),
    row85(-1.0, -1.1, -1.0, -1.2, -1.51466, 1.26238, 1.09344, 0.06, 1.73122),
    row85(-1.0, -2.0, -1.0, -2.0, -1.96762, 1.07875, 1.07875, 5e-4, 2.27566),
    row85(-1.0, -5.0, -1.0, -5.0, -1.96884, 1.07859, 1.07859, 8e-7, 2.3783),
    row85(-2.0, -4.0, -1.0, -3.0, -1.88447, 1.09513, 1.10423, 6e-7, 2.56669),
    row85(-5.0, -6.0, -1.0, -2.0, -2.17533, 0.975259, 1.07861, 1e-4, 3.33547),
    row85(-5.0, -6.0, -7.0, -8.0, -2.43838, 0.975259, 0.947119, 5e-5, 4.32915),
];

impl Ex85Row {
    pub fn surface(&self) -> SurfaceSpecJson {
        SurfaceSpecJson::new(CurveSpec::real(&[1.0, self.a[0], self.a[1]]), CurveSpec::real(&[1.0, self.b[0], self.b[1]]))
    }
}

/// Printed row of the oscillating family table; `Θ[σ2]` is printed as π/2.
#[derive(Debug, Clone, Copy)]
pub struct Ex86Row {
    pub k: f64,
    pub k_total: f64,
    pub theta1: f64,
    pub residual: f64,
}

const fn row86(k: f64, k_total: f64, theta1: f64, residual: f64) -> Ex86Row {
    Ex86Row { k, k_total, theta1, residual }
}

/// Rows with `k` up to 50; larger `k` is out of reach at desk scale.
pub const EX86_ROWS: [Ex86Row; 7] = [
    row86(0.0, -0.933127, 1.10423, 2.96624e-9),
    row86(1.0, -2.15652, 0.49253, -7.07655e-10),
    row86(2.0, -4.74826, -0.803332, -4.54394e-9),
    row86(3.0, -7.77242, -2.31541, 6.01698e-9),
    row86(4.0, -10.9544, -3.90643, -6.68724e-8),
    row86(10.0, -30.8223, -13.8403, 8.18756e-7),
    row86(50.0, -165.483, -81.1709, 1.25382e-7),
];

/// `(e^t, cos kt, sin kt, e^{-t}) ⊗ (e^s, e^{-s})`.
pub fn ex86_surface(k: f64) -> SurfaceSpecJson {
    let c1 = CurveSpec::atoms(&[Atom::exp(1.0), Atom::cos(0.0, k), Atom::sin(0.0, k), Atom::exp(-1.0)]);
    SurfaceSpecJson::new(c1, CurveSpec::real(&[1.0, -1.0]))
}

pub fn ex83_surface() -> SurfaceSpecJson {
    SurfaceSpecJson::new(CurveSpec::real(&[1.0, -2.0]), CurveSpec::real(&[1.0, -2.0]))
}

/// Printed `∫∫ |gK|` for the two-root example.
pub const EX83_ABS_K_TOTAL: f64 = 0.811319;

/// The printed closed form for `gK` evaluated at the origin.
pub fn ex83_gk_origin() -> f64 {
    9.0 * (1.0 - 4.0) / (1.0f64 + 1.0 + 1.0 + 4.0 + 4.0).powf(1.5)
}

/// Lᵖ fixtures: surface, exponent and the verdict the text predicts.
pub fn ex88_fixtures() -> Vec<(SurfaceSpecJson, f64, Verdict)> {
    let wide = [10.0, 2.0, 1.0, -1.0, -2.0];
    let tame = [2.0, 1.0, -1.0, -2.0];
    vec![
        (SurfaceSpecJson::new(CurveSpec::real(&wide), CurveSpec::real(&wide)), 2.0, Verdict::Divergent),
        (SurfaceSpecJson::new(CurveSpec::real(&tame), CurveSpec::real(&tame)), 3.0, Verdict::Convergent),
    ]
}

fn dev(ours: f64, printed: f64) -> Cell {
    Cell::num((ours - printed).abs())
}

pub fn reproduce(id: TableId, cfg: &QuadConfig) -> Result<TableReport, CliError> {
    let body = match id {
        TableId::Ex83 => ex83(cfg)?,
        TableId::Ex85 => ex85(cfg)?,
        TableId::Ex86 => ex86(cfg)?,
        TableId::Ex88 => ex88(cfg)?,
    };
    Ok(TableReport { table: id.name().to_string(), body })
}

fn ex83(cfg: &QuadConfig) -> Result<Table, CliError> {
    let s = ex83_surface().build()?;
    let gb = gauss_bonnet_check(&s, cfg)?;
    let gk = gauss_density_at(&s, 0.0, 0.0)?;
    let mut t = Table::new(&[
        "k_total",
        "abs_k_total",
        "gk_origin",
        "residual",
        "converged",
        "printed_k_total",
        "printed_abs_k_total",
        "printed_gk_origin",
        "dev_k_total",
        "dev_abs_k_total",
        "dev_gk_origin",
    ]);
    t.push(vec![
        Cell::num(gb.k_total),
        Cell::num(gb.abs_k_total),
        Cell::num(gk),
        Cell::num(gb.residual),
        Cell::Bool(gb.converged),
        Cell::num(0.0),
        Cell::num(EX83_ABS_K_TOTAL),
        Cell::num(ex83_gk_origin()),
        dev(gb.k_total, 0.0),
        dev(gb.abs_k_total, EX83_ABS_K_TOTAL),
        dev(gk, ex83_gk_origin()),
    ]);
    Ok(t)
}

fn ex85(cfg: &QuadConfig) -> Result<Table, CliError> {
    let mut t = Table::new(&[
        "a1",
        "a2",
        "b1",
        "b2",
        "k_total",
        "theta1",
        "theta2",
        "residual",
        "abs_k_total",
        "converged",
        "printed_k_total",
        "printed_theta1",
        "printed_theta2",
        "printed_residual",
        "printed_abs_k_total",
        "dev_k_total",
        "dev_theta1",
        "dev_theta2",
        "dev_abs_k_total",
    ]);
    for row in &EX85_ROWS {
        let gb = gauss_bonnet_check(&row.surface().build()?, cfg)?;
        t.push(vec![
            Cell::num(row.a[0]),
            Cell::num(row.a[1]),
            Cell::num(row.b[0]),
            Cell::num(row.b[1]),
            Cell::num(gb.k_total),
            Cell::num(gb.theta1),
            Cell::num(gb.theta2),
            Cell::num(gb.residual),
            Cell::num(gb.abs_k_total),
            Cell::Bool(gb.converged),
            Cell::num(row.k_total),
            Cell::num(row.theta1),
            Cell::num(row.theta2),
            Cell::num(row.residual),
            Cell::num(row.abs_k_total),
            dev(gb.k_total, row.k_total),
            dev(gb.theta1, row.theta1),
            dev(gb.theta2, row.theta2),
            dev(gb.abs_k_total, row.abs_k_total),
        ]);
    }
    Ok(t)
}

fn ex86(cfg: &QuadConfig) -> Result<Table, CliError> {
    let mut t = Table::new(&[
        "k",
        "k_total",
        "theta1",
        "theta2",
        "residual",
        "converged",
        "printed_k_total",
        "printed_theta1",
        "printed_theta2",
        "printed_residual",
        "dev_k_total",
        "dev_theta1",
        "dev_theta2",
    ]);
    for row in &EX86_ROWS {
        let gb = gauss_bonnet_check(&ex86_surface(row.k).build()?, cfg)?;
        t.push(vec![
            Cell::num(row.k),
            Cell::num(gb.k_total),
            Cell::num(gb.theta1),
            Cell::num(gb.theta2),
            Cell::num(gb.residual),
            Cell::Bool(gb.converged),
            Cell::num(row.k_total),
            Cell::num(row.theta1),
            Cell::num(FRAC_PI_2),
            Cell::num(row.residual),
            dev(gb.k_total, row.k_total),
            dev(gb.theta1, row.theta1),
            dev(gb.theta2, FRAC_PI_2),
        ]);
    }
    Ok(t)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Convergent => "convergent",
        Verdict::Divergent => "divergent",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn ex88(cfg: &QuadConfig) -> Result<Table, CliError> {
    let mut t = Table::new(&["surface", "p", "verdict", "partial_value", "half_width", "expected_verdict", "agrees"]);
    for (s, p, expected) in ex88_fixtures() {
        let d = mean_curvature_lp(&s.build()?, p, cfg)?;
        let (w, v) = d.partial_values.last().copied().unwrap_or((0.0, 0.0));
        t.push(vec![
            Cell::text(serde_json::to_string(&s).map_err(|e| CliError::Io(e.to_string()))?),
            Cell::num(p),
            Cell::text(verdict_name(d.verdict)),
            Cell::num(v),
            Cell::num(w),
            Cell::text(verdict_name(expected)),
            Cell::Bool(d.verdict == expected),
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_origin_value() {
        assert!((ex83_gk_origin() + 27.0 / 11.0f64.powf(1.5)).abs() < 1e-15);
    }

    #[test]
    fn fixtures_validate() {
        for row in &EX85_ROWS {
            assert_eq!(row.surface().build().unwrap().dim(), 9);
        }
        for row in &EX86_ROWS {
            assert_eq!(ex86_surface(row.k).build().unwrap().dim(), 8);
        }
        for (s, _, _) in ex88_fixtures() {
            assert!(s.build().is_ok());
        }
    }
}
