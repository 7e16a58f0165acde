//! Adaptive quadrature over `ℝ` and `ℝ²` for exponentially decaying densities.
//!
//! Panels use the Gauss–Kronrod 7/15 pair (tensorized in 2D) and report
//! `|K - G|` as their error. The truncated domain `[-T, T]` (or its square)
//! is doubled from `initial_half_width` up to `max_half_width`; the partial
//! values form the tail history that drives the convergence and divergence
//! verdicts. When neither verdict is reached at the largest width, the
//! exterior is integrated once more through the map `t = T / u`.
//!
//! Panel batches are evaluated in parallel but always summed in panel order,
//! so results do not depend on the thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Consecutive growth events after which an integral is declared divergent.
pub const GROWTH_EVENTS_FOR_DIVERGENCE: usize = 3;

/// Panel budget per adaptive run; refinement stops early beyond it.
const MAX_PANELS_1D: usize = 200_000;
const MAX_PANELS_2D: usize = 60_000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Nodes on `[-1, 1]` with Kronrod and Gauss weights (0 for Kronrod-only nodes).
fn rule() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for i in 0..7 {
        let wg = if i % 2 == 1 { WG[i / 2] } else { 0.0 };
        out[i] = (-XGK[i], WGK[i], wg);
        out[14 - i] = (XGK[i], WGK[i], wg);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub initial_half_width: f64,
    pub max_half_width: f64,
    pub divergence_growth_factor: f64,
    pub max_panel_depth: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            initial_half_width: 10.0,
            max_half_width: 240.0,
            divergence_growth_factor: 1.05,
            max_panel_depth: 40,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return bad("rel_tol must lie in (0, 1)");
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return bad("abs_tol must be finite and non-negative");
        }
        if !(self.max_half_width >= 0.0 && self.max_half_width.is_finite()) {
            return bad("max_half_width must be finite and non-negative");
        }
        if self.max_half_width > 0.0 && !(self.initial_half_width > 0.0) {
            return bad("initial_half_width must be positive");
        }
        if self.initial_half_width > self.max_half_width && self.max_half_width > 0.0 {
            return bad("initial_half_width exceeds max_half_width");
        }
        if !(self.divergence_growth_factor > 1.0) {
            return bad("divergence_growth_factor must exceed 1");
        }
        if self.max_panel_depth == 0 {
            return bad("max_panel_depth must be at least 1");
        }
        Ok(())
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    /// Half-widths visited by the extension loop.
    pub fn widths(&self) -> Vec<f64> {
        if self.max_half_width == 0.0 {
            return vec![];
        }
        let mut out = vec![self.initial_half_width.min(self.max_half_width)];
        while *out.last().unwrap() < self.max_half_width {
            out.push((out.last().unwrap() * 2.0).min(self.max_half_width));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    /// The larger of the panel error bound and the last extension increment.
    pub error_estimate: f64,
    pub final_half_width: f64,
    pub converged: bool,
    /// Set when the growth heuristic diagnosed divergence.
    pub diverged: bool,
    /// `(half-width, partial value)` for each truncated domain.
    pub tail_history: Vec<(f64, f64)>,
}

/// Neumaier-compensated sum, in iteration order.
fn stable_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

fn check_sample(v: f64, at: &[f64]) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteSample { at: at.to_vec(), value: v })
    }
}

trait Region: Clone + Send + Sync {
    fn split(&self) -> Vec<Self>;
    fn depth(&self) -> usize;
}

#[derive(Debug, Clone, Copy)]
struct Interval {
    a: f64,
    b: f64,
    depth: usize,
}

impl Region for Interval {
    fn split(&self) -> Vec<Self> {
        let m = 0.5 * (self.a + self.b);
        let d = self.depth + 1;
        vec![Interval { a: self.a, b: m, depth: d }, Interval { a: m, b: self.b, depth: d }]
    }

    fn depth(&self) -> usize {
        self.depth
    }
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    x: Interval,
    y: Interval,
}

impl Region for Rect {
    fn split(&self) -> Vec<Self> {
        let xs = self.x.split();
        let ys = self.y.split();
        let mut out = Vec::with_capacity(4);
        for x in &xs {
            for y in &ys {
                out.push(Rect { x: *x, y: *y });
            }
        }
        out
    }

    fn depth(&self) -> usize {
        self.x.depth
    }
}

fn gk_interval<F: Fn(f64) -> f64>(f: &F, iv: &Interval) -> Result<(f64, f64)> {
    let c = 0.5 * (iv.a + iv.b);
    let h = 0.5 * (iv.b - iv.a);
    let (mut k, mut g) = (0.0, 0.0);
    for (x, wk, wg) in rule() {
        let t = c + h * x;
        let v = check_sample(f(t), &[t])?;
        k += wk * v;
        g += wg * v;
    }
    Ok((k * h, ((k - g) * h).abs()))
}

fn gk_rect<F: Fn(f64, f64) -> f64>(f: &F, r: &Rect) -> Result<(f64, f64)> {
    let (cx, hx) = (0.5 * (r.x.a + r.x.b), 0.5 * (r.x.b - r.x.a));
    let (cy, hy) = (0.5 * (r.y.a + r.y.b), 0.5 * (r.y.b - r.y.a));
    let nodes = rule();
    let (mut k, mut g) = (0.0, 0.0);
    for (x, wkx, wgx) in nodes {
        let t1 = cx + hx * x;
        let (mut kr, mut gr) = (0.0, 0.0);
        for (y, wky, wgy) in nodes {
            let t2 = cy + hy * y;
            let v = check_sample(f(t1, t2), &[t1, t2])?;
            kr += wky * v;
            gr += wgy * v;
        }
        k += wkx * kr;
        g += wgx * gr;
    }
    let area = hx * hy;
    Ok((k * area, ((k - g) * area).abs()))
}

struct Cell<R> {
    region: R,
    value: f64,
    error: f64,
}

fn evaluate<R: Region, E>(regions: Vec<R>, eval: &E) -> Result<Vec<Cell<R>>>
where
    E: Fn(&R) -> Result<(f64, f64)> + Sync,
{
    let results: Vec<Result<(f64, f64)>> = regions.par_iter().map(eval).collect();
    regions
        .into_iter()
        .zip(results)
        .map(|(region, r)| r.map(|(value, error)| Cell { region, value, error }))
        .collect()
}

struct Refined {
    value: f64,
    error: f64,
}

/// Refines until the summed panel error meets `tol(value)` or nothing more can
/// be split. Each round splits the largest-error panels that together carry
/// the excess error.
fn refine<R: Region, E>(
    cells: &mut Vec<Cell<R>>,
    eval: &E,
    tol: &dyn Fn(f64) -> f64,
    max_depth: usize,
    max_panels: usize,
) -> Result<Refined>
where
    E: Fn(&R) -> Result<(f64, f64)> + Sync,
{
    loop {
        let value = stable_sum(cells.iter().map(|c| c.value));
        let error = stable_sum(cells.iter().map(|c| c.error));
        let target = tol(value);
        if error <= target || cells.len() >= max_panels {
            return Ok(Refined { value, error });
        }
        let mut order: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].region.depth() < max_depth).collect();
        if order.is_empty() {
            return Ok(Refined { value, error });
        }
        order.sort_by(|&i, &j| cells[j].error.total_cmp(&cells[i].error).then(i.cmp(&j)));
        let mut chosen = vec![false; cells.len()];
        let mut remaining = error;
        for &i in &order {
            if remaining <= 0.5 * target {
                break;
            }
            chosen[i] = true;
            remaining -= cells[i].error;
        }
        let mut kept = Vec::with_capacity(cells.len());
        let mut fresh = Vec::new();
        for (i, cell) in cells.drain(..).enumerate() {
            if chosen[i] {
                fresh.extend(cell.region.split());
            } else {
                kept.push(cell);
            }
        }
        kept.extend(evaluate(fresh, eval)?);
        *cells = kept;
    }
}

fn uniform(a: f64, b: f64, pieces: usize) -> Vec<Interval> {
    (0..pieces)
        .map(|i| {
            let lo = a + (b - a) * i as f64 / pieces as f64;
            let hi = if i + 1 == pieces { b } else { a + (b - a) * (i + 1) as f64 / pieces as f64 };
            Interval { a: lo, b: hi, depth: 0 }
        })
        .collect()
}

/// Growth tracking shared by the line and plane extension loops.
struct Extension {
    history: Vec<(f64, f64)>,
    growth_streak: usize,
    last_increment: f64,
}

enum Verdict {
    Converged,
    Diverged,
    Open,
}

impl Extension {
    fn new() -> Self {
        Extension { history: vec![], growth_streak: 0, last_increment: f64::INFINITY }
    }

    fn push(&mut self, width: f64, value: f64, cfg: &QuadConfig) -> Verdict {
        let previous = self.history.last().map(|p| p.1);
        self.history.push((width, value));
        let Some(old) = previous else { return Verdict::Open };
        let increment = (value - old).abs();
        self.last_increment = increment;
        let tol = cfg.tolerance(value);
        if increment <= tol {
            return Verdict::Converged;
        }
        if value.abs() > cfg.divergence_growth_factor * old.abs() {
            self.growth_streak += 1;
        } else {
            self.growth_streak = 0;
        }
        if self.growth_streak >= GROWTH_EVENTS_FOR_DIVERGENCE {
            Verdict::Diverged
        } else {
            Verdict::Open
        }
    }
}

fn empty_result() -> IntegralResult {
    IntegralResult {
        value: 0.0,
        error_estimate: 0.0,
        final_half_width: 0.0,
        converged: false,
        diverged: false,
        tail_history: vec![(0.0, 0.0)],
    }
}

/// `∫ f` over a finite interval, adaptively to the tolerances in `cfg`.
pub fn integrate_interval<F>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64 + Sync,
{
    cfg.validate()?;
    if a == b {
        return Ok((0.0, 0.0));
    }
    let eval = |iv: &Interval| gk_interval(&f, iv);
    let pieces = (((b - a).abs() / 2.5).ceil() as usize).clamp(1, 64);
    let mut cells = evaluate(uniform(a, b, pieces), &eval)?;
    let r = refine(&mut cells, &eval, &|v| cfg.tolerance(v), cfg.max_panel_depth, MAX_PANELS_1D)?;
    Ok((r.value, r.error))
}

/// `∫∫ f` over the rectangle `[x0, x1] × [y0, y1]`.
pub fn integrate_rectangle<F>(f: F, x: (f64, f64), y: (f64, f64), cfg: &QuadConfig) -> Result<(f64, f64)>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    cfg.validate()?;
    if x.0 == x.1 || y.0 == y.1 {
        return Ok((0.0, 0.0));
    }
    let eval = |r: &Rect| gk_rect(&f, r);
    let px = (((x.1 - x.0).abs() / 2.5).ceil() as usize).clamp(1, 16);
    let py = (((y.1 - y.0).abs() / 2.5).ceil() as usize).clamp(1, 16);
    let mut regions = Vec::new();
    for ix in uniform(x.0, x.1, px) {
        for iy in uniform(y.0, y.1, py) {
            regions.push(Rect { x: ix, y: iy });
        }
    }
    let mut cells = evaluate(regions, &eval)?;
    let r = refine(&mut cells, &eval, &|v| cfg.tolerance(v), cfg.max_panel_depth, MAX_PANELS_2D)?;
    Ok((r.value, r.error))
}

/// `∫_ℝ f(t) dt`.
pub fn integrate_line<F>(f: F, cfg: &QuadConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    cfg.validate()?;
    let widths = cfg.widths();
    if widths.is_empty() {
        return Ok(empty_result());
    }
    let eval = |iv: &Interval| gk_interval(&f, iv);
    let tol = |v: f64| cfg.tolerance(v);
    let mut cells: Vec<Cell<Interval>> = Vec::new();
    let mut ext = Extension::new();
    let mut covered = 0.0;
    let mut quad_error = 0.0;
    for &w in &widths {
        let fresh = if covered == 0.0 {
            uniform(-w, w, 8)
        } else {
            let mut v = uniform(-w, -covered, 4);
            v.extend(uniform(covered, w, 4));
            v
        };
        cells.extend(evaluate(fresh, &eval)?);
        covered = w;
        let r = refine(&mut cells, &eval, &tol, cfg.max_panel_depth, MAX_PANELS_1D)?;
        quad_error = r.error;
        match ext.push(w, r.value, cfg) {
            Verdict::Converged => {
                return Ok(finish(r.value, quad_error.max(ext.last_increment), w, quad_error <= tol(r.value), false, ext));
            }
            Verdict::Diverged => return Ok(finish(r.value, quad_error, w, false, true, ext)),
            Verdict::Open => {}
        }
    }
    // Exterior through t = ±T/u, u in (0, 1].
    let t_max = covered;
    let base = ext.history.last().unwrap().1;
    let tail = |u: f64| {
        let t = t_max / u;
        (f(t) + f(-t)) * t_max / (u * u)
    };
    let tail_eval = |iv: &Interval| gk_interval(&tail, iv);
    let mut tail_cells = evaluate(uniform(0.0, 1.0, 4), &tail_eval)?;
    let tail_tol = |v: f64| 0.5 * cfg.tolerance(base + v);
    let r = refine(&mut tail_cells, &tail_eval, &tail_tol, cfg.max_panel_depth, MAX_PANELS_1D)?;
    let value = base + r.value;
    let error = quad_error + r.error;
    let converged = error <= cfg.tolerance(value);
    Ok(finish(value, error, f64::INFINITY, converged, false, ext))
}

fn finish(value: f64, error: f64, width: f64, converged: bool, diverged: bool, ext: Extension) -> IntegralResult {
    IntegralResult {
        value,
        error_estimate: error,
        final_half_width: width,
        converged,
        diverged,
        tail_history: ext.history,
    }
}

/// Rectangles tiling `[-w, w]² \ [-c, c]²`.
fn annulus(c: f64, w: f64) -> Vec<Rect> {
    let mut outer = uniform(-w, -c, 2);
    outer.extend(uniform(c, w, 2));
    let middle = uniform(-c, c, 4);
    let mut out = Vec::new();
    for x in outer.iter().chain(&middle) {
        for y in outer.iter().chain(&middle) {
            if x.a >= -c && x.b <= c && y.a >= -c && y.b <= c {
                continue;
            }
            out.push(Rect { x: *x, y: *y });
        }
    }
    out
}

/// `∫∫_{ℝ²} f(t1, t2) dt1 dt2`, truncated to growing squares.
pub fn integrate_plane<F>(f: F, cfg: &QuadConfig) -> Result<IntegralResult>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    cfg.validate()?;
    let widths = cfg.widths();
    if widths.is_empty() {
        return Ok(empty_result());
    }
    let eval = |r: &Rect| gk_rect(&f, r);
    let tol = |v: f64| cfg.tolerance(v);
    let mut cells: Vec<Cell<Rect>> = Vec::new();
    let mut ext = Extension::new();
    let mut covered = 0.0;
    let mut quad_error = 0.0;
    for &w in &widths {
        let fresh = if covered == 0.0 {
            let side = uniform(-w, w, 8);
            side.iter().flat_map(|x| side.iter().map(move |y| Rect { x: *x, y: *y })).collect()
        } else {
            annulus(covered, w)
        };
        cells.extend(evaluate(fresh, &eval)?);
        covered = w;
        let r = refine(&mut cells, &eval, &tol, cfg.max_panel_depth, MAX_PANELS_2D)?;
        quad_error = r.error;
        match ext.push(w, r.value, cfg) {
            Verdict::Converged => {
                return Ok(finish(r.value, quad_error.max(ext.last_increment), w, quad_error <= tol(r.value), false, ext));
            }
            Verdict::Diverged => return Ok(finish(r.value, quad_error, w, false, true, ext)),
            Verdict::Open => {}
        }
    }
    // Exterior of the square: strips map one coordinate through t = ±T/u,
    // corners map both.
    let t = covered;
    let base = ext.history.last().unwrap().1;
    let strip = |u: f64, s: f64| {
        let x = t / u;
        (f(x, s) + f(-x, s) + f(s, x) + f(s, -x)) * t / (u * u)
    };
    let corner = |u: f64, v: f64| {
        let (x, y) = (t / u, t / v);
        (f(x, y) + f(-x, y) + f(x, -y) + f(-x, -y)) * t * t / (u * u * v * v)
    };
    let unit = uniform(0.0, 1.0, 2);
    let across = uniform(-t, t, 8);
    let strip_eval = |r: &Rect| gk_rect(&strip, r);
    let corner_eval = |r: &Rect| gk_rect(&corner, r);
    let mut strip_cells =
        evaluate(unit.iter().flat_map(|x| across.iter().map(move |y| Rect { x: *x, y: *y })).collect(), &strip_eval)?;
    let mut corner_cells =
        evaluate(unit.iter().flat_map(|x| unit.iter().map(move |y| Rect { x: *x, y: *y })).collect(), &corner_eval)?;
    let tail_tol = |v: f64| 0.25 * cfg.tolerance(base + v);
    let rs = refine(&mut strip_cells, &strip_eval, &tail_tol, cfg.max_panel_depth, MAX_PANELS_2D)?;
    let rc = refine(&mut corner_cells, &corner_eval, &tail_tol, cfg.max_panel_depth, MAX_PANELS_2D)?;
    let value = base + rs.value + rc.value;
    let error = quad_error + rs.error + rc.error;
    let converged = error <= cfg.tolerance(value);
    Ok(finish(value, error, f64::INFINITY, converged, false, ext))
}
