//! Pointwise geometry of the tensor-product surface `Σ(t1, t2) = σ1(t1) ⊗ σ2(t2)`.
//!
//! A coordinate of `Σ` is indexed by a pair `(u, a)` of curve coordinates and
//! every partial derivative `Σ_{/ij}` has entries `A[α][u] B[β][a] e^{λ_u + μ_a}`,
//! where `A`, `B` hold the curve jet mantissas and `λ`, `μ` the per-coordinate
//! logs. A blade coordinate on columns `c_1 < … < c_k` therefore carries the
//! exact envelope `e^{Σ λ + Σ μ}` and only its mantissa determinant has to be
//! computed. Those determinants are factored wherever the Kronecker structure
//! allows it, which keeps structural zeros exact and avoids the cancellation
//! that makes Gram determinants useless far out on the surface.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{scaled_sum, ScaledScalar, ScaledVector};
use crate::odecurve::{Curve, LocalJet};

/// Area densities below this value count as a degenerate metric.
pub const DEGENERATE_METRIC_MIN: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub curve1: Curve,
    pub curve2: Curve,
}

impl SurfaceSpec {
    pub fn new(curve1: Curve, curve2: Curve) -> Self {
        SurfaceSpec { curve1, curve2 }
    }

    pub fn n1(&self) -> usize {
        self.curve1.dim()
    }

    pub fn n2(&self) -> usize {
        self.curve2.dim()
    }

    pub fn dim(&self) -> usize {
        self.n1() * self.n2()
    }

    /// The surface with the two factors exchanged.
    pub fn swapped(&self) -> SurfaceSpec {
        SurfaceSpec { curve1: self.curve2.clone(), curve2: self.curve1.clone() }
    }
}

/// Partial derivatives and metric of `Σ` at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceJet {
    pub position: ScaledVector,
    pub p1: ScaledVector,
    pub p2: ScaledVector,
    pub p11: ScaledVector,
    pub p12: ScaledVector,
    pub p22: ScaledVector,
    pub g11: ScaledScalar,
    pub g12: ScaledScalar,
    pub g22: ScaledScalar,
    pub g: ScaledScalar,
}

fn kron(x: &ScaledVector, y: &ScaledVector) -> ScaledVector {
    let mut m = Vec::with_capacity(x.dim() * y.dim());
    for a in x.mantissa() {
        for b in y.mantissa() {
            m.push(a * b);
        }
    }
    ScaledVector::new(m, x.log_scale() + y.log_scale())
}

/// Jet-order pair `(α, β)`: derivative order on the first and second factor.
type Row = (usize, usize);

const S1: Row = (1, 0);
const S2: Row = (0, 1);
const S11: Row = (2, 0);
const S12: Row = (1, 1);
const S22: Row = (0, 2);

/// Mantissa tables of both factors at one point.
struct Factors {
    a: [Vec<f64>; 3],
    b: [Vec<f64>; 3],
    /// `(u, a)` for every flattened column.
    cols: Vec<(usize, usize)>,
    /// `λ_u + μ_a` for every flattened column.
    col_logs: Vec<f64>,
}

fn det2(m: [[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

impl Factors {
    fn new(x: &LocalJet, y: &LocalJet) -> Self {
        let table = |j: &LocalJet| -> [Vec<f64>; 3] { [0, 1, 2].map(|k| j.mantissa.iter().map(|m| m[k]).collect()) };
        let (n1, n2) = (x.dim(), y.dim());
        let mut cols = Vec::with_capacity(n1 * n2);
        let mut col_logs = Vec::with_capacity(n1 * n2);
        for u in 0..n1 {
            for a in 0..n2 {
                cols.push((u, a));
                col_logs.push(x.logs[u] + y.logs[a]);
            }
        }
        Factors { a: table(x), b: table(y), cols, col_logs }
    }

    fn dim(&self) -> usize {
        self.cols.len()
    }

    #[inline]
    fn entry(&self, r: Row, c: (usize, usize)) -> f64 {
        self.a[r.0][c.0] * self.b[r.1][c.1]
    }

    #[inline]
    fn minor2(&self, r: [Row; 2], c: [(usize, usize); 2]) -> f64 {
        let (a, b) = (&self.a, &self.b);
        let [(u1, a1), (u2, a2)] = c;
        let [(p1, q1), (p2, q2)] = r;
        let b_minor = || b[q1][a1] * b[q2][a2] - b[q1][a2] * b[q2][a1];
        let a_minor = || a[p1][u1] * a[p2][u2] - a[p1][u2] * a[p2][u1];
        if u1 == u2 {
            a[p1][u1] * a[p2][u1] * b_minor()
        } else if a1 == a2 {
            b[q1][a1] * b[q2][a1] * a_minor()
        } else if q1 == q2 {
            b[q1][a1] * b[q1][a2] * a_minor()
        } else if p1 == p2 {
            a[p1][u1] * a[p1][u2] * b_minor()
        } else {
            det2([[self.entry(r[0], c[0]), self.entry(r[0], c[1])], [self.entry(r[1], c[0]), self.entry(r[1], c[1])]])
        }
    }

    /// Dense `n × n` table of `minor2(rows, ·)` on column pairs `i < j`.
    fn pair_table(&self, rows: [Row; 2]) -> Vec<f64> {
        let n = self.dim();
        let mut t = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                t[i * n + j] = self.minor2(rows, [self.cols[i], self.cols[j]]);
            }
        }
        t
    }

    /// 3×3 mantissa determinant on columns `i < j < k`, expanded along row
    /// `expand` whose two companions share a jet order. `pairs` holds the
    /// companions' 2×2 minors from [`Factors::pair_table`].
    fn minor3(&self, r: [Row; 3], idx: [usize; 3], expand: usize, pairs: &[f64]) -> f64 {
        let c = idx.map(|i| self.cols[i]);
        if c[0].0 == c[1].0 && c[1].0 == c[2].0 {
            if r[0].1 == r[1].1 || r[0].1 == r[2].1 || r[1].1 == r[2].1 {
                return 0.0;
            }
            let u = c[0].0;
            let scale: f64 = r.iter().map(|row| self.a[row.0][u]).product();
            if scale == 0.0 {
                return 0.0;
            }
            let m = [0, 1, 2].map(|i| [0, 1, 2].map(|k| self.b[r[i].1][c[k].1]));
            return scale * det3(m);
        }
        if c[0].1 == c[1].1 && c[1].1 == c[2].1 {
            if r[0].0 == r[1].0 || r[0].0 == r[2].0 || r[1].0 == r[2].0 {
                return 0.0;
            }
            let a = c[0].1;
            let scale: f64 = r.iter().map(|row| self.b[row.1][a]).product();
            if scale == 0.0 {
                return 0.0;
            }
            let m = [0, 1, 2].map(|i| [0, 1, 2].map(|k| self.a[r[i].0][c[k].0]));
            return scale * det3(m);
        }
        let n = self.dim();
        const REST: [[usize; 2]; 3] = [[1, 2], [0, 2], [0, 1]];
        let mut sum = 0.0;
        for k in 0..3 {
            let e = self.entry(r[expand], c[k]);
            if e != 0.0 {
                let sign = if (expand + k) % 2 == 0 { 1.0 } else { -1.0 };
                let [j0, j1] = REST[k];
                sum += sign * e * pairs[idx[j0] * n + idx[j1]];
            }
        }
        sum
    }

    /// Coordinates of a 2-blade on all column pairs `i < j`, with their logs.
    fn blade2(&self, rows: [Row; 2]) -> Vec<(f64, f64)> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                let m = self.minor2(rows, [self.cols[i], self.cols[j]]);
                out.push((m, self.col_logs[i] + self.col_logs[j]));
            }
        }
        out
    }

    /// Mantissas of `L̃11`, `L̃12`, `L̃22` on every column triple, with logs.
    fn second_blades(&self) -> Vec<([f64; 3], f64)> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * (n - 1) * (n - 2) / 6);
        // rows (Σ1, Σ2, Σij); expand along the row outside the shared pair
        let (p11, p12, p22) = (self.pair_table([S1, S11]), self.pair_table([S1, S12]), self.pair_table([S2, S22]));
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let c = [i, j, k];
                    let l11 = self.minor3([S1, S2, S11], c, 1, &p11);
                    let l12 = self.minor3([S1, S2, S12], c, 1, &p12);
                    let l22 = self.minor3([S1, S2, S22], c, 0, &p22);
                    out.push(([l11, l12, l22], self.col_logs[i] + self.col_logs[j] + self.col_logs[k]));
                }
            }
        }
        out
    }
}

/// Everything the curvature kernels need at one point.
struct Point {
    x: LocalJet,
    y: LocalJet,
    f: Factors,
    /// Coordinates of `Σ_{/1} ∧ Σ_{/2}` with their logs.
    tangent: Vec<(f64, f64)>,
    g: ScaledScalar,
}

fn pairing(x: &[(f64, f64)], y: &[(f64, f64)], sign: f64) -> ScaledScalar {
    scaled_sum(x.iter().zip(y).map(|(a, b)| (sign * a.0 * b.0, a.1 + b.1)))
}

impl Point {
    fn new(s: &SurfaceSpec, t1: f64, t2: f64) -> Result<Point> {
        let x = s.curve1.local_jet(t1);
        let y = s.curve2.local_jet(t2);
        let f = Factors::new(&x, &y);
        let tangent = f.blade2([S1, S2]);
        let g = pairing(&tangent, &tangent, 1.0).sqrt();
        if g.is_zero() || g.ln_abs() < DEGENERATE_METRIC_MIN.ln() {
            return Err(Error::DegenerateMetric { t1, t2 });
        }
        Ok(Point { x, y, f, tangent, g })
    }

    /// `(g11, g12, g22)`, each a product of curve inner products.
    fn metric(&self) -> [ScaledScalar; 3] {
        let (x, y) = (&self.x, &self.y);
        [x.dot(1, 1).mul(y.dot(0, 0)), x.dot(1, 0).mul(y.dot(0, 1)), x.dot(0, 0).mul(y.dot(1, 1))]
    }

    /// `g² K = g^{-2} [(L̃11, L̃22) - (L̃12, L̃12)]` numerator.
    fn gauss_numerator(&self) -> ScaledScalar {
        let m = self.f.second_blades();
        scaled_sum(m.iter().map(|(d, l)| (d[0] * d[2] - d[1] * d[1], 2.0 * l)))
    }

    /// `‖𝔥‖` for `𝔥 = Σ1 ∧ Σ2 ∧ (g11 Σ22 + g22 Σ11 - 2 g12 Σ12)`.
    fn mean_blade_norm(&self) -> ScaledScalar {
        let m = self.f.second_blades();
        let [g11, g12, g22] = self.metric();
        let top = [g11, g12, g22]
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| x.log_scale())
            .fold(f64::NEG_INFINITY, f64::max);
        let w = |x: ScaledScalar| if x.is_zero() { 0.0 } else { x.mantissa() * (x.log_scale() - top).exp() };
        let (w11, w12, w22) = (w(g11), w(g12), w(g22));
        scaled_sum(m.iter().map(|(d, l)| {
            let h = w11 * d[2] + w22 * d[0] - 2.0 * w12 * d[1];
            (h * h, 2.0 * (l + top))
        }))
        .sqrt()
    }
}

fn quotient(num: ScaledScalar, den: ScaledScalar) -> f64 {
    num.checked_div(den).map_or(f64::NAN, |q| q.to_f64())
}

pub fn eval_surface_jet(s: &SurfaceSpec, t1: f64, t2: f64) -> Result<SurfaceJet> {
    let x = s.curve1.local_jet(t1).to_curve_jet();
    let y = s.curve2.local_jet(t2).to_curve_jet();
    let p = Point::new(s, t1, t2)?;
    let [g11, g12, g22] = p.metric();
    let g = p.g;
    Ok(SurfaceJet {
        position: kron(&x.position, &y.position),
        p1: kron(&x.velocity, &y.position),
        p2: kron(&x.position, &y.velocity),
        p11: kron(&x.acceleration, &y.position),
        p12: kron(&x.velocity, &y.velocity),
        p22: kron(&x.position, &y.acceleration),
        g11,
        g12,
        g22,
        g,
    })
}

/// Area density `g = ‖Σ_{/1} ∧ Σ_{/2}‖`, as a plain number.
pub fn area_density(s: &SurfaceSpec, t1: f64, t2: f64) -> Result<f64> {
    Ok(Point::new(s, t1, t2)?.g.to_f64())
}

/// `ln g`, finite even where `g` itself over- or underflows.
pub fn ln_area_density(s: &SurfaceSpec, t1: f64, t2: f64) -> Result<f64> {
    Ok(Point::new(s, t1, t2)?.g.ln_abs())
}

/// Gauss curvature `K = g^{-4} [(L̃11, L̃22) - (L̃12, L̃12)]`.
pub fn gauss_curvature_at(s: &SurfaceSpec, t1: f64, t2: f64) -> Result<f64> {
    let p = Point::new(s, t1, t2)?;
    Ok(quotient(p.gauss_numerator(), p.g.powi(4)))
}

/// `g K`, the density of `K dvol` with respect to `dt1 dt2`.
pub fn gauss_density_at(s: &SurfaceSpec, t1: f64, t2: f64) -> Result<f64> {
    let p = Point::new(s, t1, t2)?;
    Ok(quotient(p.gauss_numerator(), p.g.powi(3)))
}

/// Norm of the mean curvature vector, `g^{-3} ‖𝔥‖`.
pub fn mean_curvature_norm_at(s: &SurfaceSpec, t1: f64, t2: f64) -> Result<f64> {
    let p = Point::new(s, t1, t2)?;
    Ok(quotient(p.mean_blade_norm(), p.g.powi(3)))
}

/// `‖H‖^p g`, evaluated without forming `‖H‖` or `g` separately.
pub fn mean_curvature_power_density(s: &SurfaceSpec, t1: f64, t2: f64, power: f64) -> Result<f64> {
    let p = Point::new(s, t1, t2)?;
    let h = p.mean_blade_norm();
    if h.is_zero() {
        return Ok(0.0);
    }
    let ln = power * (h.ln_abs() - 3.0 * p.g.ln_abs()) + p.g.ln_abs();
    Ok(ScaledScalar::from_ln(ln, 1.0).to_f64())
}

/// Sides of the square `[-r, r]²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Edge {
    /// `t2 = +r`, traversed in `t1`.
    Top,
    /// `t2 = -r`, traversed in `t1`.
    Bottom,
    /// `t1 = +r`, traversed in `t2`.
    Right,
    /// `t1 = -r`, traversed in `t2`.
    Left,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Top, Edge::Bottom, Edge::Right, Edge::Left];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormalSide {
    Inward,
    Outward,
}

/// Geodesic curvature density `κ_g ds/dt` of a boundary curve of `[-r, r]²`,
/// with the inward in-surface normal.
pub fn geodesic_curvature_edge(s: &SurfaceSpec, edge: Edge, r: f64, t: f64) -> Result<f64> {
    geodesic_curvature_edge_with_normal(s, edge, r, t, NormalSide::Inward)
}

pub fn geodesic_curvature_edge_with_normal(
    s: &SurfaceSpec,
    edge: Edge,
    r: f64,
    t: f64,
    side: NormalSide,
) -> Result<f64> {
    let (t1, t2) = match edge {
        Edge::Top => (t, r),
        Edge::Bottom => (t, -r),
        Edge::Right => (r, t),
        Edge::Left => (-r, t),
    };
    let p = Point::new(s, t1, t2)?;
    // The raw pairing uses the normal pointing towards increasing t2 (resp. t1).
    let (num, speed_sq, toward_inside) = match edge {
        Edge::Top | Edge::Bottom => (pairing(&p.tangent, &p.f.blade2([S1, S11]), 1.0), p.metric()[0], edge == Edge::Bottom),
        // Σ2 ∧ Σ1 = -(Σ1 ∧ Σ2)
        Edge::Right | Edge::Left => (pairing(&p.tangent, &p.f.blade2([S2, S22]), -1.0), p.metric()[2], edge == Edge::Left),
    };
    let inward = if toward_inside { 1.0 } else { -1.0 };
    let side = match side {
        NormalSide::Inward => 1.0,
        NormalSide::Outward => -1.0,
    };
    Ok(inward * side * quotient(num, p.g.mul(speed_sq)))
}

/// `g³ ‖H‖ / ℋ` with the three-term exponential envelope `ℋ` built from the
/// top roots of both factors. Only meaningful in the first quadrant for
/// all-real spectra with at least three roots and two positive ones.
pub fn h_ratio_diagnostic(s: &SurfaceSpec, t1: f64, t2: f64) -> Result<f64> {
    if t1 < 0.0 || t2 < 0.0 {
        return Err(Error::PreconditionViolation("the envelope is defined for t1, t2 >= 0".into()));
    }
    let top = |c: &Curve, name: &str| -> Result<[f64; 3]> {
        let spec = c
            .spectrum()
            .filter(|x| x.is_all_real() && x.dim() >= 3)
            .ok_or_else(|| Error::PreconditionViolation(format!("{name} needs at least three real roots")))?;
        let r = spec.real_roots();
        if !(r[1] > 0.0) {
            return Err(Error::PreconditionViolation(format!("{name} needs two positive roots")));
        }
        Ok([r[0], r[1], r[2]])
    };
    let [r1, r2, r3] = top(&s.curve1, "curve1")?;
    let [s1, s2, s3] = top(&s.curve2, "curve2")?;
    let envelope = scaled_sum(
        [
            (1.0, 5.0 * r1 * t1 + (3.0 * s1 + s2 + s3) * t2),
            (1.0, (3.0 * r1 + r2 + r3) * t1 + 5.0 * s1 * t2),
            (1.0, (4.0 * r1 + r2) * t1 + (4.0 * s1 + s2) * t2),
        ]
        .into_iter(),
    );
    let p = Point::new(s, t1, t2)?;
    Ok(quotient(p.mean_blade_norm(), envelope))
}
