//! Scale-aware scalars, vectors and low-grade blades.
//!
//! Coordinates of the curves handled by this crate behave like `e^{r t}` and
//! easily leave the `f64` range, so every quantity here carries a separate
//! natural-log scale. Two routes to blade inner products are provided:
//!
//! * Gram determinants on [`ScaledVector`]s (`gram_inner_pair`,
//!   `gram_inner_triple`, `wedge2_norm`, `wedge3_norm`), which never form
//!   blade coordinates;
//! * explicit [`Blade`] coordinates built from [`LogVector`]s, where every
//!   coordinate keeps its own log scale. The curvature kernels use this route
//!   because the Gram route loses all relative precision once the vectors
//!   become nearly dependent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative size below which a negative Gram determinant is treated as zero.
pub const GRAM_CLAMP_REL: f64 = 1e-13;

const LN_2: f64 = std::f64::consts::LN_2;

/// Splits a finite non-zero `x` into `m * 2^e` with `|m|` in `[1/2, 1)`.
fn frexp(x: f64) -> (f64, i32) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    if exp == 0 {
        // subnormal
        let (m, e) = frexp(x * f64::powi(2.0, 54));
        return (m, e - 54);
    }
    let m = f64::from_bits((bits & !(0x7ff_u64 << 52)) | (1022_u64 << 52));
    (m, exp - 1022)
}

/// `x * 2^e` without intermediate overflow for the exponents used here.
fn ldexp(x: f64, e: i32) -> f64 {
    if e > 1000 {
        ldexp(x * f64::powi(2.0, 1000), e - 1000)
    } else if e < -1000 {
        ldexp(x * f64::powi(2.0, -1000), e + 1000)
    } else {
        x * f64::powi(2.0, e)
    }
}

/// A real number `mantissa * e^{log_scale}`.
///
/// Normalized so that `|mantissa|` lies in `[1, 2)`, or the value is exactly
/// zero with `log_scale == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledScalar {
    mantissa: f64,
    log_scale: f64,
}

impl ScaledScalar {
    pub const ZERO: ScaledScalar = ScaledScalar { mantissa: 0.0, log_scale: 0.0 };
    pub const ONE: ScaledScalar = ScaledScalar { mantissa: 1.0, log_scale: 0.0 };

    pub fn new(mantissa: f64, log_scale: f64) -> Self {
        if mantissa == 0.0 || !log_scale.is_finite() && log_scale < 0.0 {
            return Self::ZERO;
        }
        let (m, e) = frexp(mantissa);
        let e = e - 1;
        let log_scale = if e == 0 { log_scale } else { log_scale + e as f64 * LN_2 };
        ScaledScalar { mantissa: 2.0 * m, log_scale }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(x, 0.0)
    }

    /// `sign * e^{ln_abs}`.
    pub fn from_ln(ln_abs: f64, sign: f64) -> Self {
        Self::new(sign.signum(), ln_abs)
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.mantissa.is_finite() && self.log_scale.is_finite()
    }

    pub fn signum(&self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    /// `ln |x|`; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.abs().ln() + self.log_scale
        }
    }

    /// Plain value; saturates to `±inf` or `0` outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.log_scale > 710.0 {
            return self.mantissa.signum() * f64::INFINITY;
        }
        if self.log_scale < -800.0 {
            return 0.0;
        }
        self.mantissa * self.log_scale.exp()
    }

    pub fn abs(self) -> Self {
        ScaledScalar { mantissa: self.mantissa.abs(), log_scale: self.log_scale }
    }

    pub fn neg(self) -> Self {
        ScaledScalar { mantissa: -self.mantissa, log_scale: self.log_scale }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.mantissa * other.mantissa, self.log_scale + other.log_scale)
    }

    pub fn mul_f64(self, x: f64) -> Self {
        Self::new(self.mantissa * x, self.log_scale)
    }

    /// Quotient; `None` when the divisor is zero.
    pub fn checked_div(self, other: Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::ZERO);
        }
        Some(Self::new(self.mantissa / other.mantissa, self.log_scale - other.log_scale))
    }

    pub fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.log_scale >= other.log_scale { (self, other) } else { (other, self) };
        let m = big.mantissa + small.mantissa * (small.log_scale - big.log_scale).exp();
        Self::new(m, big.log_scale)
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    /// Square root of a non-negative value; negative inputs give NaN.
    pub fn sqrt(self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.mantissa.sqrt(), 0.5 * self.log_scale)
    }

    /// `|x|^p` for `x != 0`.
    pub fn abs_powf(self, p: f64) -> Self {
        if self.is_zero() {
            return if p == 0.0 { Self::ONE } else { Self::ZERO };
        }
        Self::from_ln(p * self.ln_abs(), 1.0)
    }

    pub fn powi(self, k: i32) -> Self {
        let mut out = Self::ONE;
        for _ in 0..k.unsigned_abs() {
            out = out.mul(self);
        }
        if k < 0 {
            Self::ONE.checked_div(out).unwrap_or(Self::new(f64::INFINITY, 0.0))
        } else {
            out
        }
    }
}

/// Sum of `mantissa_i * e^{log_i}` over the given terms.
///
/// Terms with a zero mantissa are skipped before choosing the common scale, so
/// an exactly vanishing dominant term cannot wipe out smaller ones.
pub fn scaled_sum(terms: impl Iterator<Item = (f64, f64)> + Clone) -> ScaledScalar {
    let top = terms
        .clone()
        .filter(|&(m, _)| m != 0.0)
        .map(|(_, l)| l)
        .fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return ScaledScalar::ZERO;
    }
    let sum: f64 = terms.filter(|&(m, _)| m != 0.0).map(|(m, l)| m * (l - top).exp()).sum();
    ScaledScalar::new(sum, top)
}

/// A vector `e^{log_scale} * mantissa` with one shared scale.
///
/// The largest mantissa entry lies in `[1/2, 1)` unless the vector is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledVector {
    mantissa: Vec<f64>,
    log_scale: f64,
}

impl ScaledVector {
    pub fn new(mantissa: Vec<f64>, log_scale: f64) -> Self {
        let top = mantissa.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        if top == 0.0 {
            return ScaledVector { mantissa: vec![0.0; mantissa.len()], log_scale: 0.0 };
        }
        let (_, e) = frexp(top);
        let mantissa = mantissa.into_iter().map(|x| ldexp(x, -e)).collect();
        ScaledVector { mantissa, log_scale: log_scale + e as f64 * LN_2 }
    }

    pub fn from_values(values: &[f64]) -> Self {
        Self::new(values.to_vec(), 0.0)
    }

    pub fn dim(&self) -> usize {
        self.mantissa.len()
    }

    pub fn mantissa(&self) -> &[f64] {
        &self.mantissa
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.iter().all(|&x| x == 0.0)
    }

    /// Coordinates as plain numbers (may overflow).
    pub fn to_values(&self) -> Vec<f64> {
        let s = ScaledScalar::new(1.0, self.log_scale);
        self.mantissa.iter().map(|&m| s.mul_f64(m).to_f64()).collect()
    }

    /// `c * e^{-ln c}` rescaling; the represented vector is unchanged.
    pub fn rescaled(&self, c: f64) -> Self {
        ScaledVector {
            mantissa: self.mantissa.iter().map(|x| x * c).collect(),
            log_scale: self.log_scale - c.ln(),
        }
    }

    pub fn to_log_vector(&self) -> LogVector {
        LogVector {
            mantissa: self.mantissa.clone(),
            logs: vec![self.log_scale; self.mantissa.len()],
        }
    }
}

fn check_dims(vs: &[&ScaledVector]) -> Result<usize> {
    let n = vs[0].dim();
    if let Some(bad) = vs.iter().find(|v| v.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
    }
    Ok(n)
}

fn mantissa_dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Unevaluated sum `hi + lo` carrying about 106 bits.
///
/// Gram determinants of nearly dependent vectors cancel to roughly the square
/// of their condition number, so the entries and the determinant are formed
/// in this wider format and rounded once at the end.
#[derive(Debug, Clone, Copy, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
    }

    fn prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        Dd { hi: p, lo: a.mul_add(b, -p) }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let t = Dd::two_sum(self.lo, o.lo);
        let u = Dd::two_sum(s.hi, s.lo + t.hi);
        Dd::two_sum(u.hi, u.lo + t.lo)
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    fn mul(self, o: Dd) -> Dd {
        let p = Dd::prod(self.hi, o.hi);
        Dd::two_sum(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

fn dd_dot(u: &[f64], v: &[f64]) -> Dd {
    u.iter().zip(v).fold(Dd::default(), |acc, (a, b)| acc.add(Dd::prod(*a, *b)))
}

fn dd_det2(m: [[Dd; 2]; 2]) -> f64 {
    m[0][0].mul(m[1][1]).sub(m[0][1].mul(m[1][0])).to_f64()
}

fn dd_det3(m: [[Dd; 3]; 3]) -> f64 {
    let minor = |c0: usize, c1: usize| m[1][c0].mul(m[2][c1]).sub(m[1][c1].mul(m[2][c0]));
    m[0][0].mul(minor(1, 2)).sub(m[0][1].mul(minor(0, 2))).add(m[0][2].mul(minor(0, 1))).to_f64()
}

fn dd_gram<const K: usize>(u: [&ScaledVector; K], v: [&ScaledVector; K]) -> [[Dd; K]; K] {
    let mut m = [[Dd::default(); K]; K];
    for i in 0..K {
        for j in 0..K {
            m[i][j] = dd_dot(&u[i].mantissa, &v[j].mantissa);
        }
    }
    m
}

/// Euclidean inner product.
pub fn dot(u: &ScaledVector, v: &ScaledVector) -> Result<ScaledScalar> {
    check_dims(&[u, v])?;
    Ok(ScaledScalar::new(mantissa_dot(&u.mantissa, &v.mantissa), u.log_scale + v.log_scale))
}

/// `(u1 ∧ u2, v1 ∧ v2) = det[(u_i, v_j)]`.
pub fn gram_inner_pair(
    u1: &ScaledVector,
    u2: &ScaledVector,
    v1: &ScaledVector,
    v2: &ScaledVector,
) -> Result<ScaledScalar> {
    check_dims(&[u1, u2, v1, v2])?;
    let us = [u1, u2];
    let vs = [v1, v2];
    let log = us.iter().chain(vs.iter()).map(|v| v.log_scale).sum();
    Ok(ScaledScalar::new(dd_det2(dd_gram(us, vs)), log))
}

/// `(u1 ∧ u2 ∧ u3, v1 ∧ v2 ∧ v3)` as a 3×3 Gram determinant.
pub fn gram_inner_triple(u: [&ScaledVector; 3], v: [&ScaledVector; 3]) -> Result<ScaledScalar> {
    check_dims(&[u[0], u[1], u[2], v[0], v[1], v[2]])?;
    let log = u.iter().chain(v.iter()).map(|x| x.log_scale).sum();
    Ok(ScaledScalar::new(dd_det3(dd_gram(u, v)), log))
}

/// Clamps a Gram norm-square that rounding pushed below zero. Values that are
/// tiny relative to the Hadamard bound are rounding noise either way.
fn clamp_norm_sq(det: f64, hadamard: f64) -> f64 {
    if det < 0.0 || det.abs() <= GRAM_CLAMP_REL * hadamard * f64::EPSILON {
        0.0
    } else {
        det
    }
}

/// `‖u ∧ v‖` via the 2×2 Gram determinant.
pub fn wedge2_norm(u: &ScaledVector, v: &ScaledVector) -> Result<ScaledScalar> {
    check_dims(&[u, v])?;
    let m = dd_gram([u, v], [u, v]);
    let det = clamp_norm_sq(dd_det2(m), m[0][0].hi * m[1][1].hi);
    Ok(ScaledScalar::new(det, 2.0 * (u.log_scale + v.log_scale)).sqrt())
}

/// `‖u1 ∧ u2 ∧ u3‖` via the 3×3 Gram determinant.
pub fn wedge3_norm(u1: &ScaledVector, u2: &ScaledVector, u3: &ScaledVector) -> Result<ScaledScalar> {
    check_dims(&[u1, u2, u3])?;
    let us = [u1, u2, u3];
    let m = dd_gram(us, us);
    let det = clamp_norm_sq(dd_det3(m), m[0][0].hi * m[1][1].hi * m[2][2].hi);
    let log = 2.0 * us.iter().map(|x| x.log_scale).sum::<f64>();
    Ok(ScaledScalar::new(det, log).sqrt())
}

/// A vector whose coordinates carry individual log scales:
/// `x_i = mantissa[i] * e^{logs[i]}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogVector {
    pub mantissa: Vec<f64>,
    pub logs: Vec<f64>,
}

impl LogVector {
    pub fn dim(&self) -> usize {
        self.mantissa.len()
    }

    pub fn dot(&self, other: &LogVector) -> ScaledScalar {
        scaled_sum(
            self.mantissa
                .iter()
                .zip(&other.mantissa)
                .zip(self.logs.iter().zip(&other.logs))
                .map(|((a, b), (la, lb))| (a * b, la + lb)),
        )
    }

    pub fn norm(&self) -> ScaledScalar {
        self.dot(self).sqrt()
    }

    /// Collapses to a single shared scale; coordinates far below the largest
    /// one may underflow to zero.
    pub fn to_scaled(&self) -> ScaledVector {
        let top = self
            .mantissa
            .iter()
            .zip(&self.logs)
            .filter(|(m, _)| **m != 0.0)
            .map(|(_, l)| *l)
            .fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return ScaledVector::new(vec![0.0; self.dim()], 0.0);
        }
        let mantissa = self.mantissa.iter().zip(&self.logs).map(|(m, l)| m * (l - top).exp()).collect();
        ScaledVector::new(mantissa, top)
    }
}

/// Lexicographic list of index pairs `i < j < n`.
pub fn pair_indices(n: usize) -> Vec<[usize; 2]> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push([i, j]);
        }
    }
    out
}

/// Lexicographic list of index triples `i < j < k < n`.
pub fn triple_indices(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push([i, j, k]);
            }
        }
    }
    out
}

/// Coordinates of a 2- or 3-blade on the lexicographic exterior basis of
/// `ℝⁿ`, each coordinate with its own log scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Blade {
    pub grade: usize,
    pub dim: usize,
    pub coords: Vec<f64>,
    pub logs: Vec<f64>,
}

impl Blade {
    /// Inner product induced by the Euclidean metric; both blades must use the
    /// same basis.
    pub fn inner(&self, other: &Blade) -> Result<ScaledScalar> {
        if self.grade != other.grade || self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.coords.len(), found: other.coords.len() });
        }
        Ok(scaled_sum(
            self.coords
                .iter()
                .zip(&other.coords)
                .zip(self.logs.iter().zip(&other.logs))
                .map(|((a, b), (la, lb))| (a * b, la + lb)),
        ))
    }

    pub fn norm(&self) -> ScaledScalar {
        scaled_sum(self.coords.iter().zip(&self.logs).map(|(a, l)| (a * a, 2.0 * l))).sqrt()
    }

    /// `Σ c_k B_k` for blades of equal grade and dimension.
    pub fn linear_combination(terms: &[(ScaledScalar, &Blade)]) -> Result<Blade> {
        let first = terms.first().ok_or(Error::DimensionMismatch { expected: 1, found: 0 })?.1;
        for (_, b) in terms {
            if b.grade != first.grade || b.dim != first.dim {
                return Err(Error::DimensionMismatch { expected: first.coords.len(), found: b.coords.len() });
            }
        }
        let mut coords = Vec::with_capacity(first.coords.len());
        let mut logs = Vec::with_capacity(first.coords.len());
        for idx in 0..first.coords.len() {
            let v = scaled_sum(terms.iter().map(|(c, b)| (c.mantissa() * b.coords[idx], c.log_scale() + b.logs[idx])));
            coords.push(v.mantissa());
            logs.push(v.log_scale());
        }
        Ok(Blade { grade: first.grade, dim: first.dim, coords, logs })
    }
}

/// Explicit coordinates of `u ∧ v`.
pub fn wedge2(u: &LogVector, v: &LogVector) -> Result<Blade> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: v.dim() });
    }
    let n = u.dim();
    let pairs = pair_indices(n);
    let mut coords = Vec::with_capacity(pairs.len());
    let mut logs = Vec::with_capacity(pairs.len());
    for [i, j] in pairs {
        let c = scaled_sum(
            [(u.mantissa[i] * v.mantissa[j], u.logs[i] + v.logs[j]), (-u.mantissa[j] * v.mantissa[i], u.logs[j] + v.logs[i])]
                .into_iter(),
        );
        coords.push(c.mantissa());
        logs.push(c.log_scale());
    }
    Ok(Blade { grade: 2, dim: n, coords, logs })
}

/// Explicit coordinates of `u ∧ v ∧ w`.
pub fn wedge3(u: &LogVector, v: &LogVector, w: &LogVector) -> Result<Blade> {
    let n = u.dim();
    for x in [v, w] {
        if x.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.dim() });
        }
    }
    let rows = [u, v, w];
    let triples = triple_indices(n);
    let mut coords = Vec::with_capacity(triples.len());
    let mut logs = Vec::with_capacity(triples.len());
    const PERMS: [([usize; 3], f64); 6] = [
        ([0, 1, 2], 1.0),
        ([1, 2, 0], 1.0),
        ([2, 0, 1], 1.0),
        ([0, 2, 1], -1.0),
        ([2, 1, 0], -1.0),
        ([1, 0, 2], -1.0),
    ];
    for cols in triples {
        let v = scaled_sum(PERMS.iter().map(|(p, sign)| {
            let mut m = *sign;
            let mut l = 0.0;
            for (r, &c) in p.iter().enumerate() {
                m *= rows[r].mantissa[cols[c]];
                l += rows[r].logs[cols[c]];
            }
            (m, l)
        }));
        coords.push(v.mantissa());
        logs.push(v.log_scale());
    }
    Ok(Blade { grade: 3, dim: n, coords, logs })
}
