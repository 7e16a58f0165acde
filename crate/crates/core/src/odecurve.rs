//! Root spectra, the canonical solution curves they define, analytic jets and
//! the pointwise curvature quantities κ and Θ.
//!
//! Every coordinate of a canonical curve is an atom `e^{at}`, `e^{at}cos(bt)`
//! or `e^{at}sin(bt)`. Jets keep the exponential factor `e^{at}` of each
//! coordinate as a separate log scale, so wedge coordinates come out with an
//! exact envelope and a bounded mantissa.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{pair_indices, scaled_sum, LogVector, ScaledScalar, ScaledVector};

/// Relative separation below which two roots count as repeated.
pub const ROOT_SEPARATION_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomKind {
    Exp,
    Cos,
    Sin,
}

/// One coordinate function: `e^{at}`, `e^{at}cos(bt)` or `e^{at}sin(bt)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub a: f64,
    pub b: f64,
    pub kind: AtomKind,
}

impl Atom {
    pub fn exp(a: f64) -> Self {
        Atom { a, b: 0.0, kind: AtomKind::Exp }
    }

    pub fn cos(a: f64, b: f64) -> Self {
        Atom { a, b, kind: AtomKind::Cos }
    }

    pub fn sin(a: f64, b: f64) -> Self {
        Atom { a, b, kind: AtomKind::Sin }
    }

    /// Mantissas of the value and first two derivatives, all relative to `e^{at}`.
    pub fn mantissas(&self, t: f64) -> [f64; 3] {
        let a = self.a;
        match self.kind {
            AtomKind::Exp => [1.0, a, a * a],
            AtomKind::Cos | AtomKind::Sin => {
                let b = self.b;
                let (s, c) = (b * t).sin_cos();
                // d/dt e^{at}(c, s) = e^{at}(ac - bs, as + bc)
                let (m0, m1) = if self.kind == AtomKind::Cos { (c, -s) } else { (s, c) };
                [m0, a * m0 + b * m1, (a * a - b * b) * m0 + 2.0 * a * b * m1]
            }
        }
    }
}

/// A validated set of simple roots of one characteristic polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSpectrum {
    real_roots: Vec<f64>,
    complex_pairs: Vec<(f64, f64)>,
}

fn too_close(x: (f64, f64), y: (f64, f64)) -> bool {
    let d = (x.0 - y.0).hypot(x.1 - y.1);
    let scale = 1f64.max(x.0.hypot(x.1)).max(y.0.hypot(y.1));
    d <= ROOT_SEPARATION_REL * scale
}

/// Checks simplicity, sorts, and builds a [`RootSpectrum`].
///
/// Real roots are sorted descending. Complex pairs `(a, b)` stand for
/// `a ± ib` and are sorted by descending `a`, ties by ascending `b`.
pub fn validate_spectrum(real_roots: &[f64], complex_pairs: &[(f64, f64)]) -> Result<RootSpectrum> {
    if real_roots.iter().chain(complex_pairs.iter().flat_map(|p| [&p.0, &p.1])).any(|x| !x.is_finite()) {
        return Err(Error::PreconditionViolation("roots must be finite".into()));
    }
    for &(re, im) in complex_pairs {
        if im <= 0.0 {
            return Err(Error::NonPositiveImaginary { re, im });
        }
    }
    let n = real_roots.len() + 2 * complex_pairs.len();
    if n < 2 {
        return Err(Error::TooSmall { n });
    }
    let points: Vec<(f64, f64)> =
        real_roots.iter().map(|&r| (r, 0.0)).chain(complex_pairs.iter().copied()).collect();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if too_close(points[i], points[j]) {
                let first = points[i].0;
                let second = points[j].0;
                return Err(Error::RepeatedRoot { first, second });
            }
        }
    }
    let mut real_roots = real_roots.to_vec();
    real_roots.sort_by(|x, y| y.total_cmp(x));
    let mut complex_pairs = complex_pairs.to_vec();
    complex_pairs.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.total_cmp(&y.1)));
    Ok(RootSpectrum { real_roots, complex_pairs })
}

impl RootSpectrum {
    pub fn real(roots: &[f64]) -> Result<Self> {
        validate_spectrum(roots, &[])
    }

    pub fn real_roots(&self) -> &[f64] {
        &self.real_roots
    }

    pub fn complex_pairs(&self) -> &[(f64, f64)] {
        &self.complex_pairs
    }

    pub fn dim(&self) -> usize {
        self.real_roots.len() + 2 * self.complex_pairs.len()
    }

    pub fn is_all_real(&self) -> bool {
        self.complex_pairs.is_empty()
    }

    /// Canonical basis: reals first, then `(cos, sin)` per complex pair.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out: Vec<Atom> = self.real_roots.iter().map(|&r| Atom::exp(r)).collect();
        for &(a, b) in &self.complex_pairs {
            out.push(Atom::cos(a, b));
            out.push(Atom::sin(a, b));
        }
        out
    }

    /// The spectrum of the curve `t -> σ(-t)`.
    pub fn negated(&self) -> RootSpectrum {
        let real: Vec<f64> = self.real_roots.iter().map(|r| -r).collect();
        let complex: Vec<(f64, f64)> = self.complex_pairs.iter().map(|&(a, b)| (-a, b)).collect();
        validate_spectrum(&real, &complex).expect("negation keeps roots simple")
    }
}

/// Dominance structure of a spectrum and the decay rates it implies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub real_dominant: bool,
    pub dominant_top: Option<f64>,
    pub dominant_bottom: Option<f64>,
    /// `min(s_1, -s_k)`: distance of the dominant roots from zero.
    pub epsilon1: Option<f64>,
    /// Spectral gap between the dominant roots and the rest of the spectrum.
    pub epsilon2: Option<f64>,
    pub subdominant_top: Option<f64>,
    pub subdominant_bottom: Option<f64>,
}

pub fn classify_dominance(spec: &RootSpectrum) -> DominanceReport {
    let reals = &spec.real_roots;
    let complex_re: Vec<f64> = spec.complex_pairs.iter().map(|p| p.0).collect();
    let top = reals.first().copied().filter(|&s| s > 0.0 && complex_re.iter().all(|&a| s > a));
    let bottom = reals.last().copied().filter(|&s| s < 0.0 && complex_re.iter().all(|&a| s < a));
    let real_dominant = top.is_some() && bottom.is_some() && reals.len() >= 2;

    // real parts of everything, descending
    let mut parts: Vec<f64> = reals.iter().copied().chain(complex_re.iter().copied()).collect();
    parts.sort_by(|x, y| y.total_cmp(x));
    parts.dedup();
    let subdominant_top = parts.get(1).copied();
    let subdominant_bottom = if parts.len() >= 2 { parts.get(parts.len() - 2).copied() } else { None };

    let (epsilon1, epsilon2) = match (real_dominant, top, bottom, subdominant_top, subdominant_bottom) {
        (true, Some(s1), Some(sk), Some(a1), Some(c1)) => (Some(s1.min(-sk)), Some((s1 - a1).min(c1 - sk))),
        _ => (None, None),
    };
    DominanceReport {
        real_dominant,
        dominant_top: top,
        dominant_bottom: bottom,
        epsilon1,
        epsilon2,
        subdominant_top,
        subdominant_bottom,
    }
}

/// A curve given directly by its coordinate atoms, without simplicity checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiteralCurve {
    atoms: Vec<Atom>,
}

impl LiteralCurve {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.len() < 2 {
            return Err(Error::TooSmall { n: atoms.len() });
        }
        if atoms.iter().any(|x| !x.a.is_finite() || !x.b.is_finite()) {
            return Err(Error::PreconditionViolation("atom parameters must be finite".into()));
        }
        Ok(LiteralCurve { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }
}

/// Either a validated spectrum or a literal list of atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Curve {
    Spectrum(RootSpectrum),
    Literal(LiteralCurve),
}

impl From<RootSpectrum> for Curve {
    fn from(s: RootSpectrum) -> Self {
        Curve::Spectrum(s)
    }
}

impl From<LiteralCurve> for Curve {
    fn from(c: LiteralCurve) -> Self {
        Curve::Literal(c)
    }
}

impl Curve {
    pub fn atoms(&self) -> Vec<Atom> {
        match self {
            Curve::Spectrum(s) => s.atoms(),
            Curve::Literal(c) => c.atoms.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Curve::Spectrum(s) => s.dim(),
            Curve::Literal(c) => c.atoms.len(),
        }
    }

    pub fn spectrum(&self) -> Option<&RootSpectrum> {
        match self {
            Curve::Spectrum(s) => Some(s),
            Curve::Literal(_) => None,
        }
    }

    /// Dominance of a spectrum curve; literal curves are never classified.
    pub fn dominance(&self) -> Option<DominanceReport> {
        self.spectrum().map(classify_dominance)
    }

    pub fn local_jet(&self, t: f64) -> LocalJet {
        match self {
            Curve::Literal(c) => LocalJet::new(&c.atoms, t),
            Curve::Spectrum(s) => {
                let n = s.dim();
                let mut jet = LocalJet { mantissa: Vec::with_capacity(n), logs: Vec::with_capacity(n) };
                let reals = s.real_roots.iter().map(|&r| Atom::exp(r));
                let pairs = s.complex_pairs.iter().flat_map(|&(a, b)| [Atom::cos(a, b), Atom::sin(a, b)]);
                for atom in reals.chain(pairs) {
                    jet.mantissa.push(atom.mantissas(t));
                    jet.logs.push(atom.a * t);
                }
                jet
            }
        }
    }
}

/// Jet with a separate log scale `a t` per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalJet {
    /// `[value, first, second]` derivative mantissas per coordinate.
    pub mantissa: Vec<[f64; 3]>,
    pub logs: Vec<f64>,
}

impl LocalJet {
    pub fn new(atoms: &[Atom], t: f64) -> Self {
        LocalJet {
            mantissa: atoms.iter().map(|x| x.mantissas(t)).collect(),
            logs: atoms.iter().map(|x| x.a * t).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.logs.len()
    }

    /// The `k`-th derivative (0, 1 or 2) as a per-coordinate scaled vector.
    pub fn derivative(&self, k: usize) -> LogVector {
        LogVector { mantissa: self.mantissa.iter().map(|m| m[k]).collect(), logs: self.logs.clone() }
    }

    /// `(p ∧ q, r ∧ s)` for derivative orders `p, q, r, s`.
    ///
    /// Each 2×2 coordinate minor is formed on the mantissas, sharing the exact
    /// envelope `e^{(a_i + a_j) t}`.
    pub fn pair_inner(&self, p: usize, q: usize, r: usize, s: usize) -> ScaledScalar {
        let m = &self.mantissa;
        let terms: Vec<(f64, f64)> = pair_indices(self.dim())
            .into_iter()
            .map(|[i, j]| {
                let x = m[i][p] * m[j][q] - m[j][p] * m[i][q];
                let y = m[i][r] * m[j][s] - m[j][r] * m[i][s];
                (x * y, 2.0 * (self.logs[i] + self.logs[j]))
            })
            .collect();
        scaled_sum(terms.into_iter())
    }

    /// `(σ^{(p)}, σ^{(q)})`.
    pub fn dot(&self, p: usize, q: usize) -> ScaledScalar {
        scaled_sum(self.mantissa.iter().zip(&self.logs).map(|(m, l)| (m[p] * m[q], 2.0 * l)))
    }

    pub fn to_curve_jet(&self) -> CurveJet {
        CurveJet {
            position: self.derivative(0).to_scaled(),
            velocity: self.derivative(1).to_scaled(),
            acceleration: self.derivative(2).to_scaled(),
        }
    }
}

/// `σ(t)`, `σ̇(t)`, `σ̈(t)`, each with a single shared scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveJet {
    pub position: ScaledVector,
    pub velocity: ScaledVector,
    pub acceleration: ScaledVector,
}

pub fn eval_jet(curve: &Curve, t: f64) -> CurveJet {
    curve.local_jet(t).to_curve_jet()
}

fn speed_sq(jet: &LocalJet, t: f64) -> Result<ScaledScalar> {
    let v = jet.dot(1, 1);
    if v.is_zero() {
        return Err(Error::ZeroVelocity { t });
    }
    Ok(v)
}

fn ratio(num: ScaledScalar, den: ScaledScalar) -> f64 {
    num.checked_div(den).map_or(f64::NAN, |q| q.to_f64())
}

/// `‖σ̇ ∧ σ̈‖ / ‖σ̇‖^p`, with `p = 3` for κ and `p = 2` for its dt-density.
fn kappa_with_power(curve: &Curve, t: f64, p: f64) -> Result<f64> {
    let jet = curve.local_jet(t);
    let vv = speed_sq(&jet, t)?;
    let w = jet.pair_inner(1, 2, 1, 2).sqrt();
    Ok(ratio(w, vv.abs_powf(0.5 * p)))
}

fn theta_with_power(curve: &Curve, t: f64, p: f64) -> Result<f64> {
    let jet = curve.local_jet(t);
    let vv = speed_sq(&jet, t)?;
    let w = jet.pair_inner(1, 0, 1, 0);
    if w.is_zero() {
        return Err(Error::DegenerateWedge { t });
    }
    let num = jet.pair_inner(1, 0, 1, 2);
    Ok(ratio(num, w.sqrt().mul(vv.abs_powf(0.5 * p))))
}

/// First curvature `κ(t) = ‖σ̇ ∧ σ̈‖ / ‖σ̇‖³`.
pub fn kappa_at(curve: &Curve, t: f64) -> Result<f64> {
    kappa_with_power(curve, t, 3.0)
}

/// `Θ(t) = (σ̇ ∧ σ, σ̇ ∧ σ̈) / (‖σ̇ ∧ σ‖ ‖σ̇‖³)`.
pub fn theta_at(curve: &Curve, t: f64) -> Result<f64> {
    theta_with_power(curve, t, 3.0)
}

/// `κ(t) ‖σ̇(t)‖`, the density of `κ ds` with respect to `dt`.
pub fn kappa_integrand(curve: &Curve, t: f64) -> Result<f64> {
    kappa_with_power(curve, t, 2.0)
}

/// `Θ(t) ‖σ̇(t)‖`, the density of `Θ ds` with respect to `dt`.
pub fn theta_integrand(curve: &Curve, t: f64) -> Result<f64> {
    theta_with_power(curve, t, 2.0)
}
