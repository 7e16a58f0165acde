//! Curve and surface specifications as accepted on the command line.

use odesurf::odecurve::{validate_spectrum, Atom, AtomKind, Curve, LiteralCurve};
use odesurf::surface::SurfaceSpec;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::CliError;

/// `{"real": [...], "complex": [[a, b], ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootsSpec {
    #[serde(default)]
    pub real: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub complex: Vec<[f64; 2]>,
}

/// `{"atoms": [[a, b, "exp" | "cos" | "sin"], ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomsSpec {
    pub atoms: Vec<(f64, f64, AtomKind)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveSpec {
    Roots(RootsSpec),
    Atoms(AtomsSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpecJson {
    pub curve1: CurveSpec,
    pub curve2: CurveSpec,
}

impl CurveSpec {
    pub fn real(roots: &[f64]) -> Self {
        CurveSpec::Roots(RootsSpec { real: roots.to_vec(), complex: vec![] })
    }

    pub fn atoms(atoms: &[Atom]) -> Self {
        CurveSpec::Atoms(AtomsSpec { atoms: atoms.iter().map(|a| (a.a, a.b, a.kind)).collect() })
    }

    pub fn build(&self) -> Result<Curve, CliError> {
        match self {
            CurveSpec::Roots(r) => {
                let pairs: Vec<(f64, f64)> = r.complex.iter().map(|&[a, b]| (a, b)).collect();
                Ok(validate_spectrum(&r.real, &pairs)?.into())
            }
            CurveSpec::Atoms(a) => {
                let atoms = a.atoms.iter().map(|&(a, b, kind)| Atom { a, b, kind }).collect();
                Ok(LiteralCurve::new(atoms)?.into())
            }
        }
    }
}

impl SurfaceSpecJson {
    pub fn new(curve1: CurveSpec, curve2: CurveSpec) -> Self {
        SurfaceSpecJson { curve1, curve2 }
    }

    pub fn build(&self) -> Result<SurfaceSpec, CliError> {
        Ok(SurfaceSpec::new(self.curve1.build()?, self.curve2.build()?))
    }
}

/// Inline JSON when the argument starts with `{`, a file path otherwise.
fn spec_text(arg: &str) -> Result<String, CliError> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::Io(format!("{arg}: {e}")))
    }
}

pub fn parse_curve(arg: &str) -> Result<CurveSpec, CliError> {
    let text = spec_text(arg)?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::MalformedSpec(format!(
            "expected {{\"real\": [...], \"complex\": [[a, b], ...]}} or {{\"atoms\": [[a, b, kind], ...]}}: {e}"
        ))
    })
}

pub fn parse_surface(arg: &str) -> Result<SurfaceSpecJson, CliError> {
    let text = spec_text(arg)?;
    serde_json::from_str(&text).map_err(|e| CliError::MalformedSpec(format!("expected {{\"curve1\": ..., \"curve2\": ...}}: {e}")))
}
