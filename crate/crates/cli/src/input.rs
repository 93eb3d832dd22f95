//! JSON state documents.
//!
//! One document per file, tagged by `kind`:
//!
//! ```json
//! {"kind": "ket", "dims": [2, 2], "amplitudes": [[0.7071067811865476, 0], [0, 0], [0, 0], [0.7071067811865476, 0]]}
//! {"kind": "mixture", "dims": [2, 2], "components": [{"weight": 0.5, "amplitudes": [[1, 0], [0, 0], [0, 0], [0, 0]]}, ...]}
//! {"kind": "family", "base": {"kind": "builtin", "name": "ghz", "n": 3, "d": 3}, "x": 0.1}
//! {"kind": "builtin", "name": "white-noise", "base": {...}, "x": 0.2}
//! ```
//!
//! Complex numbers are `[re, im]` pairs. Unknown fields are rejected.

use std::fmt::Write as _;
use std::path::Path;

use gme_core::states::{
    dct_state, ghz, w_state, white_noise_family, DensityMatrix, KetVector, MixtureSpec, NoisyFamily,
};
use gme_core::tensor::SystemShape;
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateDoc {
    Ket {
        dims: Vec<usize>,
        amplitudes: Vec<[f64; 2]>,
        #[serde(default)]
        normalize: bool,
    },
    Mixture {
        dims: Vec<usize>,
        components: Vec<ComponentDoc>,
        /// Rescales every component ket to unit norm; weights are never rescaled.
        #[serde(default)]
        normalize: bool,
    },
    Family {
        #[serde(default)]
        dims: Option<Vec<usize>>,
        base: Box<StateDoc>,
        #[serde(default)]
        x: Option<f64>,
        #[serde(default)]
        label: Option<String>,
    },
    Builtin(BuiltinDoc),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub weight: f64,
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinDoc {
    pub name: String,
    #[serde(default)]
    pub dims: Option<Vec<usize>>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub d: Option<usize>,
    #[serde(default)]
    pub x: Option<f64>,
    #[serde(default)]
    pub base: Option<Box<StateDoc>>,
    #[serde(default)]
    pub lambda0_plus: Option<f64>,
    #[serde(default)]
    pub lambda0_minus: Option<f64>,
    #[serde(default)]
    pub lambda: Option<[f64; 3]>,
}

/// A single state, kept pure when the document describes one.
#[derive(Clone, Debug)]
pub enum State {
    Pure(KetVector),
    Mixed(DensityMatrix),
}

impl State {
    pub fn density(&self) -> DensityMatrix {
        match self {
            State::Pure(k) => k.to_density(),
            State::Mixed(m) => m.clone(),
        }
    }

    pub fn shape(&self) -> &SystemShape {
        match self {
            State::Pure(k) => k.shape(),
            State::Mixed(m) => m.shape(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Parsed {
    State(State),
    /// White-noise family; `x` is set when the document pins a member.
    Family {
        family: NoisyFamily,
        x: Option<f64>,
    },
}

impl Parsed {
    /// The concrete state a document names, resolving a family at its `x`.
    pub fn into_state(self) -> Result<State, CliError> {
        match self {
            Parsed::State(s) => Ok(s),
            Parsed::Family { family, x: Some(x) } => Ok(State::Mixed(family.member(x)?)),
            Parsed::Family { x: None, .. } => Err(CliError::Input(
                "family document has no `x`; a single state needs a fixed mixing parameter".into(),
            )),
        }
    }
}

pub fn read_document(path: &Path) -> Result<StateDoc, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text)
}

pub fn parse_document(text: &str) -> Result<StateDoc, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid state document: {e}")))
}

fn amplitudes(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect()
}

fn ket(shape: &SystemShape, pairs: &[[f64; 2]], normalize: bool) -> Result<KetVector, CliError> {
    let amps = amplitudes(pairs);
    let k = if normalize {
        KetVector::normalized(shape.clone(), amps)
    } else {
        KetVector::new(shape.clone(), amps)
    };
    Ok(k?)
}

fn check_dims(declared: &Option<Vec<usize>>, actual: &SystemShape) -> Result<(), CliError> {
    match declared {
        Some(d) if d.as_slice() != actual.dims() => Err(CliError::Input(format!(
            "declared dims {d:?} do not match the constructed shape {actual}"
        ))),
        _ => Ok(()),
    }
}

impl StateDoc {
    pub fn resolve(&self) -> Result<Parsed, CliError> {
        match self {
            StateDoc::Ket {
                dims,
                amplitudes,
                normalize,
            } => {
                let shape = SystemShape::new(dims.clone())?;
                Ok(Parsed::State(State::Pure(ket(
                    &shape, amplitudes, *normalize,
                )?)))
            }
            StateDoc::Mixture {
                dims,
                components,
                normalize,
            } => {
                let shape = SystemShape::new(dims.clone())?;
                let comps = components
                    .iter()
                    .map(|c| Ok((c.weight, ket(&shape, &c.amplitudes, *normalize)?)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(Parsed::State(State::Mixed(
                    MixtureSpec::new(comps)?.to_density(),
                )))
            }
            StateDoc::Family {
                dims,
                base,
                x,
                label,
            } => {
                let base = base.resolve()?.into_state()?.density();
                check_dims(dims, base.shape())?;
                let mut family = white_noise_family(base);
                if let Some(l) = label {
                    family = family.with_label(l.clone());
                }
                if let Some(x) = x {
                    family.member(*x)?;
                }
                Ok(Parsed::Family { family, x: *x })
            }
            StateDoc::Builtin(b) => b.resolve(),
        }
    }

    /// One-line summary of the document for report headers.
    pub fn describe(&self) -> String {
        match self {
            StateDoc::Ket {
                dims, normalize, ..
            } => {
                let mut s = format!("ket dims={}", dims_str(dims));
                if *normalize {
                    s.push_str(" (normalized)");
                }
                s
            }
            StateDoc::Mixture {
                dims, components, ..
            } => format!(
                "mixture of {} components dims={}",
                components.len(),
                dims_str(dims)
            ),
            StateDoc::Family { base, x, .. } => {
                let mut s = format!("white-noise family over [{}]", base.describe());
                if let Some(x) = x {
                    let _ = write!(s, " at x={x}");
                }
                s
            }
            StateDoc::Builtin(b) => b.describe(),
        }
    }
}

fn dims_str(dims: &[usize]) -> String {
    let inner: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    format!("({})", inner.join(","))
}

impl BuiltinDoc {
    fn reject_unused(&self, allowed: &[&str]) -> Result<(), CliError> {
        let present = [
            ("n", self.n.is_some()),
            ("d", self.d.is_some()),
            ("x", self.x.is_some()),
            ("base", self.base.is_some()),
            ("lambda0_plus", self.lambda0_plus.is_some()),
            ("lambda0_minus", self.lambda0_minus.is_some()),
            ("lambda", self.lambda.is_some()),
        ];
        for (field, set) in present {
            if set && !allowed.contains(&field) {
                return Err(CliError::Input(format!(
                    "field `{field}` does not apply to builtin `{}`",
                    self.name
                )));
            }
        }
        Ok(())
    }

    fn resolve(&self) -> Result<Parsed, CliError> {
        let parsed = match self.name.as_str() {
            "ghz" => {
                self.reject_unused(&["n", "d"])?;
                Parsed::State(State::Pure(ghz(self.n.unwrap_or(3), self.d.unwrap_or(2))?))
            }
            "w" => {
                self.reject_unused(&["n"])?;
                Parsed::State(State::Pure(w_state(self.n.unwrap_or(3))?))
            }
            "dct" => {
                self.reject_unused(&["lambda0_plus", "lambda0_minus", "lambda"])?;
                Parsed::State(State::Mixed(dct_state(
                    self.lambda0_plus.unwrap_or(1.0 / 6.0),
                    self.lambda0_minus.unwrap_or(0.5),
                    self.lambda.unwrap_or([1.0 / 18.0; 3]),
                )?))
            }
            "maximally-mixed" => {
                self.reject_unused(&[])?;
                let dims = self.dims.clone().ok_or_else(|| {
                    CliError::Input("builtin `maximally-mixed` needs `dims`".into())
                })?;
                Parsed::State(State::Mixed(DensityMatrix::maximally_mixed(
                    SystemShape::new(dims)?,
                )))
            }
            "white-noise" => {
                self.reject_unused(&["base", "x"])?;
                let base = self
                    .base
                    .as_ref()
                    .ok_or_else(|| CliError::Input("builtin `white-noise` needs `base`".into()))?;
                let family = white_noise_family(base.resolve()?.into_state()?.density());
                if let Some(x) = self.x {
                    family.member(x)?;
                }
                Parsed::Family { family, x: self.x }
            }
            other => return Err(CliError::Input(format!(
                "unknown builtin `{other}` (expected ghz, w, dct, white-noise or maximally-mixed)"
            ))),
        };
        let shape = match &parsed {
            Parsed::State(s) => s.shape(),
            Parsed::Family { family, .. } => family.base().shape(),
        };
        check_dims(&self.dims, shape)?;
        Ok(parsed)
    }

    fn describe(&self) -> String {
        let mut s = format!("builtin {}", self.name);
        let mut params = Vec::new();
        if let Some(n) = self.n {
            params.push(format!("n={n}"));
        }
        if let Some(d) = self.d {
            params.push(format!("d={d}"));
        }
        if let Some(v) = self.lambda0_plus {
            params.push(format!("lambda0_plus={v}"));
        }
        if let Some(v) = self.lambda0_minus {
            params.push(format!("lambda0_minus={v}"));
        }
        if let Some(l) = self.lambda {
            params.push(format!("lambda=[{},{},{}]", l[0], l[1], l[2]));
        }
        if let Some(dims) = &self.dims {
            params.push(format!("dims={}", dims_str(dims)));
        }
        if let Some(b) = &self.base {
            params.push(format!("base=[{}]", b.describe()));
        }
        if let Some(x) = self.x {
            params.push(format!("x={x}"));
        }
        if !params.is_empty() {
            let _ = write!(s, " ({})", params.join(", "));
        }
        s
    }
}
