//! JSON container for tensors, layer parameters and masks.
//!
//! Tensors: `{"shape":[2,4],"angular_axes":[1],"domain":"spatial","real":[..],"imag":[..]}`
//! flattened row-major; `imag` may be omitted on input and defaults to zeros.
//! Layers and masks carry a `"kind"` discriminator. Floats are written with
//! shortest round-trip formatting, so values survive a write/read unchanged.

use serde::{Deserialize, Serialize};

use crate::error::{PolarError, Result};
use crate::operators::{FrequencyMask, PeriodicGate, SpectralDense};
use crate::spectral::Spectrum;
use crate::tensor::{Domain, PolarTensor, C64};

#[derive(Debug, Serialize, Deserialize)]
struct TensorDoc {
    shape: Vec<usize>,
    angular_axes: Vec<usize>,
    domain: Domain,
    real: Vec<f64>,
    #[serde(default)]
    imag: Option<Vec<f64>>,
}

impl From<&PolarTensor> for TensorDoc {
    fn from(t: &PolarTensor) -> Self {
        Self {
            shape: t.shape().to_vec(),
            angular_axes: t.angular_axes().to_vec(),
            domain: t.domain(),
            real: t.values().iter().map(|v| v.re).collect(),
            imag: Some(t.values().iter().map(|v| v.im).collect()),
        }
    }
}

impl TryFrom<TensorDoc> for PolarTensor {
    type Error = PolarError;

    fn try_from(doc: TensorDoc) -> Result<Self> {
        let values = complex_values(doc.real, doc.imag)?;
        PolarTensor::new(doc.shape, doc.angular_axes, values, doc.domain)
    }
}

fn complex_values(real: Vec<f64>, imag: Option<Vec<f64>>) -> Result<Vec<C64>> {
    let imag = imag.unwrap_or_else(|| vec![0.0; real.len()]);
    if imag.len() != real.len() {
        return Err(PolarError::Format(format!(
            "\"real\" has {} entries but \"imag\" has {}",
            real.len(),
            imag.len()
        )));
    }
    Ok(real.into_iter().zip(imag).map(|(r, i)| C64::new(r, i)).collect())
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ParamDoc {
    SpectralDense {
        real_constrained: bool,
        weights: TensorDoc,
    },
    PeriodicGate {
        band: usize,
        alpha_w: f64,
        strength: f64,
        real_constrained: bool,
        real: Vec<f64>,
        #[serde(default)]
        imag: Option<Vec<f64>>,
    },
    FrequencyMask {
        sizes: Vec<usize>,
        indices: Vec<Vec<usize>>,
    },
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| PolarError::Format(e.to_string()))
}

fn render<T: Serialize>(doc: &T) -> String {
    serde_json::to_string(doc).expect("documents contain only plain data")
}

pub fn tensor_to_json(t: &PolarTensor) -> String {
    render(&TensorDoc::from(t))
}

pub fn tensor_from_json(text: &str) -> Result<PolarTensor> {
    parse::<TensorDoc>(text)?.try_into()
}

pub fn spectrum_from_json(text: &str) -> Result<Spectrum> {
    Spectrum::new(tensor_from_json(text)?)
}

pub fn dense_to_json(layer: &SpectralDense) -> String {
    render(&ParamDoc::SpectralDense {
        real_constrained: layer.is_real_constrained(),
        weights: TensorDoc::from(layer.weights().as_tensor()),
    })
}

pub fn dense_from_json(text: &str) -> Result<SpectralDense> {
    match parse(text)? {
        ParamDoc::SpectralDense {
            real_constrained,
            weights,
        } => {
            let w = Spectrum::new(weights.try_into()?)?;
            Ok(if real_constrained {
                SpectralDense::real_constrained(w)
            } else {
                SpectralDense::new(w)
            })
        }
        _ => Err(PolarError::Format("expected kind \"spectral_dense\"".into())),
    }
}

pub fn gate_to_json(gate: &PeriodicGate) -> String {
    render(&ParamDoc::PeriodicGate {
        band: gate.band(),
        alpha_w: gate.alpha_w(),
        strength: gate.strength(),
        real_constrained: gate.is_real_constrained(),
        real: gate.kernel().iter().map(|v| v.re).collect(),
        imag: Some(gate.kernel().iter().map(|v| v.im).collect()),
    })
}

pub fn gate_from_json(text: &str) -> Result<PeriodicGate> {
    match parse(text)? {
        ParamDoc::PeriodicGate {
            band,
            alpha_w,
            strength,
            real_constrained,
            real,
            imag,
        } => Ok(PeriodicGate::from_coefficients(complex_values(real, imag)?, band, strength, real_constrained)?
            .with_alpha_w(alpha_w)),
        _ => Err(PolarError::Format("expected kind \"periodic_gate\"".into())),
    }
}

pub fn mask_to_json(mask: &FrequencyMask) -> String {
    render(&ParamDoc::FrequencyMask {
        sizes: mask.sizes().to_vec(),
        indices: mask.indices(),
    })
}

pub fn mask_from_json(text: &str) -> Result<FrequencyMask> {
    match parse(text)? {
        ParamDoc::FrequencyMask { sizes, indices } => FrequencyMask::from_indices(&sizes, &indices),
        _ => Err(PolarError::Format("expected kind \"frequency_mask\"".into())),
    }
}
