use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::CircuitLayout;
use crate::pool::OperationPool;

/// Weight-shared angles, shape `(layers, pool size, max params)`.
///
/// Every circuit that places operation `k` at layer `i` reads the same slot
/// `(i, k, ..)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct SharedParameters {
    shape: (usize, usize, usize),
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawParams {
    shape: (usize, usize, usize),
    values: Vec<f64>,
}

impl TryFrom<RawParams> for SharedParameters {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Self::from_values(raw.shape, raw.values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "scheme")]
pub enum InitScheme {
    Zeros,
    /// Uniform on the open interval `(-half_width, half_width)`.
    Uniform { half_width: f64 },
}

impl Default for InitScheme {
    fn default() -> Self {
        InitScheme::Uniform { half_width: 0.1 }
    }
}

impl SharedParameters {
    /// All-zero tensor. Unlike [`init_params`], `l = 0` is accepted so that
    /// pools without parametric gates get an empty tensor.
    pub fn zeros(p: usize, c: usize, l: usize) -> Self {
        Self { shape: (p, c, l), values: vec![0.0; p * c * l] }
    }

    /// Tensor sized for `pool` and `layers`, initialised with `scheme`.
    pub fn for_pool(layers: usize, pool: &OperationPool, scheme: InitScheme, seed: u64) -> Result<Self> {
        if pool.max_params() == 0 {
            if layers == 0 {
                return Err(Error::Size("layers must be >= 1".into()));
            }
            return Ok(Self::zeros(layers, pool.size(), 0));
        }
        init_params(layers, pool.size(), pool.max_params(), scheme, seed)
    }

    pub fn from_values(shape: (usize, usize, usize), values: Vec<f64>) -> Result<Self> {
        let (p, c, l) = shape;
        if values.len() != p * c * l {
            return Err(Error::Size(format!(
                "shape ({p}, {c}, {l}) needs {} values, got {}",
                p * c * l,
                values.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("non-finite parameter at flat index {bad}")));
        }
        Ok(Self { shape, values })
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros(self.shape.0, self.shape.1, self.shape.2)
    }

    fn offset(&self, layer: usize, op: usize) -> Result<usize> {
        let (p, c, l) = self.shape;
        if layer >= p || op >= c {
            return Err(Error::Bounds(format!(
                "slot ({layer}, {op}) outside shape ({p}, {c}, {l})"
            )));
        }
        Ok((layer * c + op) * l)
    }

    /// All `l` values at `(layer, op)`.
    pub fn slot(&self, layer: usize, op: usize) -> Result<&[f64]> {
        let start = self.offset(layer, op)?;
        Ok(&self.values[start..start + self.shape.2])
    }

    pub fn slot_mut(&mut self, layer: usize, op: usize) -> Result<&mut [f64]> {
        let start = self.offset(layer, op)?;
        let l = self.shape.2;
        Ok(&mut self.values[start..start + l])
    }

    /// Flat indices of the slots a layout reads.
    pub fn touched_indices(&self, pool: &OperationPool, layout: &CircuitLayout) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (layer, &k) in layout.iter().enumerate() {
            let needed = pool.entry(k)?.kind.num_params();
            let start = self.offset(layer, k)?;
            out.extend(start..start + needed);
        }
        Ok(out)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    pub fn load_json(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// `init_params`: tensor of shape `(p, c, l)` filled by `scheme`.
pub fn init_params(p: usize, c: usize, l: usize, scheme: InitScheme, seed: u64) -> Result<SharedParameters> {
    if p == 0 || c == 0 || l == 0 {
        return Err(Error::Size(format!("dimensions ({p}, {c}, {l}) must all be >= 1")));
    }
    let mut params = SharedParameters::zeros(p, c, l);
    if let InitScheme::Uniform { half_width } = scheme {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Parameter(format!("uniform half width {half_width} must be > 0")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for v in params.values.iter_mut() {
            *v = loop {
                let x = rng.gen_range(-half_width..half_width);
                if x != -half_width {
                    break x;
                }
            };
        }
    }
    Ok(params)
}

/// `param_slice`: the angles layer `layer` of `layout` reads, trimmed to
/// what its gate needs (empty for non-parametric gates).
pub fn param_slice<'a>(
    params: &'a SharedParameters,
    pool: &OperationPool,
    layout: &CircuitLayout,
    layer: usize,
) -> Result<&'a [f64]> {
    let &k = layout
        .get(layer)
        .ok_or_else(|| Error::Bounds(format!("layer {layer} >= layout length {}", layout.len())))?;
    let needed = pool.entry(k)?.kind.num_params();
    Ok(&params.slot(layer, k)?[..needed])
}
