//! Exact representation of real functions on {0,1}ⁿ: dense 2ⁿ arrays with
//! the Walsh spectrum, the noise operator, norms, entropies, the Dirichlet
//! form and sphere/ball constructors. All expectations are with respect to
//! the uniform measure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the cube dimension; 2²⁴ doubles is 128 MiB.
pub const DEFAULT_MAX_N: usize = 24;

/// Dimension cap, overridable through the `CUBE_MAX_N` environment variable.
pub fn max_n() -> usize {
    static CAP: std::sync::OnceLock<usize> = std::sync::OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("CUBE_MAX_N")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(DEFAULT_MAX_N)
    })
}

/// Noise parameter ε ∈ [0, 1/2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseParam(f64);

impl NoiseParam {
    pub fn new(eps: f64) -> Result<Self> {
        crate::error::check_domain("eps", eps, 0.0, 0.5)?;
        Ok(Self(eps))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// Composition law: T_a ∘ T_b = T_{a ⋆ b} with a ⋆ b = a + b - 2ab.
    pub fn compose(self, other: NoiseParam) -> NoiseParam {
        NoiseParam(self.0 + other.0 - 2.0 * self.0 * other.0)
    }
}

/// A real-valued function on {0,1}ⁿ, stored densely; index = point bitmask.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubeFunction {
    n: usize,
    values: Vec<f64>,
    #[serde(skip)]
    nonneg: bool,
}

impl<'de> Deserialize<'de> for CubeFunction {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            values: Vec<f64>,
        }
        let raw = Raw::deserialize(de)?;
        CubeFunction::new(raw.n, raw.values).map_err(serde::de::Error::custom)
    }
}

impl CubeFunction {
    /// Validated constructor: `values.len()` must be exactly 2ⁿ, all finite.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n > max_n() {
            return Err(Error::DimensionTooLarge { n, cap: max_n() });
        }
        let expected = 1usize << n;
        if values.len() != expected {
            return Err(Error::LengthMismatch { n, got: values.len(), expected });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        let nonneg = values.iter().all(|&v| v >= 0.0);
        Ok(Self { n, values, nonneg })
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(n, vec![value; 1usize << n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// True iff every value was ≥ 0 at construction.
    pub fn is_nonneg(&self) -> bool {
        self.nonneg
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Number of points where the function is non-zero.
    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0.0).count()
    }

    pub fn abs(&self) -> CubeFunction {
        let values = self.values.iter().map(|v| v.abs()).collect();
        CubeFunction { n: self.n, values, nonneg: true }
    }

    pub fn scale(&self, c: f64) -> Result<CubeFunction> {
        CubeFunction::new(self.n, self.values.iter().map(|v| c * v).collect())
    }

    /// Pointwise square.
    pub fn squared(&self) -> CubeFunction {
        let values = self.values.iter().map(|v| v * v).collect();
        CubeFunction { n: self.n, values, nonneg: true }
    }

    /// f / E f, for nonnegative non-zero f.
    pub fn normalized(&self) -> Result<CubeFunction> {
        if !self.nonneg {
            let index = self.values.iter().position(|&v| v < 0.0).unwrap();
            return Err(Error::NegativeValue { index, value: self.values[index] });
        }
        let m = self.mean();
        if m <= 0.0 {
            return Err(Error::ZeroFunction);
        }
        self.scale(1.0 / m)
    }

    /// Orthonormal Walsh–Fourier transform: f̂(S) = E[f χ_S].
    pub fn walsh(&self) -> Spectrum {
        let mut coeffs = self.values.clone();
        fwht_in_place(&mut coeffs);
        let scale = 1.0 / self.len() as f64;
        for c in coeffs.iter_mut() {
            *c *= scale;
        }
        Spectrum { n: self.n, coeffs }
    }

    /// The noise operator T_ε, computed spectrally: the coefficient of mask S
    /// is scaled by (1-2ε)^|S|. ε = 0 and ε = 1/2 short-circuit to the exact
    /// identity and total-averaging answers.
    pub fn noise(&self, eps: NoiseParam) -> CubeFunction {
        let e = eps.get();
        if e == 0.0 {
            return self.clone();
        }
        if e == 0.5 {
            let m = self.mean();
            return CubeFunction { n: self.n, values: vec![m; self.len()], nonneg: m >= 0.0 };
        }
        let rho = 1.0 - 2.0 * e;
        let mut spec = self.walsh();
        for (mask, c) in spec.coeffs.iter_mut().enumerate() {
            *c *= rho.powi(mask.count_ones() as i32);
        }
        let mut out = spec.inverse();
        if self.nonneg {
            // T_ε preserves nonnegativity; clip transform dust.
            for v in out.values.iter_mut() {
                if *v < 0.0 {
                    *v = 0.0;
                }
            }
            out.nonneg = true;
        }
        out
    }

    /// ℓ_q norm (E |f|^q)^(1/q), q ≥ 1.
    pub fn lq_norm(&self, q: f64) -> Result<f64> {
        if !(q >= 1.0) {
            return Err(Error::InvalidOrder(q));
        }
        let mean_pow =
            self.values.iter().map(|v| v.abs().powf(q)).sum::<f64>() / self.len() as f64;
        Ok(mean_pow.powf(1.0 / q))
    }

    /// Ent(f) = E f log₂ f - E f log₂ E f for nonnegative f, with 0 log 0 = 0.
    ///
    /// Values below the transform-noise floor are treated as zero; genuinely
    /// negative values are an error.
    pub fn shannon_entropy(&self) -> Result<f64> {
        let scale = self.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let floor = -1e-12 * scale.max(1.0);
        let mut mean = 0.0;
        let mut mean_flog = 0.0;
        for (index, &v) in self.values.iter().enumerate() {
            if v < floor {
                return Err(Error::NegativeValue { index, value: v });
            }
            if v > 0.0 {
                mean += v;
                mean_flog += v * v.log2();
            }
        }
        mean /= self.len() as f64;
        mean_flog /= self.len() as f64;
        if mean <= 0.0 {
            return Err(Error::ZeroFunction);
        }
        Ok(mean_flog - mean * mean.log2())
    }

    /// Ent_q(f) = (1/(q-1)) log₂ E[f^q]; the q-th Rényi entropy when E f = 1.
    pub fn renyi_entropy(&self, q: f64) -> Result<f64> {
        if q <= 1.0 {
            return Err(Error::InvalidOrder(q));
        }
        if let Some(index) = self.values.iter().position(|&v| v < 0.0) {
            return Err(Error::NegativeValue { index, value: self.values[index] });
        }
        let norm = self.lq_norm(q)?;
        if norm == 0.0 {
            return Err(Error::ZeroFunction);
        }
        Ok(q / (q - 1.0) * norm.log2())
    }

    /// Ent_q(f/‖f‖₁) = (q/(q-1)) log₂(‖f‖_q/‖f‖₁); sign-changing f is
    /// handled through |f|, which is all the norms see.
    pub fn renyi_entropy_normalized(&self, q: f64) -> Result<f64> {
        if q <= 1.0 {
            return Err(Error::InvalidOrder(q));
        }
        let l1 = self.lq_norm(1.0)?;
        if l1 == 0.0 {
            return Err(Error::ZeroFunction);
        }
        Ok(q / (q - 1.0) * (self.lq_norm(q)? / l1).log2())
    }

    /// Dirichlet form E(f,g) = E_x Σ_{y~x} (f(x)-f(y))(g(x)-g(y)).
    pub fn dirichlet_form(&self, other: &CubeFunction) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut acc = 0.0;
        for x in 0..self.len() {
            for i in 0..self.n {
                let y = x ^ (1usize << i);
                acc += (self.values[x] - self.values[y]) * (other.values[x] - other.values[y]);
            }
        }
        Ok(acc / self.len() as f64)
    }

    /// ⟨T_ε f, f⟩ = Σ_S (1-2ε)^|S| f̂(S)².
    pub fn noisy_inner_product(&self, eps: NoiseParam) -> f64 {
        let rho = 1.0 - 2.0 * eps.get();
        let spec = self.walsh();
        spec.coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| rho.powi(mask.count_ones() as i32) * c * c)
            .sum()
    }
}

/// Walsh–Fourier coefficients of a cube function, index = subset mask.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// f(x) = Σ_S f̂(S) χ_S(x).
    pub fn inverse(&self) -> CubeFunction {
        let mut values = self.coeffs.clone();
        fwht_in_place(&mut values);
        let nonneg = values.iter().all(|&v| v >= 0.0);
        CubeFunction { n: self.n, values, nonneg }
    }

    /// Σ_S f̂(S)², which Parseval ties to E[f²].
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// In-place unnormalized Walsh–Hadamard butterfly:
/// out[S] = Σ_x (-1)^{|S ∧ x|} in[x].
fn fwht_in_place(a: &mut [f64]) {
    let n = a.len();
    let mut h = 1;
    while h < n {
        let mut i = 0;
        while i < n {
            for j in i..i + h {
                let (x, y) = (a[j], a[j + h]);
                a[j] = x + y;
                a[j + h] = x - y;
            }
            i += 2 * h;
        }
        h *= 2;
    }
}

/// Indicator of the Hamming sphere {x : |x| = r} around 0.
pub fn sphere_indicator(n: usize, r: usize) -> Result<CubeFunction> {
    if r > n {
        return Err(Error::RadiusOutOfRange { n, r });
    }
    let values =
        (0..1usize << n).map(|x| if x.count_ones() as usize == r { 1.0 } else { 0.0 }).collect();
    CubeFunction::new(n, values)
}

/// Indicator of the Hamming ball {x : |x| ≤ r} around 0.
pub fn ball_indicator(n: usize, r: usize) -> Result<CubeFunction> {
    if r > n {
        return Err(Error::RadiusOutOfRange { n, r });
    }
    let values =
        (0..1usize << n).map(|x| if x.count_ones() as usize <= r { 1.0 } else { 0.0 }).collect();
    CubeFunction::new(n, values)
}

/// Mean-one mixture: value `v` on the sphere of radius r, and the mass
/// balance (2ⁿ - |S| v) / (2ⁿ - |S|) on its complement.
pub fn sphere_mixture(n: usize, r: usize, v: f64) -> Result<CubeFunction> {
    if r > n {
        return Err(Error::RadiusOutOfRange { n, r });
    }
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::ParamOutOfRange("sphere value must be nonnegative and finite"));
    }
    let total = (1u64 << n) as f64;
    let sphere_size = binomial_u64(n, r) as f64;
    let mass = sphere_size * v;
    if mass > total {
        return Err(Error::MassOverflow { mass, total });
    }
    if sphere_size == total {
        // r = n = 0: the sphere is the whole cube, so v must be 1.
        return CubeFunction::new(n, vec![v; 1usize << n]);
    }
    let rest = (total - mass) / (total - sphere_size);
    let values = (0..1usize << n)
        .map(|x| if x.count_ones() as usize == r { v } else { rest })
        .collect();
    CubeFunction::new(n, values)
}

fn binomial_u64(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Generator specs accepted wherever a function file is: sphere and ball
/// indicators and the mean-one sphere mixture.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Sphere { n: usize, r: usize },
    Ball { n: usize, r: usize },
    Mixture { n: usize, r: usize, v: f64 },
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<CubeFunction> {
        match *self {
            GeneratorSpec::Sphere { n, r } => sphere_indicator(n, r),
            GeneratorSpec::Ball { n, r } => ball_indicator(n, r),
            GeneratorSpec::Mixture { n, r, v } => sphere_mixture(n, r, v),
        }
    }
}
