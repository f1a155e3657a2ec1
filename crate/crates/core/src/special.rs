//! Scalar bound functions: binary entropy and its inverse, the exponent
//! function Φ and its noise section φ_ε, the piecewise bounds ψ₂,q and κ₂,q,
//! the Mrs. Gerber function, the log-Sobolev constant C, and the threshold
//! curves ε(q), x(q,ε).
//!
//! Conventions used throughout:
//! * `0·log₂ 0 = 0`;
//! * all root finding is bisection on a monotone function, driven to an
//!   argument interval below 1e-13;
//! * singular points carry explicit limit formulas instead of relying on
//!   floating-point cancellation.

use crate::error::{check_domain, Error, Result};

/// σ this close to 1/2 is treated as the x = 1 boundary.
const SIGMA_CEIL_GAP: f64 = 1e-9;

/// Bisection to float exhaustion: keeps full relative precision even for
/// exponentially small roots. `go_right` is whether the root lies right of
/// the probe.
fn bisect_exhaust(mut lo: f64, mut hi: f64, mut go_right: impl FnMut(f64) -> bool) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        if go_right(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Baseline hypercontractive exponent q₀ = 1 + (1-2ε)².
pub fn q0_of(eps: f64) -> f64 {
    let d = 1.0 - 2.0 * eps;
    1.0 + d * d
}

/// Binary entropy H(t) = t log₂(1/t) + (1-t) log₂(1/(1-t)) on [0,1].
pub fn binary_entropy(t: f64) -> Result<f64> {
    check_domain("t", t, 0.0, 1.0)?;
    Ok(binary_entropy_unchecked(t))
}

#[inline]
fn binary_entropy_unchecked(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    -(t * t.log2()) - (1.0 - t) * (1.0 - t).log2()
}

/// Inverse of the binary entropy on the branch [0, 1/2].
///
/// Monotone bisection run to float exhaustion, so exponentially small roots
/// keep full relative precision; |H(σ) - x| ≲ 1e-12 everywhere.
pub fn inv_binary_entropy(x: f64) -> Result<f64> {
    check_domain("x", x, 0.0, 1.0)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x >= 1.0 {
        return Ok(0.5);
    }
    Ok(bisect_exhaust(0.0, 0.5, |mid| binary_entropy_unchecked(mid) < x))
}

/// The coupling y(x, ε) entering Φ.
///
/// Written in the cancellation-free form
/// y = 2εσ(1-σ) / (ε + sqrt(ε² + 4(1-2ε)σ(1-σ))), σ = H⁻¹(x),
/// which agrees with the quadratic-formula expression for ε < 1/2 and
/// passes continuously through the ε = 1/2 limit y = σ(1-σ).
pub fn y_coupling(x: f64, eps: f64) -> Result<f64> {
    check_domain("x", x, 0.0, 1.0)?;
    check_domain("eps", eps, 0.0, 0.5)?;
    let sigma = inv_binary_entropy(x)?;
    Ok(y_from_sigma(sigma, eps))
}

#[inline]
fn y_from_sigma(sigma: f64, eps: f64) -> f64 {
    let p = sigma * (1.0 - sigma);
    if p == 0.0 || eps == 0.0 {
        return 0.0;
    }
    let disc = (eps * eps + 4.0 * (1.0 - 2.0 * eps) * p).sqrt();
    2.0 * eps * p / (eps + disc)
}

/// The exponent function Φ(x, ε) controlling ⟨T f, f⟩ for functions of
/// bounded support. Nonpositive, increasing and concave in x.
pub fn big_phi(x: f64, eps: f64) -> Result<f64> {
    check_domain("x", x, 0.0, 1.0)?;
    check_domain("eps", eps, 0.0, 0.5)?;
    let sigma = inv_binary_entropy(x)?;
    Ok(big_phi_from_sigma(x, sigma, eps))
}

fn big_phi_from_sigma(x: f64, sigma: f64, eps: f64) -> f64 {
    let y = y_from_sigma(sigma, eps);
    let mut acc = x - 1.0;
    if sigma > 0.0 && y > 0.0 {
        // y ≤ σ(1-σ), so both ratios live in [0,1]; clamp the rounding dust.
        acc += sigma * binary_entropy_unchecked((y / sigma).min(1.0));
        acc += (1.0 - sigma) * binary_entropy_unchecked((y / (1.0 - sigma)).min(1.0));
    }
    if y > 0.0 {
        acc += 2.0 * y * eps.log2();
    }
    if eps < 1.0 {
        acc += (1.0 - 2.0 * y) * (1.0 - eps).log2();
    }
    0.5 * acc
}

/// φ_ε(x) = Φ(x, 2ε(1-ε)): the section of Φ along the two-fold noise path.
pub fn phi_eps(x: f64, eps: f64) -> Result<f64> {
    check_domain("eps", eps, 0.0, 0.5)?;
    big_phi(x, 2.0 * eps * (1.0 - eps))
}

/// d φ_ε / dx.
///
/// The stationarity of the Φ integrand in y makes the envelope derivative
/// exact: φ'(x) = (1 + A/B) / 2 with
///   A = log₂[σ(1-σ-y) / ((σ-y)(1-σ))] = 2 log₂(D+E) - log₂(4σ(1-σ)(1-ε̃)²),
///   B = log₂[(1-σ)/σ],
/// where σ = H⁻¹(x), ε̃ = 2ε(1-ε), D = sqrt(ε̃² + 4(1-2ε̃)σ(1-σ)) and
/// E = ε̃(1-2σ). The right-hand A form is algebraically identical and free
/// of cancellation down to exponentially small σ. At the endpoints the
/// ratio degenerates to 0/0 and the analytic limits φ'(0) = 1 and
/// φ'(1) = 1/q₀ take over (φ' ≡ 1/2 when ε = 0). The finite-difference
/// route [`phi_prime_fd`] cross-checks this formula in the test suite.
pub fn phi_prime(x: f64, eps: f64) -> Result<f64> {
    check_domain("x", x, 0.0, 1.0)?;
    check_domain("eps", eps, 0.0, 0.5)?;
    let et = 2.0 * eps * (1.0 - eps);
    if et == 0.0 {
        return Ok(0.5);
    }
    let sigma = inv_binary_entropy(x)?;
    if sigma == 0.0 {
        return Ok(1.0);
    }
    if sigma > 0.5 - SIGMA_CEIL_GAP {
        return Ok(1.0 / q0_of(eps));
    }
    let p = sigma * (1.0 - sigma);
    let d = (et * et + 4.0 * (1.0 - 2.0 * et) * p).sqrt();
    let e = et * (1.0 - 2.0 * sigma);
    let a = 2.0 * (d + e).log2() - (4.0 * p).log2() - 2.0 * (1.0 - et).log2();
    let b = ((1.0 - sigma) / sigma).log2();
    Ok(0.5 * (1.0 + a / b))
}

/// Central finite difference for φ'_ε (one-sided at the endpoints,
/// h = 1e-6). Retained as the independent cross-check of [`phi_prime`].
pub fn phi_prime_fd(x: f64, eps: f64) -> Result<f64> {
    check_domain("x", x, 0.0, 1.0)?;
    let h = 1e-6;
    if x < h {
        Ok((phi_eps(x + h, eps)? - phi_eps(x, eps)?) / h)
    } else if x > 1.0 - h {
        Ok((phi_eps(x, eps)? - phi_eps(x - h, eps)?) / h)
    } else {
        Ok((phi_eps(x + h, eps)? - phi_eps(x - h, eps)?) / (2.0 * h))
    }
}

/// Solves φ'_ε(α) = s for α ∈ [0, 1].
///
/// φ' decreases from 1 to 1/q₀ for 0 < ε < 1/2, so the slope must lie in
/// [1/q₀, 1]. Out-of-range slopes clamp to the matching endpoint when the
/// derivative profile is degenerate (ε ∈ {0, 1/2}), and error otherwise.
pub fn phi_prime_inv(s: f64, eps: f64) -> Result<f64> {
    check_domain("eps", eps, 0.0, 0.5)?;
    let q0 = q0_of(eps);
    if s > 1.0 + 1e-12 || s < 1.0 / q0 - 1e-12 {
        return Err(Error::SlopeOutOfRange(s, 1.0 / q0, 1.0));
    }
    // degenerate profiles (ε ∈ {0, 1/2}) clamp to the maximizing endpoint
    let (top, bot) = (phi_prime(0.0, eps)?, phi_prime(1.0, eps)?);
    if s >= top {
        return Ok(0.0);
    }
    if s <= bot {
        return Ok(1.0);
    }
    Ok(bisect_exhaust(0.0, 1.0, |mid| phi_prime(mid, eps).unwrap() > s))
}

/// ∂φ/∂ε at ε = 0: (2 sqrt(σ(1-σ)) - 1) / ln 2 with σ = H⁻¹(x).
pub fn dphi_deps_at_zero(x: f64) -> Result<f64> {
    let sigma = inv_binary_entropy(x)?;
    Ok((2.0 * (sigma * (1.0 - sigma)).sqrt() - 1.0) / std::f64::consts::LN_2)
}

/// The second-Rényi Mrs. Gerber bound ψ₂,q(x, ε).
///
/// Piecewise: when φ'_ε(1-x) < 1/q the maximizing level lies strictly inside
/// the norm-constraint segment at α₀ = (φ'_ε)⁻¹(1/q), otherwise at its
/// endpoint 1 - x. Increasing, concave, and continuous across the branch.
pub fn psi_2q(x: f64, eps: f64, q: f64) -> Result<f64> {
    check_domain("x", x, 0.0, 1.0)?;
    check_domain("eps", eps, 0.0, 0.5)?;
    if q <= 1.0 {
        return Err(Error::InvalidOrder(q));
    }
    let slope_at_end = phi_prime(1.0 - x, eps)?;
    if slope_at_end < 1.0 / q {
        let alpha0 = phi_prime_inv(1.0 / q, eps)?;
        Ok(2.0 * ((q - 1.0) / q * x + phi_eps(alpha0, eps)? + (1.0 - alpha0) / q))
    } else {
        Ok(2.0 * (phi_eps(1.0 - x, eps)? + x))
    }
}

/// Solves g(α) = 1 - α - (α/(1-α)) φ_ε(α) = ytarget on [0, 1].
///
/// g decreases strictly from g(0) = 1 to the limit g(1) = 1/q₀.
pub fn alpha0_solve(ytarget: f64, eps: f64) -> Result<f64> {
    check_domain("eps", eps, 0.0, 0.5)?;
    let q0 = q0_of(eps);
    if ytarget > 1.0 + 1e-12 || ytarget < 1.0 / q0 - 1e-12 {
        return Err(Error::TargetOutOfRange(ytarget, 1.0 / q0, 1.0));
    }
    if ytarget >= 1.0 {
        return Ok(0.0);
    }
    if ytarget <= 1.0 / q0 {
        return Ok(1.0);
    }
    let g = |alpha: f64| {
        if alpha >= 1.0 {
            return 1.0 / q0;
        }
        1.0 - alpha - alpha / (1.0 - alpha) * phi_eps(alpha, eps).unwrap()
    };
    Ok(bisect_exhaust(0.0, 1.0, |mid| g(mid) > ytarget))
}

/// The improved hypercontractive exponent κ₂,q(x, ε) ∈ [1, q₀].
///
/// Branch comparisons are non-strict; the function is continuous in x, so
/// ties give the same value either way.
pub fn kappa_2q(x: f64, eps: f64, q: f64) -> Result<f64> {
    check_domain("x", x, 0.0, 1.0)?;
    check_domain("eps", eps, 0.0, 0.5)?;
    if q <= 1.0 {
        return Err(Error::InvalidOrder(q));
    }
    let q0 = q0_of(eps);
    if x == 0.0 {
        return Ok(q0);
    }
    let y = (q - 1.0) / q * x + 1.0 / q;
    if y <= 1.0 / q0 {
        return Ok(q0);
    }
    let ratio = -x / phi_eps(1.0 - x, eps)?;
    if ratio >= q {
        return Ok(ratio);
    }
    let alpha0 = alpha0_solve(y, eps)?;
    if alpha0 > 1.0 - 1e-9 {
        return Ok(q0);
    }
    Ok((alpha0 - 1.0) / phi_eps(alpha0, eps)?)
}

/// Classic Mrs. Gerber function ψ(x, ε) = 1 - H(ε ⋆ H⁻¹(1-x)),
/// with a ⋆ b = a + b - 2ab.
pub fn mgl_psi(x: f64, eps: f64) -> Result<f64> {
    check_domain("x", x, 0.0, 1.0)?;
    check_domain("eps", eps, 0.0, 0.5)?;
    let t = inv_binary_entropy(1.0 - x)?;
    let star = eps + t - 2.0 * eps * t;
    Ok(1.0 - binary_entropy_unchecked(star))
}

/// Entropy-dependent log-Sobolev constant
/// C(x) = 2 (1 - 2 sqrt(t(1-t))) / x, t = H⁻¹(1-x),
/// computed in the cancellation-free form 2(1-2t)² / (x (1 + 2 sqrt(t(1-t)))).
/// C(0) is the limit 2 ln 2; the range is [2 ln 2, 2].
pub fn log_sobolev_c(x: f64) -> Result<f64> {
    check_domain("x", x, 0.0, 1.0)?;
    if x == 0.0 {
        return Ok(2.0 * std::f64::consts::LN_2);
    }
    let t = inv_binary_entropy(1.0 - x)?;
    let one_minus_2t = 1.0 - 2.0 * t;
    Ok(2.0 * one_minus_2t * one_minus_2t / (x * (1.0 + 2.0 * (t * (1.0 - t)).sqrt())))
}

/// Largest entropy rate for which κ₂,q stays pinned at q₀:
/// x(q, ε) = max(0, (q - q₀) / (q₀ (q - 1))).
pub fn x_threshold(q: f64, eps: f64) -> Result<f64> {
    check_domain("eps", eps, 0.0, 0.5)?;
    if q <= 1.0 {
        return Err(Error::InvalidOrder(q));
    }
    let q0 = q0_of(eps);
    Ok(((q - q0) / (q0 * (q - 1.0))).max(0.0))
}

/// Noise level below which κ₂,q is strictly decreasing from x = 0 on:
/// ε(q) = (1 - sqrt(q-1)) / 2 for 1 < q ≤ 2, and 0 for q ≥ 2.
pub fn eps_threshold(q: f64) -> Result<f64> {
    if q <= 1.0 {
        return Err(Error::InvalidOrder(q));
    }
    if q >= 2.0 {
        return Ok(0.0);
    }
    Ok((1.0 - (q - 1.0).sqrt()) / 2.0)
}

/// Validated (x, ε, q) triple with the derived quantities σ, q₀ and
/// y = (q-1)x/q + 1/q that the piecewise bounds branch on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub x: f64,
    pub eps: f64,
    pub q: f64,
    sigma: f64,
}

impl BoundParams {
    pub fn new(x: f64, eps: f64, q: f64) -> Result<Self> {
        check_domain("x", x, 0.0, 1.0)?;
        check_domain("eps", eps, 0.0, 0.5)?;
        if q <= 1.0 {
            return Err(Error::InvalidOrder(q));
        }
        let sigma = inv_binary_entropy(x)?;
        Ok(Self { x, eps, q, sigma })
    }

    /// σ = H⁻¹(x) ∈ [0, 1/2].
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// q₀ = 1 + (1-2ε)² ∈ [1, 2].
    pub fn q0(&self) -> f64 {
        q0_of(self.eps)
    }

    /// y = (q-1)x/q + 1/q ∈ [1/q, 1].
    pub fn y_def(&self) -> f64 {
        (self.q - 1.0) / self.q * self.x + 1.0 / self.q
    }
}
