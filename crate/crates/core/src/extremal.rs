//! The variational side: the feasible region Ω₀/Ω of level-set pairs
//! (α, ν), the boundary maximization that produces ψ₂,q, the implicit
//! exponent function f_{α₁,ν₁} with its maximum M(α₁, ν₁), and the
//! sphere-mixture constructions that approach the bounds.

use serde::de::Error as _;
use serde::{Deserialize, Serialize};

use crate::cube::CubeFunction;
use crate::error::{check_domain, Error, Result};
use crate::logspace::{
    log2_binomial, log2_factorial_table, log2_sum_exp, signed_log2_sum, SignedLog2,
};
use crate::special::{alpha0_solve, kappa_2q, phi_eps, psi_2q, q0_of};

const BOUNDARY_TOL: f64 = 1e-12;

/// Feasible region parameters: Rényi order q and the norm rate
/// N = (1/n) log₂ ‖f‖_q ∈ (0, (q-1)/q].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaDomain {
    q: f64,
    norm_rate: f64,
}

/// A level-set pair: α the log-cardinality rate, ν the log-value rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelPoint {
    pub alpha: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaVariant {
    /// Ω₀: -1 ≤ ν ≤ 1 allowed.
    Omega0,
    /// Ω: additionally ν ≥ 0.
    Omega,
}

impl OmegaDomain {
    pub fn new(q: f64, norm_rate: f64) -> Result<Self> {
        if q <= 1.0 {
            return Err(Error::InvalidOrder(q));
        }
        check_domain("N", norm_rate, f64::MIN_POSITIVE, (q - 1.0) / q + BOUNDARY_TOL)?;
        Ok(Self { q, norm_rate })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn norm_rate(&self) -> f64 {
        self.norm_rate
    }

    /// x = qN/(q-1): the entropy rate this domain encodes.
    pub fn entropy_rate(&self) -> f64 {
        (self.q * self.norm_rate / (self.q - 1.0)).min(1.0)
    }

    /// The kink of the upper boundary, where the norm-constraint line meets
    /// α + ν = 1: (1 - qN/(q-1), qN/(q-1)).
    pub fn corner(&self) -> LevelPoint {
        let x = self.entropy_rate();
        LevelPoint { alpha: 1.0 - x, nu: x }
    }

    /// Membership test with a 1e-12 boundary tolerance.
    pub fn contains(&self, p: LevelPoint, variant: OmegaVariant) -> bool {
        let t = BOUNDARY_TOL;
        let nu_lo = match variant {
            OmegaVariant::Omega0 => -1.0,
            OmegaVariant::Omega => 0.0,
        };
        p.alpha >= -t
            && p.alpha <= 1.0 + t
            && p.nu >= nu_lo - t
            && p.nu <= 1.0 + t
            && p.alpha + p.nu <= 1.0 + t
            && (p.alpha - 1.0) / self.q + p.nu <= self.norm_rate + t
    }

    /// ν on the upper boundary above a given α.
    fn upper_nu(&self, alpha: f64) -> f64 {
        let corner = self.corner();
        if alpha <= corner.alpha {
            self.norm_rate + (1.0 - alpha) / self.q
        } else {
            1.0 - alpha
        }
    }
}

/// Golden-section maximization of a unimodal function on [a, b].
fn golden_max(f: &dyn Fn(f64) -> f64, a: f64, b: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let xm = 0.5 * (lo + hi);
    (f(xm), xm)
}

/// Maximizes φ_ε(α) + ν over Ω₀. The maximum sits on the piecewise-linear
/// upper boundary, so each segment is searched by golden section and the
/// two candidates compared. Returns the value and its argmax; the value
/// equals ψ₂,q(qN/(q-1), ε)/2.
pub fn omega_max_phi_nu(dom: &OmegaDomain, eps: f64) -> Result<(f64, LevelPoint)> {
    check_domain("eps", eps, 0.0, 0.5)?;
    let corner = dom.corner();
    let h_a = |alpha: f64| {
        phi_eps(alpha, eps).unwrap() + dom.norm_rate + (1.0 - alpha) / dom.q
    };
    let h_b = |alpha: f64| phi_eps(alpha, eps).unwrap() + 1.0 - alpha;
    let (va, aa) = if corner.alpha > 0.0 {
        golden_max(&h_a, 0.0, corner.alpha, 90)
    } else {
        (h_a(0.0), 0.0)
    };
    let (vb, ab) = if corner.alpha < 1.0 {
        golden_max(&h_b, corner.alpha, 1.0, 90)
    } else {
        (h_b(1.0), 1.0)
    };
    if va >= vb {
        Ok((va, LevelPoint { alpha: aa, nu: dom.norm_rate + (1.0 - aa) / dom.q }))
    } else {
        Ok((vb, LevelPoint { alpha: ab, nu: 1.0 - ab }))
    }
}

fn validate_anchor(dom: &OmegaDomain, anchor: LevelPoint) -> Result<()> {
    if !dom.contains(anchor, OmegaVariant::Omega) {
        return Err(Error::PointOutsideOmega(anchor.alpha, anchor.nu));
    }
    let slack = (anchor.alpha - 1.0) / dom.q + anchor.nu - dom.norm_rate;
    if slack.abs() > 1e-10 {
        return Err(Error::AnchorConstraintViolated(anchor.alpha, anchor.nu));
    }
    Ok(())
}

/// The implicit exponent f_{α₁,ν₁}(p): the unique κ ∈ (0, q₀) with
/// φ_ε(α) + ν = max{(α₁-1)/κ + ν₁, (α-1)/κ + ν}, and (1-α₁)/ν₁ at p = (1,0).
pub fn implicit_kappa(
    dom: &OmegaDomain,
    anchor: LevelPoint,
    p: LevelPoint,
    eps: f64,
) -> Result<f64> {
    check_domain("eps", eps, 0.0, 0.5)?;
    validate_anchor(dom, anchor)?;
    if !dom.contains(p, OmegaVariant::Omega) {
        return Err(Error::PointOutsideOmega(p.alpha, p.nu));
    }
    let target = phi_eps(p.alpha, eps)? + p.nu;
    implicit_kappa_inner(anchor, p, target, q0_of(eps))
}

fn implicit_kappa_inner(anchor: LevelPoint, p: LevelPoint, target: f64, q0: f64) -> Result<f64> {
    if p.alpha >= 1.0 - BOUNDARY_TOL {
        return Ok((1.0 - anchor.alpha) / anchor.nu);
    }
    let eval = |kappa: f64| {
        ((anchor.alpha - 1.0) / kappa + anchor.nu).max((p.alpha - 1.0) / kappa + p.nu)
    };
    // eval is strictly increasing in κ and tends to -∞ at 0⁺; bracket then bisect.
    let mut hi = q0;
    let mut lo = q0 / 2.0;
    while eval(lo) > target {
        lo /= 2.0;
        if lo < 1e-300 {
            return Ok(0.0);
        }
    }
    while hi - lo > BOUNDARY_TOL * q0 {
        let mid = 0.5 * (lo + hi);
        if eval(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// M(α₁, ν₁) = max over Ω of the implicit exponent. The maximum lies on the
/// upper boundary; each segment gets a dense grid with golden refinement
/// around the best cell.
pub fn max_implicit_kappa(dom: &OmegaDomain, anchor: LevelPoint, eps: f64) -> Result<f64> {
    check_domain("eps", eps, 0.0, 0.5)?;
    validate_anchor(dom, anchor)?;
    let q0 = q0_of(eps);
    let f_at = |alpha: f64| -> f64 {
        let p = LevelPoint { alpha, nu: dom.upper_nu(alpha) };
        let target = phi_eps(p.alpha, eps).unwrap() + p.nu;
        implicit_kappa_inner(anchor, p, target, q0).unwrap()
    };
    let corner_alpha = dom.corner().alpha;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for (a, b) in [(0.0, corner_alpha), (corner_alpha, 1.0)] {
        if b - a < 1e-12 {
            let v = f_at(a);
            if v > best.0 {
                best = (v, a);
            }
            continue;
        }
        let cells = 1600usize;
        let step = (b - a) / cells as f64;
        let mut seg_best = (f64::NEG_INFINITY, a);
        for i in 0..=cells {
            let alpha = a + step * i as f64;
            let v = f_at(alpha);
            if v > seg_best.0 {
                seg_best = (v, alpha);
            }
        }
        let lo = (seg_best.1 - 2.0 * step).max(a);
        let hi = (seg_best.1 + 2.0 * step).min(b);
        let (v, alpha) = golden_max(&f_at, lo, hi, 80);
        let v = v.max(seg_best.0);
        if v > best.0 {
            best = (v, alpha);
        }
    }
    Ok(best.0)
}

/// In the interior case of the maximization (where -x/φ_ε(1-x) < q), the
/// unique second-type maximum abscissa α* ∈ (1 - qN/(q-1), 1) solving
/// (α-1)/φ_ε(α) = (α - α₁)/(α - (1 - ν₁)), with ν₁ = N + (1-α₁)/q.
/// Decreasing in α₁.
pub fn alpha_star(dom: &OmegaDomain, alpha1: f64, eps: f64) -> Result<f64> {
    check_domain("eps", eps, 0.0, 0.5)?;
    let corner = dom.corner();
    let ratio_corner = -dom.entropy_rate() / phi_eps(corner.alpha, eps)?;
    if ratio_corner >= dom.q {
        return Err(Error::CaseMismatch("corner ratio is at least q; no interior maximum"));
    }
    if alpha1 >= corner.alpha - 1e-12 {
        return Err(Error::CaseMismatch("anchor coincides with the corner"));
    }
    let nu1 = dom.norm_rate + (1.0 - alpha1) / dom.q;
    validate_anchor(dom, LevelPoint { alpha: alpha1, nu: nu1 })?;
    let g1 = |alpha: f64| (alpha - 1.0) / phi_eps(alpha, eps).unwrap();
    let g2 = |alpha: f64| (alpha - alpha1) / (alpha - (1.0 - nu1));
    let diff = |alpha: f64| g1(alpha) - g2(alpha);
    let (mut lo, mut hi) = (corner.alpha + 1e-12, 1.0 - 1e-12);
    if diff(lo) >= 0.0 {
        return Ok(lo);
    }
    while hi - lo > BOUNDARY_TOL {
        let mid = 0.5 * (lo + hi);
        if diff(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Which bound a tightness instance is built to approach.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TightnessKind {
    /// The second-Rényi Mrs. Gerber bound ψ₂,q.
    Renyi2,
    /// The ‖T_ε f‖₂ ≤ ‖f‖_κ exponent κ₂,q.
    Nhc,
}

/// One sphere component of an analytic profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereComponent {
    pub radius: usize,
    /// log₂ of the value the function takes on the sphere.
    pub log2_value: f64,
}

/// A mean-one mixture of Hamming-sphere indicators and a uniform component,
/// evaluated through log-binomial arithmetic so that n can reach the
/// hundreds without ever touching a 2ⁿ array.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereProfile {
    n: usize,
    spheres: Vec<SphereComponent>,
    uniform_value: f64,
    log2_fact: Vec<f64>,
}

impl Serialize for SphereProfile {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct SphereOut {
            radius_fraction: f64,
            log2_value_per_n: f64,
        }
        #[derive(Serialize)]
        struct Out {
            n: usize,
            spheres: Vec<SphereOut>,
            uniform_mass: f64,
        }
        let n = self.n as f64;
        Out {
            n: self.n,
            spheres: self
                .spheres
                .iter()
                .map(|s| SphereOut {
                    radius_fraction: s.radius as f64 / n,
                    log2_value_per_n: s.log2_value / n,
                })
                .collect(),
            uniform_mass: self.uniform_mass(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SphereProfile {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct SphereIn {
            radius_fraction: f64,
            log2_value_per_n: f64,
        }
        #[derive(Deserialize)]
        struct In {
            n: usize,
            spheres: Vec<SphereIn>,
            uniform_mass: f64,
        }
        let raw = In::deserialize(de)?;
        let spheres = raw
            .spheres
            .iter()
            .map(|s| SphereComponent {
                radius: (s.radius_fraction * raw.n as f64).round() as usize,
                log2_value: s.log2_value_per_n * raw.n as f64,
            })
            .collect();
        SphereProfile::from_parts_and_uniform_mass(raw.n, spheres, raw.uniform_mass)
            .map_err(D::Error::custom)
    }
}

impl SphereProfile {
    fn from_parts(n: usize, spheres: Vec<SphereComponent>, uniform_value: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ParamOutOfRange("profile dimension must be positive"));
        }
        for s in &spheres {
            if s.radius > n {
                return Err(Error::RadiusOutOfRange { n, r: s.radius });
            }
        }
        Ok(Self { n, spheres, uniform_value, log2_fact: log2_factorial_table(n) })
    }

    /// Rebuild with the uniform value fixed so that E f = 1.
    fn normalized(n: usize, spheres: Vec<SphereComponent>) -> Result<Self> {
        let mut profile = Self::from_parts(n, spheres, 0.0)?;
        let sphere_mass: f64 = profile.sphere_masses().iter().sum();
        let sphere_measure: f64 = profile.sphere_measures().iter().sum();
        if sphere_mass >= 1.0 {
            return Err(Error::MassOverflow { mass: sphere_mass, total: 1.0 });
        }
        profile.uniform_value = (1.0 - sphere_mass) / (1.0 - sphere_measure);
        Ok(profile)
    }

    fn from_parts_and_uniform_mass(
        n: usize,
        spheres: Vec<SphereComponent>,
        uniform_mass: f64,
    ) -> Result<Self> {
        let mut profile = Self::from_parts(n, spheres, 0.0)?;
        let sphere_measure: f64 = profile.sphere_measures().iter().sum();
        profile.uniform_value = uniform_mass / (1.0 - sphere_measure);
        Ok(profile)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spheres(&self) -> &[SphereComponent] {
        &self.spheres
    }

    pub fn uniform_value(&self) -> f64 {
        self.uniform_value
    }

    /// μ_j = |S_j| / 2ⁿ for each sphere.
    fn sphere_measures(&self) -> Vec<f64> {
        self.spheres
            .iter()
            .map(|s| (log2_binomial(&self.log2_fact, self.n, s.radius) - self.n as f64).exp2())
            .collect()
    }

    /// μ_j v_j for each sphere.
    fn sphere_masses(&self) -> Vec<f64> {
        self.spheres
            .iter()
            .map(|s| {
                (log2_binomial(&self.log2_fact, self.n, s.radius) - self.n as f64 + s.log2_value)
                    .exp2()
            })
            .collect()
    }

    /// Mass carried by the uniform component; E f = uniform_mass + Σ μ_j v_j.
    pub fn uniform_mass(&self) -> f64 {
        let measure: f64 = self.sphere_measures().iter().sum();
        self.uniform_value * (1.0 - measure)
    }

    pub fn mean(&self) -> f64 {
        self.uniform_mass() + self.sphere_masses().iter().sum::<f64>()
    }

    /// log₂ ‖f‖_q.
    pub fn log2_lq_norm(&self, q: f64) -> f64 {
        let mut terms: Vec<f64> = self
            .spheres
            .iter()
            .map(|s| {
                log2_binomial(&self.log2_fact, self.n, s.radius) - self.n as f64
                    + q * s.log2_value
            })
            .collect();
        let measure: f64 = self.sphere_measures().iter().sum();
        if self.uniform_value > 0.0 && measure < 1.0 {
            terms.push((1.0 - measure).log2() + q * self.uniform_value.log2());
        }
        log2_sum_exp(&terms) / q
    }

    /// Ent_q(f)/n for this mean-one profile.
    pub fn ent_q_rate(&self, q: f64) -> f64 {
        q / (q - 1.0) * self.log2_lq_norm(q) / self.n as f64
    }

    /// log₂ ⟨T_ε 1_{S_r}, 1_{S_s}⟩: the exact transition sum over distance
    /// classes between two spheres.
    fn log2_sphere_kernel(&self, r: usize, s: usize, e: f64) -> f64 {
        let n = self.n;
        if e <= 0.0 {
            return if r == s {
                log2_binomial(&self.log2_fact, n, s) - n as f64
            } else {
                f64::NEG_INFINITY
            };
        }
        let (le, l1e) = (e.log2(), (1.0 - e).log2());
        let dmin = r.abs_diff(s);
        let dmax = (r + s).min(2 * n - r - s);
        let mut terms = Vec::with_capacity((dmax - dmin) / 2 + 1);
        let mut d = dmin;
        while d <= dmax {
            let j = (d + s - r) / 2; // ones of x flipped off
            let k = (d + r - s) / 2; // zeros of x flipped on
            if j <= s && k <= n - s {
                terms.push(
                    log2_binomial(&self.log2_fact, s, j)
                        + log2_binomial(&self.log2_fact, n - s, k)
                        + d as f64 * le
                        + (n - d) as f64 * l1e,
                );
            }
            d += 2;
        }
        log2_binomial(&self.log2_fact, n, s) - n as f64 + log2_sum_exp(&terms)
    }

    /// log₂ ‖T_ε f‖₂², using ‖T_ε f‖₂² = ⟨T_{2ε(1-ε)} f, f⟩ piece by piece:
    /// with f = c + Σ w_j 1_{S_j}, w_j = v_j - c,
    /// ‖T_ε f‖₂² = c² + 2c Σ w_j μ_j + Σ_{i,j} w_i w_j ⟨T_{ε'} 1_{S_i}, 1_{S_j}⟩.
    pub fn log2_noisy_l2_sq(&self, eps: f64) -> f64 {
        let e2 = 2.0 * eps * (1.0 - eps);
        let c = self.uniform_value;
        let mut terms = vec![SignedLog2::from_f64(c * c)];
        let weights: Vec<SignedLog2> = self
            .spheres
            .iter()
            .map(|s| {
                signed_log2_sum(&[
                    SignedLog2::from_log2(s.log2_value),
                    SignedLog2::from_f64(-c),
                ])
            })
            .collect();
        for (s, w) in self.spheres.iter().zip(&weights) {
            let mu = log2_binomial(&self.log2_fact, self.n, s.radius) - self.n as f64;
            terms.push(w.mul(SignedLog2::from_f64(2.0 * c)).mul(SignedLog2::from_log2(mu)));
        }
        for (i, (si, wi)) in self.spheres.iter().zip(&weights).enumerate() {
            for (sj, wj) in self.spheres.iter().zip(&weights).skip(i) {
                let kernel = SignedLog2::from_log2(
                    self.log2_sphere_kernel(si.radius, sj.radius, e2),
                );
                let sym = if si.radius == sj.radius { 1.0 } else { 2.0 };
                terms.push(wi.mul(*wj).mul(kernel).mul(SignedLog2::from_f64(sym)));
            }
        }
        let total = signed_log2_sum(&terms);
        debug_assert!(total.sign > 0.0, "squared norm must be positive");
        total.log2
    }

    /// Ent₂(T_ε f)/n for this mean-one profile.
    pub fn ent2_noisy_rate(&self, eps: f64) -> f64 {
        self.log2_noisy_l2_sq(eps) / self.n as f64
    }

    /// The exponent t with ‖f‖_t = ‖T_ε f‖₂, found by bisection in t.
    pub fn empirical_kappa(&self, eps: f64) -> f64 {
        let target = 0.5 * self.log2_noisy_l2_sq(eps);
        let (mut lo, mut hi) = (1.0, 8.0);
        if self.log2_lq_norm(hi) < target {
            return hi;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.log2_lq_norm(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Materialize as a dense cube function (subject to the dimension cap).
    pub fn to_cube(&self) -> Result<CubeFunction> {
        let mut values = vec![self.uniform_value; 1usize << self.n];
        for x in 0..values.len() {
            let w = (x as u64).count_ones() as usize;
            if let Some(s) = self.spheres.iter().find(|s| s.radius == w) {
                values[x] = s.log2_value.exp2();
            }
        }
        CubeFunction::new(self.n, values)
    }
}

/// Builds the mean-one sphere mixture that approaches the chosen bound at
/// entropy rate x: sphere radii come from the maximizing level pairs, and
/// the smallest value shift δ ≥ 0 is applied so that Ent_q(f)/n ≤ x with
/// margin at most 1e-6.
pub fn tightness_profile(
    kind: TightnessKind,
    q: f64,
    eps: f64,
    x: f64,
    n: usize,
) -> Result<SphereProfile> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::ParamOutOfRange("x must lie strictly inside (0, 1)"));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::ParamOutOfRange("eps must lie strictly inside (0, 1/2)"));
    }
    if q <= 1.0 {
        return Err(Error::InvalidOrder(q));
    }
    let norm_rate = (q - 1.0) / q * x;
    let dom = OmegaDomain::new(q, norm_rate)?;
    let pairs: Vec<LevelPoint> = match kind {
        TightnessKind::Renyi2 => {
            let (_, argmax) = omega_max_phi_nu(&dom, eps)?;
            vec![argmax]
        }
        TightnessKind::Nhc => {
            let q0 = q0_of(eps);
            let y = norm_rate + 1.0 / q;
            let ratio = -x / phi_eps(1.0 - x, eps)?;
            if y <= 1.0 / q0 {
                // κ = q₀ regime: pair the norm-active level with a
                // slowly-vanishing top level; the achieved exponent tends
                // to q₀ from below as n grows.
                let alpha1 =
                    (1.0 / q0 - 1.0 / q - norm_rate) / (1.0 / q0 - 1.0 / q);
                let nu1 = (1.0 - alpha1) / q0;
                let delta = (n as f64).powf(-0.25).min(0.45 * x);
                vec![
                    LevelPoint { alpha: alpha1, nu: nu1 },
                    LevelPoint { alpha: 1.0 - delta, nu: delta },
                ]
            } else if ratio >= q {
                vec![dom.corner()]
            } else {
                let alpha0 = alpha0_solve(y, eps)?;
                vec![
                    LevelPoint { alpha: 0.0, nu: y },
                    LevelPoint { alpha: alpha0, nu: 1.0 - alpha0 },
                ]
            }
        }
    };
    let base: Vec<SphereComponent> = {
        let mut seen = Vec::<SphereComponent>::new();
        for p in &pairs {
            let sigma = crate::special::inv_binary_entropy(p.alpha)?;
            let radius = (sigma * n as f64).floor() as usize;
            if !seen.iter().any(|s| s.radius == radius) {
                seen.push(SphereComponent { radius, log2_value: p.nu * n as f64 });
            }
        }
        seen
    };

    let shifted = |delta: f64| -> Result<SphereProfile> {
        let spheres = base
            .iter()
            .map(|s| SphereComponent {
                radius: s.radius,
                log2_value: s.log2_value - delta * n as f64,
            })
            .collect();
        SphereProfile::normalized(n, spheres)
    };
    let feasible = |delta: f64| -> bool {
        match shifted(delta) {
            Ok(p) => p.ent_q_rate(q) <= x,
            Err(_) => false,
        }
    };
    if feasible(0.0) {
        return shifted(0.0);
    }
    let (mut lo, mut hi) = (0.0f64, 3.0f64);
    if !feasible(hi) {
        return Err(Error::ParamOutOfRange("no feasible value shift"));
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if let Ok(p) = shifted(hi) {
            let r = p.ent_q_rate(q);
            if r <= x && r >= x - 1e-6 {
                break;
            }
        }
    }
    shifted(hi)
}

/// Explicit-cube form of [`tightness_profile`] for dimensions under the cap.
pub fn tightness_cube(
    kind: TightnessKind,
    q: f64,
    eps: f64,
    x: f64,
    n: usize,
) -> Result<CubeFunction> {
    tightness_profile(kind, q, eps, x, n)?.to_cube()
}

/// Per-coordinate slack of the two bounds on a profile instance:
/// (bound at the instance's own entropy rate) minus (achieved rate).
pub fn profile_slack(profile: &SphereProfile, kind: TightnessKind, q: f64, eps: f64) -> Result<f64> {
    let xf = profile.ent_q_rate(q).clamp(0.0, 1.0);
    match kind {
        TightnessKind::Renyi2 => {
            Ok(psi_2q(xf, eps, q)? - profile.ent2_noisy_rate(eps))
        }
        TightnessKind::Nhc => Ok(kappa_2q(xf, eps, q)? - profile.empirical_kappa(eps)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::NoiseParam;
    use crate::special::{inv_binary_entropy, phi_prime_inv};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn omega_membership() {
        let dom = OmegaDomain::new(2.0, 0.2).unwrap();
        let corner = dom.corner();
        assert!(dom.contains(corner, OmegaVariant::Omega));
        assert!(dom.contains(
            LevelPoint { alpha: 0.0, nu: dom.norm_rate() + 1.0 / dom.q() },
            OmegaVariant::Omega
        ));
        assert!(!dom.contains(LevelPoint { alpha: 1.0, nu: 0.5 }, OmegaVariant::Omega));
        assert!(dom.contains(LevelPoint { alpha: 0.3, nu: -0.5 }, OmegaVariant::Omega0));
        assert!(!dom.contains(LevelPoint { alpha: 0.3, nu: -0.5 }, OmegaVariant::Omega));
        assert!(OmegaDomain::new(2.0, 0.6).is_err());
        assert!(OmegaDomain::new(0.9, 0.1).is_err());
    }

    #[test]
    fn boundary_max_matches_psi() {
        for (q, nr, eps) in [(2.0, 0.2, 0.1), (1.5, 0.15, 0.3), (3.0, 0.5, 0.2), (2.5, 0.05, 0.45)]
        {
            let dom = OmegaDomain::new(q, nr).unwrap();
            let (value, argmax) = omega_max_phi_nu(&dom, eps).unwrap();
            let psi = psi_2q(dom.entropy_rate(), eps, q).unwrap();
            assert!(close(value, psi / 2.0, 1e-6), "q={q} N={nr} eps={eps}");
            assert!(dom.contains(argmax, OmegaVariant::Omega));
        }
    }

    #[test]
    fn boundary_max_argmax_cases() {
        // steep case: maximum at the corner
        let (q, eps) = (1.5, 0.05);
        let dom = OmegaDomain::new(q, 0.05).unwrap();
        let corner = dom.corner();
        if crate::special::phi_prime(corner.alpha, eps).unwrap() >= 1.0 / q {
            let (_, argmax) = omega_max_phi_nu(&dom, eps).unwrap();
            assert!(close(argmax.alpha, corner.alpha, 1e-6));
        }
        // flat case: maximum at the interior stationary point
        let (q, eps) = (1.2, 0.35);
        let dom = OmegaDomain::new(q, 0.12).unwrap();
        let corner = dom.corner();
        if crate::special::phi_prime(corner.alpha, eps).unwrap() < 1.0 / q {
            let (_, argmax) = omega_max_phi_nu(&dom, eps).unwrap();
            let expected = phi_prime_inv(1.0 / q, eps).unwrap();
            assert!(close(argmax.alpha, expected, 1e-6));
        }
    }

    #[test]
    fn implicit_kappa_at_anchor_and_top() {
        let (q, eps) = (2.0, 0.15);
        let dom = OmegaDomain::new(q, 0.2).unwrap();
        let x = dom.entropy_rate();
        let anchor = LevelPoint { alpha: 0.1, nu: dom.norm_rate() + 0.9 / q };
        let at_anchor = implicit_kappa(&dom, anchor, anchor, eps).unwrap();
        let closed = (anchor.alpha - 1.0) / phi_eps(anchor.alpha, eps).unwrap();
        assert!(close(at_anchor, closed, 1e-9));

        let top = implicit_kappa(&dom, anchor, LevelPoint { alpha: 1.0, nu: 0.0 }, eps).unwrap();
        assert!(close(top, (1.0 - anchor.alpha) / anchor.nu, 1e-12));
        assert!(top > 0.0 && top < q0_of(eps));
        let _ = x;
    }

    #[test]
    fn implicit_kappa_below_envelope() {
        let (q, eps) = (1.8, 0.2);
        let dom = OmegaDomain::new(q, 0.3).unwrap();
        let anchor = dom.corner();
        for i in 1..40 {
            let alpha = i as f64 / 40.0;
            let p = LevelPoint { alpha, nu: dom.upper_nu(alpha).min(1.0 - alpha) };
            if !dom.contains(p, OmegaVariant::Omega) {
                continue;
            }
            let f = implicit_kappa(&dom, anchor, p, eps).unwrap();
            let envelope = (alpha - 1.0) / phi_eps(alpha, eps).unwrap();
            assert!(f <= envelope + 1e-9, "alpha = {alpha}: {f} > {envelope}");
        }
    }

    #[test]
    fn anchored_max_matches_corner_form() {
        let (q, eps) = (1.6, 0.25);
        for nr in [0.1, 0.2, 0.3] {
            let dom = OmegaDomain::new(q, nr).unwrap();
            let corner = dom.corner();
            let m = max_implicit_kappa(&dom, corner, eps).unwrap();
            let closed = -dom.entropy_rate() / phi_eps(corner.alpha, eps).unwrap();
            assert!(close(m, closed, 1e-5), "nr = {nr}: {m} vs {closed}");
        }
    }

    #[test]
    fn anchored_max_case3_form() {
        // pick parameters in the interior case and anchor at (0, N + 1/q)
        let (q, eps) = (3.0, 0.12);
        let dom = OmegaDomain::new(q, 0.55).unwrap();
        let corner = dom.corner();
        let ratio = -dom.entropy_rate() / phi_eps(corner.alpha, eps).unwrap();
        assert!(ratio < q, "test wants the interior case, ratio = {ratio}");
        let y = dom.norm_rate() + 1.0 / q;
        let anchor = LevelPoint { alpha: 0.0, nu: y };
        let m = max_implicit_kappa(&dom, anchor, eps).unwrap();
        let alpha0 = alpha0_solve(y, eps).unwrap();
        let closed = (alpha0 - 1.0) / phi_eps(alpha0, eps).unwrap();
        assert!(close(m, closed, 1e-5), "{m} vs {closed}");
        // case-3 chain: corner value ≤ anchored max ≤ the (0, N + 1/q) value
        let corner_m = max_implicit_kappa(&dom, corner, eps).unwrap();
        assert!(corner_m <= m + 1e-6);
    }

    #[test]
    fn alpha_star_contract() {
        let (q, eps) = (3.0, 0.12);
        let dom = OmegaDomain::new(q, 0.55).unwrap();
        let corner = dom.corner();
        let ratio = -dom.entropy_rate() / phi_eps(corner.alpha, eps).unwrap();
        assert!(ratio < q);

        // residual of the defining identity
        for alpha1 in [0.0, 0.05, 0.1] {
            let a = alpha_star(&dom, alpha1, eps).unwrap();
            let nu1 = dom.norm_rate() + (1.0 - alpha1) / q;
            let lhs = (a - 1.0) / phi_eps(a, eps).unwrap();
            let rhs = (a - alpha1) / (a - (1.0 - nu1));
            assert!(close(lhs, rhs, 1e-10), "alpha1 = {alpha1}: {lhs} vs {rhs}");
        }

        // alpha*(0) coincides with the alpha0 of the closed form
        let a0 = alpha_star(&dom, 0.0, eps).unwrap();
        let y = dom.norm_rate() + 1.0 / q;
        assert!(close(a0, alpha0_solve(y, eps).unwrap(), 1e-8));

        // strictly decreasing in alpha1
        let mut prev = f64::INFINITY;
        for i in 0..8 {
            let alpha1 = 0.02 * i as f64;
            let a = alpha_star(&dom, alpha1, eps).unwrap();
            assert!(a < prev, "alpha* must decrease");
            prev = a;
        }

        // wrong case errors
        let shallow = OmegaDomain::new(1.5, 0.05).unwrap();
        let shallow_ratio =
            -shallow.entropy_rate() / phi_eps(shallow.corner().alpha, 0.05).unwrap();
        if shallow_ratio >= 1.5 {
            assert!(matches!(alpha_star(&shallow, 0.0, 0.05), Err(Error::CaseMismatch(_))));
        }
    }

    #[test]
    fn profile_construction_contracts() {
        let profile = tightness_profile(TightnessKind::Renyi2, 2.0, 0.2, 0.5, 60).unwrap();
        assert!(close(profile.mean(), 1.0, 1e-12));
        assert!(profile.ent_q_rate(2.0) <= 0.5 + 1e-12);
        assert!(profile.ent_q_rate(2.0) >= 0.4, "profile should carry real entropy");
        let r = profile.spheres()[0].radius;
        let sigma = inv_binary_entropy(
            omega_max_phi_nu(&OmegaDomain::new(2.0, 0.25).unwrap(), 0.2).unwrap().1.alpha,
        )
        .unwrap();
        assert_eq!(r, (sigma * 60.0).floor() as usize);
    }

    #[test]
    fn profile_matches_explicit_cube() {
        let (q, eps, x, n) = (2.0, 0.2, 0.5, 12);
        let profile = tightness_profile(TightnessKind::Renyi2, q, eps, x, n).unwrap();
        let cube = profile.to_cube().unwrap();
        assert!(close(cube.mean(), 1.0, 1e-12));

        let ent_profile = profile.ent_q_rate(q);
        let ent_cube = cube.renyi_entropy(q).unwrap() / n as f64;
        assert!(close(ent_profile, ent_cube, 1e-10), "{ent_profile} vs {ent_cube}");

        let noisy = cube.noise(NoiseParam::new(eps).unwrap());
        let ent2_cube = noisy.squared().mean().log2() / n as f64;
        let ent2_profile = profile.ent2_noisy_rate(eps);
        assert!(close(ent2_profile, ent2_cube, 1e-9), "{ent2_profile} vs {ent2_cube}");
    }

    #[test]
    fn two_sphere_profile_matches_explicit_cube() {
        let (q, eps, x, n) = (3.0, 0.12, 0.55, 12);
        let profile = tightness_profile(TightnessKind::Nhc, q, eps, x, n).unwrap();
        assert!(profile.spheres().len() == 2 || profile.spheres().len() == 1);
        let cube = profile.to_cube().unwrap();
        assert!(close(cube.mean(), 1.0, 1e-12));
        let noisy_l2 = cube.noise(NoiseParam::new(eps).unwrap()).lq_norm(2.0).unwrap();
        assert!(close(profile.log2_noisy_l2_sq(eps), 2.0 * noisy_l2.log2(), 1e-9));
        // empirical exponent matches a direct norm solve on the cube
        let kap = profile.empirical_kappa(eps);
        let norm_at = cube.lq_norm(kap).unwrap();
        assert!(close(norm_at.log2(), noisy_l2.log2(), 1e-9));
    }

    #[test]
    fn profile_serialization_roundtrip() {
        let profile = tightness_profile(TightnessKind::Nhc, 3.0, 0.12, 0.55, 50).unwrap();
        let js = serde_json::to_string(&profile).unwrap();
        assert!(js.contains("radius_fraction"));
        let back: SphereProfile = serde_json::from_str(&js).unwrap();
        assert_eq!(back.spheres().len(), profile.spheres().len());
        assert!(close(back.ent_q_rate(3.0), profile.ent_q_rate(3.0), 1e-12));
    }
}
