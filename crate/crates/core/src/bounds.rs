//! Inequality checks on concrete cube functions. Each check produces a
//! [`CheckReport`] with the two sides and the slack rhs - lhs; a negative
//! slack beyond -1e-9 marks a violation. Norm inequalities are reported in
//! the log₂ domain so slacks stay comparable across dimensions.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::cube::{CubeFunction, NoiseParam};
use crate::error::{Error, Result};
use crate::special::{
    kappa_2q, log_sobolev_c, mgl_psi, phi_eps, psi_2q, q0_of, big_phi,
};

/// Slack below this is a violation.
pub const SLACK_TOL: f64 = -1e-9;

/// Outcome of one inequality instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
    /// Auxiliary quantities (κ used, entropy rates, ...).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
}

impl CheckReport {
    fn new(name: &str, n: usize, eps: Option<f64>, q: Option<f64>, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        CheckReport {
            name: name.to_string(),
            n,
            eps,
            q,
            lhs,
            rhs,
            slack,
            pass: slack >= SLACK_TOL,
            extra: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }

    /// CSV row matching [`CheckReport::csv_header`].
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.name,
            self.n,
            self.eps.map_or(String::new(), |v| v.to_string()),
            self.q.map_or(String::new(), |v| v.to_string()),
            self.lhs,
            self.rhs,
            self.slack,
            self.pass
        )
    }

    pub fn csv_header() -> &'static str {
        "name,n,eps,q,lhs,rhs,slack,pass"
    }
}

/// log₂ clamped away from -∞ so reports stay finite (and JSON-safe).
fn log2_safe(v: f64) -> f64 {
    v.max(f64::MIN_POSITIVE).log2()
}

/// Baseline hypercontractivity: ‖T_ε f‖_q ≤ ‖f‖_p with p = 1 + (1-2ε)²(q-1).
/// Reported in log₂ scale.
pub fn check_hc_baseline(f: &CubeFunction, eps: NoiseParam, q: f64) -> Result<CheckReport> {
    if q <= 1.0 {
        return Err(Error::InvalidOrder(q));
    }
    let e = eps.get();
    let p = 1.0 + (1.0 - 2.0 * e) * (1.0 - 2.0 * e) * (q - 1.0);
    let lhs = log2_safe(f.noise(eps).lq_norm(q)?);
    let rhs = log2_safe(f.lq_norm(p)?);
    Ok(CheckReport::new("hc_baseline", f.n(), Some(e), Some(q), lhs, rhs).with("p", p))
}

/// Mrs. Gerber: Ent(T_ε f) ≤ n E f · ψ(Ent(f) / (n E f), ε) for f ≥ 0.
pub fn check_mgl(f: &CubeFunction, eps: NoiseParam) -> Result<CheckReport> {
    let e = eps.get();
    let ent = f.shannon_entropy()?;
    let mean = f.mean();
    let lhs = f.noise(eps).shannon_entropy()?;
    let rhs = if f.n() == 0 {
        0.0
    } else {
        let x = (ent / (f.n() as f64 * mean)).clamp(0.0, 1.0);
        f.n() as f64 * mean * mgl_psi(x, e)?
    };
    Ok(CheckReport::new("mgl", f.n(), Some(e), None, lhs, rhs).with("ent_rate",
        if f.n() == 0 { 0.0 } else { ent / (f.n() as f64 * mean) }))
}

/// Linearized Mrs. Gerber: Ent(T_ε f) ≤ (1-2ε)² Ent(f).
pub fn check_mgl_linear(f: &CubeFunction, eps: NoiseParam) -> Result<CheckReport> {
    let e = eps.get();
    let lhs = f.noise(eps).shannon_entropy()?;
    let rhs = (1.0 - 2.0 * e) * (1.0 - 2.0 * e) * f.shannon_entropy()?;
    Ok(CheckReport::new("mgl_linear", f.n(), Some(e), None, lhs, rhs))
}

/// Second-Rényi Mrs. Gerber: Ent₂(T_ε g)/n ≤ ψ₂,q(Ent_q(g)/n, ε) for the
/// mean-one normalization g = f / E f.
pub fn check_renyi2_mgl(f: &CubeFunction, eps: NoiseParam, q: f64) -> Result<CheckReport> {
    let e = eps.get();
    let g = f.normalized()?;
    let n = f.n();
    if n == 0 {
        return Ok(CheckReport::new("renyi2_mgl", 0, Some(e), Some(q), 0.0, 0.0));
    }
    let x = (g.renyi_entropy(q)? / n as f64).clamp(0.0, 1.0);
    let lhs = g.noise(eps).renyi_entropy(2.0)? / n as f64;
    let rhs = psi_2q(x, e, q)?;
    Ok(CheckReport::new("renyi2_mgl", n, Some(e), Some(q), lhs, rhs).with("ent_q_rate", x))
}

/// The exponent κ₂,q(Ent_q(f/‖f‖₁)/n, ε) the improved bound grants f.
pub fn kappa_for(f: &CubeFunction, eps: NoiseParam, q: f64) -> Result<f64> {
    let n = f.n();
    let x = if n == 0 { 0.0 } else { (f.renyi_entropy_normalized(q)? / n as f64).clamp(0.0, 1.0) };
    kappa_2q(x, eps.get(), q)
}

/// Entropy-aware hypercontractivity: ‖T_ε f‖₂ ≤ ‖f‖_κ. Log₂ scale.
pub fn check_nhc(f: &CubeFunction, eps: NoiseParam, q: f64) -> Result<CheckReport> {
    let e = eps.get();
    let kappa = kappa_for(f, eps, q)?;
    let lhs = log2_safe(f.noise(eps).lq_norm(2.0)?);
    let rhs = log2_safe(f.lq_norm(kappa)?);
    Ok(CheckReport::new("nhc", f.n(), Some(e), Some(q), lhs, rhs).with("kappa", kappa))
}

/// Dominance of the entropy-aware bound over the baseline at the ℓ₂ target:
/// ‖f‖_κ ≤ ‖f‖_{q₀}, since κ ≤ q₀. Log₂ scale.
pub fn check_nhc_dominance(f: &CubeFunction, eps: NoiseParam, q: f64) -> Result<CheckReport> {
    let e = eps.get();
    let kappa = kappa_for(f, eps, q)?;
    let lhs = log2_safe(f.lq_norm(kappa)?);
    let rhs = log2_safe(f.lq_norm(q0_of(e))?);
    Ok(CheckReport::new("nhc_dominance", f.n(), Some(e), Some(q), lhs, rhs).with("kappa", kappa))
}

/// The fixed point q* of F(q) = κ₂,q(Ent_q(f/‖f‖₁)/n, ε): the best exponent
/// the bound can grant f. Solves -x(q)/φ_ε(1-x(q)) = q on (1, q₀] by
/// bisection; F(q*) = q* and F is minimized there.
pub fn best_q(f: &CubeFunction, eps: NoiseParam) -> Result<f64> {
    let e = eps.get();
    if !(e > 0.0 && e < 0.5) {
        return Err(Error::ParamOutOfRange("best_q needs 0 < eps < 1/2"));
    }
    let n = f.n();
    if n == 0 {
        return Err(Error::ConstantFunction);
    }
    let g = f.abs();
    let l1 = g.lq_norm(1.0)?;
    if l1 == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let spread = g.values().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    if spread.1 - spread.0 <= 1e-14 * spread.1.abs().max(1.0) {
        return Err(Error::ConstantFunction);
    }
    let q0 = q0_of(e);
    let x_of = |q: f64| -> Result<f64> {
        Ok((f.renyi_entropy_normalized(q)? / n as f64).clamp(f64::MIN_POSITIVE, 1.0))
    };
    let excess = |q: f64| -> Result<f64> {
        let x = x_of(q)?;
        Ok(-x / phi_eps(1.0 - x, e)? - q)
    };
    let (mut lo, mut hi) = (1.0 + 1e-9, q0);
    if excess(hi)? >= 0.0 {
        return Ok(hi);
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Log-Sobolev with the entropy-dependent constant:
/// E(f,f) ≥ C(Ent₂(|f|/‖f‖₁)/n) · Ent(f²). The report also carries the
/// Gross baseline 2 ln 2 · Ent(f²).
pub fn check_log_sobolev(f: &CubeFunction) -> Result<CheckReport> {
    let n = f.n();
    let dirichlet = f.dirichlet_form(f)?;
    let ent_sq = f.squared().shannon_entropy()?;
    let x = if n == 0 { 0.0 } else { (f.renyi_entropy_normalized(2.0)? / n as f64).clamp(0.0, 1.0) };
    let c = log_sobolev_c(x)?;
    let entropy_bound = ent_sq * c;
    let gross = 2.0 * std::f64::consts::LN_2 * ent_sq;
    // slack convention wants the dominating side on the right
    Ok(CheckReport::new("log_sobolev", n, None, None, entropy_bound, dirichlet)
        .with("c", c)
        .with("gross_rhs", gross)
        .with("ent2_rate", x))
}

/// Bounded-support inner product: for f supported on 2^{xn} points,
/// ⟨T_ε f, f⟩ ≤ 2^{(2Φ(x,ε) + 1 - x) n} ‖f‖₂². Log₂ scale.
pub fn check_bounded_support(f: &CubeFunction, eps: NoiseParam) -> Result<CheckReport> {
    let e = eps.get();
    let support = f.support_size();
    if support == 0 {
        return Err(Error::ZeroFunction);
    }
    let n = f.n();
    let x = if n == 0 { 0.0 } else { (support as f64).log2() / n as f64 };
    let lhs = log2_safe(f.noisy_inner_product(eps));
    let l2 = f.lq_norm(2.0)?;
    let rhs = (2.0 * big_phi(x, e)? + 1.0 - x) * n as f64 + log2_safe(l2 * l2);
    Ok(CheckReport::new("bounded_support", n, Some(e), None, lhs, rhs).with("support_x", x))
}

/// Hamming ball {x : |x| ≤ r} as a vertex list.
pub fn hamming_ball_set(n: usize, r: usize) -> Result<Vec<u64>> {
    if r > n || n > crate::cube::max_n() {
        return Err(Error::RadiusOutOfRange { n, r });
    }
    Ok((0..1u64 << n).filter(|x| (x.count_ones() as usize) <= r).collect())
}

/// Maximal adjacency eigenvalue of the subgraph induced by `set`, by
/// shifted power iteration per connected component (the shift by n makes
/// the dominant eigenvalue simple on bipartite components).
pub fn max_eigenvalue(n: usize, set: &[u64]) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if n > crate::cube::max_n() {
        return Err(Error::DimensionTooLarge { n, cap: crate::cube::max_n() });
    }
    let size = 1usize << n;
    let mut index = vec![-1i64; size];
    let mut vertices = Vec::with_capacity(set.len());
    for &mask in set {
        if mask >= size as u64 {
            return Err(Error::VertexOutOfRange { mask, n });
        }
        if index[mask as usize] < 0 {
            index[mask as usize] = vertices.len() as i64;
            vertices.push(mask as usize);
        }
    }
    let m = vertices.len();
    // connected components by BFS over cube edges inside the set
    let mut component = vec![usize::MAX; m];
    let mut n_components = 0;
    let mut queue = Vec::new();
    for start in 0..m {
        if component[start] != usize::MAX {
            continue;
        }
        component[start] = n_components;
        queue.clear();
        queue.push(start);
        while let Some(v) = queue.pop() {
            let mask = vertices[v];
            for bit in 0..n {
                let w = index[mask ^ (1usize << bit)];
                if w >= 0 && component[w as usize] == usize::MAX {
                    component[w as usize] = n_components;
                    queue.push(w as usize);
                }
            }
        }
        n_components += 1;
    }

    let mut best = 0.0f64;
    let mut rng_state = 0x9e3779b97f4a7c15u64;
    let mut next_uniform = move || {
        // splitmix64 into [0.5, 1.5)
        rng_state = rng_state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = rng_state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z = z ^ (z >> 31);
        0.5 + (z >> 11) as f64 / (1u64 << 53) as f64
    };
    for comp in 0..n_components {
        let members: Vec<usize> = (0..m).filter(|&v| component[v] == comp).collect();
        if members.len() == 1 {
            continue; // isolated vertex: eigenvalue 0
        }
        let local: Vec<usize> = members.iter().map(|&v| vertices[v]).collect();
        let mut local_index = std::collections::HashMap::new();
        for (i, &mask) in local.iter().enumerate() {
            local_index.insert(mask, i);
        }
        let adj: Vec<Vec<u32>> = local
            .iter()
            .map(|&mask| {
                (0..n)
                    .filter_map(|bit| local_index.get(&(mask ^ (1usize << bit))).map(|&i| i as u32))
                    .collect()
            })
            .collect();
        let k = local.len();
        let mut v: Vec<f64> = (0..k).map(|_| next_uniform()).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        let shift = n as f64;
        let mut lambda_prev = f64::INFINITY;
        let mut lambda = 0.0;
        for _ in 0..100_000 {
            let mut av = vec![0.0f64; k];
            for (i, neigh) in adj.iter().enumerate() {
                let mut acc = 0.0;
                for &j in neigh {
                    acc += v[j as usize];
                }
                av[i] = acc;
            }
            lambda = v.iter().zip(&av).map(|(a, b)| a * b).sum::<f64>();
            let mut w: Vec<f64> = av.iter().zip(&v).map(|(a, b)| a + shift * b).collect();
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            w.iter_mut().for_each(|x| *x /= norm);
            v = w;
            if (lambda - lambda_prev).abs() <= 1e-11 * lambda.abs().max(1.0) {
                break;
            }
            lambda_prev = lambda;
        }
        best = best.max(lambda);
    }
    Ok(best)
}

/// Induced-subgraph eigenvalue bound: with x = (1/n) log₂(2ⁿ/|A|),
/// λ(A) ≤ n - C(x) · log₂(2ⁿ/|A|) / 2. Equality holds for a single vertex.
/// The `tightness` extra is the gap ratio (n - rhs)/(n - λ) ∈ (0, 1],
/// largest for balls of small radius fraction.
pub fn eigen_bound_check(n: usize, set: &[u64]) -> Result<CheckReport> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut unique: Vec<u64> = set.to_vec();
    unique.sort_unstable();
    unique.dedup();
    if unique.len() >= 1usize << n {
        return Err(Error::FullCube);
    }
    let lambda = max_eigenvalue(n, &unique)?;
    let deficit = n as f64 - (unique.len() as f64).log2();
    let x = deficit / n as f64;
    let rhs = n as f64 - 0.5 * log_sobolev_c(x)? * deficit;
    let tightness = if lambda < n as f64 { (n as f64 - rhs) / (n as f64 - lambda) } else { 1.0 };
    Ok(CheckReport::new("eigen", n, None, None, lambda, rhs)
        .with("set_size", unique.len() as f64)
        .with("x", x)
        .with("tightness", tightness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{sphere_mixture, sphere_indicator};

    fn noise(e: f64) -> NoiseParam {
        NoiseParam::new(e).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn hc_baseline_constant_is_equality() {
        let f = CubeFunction::constant(5, 2.5).unwrap();
        let rep = check_hc_baseline(&f, noise(0.2), 2.0).unwrap();
        assert!(rep.pass);
        assert!(close(rep.slack, 0.0, 1e-12));
    }

    #[test]
    fn hc_baseline_half_noise() {
        let f = sphere_mixture(5, 2, 2.0).unwrap();
        let rep = check_hc_baseline(&f, noise(0.5), 3.0).unwrap();
        assert!(rep.pass);
        // lhs = log |E f| = 0, rhs = log ‖f‖₁ = 0
        assert!(close(rep.lhs, 0.0, 1e-12));
        assert!(close(rep.rhs, 0.0, 1e-12));
    }

    #[test]
    fn mgl_constant_zero_both_sides() {
        let f = CubeFunction::constant(4, 3.0).unwrap();
        let rep = check_mgl(&f, noise(0.1)).unwrap();
        assert!(close(rep.lhs, 0.0, 1e-12));
        assert!(close(rep.rhs, 0.0, 1e-12));
        let lin = check_mgl_linear(&f, noise(0.1)).unwrap();
        assert!(close(lin.slack, 0.0, 1e-12));
    }

    #[test]
    fn mgl_product_function_equality() {
        // product of equal marginals: Eq (2) is tight
        for n in 2..=6 {
            let (g0, g1) = (1.6, 0.4);
            let values: Vec<f64> = (0..1usize << n)
                .map(|x| {
                    (0..n)
                        .map(|i| if x >> i & 1 == 1 { g1 } else { g0 })
                        .product()
                })
                .collect();
            let f = CubeFunction::new(n, values).unwrap();
            for e in [0.1, 0.3] {
                let rep = check_mgl(&f, noise(e)).unwrap();
                assert!(rep.slack.abs() <= 1e-8, "n={n} e={e}: slack {}", rep.slack);
            }
        }
    }

    #[test]
    fn renyi2_constant_and_mixture() {
        let f = CubeFunction::constant(4, 1.0).unwrap();
        let rep = check_renyi2_mgl(&f, noise(0.2), 2.0).unwrap();
        assert!(rep.pass);
        assert!(rep.lhs.abs() < 1e-12);

        let m = sphere_mixture(8, 2, 8.0).unwrap();
        for e in [0.05, 0.25, 0.45] {
            for q in [1.5, 2.0, 3.0] {
                let rep = check_renyi2_mgl(&m, noise(e), q).unwrap();
                assert!(rep.pass, "e={e} q={q}: slack {}", rep.slack);
            }
        }
    }

    #[test]
    fn nhc_constant_recovers_baseline() {
        let f = CubeFunction::constant(5, 2.0).unwrap();
        let e = 0.2;
        let kappa = kappa_for(&f, noise(e), 2.0).unwrap();
        assert!(close(kappa, q0_of(e), 1e-12));
        let nhc = check_nhc(&f, noise(e), 2.0).unwrap();
        let base = check_hc_baseline(&f, noise(e), 2.0).unwrap();
        assert!(close(nhc.rhs, base.rhs, 1e-12));
    }

    #[test]
    fn nhc_half_noise_kappa_one() {
        let f = sphere_mixture(6, 2, 3.0).unwrap();
        let kappa = kappa_for(&f, noise(0.5), 2.0).unwrap();
        assert!(close(kappa, 1.0, 1e-12));
        let rep = check_nhc(&f, noise(0.5), 2.0).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn nhc_sign_changing() {
        let vals: Vec<f64> = (0..64).map(|i| ((i * 97 % 13) as f64) - 6.0).collect();
        let f = CubeFunction::new(6, vals).unwrap();
        for e in [0.05, 0.2, 0.4] {
            for q in [1.2, 2.0, 3.0] {
                let rep = check_nhc(&f, noise(e), q).unwrap();
                assert!(rep.pass, "e={e} q={q}: slack {}", rep.slack);
            }
        }
    }

    #[test]
    fn best_q_contract() {
        let f = sphere_mixture(8, 3, 4.0).unwrap();
        let e = 1e-3;
        let q_star = best_q(&f, noise(e)).unwrap();
        assert!(q_star > 1.9 && q_star < 2.0, "q* = {q_star}");
        // fixed point: F(q*) = q*
        let kappa = kappa_for(&f, noise(e), q_star).unwrap();
        assert!(close(kappa, q_star, 1e-8), "F(q*) = {kappa} vs q* = {q_star}");

        // minimality over a q grid, and y(q) strictly decreasing
        let e = 0.15;
        let q_star = best_q(&f, noise(e)).unwrap();
        let kappa_star = kappa_for(&f, noise(e), q_star).unwrap();
        let mut y_prev = f64::INFINITY;
        let mut q = 1.01;
        while q <= 4.0 {
            let kappa = kappa_for(&f, noise(e), q).unwrap();
            assert!(kappa_star <= kappa + 1e-9, "q = {q}");
            let x = f.renyi_entropy_normalized(q).unwrap() / 8.0;
            let y = (q - 1.0) / q * x + 1.0 / q;
            assert!(y < y_prev, "y(q) must decrease");
            y_prev = y;
            q += 0.05;
        }

        assert!(best_q(&CubeFunction::constant(4, 1.0).unwrap(), noise(0.1)).is_err());
    }

    #[test]
    fn log_sobolev_dictator() {
        // f(x) = x₁ on n = 3: E(f,f) = 1, Ent(f²) = 1/2
        let n = 3;
        let values: Vec<f64> = (0..8).map(|x| (x & 1) as f64).collect();
        let f = CubeFunction::new(n, values).unwrap();
        let rep = check_log_sobolev(&f).unwrap();
        assert!(close(rep.rhs, 1.0, 1e-12), "dirichlet form");
        assert!(rep.pass);
        let gross = rep.extra["gross_rhs"];
        assert!(close(gross, 2.0 * std::f64::consts::LN_2 * 0.5, 1e-12));
        assert!(rep.lhs >= gross - 1e-12);
    }

    #[test]
    fn log_sobolev_point_mass_equality() {
        // the single-point indicator saturates the bound exactly
        let n = 5;
        let mut v = vec![0.0; 32];
        v[0] = 1.0;
        let f = CubeFunction::new(n, v).unwrap();
        let rep = check_log_sobolev(&f).unwrap();
        assert!(close(rep.slack, 0.0, 1e-10), "slack = {}", rep.slack);
    }

    #[test]
    fn bounded_support_cases() {
        // point mass: equality up to float noise
        let n = 6;
        let mut v = vec![0.0; 64];
        v[0] = 3.0;
        let f = CubeFunction::new(n, v).unwrap();
        for e in [0.1, 0.3] {
            let rep = check_bounded_support(&f, noise(e)).unwrap();
            assert!(rep.pass);
            assert!(close(rep.slack, 0.0, 1e-10), "e={e}: slack {}", rep.slack);
            // direct oracle: ⟨T_ε δ, δ⟩ = (1-ε)ⁿ value² / 2ⁿ
            let direct = (1.0 - e).powi(n as i32) * 9.0 / 64.0;
            assert!(close(rep.lhs, direct.log2(), 1e-10));
        }
        // full support: rhs reduces to ‖f‖₂² since Φ(1, ε) = 0
        let g = CubeFunction::new(3, (1..=8).map(|i| i as f64).collect()).unwrap();
        let rep = check_bounded_support(&g, noise(0.2)).unwrap();
        let l2 = g.lq_norm(2.0).unwrap();
        assert!(close(rep.rhs, (l2 * l2).log2(), 1e-10));
        assert!(rep.pass);
    }

    #[test]
    fn bounded_support_sphere_nearly_tight() {
        // sphere of radius H⁻¹(x)·n: the gap is only polynomial in n
        let n = 16;
        let r = 4;
        let f = sphere_indicator(n, r).unwrap();
        let rep = check_bounded_support(&f, noise(0.2)).unwrap();
        assert!(rep.pass);
        // within a poly(n) factor: slack (in bits) is O(log n)
        assert!(rep.slack <= 1.5 * (n as f64).log2(), "slack = {}", rep.slack);
    }

    #[test]
    fn eigen_single_point_equality() {
        let rep = eigen_bound_check(5, &[7]).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert!(close(rep.rhs, 0.0, 1e-9));
        assert!(rep.pass);
    }

    #[test]
    fn eigen_star_graph() {
        for n in [4usize, 9, 14] {
            let ball = hamming_ball_set(n, 1).unwrap();
            let lambda = max_eigenvalue(n, &ball).unwrap();
            assert!(close(lambda, (n as f64).sqrt(), 1e-8), "n = {n}: {lambda}");
            let rep = eigen_bound_check(n, &ball).unwrap();
            assert!(rep.pass);
        }
    }

    #[test]
    fn eigen_disconnected_components() {
        // two antipodal points in n = 3 plus an edge pair: max is the edge
        let set = [0u64, 7, 1];
        let lambda = max_eigenvalue(3, &set).unwrap();
        assert!(close(lambda, 1.0, 1e-9), "{lambda}");
    }

    #[test]
    fn eigen_errors() {
        assert!(matches!(eigen_bound_check(3, &[]), Err(Error::EmptySet)));
        let all: Vec<u64> = (0..8).collect();
        assert!(matches!(eigen_bound_check(3, &all), Err(Error::FullCube)));
    }
}
