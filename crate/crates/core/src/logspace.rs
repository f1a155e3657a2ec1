//! Small log₂-domain toolkit backing the analytic (no 2ⁿ array) evaluation
//! of sphere mixtures: log-binomials via a cumulative log-factorial table
//! and signed log-domain accumulation.

/// log₂(k!) for k = 0..=n, by direct summation. Plenty accurate for the
/// dimensions used here (relative error ~ sqrt(n) ulp).
pub fn log2_factorial_table(n: usize) -> Vec<f64> {
    let mut table = vec![0.0; n + 1];
    let mut acc = 0.0f64;
    for k in 1..=n {
        acc += (k as f64).log2();
        table[k] = acc;
    }
    table
}

/// log₂ C(n, k) given the table from [`log2_factorial_table`].
pub fn log2_binomial(table: &[f64], n: usize, k: usize) -> f64 {
    debug_assert!(k <= n && n < table.len());
    table[n] - table[k] - table[n - k]
}

/// log₂(Σ 2^{t}) over the given exponents, stable under large magnitudes.
pub fn log2_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return f64::NEG_INFINITY;
    }
    let s: f64 = terms.iter().map(|t| (t - m).exp2()).sum();
    m + s.log2()
}

/// A signed quantity kept as (sign, log₂|value|).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog2 {
    pub sign: f64,
    pub log2: f64,
}

impl SignedLog2 {
    pub const ZERO: SignedLog2 = SignedLog2 { sign: 0.0, log2: f64::NEG_INFINITY };

    pub fn from_f64(v: f64) -> SignedLog2 {
        if v == 0.0 {
            SignedLog2::ZERO
        } else {
            SignedLog2 { sign: v.signum(), log2: v.abs().log2() }
        }
    }

    pub fn from_log2(log2: f64) -> SignedLog2 {
        SignedLog2 { sign: 1.0, log2 }
    }

    pub fn mul(self, other: SignedLog2) -> SignedLog2 {
        if self.sign == 0.0 || other.sign == 0.0 {
            return SignedLog2::ZERO;
        }
        SignedLog2 { sign: self.sign * other.sign, log2: self.log2 + other.log2 }
    }
}

/// Signed log-domain sum: factors out the dominant magnitude.
pub fn signed_log2_sum(terms: &[SignedLog2]) -> SignedLog2 {
    let m = terms
        .iter()
        .filter(|t| t.sign != 0.0)
        .map(|t| t.log2)
        .fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return SignedLog2::ZERO;
    }
    let s: f64 = terms
        .iter()
        .filter(|t| t.sign != 0.0)
        .map(|t| t.sign * (t.log2 - m).exp2())
        .sum();
    if s == 0.0 {
        return SignedLog2::ZERO;
    }
    SignedLog2 { sign: s.signum(), log2: m + s.abs().log2() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_match_direct() {
        let table = log2_factorial_table(30);
        assert_eq!(log2_binomial(&table, 5, 0), 0.0);
        assert!((log2_binomial(&table, 4, 2) - 6.0f64.log2()).abs() < 1e-12);
        assert!((log2_binomial(&table, 30, 15) - 155117520.0f64.log2()).abs() < 1e-10);
    }

    #[test]
    fn sum_exp_stability() {
        let v = log2_sum_exp(&[1000.0, 1000.0]);
        assert!((v - 1001.0).abs() < 1e-12);
        assert_eq!(log2_sum_exp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn signed_sums_cancel() {
        let a = SignedLog2::from_f64(3.0);
        let b = SignedLog2::from_f64(-2.0);
        let s = signed_log2_sum(&[a, b]);
        assert_eq!(s.sign, 1.0);
        assert!((s.log2 - 0.0).abs() < 1e-12);
        let z = signed_log2_sum(&[a, SignedLog2::from_f64(-3.0)]);
        assert_eq!(z.sign, 0.0);
    }
}
