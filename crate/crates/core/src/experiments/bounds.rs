//! Closed-form bounds, evaluated in log space.
//!
//! Every bound whose square is an integer is cross-checked against an exact
//! big-integer evaluation when it is constructed.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};

/// A positive real carried as its base-10 logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bound {
    pub log10: f64,
}

impl Bound {
    pub fn from_ln(ln: f64) -> Self {
        Bound { log10: ln / std::f64::consts::LN_10 }
    }

    pub fn from_value(x: f64) -> Self {
        Bound { log10: x.log10() }
    }

    /// Linear value; `inf` when it does not fit an `f64`.
    pub fn value(&self) -> f64 {
        10f64.powf(self.log10)
    }

    pub fn scale(self, c: f64) -> Self {
        Bound { log10: self.log10 + c.log10() }
    }

    /// `|x| ≤ bound + tol`, decided in log space once `x` is far from the
    /// bound.
    pub fn admits(&self, x: f64, tol: f64) -> bool {
        if self.log10 > 300.0 {
            return x.log10() <= self.log10;
        }
        x <= self.value() + tol
    }

    /// `log10(x / bound)`; `-inf` for `x = 0`.
    pub fn log10_ratio(&self, x: f64) -> f64 {
        x.log10() - self.log10
    }

    pub fn ratio(&self, x: f64) -> f64 {
        10f64.powf(self.log10_ratio(x))
    }
}

/// Natural log of an arbitrary-precision integer.
pub(crate) fn ln_big(x: &BigUint) -> f64 {
    let shift = x.bits().saturating_sub(64);
    let top = (x >> shift).iter_u64_digits().next().unwrap_or(0) as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Compare a log-space evaluation `ln B` with the exact integer `B²`.
fn cross_check(ln: f64, square: &BigUint, what: &str) -> Result<()> {
    let exact = ln_big(square) / 2.0;
    if (exact - ln).abs() > 1e-9 * ln.abs().max(1.0) {
        return Err(Error::Validation(format!(
            "{what}: log-space value {ln} disagrees with exact value {exact}"
        )));
    }
    Ok(())
}

/// `n` with `x = q^n`, `0 ≤ n ≤ max_n`.
pub fn log_q_exact(x: u64, q: u64, max_n: u32) -> Result<u32> {
    let err = Error::XNotPowerOfQ { x, q, max_n };
    let mut acc = 1u64;
    for n in 0..=max_n {
        if acc == x {
            return Ok(n);
        }
        acc = match acc.checked_mul(q) {
            Some(a) => a,
            None => break,
        };
    }
    Err(err)
}

/// `√q · X^{1/2} · |g|^{log_q(2r + c)} = q^{(1+n)/2}·(2r + c)^m` for `X = q^n`.
pub fn mainres_bound(q: u64, x: u64, m: u32, r: u32, c: u32) -> Result<Bound> {
    let n = log_q_exact(x, q, m)?;
    if r == 0 {
        return Err(Error::InvalidMetadata("rank must be at least 1".into()));
    }
    let base = 2 * r as u64 + c as u64;
    let ln = (1.0 + n as f64) / 2.0 * (q as f64).ln() + m as f64 * (base as f64).ln();
    let square = BigUint::from(q).pow(1 + n) * BigUint::from(base).pow(2 * m);
    cross_check(ln, &square, "mainres bound")?;
    Ok(Bound::from_ln(ln))
}

/// `q^{(n+1)/2}·max{deg_T F + 2 deg_T b + 2, 2 deg_T b + 2}^m`, a degree of
/// `−∞` (`None`) counting as 0.
pub fn hooley_cor_bound(q: u64, n: u32, m: u32, deg_f: Option<u32>, deg_b: Option<u32>) -> Result<Bound> {
    if n > m {
        return Err(Error::NTooLarge { n, m });
    }
    let (f, b) = (deg_f.unwrap_or(0) as u64, deg_b.unwrap_or(0) as u64);
    let base = (f + 2 * b + 2).max(2 * b + 2);
    let ln = (n as f64 + 1.0) / 2.0 * (q as f64).ln() + m as f64 * (base as f64).ln();
    let square = BigUint::from(q).pow(n + 1) * BigUint::from(base).pow(2 * m);
    cross_check(ln, &square, "hooley-cor bound")?;
    Ok(Bound::from_ln(ln))
}

/// `X^{1/2}|P|^{−1/2 + 2 log_q(3(r + c))} = q^{(k − m)/2}·(3(r + c))^{2m}`.
pub fn variance_budget(q: u64, k: u32, m: u32, r: u32, c: u32) -> Bound {
    let ln = (k as f64 - m as f64) / 2.0 * (q as f64).ln() + 2.0 * m as f64 * (3.0 * (r + c) as f64).ln();
    Bound::from_ln(ln)
}

/// `q^{(k − m)/2}·γ^m` with `γ = 3(r₁ + c₁)(r₂ + c₂)`.
pub fn covariance_budget(q: u64, k: u32, m: u32, (r1, c1): (u32, u32), (r2, c2): (u32, u32)) -> Bound {
    let gamma = 3.0 * (r1 + c1) as f64 * (r2 + c2) as f64;
    Bound::from_ln((k as f64 - m as f64) / 2.0 * (q as f64).ln() + m as f64 * gamma.ln())
}

/// `X^{1/2}(3·d!)^{deg π} + d!⁴ + d!⁴·X/|π|^{1/2}` for `X = q^n`.
pub fn mordell_budget(q: u64, n: u32, deg_pi: u32, d: u32) -> f64 {
    let fact: f64 = (1..=d).map(f64::from).product();
    let qf = q as f64;
    qf.powf(n as f64 / 2.0) * (3.0 * fact).powi(deg_pi as i32)
        + fact.powi(4)
        + fact.powi(4) * qf.powf(n as f64 - deg_pi as f64 / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(b: Bound, x: f64) -> bool {
        (b.value() - x).abs() < 1e-9 * x.max(1.0)
    }

    #[test]
    fn mainres_examples() {
        assert!(close(mainres_bound(3, 3, 1, 1, 1).unwrap(), 9.0));
        let b = mainres_bound(7, 49, 3, 1, 0).unwrap();
        assert!(close(b, 7f64.sqrt() * 7.0 * 343f64.powf(2f64.ln() / 7f64.ln())));
        assert!(close(mainres_bound(5, 25, 2, 2, 2).unwrap(), 5f64.powf(1.5) * 36.0));
        assert_eq!(mainres_bound(3, 4, 2, 1, 1).unwrap_err(), Error::XNotPowerOfQ { x: 4, q: 3, max_n: 2 });
        assert!(mainres_bound(3, 27, 2, 1, 1).is_err());
        assert!(close(mainres_bound(3, 1, 2, 1, 0).unwrap(), 3f64.sqrt() * 4.0));
    }

    #[test]
    fn hooley_examples() {
        assert!(close(hooley_cor_bound(3, 1, 1, Some(1), Some(0)).unwrap(), 9.0));
        assert!(close(hooley_cor_bound(3, 1, 1, Some(0), Some(1)).unwrap(), 12.0));
        assert!(close(hooley_cor_bound(5, 2, 2, Some(2), Some(1)).unwrap(), 5f64.powf(1.5) * 36.0));
        assert!(close(hooley_cor_bound(3, 0, 1, None, None).unwrap(), 3f64.sqrt() * 2.0));
        assert_eq!(hooley_cor_bound(3, 3, 2, None, Some(0)).unwrap_err(), Error::NTooLarge { n: 3, m: 2 });
    }

    #[test]
    fn large_bounds_stay_finite_in_log_space() {
        let b = mainres_bound(2, 1 << 40, 2000, 50, 50).unwrap();
        assert!(b.value().is_infinite());
        assert!(b.log10.is_finite());
        assert!(b.admits(1e300, 0.0));
    }

    #[test]
    fn monotone_on_grids() {
        for q in [2u64, 3, 5] {
            for m in 1..5u32 {
                for n in 0..=m {
                    for r in 1..4 {
                        for c in 0..4 {
                            let b = mainres_bound(q, q.pow(n), m, r, c).unwrap().log10;
                            if n < m {
                                assert!(mainres_bound(q, q.pow(n + 1), m, r, c).unwrap().log10 > b);
                            }
                            assert!(mainres_bound(q, q.pow(n), m, r + 1, c).unwrap().log10 > b);
                            assert!(mainres_bound(q, q.pow(n), m, r, c + 1).unwrap().log10 > b);
                        }
                    }
                    for f in 0..3 {
                        for bd in 0..3 {
                            let b = hooley_cor_bound(q, n, m, Some(f), Some(bd)).unwrap().log10;
                            if n < m {
                                assert!(hooley_cor_bound(q, n + 1, m, Some(f), Some(bd)).unwrap().log10 > b);
                            }
                            assert!(hooley_cor_bound(q, n, m, Some(f + 1), Some(bd)).unwrap().log10 > b);
                            assert!(hooley_cor_bound(q, n, m, Some(f), Some(bd + 1)).unwrap().log10 > b);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn budgets() {
        assert!(close(variance_budget(5, 1, 3, 1, 2), 5f64.powf(-1.0) * 9f64.powi(6)));
        assert!(close(covariance_budget(5, 1, 3, (1, 2), (1, 2)), 5f64.powf(-1.0) * 27f64.powi(3)));
        let expect = 5f64.sqrt() * 6f64.powi(2) + 16.0 + 16.0 * 5.0 / 5.0;
        assert!((mordell_budget(5, 1, 2, 2) - expect).abs() < 1e-9);
    }

    #[test]
    fn big_log() {
        let x = BigUint::from(3u32).pow(1000);
        assert!((ln_big(&x) - 1000.0 * 3f64.ln()).abs() < 1e-9);
        assert!((ln_big(&BigUint::from(12345u32)) - 12345f64.ln()).abs() < 1e-12);
    }
}
