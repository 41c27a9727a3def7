use num_complex::Complex64;
use serde::Serialize;

use super::bounds::{covariance_budget, variance_budget, Bound};
use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};
use crate::tracefn::TraceFunction;
use crate::transforms::{autocorrelation, window_sums};

/// Agreement required between a direct computation and its expansion.
pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceResult {
    pub k: u32,
    pub m: u32,
    /// `|P|⁻¹ Σ_f |X^{−1/2} Σ_{deg(g−f) < k} t(g)|²`.
    pub variance: f64,
    /// `Σ_{deg h < k} q^{−m} Σ_f t(f)·conj(t(f − h))`.
    pub expansion: Complex64,
    pub identity_holds: bool,
    pub main_term: f64,
    pub budget: Bound,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceResult {
    pub k: u32,
    pub m: u32,
    pub covariance: Complex64,
    pub expansion: Complex64,
    pub identity_holds: bool,
    pub main_indicator: bool,
    pub budget: Bound,
    pub deviation: f64,
    /// `|covariance − 𝟏| ≤ budget` with implied constant 1; reported only.
    pub within_budget: bool,
}

/// `q^{−m}·Σ_f S₁(f)·conj(S₂(f))·q^{−k}` from window sums.
fn windowed_inner(t1: &TraceFunction, t2: &TraceFunction, k: usize, exec: Exec) -> Result<Complex64> {
    let s1 = window_sums(t1, k, exec)?;
    let s2 = window_sums(t2, k, exec)?;
    let total: Complex64 = s1.iter().zip(&s2).map(|(a, b)| a * b.conj()).sum();
    Ok(total / (t1.len() as f64 * (t1.ring().q() as f64).powi(k as i32)))
}

fn expansion(t1: &TraceFunction, t2: &TraceFunction, k: usize, exec: Exec) -> Result<Complex64> {
    let count = (t1.ring().q() as usize).pow(k as u32);
    let terms = map_range(exec, count, |h| autocorrelation(t1, t2, h));
    terms.into_iter().sum()
}

fn check_k(t: &TraceFunction, k: u32) -> Result<u32> {
    let m = t.ring().degree() as u32;
    if k > m {
        return Err(Error::XTooLarge { n: k, m });
    }
    Ok(m)
}

/// Variance of normalized window sums of length `X = q^k` modulo an
/// irreducible `P`, computed directly and through autocorrelations.
pub fn variance_experiment(t: &TraceFunction, k: u32, exec: Exec) -> Result<VarianceResult> {
    let ring = t.ring();
    if !ring.is_irreducible() {
        return Err(Error::NotIrreducible(ring.poly_ring().format(ring.modulus())));
    }
    let m = check_k(t, k)?;
    let direct = windowed_inner(t, t, k as usize, exec)?.re;
    let exp = expansion(t, t, k as usize, exec)?;
    Ok(VarianceResult {
        k,
        m,
        variance: direct,
        expansion: exp,
        identity_holds: (exp - direct).norm() < IDENTITY_TOL,
        main_term: 1.0,
        budget: variance_budget(ring.q(), k, m, t.rank(), t.conductor()),
        deviation: (direct - 1.0).abs(),
    })
}

pub fn covariance_experiment(
    t1: &TraceFunction,
    t2: &TraceFunction,
    k: u32,
    main_indicator: bool,
    exec: Exec,
) -> Result<CovarianceResult> {
    if !t1.ring().same_as(t2.ring()) {
        return Err(Error::RingMismatch);
    }
    let m = check_k(t1, k)?;
    let cov = windowed_inner(t1, t2, k as usize, exec)?;
    let exp = expansion(t1, t2, k as usize, exec)?;
    let budget = covariance_budget(
        t1.ring().q(),
        k,
        m,
        (t1.rank(), t1.conductor()),
        (t2.rank(), t2.conductor()),
    );
    let deviation = (cov - if main_indicator { 1.0 } else { 0.0 }).norm();
    Ok(CovarianceResult {
        k,
        m,
        covariance: cov,
        expansion: exp,
        identity_holds: (exp - cov).norm() < IDENTITY_TOL,
        main_indicator,
        budget,
        deviation,
        within_budget: budget.admits(deviation, 0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::MultChar;
    use crate::field::Field;
    use crate::poly::{Poly, PolyRing};
    use crate::residue::ResidueRing;
    use crate::tracefn::Family;
    use std::sync::Arc;

    fn rr(p: u64, g: &[i64]) -> Arc<ResidueRing> {
        let r = PolyRing::new(Arc::new(Field::prime(p).unwrap()));
        let g = r.from_ints(g);
        ResidueRing::new(&r, &g).unwrap()
    }

    fn chi_table(ring: &Arc<ResidueRing>, k: u64) -> TraceFunction {
        let chi = MultChar::new(ring.clone(), vec![k]).unwrap();
        TraceFunction::from_fn(ring.clone(), Exec::Sequential, 1, 2, Family::MixedChar, |x| chi.eval_idx(x)).unwrap()
    }

    /// Double loop straight from the definition.
    fn variance_oracle(t: &TraceFunction, k: u32) -> f64 {
        let ring = t.ring();
        let x = (ring.q() as usize).pow(k);
        let total: f64 = (0..ring.size())
            .map(|f| (0..x).map(|g| t.value(ring.add_idx(f, g))).sum::<Complex64>().norm_sqr() / x as f64)
            .sum();
        total / ring.size() as f64
    }

    #[test]
    fn examples() {
        let ring = rr(5, &[2, 0, 1]);
        let ones = TraceFunction::new(ring.clone(), vec![Complex64::new(1.0, 0.0); 25], 1, 0, Family::Custom).unwrap();
        let v = variance_experiment(&ones, 2, Exec::Sequential).unwrap();
        assert!((v.variance - 25.0).abs() < 1e-9 && v.identity_holds);

        let t = chi_table(&ring, 1);
        let v = variance_experiment(&t, 0, Exec::Sequential).unwrap();
        assert!((v.variance - 24.0 / 25.0).abs() < 1e-9);
        let v = variance_experiment(&t, 1, Exec::Parallel).unwrap();
        assert!((v.variance - variance_oracle(&t, 1)).abs() < 1e-9);
        assert!(v.identity_holds);
        assert!(v.budget.admits(v.deviation, 0.0));

        let composite = rr(5, &[0, 1, 1]);
        let c = TraceFunction::new(composite.clone(), vec![Complex64::new(1.0, 0.0); 25], 1, 0, Family::Custom).unwrap();
        assert!(matches!(variance_experiment(&c, 1, Exec::Sequential), Err(Error::NotIrreducible(_))));
        assert!(matches!(variance_experiment(&t, 3, Exec::Sequential), Err(Error::XTooLarge { n: 3, m: 2 })));
    }

    #[test]
    fn identity_over_all_k() {
        let ring = rr(3, &[1, 2, 0, 1]);
        for k in 1..26 {
            let t = chi_table(&ring, k);
            for kk in 0..=3 {
                let v = variance_experiment(&t, kk, Exec::Sequential).unwrap();
                assert!(v.identity_holds);
                assert!((v.variance - variance_oracle(&t, kk)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn covariance_examples() {
        let ring = rr(5, &[2, 0, 1]);
        let t1 = chi_table(&ring, 1);
        let t2 = chi_table(&ring, 2);
        let c = covariance_experiment(&t1, &t2, 0, false, Exec::Sequential).unwrap();
        assert!(c.covariance.norm() < 1e-9 && c.identity_holds);
        let same = covariance_experiment(&t1, &t1, 1, true, Exec::Sequential).unwrap();
        let var = variance_experiment(&t1, 1, Exec::Sequential).unwrap();
        assert!((same.covariance - var.variance).norm() < 1e-9);
        let shifted = covariance_experiment(&t1, &t1.translate(3), 1, false, Exec::Sequential).unwrap();
        assert!(shifted.identity_holds);
        let other = rr(5, &[3, 0, 1]);
        let t3 = chi_table(&other, 1);
        assert_eq!(covariance_experiment(&t1, &t3, 0, false, Exec::Sequential).unwrap_err(), Error::RingMismatch);
        let _ = Poly::u();
    }
}
