use serde::Serialize;

use super::bounds::mordell_budget;
use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};
use crate::residue::ResidueRing;
use crate::tracefn::value_set;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MordellResult {
    pub n: u32,
    pub deg_pi: u32,
    pub d: u32,
    pub value_set_size: usize,
    /// `#{f : deg f < n, f mod π ∈ 𝒫}`.
    pub count: usize,
    /// `|𝒫|·X/|π|`.
    pub main_term: f64,
    pub error: f64,
    pub budget: f64,
    /// `|count − main_term| / budget`.
    pub ratio: f64,
}

/// Count low-degree polynomials landing in the value set of `P` modulo `π`.
pub fn mordell_experiment(ring: &PolyRing, p_t: &[Poly], pi: &Poly, n: u32) -> Result<MordellResult> {
    let d = p_t.iter().rposition(|c| !ring.rem(c, pi).map(|r| r.is_zero()).unwrap_or(true));
    let d = d.unwrap_or(0);
    let p = ring.field().p();
    if p as usize <= d {
        return Err(Error::CharacteristicTooSmall { d, p });
    }
    if !ring.is_irreducible(pi) {
        return Err(Error::NotIrreducible(ring.format(pi)));
    }
    let rr = ResidueRing::new(ring, pi)?;
    let m = rr.degree() as u32;
    if n > m {
        return Err(Error::XTooLarge { n, m });
    }
    let (set, indicator) = value_set(&rr, p_t)?;
    let x = ring.q().pow(n) as usize;
    let count = indicator.values()[..x].iter().filter(|v| v.re != 0.0).count();
    let main_term = set.len() as f64 * x as f64 / rr.size() as f64;
    let error = (count as f64 - main_term).abs();
    let budget = mordell_budget(ring.q(), n, m, d as u32);
    Ok(MordellResult {
        n,
        deg_pi: m,
        d: d as u32,
        value_set_size: set.len(),
        count,
        main_term,
        error,
        budget,
        ratio: error / budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use std::sync::Arc;

    fn ring(p: u64) -> PolyRing {
        PolyRing::new(Arc::new(Field::prime(p).unwrap()))
    }

    fn t_pow(r: &PolyRing, d: usize) -> Vec<Poly> {
        let mut v = vec![Poly::zero(); d + 1];
        v[d] = r.from_ints(&[1]);
        v
    }

    /// Count by testing each low-degree f for a preimage x with x^d ≡ f mod π.
    fn brute(r: &PolyRing, d: usize, pi: &Poly, n: u32) -> usize {
        let rr = ResidueRing::new(r, pi).unwrap();
        let powers: std::collections::BTreeSet<usize> = (0..rr.size())
            .map(|x| (0..d).fold(1usize, |acc, _| rr.mul_idx(acc, x)))
            .collect();
        (0..r.q().pow(n) as usize).filter(|f| powers.contains(f)).count()
    }

    #[test]
    fn examples() {
        let r5 = ring(5);
        let pi = r5.from_ints(&[2, 0, 1]);
        for n in 0..=2 {
            let res = mordell_experiment(&r5, &t_pow(&r5, 1), &pi, n).unwrap();
            assert_eq!(res.count, 5usize.pow(n));
            assert!((res.main_term - 5f64.powi(n as i32)).abs() < 1e-12);
        }
        let res = mordell_experiment(&r5, &t_pow(&r5, 2), &pi, 1).unwrap();
        assert_eq!((res.count, res.value_set_size), (5, 13));
        assert_eq!(brute(&r5, 2, &pi, 1), 5);
        assert!((res.main_term - 2.6).abs() < 1e-12);

        let r7 = ring(7);
        let res = mordell_experiment(&r7, &t_pow(&r7, 3), &Poly::u(), 1).unwrap();
        assert_eq!(res.count, 3);
        assert_eq!(brute(&r7, 3, &Poly::u(), 1), 3);
        assert!((res.main_term - 3.0).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let r3 = ring(3);
        assert!(matches!(
            mordell_experiment(&r3, &t_pow(&r3, 3), &Poly::u(), 1),
            Err(Error::CharacteristicTooSmall { d: 3, p: 3 })
        ));
        assert!(matches!(mordell_experiment(&r3, &t_pow(&r3, 2), &Poly::u(), 2), Err(Error::XTooLarge { n: 2, m: 1 })));
        let red = r3.from_ints(&[0, 1, 1]);
        assert!(matches!(mordell_experiment(&r3, &t_pow(&r3, 2), &red, 1), Err(Error::NotIrreducible(_))));
    }

    #[test]
    fn grid_matches_brute_force() {
        let r5 = ring(5);
        for pi in r5.monic_of_degree(2).filter(|g| r5.is_irreducible(g)).take(3) {
            for d in [2, 3] {
                for n in 0..=2 {
                    let res = mordell_experiment(&r5, &t_pow(&r5, d), &pi, n).unwrap();
                    assert_eq!(res.count, brute(&r5, d, &pi, n));
                }
            }
        }
    }
}
