use num_complex::Complex64;
use serde::Serialize;

use super::bounds::{mainres_bound, Bound};
use crate::characters::AdditiveCharEvaluator;
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::poly::{Poly, PolyRing};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlResult {
    pub deg_g: u32,
    pub m_small: u32,
    pub sum: Complex64,
    /// `q^{m_small}`.
    pub expected: f64,
    pub exact: bool,
    /// `√q·X^{1/2}`: the bound with the `|g|`-power switched off.
    pub sqrt_cancellation: f64,
    /// The bound with the smallest admissible metadata `r = 1, c = 0`.
    pub naive_bound: Bound,
    /// `|sum| < X`; false whenever the precondition holds, which is the
    /// point of the control.
    pub cancels: bool,
}

/// The polynomial with base-q code `idx`, constant term least significant.
pub fn poly_from_index(ring: &PolyRing, mut idx: u64) -> Poly {
    let q = ring.q();
    let mut coeffs = Vec::new();
    while idx > 0 {
        coeffs.push(FieldElem::from_index((idx % q) as u32));
        idx /= q;
    }
    Poly::from_coeffs(coeffs)
}

/// `Σ_{deg f < m_small} e(f²/g)` by enumeration. For `2·m_small < deg g − 1`
/// every `f²` has degree below `deg g − 1`, so every term is 1.
pub fn square_phase_control(ring: &PolyRing, g: &Poly, m_small: u32) -> Result<ControlResult> {
    let m = g.degree().ok_or(Error::DivisionByZeroPoly)? as u32;
    if 2 * m_small + 1 >= m {
        return Err(Error::RangeViolation(format!(
            "m_small = {m_small} must satisfy m_small < (deg g - 1)/2 = {}/2",
            m as i64 - 1
        )));
    }
    let add = AdditiveCharEvaluator::new(ring.field_arc().clone());
    let q = ring.q();
    let x = q.pow(m_small);
    let sum: Complex64 = (0..x)
        .map(|i| {
            let f = poly_from_index(ring, i);
            add.eval(&ring.mul(&f, &f), g)
        })
        .sum::<Result<Complex64>>()?;
    let expected = x as f64;
    Ok(ControlResult {
        deg_g: m,
        m_small,
        sum,
        expected,
        exact: (sum - expected).norm() < 1e-9,
        sqrt_cancellation: (q as f64).sqrt() * (x as f64).sqrt(),
        naive_bound: mainres_bound(q, x, m, 1, 0)?,
        cancels: sum.norm() < expected - 1e-9,
    })
}
