//! Complete sums, short-interval sums and the Fourier transform on
//! F_q[u]/(g).
//!
//! The forward transform is `t̂(h) = Σ_f t(f)·e(fh/g)` and the inverse is
//! `t(x) = |g|⁻¹ Σ_h t̂(h)·e(−xh/g)`. With residues indexed by their base-q
//! code, the polynomials of degree below `n` are exactly the indices
//! `0..q^n`, which is what makes intervals and their perpendicular spaces
//! index ranges.

use std::sync::Arc;

use num_complex::Complex64;

use crate::characters::AdditiveCharEvaluator;
use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};
use crate::residue::ResidueRing;
use crate::tracefn::{Family, TraceFunction};

/// Largest modulus norm accepted by [`dft`] and [`inverse_dft`].
pub const MAX_DFT_RESIDUES: usize = 59_049;

/// `{f + center : deg f < n}`.
#[derive(Debug, Clone)]
pub struct Interval {
    ring: Arc<ResidueRing>,
    n: usize,
    center: usize,
}

impl Interval {
    pub fn new(ring: Arc<ResidueRing>, n: usize, center: usize) -> Result<Self> {
        let m = ring.degree();
        if n > m {
            return Err(Error::NTooLarge { n: n as u32, m: m as u32 });
        }
        if center >= ring.size() {
            return Err(Error::Validation(format!("center index {center} is not a residue")));
        }
        Ok(Interval { ring, n, center })
    }

    pub fn centered(ring: Arc<ResidueRing>, n: usize) -> Result<Self> {
        Self::new(ring, n, 0)
    }

    pub fn ring(&self) -> &Arc<ResidueRing> {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn center(&self) -> usize {
        self.center
    }

    /// `q^n`.
    pub fn len(&self) -> usize {
        (self.ring.q() as usize).pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: usize) -> bool {
        self.ring.sub_idx(x, self.center) < self.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).map(move |f| self.ring.add_idx(f, self.center))
    }
}

pub fn complete_sum(t: &TraceFunction) -> Complex64 {
    t.values().iter().sum()
}

fn check_dft_size(ring: &ResidueRing) -> Result<()> {
    if ring.size() > MAX_DFT_RESIDUES {
        return Err(Error::TooLarge {
            what: "Fourier transform modulus".into(),
            size: ring.size() as u128,
            limit: MAX_DFT_RESIDUES as u128,
        });
    }
    Ok(())
}

/// `Σ_f v(f)·e(±fh/g)`, grouping the terms by the phase `k ∈ F_p`.
fn pairing_sum(ring: &ResidueRing, add: &AdditiveCharEvaluator, values: &[Complex64], h: usize, sign: i32) -> Complex64 {
    let p = ring.field().p() as usize;
    let row = ring.pairing_row(h);
    let mut buckets = vec![Complex64::new(0.0, 0.0); p];
    for (f, &v) in values.iter().enumerate() {
        buckets[row.phase(f) as usize] += v;
    }
    buckets
        .iter()
        .enumerate()
        .map(|(k, &b)| {
            let k = if sign > 0 { k } else { (p - k) % p };
            b * add.psi(k as u32)
        })
        .sum()
}

fn transform(t: &TraceFunction, exec: Exec, sign: i32, scale: f64) -> Result<TraceFunction> {
    let ring = t.ring().clone();
    check_dft_size(&ring)?;
    let add = AdditiveCharEvaluator::new(ring.poly_ring().field_arc().clone());
    let values = map_range(exec, ring.size(), |h| pairing_sum(&ring, &add, t.values(), h, sign) * scale);
    TraceFunction::new(ring, values, t.rank(), t.conductor(), Family::Custom)
}

/// `t̂(h) = Σ_f t(f)·e(fh/g)`. Rank and conductor are carried over unchanged.
pub fn dft(t: &TraceFunction, exec: Exec) -> Result<TraceFunction> {
    transform(t, exec, 1, 1.0)
}

/// `x ↦ |g|⁻¹ Σ_h t̂(h)·e(−xh/g)`.
pub fn inverse_dft(t_hat: &TraceFunction, exec: Exec) -> Result<TraceFunction> {
    transform(t_hat, exec, -1, 1.0 / t_hat.len() as f64)
}

/// `V^⊥` for the centered interval of length `q^n`: the residues of degree
/// below `m − n`.
pub fn perp_space(v: &Interval) -> Result<Vec<usize>> {
    if v.center != 0 {
        return Err(Error::RangeViolation("perpendicular space needs an interval centered at 0".into()));
    }
    let m = v.ring.degree();
    Ok((0..(v.ring.q() as usize).pow((m - v.n) as u32)).collect())
}

/// `V^⊥` straight from the definition: every `h` with `e(fh/g) = 1` for all
/// `f` of degree below `n`.
pub fn perp_space_exhaustive(ring: &ResidueRing, n: usize) -> Vec<usize> {
    let len = (ring.q() as usize).pow(n as u32);
    (0..ring.size())
        .filter(|&h| {
            let row = ring.pairing_row(h);
            (0..len).all(|f| row.phase(f) == 0)
        })
        .collect()
}

/// `Σ_{deg f < n} t(f + center)` by enumeration.
pub fn short_sum(t: &TraceFunction, v: &Interval) -> Result<Complex64> {
    if !t.ring().same_as(&v.ring) {
        return Err(Error::RingMismatch);
    }
    Ok(v.elements().map(|x| t.value(x)).sum())
}

/// The same short sum through the transform:
/// `(q^n/|g|)·Σ_{h ∈ V^⊥} t̂(h)·e(−ch/g)`.
pub fn short_sum_via_dft(t_hat: &TraceFunction, v: &Interval) -> Result<Complex64> {
    let ring = t_hat.ring();
    if !ring.same_as(&v.ring) {
        return Err(Error::RingMismatch);
    }
    let add = AdditiveCharEvaluator::new(ring.poly_ring().field_arc().clone());
    let p = ring.field().p();
    let row = ring.pairing_row(v.center);
    let perp = perp_space(&Interval::centered(ring.clone(), v.n)?)?;
    let total: Complex64 = perp
        .into_iter()
        .map(|h| t_hat.value(h) * add.psi(((p - row.phase(h) as u64) % p) as u32))
        .sum();
    Ok(total * (v.len() as f64 / ring.size() as f64))
}

/// Every window sum `S_n(c) = Σ_{deg f < n} t(c + f)`, built one degree at a
/// time: `S_j(c) = Σ_{a ∈ F_q} S_{j−1}(c + a·u^{j−1})`.
pub fn window_sums(t: &TraceFunction, n: usize, exec: Exec) -> Result<Vec<Complex64>> {
    let ring = t.ring();
    let m = ring.degree();
    if n > m {
        return Err(Error::NTooLarge { n: n as u32, m: m as u32 });
    }
    let q = ring.q() as usize;
    let mut sums = t.values().to_vec();
    let mut step = 1usize;
    for _ in 0..n {
        let prev = sums;
        sums = map_range(exec, ring.size(), |c| (0..q).map(|a| prev[ring.add_idx(c, a * step)]).sum());
        step *= q;
    }
    Ok(sums)
}

/// `q^{−m}·Σ_f t1(f)·conj(t2(f − h))`.
pub fn autocorrelation(t1: &TraceFunction, t2: &TraceFunction, h: usize) -> Result<Complex64> {
    let ring = t1.ring();
    if !ring.same_as(t2.ring()) {
        return Err(Error::RingMismatch);
    }
    let total: Complex64 = (0..ring.size())
        .map(|f| t1.value(f) * t2.value(ring.sub_idx(f, h)).conj())
        .sum();
    Ok(total / ring.size() as f64)
}
