//! Trace functions as explicit value tables over F_q[u]/(g).
//!
//! Three families are built here: mixed character sums
//! `h ↦ χ(F(u,h))·e(a(u,h)·b(u,h)⁻¹/g)`, normalized hyper-Kloosterman sums,
//! and indicators of value sets of polynomials modulo an irreducible `π`.
//! Each table carries rank/conductor metadata consumed by the bound formulas.

use std::io::{Read, Write};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characters::{AdditiveCharEvaluator, MultChar};
use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};
use crate::poly::Poly;
use crate::report::fmt_num;
use crate::residue::{ResidueField, ResidueRing, NOT_A_UNIT};

/// Largest modulus norm accepted for k-fold Kloosterman convolutions.
pub const MAX_KLOOSTERMAN_RESIDUES: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    MixedChar,
    Kloosterman,
    ValueSet,
    Custom,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::MixedChar => "mixed-char",
            Family::Kloosterman => "kloosterman",
            Family::ValueSet => "value-set",
            Family::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TraceFunction {
    ring: Arc<ResidueRing>,
    values: Vec<Complex64>,
    rank: u32,
    conductor: u32,
    family: Family,
}

impl TraceFunction {
    pub fn new(ring: Arc<ResidueRing>, values: Vec<Complex64>, rank: u32, conductor: u32, family: Family) -> Result<Self> {
        if values.len() != ring.size() {
            return Err(Error::Validation(format!(
                "table has {} values, modulus norm is {}",
                values.len(),
                ring.size()
            )));
        }
        if rank == 0 {
            return Err(Error::InvalidMetadata("rank must be positive".into()));
        }
        Ok(TraceFunction { ring, values, rank, conductor, family })
    }

    /// A table built by evaluating `f` at every residue index.
    pub fn from_fn(
        ring: Arc<ResidueRing>,
        exec: Exec,
        rank: u32,
        conductor: u32,
        family: Family,
        f: impl Fn(usize) -> Complex64 + Sync + Send,
    ) -> Result<Self> {
        let values = map_range(exec, ring.size(), f);
        Self::new(ring, values, rank, conductor, family)
    }

    pub fn ring(&self) -> &Arc<ResidueRing> {
        &self.ring
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> Complex64 {
        self.values[idx]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Generic rank `r(t)`.
    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Conductor `c(t)`.
    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn with_metadata(mut self, rank: Option<u32>, conductor: Option<u32>) -> Result<Self> {
        if let Some(r) = rank {
            if r == 0 {
                return Err(Error::InvalidMetadata("rank must be positive".into()));
            }
            self.rank = r;
        }
        if let Some(c) = conductor {
            self.conductor = c;
        }
        Ok(self)
    }

    /// `x ↦ t(x + c)`, metadata unchanged.
    pub fn translate(&self, c: usize) -> TraceFunction {
        let values = (0..self.len()).map(|x| self.values[self.ring.add_idx(x, c)]).collect();
        TraceFunction { values, ..self.clone() }
    }

    pub fn conj(&self) -> TraceFunction {
        TraceFunction { values: self.values.iter().map(|v| v.conj()).collect(), ..self.clone() }
    }

    /// CSV with columns `residue_index,residue_poly,re,im`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let pr = self.ring.poly_ring();
        let err = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["residue_index", "residue_poly", "re", "im"]).map_err(err)?;
        for (i, v) in self.values.iter().enumerate() {
            let poly = serde_json::to_string(&pr.to_nested(&self.ring.unrank(i))).unwrap();
            w.write_record([i.to_string(), poly, fmt_num(v.re), fmt_num(v.im)]).map_err(err)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Read a table written by [`write_csv`](Self::write_csv).
    pub fn read_csv<R: Read>(ring: Arc<ResidueRing>, input: R, rank: u32, conductor: u32) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let mut values = vec![None; ring.size()];
        for rec in r.records() {
            let rec = rec.map_err(|e| Error::ConfigParse(e.to_string()))?;
            let field = |i: usize| rec.get(i).ok_or_else(|| Error::ConfigParse(format!("missing column {i}")));
            let idx: usize = field(0)?.trim().parse().map_err(|e| Error::ConfigParse(format!("residue_index: {e}")))?;
            let re: f64 = field(2)?.trim().parse().map_err(|e| Error::ConfigParse(format!("re: {e}")))?;
            let im: f64 = field(3)?.trim().parse().map_err(|e| Error::ConfigParse(format!("im: {e}")))?;
            let slot = values
                .get_mut(idx)
                .ok_or_else(|| Error::Validation(format!("residue_index {idx} out of range")))?;
            *slot = Some(Complex64::new(re, im));
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Validation(format!("residue_index {i} missing"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, values, rank, conductor, Family::Custom)
    }

    pub fn sidecar(&self) -> serde_json::Value {
        let pr = self.ring.poly_ring();
        serde_json::json!({
            "family": self.family.as_str(),
            "rank": self.rank,
            "conductor": self.conductor,
            "field": pr.field().spec(),
            "modulus": pr.to_nested(self.ring.modulus()),
            "size": self.len(),
        })
    }
}

/// A polynomial in T with coefficients in F_q[u]/(g), coefficients reduced.
pub type TPoly = Vec<Poly>;

fn deg_t(coeffs: &[usize]) -> Option<usize> {
    coeffs.iter().rposition(|&c| c != 0)
}

/// Degrees of F, a, b after reduction modulo one irreducible factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducedDegrees {
    pub f: Option<usize>,
    pub a: Option<usize>,
    pub b: Option<usize>,
}

/// `χ(F(u,h))·e(a(u,h)·b(u,h)⁻¹/g)`.
#[derive(Debug, Clone)]
pub struct MixedCharSpec {
    pub chi: MultChar,
    pub f: TPoly,
    pub a: TPoly,
    pub b: TPoly,
}

/// Does `b` divide `a` in `F[T]` for the residue field `F`? `b` nonzero.
fn divides_t(rf: &ResidueField, b: &[usize], a: &[usize]) -> bool {
    let Some(db) = deg_t(b) else { return deg_t(a).is_none() };
    let mut rem: Vec<usize> = a.to_vec();
    let inv_lead = rf.inv(b[db]).unwrap();
    while let Some(dr) = deg_t(&rem).filter(|&d| d >= db) {
        let c = rf.mul(rem[dr], inv_lead);
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            rem[dr - db + j] = rf.sub(rem[dr - db + j], rf.mul(c, bj));
        }
    }
    deg_t(&rem).is_none()
}

impl MixedCharSpec {
    pub fn new(chi: MultChar, f: TPoly, a: TPoly, b: TPoly) -> Self {
        let ring = chi.ring().clone();
        let pr = ring.poly_ring();
        let reduce = |v: TPoly| -> TPoly {
            let mut v: TPoly = v.iter().map(|c| pr.rem(c, ring.modulus()).unwrap()).collect();
            while v.last().is_some_and(|c| c.is_zero()) {
                v.pop();
            }
            v
        };
        MixedCharSpec { f: reduce(f), a: reduce(a), b: reduce(b), chi }
    }

    pub fn ring(&self) -> &Arc<ResidueRing> {
        self.chi.ring()
    }

    fn reduce_mod(&self, poly_t: &[Poly], i: usize) -> Vec<usize> {
        let rf = &self.ring().residue_fields()[i];
        poly_t.iter().map(|c| rf.reduce(c)).collect()
    }

    /// Degrees in T (None = −∞) over the whole ring.
    pub fn degrees(&self) -> ReducedDegrees {
        ReducedDegrees {
            f: self.f.len().checked_sub(1),
            a: self.a.len().checked_sub(1),
            b: self.b.len().checked_sub(1),
        }
    }

    pub fn reduced_degrees(&self, i: usize) -> ReducedDegrees {
        ReducedDegrees {
            f: deg_t(&self.reduce_mod(&self.f, i)),
            a: deg_t(&self.reduce_mod(&self.a, i)),
            b: deg_t(&self.reduce_mod(&self.b, i)),
        }
    }

    /// Check the per-factor degree and divisibility hypotheses and
    /// primitivity of χ. The first failure names the factor and clause.
    pub fn validate(&self) -> Result<()> {
        let ring = self.ring();
        let pr = ring.poly_ring();
        let p = ring.field().p() as usize;
        for (i, pi) in ring.factors().iter().enumerate() {
            let factor = pr.format(pi);
            let violation = |clause: String| Error::HypothesisViolation { factor: factor.clone(), clause };
            let (fr, ar, br) = (self.reduce_mod(&self.f, i), self.reduce_mod(&self.a, i), self.reduce_mod(&self.b, i));
            let (df, da, db) = (deg_t(&fr), deg_t(&ar), deg_t(&br));
            let Some(db) = db else {
                return Err(violation("b vanishes identically mod π, so b(u,h) is never invertible".into()));
            };
            if let Some(da) = da {
                if da > db + 1 {
                    return Err(violation(format!(
                        "deg_T(a mod π) = {da} exceeds deg_T(b mod π) + 1 = {}",
                        db + 1
                    )));
                }
            }
            if db >= p {
                return Err(violation(format!("deg_T(b mod π) = {db} is not less than p = {p}")));
            }
            let f_positive = df.is_some_and(|d| d > 0);
            if !f_positive && divides_t(&ring.residue_fields()[i], &br, &ar) {
                return Err(violation(
                    "deg_T(F mod π) is not positive and (b mod π) divides (a mod π)".into(),
                ));
            }
        }
        if let Some(i) = self.chi.first_trivial_factor() {
            return Err(Error::NotPrimitive(pr.format(&ring.factors()[i])));
        }
        Ok(())
    }

    /// `max_π max{deg_T F + 2 deg_T b, 2 deg_T b}` over the reduced degrees,
    /// with −∞ counted as 0.
    pub fn conductor(&self) -> u32 {
        (0..self.ring().factors().len())
            .map(|i| {
                let d = self.reduced_degrees(i);
                let (f, b) = (d.f.unwrap_or(0) as u32, d.b.unwrap_or(0) as u32);
                (f + 2 * b).max(2 * b)
            })
            .max()
            .unwrap_or(0)
    }

    fn eval_t_idx(&self, poly_t: &[Poly], h: usize) -> usize {
        let ring = self.ring();
        poly_t.iter().rev().fold(0, |acc, c| ring.add_idx(ring.mul_idx(acc, h), ring.reduce(c)))
    }

    /// `t(h)` using the global inverse of `b(u,h)` modulo `g`.
    pub fn value(&self, add: &AdditiveCharEvaluator, h: usize) -> Complex64 {
        let ring = self.ring();
        let zero = Complex64::new(0.0, 0.0);
        let chi = self.chi.eval_idx(self.eval_t_idx(&self.f, h));
        if chi == zero {
            return zero;
        }
        let Some(binv) = ring.inv_idx(self.eval_t_idx(&self.b, h)) else { return zero };
        let x = ring.mul_idx(self.eval_t_idx(&self.a, h), binv);
        chi * add.psi(ring.pairing_phase(x, 1))
    }

    /// `t(h)` through the Bézout decomposition: the product over factors π of
    /// `χ_π(F(u,h) mod π)·e(f_π·a(u,h)·b(u,h)⁻¹/π)`, each evaluated in the
    /// residue field F_q[u]/(π).
    pub fn value_via_crt(&self, add: &AdditiveCharEvaluator, h: usize) -> Complex64 {
        let ring = self.ring();
        let pr = ring.poly_ring();
        let hp = ring.unrank(h);
        let mut acc = Complex64::new(1.0, 0.0);
        for (i, (rf, f_pi)) in ring.residue_fields().iter().zip(ring.bezout()).enumerate() {
            let hx = rf.reduce(&hp);
            let ev = |poly_t: &[Poly]| rf.eval_t(&self.reduce_mod(poly_t, i), hx);
            let chi = self.chi.eval_component(i, ev(&self.f));
            let Some(binv) = rf.inv(ev(&self.b)) else { return Complex64::new(0.0, 0.0) };
            let y = rf.mul(rf.mul(rf.reduce(f_pi), ev(&self.a)), binv);
            let top = rf.unrank(y).coeff(rf.degree() - 1);
            acc *= chi * add.psi(pr.field().trace_to_prime(top));
        }
        acc
    }
}

/// Build the mixed-character table. Rank 1, conductor from the reduced degrees.
pub fn from_mixed_char(spec: &MixedCharSpec, exec: Exec) -> Result<TraceFunction> {
    spec.validate()?;
    let ring = spec.ring().clone();
    let add = AdditiveCharEvaluator::new(ring.poly_ring().field_arc().clone());
    ring.unit_coords();
    TraceFunction::from_fn(ring, exec, 1, spec.conductor(), Family::MixedChar, |h| spec.value(&add, h))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KloostermanSpec {
    pub k: u32,
    pub b: Poly,
    /// Conductor metadata; defaults to `k`.
    pub conductor: Option<u32>,
}

/// Mixed-radix coordinates of the unit group `Π_π Z/(q^{deg π} − 1)`.
struct UnitGroup {
    moduli: Vec<usize>,
    /// residue index of each unit code
    code_to_idx: Vec<usize>,
    /// unit code of each residue index, `usize::MAX` for non-units
    idx_to_code: Vec<usize>,
}

impl UnitGroup {
    fn new(ring: &ResidueRing) -> Self {
        let moduli: Vec<usize> = ring.residue_fields().iter().map(|f| f.unit_order() as usize).collect();
        let total: usize = moduli.iter().product();
        let mut code_to_idx = vec![0; total];
        let mut idx_to_code = vec![usize::MAX; ring.size()];
        for idx in 0..ring.size() {
            let logs = ring.unit_coords_of(idx);
            if logs.contains(&NOT_A_UNIT) {
                continue;
            }
            let code = logs.iter().zip(&moduli).rev().fold(0, |acc, (&l, &n)| acc * n + l as usize);
            code_to_idx[code] = idx;
            idx_to_code[idx] = code;
        }
        UnitGroup { moduli, code_to_idx, idx_to_code }
    }

    fn len(&self) -> usize {
        self.code_to_idx.len()
    }

    /// Code of `x / y` (component-wise log subtraction).
    fn div(&self, x: usize, y: usize) -> usize {
        let (mut x, mut y, mut out, mut place) = (x, y, 0, 1);
        for &n in &self.moduli {
            let (a, b) = (x % n, y % n);
            out += (if a >= b { a - b } else { a + n - b }) * place;
            x /= n;
            y /= n;
            place *= n;
        }
        out
    }
}

/// Normalized hyper-Kloosterman sums
/// `Kl_k(a; b) = (−1)^{k−1} |g|^{−(k−1)/2} Σ_{x_1⋯x_k = a} e(b(x_1+⋯+x_k)/g)`
/// for all `a` at once, by (k−1)-fold convolution over the unit group.
pub fn from_kloosterman(spec: &KloostermanSpec, ring: &Arc<ResidueRing>, exec: Exec) -> Result<TraceFunction> {
    if spec.k < 2 {
        return Err(Error::KTooSmall(spec.k));
    }
    let pr = ring.poly_ring();
    if !ring.is_unit(&spec.b) {
        return Err(Error::NotCoprime(pr.format(&spec.b)));
    }
    if ring.size() > MAX_KLOOSTERMAN_RESIDUES {
        return Err(Error::TooLarge {
            what: "Kloosterman convolution modulus".into(),
            size: ring.size() as u128,
            limit: MAX_KLOOSTERMAN_RESIDUES as u128,
        });
    }
    let add = AdditiveCharEvaluator::new(pr.field_arc().clone());
    let b = ring.reduce(&spec.b);
    let group = UnitGroup::new(ring);
    let n = group.len();
    let row = ring.pairing_row(b);
    let phi: Vec<Complex64> = group.code_to_idx.iter().map(|&x| add.psi(row.phase(x))).collect();
    let mut conv = phi.clone();
    for _ in 1..spec.k {
        conv = map_range(exec, n, |c| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c1, &s) in conv.iter().enumerate() {
                acc += s * phi[group.div(c, c1)];
            }
            acc
        });
    }
    let sign = if spec.k.is_multiple_of(2) { -1.0 } else { 1.0 };
    let scale = sign / (ring.size() as f64).sqrt().powi(spec.k as i32 - 1);
    let values = (0..ring.size())
        .map(|idx| match group.idx_to_code[idx] {
            usize::MAX => Complex64::new(0.0, 0.0),
            code => conv[code] * scale,
        })
        .collect();
    TraceFunction::new(ring.clone(), values, spec.k, spec.conductor.unwrap_or(spec.k), Family::Kloosterman)
}

fn factorial(d: usize) -> u32 {
    (1..=d as u32).product()
}

/// Value set `{P(x) : x ∈ F_q[u]/(π)}` of a polynomial in T, and its
/// indicator as a trace function (rank and conductor metadata `d!`).
pub fn value_set(ring: &Arc<ResidueRing>, poly_t: &[Poly]) -> Result<(Vec<usize>, TraceFunction)> {
    let pr = ring.poly_ring();
    if !ring.is_irreducible() {
        return Err(Error::NotIrreducible(pr.format(ring.modulus())));
    }
    let rf = &ring.residue_fields()[0];
    let coeffs: Vec<usize> = poly_t.iter().map(|c| rf.reduce(c)).collect();
    let d = deg_t(&coeffs).filter(|&d| d >= 1).ok_or_else(|| {
        Error::Validation("value-set polynomial must have positive degree in T".into())
    })?;
    let p = ring.field().p();
    if p as usize <= d {
        return Err(Error::DegreeTooLargeForCharacteristic { d, p });
    }
    let mut hit = vec![false; ring.size()];
    for x in 0..ring.size() {
        hit[rf.eval_t(&coeffs, x)] = true;
    }
    let set: Vec<usize> = (0..ring.size()).filter(|&i| hit[i]).collect();
    let values = hit.iter().map(|&b| Complex64::new(if b { 1.0 } else { 0.0 }, 0.0)).collect();
    let meta = factorial(d);
    let t = TraceFunction::new(ring.clone(), values, meta, meta, Family::ValueSet)?;
    Ok((set, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::poly::PolyRing;

    const TOL: f64 = 1e-9;

    fn ring(p: u64) -> PolyRing {
        PolyRing::new(Arc::new(Field::prime(p).unwrap()))
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tpoly(r: &PolyRing, coeffs: &[i64]) -> TPoly {
        coeffs.iter().map(|&x| r.from_ints(&[x])).collect()
    }

    #[test]
    fn mixed_char_examples() {
        let r3 = ring(3);
        let rr = ResidueRing::new(&r3, &Poly::u()).unwrap();
        let chi = MultChar::new(rr.clone(), vec![1]).unwrap();

        let spec = MixedCharSpec::new(chi.clone(), tpoly(&r3, &[0, 1]), vec![], tpoly(&r3, &[1]));
        let t = from_mixed_char(&spec, Exec::Sequential).unwrap();
        for (v, e) in t.values().iter().zip([c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]) {
            assert!((v - e).norm() < TOL);
        }
        assert_eq!((t.rank(), t.conductor()), (1, 1));

        let spec = MixedCharSpec::new(chi.clone(), tpoly(&r3, &[1]), tpoly(&r3, &[1]), tpoly(&r3, &[0, 1]));
        let t = from_mixed_char(&spec, Exec::Sequential).unwrap();
        let z3 = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        // t(h) = e(h^{-1}/u): 1^{-1} = 1, 2^{-1} = 2
        for (v, e) in t.values().iter().zip([c(0.0, 0.0), z3, z3 * z3]) {
            assert!((v - e).norm() < TOL);
        }
        assert_eq!(t.conductor(), 2);

        // deg_T(b mod π) = 3 = p
        let spec = MixedCharSpec::new(chi, tpoly(&r3, &[1]), tpoly(&r3, &[1]), tpoly(&r3, &[0, 0, 0, 1]));
        assert!(matches!(from_mixed_char(&spec, Exec::Sequential), Err(Error::HypothesisViolation { .. })));
    }

    #[test]
    fn hypothesis_clauses() {
        let r5 = ring(5);
        let g = r5.from_ints(&[0, 1, 1]); // u(u+1)
        let rr = ResidueRing::new(&r5, &g).unwrap();
        let chi = MultChar::new(rr.clone(), vec![1, 2]).unwrap();
        // deg a = 3 > deg b + 1 = 2
        let s = MixedCharSpec::new(chi.clone(), tpoly(&r5, &[1]), tpoly(&r5, &[0, 0, 0, 1]), tpoly(&r5, &[0, 1]));
        let err = s.validate().unwrap_err();
        assert!(matches!(&err, Error::HypothesisViolation { factor, clause } if factor == "u" && clause.contains("exceeds")));
        // F constant and b | a
        let s = MixedCharSpec::new(chi.clone(), tpoly(&r5, &[1]), tpoly(&r5, &[0, 0, 1]), tpoly(&r5, &[0, 1]));
        assert!(matches!(s.validate(), Err(Error::HypothesisViolation { clause, .. }) if clause.contains("divides")));
        // Burgess with a = 0 but F constant is rejected (b | 0)
        let s = MixedCharSpec::new(chi.clone(), tpoly(&r5, &[3]), vec![], tpoly(&r5, &[1]));
        assert!(s.validate().is_err());
        // coefficient u + 1 of T vanishes mod (u + 1) only: F = (u+1)T + 1 is constant mod u+1
        let f = vec![Poly::one(), r5.from_ints(&[1, 1])];
        let s = MixedCharSpec::new(chi.clone(), f, vec![], tpoly(&r5, &[1]));
        assert!(matches!(s.validate(), Err(Error::HypothesisViolation { factor, .. }) if factor == "u + 1"));
        // non-primitive character
        let chi0 = MultChar::new(rr, vec![1, 0]).unwrap();
        let s = MixedCharSpec::new(chi0, tpoly(&r5, &[0, 1]), vec![], tpoly(&r5, &[1]));
        assert!(matches!(s.validate(), Err(Error::NotPrimitive(f)) if f == "u + 1"));
    }

    /// Brute force: `b | a` iff some `c` with `deg c = deg a − deg b` has `b·c = a`.
    fn divides_by_search(rf: &ResidueField, b: &[usize], a: &[usize]) -> bool {
        let (Some(db), da) = (deg_t(b), deg_t(a)) else { unreachable!() };
        let Some(da) = da else { return true };
        if da < db {
            return false;
        }
        let len = da - db + 1;
        let total = rf.size().pow(len as u32);
        (0..total).any(|mut code| {
            let cq: Vec<usize> = (0..len)
                .map(|_| {
                    let d = code % rf.size();
                    code /= rf.size();
                    d
                })
                .collect();
            let mut prod = vec![0; da + 1];
            for (i, &x) in b.iter().enumerate().take(db + 1) {
                for (j, &y) in cq.iter().enumerate() {
                    if i + j <= da {
                        prod[i + j] = rf.add(prod[i + j], rf.mul(x, y));
                    } else if rf.mul(x, y) != 0 {
                        return false;
                    }
                }
            }
            prod.iter().zip(a).all(|(x, y)| x == y)
        })
    }

    #[test]
    fn divisibility_matches_search() {
        let r3 = ring(3);
        let rf = ResidueField::new(&r3, &r3.from_ints(&[1, 0, 1])).unwrap();
        let polys: Vec<Vec<usize>> = (0..9usize * 9 * 3)
            .map(|code| vec![code % 9, (code / 9) % 9, code / 81])
            .collect();
        for b in polys.iter().filter(|b| deg_t(b).is_some()).step_by(5) {
            for a in polys.iter().step_by(3) {
                assert_eq!(divides_t(&rf, b, a), divides_by_search(&rf, b, a), "{b:?} | {a:?}");
            }
        }
    }

    #[test]
    fn crt_route_matches_global_route() {
        let r3 = ring(3);
        let add = AdditiveCharEvaluator::new(r3.field_arc().clone());
        for d in 1..=3 {
            for g in r3.monic_of_degree(d).filter(|g| r3.is_squarefree(g)) {
                let rr = ResidueRing::new(&r3, &g).unwrap();
                for chi in MultChar::primitive(&rr).into_iter().take(4) {
                    let specs = [
                        MixedCharSpec::new(chi.clone(), tpoly(&r3, &[1]), tpoly(&r3, &[1]), tpoly(&r3, &[0, 1])),
                        MixedCharSpec::new(chi.clone(), tpoly(&r3, &[1, 1]), tpoly(&r3, &[0, 0, 1]), tpoly(&r3, &[1, 1])),
                        MixedCharSpec::new(chi.clone(), vec![Poly::u(), Poly::one()], vec![], tpoly(&r3, &[1])),
                    ];
                    for s in &specs {
                        for h in 0..rr.size() {
                            assert!((s.value(&add, h) - s.value_via_crt(&add, h)).norm() < TOL);
                        }
                    }
                }
            }
        }
    }

    /// Kl_k(a) by summing over all (k−1)-tuples of units; the last variable is
    /// forced to a·(x_1⋯x_{k−1})⁻¹.
    fn kloosterman_brute(rr: &ResidueRing, k: u32, b: usize, a: usize) -> Complex64 {
        let add = AdditiveCharEvaluator::new(rr.poly_ring().field_arc().clone());
        let pr = rr.poly_ring();
        let units: Vec<usize> = (0..rr.size()).filter(|&x| rr.is_unit(&rr.unrank(x))).collect();
        if !units.contains(&a) {
            return c(0.0, 0.0);
        }
        let mut total = c(0.0, 0.0);
        let mut tuple = vec![0usize; k as usize - 1];
        loop {
            let xs: Vec<usize> = tuple.iter().map(|&i| units[i]).collect();
            let prod = xs.iter().fold(Poly::one(), |acc, &x| pr.mul_mod(&acc, &rr.unrank(x), rr.modulus()));
            let last = rr.mul_idx(a, rr.inv_idx(rr.rank(&prod)).unwrap());
            let s = xs.iter().fold(last, |acc, &x| rr.add_idx(acc, x));
            let arg = pr.mul(&rr.unrank(b), &rr.unrank(s));
            total += add.eval(&arg, rr.modulus()).unwrap();
            let mut pos = 0;
            loop {
                if pos == tuple.len() {
                    let sign = if k.is_multiple_of(2) { -1.0 } else { 1.0 };
                    return total * sign / (rr.size() as f64).powf((k as f64 - 1.0) / 2.0);
                }
                tuple[pos] += 1;
                if tuple[pos] < units.len() {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn kloosterman_examples() {
        let r3 = ring(3);
        let rr = ResidueRing::new(&r3, &Poly::u()).unwrap();
        let spec = KloostermanSpec { k: 2, b: Poly::one(), conductor: None };
        let t = from_kloosterman(&spec, &rr, Exec::Sequential).unwrap();
        let s3 = 3f64.sqrt();
        for (a, expect) in [(0, 0.0), (1, 1.0 / s3), (2, -2.0 / s3)] {
            assert!((kloosterman_brute(&rr, 2, 1, a) - c(expect, 0.0)).norm() < TOL);
            assert!((t.value(a) - c(expect, 0.0)).norm() < TOL);
        }
        assert_eq!((t.rank(), t.conductor()), (2, 2));
        assert_eq!(from_kloosterman(&KloostermanSpec { k: 1, ..spec.clone() }, &rr, Exec::Sequential).unwrap_err(), Error::KTooSmall(1));
        let bad = KloostermanSpec { b: Poly::u(), ..spec };
        assert!(matches!(from_kloosterman(&bad, &rr, Exec::Sequential), Err(Error::NotCoprime(_))));
    }

    #[test]
    fn kloosterman_convolution_matches_brute_force() {
        for p in [2, 3, 5] {
            let r = ring(p);
            for d in 1..=2 {
                for g in r.monic_of_degree(d).filter(|g| r.is_squarefree(g)).take(3) {
                    let rr = ResidueRing::new(&r, &g).unwrap();
                    for k in [2, 3] {
                        let b = r.from_ints(&[1, 1]);
                        if !rr.is_unit(&b) {
                            continue;
                        }
                        let spec = KloostermanSpec { k, b: b.clone(), conductor: Some(7) };
                        let t = from_kloosterman(&spec, &rr, Exec::Parallel).unwrap();
                        assert_eq!(t.conductor(), 7);
                        for a in 0..rr.size() {
                            let brute = kloosterman_brute(&rr, k, rr.reduce(&b), a);
                            assert!((t.value(a) - brute).norm() < TOL, "p={p} g={} k={k} a={a}", r.format(&g));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn value_set_examples() {
        let r5 = ring(5);
        let pi = r5.from_ints(&[2, 0, 1]);
        let rr = ResidueRing::new(&r5, &pi).unwrap();
        let (set, t) = value_set(&rr, &tpoly(&r5, &[0, 1])).unwrap();
        assert_eq!(set.len(), 25);
        assert_eq!(t.rank(), 1);
        let (set, t) = value_set(&rr, &tpoly(&r5, &[0, 0, 1])).unwrap();
        assert_eq!(set.len(), 13);
        assert_eq!((t.rank(), t.conductor()), (2, 2));
        assert!(t.values().iter().all(|v| v.im == 0.0 && (v.re == 0.0 || v.re == 1.0)));

        let r7 = ring(7);
        let rr7 = ResidueRing::new(&r7, &Poly::u()).unwrap();
        let (set, _) = value_set(&rr7, &tpoly(&r7, &[0, 0, 0, 1])).unwrap();
        assert_eq!(set, vec![0, 1, 6]);

        let r3 = ring(3);
        let rr3 = ResidueRing::new(&r3, &Poly::u()).unwrap();
        assert!(matches!(
            value_set(&rr3, &tpoly(&r3, &[0, 0, 0, 1])),
            Err(Error::DegreeTooLargeForCharacteristic { d: 3, p: 3 })
        ));
        let composite = ResidueRing::new(&r5, &r5.from_ints(&[0, 1, 1])).unwrap();
        assert!(matches!(value_set(&composite, &tpoly(&r5, &[0, 1])), Err(Error::NotIrreducible(_))));
    }

    #[test]
    fn translate_examples() {
        let r3 = ring(3);
        let rr = ResidueRing::new(&r3, &Poly::u()).unwrap();
        let vals = vec![c(1.0, 0.0), c(2.0, 0.5), c(3.0, -1.0)];
        let t = TraceFunction::new(rr.clone(), vals.clone(), 1, 0, Family::Custom).unwrap();
        assert_eq!(t.translate(0).values(), t.values());
        assert_eq!(t.translate(1).values(), &[vals[1], vals[2], vals[0]]);
        assert_eq!(t.translate(1).translate(rr.neg_idx(1)).values(), t.values());
        assert!(TraceFunction::new(rr, vals[..2].to_vec(), 1, 0, Family::Custom).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let r3 = ring(3);
        let rr = ResidueRing::new(&r3, &r3.from_ints(&[1, 0, 1])).unwrap();
        let spec = KloostermanSpec { k: 2, b: Poly::one(), conductor: None };
        let t = from_kloosterman(&spec, &rr, Exec::Sequential).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("residue_index,residue_poly,re,im\n0,[],"));
        let back = TraceFunction::read_csv(rr, buf.as_slice(), 2, 2).unwrap();
        for (a, b) in t.values().iter().zip(back.values()) {
            assert!((a - b).norm() < 1e-10);
        }
        assert_eq!(back.family(), Family::Custom);
    }
}
