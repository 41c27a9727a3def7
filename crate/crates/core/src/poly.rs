//! The polynomial ring F_q[u].

use std::cmp::Ordering;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{prime_divisors, Field, FieldElem};

/// Seed used for equal-degree splitting when the caller does not supply one.
pub const DEFAULT_FACTOR_SEED: u64 = 0x5eed_f00d;

/// A polynomial in `u`, constant term first. The zero polynomial has no
/// coefficients and degree `None` (i.e. −∞).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![FieldElem::ONE] }
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c·u^k`.
    pub fn monomial(c: FieldElem, k: usize) -> Self {
        let mut coeffs = vec![FieldElem::ZERO; k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    /// The variable `u`.
    pub fn u() -> Self {
        Self::monomial(FieldElem::ONE, 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FieldElem::ONE
    }

    pub fn leading(&self) -> Option<FieldElem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(FieldElem::ONE)
    }

    /// Canonical order: by degree, then by coefficients from the top down
    /// (the residue-index order of equal-degree polynomials).
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

/// Arithmetic in F_q[u] over a shared field.
#[derive(Debug, Clone)]
pub struct PolyRing {
    field: Arc<Field>,
}

impl PolyRing {
    pub fn new(field: Arc<Field>) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    /// Build from small integers (images of Z in F_p), constant term first.
    pub fn from_ints(&self, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| self.field.from_int(c)).collect())
    }

    /// Build from JSON-style coefficient arrays: each entry is the F_p
    /// coefficient list of one F_q coefficient.
    pub fn from_nested(&self, coeffs: &[Vec<u64>]) -> Result<Poly> {
        let elems = coeffs
            .iter()
            .map(|c| self.field.from_coeffs(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(elems))
    }

    pub fn to_nested(&self, f: &Poly) -> Vec<Vec<u64>> {
        f.coeffs()
            .iter()
            .map(|&c| self.field.coeffs(c).into_iter().map(u64::from).collect())
            .collect()
    }

    pub fn format(&self, f: &Poly) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in f.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coef = self.field.format_elem(c);
            let term = match (i, c == FieldElem::ONE) {
                (0, _) => coef,
                (1, true) => "u".to_string(),
                (1, false) => format!("{coef}u"),
                (_, true) => format!("u^{i}"),
                (_, false) => format!("{coef}u^{i}"),
            };
            terms.push(term);
        }
        terms.join(" + ")
    }

    /// `q^deg f`, and 0 for the zero polynomial.
    pub fn norm(&self, f: &Poly) -> u128 {
        match f.degree() {
            None => 0,
            Some(d) => (self.q() as u128).saturating_pow(d as u32),
        }
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.field.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.field.sub(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly::from_coeffs(a.coeffs.iter().map(|&c| self.field.neg(c)).collect())
    }

    pub fn scale(&self, a: &Poly, c: FieldElem) -> Poly {
        Poly::from_coeffs(a.coeffs.iter().map(|&x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let f = &*self.field;
        let mut out = vec![FieldElem::ZERO; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn divmod(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        let db = b.degree().ok_or(Error::DivisionByZeroPoly)?;
        let f = &*self.field;
        let inv_lead = f.inv(b.leading().unwrap()).unwrap();
        let mut rem = a.coeffs.clone();
        let Some(da) = a.degree().filter(|&d| d >= db) else {
            return Ok((Poly::zero(), a.clone()));
        };
        let mut quot = vec![FieldElem::ZERO; da - db + 1];
        for k in (0..=da - db).rev() {
            let c = f.mul(rem[k + db], inv_lead);
            if c.is_zero() {
                continue;
            }
            quot[k] = c;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(rem[k + j], f.mul(c, bj));
            }
        }
        rem.truncate(db);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(self.divmod(a, b)?.1)
    }

    pub fn divides(&self, d: &Poly, a: &Poly) -> bool {
        if d.is_zero() {
            return a.is_zero();
        }
        self.rem(a, d).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn mul_mod(&self, a: &Poly, b: &Poly, m: &Poly) -> Poly {
        self.rem(&self.mul(a, b), m).expect("modulus is nonzero")
    }

    pub fn pow_mod(&self, base: &Poly, mut exp: u128, m: &Poly) -> Poly {
        let mut result = self.rem(&Poly::one(), m).expect("modulus is nonzero");
        let mut b = self.rem(base, m).expect("modulus is nonzero");
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul_mod(&result, &b, m);
            }
            exp >>= 1;
            if exp > 0 {
                b = self.mul_mod(&b, &b, m);
            }
        }
        result
    }

    pub fn make_monic(&self, a: &Poly) -> Poly {
        match a.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(a, self.field.inv(l).unwrap()),
        }
    }

    pub fn derivative(&self, a: &Poly) -> Poly {
        let f = &*self.field;
        Poly::from_coeffs(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
                .collect(),
        )
    }

    /// Extended gcd: `(d, s, t)` with `s·a + t·b = d`, `d` monic (or zero
    /// when both inputs are zero).
    pub fn xgcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = self.divmod(&r0, &r1).unwrap();
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.leading() {
            None => (r0, s0, t0),
            Some(l) => {
                let li = self.field.inv(l).unwrap();
                (self.scale(&r0, li), self.scale(&s0, li), self.scale(&t0, li))
            }
        }
    }

    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y).unwrap();
            x = std::mem::replace(&mut y, r);
        }
        self.make_monic(&x)
    }

    /// Inverse of `a` modulo `m`, if it exists.
    pub fn inv_mod(&self, a: &Poly, m: &Poly) -> Option<Poly> {
        let (d, s, _) = self.xgcd(&self.rem(a, m).ok()?, m);
        d.is_one().then(|| self.rem(&s, m).unwrap())
    }

    /// Squarefree test for a nonconstant polynomial. A vanishing derivative
    /// means `f` is a p-th power.
    pub fn is_squarefree(&self, f: &Poly) -> bool {
        let d = self.derivative(f);
        !d.is_zero() && self.gcd(f, &d).is_one()
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self, f: &Poly) -> bool {
        let Some(n) = f.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.make_monic(f);
        let u = Poly::u();
        let frob = |k: usize| {
            let mut h = u.clone();
            for _ in 0..k {
                h = self.pow_mod(&h, self.q() as u128, &f);
            }
            h
        };
        if self.sub(&frob(n), &self.rem(&u, &f).unwrap()) != Poly::zero() {
            return false;
        }
        prime_divisors(n as u64)
            .into_iter()
            .all(|r| self.gcd(&f, &self.sub(&frob(n / r as usize), &u)).is_one())
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// pairs `(product of all irreducible factors of degree d, d)`.
    pub fn distinct_degree_factor(&self, f: &Poly) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let mut rest = f.clone();
        let u = Poly::u();
        let mut h = self.rem(&u, &rest).unwrap();
        let mut d = 0;
        while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = self.pow_mod(&h, self.q() as u128, &rest);
            let g = self.gcd(&self.sub(&h, &u), &rest);
            if !g.is_one() {
                rest = self.divmod(&rest, &g).unwrap().0;
                h = self.rem(&h, &rest).unwrap();
                out.push((g, d));
            }
        }
        if let Some(deg) = rest.degree().filter(|&d| d > 0) {
            out.push((rest, deg));
        }
        out
    }

    /// Split a monic squarefree product of degree-`d` irreducibles.
    pub fn equal_degree_factor(&self, f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
        let n = f.degree().unwrap();
        if n == d {
            return vec![f.clone()];
        }
        let q = self.q();
        let p = self.field.p();
        loop {
            let a = Poly::from_coeffs(
                (0..n).map(|_| FieldElem::from_index(rng.gen_range(0..q) as u32)).collect(),
            );
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = if p == 2 {
                // trace to F_2 of a in F_{q^d}: sum of a^(2^i)
                let steps = self.field.e() as usize * d;
                let mut acc = Poly::zero();
                let mut cur = self.rem(&a, f).unwrap();
                for _ in 0..steps {
                    acc = self.add(&acc, &cur);
                    cur = self.mul_mod(&cur, &cur, f);
                }
                acc
            } else {
                let exp = ((q as u128).pow(d as u32) - 1) / 2;
                self.sub(&self.pow_mod(&a, exp, f), &Poly::one())
            };
            let g = self.gcd(&b, f);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < n {
                let h = self.divmod(f, &g).unwrap().0;
                let mut out = self.equal_degree_factor(&g, d, rng);
                out.extend(self.equal_degree_factor(&h, d, rng));
                return out;
            }
        }
    }

    /// Monic irreducible factors of a monic squarefree polynomial, sorted in
    /// canonical order.
    pub fn factor_squarefree(&self, f: &Poly, seed: u64) -> Vec<Poly> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<Poly> = self
            .distinct_degree_factor(f)
            .into_iter()
            .flat_map(|(g, d)| self.equal_degree_factor(&g, d, &mut rng))
            .collect();
        out.sort_by(|a, b| a.canonical_cmp(b));
        out
    }

    /// Every monic polynomial of exact degree `d`, in canonical order.
    pub fn monic_of_degree(&self, d: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = self.q();
        (0..q.pow(d as u32)).map(move |code| {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                coeffs.push(FieldElem::from_index((c % q) as u32));
                c /= q;
            }
            coeffs.push(FieldElem::ONE);
            Poly::from_coeffs(coeffs)
        })
    }
}
