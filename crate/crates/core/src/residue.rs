//! Residue rings F_q[u]/(g) for squarefree monic `g`, and residue fields
//! F_q[u]/(π).
//!
//! Residues are identified with polynomials of degree below `deg g` and
//! indexed by the base-q positional code `Σ c_i q^i` of their coefficients
//! (constant term least significant, each coefficient by its field code).
//! Under this encoding the polynomials of degree `< n` are exactly the
//! indices `0..q^n`. Trace-function tables and CSV exports depend on it.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::{prime_divisors, Field, FieldElem};
use crate::poly::{Poly, PolyRing, DEFAULT_FACTOR_SEED};

/// Largest residue ring (and residue field) that will be materialized.
pub const MAX_RESIDUES: u128 = 1 << 20;

/// Marker for a zero component in unit coordinates.
pub const NOT_A_UNIT: u32 = u32::MAX;

fn residue_count(q: u64, m: usize, what: impl FnOnce() -> String) -> Result<usize> {
    let size = (q as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if size > MAX_RESIDUES {
        return Err(Error::TooLarge { what: what(), size, limit: MAX_RESIDUES });
    }
    Ok(size as usize)
}

fn unrank_digits(q: u64, len: usize, mut idx: usize) -> Vec<FieldElem> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(FieldElem::from_index((idx as u64 % q) as u32));
        idx = (idx as u64 / q) as usize;
    }
    out
}

fn rank_coeffs(q: u64, coeffs: &[FieldElem]) -> usize {
    coeffs.iter().rev().fold(0usize, |acc, c| acc * q as usize + c.index() as usize)
}

/// F_q[u]/(π) with a fixed generator of its multiplicative group and a
/// discrete-log table.
#[derive(Debug, Clone)]
pub struct ResidueField {
    ring: PolyRing,
    pi: Poly,
    d: usize,
    size: usize,
    generator: usize,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl ResidueField {
    pub fn new(ring: &PolyRing, pi: &Poly) -> Result<Self> {
        let d = match pi.degree() {
            None | Some(0) => return Err(Error::Reducible(ring.format(pi))),
            Some(d) => d,
        };
        if !pi.is_monic() {
            return Err(Error::NotMonic(ring.format(pi)));
        }
        let size = residue_count(ring.q(), d, || format!("F_q[u]/({})", ring.format(pi)))?;
        if !ring.is_irreducible(pi) {
            return Err(Error::Reducible(ring.format(pi)));
        }
        let q = ring.q();
        let order = size as u128 - 1;
        let primes = prime_divisors(order as u64);
        let generator = (1..size)
            .find(|&x| {
                let xp = Poly::from_coeffs(unrank_digits(q, d, x));
                primes.iter().all(|&r| !ring.pow_mod(&xp, order / r as u128, pi).is_one())
            })
            .expect("multiplicative group of a finite field is cyclic");
        let gp = Poly::from_coeffs(unrank_digits(q, d, generator));
        let mut exp = Vec::with_capacity(size - 1);
        let mut log = vec![NOT_A_UNIT; size];
        let mut cur = Poly::one();
        for i in 0..size - 1 {
            let idx = rank_coeffs(q, cur.coeffs());
            exp.push(idx as u32);
            log[idx] = i as u32;
            cur = ring.mul_mod(&cur, &gp, pi);
        }
        Ok(ResidueField { ring: ring.clone(), pi: pi.clone(), d, size, generator, exp, log })
    }

    pub fn pi(&self) -> &Poly {
        &self.pi
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// `q^deg π`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Order of the multiplicative group, `q^deg π − 1`.
    pub fn unit_order(&self) -> u64 {
        self.size as u64 - 1
    }

    pub fn generator(&self) -> usize {
        self.generator
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn unrank(&self, idx: usize) -> Poly {
        Poly::from_coeffs(unrank_digits(self.ring.q(), self.d, idx))
    }

    /// Index of `x mod π`.
    pub fn reduce(&self, x: &Poly) -> usize {
        let r = self.ring.rem(x, &self.pi).expect("π is nonzero");
        rank_coeffs(self.ring.q(), r.coeffs())
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let f = self.ring.field();
        let q = self.ring.q();
        let (da, db) = (unrank_digits(q, self.d, a), unrank_digits(q, self.d, b));
        let sum: Vec<_> = da.iter().zip(&db).map(|(&x, &y)| f.add(x, y)).collect();
        rank_coeffs(q, &sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        let f = self.ring.field();
        let q = self.ring.q();
        let d: Vec<_> = unrank_digits(q, self.d, a).into_iter().map(|x| f.neg(x)).collect();
        rank_coeffs(q, &d)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.size - 1;
        let s = (self.log[a] as usize + self.log[b] as usize) % n;
        self.exp[s] as usize
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        if a == 0 {
            return None;
        }
        let n = self.size - 1;
        Some(self.exp[(n - self.log[a] as usize) % n] as usize)
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = self.unit_order();
        self.exp[((self.log[a] as u64 * (k % n)) % n) as usize] as usize
    }

    pub fn discrete_log(&self, a: usize) -> Result<u64> {
        match self.log.get(a) {
            Some(&l) if l != NOT_A_UNIT => Ok(l as u64),
            _ => Err(Error::ZeroArgument),
        }
    }

    pub fn generator_pow(&self, k: u64) -> usize {
        self.exp[(k % self.unit_order()) as usize] as usize
    }

    /// Evaluate a polynomial in T whose coefficients are residues mod π.
    pub fn eval_t(&self, coeffs_t: &[usize], x: usize) -> usize {
        coeffs_t.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

/// F_q[u]/(g) for squarefree monic `g`, with its factorization, Bézout data
/// and CRT maps.
#[derive(Debug)]
pub struct ResidueRing {
    ring: PolyRing,
    modulus: Poly,
    m: usize,
    size: usize,
    factors: Vec<Poly>,
    /// `f_π` with `Σ f_π · g/π = 1`.
    bezout: Vec<Poly>,
    /// `f_π · g/π mod g`: the CRT idempotents.
    idempotents: Vec<Poly>,
    /// `H_k = [u^{m−1}](u^k mod g)` for `0 <= k < 2m − 1`.
    hankel: Vec<FieldElem>,
    fields: OnceLock<Vec<ResidueField>>,
    unit_coords: OnceLock<Vec<u32>>,
}

impl ResidueRing {
    pub fn new(ring: &PolyRing, g: &Poly) -> Result<Arc<Self>> {
        Self::with_seed(ring, g, DEFAULT_FACTOR_SEED)
    }

    /// `seed` drives the randomized equal-degree splitting.
    pub fn with_seed(ring: &PolyRing, g: &Poly, seed: u64) -> Result<Arc<Self>> {
        let m = match g.degree() {
            None | Some(0) => return Err(Error::ConstantModulus),
            Some(m) => m,
        };
        if !g.is_monic() {
            return Err(Error::NotMonic(ring.format(g)));
        }
        let size = residue_count(ring.q(), m, || format!("F_q[u]/({})", ring.format(g)))?;
        if !ring.is_squarefree(g) {
            return Err(Error::NotSquarefree(ring.format(g)));
        }
        let factors = ring.factor_squarefree(g, seed);
        let mut bezout = Vec::with_capacity(factors.len());
        let mut idempotents = Vec::with_capacity(factors.len());
        for pi in &factors {
            let cofactor = ring.divmod(g, pi)?.0;
            let f_pi = ring
                .inv_mod(&cofactor, pi)
                .ok_or_else(|| Error::NotSquarefree(ring.format(g)))?;
            idempotents.push(ring.mul_mod(&f_pi, &cofactor, g));
            bezout.push(f_pi);
        }
        let total = idempotents.iter().fold(Poly::zero(), |acc, e| ring.add(&acc, e));
        if !total.is_one() {
            return Err(Error::Validation(format!(
                "Bézout identity failed for {}: sum is {}",
                ring.format(g),
                ring.format(&total)
            )));
        }
        let hankel = (0..2 * m - 1)
            .map(|k| ring.rem(&Poly::monomial(FieldElem::ONE, k), g).unwrap().coeff(m - 1))
            .collect();
        Ok(Arc::new(ResidueRing {
            ring: ring.clone(),
            modulus: g.clone(),
            m,
            size,
            factors,
            bezout,
            idempotents,
            hankel,
            fields: OnceLock::new(),
            unit_coords: OnceLock::new(),
        }))
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn q(&self) -> u64 {
        self.ring.q()
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// `deg g`.
    pub fn degree(&self) -> usize {
        self.m
    }

    /// `|g| = q^deg g`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn factors(&self) -> &[Poly] {
        &self.factors
    }

    pub fn bezout(&self) -> &[Poly] {
        &self.bezout
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1
    }

    /// Same modulus over the same field.
    pub fn same_as(&self, other: &ResidueRing) -> bool {
        std::ptr::eq(self, other) || (self.field() == other.field() && self.modulus == other.modulus)
    }

    pub fn residue_fields(&self) -> &[ResidueField] {
        self.fields.get_or_init(|| {
            self.factors
                .iter()
                .map(|pi| ResidueField::new(&self.ring, pi).expect("factors are irreducible and small"))
                .collect()
        })
    }

    pub fn unrank(&self, idx: usize) -> Poly {
        Poly::from_coeffs(self.digits(idx))
    }

    /// Index of a polynomial of degree below `deg g`; larger inputs are
    /// reduced first.
    pub fn rank(&self, x: &Poly) -> usize {
        if x.degree().is_none_or(|d| d < self.m) {
            rank_coeffs(self.q(), x.coeffs())
        } else {
            self.reduce(x)
        }
    }

    pub fn reduce(&self, x: &Poly) -> usize {
        let r = self.ring.rem(x, &self.modulus).expect("modulus is nonzero");
        rank_coeffs(self.q(), r.coeffs())
    }

    /// The `deg g` coefficients of a residue, constant term first.
    pub fn digits(&self, idx: usize) -> Vec<FieldElem> {
        unrank_digits(self.q(), self.m, idx)
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        let f = self.field();
        let q = self.q() as usize;
        if f.e() == 1 {
            let p = q;
            let (mut x, mut y, mut out, mut place) = (a, b, 0usize, 1usize);
            for _ in 0..self.m {
                let s = x % p + y % p;
                out += (if s >= p { s - p } else { s }) * place;
                x /= p;
                y /= p;
                place *= p;
            }
            return out;
        }
        let (mut x, mut y, mut out, mut place) = (a, b, 0usize, 1usize);
        for _ in 0..self.m {
            let d = f.add(FieldElem::from_index((x % q) as u32), FieldElem::from_index((y % q) as u32));
            out += d.index() as usize * place;
            x /= q;
            y /= q;
            place *= q;
        }
        out
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        let f = self.field();
        let q = self.q() as usize;
        let (mut x, mut out, mut place) = (a, 0usize, 1usize);
        for _ in 0..self.m {
            out += f.neg(FieldElem::from_index((x % q) as u32)).index() as usize * place;
            x /= q;
            place *= q;
        }
        out
    }

    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    pub fn mul_idx(&self, a: usize, b: usize) -> usize {
        let prod = self.ring.mul_mod(&self.unrank(a), &self.unrank(b), &self.modulus);
        rank_coeffs(self.q(), prod.coeffs())
    }

    /// `c·x` for a scalar `c ∈ F_q`.
    pub fn scale_idx(&self, x: usize, c: FieldElem) -> usize {
        let f = self.field();
        let d: Vec<_> = self.digits(x).into_iter().map(|a| f.mul(a, c)).collect();
        rank_coeffs(self.q(), &d)
    }

    pub fn is_unit(&self, x: &Poly) -> bool {
        self.ring.gcd(x, &self.modulus).is_one()
    }

    pub fn inv_idx(&self, a: usize) -> Option<usize> {
        self.ring
            .inv_mod(&self.unrank(a), &self.modulus)
            .map(|p| rank_coeffs(self.q(), p.coeffs()))
    }

    /// `x mod π_i` for every factor, as residue-field indices.
    pub fn crt_split(&self, idx: usize) -> Vec<usize> {
        let x = self.unrank(idx);
        self.factors
            .iter()
            .map(|pi| {
                let r = self.ring.rem(&x, pi).unwrap();
                rank_coeffs(self.q(), r.coeffs())
            })
            .collect()
    }

    /// Inverse of [`crt_split`](Self::crt_split): `Σ x_π · f_π · g/π mod g`.
    pub fn crt_lift(&self, parts: &[usize]) -> usize {
        assert_eq!(parts.len(), self.factors.len(), "one component per factor");
        let q = self.q();
        let sum = parts
            .iter()
            .zip(self.factors.iter().zip(&self.idempotents))
            .fold(Poly::zero(), |acc, (&x, (pi, e))| {
                let xp = Poly::from_coeffs(unrank_digits(q, pi.degree().unwrap(), x));
                self.ring.add(&acc, &self.ring.mul(&xp, e))
            });
        self.reduce(&sum)
    }

    /// Flattened table of per-factor discrete logs, `factors().len()` entries
    /// per residue, [`NOT_A_UNIT`] where the component is zero.
    pub fn unit_coords(&self) -> &[u32] {
        self.unit_coords.get_or_init(|| {
            let fields = self.residue_fields();
            let mut out = Vec::with_capacity(self.size * fields.len());
            for idx in 0..self.size {
                for (rf, part) in fields.iter().zip(self.crt_split(idx)) {
                    out.push(rf.discrete_log(part).map_or(NOT_A_UNIT, |l| l as u32));
                }
            }
            out
        })
    }

    pub fn unit_coords_of(&self, idx: usize) -> &[u32] {
        let r = self.factors.len();
        &self.unit_coords()[idx * r..(idx + 1) * r]
    }

    pub fn is_unit_idx(&self, idx: usize) -> bool {
        self.unit_coords_of(idx).iter().all(|&l| l != NOT_A_UNIT)
    }

    /// `[u^{m−1}](f·h mod g)`, i.e. the `u^{-1}` coefficient of `f·h/g` at
    /// infinity (g is monic).
    pub fn pairing_value(&self, f: usize, h: usize) -> FieldElem {
        let fld = self.field();
        let (fd, hd) = (self.digits(f), self.digits(h));
        let mut acc = FieldElem::ZERO;
        for (i, &fi) in fd.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            for (j, &hj) in hd.iter().enumerate() {
                acc = fld.add(acc, fld.mul(fld.mul(fi, hj), self.hankel[i + j]));
            }
        }
        acc
    }

    /// Exponent `k ∈ Z/p` with `e(fh/g) = exp(2πi k / p)`.
    pub fn pairing_phase(&self, f: usize, h: usize) -> u32 {
        self.field().trace_to_prime(self.pairing_value(f, h))
    }

    /// Precomputed phases `f ↦ e(fh/g)` for fixed `h`.
    pub fn pairing_row(&self, h: usize) -> PairingRow {
        let fld = self.field();
        let hd = self.digits(h);
        let q = self.q() as usize;
        let mut table = Vec::with_capacity(self.m * q);
        for i in 0..self.m {
            let w = hd
                .iter()
                .enumerate()
                .fold(FieldElem::ZERO, |acc, (j, &hj)| fld.add(acc, fld.mul(hj, self.hankel[i + j])));
            for a in 0..q {
                table.push(fld.trace_to_prime(fld.mul(FieldElem::from_index(a as u32), w)));
            }
        }
        PairingRow { table, q, m: self.m, p: fld.p() as u32 }
    }
}

/// Phase table for the pairing against one fixed residue.
#[derive(Debug, Clone)]
pub struct PairingRow {
    table: Vec<u32>,
    q: usize,
    m: usize,
    p: u32,
}

impl PairingRow {
    pub fn phase(&self, f: usize) -> u32 {
        let mut x = f;
        let mut acc = 0u32;
        for i in 0..self.m {
            acc += self.table[i * self.q + x % self.q];
            x /= self.q;
        }
        acc % self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, e: u32) -> PolyRing {
        PolyRing::new(Arc::new(Field::new(p, e, None).unwrap()))
    }

    #[test]
    fn factor_examples() {
        let r2 = ring(2, 1);
        let g = r2.from_ints(&[0, 1, 1]);
        let rr = ResidueRing::new(&r2, &g).unwrap();
        assert_eq!(rr.factors(), &[Poly::u(), r2.from_ints(&[1, 1])]);
        assert_eq!(rr.bezout(), &[Poly::one(), Poly::one()]);

        let irr = ResidueRing::new(&r2, &r2.from_ints(&[1, 1, 1])).unwrap();
        assert!(irr.is_irreducible());

        let r3 = ring(3, 1);
        assert!(matches!(ResidueRing::new(&r3, &r3.from_ints(&[0, 0, 1])), Err(Error::NotSquarefree(_))));
        assert!(matches!(ResidueRing::new(&r3, &r3.from_ints(&[0, 0, 2])), Err(Error::NotMonic(_))));
        assert!(matches!(ResidueRing::new(&r3, &r3.from_ints(&[2])), Err(Error::ConstantModulus)));
        // (u + 1)^3 over F_3 has vanishing derivative
        assert!(matches!(ResidueRing::new(&r3, &r3.from_ints(&[1, 0, 0, 1])), Err(Error::NotSquarefree(_))));
    }

    #[test]
    fn crt_examples() {
        let r2 = ring(2, 1);
        let rr = ResidueRing::new(&r2, &r2.from_ints(&[0, 1, 1])).unwrap();
        let u = rr.rank(&Poly::u());
        assert_eq!(rr.crt_split(u), vec![0, 1]);
        assert_eq!(rr.crt_split(1), vec![1, 1]);
        let mut seen = std::collections::HashSet::new();
        for x in 0..rr.size() {
            let parts = rr.crt_split(x);
            assert!(seen.insert(parts.clone()));
            assert_eq!(rr.crt_lift(&parts), x);
        }
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn residue_field_examples() {
        let r3 = ring(3, 1);
        let f = ResidueField::new(&r3, &Poly::u()).unwrap();
        assert_eq!(f.size(), 3);
        assert_eq!(f.generator(), 2);
        let f9 = ResidueField::new(&r3, &r3.from_ints(&[1, 0, 1])).unwrap();
        assert_eq!(f9.size(), 9);
        let r5 = ring(5, 1);
        let f25 = ResidueField::new(&r5, &r5.from_ints(&[2, 0, 1])).unwrap();
        assert_eq!(f25.size(), 25);
        assert!(matches!(ResidueField::new(&r3, &r3.from_ints(&[0, 1, 1])), Err(Error::Reducible(_))));
        let r2 = ring(2, 1);
        assert!(matches!(
            ResidueField::new(&r2, &r2.from_ints(&[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1])),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn residue_field_logs_round_trip() {
        let r5 = ring(5, 1);
        let f25 = ResidueField::new(&r5, &r5.from_ints(&[2, 0, 1])).unwrap();
        for x in 1..25 {
            assert_eq!(f25.generator_pow(f25.discrete_log(x).unwrap()), x);
            assert_eq!(f25.mul(x, f25.inv(x).unwrap()), 1);
        }
        // the exhaustive square count: 3 is a nonsquare mod 5, so u^2 + 2 is irreducible
        let squares: std::collections::BTreeSet<_> = (0..25).map(|x| f25.mul(x, x)).collect();
        assert_eq!(squares.len(), 13);
    }

    fn squarefree_moduli(r: &PolyRing, max_deg: usize) -> Vec<Poly> {
        (1..=max_deg)
            .flat_map(|d| r.monic_of_degree(d).filter(|g| r.is_squarefree(g)).collect::<Vec<_>>())
            .collect()
    }

    #[test]
    fn crt_is_ring_isomorphism() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let r = ring(p, e);
            for g in squarefree_moduli(&r, 4) {
                let rr = ResidueRing::new(&r, &g).unwrap();
                if rr.size() > 125 {
                    continue;
                }
                let fields = rr.residue_fields();
                let splits: Vec<_> = (0..rr.size()).map(|x| rr.crt_split(x)).collect();
                for a in 0..rr.size() {
                    assert_eq!(rr.crt_lift(&splits[a]), a);
                    for b in 0..rr.size() {
                        let (s, m) = (rr.add_idx(a, b), rr.mul_idx(a, b));
                        for (i, rf) in fields.iter().enumerate() {
                            assert_eq!(splits[s][i], rf.add(splits[a][i], splits[b][i]));
                            assert_eq!(splits[m][i], rf.mul(splits[a][i], splits[b][i]));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rank_unrank_bijection() {
        for (p, e, g) in [(3u64, 1u32, vec![1i64, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]), (2, 2, vec![1, 1, 0, 0, 0, 0, 0, 1])] {
            let r = ring(p, e);
            let g = r.from_ints(&g);
            if !r.is_squarefree(&g) {
                continue;
            }
            let rr = ResidueRing::new(&r, &g).unwrap();
            assert!(rr.size() <= 100_000);
            for x in 0..rr.size() {
                assert_eq!(rr.rank(&rr.unrank(x)), x);
            }
        }
        let r = ring(5, 1);
        let rr = ResidueRing::new(&r, &r.from_ints(&[1, 1, 0, 0, 0, 0, 0, 1])).unwrap();
        for x in (0..rr.size()).step_by(7) {
            assert_eq!(rr.rank(&rr.unrank(x)), x);
            assert_eq!(rr.sub_idx(rr.add_idx(x, 12345), 12345), x);
        }
    }

    #[test]
    fn pairing_row_matches_pairing() {
        let r = ring(2, 2);
        let rr = ResidueRing::new(&r, &r.from_ints(&[1, 1, 0, 1])).unwrap();
        for h in 0..rr.size() {
            let row = rr.pairing_row(h);
            for f in 0..rr.size() {
                assert_eq!(row.phase(f), rr.pairing_phase(f, h));
                let direct = r.mul_mod(&rr.unrank(f), &rr.unrank(h), rr.modulus()).coeff(2);
                assert_eq!(rr.pairing_value(f, h), direct);
            }
        }
    }
}
