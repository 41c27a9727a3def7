//! The coefficient field F_q, q = p^e.
//!
//! Elements are stored as their integer code `Σ c_i p^i`, where `c_i` is the
//! coefficient of `x^i` in the power basis of the modulus root. Element order
//! (used to pick generators and to index residues) is numeric order of that
//! code, so the zero element is 0 and the identity is 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order for which log/exp tables are built.
pub const LOG_TABLE_THRESHOLD: u64 = 1 << 20;
/// Largest field order accepted at all.
pub const MAX_FIELD_ORDER: u64 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Code `Σ c_i p^i`; must be below `q` for the field it is used with.
    pub const fn from_index(index: u32) -> Self {
        FieldElem(index)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// JSON description of a field: `{"p":3,"e":2,"modulus":[1,0,1]}`, modulus
/// listed from the constant term upward.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub e: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

#[derive(Debug, Clone)]
struct LogTables {
    /// `exp[i] = generator^i` for `0 <= i < q - 1`.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
    /// Absolute trace of every element.
    trace: Vec<u32>,
}

/// F_{p^e} with a fixed modulus and a fixed multiplicative generator.
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: FieldElem,
    tables: Option<LogTables>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors, ascending.
pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over F_p, constant term first; used only to validate
/// and search field moduli.
mod fp_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p64 = p as u64;
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
            }
        }
        let mut r: Vec<u32> = prod.into_iter().map(|v| v as u32).collect();
        rem_in_place(&mut r, m, p);
        r
    }

    /// `m` must be monic.
    pub fn rem_in_place(r: &mut Vec<u32>, m: &[u32], p: u32) {
        let dm = m.len() - 1;
        let p64 = p as u64;
        trim(r);
        while r.len() > dm {
            let lead = *r.last().unwrap() as u64;
            let shift = r.len() - 1 - dm;
            for (j, &mj) in m.iter().enumerate() {
                let sub = lead * mj as u64 % p64;
                r[shift + j] = ((r[shift + j] as u64 + p64 - sub) % p64) as u32;
            }
            trim(r);
        }
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out: Vec<u32> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    fn inv_mod_p(a: u32, p: u32) -> u32 {
        let mut result = 1u64;
        let mut base = a as u64 % p as u64;
        let mut exp = p as u64 - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * base % p as u64;
            }
            base = base * base % p as u64;
            exp >>= 1;
        }
        result as u32
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let inv = inv_mod_p(*y.last().unwrap(), p) as u64;
            let monic: Vec<u32> = y.iter().map(|&c| (c as u64 * inv % p as u64) as u32).collect();
            rem_in_place(&mut x, &monic, p);
            std::mem::swap(&mut x, &mut y);
        }
        x
    }

    /// `x^(p^k) mod m`.
    pub fn frobenius_power_of_x(m: &[u32], p: u32, k: u32) -> Vec<u32> {
        let mut cur = vec![0, 1];
        rem_in_place(&mut cur, m, p);
        for _ in 0..k {
            cur = pow_mod(&cur, p as u64, m, p);
        }
        cur
    }

    pub fn pow_mod(base: &[u32], mut exp: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut result = vec![1];
        rem_in_place(&mut result, m, p);
        let mut b = base.to_vec();
        while exp > 0 {
            if exp & 1 == 1 {
                result = mul_mod(&result, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            exp >>= 1;
        }
        result
    }

    /// Rabin's test for a monic `m` of degree `e`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let e = (m.len() - 1) as u32;
        if e == 1 {
            return true;
        }
        let x = vec![0, 1];
        let full = frobenius_power_of_x(m, p, e);
        let mut xr = x.clone();
        rem_in_place(&mut xr, m, p);
        if sub(&full, &xr, p) != Vec::<u32>::new() {
            return false;
        }
        for r in super::prime_divisors(e as u64) {
            let h = frobenius_power_of_x(m, p, e / r as u32);
            let g = gcd(m, &sub(&h, &x, p), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

impl Field {
    /// Build F_{p^e}. When `modulus` is omitted the smallest monic irreducible
    /// of degree `e` (by code of its lower coefficients) is used.
    pub fn new(p: u64, e: u32, modulus: Option<&[u64]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::DegreeMismatch { expected: 0, got: "extension degree 0".into() });
        }
        let q = (p as u128).checked_pow(e).unwrap_or(u128::MAX);
        if q > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge { p, e });
        }
        let p32 = p as u32;
        let q = q as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 || m[e as usize] != 1 {
                    return Err(Error::DegreeMismatch { expected: e, got: format!("{m:?}") });
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(Error::InvalidElement(format!("modulus coefficient {c} >= p = {p}")));
                }
                let m: Vec<u32> = m.iter().map(|&c| c as u32).collect();
                if !fp_poly::is_irreducible(&m, p32) {
                    return Err(Error::ReducibleModulus(format!("{m:?}")));
                }
                m
            }
            None => Self::smallest_irreducible(p32, e),
        };
        let mut field = Field { p: p32, e, q, modulus, generator: FieldElem::ONE, tables: None };
        field.generator = field.find_generator();
        if q as u64 <= LOG_TABLE_THRESHOLD {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        Self::new(spec.p, spec.e, spec.modulus.as_deref())
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p as u64,
            e: self.e,
            modulus: Some(self.modulus.iter().map(|&c| c as u64).collect()),
        }
    }

    fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
        let count = (p as u64).pow(e);
        for code in 0..count {
            let mut m = Vec::with_capacity(e as usize + 1);
            let mut c = code;
            for _ in 0..e {
                m.push((c % p as u64) as u32);
                c /= p as u64;
            }
            m.push(1);
            if fp_poly::is_irreducible(&m, p) {
                return m;
            }
        }
        unreachable!("irreducible polynomials of every degree exist over F_p")
    }

    fn find_generator(&self) -> FieldElem {
        let order = self.q as u64 - 1;
        let primes = prime_divisors(order);
        (1..self.q)
            .map(FieldElem)
            .find(|&x| primes.iter().all(|&r| self.pow_slow(x, order / r) != FieldElem::ONE))
            .expect("F_q^x is cyclic")
    }

    fn build_tables(&self) -> LogTables {
        let n = self.q as usize - 1;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![0u32; self.q as usize];
        let mut cur = FieldElem::ONE;
        for i in 0..n {
            exp.push(cur.0);
            log[cur.0 as usize] = i as u32;
            cur = self.mul_slow(cur, self.generator);
        }
        let trace = (0..self.q).map(|x| self.trace_slow(FieldElem(x))).collect();
        LogTables { exp, log, trace }
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    pub fn has_log_table(&self) -> bool {
        self.tables.is_some()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    pub fn is_valid(&self, x: FieldElem) -> bool {
        x.0 < self.q
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.e as usize {
            return Err(Error::InvalidElement(format!(
                "{coeffs:?} has more than e = {} coefficients",
                self.e
            )));
        }
        let mut code = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.p as u64 {
                return Err(Error::InvalidElement(format!("coefficient {c} >= p = {}", self.p)));
            }
            code = code * self.p as u64 + c;
        }
        Ok(FieldElem(code as u32))
    }

    /// The `e` power-basis coefficients, constant term first.
    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.e as usize);
        let mut c = x.0;
        for _ in 0..self.e {
            out.push(c % self.p);
            c /= self.p;
        }
        out
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if self.e == 1 {
            let s = a.0 + b.0;
            return FieldElem(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        for _ in 0..self.e {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            x /= self.p;
            y /= self.p;
            place = place.wrapping_mul(self.p);
        }
        FieldElem(out)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 {
            return a;
        }
        if self.e == 1 {
            return FieldElem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        for _ in 0..self.e {
            let d = (self.p - x % self.p) % self.p;
            out += d * place;
            x /= self.p;
            place = place.wrapping_mul(self.p);
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let n = self.q - 1;
                let s = t.log[a.0 as usize] + t.log[b.0 as usize];
                FieldElem(t.exp[(if s >= n { s - n } else { s }) as usize])
            }
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.e == 1 {
            return FieldElem((a.0 as u64 * b.0 as u64 % self.p as u64) as u32);
        }
        let r = fp_poly::mul_mod(&self.coeffs(a), &self.coeffs(b), &self.modulus, self.p);
        let mut code = 0u32;
        for &c in r.iter().rev() {
            code = code * self.p + c;
        }
        FieldElem(code)
    }

    fn pow_slow(&self, x: FieldElem, mut k: u64) -> FieldElem {
        let mut result = FieldElem::ONE;
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul_slow(result, base);
            }
            base = self.mul_slow(base, base);
            k >>= 1;
        }
        result
    }

    pub fn pow(&self, x: FieldElem, k: u64) -> FieldElem {
        if k == 0 {
            return FieldElem::ONE;
        }
        if x.0 == 0 {
            return FieldElem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let n = self.q as u64 - 1;
                let l = t.log[x.0 as usize] as u64 * (k % n) % n;
                FieldElem(t.exp[l as usize])
            }
            None => self.pow_slow(x, k),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, x: FieldElem) -> Option<FieldElem> {
        if x.0 == 0 {
            return None;
        }
        Some(match &self.tables {
            Some(t) => {
                let n = self.q - 1;
                let l = t.log[x.0 as usize];
                FieldElem(t.exp[((n - l) % n) as usize])
            }
            None => self.pow_slow(x, self.q as u64 - 2),
        })
    }

    pub fn frobenius(&self, x: FieldElem) -> FieldElem {
        self.pow(x, self.p as u64)
    }

    fn trace_slow(&self, x: FieldElem) -> u32 {
        let mut acc = FieldElem::ZERO;
        let mut cur = x;
        for _ in 0..self.e {
            acc = self.add(acc, cur);
            cur = self.pow_slow(cur, self.p as u64);
        }
        debug_assert!(acc.0 < self.p, "trace must land in F_p");
        acc.0
    }

    /// Absolute trace `Σ_{i<e} x^{p^i}`, returned as an element of F_p.
    pub fn trace_to_prime(&self, x: FieldElem) -> u32 {
        match &self.tables {
            Some(t) => t.trace[x.0 as usize],
            None => self.trace_slow(x),
        }
    }

    /// `k` with `generator^k = x`.
    pub fn discrete_log(&self, x: FieldElem) -> Result<u64> {
        if x.0 == 0 {
            return Err(Error::ZeroArgument);
        }
        match &self.tables {
            Some(t) => Ok(t.log[x.0 as usize] as u64),
            None => Err(Error::TableUnavailable(self.q as u64)),
        }
    }

    pub fn generator_pow(&self, k: u64) -> FieldElem {
        self.pow(self.generator, k)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: FieldElem) -> Option<u64> {
        if x.0 == 0 {
            return None;
        }
        let mut n = self.q as u64 - 1;
        for r in prime_divisors(n) {
            while n.is_multiple_of(r) && self.pow(x, n / r) == FieldElem::ONE {
                n /= r;
            }
        }
        Some(n)
    }

    pub fn format_elem(&self, x: FieldElem) -> String {
        if self.e == 1 {
            x.0.to_string()
        } else {
            format!("{:?}", self.coeffs(x))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fields() -> Vec<Field> {
        [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2)]
            .iter()
            .map(|&(p, e)| Field::new(p, e, None).unwrap())
            .collect()
    }

    #[test]
    fn create_examples() {
        let f3 = Field::new(3, 1, None).unwrap();
        assert_eq!(f3.q(), 3);
        assert_eq!(f3.generator(), FieldElem::from_index(2));

        let f4 = Field::new(2, 2, Some(&[1, 1, 1])).unwrap();
        assert_eq!(f4.q(), 4);

        assert!(matches!(Field::new(2, 2, Some(&[1, 0, 1])), Err(Error::ReducibleModulus(_))));
        assert!(matches!(Field::new(4, 1, None), Err(Error::NotPrime(4))));
        assert!(matches!(Field::new(3, 2, Some(&[1, 1])), Err(Error::DegreeMismatch { .. })));
        assert!(matches!(Field::new(3, 2, Some(&[1, 0, 2])), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn default_modulus_is_smallest_irreducible() {
        assert_eq!(Field::new(2, 2, None).unwrap().modulus(), &[1, 1, 1]);
        // x^2 + 1 is irreducible over F_3 and is the first candidate after x^2 (reducible)
        assert_eq!(Field::new(3, 2, None).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Field::new(2, 3, None).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(Field::new(5, 1, None).unwrap().modulus(), &[0, 1]);
    }

    #[test]
    fn generator_has_full_order() {
        for f in small_fields() {
            assert_eq!(f.order(f.generator()), Some(f.q() - 1), "q = {}", f.q());
            // smallest such element in code order
            for x in 1..f.generator().index() {
                assert!(f.order(FieldElem::from_index(x)).unwrap() < f.q() - 1);
            }
        }
        assert_eq!(Field::prime(5).unwrap().generator(), FieldElem::from_index(2));
    }

    #[test]
    fn trace_examples() {
        let f4 = Field::new(2, 2, Some(&[1, 1, 1])).unwrap();
        assert_eq!(f4.trace_to_prime(FieldElem::ONE), 0);
        let omega = f4.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f4.trace_to_prime(omega), 1);
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.trace_to_prime(FieldElem::from_index(2)), 2);
    }

    #[test]
    fn discrete_log_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.discrete_log(FieldElem::from_index(2)), Ok(1));
        assert_eq!(f3.discrete_log(FieldElem::ONE), Ok(0));
        assert_eq!(f3.discrete_log(FieldElem::ZERO), Err(Error::ZeroArgument));
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.discrete_log(FieldElem::from_index(4)), Ok(2));
    }

    #[test]
    fn large_field_has_no_table() {
        // 2^21 > threshold
        let f = Field::new(2, 21, None).unwrap();
        assert!(!f.has_log_table());
        assert_eq!(f.discrete_log(FieldElem::ONE), Err(Error::TableUnavailable(1 << 21)));
        let x = FieldElem::from_index(12345);
        let y = f.inv(x).unwrap();
        assert_eq!(f.mul(x, y), FieldElem::ONE);
        assert!(f.trace_to_prime(x) < 2);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in small_fields().into_iter().filter(|f| f.q() <= 25) {
            let all: Vec<_> = f.elements().collect();
            for &a in &all {
                assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
                    assert_eq!(f.generator_pow(f.discrete_log(a).unwrap()), a);
                }
                for &b in &all {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                    for &c in &all {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_and_trace_exhaustive() {
        for f in small_fields().into_iter().filter(|f| f.q() <= 25) {
            let fixed: Vec<_> = f.elements().filter(|&x| f.frobenius(x) == x).collect();
            assert_eq!(fixed.len() as u64, f.p());
            assert!(fixed.iter().all(|x| (x.index() as u64) < f.p()));
            let mut fibers = vec![0u64; f.p() as usize];
            for a in f.elements() {
                fibers[f.trace_to_prime(a) as usize] += 1;
                for b in f.elements() {
                    assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
                    let s = (f.trace_to_prime(a) + f.trace_to_prime(b)) % f.p() as u32;
                    assert_eq!(f.trace_to_prime(f.add(a, b)), s);
                }
                for lam in 0..f.p() {
                    let l = FieldElem::from_index(lam as u32);
                    let expect = (lam as u32 * f.trace_to_prime(a)) % f.p() as u32;
                    assert_eq!(f.trace_to_prime(f.mul(l, a)), expect);
                }
            }
            assert!(fibers.iter().all(|&n| n == f.q() / f.p()));
        }
    }

    #[test]
    fn spec_round_trip() {
        let f = Field::new(3, 2, None).unwrap();
        let json = serde_json::to_string(&f.spec()).unwrap();
        assert_eq!(json, r#"{"p":3,"e":2,"modulus":[1,0,1]}"#);
        let back: FieldSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(Field::from_spec(&back).unwrap(), f);
    }
}
