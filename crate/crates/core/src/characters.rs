//! Additive and multiplicative characters.
//!
//! The additive exponential on F_q(u) is
//! `e(f/g) = exp(2πi · Tr(a_{-1}) / p)` where `a_{-1}` is the coefficient of
//! `u^{-1}` in the expansion of `f/g` in F_q((1/u)). The forward pairing used
//! everywhere is `(f, h) ↦ e(fh/g)`.
//!
//! A multiplicative character of `(F_q[u]/(g))^×` is given by one exponent
//! `k_π ∈ [0, q^{deg π} − 2]` per irreducible factor, against the fixed
//! generator of each residue field: `χ_π(x) = ζ^{k_π · log(x mod π)}` with
//! `ζ = exp(2πi / (q^{deg π} − 1))`.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::poly::{Poly, PolyRing};
use crate::residue::{ResidueRing, NOT_A_UNIT};

/// Coefficient of `u^{-1}` in the Laurent expansion of `f/g` at infinity.
///
/// Only `f mod g` contributes, and for `r = f mod g` of degree below
/// `m = deg g` the expansion starts `r_{m-1}/lc(g) · u^{-1} + …`.
pub fn residue_at_infinity(ring: &PolyRing, f: &Poly, g: &Poly) -> Result<FieldElem> {
    let m = g.degree().ok_or(Error::DivisionByZeroPoly)?;
    if m == 0 {
        return Ok(FieldElem::ZERO);
    }
    let r = ring.rem(f, g)?;
    let lc_inv = ring.field().inv(g.leading().unwrap()).unwrap();
    Ok(ring.field().mul(r.coeff(m - 1), lc_inv))
}

/// `exp(2πi k/n)` with `k` reduced mod `n` first.
pub fn root_of_unity(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * k == n {
        return Complex64::new(-1.0, 0.0);
    }
    Complex64::from_polar(1.0, TAU * k as f64 / n as f64)
}

/// Evaluates `e(f/g)`.
#[derive(Debug, Clone)]
pub struct AdditiveCharEvaluator {
    ring: PolyRing,
    roots: Vec<Complex64>,
}

impl AdditiveCharEvaluator {
    pub fn new(field: Arc<Field>) -> Self {
        let p = field.p();
        let roots = (0..p).map(|k| root_of_unity(k, p)).collect();
        AdditiveCharEvaluator { ring: PolyRing::new(field), roots }
    }

    /// `exp(2πi/p)`.
    pub fn root(&self) -> Complex64 {
        self.roots.get(1).copied().unwrap_or(Complex64::new(1.0, 0.0))
    }

    /// `ψ(k) = exp(2πi k/p)` for `k ∈ F_p`.
    pub fn psi(&self, k: u32) -> Complex64 {
        self.roots[k as usize % self.roots.len()]
    }

    /// Table `ψ(0), …, ψ(p−1)`.
    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn eval(&self, f: &Poly, g: &Poly) -> Result<Complex64> {
        let a = residue_at_infinity(&self.ring, f, g)?;
        Ok(self.psi(self.ring.field().trace_to_prime(a)))
    }
}

/// Config-level description: `{"modulus": <poly>, "exponents": [k_1, …]}`,
/// exponents listed in canonical factor order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharSpec {
    pub modulus: Vec<Vec<u64>>,
    pub exponents: Vec<u64>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// A multiplicative character modulo a squarefree `g`, extended by zero to
/// non-units.
#[derive(Debug, Clone)]
pub struct MultChar {
    ring: Arc<ResidueRing>,
    exponents: Vec<u64>,
    moduli: Vec<u64>,
    order: u64,
}

impl PartialEq for MultChar {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring) && self.exponents == other.exponents
    }
}

impl MultChar {
    pub fn new(ring: Arc<ResidueRing>, exponents: Vec<u64>) -> Result<Self> {
        let fields = ring.residue_fields();
        if exponents.len() != fields.len() {
            return Err(Error::ExponentCount { expected: fields.len(), got: exponents.len() });
        }
        let moduli: Vec<u64> = fields.iter().map(|f| f.unit_order()).collect();
        for ((&k, &n), pi) in exponents.iter().zip(&moduli).zip(ring.factors()) {
            if k >= n {
                return Err(Error::ExponentOutOfRange {
                    factor: ring.poly_ring().format(pi),
                    exponent: k,
                    max: n - 1,
                });
            }
        }
        let order = exponents
            .iter()
            .zip(&moduli)
            .fold(1, |acc, (&k, &n)| lcm(acc, n / gcd(k, n)));
        Ok(MultChar { ring, exponents, moduli, order })
    }

    pub fn principal(ring: Arc<ResidueRing>) -> Self {
        let r = ring.factors().len();
        Self::new(ring, vec![0; r]).expect("zero exponents are always in range")
    }

    pub fn ring(&self) -> &Arc<ResidueRing> {
        &self.ring
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Nontrivial on every factor, i.e. not induced from a proper divisor.
    pub fn is_primitive(&self) -> bool {
        self.exponents.iter().all(|&k| k != 0)
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    /// Index of the first factor on which the character is trivial.
    pub fn first_trivial_factor(&self) -> Option<usize> {
        self.exponents.iter().position(|&k| k == 0)
    }

    pub fn spec(&self) -> CharSpec {
        CharSpec {
            modulus: self.ring.poly_ring().to_nested(self.ring.modulus()),
            exponents: self.exponents.clone(),
        }
    }

    fn value_from_logs(&self, logs: impl Iterator<Item = u32>) -> Complex64 {
        let mut frac = 0.0f64;
        let mut single = (0u64, 1u64);
        for ((l, &k), &n) in logs.zip(&self.exponents).zip(&self.moduli) {
            if l == NOT_A_UNIT {
                return Complex64::new(0.0, 0.0);
            }
            let num = (k as u128 * l as u128 % n as u128) as u64;
            single = (num, n);
            if num != 0 {
                frac += num as f64 / n as f64;
            }
        }
        if self.exponents.len() == 1 {
            return root_of_unity(single.0, single.1);
        }
        let frac = frac.fract();
        if frac == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, TAU * frac)
        }
    }

    /// `χ(x)` for any polynomial (reduced internally).
    pub fn eval(&self, x: &Poly) -> Complex64 {
        let fields = self.ring.residue_fields();
        let logs = fields.iter().map(|rf| rf.discrete_log(rf.reduce(x)).map_or(NOT_A_UNIT, |l| l as u32));
        self.value_from_logs(logs)
    }

    /// `χ` at a residue index.
    pub fn eval_idx(&self, idx: usize) -> Complex64 {
        self.value_from_logs(self.ring.unit_coords_of(idx).iter().copied())
    }

    /// `χ_π` on the residue field of factor `i`, at a residue-field index.
    pub fn eval_component(&self, i: usize, x: usize) -> Complex64 {
        let rf = &self.ring.residue_fields()[i];
        match rf.discrete_log(x) {
            Err(_) => Complex64::new(0.0, 0.0),
            Ok(l) => root_of_unity(self.exponents[i] * l % self.moduli[i], self.moduli[i]),
        }
    }

    /// Every character modulo `g`, exponent vectors in lexicographic order.
    pub fn all(ring: &Arc<ResidueRing>) -> Vec<MultChar> {
        let moduli: Vec<u64> = ring.residue_fields().iter().map(|f| f.unit_order()).collect();
        let total: u64 = moduli.iter().product();
        (0..total)
            .map(|mut code| {
                let mut ks = vec![0u64; moduli.len()];
                for (k, &n) in ks.iter_mut().zip(&moduli).rev() {
                    *k = code % n;
                    code /= n;
                }
                MultChar::new(ring.clone(), ks).unwrap()
            })
            .collect()
    }

    pub fn primitive(ring: &Arc<ResidueRing>) -> Vec<MultChar> {
        Self::all(ring).into_iter().filter(|c| c.is_primitive()).collect()
    }
}
