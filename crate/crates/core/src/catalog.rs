//! Built-in trace-function families and example parameter choices.

use std::fmt;

use crate::characters::MultChar;
use crate::poly::PolyRing;
use crate::tracefn::{MixedCharSpec, TPoly};

/// A polynomial in T whose coefficients are polynomials in u, written as
/// integer coefficient lists from the constant term up.
pub type TCoeffs = &'static [&'static [i64]];

/// One `(F, a, b)` triple for `χ(F(u,h))·e(a(u,h)·b(u,h)⁻¹/g)`.
#[derive(Debug, Clone, Copy)]
pub struct Triple {
    pub name: &'static str,
    pub f: TCoeffs,
    pub a: TCoeffs,
    pub b: TCoeffs,
    /// Smallest characteristic for which the triple meets the hypotheses on
    /// every modulus.
    pub min_p: u64,
}

impl Triple {
    pub fn to_t_polys(&self, ring: &PolyRing) -> (TPoly, TPoly, TPoly) {
        let conv = |c: TCoeffs| c.iter().map(|x| ring.from_ints(x)).collect();
        (conv(self.f), conv(self.a), conv(self.b))
    }

    pub fn spec(&self, chi: MultChar) -> MixedCharSpec {
        let (f, a, b) = self.to_t_polys(chi.ring().poly_ring());
        MixedCharSpec::new(chi, f, a, b)
    }

    /// `F` is constant in T, so `χ(F)` does not depend on the character.
    pub fn chi_free(&self) -> bool {
        self.f.len() <= 1
    }
}

pub const TRIPLES: &[Triple] = &[
    Triple { name: "burgess χ(F(h)) F=T", f: &[&[0], &[1]], a: &[], b: &[&[1]], min_p: 2 },
    Triple { name: "burgess χ(F(h)) F=T+u", f: &[&[0, 1], &[1]], a: &[], b: &[&[1]], min_p: 2 },
    Triple { name: "burgess χ(F(h)) F=T^2+uT+1", f: &[&[1], &[0, 1], &[1]], a: &[], b: &[&[1]], min_p: 2 },
    Triple { name: "hooley e(a·h̄/g) a=1", f: &[&[1]], a: &[&[1]], b: &[&[0], &[1]], min_p: 2 },
    Triple { name: "hooley e(a·h̄/g) a=1 b=T+u", f: &[&[1]], a: &[&[1]], b: &[&[0, 1], &[1]], min_p: 2 },
    Triple { name: "zhang e((h^2+1)/(h+1)/g)", f: &[&[1]], a: &[&[1], &[0], &[1]], b: &[&[1], &[1]], min_p: 3 },
    Triple { name: "mixed χ(h)e(h̄/g)", f: &[&[0], &[1]], a: &[&[1]], b: &[&[0], &[1]], min_p: 2 },
    Triple { name: "mixed χ(h+1)e(h/g)", f: &[&[1], &[1]], a: &[&[0], &[1]], b: &[&[1]], min_p: 2 },
    Triple { name: "mixed χ(h+1)e(h^2/h/g)", f: &[&[1], &[1]], a: &[&[0], &[0], &[1]], b: &[&[0], &[1]], min_p: 2 },
    Triple { name: "hooley e(h̄^2/g)", f: &[&[1]], a: &[&[1]], b: &[&[0], &[0], &[1]], min_p: 3 },
];

/// Inventory line for `list-catalog`.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub family: &'static str,
    pub description: String,
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<12} {:<34} {}", self.family, self.name, self.description)
    }
}

fn show(c: TCoeffs) -> String {
    if c.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = c
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, u)| u.iter().any(|&x| x != 0))
        .map(|(i, u)| {
            let coeff: Vec<String> = u
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, &x)| x != 0)
                .map(|(j, &x)| match (j, x) {
                    (0, x) => x.to_string(),
                    (1, 1) => "u".into(),
                    (1, x) => format!("{x}u"),
                    (j, 1) => format!("u^{j}"),
                    (j, x) => format!("{x}u^{j}"),
                })
                .collect();
            let coeff = if coeff.len() > 1 { format!("({})", coeff.join(" + ")) } else { coeff[0].clone() };
            match (i, coeff.as_str()) {
                (0, _) => coeff,
                (1, "1") => "T".into(),
                (1, _) => format!("{coeff}T"),
                (i, "1") => format!("T^{i}"),
                (i, _) => format!("{coeff}T^{i}"),
            }
        })
        .collect();
    parts.join(" + ")
}

/// Every built-in entry, in a fixed order.
pub fn entries() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = TRIPLES
        .iter()
        .map(|t| CatalogEntry {
            name: t.name.into(),
            family: "mixed-char",
            description: format!(
                "F = {}, a = {}, b = {}, p >= {}",
                show(t.f),
                show(t.a),
                show(t.b),
                t.min_p
            ),
        })
        .collect();
    for k in [2, 3] {
        out.push(CatalogEntry {
            name: format!("kloosterman k={k}"),
            family: "kloosterman",
            description: format!("normalized Kl_{k}(a; 1), rank = conductor = {k}"),
        });
    }
    for (d, p) in [(2, 3), (3, 5)] {
        out.push(CatalogEntry {
            name: format!("value-set T^{d}"),
            family: "value-set",
            description: format!("indicator of {{x^{d} mod π}}, π irreducible, p >= {p}"),
        });
    }
    out
}

/// Entries whose name or family contains `filter` (all when empty).
pub fn filtered(filter: &str) -> Vec<CatalogEntry> {
    entries()
        .into_iter()
        .filter(|e| filter.is_empty() || e.name.contains(filter) || e.family.contains(filter))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::residue::ResidueRing;
    use std::sync::Arc;

    #[test]
    fn names() {
        let all: Vec<String> = entries().into_iter().map(|e| e.name).collect();
        for needle in ["kloosterman k=2", "hooley e(a·h̄/g)", "burgess χ(F(h))"] {
            assert!(all.iter().any(|n| n.contains(needle)), "{needle}");
        }
        assert_eq!(filtered("").len(), all.len());
        assert!(filtered("kloosterman").iter().all(|e| e.family == "kloosterman"));
        assert_eq!(show(TRIPLES[2].f), "T^2 + uT + 1");
        assert_eq!(show(TRIPLES[4].b), "T + u");
    }

    #[test]
    fn triples_validate() {
        for p in [2u64, 3, 5, 7] {
            let r = PolyRing::new(Arc::new(Field::prime(p).unwrap()));
            for d in 1..=3 {
                for g in r.monic_of_degree(d).filter(|g| r.is_squarefree(g)) {
                    let ring = ResidueRing::new(&r, &g).unwrap();
                    let Some(chi) = MultChar::primitive(&ring).into_iter().next() else { continue };
                    for t in TRIPLES.iter().filter(|t| p >= t.min_p) {
                        let spec = t.spec(chi.clone());
                        assert!(spec.validate().is_ok(), "{} mod {}: {:?}", t.name, r.format(&g), spec.validate());
                    }
                }
            }
        }
    }
}
