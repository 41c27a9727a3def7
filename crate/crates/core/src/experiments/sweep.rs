use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bounds::{hooley_cor_bound, mainres_bound, Bound};
use crate::catalog::TRIPLES;
use crate::characters::MultChar;
use crate::error::Result;
use crate::exec::{map_items, Exec};
use crate::poly::PolyRing;
use crate::residue::ResidueRing;
use crate::tracefn::{from_mixed_char, MixedCharSpec, TraceFunction};
use crate::transforms::window_sums;

/// Centers are enumerated exhaustively up to this modulus norm.
pub const EXHAUSTIVE_CENTER_LIMIT: usize = 729;
pub const SAMPLED_CENTERS: usize = 64;

/// Tolerance on `|sum| ≤ bound`.
pub const BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum CenterSpec {
    /// Exhaustive for small moduli, otherwise a seeded sample.
    #[default]
    Auto,
    All,
    Origin,
    Sample { count: usize },
}

impl CenterSpec {
    pub fn centers(self, size: usize, seed: u64) -> Vec<usize> {
        let draw = |count: usize| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v = sample(&mut rng, size, count.min(size)).into_vec();
            v.sort_unstable();
            v
        };
        match self {
            CenterSpec::All => (0..size).collect(),
            CenterSpec::Origin => vec![0],
            CenterSpec::Auto if size <= EXHAUSTIVE_CENTER_LIMIT => (0..size).collect(),
            CenterSpec::Auto => draw(SAMPLED_CENTERS),
            CenterSpec::Sample { count } => draw(count),
        }
    }
}

/// Which bound a sweep compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSpec {
    /// `√q·X^{1/2}·|g|^{log_q(2r + c)}` from the table's rank and conductor.
    MainRes,
    /// `q^{(n+1)/2}·max{deg F + 2deg b + 2, 2deg b + 2}^{deg g}` from T-degrees of F and b.
    HooleyCor { deg_f: Option<u32>, deg_b: Option<u32> },
}

impl BoundSpec {
    pub fn evaluate(&self, t: &TraceFunction, n: u32) -> Result<Bound> {
        let ring = t.ring();
        let (q, m) = (ring.q(), ring.degree() as u32);
        match *self {
            BoundSpec::MainRes => mainres_bound(q, q.pow(n), m, t.rank(), t.conductor()),
            BoundSpec::HooleyCor { deg_f, deg_b } => hooley_cor_bound(q, n, m, deg_f, deg_b),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundSpec::MainRes => "mainres",
            BoundSpec::HooleyCor { .. } => "hooley-cor",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumRow {
    pub n: u32,
    pub center: usize,
    pub sum: Complex64,
    pub abs_sum: f64,
    pub bound: Bound,
    pub ratio: f64,
    pub log10_ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumReport {
    pub label: String,
    pub q: u64,
    pub bound: &'static str,
    pub rows: Vec<SumRow>,
    pub max_ratio: f64,
    pub violations: usize,
}

impl SumReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// One row per `(n, center)`; every window sum for a given `n` comes from a
/// single layered pass over the table.
pub fn sweep_short_sums(
    t: &TraceFunction,
    label: &str,
    n_values: &[u32],
    centers: &[usize],
    bound: BoundSpec,
    exec: Exec,
) -> Result<SumReport> {
    let mut rows = Vec::with_capacity(n_values.len() * centers.len());
    for &n in n_values {
        let b = bound.evaluate(t, n)?;
        let sums = window_sums(t, n as usize, exec)?;
        for &c in centers {
            let sum = sums[c];
            let abs_sum = sum.norm();
            rows.push(SumRow {
                n,
                center: c,
                sum,
                abs_sum,
                bound: b,
                ratio: b.ratio(abs_sum),
                log10_ratio: b.log10_ratio(abs_sum),
                pass: b.admits(abs_sum, BOUND_TOL),
            });
        }
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let violations = rows.iter().filter(|r| !r.pass).count();
    Ok(SumReport { label: label.into(), q: t.ring().q(), bound: bound.name(), rows, max_ratio, violations })
}

/// One hypothesis-satisfying mixed-character spec from the built-in catalog.
#[derive(Debug, Clone)]
pub struct CatalogSpec {
    pub modulus: String,
    pub triple: &'static str,
    pub exponents: Vec<u64>,
    pub spec: MixedCharSpec,
}

impl CatalogSpec {
    pub fn label(&self) -> String {
        format!("{} | g = {} | χ = {:?}", self.triple, self.modulus, self.exponents)
    }
}

/// Every catalog spec over the given ring of polynomials: squarefree monic
/// moduli of degree `1..=max_deg`, at most `max_chars` primitive characters
/// per modulus, and each triple allowed in this characteristic. Triples with
/// F constant in T use only the first character since χ(F) is then constant.
pub fn cor_catalog(ring: &PolyRing, max_deg: usize, max_chars: usize) -> Result<Vec<CatalogSpec>> {
    let p = ring.field().p();
    let mut out = Vec::new();
    for d in 1..=max_deg {
        for g in ring.monic_of_degree(d).filter(|g| ring.is_squarefree(g)) {
            let rr = ResidueRing::new(ring, &g)?;
            let chars: Vec<MultChar> = MultChar::primitive(&rr).into_iter().take(max_chars).collect();
            for t in TRIPLES.iter().filter(|t| p >= t.min_p) {
                let take = if t.chi_free() { 1 } else { chars.len() };
                for chi in chars.iter().take(take) {
                    let spec = t.spec(chi.clone());
                    if spec.validate().is_err() {
                        continue;
                    }
                    out.push(CatalogSpec {
                        modulus: ring.format(&g),
                        triple: t.name,
                        exponents: chi.exponents().to_vec(),
                        spec,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Sweep every `n ≤ deg g` and every center for one catalog spec against
/// the rational-function bound.
pub fn sweep_catalog_spec(cs: &CatalogSpec, centers: CenterSpec, seed: u64, exec: Exec) -> Result<SumReport> {
    let t = from_mixed_char(&cs.spec, Exec::Sequential)?;
    let degs = cs.spec.degrees();
    let bound = BoundSpec::HooleyCor { deg_f: degs.f.map(|d| d as u32), deg_b: degs.b.map(|d| d as u32) };
    let m = t.ring().degree() as u32;
    let ns: Vec<u32> = (0..=m).collect();
    sweep_short_sums(&t, &cs.label(), &ns, &centers.centers(t.len(), seed), bound, exec)
}

/// Per-spec outcome of a catalog sweep; the individual rows are dropped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecSummary {
    pub label: String,
    pub q: u64,
    pub deg_g: u32,
    pub rows: usize,
    pub violations: usize,
    pub max_ratio: f64,
    /// The row attaining `max_ratio`.
    pub worst: Option<SumRow>,
}

impl SpecSummary {
    pub fn of(rep: &SumReport, deg_g: u32) -> Self {
        let worst = rep.rows.iter().max_by(|a, b| a.ratio.total_cmp(&b.ratio)).cloned();
        SpecSummary {
            label: rep.label.clone(),
            q: rep.q,
            deg_g,
            rows: rep.rows.len(),
            violations: rep.violations,
            max_ratio: rep.max_ratio,
            worst,
        }
    }
}

/// The full catalog sweep, fanned out over specs.
pub fn cor_catalog_sweep(
    rings: &[PolyRing],
    max_deg: usize,
    max_chars: usize,
    centers: CenterSpec,
    seed: u64,
    exec: Exec,
) -> Result<Vec<SpecSummary>> {
    let mut specs = Vec::new();
    for r in rings {
        specs.extend(cor_catalog(r, max_deg, max_chars)?);
    }
    map_items(exec, &specs, |cs| {
        let rep = sweep_catalog_spec(cs, centers, seed, Exec::Sequential)?;
        Ok(SpecSummary::of(&rep, cs.spec.ring().degree() as u32))
    })
    .into_iter()
    .collect()
}

/// Convenience for a single table over an `Arc` ring.
pub fn sweep_all_n(t: &TraceFunction, label: &str, centers: CenterSpec, seed: u64, bound: BoundSpec, exec: Exec) -> Result<SumReport> {
    let ring: &Arc<ResidueRing> = t.ring();
    let ns: Vec<u32> = (0..=ring.degree() as u32).collect();
    sweep_short_sums(t, label, &ns, &centers.centers(ring.size(), seed), bound, exec)
}
