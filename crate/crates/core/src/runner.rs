//! Turns an [`ExperimentConfig`] into a report, tables and files.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::characters::{AdditiveCharEvaluator, MultChar};
use crate::config::{BoundKind, ExperimentConfig, ExperimentKind, FamilySpec, NestedTPoly};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::experiments::bounds::log_q_exact;
use crate::experiments::{
    covariance_experiment, cor_catalog_sweep, mordell_experiment, square_phase_control, sweep_short_sums, variance_experiment,
    BoundSpec, SumReport,
};
use crate::field::Field;
use crate::poly::{Poly, PolyRing};
use crate::report::{fmt_num, Check, Report, Table};
use crate::residue::ResidueRing;
use crate::tracefn::{
    from_kloosterman, from_mixed_char, value_set, KloostermanSpec, MixedCharSpec, TPoly, TraceFunction,
};
use crate::transforms::{complete_sum, dft, inverse_dft, perp_space, perp_space_exhaustive, short_sum, short_sum_via_dft, Interval};

/// Default constant in front of asserted error budgets.
pub const DEFAULT_BUDGET_CONSTANT: f64 = 10.0;

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Replaces the config's seed.
    pub seed: Option<u64>,
    pub exec: Exec,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: Report,
    pub tables: Vec<Table>,
    /// The single trace function a run was built on, if any.
    pub trace: Option<TraceFunction>,
}

impl RunOutput {
    /// One-line human summary.
    pub fn summary_line(&self) -> String {
        let bad = self.report.checks.iter().filter(|c| c.is_bad()).count();
        let expected = self.report.checks.iter().filter(|c| c.expected_failure && !c.passed).count();
        format!(
            "{}: {} ({} checks, {} failed, {} expected violations)",
            self.report.experiment,
            if self.report.all_passed { "PASS" } else { "FAIL" },
            self.report.checks.len(),
            bad,
            expected
        )
    }

    /// Write `<stem>_report.json`, every table as `<stem>_<name>.csv`, the
    /// trace function as `<stem>_trace.csv` with a JSON sidecar, and
    /// optionally a gnuplot script. Returns the paths written.
    pub fn write(&self, dir: &Path, stem: &str, gnuplot: bool) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        for t in &self.tables {
            paths.push(t.write(dir, stem)?);
        }
        if let Some(t) = &self.trace {
            let path = dir.join(format!("{stem}_trace.csv"));
            t.write_csv(fs::File::create(&path)?)?;
            paths.push(path);
            let side = dir.join(format!("{stem}_trace.json"));
            fs::write(&side, serde_json::to_string_pretty(&t.sidecar()).unwrap() + "\n")?;
            paths.push(side);
        }
        let rep = dir.join(format!("{stem}_report.json"));
        fs::write(&rep, self.report.to_json())?;
        paths.push(rep);
        if gnuplot {
            let gp = dir.join(format!("{stem}.gp"));
            fs::write(&gp, gnuplot_script(self, stem))?;
            paths.push(gp);
        }
        Ok(paths)
    }
}

fn gnuplot_script(out: &RunOutput, stem: &str) -> String {
    let (table, x, y, ylabel) = match out.report.experiment.as_str() {
        "sweep" if out.tables[0].name == "specs" => ("specs", "deg_g", "max_ratio", "max |sum| / bound"),
        "sweep" => ("rows", "n", "log10_ratio", "log10(|sum| / bound)"),
        "mordell" => ("rows", "n", "ratio", "|count - main| / budget"),
        "variance" => ("rows", "k", "variance", "variance"),
        "covariance" => ("rows", "k", "covariance_re", "Re covariance"),
        "control" => ("rows", "m_small", "sum_re", "sum"),
        _ => ("checks", "index", "max_error", "max error"),
    };
    format!(
        "# usage: gnuplot {stem}.gp\nset datafile separator ','\nset key autotitle columnhead\n\
         set terminal pngcairo size 900,600\nset output '{stem}.png'\nset xlabel '{x}'\nset ylabel '{ylabel}'\n\
         plot '{stem}_{table}.csv' using '{x}':'{y}' with points pt 7\n"
    )
}

fn field_ring(cfg: &ExperimentConfig) -> Result<PolyRing> {
    Ok(PolyRing::new(Arc::new(Field::from_spec(cfg.field_spec()?)?)))
}

/// The configured modulus, made monic (with a warning) when necessary.
fn modulus(cfg: &ExperimentConfig, ring: &PolyRing, warnings: &mut Vec<String>) -> Result<Poly> {
    let g = ring.from_nested(cfg.modulus_spec()?)?;
    match g.degree() {
        None => return Err(Error::DivisionByZeroPoly),
        Some(0) => return Err(Error::ConstantModulus),
        Some(_) => {}
    }
    if !g.is_monic() {
        let monic = ring.make_monic(&g);
        warnings.push(format!("modulus {} is not monic; using {}", ring.format(&g), ring.format(&monic)));
        return Ok(monic);
    }
    Ok(g)
}

fn t_poly(ring: &PolyRing, coeffs: &NestedTPoly) -> Result<TPoly> {
    coeffs.iter().map(|c| ring.from_nested(c)).collect()
}

/// T-degrees of `F` and `b` for the rational-function bound.
type TDegrees = (Option<u32>, Option<u32>);

fn build_family(
    fam: &FamilySpec,
    rr: &Arc<ResidueRing>,
    cfg: &ExperimentConfig,
    exec: Exec,
) -> Result<(TraceFunction, Option<TDegrees>)> {
    let ring = rr.poly_ring();
    let (t, degs) = match fam {
        FamilySpec::MixedChar { exponents, f, a, b } => {
            let chi = MultChar::new(rr.clone(), exponents.clone())?;
            let spec = MixedCharSpec::new(chi, t_poly(ring, f)?, t_poly(ring, a)?, t_poly(ring, b)?);
            let d = spec.degrees();
            (from_mixed_char(&spec, exec)?, Some((d.f.map(|x| x as u32), d.b.map(|x| x as u32))))
        }
        FamilySpec::Kloosterman { k, b } => {
            let spec = KloostermanSpec { k: *k, b: ring.from_nested(b)?, conductor: None };
            (from_kloosterman(&spec, rr, exec)?, None)
        }
        FamilySpec::ValueSet { poly } => (value_set(rr, &t_poly(ring, poly)?)?.1, None),
        FamilySpec::Custom { path } => {
            let file = fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            (TraceFunction::read_csv(rr.clone(), file, 1, 0)?, None)
        }
        FamilySpec::CorCatalog { .. } => {
            return Err(Error::Validation("cor-catalog is only valid for sweep experiments".into()));
        }
    };
    let t = t.with_metadata(cfg.metadata.rank, cfg.metadata.conductor)?;
    Ok((t, degs))
}

/// Interval exponents from `params.n`, `params.x`, or every `0..=m`.
fn n_values(cfg: &ExperimentConfig, q: u64, m: u32) -> Result<Vec<u32>> {
    let ns = match (&cfg.params.n, cfg.params.x) {
        (Some(ns), _) => ns.clone(),
        (None, Some(x)) => vec![log_q_exact(x, q, m)?],
        (None, None) => (0..=m).collect(),
    };
    if let Some(&n) = ns.iter().find(|&&n| n > m) {
        return Err(Error::NTooLarge { n, m });
    }
    Ok(ns)
}

pub fn run(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunOutput> {
    let seed = opts.seed.unwrap_or(cfg.seed);
    let mut echo = cfg.clone();
    echo.seed = seed;
    let mut report = Report::new(cfg.experiment.as_str(), seed, serde_json::to_value(&echo).unwrap());
    let (tables, trace) = match cfg.experiment {
        ExperimentKind::Sweep => run_sweep(cfg, seed, opts.exec, &mut report)?,
        ExperimentKind::Mordell => run_mordell(cfg, &mut report)?,
        ExperimentKind::Variance => run_variance(cfg, opts.exec, &mut report)?,
        ExperimentKind::Covariance => run_covariance(cfg, opts.exec, &mut report)?,
        ExperimentKind::Control => run_control(cfg, &mut report)?,
        ExperimentKind::IdentitySuite => run_identity_suite(cfg, seed, opts.exec, &mut report)?,
    };
    report.tables = tables.iter().map(|t| t.name.clone()).collect();
    report.finish();
    Ok(RunOutput { report, tables, trace })
}

type Produced = (Vec<Table>, Option<TraceFunction>);

const SWEEP_HEADER: &[&str] = &[
    "label", "n", "center", "center_poly", "sum_re", "sum_im", "abs_sum", "bound", "log10_bound", "ratio", "log10_ratio", "pass",
];

fn push_sweep_rows_with(table: &mut Table, rep: &SumReport, center_poly: impl Fn(usize) -> String) {
    for r in &rep.rows {
        table.push(vec![
            rep.label.clone(),
            r.n.to_string(),
            r.center.to_string(),
            center_poly(r.center),
            fmt_num(r.sum.re),
            fmt_num(r.sum.im),
            fmt_num(r.abs_sum),
            fmt_num(r.bound.value()),
            fmt_num(r.bound.log10),
            fmt_num(r.ratio),
            fmt_num(r.log10_ratio),
            r.pass.to_string(),
        ]);
    }
}

fn run_sweep(cfg: &ExperimentConfig, seed: u64, exec: Exec, report: &mut Report) -> Result<Produced> {
    if let FamilySpec::CorCatalog { primes, max_deg, max_chars } = cfg.family_spec()? {
        let rings = primes
            .iter()
            .map(|&p| Ok(PolyRing::new(Arc::new(Field::prime(p)?))))
            .collect::<Result<Vec<_>>>()?;
        let reports = cor_catalog_sweep(&rings, *max_deg, *max_chars, cfg.params.centers, seed, exec)?;
        let mut table = Table::new(
            "specs",
            &["label", "q", "deg_g", "rows", "violations", "max_ratio", "worst_n", "worst_center", "worst_abs_sum", "worst_bound"],
        );
        let (mut rows, mut violations, mut max_ratio) = (0, 0, 0f64);
        for rep in &reports {
            rows += rep.rows;
            violations += rep.violations;
            max_ratio = max_ratio.max(rep.max_ratio);
            let w = rep.worst.as_ref().expect("every spec has rows");
            table.push(vec![
                rep.label.clone(),
                rep.q.to_string(),
                rep.deg_g.to_string(),
                rep.rows.to_string(),
                rep.violations.to_string(),
                fmt_num(rep.max_ratio),
                w.n.to_string(),
                w.center.to_string(),
                fmt_num(w.abs_sum),
                fmt_num(w.bound.value()),
            ]);
        }
        report.checks.push(Check::new(
            "hooley-cor bound on every catalog row",
            violations == 0,
            format!("{} specs, {rows} rows, {violations} violations, max ratio {}", reports.len(), fmt_num(max_ratio)),
        ));
        report.summary = json!({ "specs": reports.len(), "rows": rows, "violations": violations, "max_ratio": max_ratio });
        report.warnings.push("bounds at nonzero centers are applied to translates of the trace function".into());
        return Ok((vec![table], None));
    }

    let mut table = Table::new("rows", SWEEP_HEADER);

    let ring = field_ring(cfg)?;
    let g = modulus(cfg, &ring, &mut report.warnings)?;
    let rr = ResidueRing::new(&ring, &g)?;
    let (t, degs) = build_family(cfg.family_spec()?, &rr, cfg, exec)?;
    let m = rr.degree() as u32;
    let ns = n_values(cfg, rr.q(), m)?;
    let bound = match (cfg.params.bound, degs) {
        (Some(BoundKind::Mainres), _) | (None, None) => BoundSpec::MainRes,
        (Some(BoundKind::HooleyCor), Some((deg_f, deg_b))) | (None, Some((deg_f, deg_b))) => {
            BoundSpec::HooleyCor { deg_f, deg_b }
        }
        (Some(BoundKind::HooleyCor), None) => {
            return Err(Error::Validation("the hooley-cor bound needs a mixed-char family".into()));
        }
    };
    let centers = cfg.params.centers.centers(rr.size(), seed);
    let label = t.family().as_str().to_string();
    let rep = sweep_short_sums(&t, &label, &ns, &centers, bound, exec)?;
    push_sweep_rows_with(&mut table, &rep, |c| serde_json::to_string(&ring.to_nested(&rr.unrank(c))).unwrap());
    report.checks.push(Check::new(
        format!("{} bound on every row", bound.name()),
        rep.passed(),
        format!("{} rows, {} violations, max ratio {}", rep.rows.len(), rep.violations, fmt_num(rep.max_ratio)),
    ));
    if centers.iter().any(|&c| c != 0) {
        report.warnings.push("bounds at nonzero centers are applied to translates of the trace function".into());
    }
    report.summary = json!({
        "rows": rep.rows.len(),
        "violations": rep.violations,
        "max_ratio": rep.max_ratio,
        "rank": t.rank(),
        "conductor": t.conductor(),
    });
    Ok((vec![table], Some(t)))
}

fn run_mordell(cfg: &ExperimentConfig, report: &mut Report) -> Result<Produced> {
    let ring = field_ring(cfg)?;
    let pi = modulus(cfg, &ring, &mut report.warnings)?;
    let FamilySpec::ValueSet { poly } = cfg.family_spec()? else {
        return Err(Error::Validation("mordell needs a value-set family".into()));
    };
    let p_t = t_poly(&ring, poly)?;
    let m = pi.degree().unwrap() as u32;
    let ns = match n_values(cfg, ring.q(), m) {
        Err(Error::NTooLarge { n, m }) => return Err(Error::XTooLarge { n, m }),
        other => other?,
    };
    let c = cfg.params.constant.unwrap_or(DEFAULT_BUDGET_CONSTANT);
    let mut table = Table::new(
        "rows",
        &["n", "x", "value_set_size", "count", "main_term", "error", "budget", "ratio", "pass"],
    );
    let mut results = Vec::new();
    for &n in &ns {
        let r = mordell_experiment(&ring, &p_t, &pi, n)?;
        let pass = r.error <= c * r.budget + 1e-9;
        table.push(vec![
            n.to_string(),
            ring.q().pow(n).to_string(),
            r.value_set_size.to_string(),
            r.count.to_string(),
            fmt_num(r.main_term),
            fmt_num(r.error),
            fmt_num(r.budget),
            fmt_num(r.ratio),
            pass.to_string(),
        ]);
        report.checks.push(Check::new(
            format!("mordell n={n}: |count - main| <= {c}·budget"),
            pass,
            format!("count {} main {} ratio {}", r.count, fmt_num(r.main_term), fmt_num(r.ratio)),
        ));
        results.push(r);
    }
    let rr = ResidueRing::new(&ring, &pi)?;
    let (_, indicator) = value_set(&rr, &p_t)?;
    report.summary = json!({ "constant": c, "results": results });
    Ok((vec![table], Some(indicator)))
}

fn k_values(cfg: &ExperimentConfig, m: u32) -> Result<Vec<u32>> {
    let ks = cfg.params.k.clone().unwrap_or_else(|| (0..=m).collect());
    if let Some(&k) = ks.iter().find(|&&k| k > m) {
        return Err(Error::XTooLarge { n: k, m });
    }
    Ok(ks)
}

fn single_table(cfg: &ExperimentConfig, exec: Exec, report: &mut Report) -> Result<TraceFunction> {
    let ring = field_ring(cfg)?;
    let g = modulus(cfg, &ring, &mut report.warnings)?;
    let rr = ResidueRing::new(&ring, &g)?;
    Ok(build_family(cfg.family_spec()?, &rr, cfg, exec)?.0)
}

fn run_variance(cfg: &ExperimentConfig, exec: Exec, report: &mut Report) -> Result<Produced> {
    let t = single_table(cfg, exec, report)?;
    let ks = k_values(cfg, t.ring().degree() as u32)?;
    let c = cfg.params.constant.unwrap_or(DEFAULT_BUDGET_CONSTANT);
    let mut table = Table::new(
        "rows",
        &["k", "variance", "expansion_re", "expansion_im", "identity", "deviation", "budget", "within_budget"],
    );
    let mut results = Vec::new();
    for &k in &ks {
        let v = variance_experiment(&t, k, exec)?;
        let within = v.budget.scale(c).admits(v.deviation, 1e-9);
        table.push(vec![
            k.to_string(),
            fmt_num(v.variance),
            fmt_num(v.expansion.re),
            fmt_num(v.expansion.im),
            v.identity_holds.to_string(),
            fmt_num(v.deviation),
            fmt_num(v.budget.value()),
            within.to_string(),
        ]);
        report.checks.push(Check::new(
            format!("variance k={k}: direct = autocorrelation expansion"),
            v.identity_holds,
            format!("direct {} expansion {}", fmt_num(v.variance), fmt_num(v.expansion.re)),
        ));
        report.checks.push(Check::new(
            format!("variance k={k}: |variance - 1| <= {c}·budget"),
            within,
            format!("deviation {} budget {}", fmt_num(v.deviation), fmt_num(v.budget.value())),
        ));
        results.push(v);
    }
    report.summary = json!({ "constant": c, "results": results });
    Ok((vec![table], Some(t)))
}

fn run_covariance(cfg: &ExperimentConfig, exec: Exec, report: &mut Report) -> Result<Produced> {
    let t1 = single_table(cfg, exec, report)?;
    let t2 = match (&cfg.second, cfg.params.shift) {
        (Some(fam), _) => build_family(fam, t1.ring(), cfg, exec)?.0,
        (None, Some(c)) => {
            if c >= t1.len() {
                return Err(Error::Validation(format!("shift {c} is not a residue index")));
            }
            t1.translate(c)
        }
        (None, None) => return Err(Error::Validation("covariance needs [second] or params.shift".into())),
    };
    let ks = k_values(cfg, t1.ring().degree() as u32)?;
    let mut table = Table::new(
        "rows",
        &["k", "covariance_re", "covariance_im", "expansion_re", "expansion_im", "identity", "main_indicator", "deviation", "budget", "within_budget"],
    );
    let mut results = Vec::new();
    for &k in &ks {
        let r = covariance_experiment(&t1, &t2, k, cfg.params.main_indicator, exec)?;
        table.push(vec![
            k.to_string(),
            fmt_num(r.covariance.re),
            fmt_num(r.covariance.im),
            fmt_num(r.expansion.re),
            fmt_num(r.expansion.im),
            r.identity_holds.to_string(),
            r.main_indicator.to_string(),
            fmt_num(r.deviation),
            fmt_num(r.budget.value()),
            r.within_budget.to_string(),
        ]);
        report.checks.push(Check::new(
            format!("covariance k={k}: direct = autocorrelation expansion"),
            r.identity_holds,
            format!("direct {} expansion {}", fmt_num(r.covariance.re), fmt_num(r.expansion.re)),
        ));
        results.push(r);
    }
    report.summary = json!({ "main_indicator": cfg.params.main_indicator, "results": results });
    Ok((vec![table], None))
}

fn run_control(cfg: &ExperimentConfig, report: &mut Report) -> Result<Produced> {
    let ring = field_ring(cfg)?;
    let g = ring.from_nested(cfg.modulus_spec()?)?;
    let m = g.degree().ok_or(Error::DivisionByZeroPoly)? as u32;
    let ms = cfg
        .params
        .m_small
        .clone()
        .unwrap_or_else(|| (0..m).filter(|&k| 2 * k + 1 < m).collect());
    let mut table = Table::new(
        "rows",
        &["deg_g", "m_small", "sum_re", "sum_im", "expected", "exact", "sqrt_cancellation", "naive_bound", "cancels", "expected_violation"],
    );
    for &ms in &ms {
        let r = square_phase_control(&ring, &g, ms)?;
        table.push(vec![
            m.to_string(),
            ms.to_string(),
            fmt_num(r.sum.re),
            fmt_num(r.sum.im),
            fmt_num(r.expected),
            r.exact.to_string(),
            fmt_num(r.sqrt_cancellation),
            fmt_num(r.naive_bound.value()),
            r.cancels.to_string(),
            "true".into(),
        ]);
        report.checks.push(Check::new(
            format!("square phase m={ms}: sum = q^m exactly"),
            r.exact,
            format!("sum {} + {}i, expected {}", fmt_num(r.sum.re), fmt_num(r.sum.im), fmt_num(r.expected)),
        ));
        report.checks.push(
            Check::new(
                format!("square phase m={ms}: short sum cancels (|sum| < X)"),
                r.cancels,
                format!("|sum| = {} with X = {}", fmt_num(r.sum.norm()), fmt_num(r.expected)),
            )
            .expect_fail(),
        );
    }
    report.summary = json!({ "modulus": ring.format(&g), "cases": ms.len() });
    Ok((vec![table], None))
}

struct SuiteCheck {
    name: &'static str,
    max_error: f64,
    cases: usize,
    tol: f64,
}

fn run_identity_suite(cfg: &ExperimentConfig, seed: u64, exec: Exec, report: &mut Report) -> Result<Produced> {
    const TOL: f64 = 1e-9;
    let ring = field_ring(cfg)?;
    let g = modulus(cfg, &ring, &mut report.warnings)?;
    let rr = ResidueRing::new(&ring, &g)?;
    let size = rr.size();
    let m = rr.degree();
    let mut checks = Vec::new();

    let mut worst = 0f64;
    let chars = MultChar::all(&rr);
    for chi in chars.iter().filter(|c| !c.is_principal()) {
        let s: Complex64 = (0..size).map(|x| chi.eval_idx(x)).sum();
        worst = worst.max(s.norm());
    }
    checks.push(SuiteCheck { name: "multiplicative orthogonality", max_error: worst, cases: chars.len() - 1, tol: TOL });

    let add = AdditiveCharEvaluator::new(ring.field_arc().clone());
    let mut worst = 0f64;
    for h in 0..size {
        let row = rr.pairing_row(h);
        let s: Complex64 = (0..size).map(|x| add.psi(row.phase(x))).sum();
        let expect = if h == 0 { size as f64 } else { 0.0 };
        worst = worst.max((s - expect).norm());
    }
    checks.push(SuiteCheck { name: "additive orthogonality", max_error: worst, cases: size, tol: TOL });

    let mut worst_perp = 0f64;
    for n in 0..=m {
        let closed = perp_space(&Interval::centered(rr.clone(), n)?)?;
        if closed != perp_space_exhaustive(&rr, n) {
            worst_perp = 1.0;
        }
    }
    checks.push(SuiteCheck { name: "perpendicular space closed form", max_error: worst_perp, cases: m + 1, tol: 0.5 });

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tables = cfg.params.tables.unwrap_or(10);
    let (mut inv, mut pars, mut twice, mut restr, mut restr_cases) = (0f64, 0f64, 0f64, 0f64, 0);
    for _ in 0..tables {
        let values = (0..size).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let t = TraceFunction::new(rr.clone(), values, 1, 0, crate::tracefn::Family::Custom)?;
        let th = dft(&t, exec)?;
        let back = inverse_dft(&th, exec)?;
        inv = inv.max(t.values().iter().zip(back.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
        let e1: f64 = t.values().iter().map(|v| v.norm_sqr()).sum();
        let e2: f64 = th.values().iter().map(|v| v.norm_sqr()).sum();
        pars = pars.max((e2 - size as f64 * e1).abs() / e2.max(1.0));
        let tt = dft(&th, exec)?;
        twice = twice.max(
            (0..size)
                .map(|x| (tt.value(x) - t.value(rr.neg_idx(x)) * size as f64).norm())
                .fold(0.0, f64::max),
        );
        for n in 0..=m {
            for _ in 0..20 {
                let v = Interval::new(rr.clone(), n, rng.gen_range(0..size))?;
                restr = restr.max((short_sum(&t, &v)? - short_sum_via_dft(&th, &v)?).norm());
                restr_cases += 1;
            }
        }
        let full = short_sum(&t, &Interval::centered(rr.clone(), m)?)?;
        restr = restr.max((full - complete_sum(&t)).norm());
    }
    checks.push(SuiteCheck { name: "fourier inversion", max_error: inv, cases: tables, tol: TOL });
    checks.push(SuiteCheck { name: "parseval (relative)", max_error: pars, cases: tables, tol: TOL });
    checks.push(SuiteCheck { name: "double transform", max_error: twice, cases: tables, tol: TOL });
    checks.push(SuiteCheck { name: "restriction identity", max_error: restr, cases: restr_cases, tol: TOL });

    let mut table = Table::new("checks", &["index", "name", "cases", "max_error", "tolerance", "pass"]);
    for (i, c) in checks.iter().enumerate() {
        let pass = c.max_error <= c.tol;
        table.push(vec![i.to_string(), c.name.into(), c.cases.to_string(), fmt_num(c.max_error), fmt_num(c.tol), pass.to_string()]);
        report.checks.push(Check::new(c.name, pass, format!("max error {} over {} cases", fmt_num(c.max_error), c.cases)));
    }
    report.summary = json!({ "modulus": ring.format(&g), "size": size, "tables": tables });
    Ok((vec![table], None))
}
