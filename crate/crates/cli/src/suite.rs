//! Verification of computed spectra against the bounds, per ensemble.

use serde::Serialize;
use zolo_core::adi::compare_with_sigma;
use zolo_core::bounds::{condition_lower_bound, eps_rank_bound, BoundVariant};
use zolo_core::matrices::{fiedler_factor, generate, MatrixClass, MeasureSpec};
use zolo_core::spectra::{eps_rank, singular_values_only, verify_bound, SpectrumReport};
use zolo_core::Result;

use crate::ensemble::Ensemble;

/// ε values for the ε-rank consistency check.
pub const EPS_GRID: [f64; 3] = [1e-4, 1e-8, 1e-12];

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuiteOptions {
    pub seed: u64,
    pub instances: usize,
    pub variant: BoundVariant,
    pub trust_ratio: f64,
    /// ADI steps 1..=adi_steps for Pick/Cauchy/Löwner; 0 skips ADI.
    pub adi_steps: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EpsRankCheck {
    pub eps: f64,
    pub computed: usize,
    pub bound: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionCheck {
    pub log10_kappa: f64,
    pub log10_floor: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdiCheck {
    pub k: usize,
    pub adi_error: f64,
    pub certified_bound: f64,
    pub optimal_error: f64,
    /// Z_k is above the trust ratio, so the upper check is meaningful.
    pub upper_checked: bool,
    pub upper_ok: bool,
    /// σ_{1+νk} is trusted.
    pub lower_checked: bool,
    pub lower_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub index: u64,
    pub checksum: String,
    pub size: (usize, usize),
    pub trusted_count: usize,
    pub bound_checked: usize,
    pub bound_violations: Vec<usize>,
    pub ratio_checks: usize,
    pub ratio_violations: usize,
    pub min_margin_log10: f64,
    pub eps_rank: Vec<EpsRankCheck>,
    pub condition: Option<ConditionCheck>,
    pub fiedler_max_rel_error: Option<f64>,
    pub fiedler_ok: Option<bool>,
    pub adi: Vec<AdiCheck>,
    pub skipped: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleReport {
    pub label: String,
    pub ensemble: Ensemble,
    pub requested_instances: usize,
    /// 1 for seed-independent ensembles, whose members all coincide.
    pub distinct_instances: usize,
    pub instances: Vec<InstanceReport>,
    pub violations: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub version: String,
    pub options: SuiteOptions,
    pub ensembles: Vec<EnsembleReport>,
    pub total_violations: usize,
    pub passed: bool,
}

fn fiedler_check(n: usize, report: &SpectrumReport) -> Result<f64> {
    let k = fiedler_factor(&MeasureSpec::Uniform { a: -1.0, b: 1.0 }, n)?;
    let sk = singular_values_only(&k)?;
    let s1 = report.sigma1();
    Ok((0..report.trusted_count)
        .map(|j| (report.sigma[j] - sk[j] * sk[j]).abs() / s1)
        .fold(0.0, f64::max))
}

/// Runs every applicable check on member `index` of the ensemble.
pub fn check_instance(ensemble: &Ensemble, opts: &SuiteOptions, index: u64) -> Result<InstanceReport> {
    let spec = ensemble.instance(opts.seed, index)?;
    let x = generate(&spec)?;
    let sigma = singular_values_only(&x)?;
    let report = SpectrumReport::from_sigma(sigma, opts.trust_ratio, x.checksum());
    let curve = ensemble.bound(opts.variant)?;
    let rec = verify_bound(&report, &curve);
    let class = ensemble.class();
    let params = ensemble.params()?;
    let mut skipped = Vec::new();

    let mut eps_checks = Vec::new();
    for &eps in &EPS_GRID {
        let r = eps_rank(&report, eps)?;
        if !r.trusted {
            skipped.push(format!("rank_eps at eps={eps:e}: below trust threshold"));
            continue;
        }
        let bound = eps_rank_bound(class, &params, eps)?;
        eps_checks.push(EpsRankCheck { eps, computed: r.rank, bound, ok: r.rank <= bound });
    }

    let mut condition = None;
    if matches!(class, MatrixClass::Pick | MatrixClass::Cauchy | MatrixClass::HankelPSD)
        && x.rows() == x.cols()
        && !(class == MatrixClass::HankelPSD && x.cols() < 3)
    {
        let n = x.cols();
        if report.is_trusted(n) {
            let log_kappa = (report.sigma1() / report.sigma[n - 1]).ln();
            let floor = condition_lower_bound(class, &params)?;
            condition = Some(ConditionCheck {
                log10_kappa: log_kappa / std::f64::consts::LN_10,
                log10_floor: floor / std::f64::consts::LN_10,
                ok: log_kappa >= floor,
            });
        } else {
            let msg = format!("condition floor: sigma_{n} below trust threshold");
            log::info!("{}#{index}: {msg}", ensemble.label());
            skipped.push(msg);
        }
    }

    let (mut fiedler_err, mut fiedler_ok) = (None, None);
    if let crate::ensemble::Ensemble::Hankel { n } = *ensemble {
        let e = fiedler_check(n, &report)?;
        fiedler_err = Some(e);
        fiedler_ok = Some(e <= 1e-10);
    }

    let mut adi = Vec::new();
    if matches!(class, MatrixClass::Pick | MatrixClass::Cauchy | MatrixClass::Loewner) {
        for k in 1..=opts.adi_steps {
            let c = compare_with_sigma(&spec, &x, &report.sigma, k)?;
            let upper_checked = c.certified_bound >= opts.trust_ratio;
            let lower_checked = c.optimal_error >= opts.trust_ratio;
            if !upper_checked {
                log::info!("{}#{index}: ADI k={k} upper check skipped, Z_k below trust", ensemble.label());
            }
            adi.push(AdiCheck {
                k,
                adi_error: c.adi_error,
                certified_bound: c.certified_bound,
                optimal_error: c.optimal_error,
                upper_checked,
                upper_ok: !upper_checked || c.adi_error <= c.certified_bound * (1.0 + 1e-8),
                lower_checked,
                lower_ok: !lower_checked || c.adi_error >= c.optimal_error * (1.0 - 1e-10),
            });
        }
    }

    let passed = rec.passed
        && eps_checks.iter().all(|c| c.ok)
        && condition.as_ref().is_none_or(|c| c.ok)
        && fiedler_ok.unwrap_or(true)
        && adi.iter().all(|a| a.upper_ok && a.lower_ok);
    Ok(InstanceReport {
        index,
        checksum: format!("{:016x}", report.checksum),
        size: x.shape(),
        trusted_count: report.trusted_count,
        bound_checked: rec.checked_indices,
        bound_violations: rec.violations,
        ratio_checks: rec.ratio_checks,
        ratio_violations: rec.ratio_violations.len(),
        min_margin_log10: rec.min_margin,
        eps_rank: eps_checks,
        condition,
        fiedler_max_rel_error: fiedler_err,
        fiedler_ok,
        adi,
        skipped,
        passed,
    })
}

pub fn run_ensemble(ensemble: &Ensemble, opts: &SuiteOptions) -> Result<EnsembleReport> {
    ensemble.validate()?;
    let distinct = if ensemble.is_random() { opts.instances } else { opts.instances.min(1) };
    let instances = (0..distinct as u64)
        .map(|i| check_instance(ensemble, opts, i))
        .collect::<Result<Vec<_>>>()?;
    let violations = instances.iter().filter(|r| !r.passed).count();
    Ok(EnsembleReport {
        label: ensemble.label(),
        ensemble: *ensemble,
        requested_instances: opts.instances,
        distinct_instances: distinct,
        instances,
        violations,
        passed: violations == 0,
    })
}

pub fn run_suite(ensembles: &[Ensemble], opts: &SuiteOptions) -> Result<SuiteReport> {
    for e in ensembles {
        e.validate()?;
    }
    let reports = ensembles.iter().map(|e| run_ensemble(e, opts)).collect::<Result<Vec<_>>>()?;
    let total_violations = reports.iter().map(|r| r.violations).sum();
    Ok(SuiteReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        options: *opts,
        ensembles: reports,
        total_violations,
        passed: total_violations == 0,
    })
}
