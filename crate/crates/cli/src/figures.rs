//! CSV data series behind the three figures.
//!
//! Figure 1: Pick (b/a ∈ {1.1, 10, 100}) and Cauchy spectra with their bound
//! staircases. Figure 2: the k = 8 sign error on [−10, 10] and Z_k with its
//! sandwich for k ≤ 20. Figure 3: Krylov and Hankel spectra, n ∈ {10, 100,
//! 1000}, against their bounds.

use std::f64::consts::LN_10;

use zolo_core::bounds::{BoundCurve, BoundVariant};
use zolo_core::matrices::ensembles::RNG_ALGORITHM;
use zolo_core::matrices::generate;
use zolo_core::matrices::io::format_f64;
use zolo_core::spectra::{singular_values_only, SpectrumReport};
use zolo_core::zolotarev::{
    count_alternation_clusters, extremal_rational, sign_error_extrema, sign_error_sample_points, sign_error_with, zolotarev_number,
    IntervalPair,
};
use zolo_core::{Result, ZoloError};

use crate::ensemble::{Ensemble, CAUCHY_GEOMETRIES, KRYLOV_SIZES, PICK_RATIOS};

#[derive(Debug, Clone, Copy)]
pub struct FigureOptions {
    pub seed: u64,
    pub variant: BoundVariant,
    pub trust_ratio: f64,
    /// Skip figure 3 sizes above this.
    pub max_n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureFile {
    pub name: String,
    pub contents: String,
}

pub fn comment_line(what: &str, seed: u64, variant: BoundVariant) -> String {
    format!(
        "# zolo {} {what} seed={seed} variant={} rng={RNG_ALGORITHM}\n",
        env!("CARGO_PKG_VERSION"),
        variant.tag()
    )
}

fn spectrum_rows(out: &mut String, key: &str, report: &SpectrumReport, curve: &BoundCurve) {
    let s1 = report.sigma1();
    for (i, s) in report.sigma.iter().enumerate() {
        let j = i + 1;
        out.push_str(&format!(
            "{key},{j},{},{},{}\n",
            format_f64(s / s1),
            u8::from(report.is_trusted(j)),
            format_f64(curve.log_value(j) / LN_10)
        ));
    }
}

fn spectrum_of(e: &Ensemble, opts: &FigureOptions) -> Result<(SpectrumReport, BoundCurve)> {
    let x = generate(&e.instance(opts.seed, 0)?)?;
    let sigma = singular_values_only(&x)?;
    Ok((SpectrumReport::from_sigma(sigma, opts.trust_ratio, x.checksum()), e.bound(opts.variant)?))
}

fn figure1(opts: &FigureOptions) -> Result<Vec<FigureFile>> {
    let mut pick = comment_line("figure=1 panel=pick n=100 a=1", opts.seed, opts.variant);
    pick.push_str("b_over_a,index,sigma_over_sigma1,trusted,log10_bound\n");
    for &b in &PICK_RATIOS {
        let (rep, curve) = spectrum_of(&Ensemble::Pick { a: 1.0, b, n: 100 }, opts)?;
        spectrum_rows(&mut pick, &b.to_string(), &rep, &curve);
    }
    let mut cauchy = comment_line("figure=1 panel=cauchy n=100 nodes=chebyshev", opts.seed, opts.variant);
    cauchy.push_str("geometry,gamma,index,sigma_over_sigma1,trusted,log10_bound\n");
    for &(x, y) in &CAUCHY_GEOMETRIES {
        let e = Ensemble::Cauchy { x, y, n: 100 };
        let gamma = e.interval_pair().map(|p| p.cross_ratio()).unwrap_or(f64::NAN);
        let key = format!("x[{}:{}]y[{}:{}],{}", x.0, x.1, y.0, y.1, format_f64(gamma));
        let (rep, curve) = spectrum_of(&e, opts)?;
        spectrum_rows(&mut cauchy, &key, &rep, &curve);
    }
    Ok(vec![
        FigureFile { name: "figure1_pick.csv".into(), contents: pick },
        FigureFile { name: "figure1_cauchy.csv".into(), contents: cauchy },
    ])
}

fn figure2(opts: &FigureOptions) -> Result<Vec<FigureFile>> {
    let (a, b, k) = (1.0, 10.0, 8);
    let r = extremal_rational(a, b, k)?;
    let right = sign_error_sample_points(&r, 4000);
    let right_errs = sign_error_with(&r, &right)?;
    let mut domain: Vec<f64> = right.iter().rev().map(|x| -x).collect();
    domain.extend_from_slice(&right);
    let mut xs: Vec<f64> = (0..=2000).map(|i| -b + 2.0 * b * i as f64 / 2000.0).collect();
    xs.extend_from_slice(&domain);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let z = r.zolotarev;
    let max_err = 2.0 * z.zk.sqrt() / (1.0 + z.zk);
    let mut curve = comment_line(
        &format!("figure=2 panel=sign_error a={a} b={b} k={k} predicted_max_error={}", format_f64(max_err)),
        opts.seed,
        opts.variant,
    );
    curve.push_str("x,error,in_domain\n");
    for &x in &xs {
        let inside = x.abs() >= a && x.abs() <= b;
        let sgn = if x > 0.0 { 1.0 } else if x < 0.0 { -1.0 } else { 0.0 };
        let e = sgn - r.sign_approximant(x);
        curve.push_str(&format!("{},{},{}\n", format_f64(x), format_f64(e), u8::from(inside)));
    }
    // alternation points: refined extrema within 1e−6 of the peak, one per
    // same-sign run, mirrored onto [−b, −a] (the error is odd)
    let peak = right_errs.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (x, e) in sign_error_extrema(&r, 4000) {
        if e.abs() < (1.0 - 1e-6) * peak {
            continue;
        }
        match pts.last_mut() {
            Some(last) if last.1.signum() == e.signum() => {
                if e.abs() > last.1.abs() {
                    *last = (x, e);
                }
            }
            _ => pts.push((x, e)),
        }
    }
    if pts.len() != k + 1 || count_alternation_clusters(&right_errs, 1e-6) != k + 1 {
        return Err(ZoloError::Data("sign error failed to equioscillate k+1 times".into()));
    }
    let mut dots = comment_line(&format!("figure=2 panel=alternation a={a} b={b} k={k}"), opts.seed, opts.variant);
    dots.push_str("x,error\n");
    for &(x, e) in pts.iter().rev() {
        dots.push_str(&format!("{},{}\n", format_f64(-x), format_f64(-e)));
    }
    for &(x, e) in &pts {
        dots.push_str(&format!("{},{}\n", format_f64(x), format_f64(e)));
    }

    let mut zk = comment_line("figure=2 panel=zolotarev kmax=20", opts.seed, opts.variant);
    zk.push_str("b_over_a,k,log10_zk,log10_lower,log10_upper\n");
    for &ratio in &PICK_RATIOS {
        let pair = IntervalPair::symmetric(1.0, ratio)?;
        for kk in 0..=20 {
            let e = zolotarev_number(&pair, kk)?;
            zk.push_str(&format!(
                "{ratio},{kk},{},{},{}\n",
                format_f64(e.log_zk / LN_10),
                format_f64(e.log_lower / LN_10),
                format_f64(e.log_upper / LN_10)
            ));
        }
    }
    Ok(vec![
        FigureFile { name: "figure2_sign_error.csv".into(), contents: curve },
        FigureFile { name: "figure2_alternation.csv".into(), contents: dots },
        FigureFile { name: "figure2_zolotarev.csv".into(), contents: zk },
    ])
}

fn figure3(opts: &FigureOptions) -> Result<Vec<FigureFile>> {
    let sizes: Vec<usize> = KRYLOV_SIZES.iter().copied().filter(|&n| n <= opts.max_n).collect();
    let mut krylov = comment_line("figure=3 panel=krylov spectrum=equispaced[-1,1]", opts.seed, opts.variant);
    krylov.push_str("n,index,sigma_over_sigma1,trusted,log10_bound\n");
    let mut hankel = comment_line("figure=3 panel=hankel measure=uniform[-1,1]", opts.seed, opts.variant);
    hankel.push_str("n,index,sigma_over_sigma1,trusted,log10_bound\n");
    for &n in &sizes {
        let (rep, curve) = spectrum_of(&Ensemble::Krylov { n }, opts)?;
        spectrum_rows(&mut krylov, &n.to_string(), &rep, &curve);
        let (rep, curve) = spectrum_of(&Ensemble::Hankel { n }, opts)?;
        spectrum_rows(&mut hankel, &n.to_string(), &rep, &curve);
    }
    Ok(vec![
        FigureFile { name: "figure3_krylov.csv".into(), contents: krylov },
        FigureFile { name: "figure3_hankel.csv".into(), contents: hankel },
    ])
}

/// The CSV files of figure `id`.
pub fn figure(id: u32, opts: &FigureOptions) -> Result<Vec<FigureFile>> {
    match id {
        1 => figure1(opts),
        2 => figure2(opts),
        3 => figure3(opts),
        other => Err(ZoloError::Parse(format!("unknown figure {other}; expected 1, 2 or 3"))),
    }
}
