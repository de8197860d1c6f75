use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use zolo_cli::ensemble::{standard_suite, Ensemble};
use zolo_cli::figures::{figure, FigureOptions};
use zolo_cli::suite::{run_suite, SuiteOptions};
use zolo_core::adi::{compare_with_sigma, fadi_approximate};
use zolo_core::bounds::{
    bound_for_spec, cauchy_bound, condition_lower_bound, eps_rank_bound, hankel_bound, hilbert_bound, krylov_bound,
    loewner_bound, pick_bound, vandermonde_bound, BoundCurve, BoundParams, BoundVariant,
};
use zolo_core::matrices::io::{format_f64, read_binary, read_csv, write_binary, write_csv, MAGIC};
use zolo_core::matrices::{generate, DenseMatrix, MatrixClass, StructuredMatrixSpec};
use zolo_core::spectra::{singular_values_only, verify_bound, SpectrumReport, DEFAULT_TRUST_RATIO};
use zolo_core::zolotarev::{
    count_alternation_clusters, extremal_rational, sign_minimax_ekk, sign_error_sample_points, sign_error_with,
    zolotarev_number_general, IntervalPair,
};
use zolo_core::ZoloError;

const LN10: f64 = std::f64::consts::LN_10;

#[derive(Parser)]
#[command(name = "zolo", version, about = "Zolotarev numbers and singular value bounds for displacement-structured matrices")]
struct Cli {
    /// Relative trust threshold σ_j/σ₁ below which singular values are not checked.
    #[arg(long, global = true, env = "ZOLO_TRUST_THRESHOLD", default_value_t = DEFAULT_TRUST_RATIO)]
    trust_threshold: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Z_k for a symmetric or general interval pair, with its bounds.
    Zolotarev(ZolotarevArgs),
    /// Samples of the sign approximant built from the extremal rational.
    Signapprox(SignArgs),
    /// Builds a structured matrix and writes it as binary or CSV.
    Generate(GenerateArgs),
    /// Singular values of a matrix file or spec, optionally against its bound.
    Spectrum(SpectrumArgs),
    /// Bound curve, ε-rank bound or condition number floor for a class.
    Bound(BoundArgs),
    /// Runs the verification suite; prints a JSON summary.
    Verify(VerifyArgs),
    /// Factored ADI approximation compared with the truncated SVD.
    Adi(AdiArgs),
    /// Writes the data series of figure 1, 2 or 3 as CSV.
    Figure(FigureArgs),
}

#[derive(Args)]
struct ZolotarevArgs {
    /// Symmetric pair [−B, −A] ∪ [A, B].
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true, conflicts_with = "general")]
    sym: Option<Vec<f64>>,
    /// General pair E = [A, B], F = [C, D].
    #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true)]
    general: Option<Vec<f64>>,
    #[arg(long)]
    k: usize,
    /// Print every degree from --k up to this one.
    #[arg(long)]
    k_max: Option<usize>,
}

#[derive(Args)]
struct SignArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    #[arg(long)]
    k: usize,
    /// Samples per interval.
    #[arg(long, default_value_t = 2000)]
    points: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Bin,
    Csv,
}

#[derive(Args)]
struct Source {
    /// JSON file with a StructuredMatrixSpec.
    #[arg(long, conflicts_with = "ensemble")]
    spec: Option<PathBuf>,
    /// Inline JSON ensemble, e.g. '{"kind":"pick","a":1,"b":10,"n":100}'.
    #[arg(long)]
    ensemble: Option<String>,
    /// Ensemble member index.
    #[arg(long, default_value_t = 0)]
    member: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    out: PathBuf,
    /// Defaults to csv for a .csv path, bin otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Matrix file (binary or CSV).
    #[arg(long, conflicts_with_all = ["spec", "ensemble"])]
    input: Option<PathBuf>,
    #[command(flatten)]
    source: Source,
    /// Add the bound column (needs --spec or --ensemble).
    #[arg(long)]
    with_bound: bool,
    #[arg(long, default_value = "mu-tight")]
    variant: BoundVariant,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    /// pick, cauchy, loewner, krylov, vandermonde, hankel or hilbert.
    #[arg(long)]
    class: String,
    /// Pick interval [A, B].
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    pick: Option<Vec<f64>>,
    /// Cauchy/Löwner intervals [A, B] and [C, D].
    #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true)]
    intervals: Option<Vec<f64>>,
    #[arg(long)]
    n: usize,
    /// Row count for rectangular classes; defaults to n.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value = "mu-tight")]
    variant: BoundVariant,
    /// Print the ε-rank bound instead of the curve.
    #[arg(long, conflicts_with = "condition")]
    eps: Option<f64>,
    /// Print the condition number floor instead of the curve.
    #[arg(long)]
    condition: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Named suite (pick, cauchy, loewner, krylov, vandermonde, hankel, hilbert, all).
    #[arg(long, required_unless_present = "ensemble")]
    suite: Option<String>,
    /// Inline JSON ensemble, verified on its own.
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    instances: usize,
    #[arg(long, default_value = "mu-tight")]
    variant: BoundVariant,
    /// ADI steps checked for Pick/Cauchy/Löwner (0 skips).
    #[arg(long, default_value_t = 10)]
    adi_steps: usize,
    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AdiArgs {
    #[command(flatten)]
    source: Source,
    /// Largest step count; rows are printed for 1..=k.
    #[arg(long)]
    k: usize,
    /// Write the factors of the k-step approximation as <prefix>_u.<ext> and <prefix>_v.<ext>.
    #[arg(long)]
    factors: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "bin")]
    format: Format,
}

#[derive(Args)]
struct FigureArgs {
    /// 1, 2 or 3.
    id: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "mu-tight")]
    variant: BoundVariant,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Skip figure 3 sizes above this.
    #[arg(long, default_value_t = 1000)]
    max_n: usize,
}

/// A run that completed but found bound violations.
#[derive(Debug)]
struct Violations(usize);

impl std::fmt::Display for Violations {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} failing instance(s)", self.0)
    }
}

impl std::error::Error for Violations {}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<Violations>().is_some() => {
            eprintln!("zolo: verification failed: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("zolo: error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let trust = cli.trust_threshold;
    if !(trust > 0.0 && trust < 1.0) {
        bail!("trust threshold {trust} outside (0, 1)");
    }
    match cli.command {
        Command::Zolotarev(a) => cmd_zolotarev(a),
        Command::Signapprox(a) => cmd_signapprox(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Spectrum(a) => cmd_spectrum(a, trust),
        Command::Bound(a) => cmd_bound(a),
        Command::Verify(a) => cmd_verify(a, trust),
        Command::Adi(a) => cmd_adi(a),
        Command::Figure(a) => cmd_figure(a, trust),
    }
}

fn header(what: &str) -> String {
    format!("zolo {} {what}", env!("CARGO_PKG_VERSION"))
}

fn cmd_zolotarev(a: ZolotarevArgs) -> anyhow::Result<()> {
    let (pair, prefix_cols) = match (&a.sym, &a.general) {
        (Some(v), None) => (IntervalPair::symmetric(v[0], v[1])?, format!("{},{}", v[0], v[1])),
        (None, Some(v)) => (IntervalPair::general(v[0], v[1], v[2], v[3])?, v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")),
        _ => bail!("give exactly one of --sym A B or --general A B C D"),
    };
    let general = a.general.is_some();
    let k_max = a.k_max.unwrap_or(a.k).max(a.k);
    let mut out = format!("# {}\n", header("zolotarev"));
    out.push_str(if general { "a,b,c,d,gamma,alpha," } else { "a,b," });
    out.push_str("k,rho,log10_zk,zk,log10_lower,log10_upper\n");
    for k in a.k..=k_max {
        let z = zolotarev_number_general(&pair, k)?;
        out.push_str(&prefix_cols);
        out.push(',');
        if general {
            out.push_str(&format!("{},{},", format_f64(pair.cross_ratio()), format_f64(pair.alpha())));
        }
        out.push_str(&format!(
            "{k},{},{},{},{},{}\n",
            format_f64(z.rho),
            format_f64(z.log_zk / LN10),
            format_f64(z.zk),
            format_f64(z.log_lower / LN10),
            format_f64(z.log_upper / LN10)
        ));
    }
    print!("{out}");
    Ok(())
}

fn cmd_signapprox(a: SignArgs) -> anyhow::Result<()> {
    let r = extremal_rational(a.a, a.b, a.k)?;
    let xs = sign_error_sample_points(&r, a.points.max(2));
    let errs = sign_error_with(&r, &xs)?;
    let clusters = count_alternation_clusters(&errs, 1e-6);
    let max_err = sign_minimax_ekk(a.a, a.b, a.k)?;
    let measured = errs.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let mut out = format!(
        "# {} a={} b={} k={} minimax_error={} measured_max_error={} alternation_clusters_per_interval={clusters}\n",
        header("signapprox"),
        a.a,
        a.b,
        a.k,
        format_f64(max_err),
        format_f64(measured)
    );
    out.push_str("x,approximant,error\n");
    let mut all: Vec<f64> = xs.iter().rev().map(|x| -x).collect();
    all.extend_from_slice(&xs);
    for x in all {
        let v = r.sign_approximant(x);
        out.push_str(&format!("{},{},{}\n", format_f64(x), format_f64(v), format_f64(x.signum() - v)));
    }
    print!("{out}");
    Ok(())
}

fn parse_ensemble(json: &str) -> anyhow::Result<Ensemble> {
    let e: Ensemble = serde_json::from_str(json).with_context(|| format!("bad ensemble JSON: {json}"))?;
    e.validate()?;
    Ok(e)
}

impl Source {
    fn resolve(&self) -> anyhow::Result<Option<(StructuredMatrixSpec, String)>> {
        if let Some(path) = &self.spec {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let spec: StructuredMatrixSpec =
                serde_json::from_str(&text).with_context(|| format!("parsing spec {}", path.display()))?;
            spec.validate()?;
            return Ok(Some((spec, format!("spec={}", path.display()))));
        }
        if let Some(json) = &self.ensemble {
            let e = parse_ensemble(json)?;
            let spec = e.instance(self.seed, self.member)?;
            return Ok(Some((
                spec,
                format!(
                    "ensemble={} member={} seed={} rng={}",
                    e.label(),
                    self.member,
                    self.seed,
                    zolo_core::matrices::ensembles::RNG_ALGORITHM
                ),
            )));
        }
        Ok(None)
    }

    fn require(&self) -> anyhow::Result<(StructuredMatrixSpec, String)> {
        self.resolve()?.context("give --spec FILE or --ensemble JSON")
    }
}

fn write_matrix(m: &DenseMatrix, path: &Path, format: Format, comment: &str) -> anyhow::Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    match format {
        Format::Bin => write_binary(m, &mut w)?,
        Format::Csv => write_csv(m, comment, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn read_matrix(path: &Path) -> anyhow::Result<DenseMatrix> {
    let mut bytes = Vec::new();
    File::open(path)
        .with_context(|| format!("opening {}", path.display()))?
        .read_to_end(&mut bytes)?;
    let m = if bytes.starts_with(MAGIC) { read_binary(&bytes[..])? } else { read_csv(BufReader::new(&bytes[..]))? };
    Ok(m)
}

fn format_for(path: &Path, explicit: Option<Format>) -> Format {
    explicit.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
        _ => Format::Bin,
    })
}

fn cmd_generate(a: GenerateArgs) -> anyhow::Result<()> {
    let (spec, what) = a.source.require()?;
    let m = generate(&spec)?;
    let comment = header(&format!("generate class={} {what}", spec.class()?.name()));
    write_matrix(&m, &a.out, format_for(&a.out, a.format), &comment)?;
    log::info!("wrote {}×{} matrix to {}", m.rows(), m.cols(), a.out.display());
    Ok(())
}

fn cmd_spectrum(a: SpectrumArgs, trust: f64) -> anyhow::Result<()> {
    let (x, what, spec) = match &a.input {
        Some(p) => (read_matrix(p)?, format!("input={}", p.display()), None),
        None => {
            let (spec, what) = a.source.require()?;
            (generate(&spec)?, what, Some(spec))
        }
    };
    let report = SpectrumReport::from_sigma(singular_values_only(&x)?, trust, x.checksum());
    let comment = header(&format!("spectrum {what} variant={} trust_ratio={trust:e}", a.variant.tag()));
    let text = if a.with_bound {
        let spec = spec.context("--with-bound needs --spec or --ensemble")?;
        let curve = bound_for_spec(&spec, a.variant)?;
        let rec = verify_bound(&report, &curve);
        let s1 = report.sigma1();
        let mut out = format!(
            "# {comment} bound_violations={}\nindex,sigma,sigma_over_sigma1,trusted,log10_bound\n",
            rec.violations.len()
        );
        for (i, s) in report.sigma.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                i + 1,
                format_f64(*s),
                format_f64(s / s1),
                u8::from(report.is_trusted(i + 1)),
                format_f64(curve.log_value(i + 1) / LN10)
            ));
        }
        out
    } else {
        report.to_csv(&comment)
    };
    emit(&text, a.out.as_deref())
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn bound_params(a: &BoundArgs, class: &str) -> anyhow::Result<BoundParams> {
    Ok(match class {
        "pick" => {
            let v = a.pick.as_ref().context("pick needs --pick A B")?;
            BoundParams::pick(v[0], v[1], a.n)?
        }
        "cauchy" | "loewner" => {
            let v = a.intervals.as_ref().context("cauchy/loewner need --intervals A B C D")?;
            BoundParams::intervals(v[0], v[1], v[2], v[3], a.n)?
        }
        _ => BoundParams::size(a.n),
    })
}

fn cmd_bound(a: BoundArgs) -> anyhow::Result<()> {
    let class = a.class.to_ascii_lowercase();
    let m = a.m.unwrap_or(a.n);
    let (mc, params) = if class == "hilbert" {
        let e = Ensemble::Hilbert { n: a.n };
        (e.class(), e.params()?)
    } else {
        (class.parse::<MatrixClass>()?, bound_params(&a, &class)?)
    };
    if let Some(eps) = a.eps {
        let r = eps_rank_bound(mc, &params, eps)?;
        println!("# {}\nclass,n,eps,rank_bound", header("bound eps-rank"));
        println!("{class},{},{eps:e},{r}", a.n);
        return Ok(());
    }
    if a.condition {
        let lk = condition_lower_bound(mc, &params)?;
        println!("# {}\nclass,n,log10_condition_floor", header("bound condition"));
        println!("{class},{},{}", a.n, format_f64(lk / LN10));
        return Ok(());
    }
    let curve: BoundCurve = match class.as_str() {
        "pick" => {
            let v = a.pick.as_ref().context("pick needs --pick A B")?;
            pick_bound(v[0], v[1], a.n, a.variant)?
        }
        "cauchy" | "loewner" => {
            let v = a.intervals.as_ref().context("cauchy/loewner need --intervals A B C D")?;
            if class == "cauchy" {
                cauchy_bound(v[0], v[1], v[2], v[3], m, a.n, a.variant)?
            } else {
                loewner_bound(v[0], v[1], v[2], v[3], m, a.n, a.variant)?
            }
        }
        "hilbert" => hilbert_bound(a.n, a.variant)?,
        _ => match mc {
            MatrixClass::KrylovHermitian => krylov_bound(m, a.n, a.variant)?,
            MatrixClass::VandermondeReal => vandermonde_bound(m, a.n, a.variant)?,
            MatrixClass::HankelPSD => hankel_bound(a.n, a.variant)?,
            other => bail!("class {} needs interval parameters", other.name()),
        },
    };
    print!("{}", curve.to_csv(&header(&format!("bound class={class} n={} variant={}", a.n, a.variant.tag()))));
    Ok(())
}

fn cmd_verify(a: VerifyArgs, trust: f64) -> anyhow::Result<()> {
    let ensembles = match (&a.suite, &a.ensemble) {
        (_, Some(json)) => vec![parse_ensemble(json)?],
        (Some(name), None) if name == "all" => {
            let mut v = Vec::new();
            for n in ["pick", "cauchy", "loewner", "krylov", "vandermonde", "hankel", "hilbert"] {
                v.extend(standard_suite(n)?);
            }
            v
        }
        (Some(name), None) => standard_suite(name)?,
        (None, None) => bail!("give --suite NAME or --ensemble JSON"),
    };
    let opts = SuiteOptions {
        seed: a.seed,
        instances: a.instances,
        variant: a.variant,
        trust_ratio: trust,
        adi_steps: a.adi_steps,
    };
    let report = run_suite(&ensembles, &opts)?;
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(p) = &a.out {
        std::fs::write(p, &json).with_context(|| format!("writing {}", p.display()))?;
    }
    println!("{json}");
    if report.passed {
        Ok(())
    } else {
        Err(Violations(report.total_violations).into())
    }
}

fn cmd_adi(a: AdiArgs) -> anyhow::Result<()> {
    if a.k == 0 {
        return Err(ZoloError::Degree("ADI needs k ≥ 1".into()).into());
    }
    let (spec, what) = a.source.require()?;
    let x = generate(&spec)?;
    let sigma = singular_values_only(&x)?;
    let mut out = format!("# {}\nk,rank,adi_error,optimal_error,certified_bound,ratio\n", header(&format!("adi {what}")));
    for k in 1..=a.k {
        let c = compare_with_sigma(&spec, &x, &sigma, k)?;
        out.push_str(&format!(
            "{k},{},{},{},{},{}\n",
            c.rank,
            format_f64(c.adi_error),
            format_f64(c.optimal_error),
            format_f64(c.certified_bound),
            format_f64(c.ratio)
        ));
    }
    if let Some(prefix) = &a.factors {
        let f = fadi_approximate(&spec, a.k)?;
        let ext = match a.format {
            Format::Bin => "bin",
            Format::Csv => "csv",
        };
        let stem = prefix.to_string_lossy();
        let comment = header(&format!("adi factors k={} {what}", a.k));
        write_matrix(&f.u, Path::new(&format!("{stem}_u.{ext}")), a.format, &comment)?;
        write_matrix(&f.v, Path::new(&format!("{stem}_v.{ext}")), a.format, &comment)?;
    }
    print!("{out}");
    Ok(())
}

fn cmd_figure(a: FigureArgs, trust: f64) -> anyhow::Result<()> {
    let opts = FigureOptions { seed: a.seed, variant: a.variant, trust_ratio: trust, max_n: a.max_n };
    let files = figure(a.id, &opts)?;
    std::fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    for f in files {
        let path = a.out_dir.join(&f.name);
        std::fs::write(&path, &f.contents).with_context(|| format!("writing {}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(())
}
