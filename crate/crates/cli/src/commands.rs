use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use fqap::ap::{count_aps_set, extract_progressions, spectral_decomposition, trilinear_g, trilinear_g_separated, SeparationPredicate};
use fqap::arith::{format_rational, parse_rational, Mode, Modulus, PointVec, Scalar};
use fqap::measures::{
    ball_condition_constant, energy_relation, hausdorff_content, hausdorff_content_exact, make_capset_measure,
    make_cascade_measure, make_haar_ball, read_measure, read_point_set, write_measure, write_point_set, MeasureTable,
    PointSet,
};
use fqap::spectral::{decay_fit, dft_forward, write_exact_sidecar, write_spectrum_csv, Algorithm, DenseTable, Values};
use fqap::subspace::{choose_dprime, varnavides_exhaustive, varnavides_experiment, w_bound};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;
use serde_json::{json, Value};

use crate::config::{Ctx, Kind};
use crate::CliError;

/// What a command produced: files written and text for stdout.
#[derive(Default)]
pub struct Output {
    pub files: Vec<PathBuf>,
    pub stdout: String,
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<(), CliError> {
    w.flush().map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn load_measure(ctx: &mut Ctx) -> Result<MeasureTable, CliError> {
    let path: PathBuf = ctx.req("input")?;
    read_measure(open(&path)?).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// The set named by `--set`, or the support of the `--input` measure.
fn load_set(ctx: &mut Ctx) -> Result<(PointSet, Option<MeasureTable>), CliError> {
    if let Some(path) = ctx.opt::<PathBuf>("set")? {
        if ctx.opt::<PathBuf>("input")?.is_some() {
            return Err(CliError::usage("give either --set or --input, not both"));
        }
        let set = read_point_set(open(&path)?).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        return Ok((set, None));
    }
    let mu = load_measure(ctx)?;
    Ok((mu.support(), Some(mu)))
}

/// Pretty JSON to `--output`, or to stdout.
fn emit_json(ctx: &mut Ctx, report: &Value) -> Result<Output, CliError> {
    let text = serde_json::to_string_pretty(report).expect("report serializes") + "\n";
    match ctx.opt::<PathBuf>("output")? {
        Some(path) => {
            let mut w = create(&path)?;
            w.write_all(text.as_bytes())
                .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
            finish(w, &path)?;
            Ok(Output {
                files: vec![path],
                stdout: String::new(),
            })
        }
        None => Ok(Output {
            files: Vec::new(),
            stdout: text,
        }),
    }
}

fn modulus(ctx: &mut Ctx) -> Result<Modulus, CliError> {
    let q: u32 = ctx.or("q", 3)?;
    Ok(Modulus::new(q)?)
}

fn scalar_json(s: &Scalar) -> Value {
    let z = s.to_complex();
    let mut v = json!({ "re": z.re, "im": z.im });
    if let Some(e) = s.as_exact() {
        v["exact"] = json!(e.to_string());
    }
    v
}

pub const MAKE_MEASURE: &[&str] = &["kind", "q", "d", "k", "m", "seed", "mode"];

pub fn make_measure(ctx: &mut Ctx) -> Result<Output, CliError> {
    let kind: Kind = ctx.req("kind")?;
    let output: PathBuf = ctx.req("output")?;
    let mode: Mode = ctx.or("mode", Mode::Exact)?;
    let d: usize = ctx.req("d")?;
    let mu = match kind {
        Kind::HaarBall => {
            let q = modulus(ctx)?;
            let k: usize = ctx.req("k")?;
            make_haar_ball(q, d, k, &PointVec::zero(q, d))?
        }
        Kind::Capset => {
            let q = modulus(ctx)?;
            make_capset_measure(q, d)?
        }
        Kind::Cascade => {
            let q = modulus(ctx)?;
            let m: usize = ctx.req("m")?;
            let seed: u64 = ctx.or("seed", 0)?;
            make_cascade_measure(q, d, m, seed)?
        }
    };
    let mu = match mode {
        Mode::Exact => mu,
        Mode::Float => mu.to_float(),
    };
    let mut w = create(&output)?;
    write_measure(&mu, &mut w).map_err(|e| CliError::io(e.to_string()))?;
    finish(w, &output)?;
    let support_path = with_suffix(&output, ".support");
    let support = mu.support();
    let mut w = create(&support_path)?;
    write_point_set(&support, &mut w).map_err(|e| CliError::io(e.to_string()))?;
    finish(w, &support_path)?;
    let mass = match mu.mass().as_exact() {
        Some(r) => format_rational(r),
        None => mu.mass().to_f64().to_string(),
    };
    Ok(Output {
        files: vec![output, support_path],
        stdout: format!("mass {mass}\nsupport {}\n", support.len()),
    })
}

pub const TRANSFORM: &[&str] = &["algorithm", "mode", "s"];

pub fn transform(ctx: &mut Ctx) -> Result<Output, CliError> {
    let mu = load_measure(ctx)?;
    let algorithm: Algorithm = ctx.or("algorithm", Algorithm::Fast)?;
    let mode: Mode = ctx.or("mode", mu.mode())?;
    let table = match (mode, mu.mode()) {
        (Mode::Exact, Mode::Float) => return Err(CliError::usage("mode: cannot transform a float measure exactly")),
        (Mode::Float, Mode::Exact) => mu.to_float().to_dense(),
        _ => mu.to_dense(),
    };
    let s: Option<f64> = ctx.opt("s")?;
    let spectrum = dft_forward(&table, algorithm);
    let Some(path) = ctx.opt::<PathBuf>("output")? else {
        let mut buf = Vec::new();
        write_spectrum_csv(&spectrum, &mut buf).map_err(|e| CliError::io(e.to_string()))?;
        return Ok(Output {
            files: Vec::new(),
            stdout: String::from_utf8(buf).expect("csv is utf-8"),
        });
    };
    let mut w = create(&path)?;
    write_spectrum_csv(&spectrum, &mut w).map_err(|e| CliError::io(e.to_string()))?;
    finish(w, &path)?;
    let mut files = vec![path.clone()];
    if matches!(spectrum.values(), Values::Exact(_)) {
        let sidecar = with_suffix(&path, ".exact");
        let mut w = create(&sidecar)?;
        write_exact_sidecar(&spectrum, &mut w).map_err(|e| CliError::io(e.to_string()))?;
        finish(w, &sidecar)?;
        files.push(sidecar);
    }
    let fit = decay_fit(&spectrum, s);
    let summary = json!({
        "coefficients": spectrum.len(),
        "s_hat": fit.s_hat,
        "s_query": fit.s_query,
        "c_hat": fit.c_hat,
        "shell_max": fit.shell_max,
    });
    Ok(Output {
        files,
        stdout: serde_json::to_string(&summary).expect("summary serializes") + "\n",
    })
}

pub const COUNT_APS: &[&str] = &["set", "d", "limit"];

pub fn count_aps(ctx: &mut Ctx) -> Result<Output, CliError> {
    let (set, mu) = load_set(ctx)?;
    let sep_level: Option<usize> = ctx.opt("d")?;
    let limit: usize = ctx.or("limit", 10)?;
    let mut report = json!({
        "q": set.modulus().get(),
        "d": set.level(),
        "support_size": set.len(),
        "aps": count_aps_set(&set),
    });
    if let Some(mu) = &mu {
        report["trilinear_g"] = scalar_json(&trilinear_g(mu));
    }
    if let Some(level) = sep_level {
        let mu = match mu {
            Some(mu) => mu,
            None => set.uniform_measure()?,
        };
        let sep = SeparationPredicate::new(level);
        report["separation_d"] = json!(level);
        report["trilinear_g_separated"] = scalar_json(&trilinear_g_separated(&mu, sep)?);
        let found = extract_progressions(&mu, sep, limit)?;
        report["progressions"] = json!(found.iter().map(|(x, a)| [x.index(), a.index()]).collect::<Vec<_>>());
    }
    emit_json(ctx, &report)
}

pub const DECOMPOSE: &[&str] = &["d", "beta"];

pub fn decompose(ctx: &mut Ctx) -> Result<Output, CliError> {
    let mu = load_measure(ctx)?;
    let d: usize = ctx.req("d")?;
    if d >= mu.level() {
        return Err(CliError::usage(format!("d: need d < d* = {}, got {d}", mu.level())));
    }
    let beta: Option<f64> = ctx.opt("beta")?;
    let mut rep = spectral_decomposition(&mu, d)?;
    if let Some(beta) = beta {
        rep.attach_bound(&mu, beta)?;
    }
    let report = serde_json::to_value(rep.to_json()).expect("report serializes");
    let out = emit_json(ctx, &report)?;
    if !(rep.identity_holds && rep.base_identity_holds) {
        return Err(CliError::Identity {
            message: format!(
                "identity check failed (identity_holds={}, base_identity_holds={})",
                rep.identity_holds, rep.base_identity_holds
            ),
            output: out,
        });
    }
    Ok(out)
}

pub const VARNAVIDES: &[&str] = &["set", "d-prime", "threshold", "samples", "seed", "alpha", "alpha0"];

pub fn varnavides(ctx: &mut Ctx) -> Result<Output, CliError> {
    let (set, _) = load_set(ctx)?;
    let q = set.modulus();
    let d = set.level();
    let alpha: Option<f64> = ctx.opt("alpha")?;
    let alpha0: Option<f64> = ctx.opt("alpha0")?;
    let d_prime = match ctx.opt::<usize>("d-prime")? {
        Some(dp) => dp,
        None => match (alpha, alpha0) {
            (Some(a), Some(a0)) => {
                let dp = choose_dprime(d, a, a0)?;
                ctx.record("d-prime", dp);
                dp
            }
            _ => return Err(CliError::usage("varnavides needs `--d-prime`, or `--alpha` and `--alpha0`")),
        },
    };
    let threshold = match ctx.opt::<f64>("threshold")? {
        Some(t) => t,
        None => match alpha0 {
            Some(a0) => {
                let t = (q.get() as f64).powf(a0 * d_prime as f64);
                ctx.record("threshold", t);
                t
            }
            None => return Err(CliError::usage("varnavides needs `--threshold` or `--alpha0`")),
        },
    };
    let samples: Option<u64> = ctx.opt("samples")?;
    let rep = match samples {
        Some(n) => {
            let seed: u64 = ctx.or("seed", 0)?;
            varnavides_experiment(&set, d_prime, threshold, n, seed)?
        }
        None => varnavides_exhaustive(&set, d_prime, threshold)?,
    };
    let mut report = serde_json::to_value(rep.to_json()).expect("report serializes");
    report["ap_count"] = json!(count_aps_set(&set));
    report["set_size"] = json!(set.len());
    if let (Some(a), Some(a0)) = (alpha, alpha0) {
        report["w_bound"] = json!(w_bound(q, d, d_prime, a, a0));
    }
    emit_json(ctx, &report)
}

pub const ENERGY: &[&str] = &["t"];

pub fn energy(ctx: &mut Ctx) -> Result<Output, CliError> {
    let mu = load_measure(ctx)?;
    let t: f64 = ctx.req("t")?;
    let rel = energy_relation(&mu, t)?;
    let report = json!({
        "q": rel.q,
        "d": mu.level(),
        "t": rel.t,
        "energy_spatial": rel.spatial,
        "energy_spectral": rel.spectral,
        "mass_squared": rel.mass_squared,
        "baseline": rel.baseline,
        "measured_constant": rel.measured_constant,
        "derived_constant": rel.derived_constant,
        "paper_constant": rel.paper_constant,
    });
    emit_json(ctx, &report)
}

pub const CONTENT: &[&str] = &["set", "s", "t", "ratio", "alpha"];

pub fn content(ctx: &mut Ctx) -> Result<Output, CliError> {
    let (set, mu) = load_set(ctx)?;
    let t: f64 = ctx.or("t", 1.0)?;
    let s: Option<f64> = ctx.opt("s")?;
    let ratio: Option<String> = ctx.opt("ratio")?;
    let alpha: Option<f64> = ctx.opt("alpha")?;
    if s.is_none() && ratio.is_none() && alpha.is_none() {
        return Err(CliError::usage("content needs `--s`, `--ratio` or `--alpha`"));
    }
    let mut report = json!({ "q": set.modulus().get(), "d": set.level(), "t": t, "set_size": set.len() });
    if let Some(s) = s {
        let c = hausdorff_content(&set, s, t)?;
        report["s"] = json!(s);
        report["content"] = json!(c.value);
        report["balls_per_level"] = json!(c.balls_per_level);
    }
    if let Some(text) = ratio {
        let r = parse_rational(&text).map_err(|e| CliError::usage(format!("ratio: {e}")))?;
        let c = hausdorff_content_exact(&set, &r, t)?;
        report["ratio"] = json!(format_rational(&r));
        report["content_exact"] = json!(format_rational(&c.value));
        report["content_exact_f64"] = json!(c.value.to_f64());
        report["balls_per_level_exact"] = json!(c.balls_per_level);
    }
    if let Some(alpha) = alpha {
        let mu = match mu {
            Some(mu) => mu,
            None => set.uniform_measure()?,
        };
        let b = ball_condition_constant(&mu, alpha)?;
        report["ball_condition"] = json!({
            "alpha": b.alpha,
            "c_star": b.c_star,
            "witness_level": b.witness_level,
            "witness_center": b.witness_center.index(),
            "witness_mass": b.witness_mass,
        });
    }
    emit_json(ctx, &report)
}

pub const BENCH: &[&str] = &["q", "d", "repetitions", "mode", "seed"];

/// Speedup the fast path must reach at this size.
const BENCH_GATE: (u32, usize, f64) = (3, 10, 10.0);

pub fn bench(ctx: &mut Ctx) -> Result<Output, CliError> {
    let q = modulus(ctx)?;
    let d: usize = ctx.req("d")?;
    let reps: usize = ctx.or("repetitions", 1)?;
    if reps == 0 {
        return Err(CliError::usage("repetitions: need at least 1"));
    }
    if ctx.or("mode", Mode::Float)? != Mode::Float {
        return Err(CliError::usage("mode: bench runs in float mode only"));
    }
    let seed: u64 = ctx.or("seed", 0)?;
    let n = q
        .checked_size(d)
        .filter(|&n| n <= 1 << 26)
        .ok_or_else(|| CliError::usage(format!("d: q^d too large for a dense table at d = {d}")))?;
    let mut rng = fqap::rng::substream(seed, "bench");
    let values = (0..n).map(|_| Complex64::new(rng.gen(), rng.gen())).collect();
    let table = DenseTable::new(q, d, Values::Float(values))?;
    let time = |alg: Algorithm| {
        (0..reps)
            .map(|_| {
                let start = Instant::now();
                let out = dft_forward(&table, alg);
                let secs = start.elapsed().as_secs_f64();
                std::hint::black_box(out);
                secs
            })
            .fold(f64::INFINITY, f64::min)
    };
    let fast = time(Algorithm::Fast);
    let naive = time(Algorithm::Naive);
    let mut csv = String::from("algorithm,q,d,seconds\n");
    csv += &format!("naive,{q},{d},{naive:.6}\nfast,{q},{d},{fast:.6}\n");
    let out = match ctx.opt::<PathBuf>("output")? {
        Some(path) => {
            let mut w = create(&path)?;
            w.write_all(csv.as_bytes()).map_err(|e| CliError::io(e.to_string()))?;
            finish(w, &path)?;
            Output {
                files: vec![path],
                stdout: String::new(),
            }
        }
        None => Output {
            files: Vec::new(),
            stdout: csv,
        },
    };
    let (gq, gd, factor) = BENCH_GATE;
    if q.get() == gq && d == gd && naive < factor * fast {
        return Err(CliError::Identity {
            message: format!("fast path only {:.1}x faster than naive", naive / fast),
            output: out,
        });
    }
    Ok(out)
}
