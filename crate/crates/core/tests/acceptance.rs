use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use fqap::ap::{
    character_sum_nonzero, character_sum_nonzero_brute, count_aps_set, error_bound, extract_progressions,
    spectral_decomposition, trilinear_g, trilinear_g_separated, SeparationPredicate,
};
use fqap::arith::{abs_dual, AbsValue, CycScalar, DualVec, Mode, Modulus, PointVec, Scalar};
use fqap::measures::{
    energy_relation, make_capset_measure, make_cascade_measure, make_random_measure, pushforward, MeasureTable,
    PointSet,
};
use fqap::spectral::{dft_forward, dft_inverse, Algorithm, DenseTable, SpectralTable, Values};
use fqap::subspace::{count_subspaces_containing, dependence_probability, gaussian_binomial, varnavides_exhaustive};

type Outcome = Result<String, String>;

fn m(q: u32) -> Modulus {
    Modulus::new(q).unwrap()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn pow(q: u32, e: usize) -> BigInt {
    BigInt::from(q).pow(e as u32)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn grid() -> Vec<(u32, usize, usize)> {
    let mut out = Vec::new();
    for q in [3, 5] {
        for d in 1..=2 {
            for d_star in d + 1..=4 {
                out.push((q, d, d_star));
            }
        }
    }
    out
}

fn seed_of(q: u32, d: usize, d_star: usize, k: u64) -> u64 {
    (q as u64) << 40 | (d as u64) << 32 | (d_star as u64) << 24 | k
}

fn exact_sum(s: &Scalar, t: &Scalar) -> Scalar {
    s.try_add(t).unwrap()
}

fn c1_decomposition() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for (q, d, d_star) in grid() {
        for k in 0..25 {
            let mu = make_random_measure(m(q), d_star, 6, seed_of(q, d, d_star, k)).unwrap();
            let rep = spectral_decomposition(&mu, d).unwrap();
            // recompute the left side independently of the report
            let lhs = trilinear_g_separated(&mu, SeparationPredicate::new(d)).unwrap();
            ensure(lhs == rep.lhs, || format!("lhs mismatch q={q} d={d} d*={d_star} k={k}"))?;
            ensure(lhs.as_exact().is_some(), || "not exact".into())?;
            ensure(exact_sum(&rep.s0, &rep.s_neq0) == lhs, || {
                format!("S0 + S!=0 != lhs at q={q} d={d} d*={d_star} k={k}")
            })?;
            cases += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{cases} measures, zero tolerance, {secs:.2}s"))
}

fn c2_base_identity() -> Outcome {
    let mut cases = 0;
    for (q, d, d_star) in grid() {
        for k in 0..25 {
            let mu = make_random_measure(m(q), d_star, 6, seed_of(q, d, d_star, k)).unwrap();
            let rep = spectral_decomposition(&mu, d).unwrap();
            let g = trilinear_g(&pushforward(&mu, d).unwrap());
            let scale = Scalar::from_rational(m(q), &BigRational::new(One::one(), pow(q, d_star - d)), Mode::Exact);
            let expected = scale.try_mul(&g).unwrap();
            ensure(rep.s0 == expected, || format!("S0 != q^(d-d*) g at q={q} d={d} d*={d_star} k={k}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} measures, zero tolerance"))
}

fn c3_character_sums() -> Outcome {
    let mut thetas = 0;
    for d in 1..=3 {
        let q = m(3);
        let n = q.size(d);
        let top = BigRational::from_integer(pow(3, d) - 1);
        for i in 0..n {
            let theta = DualVec::from_index(q, d, i).unwrap();
            let closed = character_sum_nonzero(&theta, Mode::Exact);
            // literal sum over a' != 0
            let mut literal = CycScalar::zero(q);
            for a in 1..n {
                let a = PointVec::from_index(q, d, a).unwrap();
                literal = literal + CycScalar::zeta_pow(q, fqap::arith::pair(&theta, &a).unwrap() as i64);
            }
            let want = if i == 0 { top.clone() } else { -BigRational::one() };
            ensure(literal.to_rational() == Some(want.clone()), || format!("literal sum d={d} theta={i}"))?;
            ensure(closed.to_rational() == Some(want), || format!("closed form d={d} theta={i}"))?;
            let brute = character_sum_nonzero_brute(&theta, Mode::Exact).unwrap();
            ensure(brute == closed, || format!("brute path d={d} theta={i}"))?;
            thetas += 1;
        }
    }
    // L1 total of the character sum over (xi1', xi2'), argument 2 xi1' + xi2'
    let mut totals = Vec::new();
    for q in [3u32, 5, 7] {
        for d in 1..=3 {
            let qm = m(q);
            let n = qm.size(d);
            if n * n > 200_000 {
                continue;
            }
            let mut total = BigRational::zero();
            for i in 0..n {
                let x1 = DualVec::from_index(qm, d, i).unwrap();
                let two_x1 = x1.scale(2);
                for j in 0..n {
                    let x2 = DualVec::from_index(qm, d, j).unwrap();
                    let s = character_sum_nonzero(&(&two_x1 + &x2), Mode::Exact).to_rational().unwrap();
                    total += if s < BigRational::zero() { -s } else { s };
                }
            }
            let want: BigInt = BigInt::from(2) * pow(q, d) * (pow(q, d) - BigInt::one());
            ensure(total == BigRational::from_integer(want.clone()), || {
                format!("L1 total q={q} d={d}: {total} != {want}")
            })?;
            totals.push(format!("q={q},d={d}:{want}"));
        }
    }
    Ok(format!("{thetas} thetas exhaustive; L1 totals {}", totals.join(" ")))
}

fn random_exact_table(q: Modulus, d: usize, seed: u64) -> DenseTable {
    let mut rng = fqap::rng::seeded(seed);
    let values = (0..q.size(d))
        .map(|_| {
            let coeffs: Vec<BigRational> = (0..q.as_usize() - 1)
                .map(|_| rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)))
                .collect();
            CycScalar::from_coeffs(q, &coeffs).unwrap()
        })
        .collect();
    DenseTable::new(q, d, Values::Exact(values)).unwrap()
}

fn exact_values(v: &Values) -> &[CycScalar] {
    match v {
        Values::Exact(v) => v,
        Values::Float(_) => panic!("expected exact values"),
    }
}

/// `sum |z|^2`; real but in general irrational, so kept cyclotomic.
fn norm_sq_sum(v: &[CycScalar]) -> CycScalar {
    let q = v[0].modulus();
    v.iter().fold(CycScalar::zero(q), |acc, z| acc + z * &z.conj())
}

fn c4_transform() -> Outcome {
    let mut checked = 0;
    for q in [3u32, 5, 7] {
        let qm = m(q);
        for d in 1..=4 {
            if qm.size(d) > 2500 {
                continue;
            }
            let f = random_exact_table(qm, d, 1000 * q as u64 + d as u64);
            let fast = dft_forward(&f, Algorithm::Fast);
            let naive = dft_forward(&f, Algorithm::Naive);
            ensure(fast.values() == naive.values(), || format!("fast != naive q={q} d={d}"))?;
            let back = dft_inverse(&fast);
            ensure(back.values() == f.values(), || format!("inversion q={q} d={d}"))?;
            let lhs = norm_sq_sum(exact_values(fast.values()));
            let rhs = norm_sq_sum(exact_values(f.values())).scale(&BigRational::from_integer(pow(q, d)));
            ensure(lhs == rhs, || format!("Parseval q={q} d={d}"))?;
            checked += 1;
        }
    }
    // pushforward consistency on probability measures
    let mut pf = 0;
    for q in [3u32, 5, 7] {
        let qm = m(q);
        for d_star in 1..=4 {
            if qm.size(d_star) > 2500 {
                continue;
            }
            let mu = make_random_measure(qm, d_star, 5, 77 + q as u64 * 10 + d_star as u64).unwrap();
            let full = mu.transform();
            for d in 0..=d_star {
                let low = pushforward(&mu, d).unwrap().transform();
                for i in 0..qm.size(d) {
                    ensure(full.get_index(i) == low.get_index(i), || {
                        format!("pushforward q={q} d*={d_star} d={d} xi={i}")
                    })?;
                }
                pf += 1;
            }
        }
    }
    Ok(format!("{checked} tables (inversion, Parseval, fast=naive), {pf} pushforward levels"))
}

fn shell_check(spec: &SpectralTable) -> Result<(), String> {
    let q = spec.modulus();
    let d = spec.level();
    let mut counts = vec![0usize; d + 1];
    for i in 0..q.size(d) {
        let xi = DualVec::from_index(q, d, i).unwrap();
        match abs_dual(&xi) {
            AbsValue::Zero => counts[0] += 1,
            v => counts[v.exponent().unwrap() as usize] += 1,
        }
    }
    ensure(counts[0] == 1, || "zero shell".into())?;
    for j in 1..=d {
        let want = (q.as_usize() - 1) * q.size(j - 1);
        ensure(counts[j] == want && spec.shells()[j].len() == want, || {
            format!("shell {j} at q={} d={d}: {} / {} vs {want}", q.get(), counts[j], spec.shells()[j].len())
        })?;
    }
    Ok(())
}

fn c5_shells() -> Outcome {
    let mut tables = 0;
    for q in [3u32, 5, 7] {
        let qm = m(q);
        for d in 0..=6 {
            let mut rng = fqap::rng::seeded(d as u64);
            let values = (0..qm.size(d)).map(|_| Complex64::new(rng.gen(), 0.0)).collect();
            let f = DenseTable::new(qm, d, Values::Float(values)).unwrap();
            shell_check(&dft_forward(&f, Algorithm::Fast))?;
            tables += 1;
            if qm.size(d) <= 3000 {
                let mu = make_random_measure(qm, d, 3, d as u64).unwrap();
                shell_check(&mu.transform())?;
                tables += 1;
            }
        }
    }
    Ok(format!("{tables} tables, q in {{3,5,7}}, d <= 6"))
}

fn c6_capset() -> Outcome {
    let start = Instant::now();
    for d in 1..=8 {
        let q = m(3);
        let mu = make_capset_measure(q, d).unwrap();
        let support = mu.support();
        ensure(support.len() == 1 << d, || format!("support size at d={d}"))?;
        ensure(count_aps_set(&support) == 0, || format!("count_aps_set at d={d}"))?;
        ensure(trilinear_g(&mu).to_rational() == Some(BigRational::zero()), || format!("g at d={d}"))?;
        for dp in 1..=d {
            let sep = SeparationPredicate::new(dp);
            let g = trilinear_g_separated(&mu, sep).unwrap();
            ensure(g.to_rational() == Some(BigRational::zero()), || format!("g separated d={d} d'={dp}"))?;
            ensure(extract_progressions(&mu, sep, 1).unwrap().is_empty(), || {
                format!("extraction d={d} d'={dp}")
            })?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("d = 1..8, {secs:.2}s"))
}

fn c7_error_bound() -> Outcome {
    let q = m(3);
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for seed in 0..20 {
        let mu = make_cascade_measure(q, 5, 2, seed).unwrap();
        let rep = spectral_decomposition(&mu, 2).unwrap();
        for beta in [0.7, 0.8, 0.9] {
            let eb = error_bound(&mu, 2, beta).unwrap();
            let s = rep.s_neq0.abs();
            ensure(s <= eb.bound, || format!("seed={seed} beta={beta}: |S!=0|={s:e} > bound={:e}", eb.bound))?;
            ensure(eb.holds, || format!("holds flag seed={seed} beta={beta}"))?;
            worst = worst.max(s / eb.bound);
            n += 1;
        }
    }
    // These cascades keep 2 of 3 children per node, so they carry no
    // progressions and S!=0 vanishes; dense random measures exercise the bound.
    let mut dense: f64 = 0.0;
    for seed in 0..20 {
        let mu = make_random_measure(q, 5, 6, 700 + seed).unwrap();
        let rep = spectral_decomposition(&mu, 2).unwrap();
        for beta in [0.7, 0.8, 0.9] {
            let eb = error_bound(&mu, 2, beta).unwrap();
            let s = rep.s_neq0.abs();
            ensure(s > 0.0 && s <= eb.bound, || format!("random seed={seed} beta={beta}: {s:e} vs {:e}", eb.bound))?;
            dense = dense.max(s / eb.bound);
        }
    }
    Ok(format!(
        "{n}/60 cascade cases pass (max |S!=0|/bound {worst:.3e}); 60/60 random-measure cases pass (max ratio {dense:.3e})"
    ))
}

/// All subspaces of F_3^d (d <= 4) as point masks, grouped by dimension.
fn brute_subspaces(d: usize) -> Vec<HashSet<u128>> {
    let q = 3usize;
    let n = q.pow(d as u32);
    let add = |x: usize, y: usize, c: usize| {
        let (mut x, mut y, mut out, mut p) = (x, y, 0, 1);
        for _ in 0..d {
            out += ((x % q + c * (y % q)) % q) * p;
            x /= q;
            y /= q;
            p *= q;
        }
        out
    };
    let mut by_dim = vec![HashSet::from([1u128])];
    for k in 0..d {
        let mut next = HashSet::new();
        for &s in &by_dim[k] {
            for v in 0..n {
                if s >> v & 1 == 1 {
                    continue;
                }
                let mut t = 0u128;
                for x in (0..n).filter(|x| s >> x & 1 == 1) {
                    for c in 0..q {
                        t |= 1 << add(x, v, c);
                    }
                }
                next.insert(t);
            }
        }
        by_dim.push(next);
    }
    by_dim
}

fn c8_subspaces() -> Outcome {
    let q = m(3);
    for d in 1..=4 {
        let subs = brute_subspaces(d);
        for (k, level) in subs.iter().enumerate() {
            ensure(gaussian_binomial(d, k, q).unwrap() == BigInt::from(level.len()), || {
                format!("[{d},{k}]_3 != {}", level.len())
            })?;
            if k >= 1 {
                // a = e_0 is point index 1
                let containing = level.iter().filter(|&&s| s >> 1 & 1 == 1).count();
                ensure(count_subspaces_containing(d, k, q).unwrap() == BigInt::from(containing), || {
                    format!("containing d={d} d'={k}")
                })?;
            }
        }
    }
    let p = dependence_probability(2, 2, q).unwrap();
    ensure(p == rat(1, 3) && p <= rat(1, 2), || format!("dependence_probability(2,2,3) = {p}"))?;
    for d in 1..=6 {
        for dp in 1..=d {
            let ratio = BigRational::new(count_subspaces_containing(d, dp, q).unwrap(), gaussian_binomial(d, dp, q).unwrap());
            let bound = rat(3, 1) * BigRational::new(pow(3, dp), pow(3, d));
            ensure(ratio <= bound, || format!("containing fraction d={d} d'={dp}"))?;
        }
    }
    for d in 2..=8 {
        for dp in 1..d {
            let v = dependence_probability(d, dp, q).unwrap();
            let bound = rat(2, 1) * BigRational::new(pow(3, dp), pow(3, d + 1));
            ensure(v <= bound, || format!("dependence d={d} d'={dp}: {v} > {bound}"))?;
        }
    }
    Ok("brute enumeration d <= 4, 1/3 <= 1/2, crude bounds d <= 6 and d <= 8".into())
}

fn brute_aps(set: &PointSet) -> u64 {
    let q = set.modulus();
    let d = set.level();
    let mut n = 0;
    for x in set.indices() {
        let xv = PointVec::from_index(q, d, x).unwrap();
        for a in 1..q.size(d) {
            let av = PointVec::from_index(q, d, a).unwrap();
            let y = &xv + &av;
            if set.contains_point(&y) && set.contains_point(&(&y + &av)) {
                n += 1;
            }
        }
    }
    n
}

fn c9_varnavides() -> Outcome {
    let q = m(3);
    let mut rng = fqap::rng::seeded(9);
    let mut tight: f64 = 0.0;
    for k in 0..50 {
        let density = 0.1 + 0.8 * (k as f64 / 49.0);
        let set = PointSet::from_indices(q, 4, (0..81).filter(|_| rng.gen_bool(density))).unwrap();
        let rep = varnavides_exhaustive(&set, 2, 3.0).unwrap();
        let aps = brute_aps(&set);
        ensure(aps == count_aps_set(&set), || format!("AP count mismatch set {k}"))?;
        let implied = rep.implied_lower_bound_exact.clone().unwrap();
        ensure(implied <= BigRational::from_integer(aps.into()), || {
            format!("set {k}: implied {implied} > {aps}")
        })?;
        if aps > 0 {
            tight = tight.max(rep.implied_lower_bound / aps as f64);
        }
    }
    let full = PointSet::full(q, 2);
    let rep = varnavides_exhaustive(&full, 1, 3.0).unwrap();
    ensure(rep.ap_rich_fraction == 1.0, || format!("F_3^2 rich fraction {}", rep.ap_rich_fraction))?;
    Ok(format!("50 sets sound (max implied/actual {tight:.3}), F_3^2 d'=1 rich fraction 1"))
}

fn c10_energy() -> Outcome {
    let mut lines = Vec::new();
    for q in [3u32, 5] {
        for t in [0.3, 0.5, 0.7] {
            let d = if q == 3 { 4 } else { 3 };
            let mut cs = Vec::new();
            let mut quoted = 0.0;
            let mut derived = 0.0;
            for seed in 0..20 {
                let mu: MeasureTable = make_random_measure(m(q), d, 9, 500 + seed).unwrap();
                let rel = energy_relation(&mu, t).unwrap();
                cs.push(rel.measured_constant.ok_or("spectral energy vanished")?);
                quoted = rel.paper_constant;
                derived = rel.derived_constant;
            }
            let max = cs.iter().cloned().fold(f64::MIN, f64::max);
            let min = cs.iter().cloned().fold(f64::MAX, f64::min);
            let mean = cs.iter().sum::<f64>() / cs.len() as f64;
            let spread = (max - min) / mean.abs();
            ensure(spread < 1e-9, || format!("q={q} t={t}: spread {spread:e}"))?;
            lines.push(format!(
                "q={q} t={t}: measured {mean:.12} (derived {derived:.12}, closed form {quoted:.12}, spread {spread:.1e})"
            ));
        }
    }
    Ok(lines.join("; "))
}

fn random_float_table(q: Modulus, d: usize) -> DenseTable {
    let mut rng = fqap::rng::seeded(d as u64);
    let values = (0..q.size(d)).map(|_| Complex64::new(rng.gen(), rng.gen())).collect();
    DenseTable::new(q, d, Values::Float(values)).unwrap()
}

fn c11_performance() -> Outcome {
    let q = m(3);
    let big = random_float_table(q, 13);
    let start = Instant::now();
    let spec = dft_forward(&big, Algorithm::Fast);
    let fast13 = start.elapsed().as_secs_f64();
    ensure(spec.len() == q.size(13), || "size".into())?;
    ensure(fast13 < 2.0, || format!("d=13 fast took {fast13:.3}s"))?;

    let f = random_float_table(q, 10);
    let start = Instant::now();
    let fast = dft_forward(&f, Algorithm::Fast);
    let fast10 = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let naive = dft_forward(&f, Algorithm::Naive);
    let naive10 = start.elapsed().as_secs_f64();
    let (a, b) = (fast.values().to_complex(), naive.values().to_complex());
    let err = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    ensure(err < 1e-6, || format!("fast/naive disagree by {err:e}"))?;
    let speedup = naive10 / fast10.max(1e-9);
    ensure(speedup >= 10.0, || format!("speedup {speedup:.1}x"))?;
    Ok(format!("d=13 fast {fast13:.3}s; d=10 fast {fast10:.4}s naive {naive10:.2}s ({speedup:.0}x)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("exact decomposition identity", c1_decomposition),
        ("base-term identity", c2_base_identity),
        ("character-sum facts", c3_character_sums),
        ("transform correctness", c4_transform),
        ("shell cardinalities", c5_shells),
        ("AP-free fixture", c6_capset),
        ("error-bound chain", c7_error_bound),
        ("subspace combinatorics", c8_subspaces),
        ("Varnavides soundness", c9_varnavides),
        ("energy proportionality", c10_energy),
        ("performance", c11_performance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
