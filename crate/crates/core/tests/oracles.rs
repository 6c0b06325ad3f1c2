//! Fixed examples checked against brute-force evaluation through the public API.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use fqap::ap::{
    count_aps_set, error_bound, extract_progressions, spectral_decomposition, trilinear_g, trilinear_g_separated,
    SeparationPredicate,
};
use fqap::arith::{character, pair, CycScalar, DualVec, Mode, Modulus, PointVec, Scalar};
use fqap::measures::{
    ball_condition_constant, energy_spatial, energy_spectral, haar_energy, hausdorff_content, hausdorff_content_exact,
    make_capset_measure, make_cascade_measure, make_haar_ball, pushforward, read_measure, read_point_set,
    threshold_small_atoms, write_measure, write_point_set, MeasureTable, PointSet, Weights,
};
use fqap::spectral::{decay_fit, dft_forward, shell_profile, Algorithm, DenseTable, Values};
use fqap::subspace::{
    choose_dprime, choose_dprime_exact, count_subspaces_containing, enumerate_planes, gaussian_binomial, restrict,
    varnavides_exhaustive, varnavides_experiment,
};

fn m(q: u32) -> Modulus {
    Modulus::new(q).unwrap()
}

fn pv(q: u32, digits: &[u32]) -> PointVec {
    PointVec::new(m(q), digits.to_vec()).unwrap()
}

fn dv(q: u32, digits: &[u32]) -> DualVec {
    DualVec::new(m(q), digits.to_vec()).unwrap()
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn exact(s: &Scalar) -> BigRational {
    s.to_rational().expect("rational scalar")
}

fn uniform(q: u32, d: usize) -> MeasureTable {
    PointSet::full(m(q), d).uniform_measure().unwrap()
}

/// `sum_x f(x) e_q(xi . x)` for one frequency, evaluated term by term.
fn naive_coefficient(f: &DenseTable, xi: &DualVec) -> Complex64 {
    let q = f.modulus();
    (0..f.len())
        .map(|n| {
            let x = PointVec::from_index(q, f.level(), n).unwrap();
            f.get_index(n).to_complex() * character(xi, &x, Mode::Float).unwrap().to_complex()
        })
        .sum()
}

#[test]
fn pairing_examples() {
    assert_eq!(pair(&dv(3, &[1, 2]), &pv(3, &[2, 2])).unwrap(), 0);
    assert_eq!(pair(&dv(3, &[0, 1]), &pv(3, &[2, 1])).unwrap(), 1);
    let z = character(&dv(3, &[0, 1]), &pv(3, &[2, 1]), Mode::Float).unwrap().to_complex();
    assert!((z - Complex64::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-12);
}

#[test]
fn orthogonality_of_characters() {
    for d in 1..=3 {
        let q = m(3);
        for i in 0..q.size(d) {
            let xi = DualVec::from_index(q, d, i).unwrap();
            let total = (0..q.size(d)).fold(CycScalar::zero(q), |acc, n| {
                let x = PointVec::from_index(q, d, n).unwrap();
                acc + CycScalar::zeta_pow(q, pair(&xi, &x).unwrap() as i64)
            });
            let want = if i == 0 { q.size(d) as i64 } else { 0 };
            assert_eq!(total.to_rational(), Some(r(want, 1)));
        }
    }
}

#[test]
fn two_point_indicator_transform() {
    let q = m(3);
    let f = PointSet::from_points(q, 2, &[pv(3, &[0, 0]), pv(3, &[1, 0])]).unwrap();
    let table = f.uniform_measure().unwrap().to_dense();
    for alg in [Algorithm::Fast, Algorithm::Naive] {
        let spec = dft_forward(&table, alg);
        for i in 0..9 {
            let xi = DualVec::from_index(q, 2, i).unwrap();
            // indicator / 2, so F = (1 + zeta^{xi_1}) / 2
            let want = (CycScalar::one(q) + CycScalar::zeta_pow(q, xi.digits()[0] as i64)).scale(&r(1, 2));
            assert_eq!(spec.get(&xi).unwrap(), Scalar::Exact(want));
        }
    }
}

#[test]
fn float_transform_matches_term_by_term_sum() {
    let q = m(5);
    let values: Vec<Complex64> = (0..125).map(|n| Complex64::new((n % 7) as f64, (n % 3) as f64 - 1.0)).collect();
    let f = DenseTable::new(q, 3, Values::Float(values)).unwrap();
    let spec = dft_forward(&f, Algorithm::Fast);
    for i in [0, 1, 4, 7, 30, 124] {
        let xi = DualVec::from_index(q, 3, i).unwrap();
        assert!((spec.get_index(i).to_complex() - naive_coefficient(&f, &xi)).norm() < 1e-9);
    }
}

#[test]
fn haar_ball_shell_profile() {
    for d in 1..=4 {
        for k in 0..=d.min(2) {
            let mu = make_haar_ball(m(3), d, k, &PointVec::zero(m(3), d)).unwrap();
            let profile = shell_profile(&mu.transform());
            for s in &profile {
                let want = if s.j <= k { 1.0 } else { 0.0 };
                assert!((s.max - want).abs() < 1e-12, "d={d} k={k} j={}", s.j);
            }
        }
    }
}

#[test]
fn haar_ball_weights() {
    let mu = make_haar_ball(m(3), 2, 1, &PointVec::zero(m(3), 2)).unwrap();
    let Weights::Exact(w) = mu.weights() else { panic!() };
    for (n, x) in w.iter().enumerate() {
        // the ball of radius 1/3 about 0 fixes the first digit
        let want = if n % 3 == 0 { r(1, 3) } else { r(0, 1) };
        assert_eq!(*x, want);
    }
    let pushed = pushforward(&make_haar_ball(m(3), 2, 1, &PointVec::zero(m(3), 2)).unwrap(), 1).unwrap();
    assert_eq!(pushed.weight(0).as_exact(), Some(&r(1, 1)));
}

#[test]
fn cascade_fixtures() {
    let mu = make_cascade_measure(m(3), 6, 2, 7).unwrap();
    let Weights::Exact(w) = mu.weights() else { panic!() };
    let support: Vec<_> = w.iter().filter(|x| !x.is_zero()).collect();
    assert_eq!(support.len(), 64);
    assert!(support.iter().all(|x| **x == r(1, 64)));

    let mu = make_cascade_measure(m(3), 8, 2, 1).unwrap();
    assert!(decay_fit(&mu.transform(), None).s_hat().unwrap() > 0.0);
}

#[test]
fn thresholding_example() {
    let mu = MeasureTable::new(m(3), 1, Weights::Float(vec![0.5, 0.49, 0.01])).unwrap();
    let kept = threshold_small_atoms(&mu, &BigRational::one()).unwrap();
    assert_eq!(kept.weights().to_f64(), vec![0.5, 0.49, 0.0]);
    assert!(kept.mass().to_f64() >= 0.5);
}

#[test]
fn capset_regularity() {
    let q = m(3);
    let alpha = 2f64.ln() / 3f64.ln();
    for d in [2, 3] {
        let rep = ball_condition_constant(&make_capset_measure(q, d).unwrap(), alpha).unwrap();
        assert!((rep.c_star - 1.0).abs() < 1e-12);
        assert_eq!(rep.witness_level, 0);
    }
    for d in 1..=5 {
        let set = make_capset_measure(q, d).unwrap().support();
        let exact = hausdorff_content_exact(&set, &r(1, 2), 1.0).unwrap();
        assert_eq!(exact.value, r(1, 1));
        assert!((hausdorff_content(&set, alpha, 1.0).unwrap().value - 1.0).abs() < 1e-9);
    }
    let whole = PointSet::full(q, 3);
    assert!((hausdorff_content(&whole, 0.8, 1.0).unwrap().value - 1.0).abs() < 1e-12);
}

/// `iint |x - y|^{-t}` over pairs of level-`d` cells, with the self term
/// summed over the fine distances inside one cell.
fn brute_energy(mu: &MeasureTable, t: f64) -> f64 {
    let q = mu.modulus();
    let d = mu.level();
    let qf = q.get() as f64;
    let w = mu.weights().to_f64();
    let self_e: f64 = {
        // inside one level-d cell the first differing digit is j >= d,
        // with probability (1 - 1/q) q^{d-j}
        (d..d + 200).map(|j| (1.0 - 1.0 / qf) * qf.powi(d as i32 - j as i32) * qf.powf(j as f64 * t)).sum()
    };
    let mut total = 0.0;
    for x in 0..w.len() {
        for y in 0..w.len() {
            if x == y {
                total += w[x] * w[x] * self_e;
            } else {
                let diff = (&PointVec::from_index(q, d, x).unwrap() - &PointVec::from_index(q, d, y).unwrap()).index();
                let v = (0..d).find(|&i| (diff / q.size(i)) % q.as_usize() != 0).unwrap();
                total += w[x] * w[y] * qf.powf(v as f64 * t);
            }
        }
    }
    total
}

#[test]
fn energy_against_pair_sum() {
    let t = 0.5;
    let two = MeasureTable::new(m(3), 1, Weights::Float(vec![0.5, 0.5, 0.0])).unwrap();
    assert!((energy_spatial(&two, t).unwrap() - brute_energy(&two, t)).abs() < 1e-9);
    for d in 0..=2 {
        let mu = uniform(3, d);
        assert!((energy_spatial(&mu, t).unwrap() - haar_energy(m(3), t)).abs() < 1e-9);
    }
    let mu = make_cascade_measure(m(3), 3, 2, 5).unwrap();
    for t in [0.3, 0.7] {
        assert!((energy_spatial(&mu, t).unwrap() - brute_energy(&mu, t)).abs() < 1e-9);
    }
}

#[test]
fn spectral_energy_examples() {
    let t = 0.5;
    let q = 3f64;
    for d in 1..=3 {
        let mut w = vec![0.0; 3usize.pow(d as u32)];
        w[0] = 1.0;
        let point = MeasureTable::new(m(3), d, Weights::Float(w)).unwrap();
        let want: f64 = (1..=d).map(|j| 2.0 * q.powi(j as i32 - 1) * q.powf(j as f64 * (t - 1.0))).sum();
        assert!((energy_spectral(&point, t).unwrap().value - want).abs() < 1e-12);
    }
    let ball = make_haar_ball(m(3), 2, 1, &PointVec::zero(m(3), 2)).unwrap();
    assert!((energy_spectral(&ball, t).unwrap().value - 2.0 / 3f64.sqrt()).abs() < 1e-12);
}

fn brute_trilinear(mu: &MeasureTable, sep: Option<usize>) -> BigRational {
    let q = mu.modulus();
    let d = mu.level();
    let w: Vec<BigRational> = (0..mu.len()).map(|n| mu.weight(n).as_exact().unwrap().clone()).collect();
    let mut total = BigRational::zero();
    for x in 0..mu.len() {
        let xv = PointVec::from_index(q, d, x).unwrap();
        for a in 1..mu.len() {
            if sep.is_some_and(|s| a % q.size(s) == 0) {
                continue;
            }
            let av = PointVec::from_index(q, d, a).unwrap();
            let y = &xv + &av;
            let z = &y + &av;
            total += &w[x] * &w[y.index()] * &w[z.index()];
        }
    }
    total
}

#[test]
fn ap_counts() {
    assert_eq!(count_aps_set(&PointSet::full(m(3), 1)), 6);
    let capset = make_capset_measure(m(3), 2).unwrap().support();
    assert_eq!(count_aps_set(&capset), 0);
    for d in 1..=3 {
        let n = 3i64.pow(d as u32);
        assert_eq!(exact(&trilinear_g(&uniform(3, d))), r(n - 1, n * n));
    }
    let mu = uniform(3, 2);
    assert_eq!(exact(&trilinear_g_separated(&mu, SeparationPredicate::new(1)).unwrap()), r(2, 27));
    let capset = make_capset_measure(m(3), 3).unwrap();
    assert_eq!(exact(&trilinear_g_separated(&capset, SeparationPredicate::new(3)).unwrap()), r(0, 1));
    assert!(extract_progressions(&capset, SeparationPredicate::new(1), 10).unwrap().is_empty());
}

#[test]
fn trilinear_forms_against_brute_force() {
    let mu = make_cascade_measure(m(5), 2, 3, 11).unwrap();
    assert_eq!(exact(&trilinear_g(&mu)), brute_trilinear(&mu, None));
    for s in 0..=2 {
        let g = trilinear_g_separated(&mu, SeparationPredicate::new(s)).unwrap();
        assert_eq!(exact(&g), brute_trilinear(&mu, Some(s)));
    }
}

#[test]
fn extraction_finds_valid_progressions() {
    let mu = uniform(3, 2);
    let found = extract_progressions(&mu, SeparationPredicate::new(1), 1000).unwrap();
    // 9 base points times the 6 steps with a nonzero low digit
    assert_eq!(found.len(), 54);
    let support = mu.support();
    for (x, a) in &found {
        assert_ne!(a.digits()[0], 0);
        let y = x + a;
        assert!(support.contains_point(&y) && support.contains_point(&(&y + a)));
    }
}

#[test]
fn decomposition_of_uniform_measure() {
    let rep = spectral_decomposition(&uniform(3, 2), 1).unwrap();
    assert_eq!(exact(&rep.s0), r(2, 27));
    assert_eq!(exact(&rep.s_neq0), r(0, 1));
    assert_eq!(exact(&rep.lhs), r(2, 27));
    assert!(rep.identity_holds && rep.base_identity_holds && rep.positivity);
}

#[test]
fn decomposition_of_haar_cylinder() {
    let mu = make_haar_ball(m(3), 3, 1, &PointVec::zero(m(3), 3)).unwrap();
    let rep = spectral_decomposition(&mu, 1).unwrap();
    assert_eq!(exact(&rep.lhs), brute_trilinear(&mu, Some(1)));
    assert_eq!(rep.s0.try_add(&rep.s_neq0).unwrap(), rep.lhs);
}

#[test]
fn cascade_bound_flag() {
    let mu = make_cascade_measure(m(3), 5, 2, 3).unwrap();
    let eb = error_bound(&mu, 2, 0.8).unwrap();
    assert!(eb.holds);
    assert!(eb.s_neq0_abs <= eb.bound);
}

#[test]
fn subspace_examples() {
    let q = m(3);
    assert_eq!(gaussian_binomial(2, 1, q).unwrap(), BigInt::from(4));
    assert_eq!(gaussian_binomial(3, 2, q).unwrap(), BigInt::from(13));
    assert_eq!(count_subspaces_containing(3, 2, q).unwrap(), BigInt::from(4));
    assert_eq!(count_subspaces_containing(5, 5, q).unwrap(), BigInt::from(1));
    assert_eq!(enumerate_planes(q, 3, 2).unwrap().len(), 39);
    assert_eq!(enumerate_planes(q, 2, 1).unwrap().len(), 12);
}

#[test]
fn restriction_preserves_progressions() {
    let q = m(3);
    let set = PointSet::from_indices(q, 3, [0, 1, 2, 4, 8, 13, 17, 22, 26]).unwrap();
    for plane in enumerate_planes(q, 3, 2).unwrap() {
        let inside = restrict(&set, &plane).unwrap();
        let mut direct = 0;
        for x in set.indices() {
            let xv = PointVec::from_index(q, 3, x).unwrap();
            for a in 1..27 {
                let av = PointVec::from_index(q, 3, a).unwrap();
                let y = &xv + &av;
                let z = &y + &av;
                if [&xv, &y, &z].iter().all(|p| plane.contains(p) && set.contains_point(p)) {
                    direct += 1;
                }
            }
        }
        assert_eq!(count_aps_set(&inside), direct);
    }
}

#[test]
fn varnavides_examples() {
    let q = m(3);
    let rep = varnavides_exhaustive(&PointSet::full(q, 2), 1, 2.0).unwrap();
    assert_eq!(rep.w_hat, 0.0);
    assert_eq!(rep.ap_rich_fraction, 1.0);
    assert_eq!(rep.samples, 12);
    let capset = make_capset_measure(q, 3).unwrap().support();
    for dp in 1..=3 {
        assert_eq!(varnavides_exhaustive(&capset, dp, 2.0).unwrap().ap_rich_fraction, 0.0);
    }
    let a = varnavides_experiment(&PointSet::full(q, 3), 2, 2.0, 200, 5).unwrap();
    let b = varnavides_experiment(&PointSet::full(q, 3), 2, 2.0, 200, 5).unwrap();
    assert_eq!(a, b);
}

#[test]
fn dprime_choice() {
    assert_eq!(choose_dprime(100, 0.99, 0.9).unwrap(), 10);
    let one = BigRational::one();
    let alpha0 = r(1, 2);
    // (1 - alpha) / (1 - alpha0) = 9999/10000
    let alpha = &one - (&one - &alpha0) * r(9999, 10000);
    // lands exactly on d, which the guard rejects
    assert!(choose_dprime_exact(9999, &alpha, &alpha0).is_err());
    let alpha = &one - (&one - &alpha0) * r(9998, 10000);
    assert_eq!(choose_dprime_exact(9999, &alpha, &alpha0).unwrap(), 9998);
    assert!(choose_dprime(10, 0.9999999, 0.9).is_err());
}

#[test]
fn file_round_trips() {
    let mu = make_cascade_measure(m(5), 3, 2, 4).unwrap();
    let mut buf = Vec::new();
    write_measure(&mu, &mut buf).unwrap();
    assert_eq!(read_measure(buf.as_slice()).unwrap(), mu);

    let set = mu.support();
    let mut buf = Vec::new();
    write_point_set(&set, &mut buf).unwrap();
    assert_eq!(read_point_set(buf.as_slice()).unwrap(), set);

    let float = mu.to_float();
    let mut buf = Vec::new();
    write_measure(&float, &mut buf).unwrap();
    let back = read_measure(buf.as_slice()).unwrap();
    for (a, b) in back.weights().to_f64().iter().zip(float.weights().to_f64()) {
        assert_eq!(*a, b);
    }
    assert!(back.mass().to_f64().to_f64().is_some());
}
