//! Acceptance gate: one test per headline claim, each printing a single
//! PASS/FAIL line (visible with --show-output) with its measured runtime.
//! Tolerances are pinned here, not configurable.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shellkit::averaged::{
    averaged_ab, averaged_disk, averaged_disk_direct, averaged_fibonacci, frequency_module_member,
    shelling_table,
};
use shellkit::covariogram::ball_covariogram;
use shellkit::empirical::{covariogram_monte_carlo, default_margin, empirical_averaged};
use shellkit::modelset::{enumerate_radii, generate_patch, System};
use shellkit::verify::{all_passed, suite_central, suite_central_invariance, suite_covariogram, suite_empirical, CheckResult};
use shellkit::window::Window;
use shellkit::{Basis, QuadInt, QuadRat};

const SEED: u64 = 17;

fn qi(a: i64, b: i64) -> QuadInt {
    QuadInt::from_i64s(a, b, Basis::Rt2)
}

fn qr(a: i64, b: i64, den: i64) -> QuadRat {
    QuadRat::from_i64s(a, b, den, Basis::Rt2)
}

fn report(criterion: u32, passed: bool, detail: &str, elapsed: Duration) {
    println!(
        "acceptance {criterion}: {} - {detail} ({elapsed:.2?})",
        if passed { "PASS" } else { "FAIL" }
    );
}

#[test]
fn acceptance_1_shortest_distances_exact() {
    let t0 = Instant::now();
    let records = shelling_table(&System::AmmannBeenker, 2.3).unwrap();
    let elapsed = t0.elapsed();

    let expected: [(QuadInt, Vec<u64>, QuadRat); 7] = [
        (qi(2, -1), vec![8], qr(4, -2, 1)),
        (qi(1, 0), vec![8], qr(4, 0, 1)),
        (qi(2, 0), vec![8], qr(-6, 6, 1)),
        (qi(3, 0), vec![16], qr(20, -12, 1)),
        (qi(2, 1), vec![8], qr(36, -22, 1)),
        (qi(4, 0), vec![8], qr(-2, 2, 1)),
        (qi(5, 0), vec![16], qr(-56, 40, 1)),
    ];
    let mut ok = records.len() == 8 && records[0].rsq.is_zero();
    if ok {
        for (rec, (rsq, lens, a)) in records[1..].iter().zip(&expected) {
            let lens_got: Vec<u64> = rec.orbits.iter().map(|o| o.orbit_length).collect();
            ok &= &rec.rsq == rsq && &lens_got == lens && rec.a_exact.as_ref() == Some(a);
        }
    }
    let timely = elapsed < Duration::from_secs(1);
    report(
        1,
        ok && timely,
        "seven shortest octagonal records, zero tolerance",
        elapsed,
    );
    assert!(ok, "table values do not match the hand-derived records");
    assert!(timely, "table took {elapsed:.2?}, budget 1s");
}

#[test]
fn acceptance_2_central_routes_agree() {
    let t0 = Instant::now();
    let results = suite_central(30.0).unwrap();
    let elapsed = t0.elapsed();
    let cases: usize = 3; // rings swept
    let ok = results.len() == cases && all_passed(&results);
    let timely = elapsed < Duration::from_secs(120);
    report(
        2,
        ok && timely,
        "counting formula = character sum = enumeration, both embeddings <= 30",
        elapsed,
    );
    assert!(ok, "{results:?}");
    assert!(timely, "sweep took {elapsed:.2?}, budget 2min");
}

fn covariogram_results() -> &'static (Vec<CheckResult>, Duration) {
    static RESULTS: OnceLock<(Vec<CheckResult>, Duration)> = OnceLock::new();
    RESULTS.get_or_init(|| {
        let t0 = Instant::now();
        let results = suite_covariogram(SEED).unwrap();
        (results, t0.elapsed())
    })
}

#[test]
fn acceptance_3_covariogram_cross_validation() {
    let (results, elapsed) = covariogram_results();
    let names = [
        "radial closed forms vs quadrature",
        "planar closed form vs direct formula",
        "octagon branch continuity",
        "octagon exact vs Monte Carlo",
    ];
    let relevant: Vec<&CheckResult> = results
        .iter()
        .filter(|r| names.contains(&r.name.as_str()))
        .collect();
    let ok = relevant.len() == names.len() && relevant.iter().all(|r| r.passed);
    let timely = *elapsed < Duration::from_secs(60);
    report(
        3,
        ok && timely,
        "closed forms vs quadrature 1e-9, direct formula 1e-12, 20 exact boundary points, Monte Carlo 5e-3",
        *elapsed,
    );
    assert!(ok, "{relevant:?}");
    assert!(timely, "cross-validation took {elapsed:.2?}, budget 1min");
}

#[test]
fn acceptance_4_anchored_values() {
    let t0 = Instant::now();
    let mut ok = true;
    for radius in [0.5, 1.0, 2.0] {
        ok &= (ball_covariogram(3, radius, radius).unwrap() - 5.0 / 16.0).abs() <= 1e-15;
    }
    let row1 = averaged_ab(&qi(2, -1)).unwrap();
    ok &= row1.orbits[0].f_exact == Some(qr(2, -1, 4));
    let row2 = averaged_ab(&qi(1, 0)).unwrap();
    ok &= row2.orbits[0].f_exact == Some(qr(1, 0, 2));
    let elapsed = t0.elapsed();
    report(
        4,
        ok,
        "f3(R; R) = 5/16, octagon f = (2-sqrt2)/4 and 1/2 exactly",
        elapsed,
    );
    assert!(ok);
}

fn empirical_results() -> &'static (Vec<CheckResult>, Duration) {
    static RESULTS: OnceLock<(Vec<CheckResult>, Duration)> = OnceLock::new();
    RESULTS.get_or_init(|| {
        let t0 = Instant::now();
        let results = suite_empirical(100.0, SEED).unwrap();
        (results, t0.elapsed())
    })
}

#[test]
fn acceptance_5_patch_estimates_converge() {
    let (results, elapsed) = empirical_results();
    let names = [
        "octagonal patch estimates",
        "estimates sharpen with patch size",
        "chain patch estimates",
    ];
    let relevant: Vec<&CheckResult> = results
        .iter()
        .filter(|r| names.contains(&r.name.as_str()))
        .collect();
    let ok = relevant.len() == names.len() && relevant.iter().all(|r| r.passed);
    let timely = *elapsed < Duration::from_secs(300);
    report(
        5,
        ok && timely,
        "patch estimates within 0.05 (octagonal, cutoff 100) and 0.01 (chain, cutoff 2000), shrinking with size",
        *elapsed,
    );
    assert!(ok, "{relevant:?}");
    assert!(timely, "patch runs took {elapsed:.2?}, budget 5min");
}

#[test]
fn acceptance_6_patch_densities() {
    let (results, elapsed) = empirical_results();
    let names = ["octagonal patch density", "chain patch density"];
    let relevant: Vec<&CheckResult> = results
        .iter()
        .filter(|r| names.contains(&r.name.as_str()))
        .collect();
    let ok = relevant.len() == names.len() && relevant.iter().all(|r| r.passed);
    report(
        6,
        ok,
        "densities within 1% of (1+sqrt2)/2 and tau/sqrt5",
        *elapsed,
    );
    assert!(ok, "{relevant:?}");
}

#[test]
fn acceptance_7_values_in_doubled_module() {
    let t0 = Instant::now();
    let records = shelling_table(&System::AmmannBeenker, 4.0).unwrap();
    let shells: Vec<_> = records.iter().filter(|r| !r.rsq.is_zero()).collect();
    let ok = !shells.is_empty()
        && shells
            .iter()
            .all(|r| frequency_module_member(r.a_exact.as_ref().unwrap()));
    let elapsed = t0.elapsed();
    report(
        7,
        ok,
        &format!(
            "all {} octagonal values up to r = 4 lie in 2Z[sqrt2]",
            shells.len()
        ),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn acceptance_8_disk_product_equals_point_sum() {
    let t0 = Instant::now();
    let system = System::DiskWindow { n: 8, radius: 1.0 };
    let radii = enumerate_radii(&system, 4.0).unwrap();
    let mut max_dev = 0.0f64;
    let mut count = 0;
    for rsq in radii.iter().take(10) {
        let product = averaged_disk(8, 1.0, rsq).unwrap().a_float;
        let direct = averaged_disk_direct(8, 1.0, rsq).unwrap();
        max_dev = max_dev.max((product - direct).abs());
        count += 1;
    }
    let ok = count == 10 && max_dev <= 1e-12;
    let elapsed = t0.elapsed();
    report(
        8,
        ok,
        &format!("10 disk radii, factorised vs per-point, max |diff| = {max_dev:.2e}"),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn acceptance_9_invariance_properties() {
    let t0 = Instant::now();

    // Galois and unit invariance, 1000 random shells each.
    let inv = suite_central_invariance(1000, SEED).unwrap();
    let mut ok = all_passed(&inv);

    // a <= c on random shells: octagonal exact values and chain values.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x5eed);
    for i in 0..1000 {
        let rec = if i % 5 < 3 {
            let a = rng.random_range(1i64..=12);
            let b_max = ((a as f64) / 2f64.sqrt()).floor() as i64;
            let rsq = qi(a, rng.random_range(-b_max..=b_max));
            if !rsq.is_totally_positive() {
                continue;
            }
            averaged_ab(&rsq).unwrap()
        } else {
            let a = rng.random_range(1i64..=30);
            let b_max = ((a as f64) / ((1.0 + 5f64.sqrt()) / 2.0)).floor() as i64;
            let rsq = QuadInt::from_i64s(a, rng.random_range(-b_max..=0), Basis::Tau);
            if !rsq.is_totally_positive() {
                continue;
            }
            averaged_fibonacci(&rsq).unwrap()
        };
        let c = QuadRat::from_i64s(rec.c as i64, 0, 1, rec.rsq.basis);
        if let Some(a) = &rec.a_exact {
            ok &= a.sign_exact() >= 0 && (&c - a).sign_exact() >= 0;
        } else {
            ok &= rec.a_float >= 0.0 && rec.a_float <= rec.c as f64;
        }
    }

    // Thread-count determinism: identical bits from 1-thread and 3-thread
    // pools on 1000 random Monte Carlo runs, plus one full patch pipeline.
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let triple = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let mut offsets = Vec::new();
    for _ in 0..1000u32 {
        let x = rng.random_range(0.0..2.5f64);
        let y = rng.random_range(0.0..1.25f64);
        let seed = rng.random_range(0..u64::MAX);
        offsets.push(([x, y], seed));
    }
    let run = |pool: &rayon::ThreadPool| -> Vec<u64> {
        pool.install(|| {
            offsets
                .iter()
                .map(|(xy, seed)| {
                    covariogram_monte_carlo(&Window::Octagon, xy, 131_072, *seed)
                        .unwrap()
                        .estimate
                        .to_bits()
                })
                .collect()
        })
    };
    ok &= run(&single) == run(&triple);

    let pipeline = |pool: &rayon::ThreadPool| {
        pool.install(|| {
            let patch = generate_patch(&System::AmmannBeenker, 30.0).unwrap();
            let rsq = qi(1, 0);
            let rep = empirical_averaged(&patch, &rsq, default_margin(&rsq)).unwrap();
            (patch.sites.len(), format!("{:?}", patch.sites.first()), rep.estimate.to_bits())
        })
    };
    ok &= pipeline(&single) == pipeline(&triple);

    let elapsed = t0.elapsed();
    report(
        9,
        ok,
        "galois, unit, a <= c, and thread determinism over 1000 random instances each",
        elapsed,
    );
    assert!(ok, "{inv:?}");
}
