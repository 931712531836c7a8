//! Verification suites: cross-checks between independent routes to the
//! same quantities, packaged as named pass/fail results for the CLI.
//!
//! Each check pits at least two computations against each other: counting
//! formula vs character sum vs geometric enumeration, closed forms vs
//! quadrature vs Monte Carlo, exact shelling values vs patch statistics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::averaged::{
    averaged_disk, averaged_disk_direct, frequency_module_member, shelling_table,
};
use crate::central::{central_count, character_sum, enumerate_shell};
use crate::covariogram::{
    ball_covariogram, ball_covariogram_quadrature, euclids_hat, octagon_covariogram,
    reduce_to_sector,
};
use crate::cyclotomic::ExactPoint2;
use crate::empirical::{covariogram_monte_carlo, default_margin, empirical_averaged};
use crate::error::Error;
use crate::modelset::{enumerate_radii, generate_patch, System};
use crate::quad::{Basis, QuadInt, QuadRat};
use crate::window::Window;

/// One named check with a human-readable outcome.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        CheckResult {
            name: name.into(),
            passed,
            detail,
        }
    }
}

/// True iff every check passed.
pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

fn qi(a: i64, b: i64) -> QuadInt {
    QuadInt::from_i64s(a, b, Basis::Rt2)
}

fn qr(a: i64, b: i64, den: i64) -> QuadRat {
    QuadRat::from_i64s(a, b, den, Basis::Rt2)
}

// ---------------------------------------------------------------------------
// Shortest-distance table of the octagonal system.
// ---------------------------------------------------------------------------

/// The seven shortest octagonal records against their hand-derived values,
/// one check per record: squared distance, orbit lengths, exact averaged
/// count and its membership in 2Z[sqrt2], internal distance, and for the
/// first two rows the anchored covariogram values.
pub fn suite_table1() -> Result<Vec<CheckResult>, Error> {
    let mut out = Vec::new();
    let records = shelling_table(&System::AmmannBeenker, 2.3)?;

    let expected: [(QuadInt, Vec<u64>, QuadRat, Option<QuadRat>); 7] = [
        (qi(2, -1), vec![8], qr(4, -2, 1), Some(qr(2, -1, 4))),
        (qi(1, 0), vec![8], qr(4, 0, 1), Some(qr(1, 0, 2))),
        (qi(2, 0), vec![8], qr(-6, 6, 1), None),
        (qi(3, 0), vec![16], qr(20, -12, 1), None),
        (qi(2, 1), vec![8], qr(36, -22, 1), None),
        (qi(4, 0), vec![8], qr(-2, 2, 1), None),
        (qi(5, 0), vec![16], qr(-56, 40, 1), None),
    ];

    let preamble_ok = records.len() == expected.len() + 1
        && records[0].rsq.is_zero()
        && records[0].a_exact == Some(QuadRat::one(Basis::Rt2));
    for (i, (rsq, lens, a, anchor)) in expected.iter().enumerate() {
        let name = format!("table row r^2 = {rsq}");
        if !preamble_ok || records.len() <= i + 1 {
            out.push(CheckResult::new(&name, false, "table shape is wrong".into()));
            continue;
        }
        let rec = &records[i + 1];
        let got_lens: Vec<u64> = rec.orbits.iter().map(|o| o.orbit_length).collect();
        let mut ok = &rec.rsq == rsq && &got_lens == lens && rec.a_exact.as_ref() == Some(a);
        ok &= (rec.orbits[0].s - rsq.conj_f64().sqrt()).abs() < 1e-12;
        ok &= frequency_module_member(a);
        if let Some(f) = anchor {
            ok &= rec.orbits[0].f_exact.as_ref() == Some(f);
        }
        let detail = if ok {
            format!("c = {}, a = {} exactly", rec.c, a)
        } else {
            "does not match the hand-derived record".into()
        };
        out.push(CheckResult::new(&name, ok, detail));
    }
    Ok(out)
}

/// Every averaged value with r at most `rmax` lies in the doubled ring.
pub fn check_doubled_module(rmax: f64) -> Result<CheckResult, Error> {
    let records = shelling_table(&System::AmmannBeenker, rmax)?;
    let shells: Vec<_> = records.iter().filter(|r| !r.rsq.is_zero()).collect();
    let mut ok = !shells.is_empty();
    let mut detail = format!("{} values up to r = {rmax} lie in 2Z[sqrt2]", shells.len());
    for rec in &shells {
        if !frequency_module_member(rec.a_exact.as_ref().expect("octagonal values are exact")) {
            ok = false;
            detail = format!("fails at r^2 = {}", rec.rsq);
            break;
        }
    }
    Ok(CheckResult::new("values lie in 2Z[sqrt2]", ok, detail))
}

// ---------------------------------------------------------------------------
// Central shell counts.
// ---------------------------------------------------------------------------

/// All totally positive elements of the ring with both embeddings at most
/// `bound`, in a deterministic order.
fn totally_positive_up_to(basis: Basis, bound: f64) -> Vec<QuadInt> {
    let span = (2.0 * bound).ceil() as i64;
    let mut out = Vec::new();
    for a in -span..=span {
        for b in -span..=span {
            let x = QuadInt::from_i64s(a, b, basis);
            if x.is_totally_positive() && x.to_f64() <= bound && x.conj_f64() <= bound {
                out.push(x);
            }
        }
    }
    out
}

/// Counting formula vs character sum vs geometric enumeration on every
/// shell with both embeddings at most `bound`, for all three rings.
pub fn suite_central(bound: f64) -> Result<Vec<CheckResult>, Error> {
    let mut out = Vec::new();
    for (basis, n) in [(Basis::Rt2, 8), (Basis::Rt3, 12), (Basis::Tau, 5)] {
        let cases = totally_positive_up_to(basis, bound);
        let mut ok = true;
        let mut detail = String::new();
        for rsq in &cases {
            let count = central_count(rsq, n)?;
            let chars = character_sum(rsq, n)?;
            let shell = enumerate_shell(rsq, n)?.count() as u64;
            if count != chars || count != shell {
                ok = false;
                detail = format!(
                    "r^2 = {rsq}: formula {count}, characters {chars}, enumeration {shell}"
                );
                break;
            }
        }
        if ok {
            detail = format!("{} shells, three routes agree", cases.len());
        }
        out.push(CheckResult::new(
            &format!("central counts, n = {n}"),
            ok,
            detail,
        ));
    }
    Ok(out)
}

/// Galois and unit invariance of the central count on seeded random shells.
pub fn suite_central_invariance(instances: u32, seed: u64) -> Result<Vec<CheckResult>, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut galois_ok = true;
    let mut unit_ok = true;
    let mut detail = String::new();
    for _ in 0..instances {
        let (basis, n) = match rng.random_range(0..3u8) {
            0 => (Basis::Rt2, 8),
            1 => (Basis::Rt3, 12),
            _ => (Basis::Tau, 5),
        };
        let a = rng.random_range(-40i64..=40);
        let b = rng.random_range(-25i64..=25);
        let rsq = QuadInt::from_i64s(a, b, basis);
        let count = central_count(&rsq, n)?;
        if central_count(&rsq.conjugate(), n)? != count {
            galois_ok = false;
            detail = format!("conjugate of {rsq} differs");
            break;
        }
        // The squared modulus of any unit of the cyclotomic ring is a
        // totally positive unit of the subring; scaling by it fixes c.
        let u = basis.totally_positive_unit();
        let k = rng.random_range(0..3u32);
        let scaled = &rsq * &u.pow(k);
        if central_count(&scaled, n)? != count {
            unit_ok = false;
            detail = format!("unit multiple of {rsq} differs");
            break;
        }
    }
    Ok(vec![
        CheckResult::new(
            "galois invariance",
            galois_ok,
            if galois_ok {
                format!("{instances} random shells")
            } else {
                detail.clone()
            },
        ),
        CheckResult::new(
            "unit invariance",
            unit_ok,
            if unit_ok {
                format!("{instances} random shells")
            } else {
                detail
            },
        ),
    ])
}

// ---------------------------------------------------------------------------
// Covariograms.
// ---------------------------------------------------------------------------

/// Closed forms vs quadrature, the planar formula, exact branch continuity,
/// the radial anchor, Monte Carlo agreement, and the disk factorisation.
pub fn suite_covariogram(seed: u64) -> Result<Vec<CheckResult>, Error> {
    let mut out = Vec::new();

    let mut max_dev = 0.0f64;
    for dim in 1..=10 {
        for j in 0..50 {
            let s = 2.0 * j as f64 / 50.0;
            let closed = ball_covariogram(dim, 1.0, s)?;
            let quad = ball_covariogram_quadrature(dim, 1.0, s)?;
            max_dev = max_dev.max((closed - quad).abs());
        }
    }
    out.push(CheckResult::new(
        "radial closed forms vs quadrature",
        max_dev <= 1e-9,
        format!("dims 1..10, 50 offsets, max |diff| = {max_dev:.3e}"),
    ));

    let mut max_dev = 0.0f64;
    for j in 0..50 {
        let s = 2.0 * j as f64 / 50.0;
        max_dev = max_dev.max((ball_covariogram(2, 1.0, s)? - euclids_hat(s)).abs());
    }
    out.push(CheckResult::new(
        "planar closed form vs direct formula",
        max_dev <= 1e-12,
        format!("50 offsets, max |diff| = {max_dev:.3e}"),
    ));

    out.push(branch_boundary_check());

    let mut max_dev = 0.0f64;
    let mut idx = 0;
    for i in 0..5i64 {
        for j in 0..5i64 {
            let x = QuadRat::from_i64s(2 * i + 1, 0, 4, Basis::Rt2);
            let y = QuadRat::from_i64s(2 * j + 1, 0, 8, Basis::Rt2);
            let exact = octagon_covariogram(&reduce_to_sector(&ExactPoint2 {
                u: x.clone(),
                v: y.clone(),
            }))
            .to_f64();
            let mc = covariogram_monte_carlo(
                &Window::Octagon,
                &[x.to_f64(), y.to_f64()],
                1_000_000,
                seed.wrapping_add(idx),
            )?;
            max_dev = max_dev.max((mc.estimate - exact).abs());
            idx += 1;
        }
    }
    out.push(CheckResult::new(
        "octagon exact vs Monte Carlo",
        max_dev <= 5e-3,
        format!("25 offsets, 1e6 samples, max |diff| = {max_dev:.3e}"),
    ));

    let mut anchor_ok = true;
    for radius in [0.5, 1.0, 2.0] {
        if (ball_covariogram(3, radius, radius)? - 5.0 / 16.0).abs() > 1e-15 {
            anchor_ok = false;
        }
    }
    out.push(CheckResult::new(
        "radial anchor f3(R; R) = 5/16",
        anchor_ok,
        "radii 1/2, 1, 2".into(),
    ));

    let system = System::DiskWindow { n: 8, radius: 1.0 };
    let radii = enumerate_radii(&system, 4.0)?;
    let mut max_dev = 0.0f64;
    let mut count = 0;
    for rsq in radii.iter().take(10) {
        let product = averaged_disk(8, 1.0, rsq)?.a_float;
        let direct = averaged_disk_direct(8, 1.0, rsq)?;
        max_dev = max_dev.max((product - direct).abs());
        count += 1;
    }
    out.push(CheckResult::new(
        "disk factorisation vs per-point sum",
        count == 10 && max_dev <= 1e-12,
        format!("{count} distances, max |diff| = {max_dev:.3e}"),
    ));

    Ok(out)
}

/// The two sides of each internal branch boundary of the octagon
/// covariogram, restated and compared exactly on boundary grids.
fn branch_boundary_check() -> CheckResult {
    let one = QuadRat::one(Basis::Rt2);
    let half = qr(1, 0, 2);
    let quarter = qr(1, 0, 4);
    let lam = qr(1, 1, 1);
    let lam_m2 = qr(-1, 1, 1);
    let case2 = |x: &QuadRat, y: &QuadRat| {
        &lam_m2 * (x + y) * x * &half + &lam * (&one - x) * &half + (&one - y) * &half
    };
    let case3 = |x: &QuadRat, y: &QuadRat| {
        &lam_m2 * (x * x - y * y) * &quarter - qr(0, 1, 2) * x + qr(3, 1, 4)
    };
    let case4 = |x: &QuadRat, y: &QuadRat| &lam_m2 * (x - y - &one) * y * &half - x * &half + &one;

    let mut ok = true;
    for j in 0..10i64 {
        let y = QuadRat::from_i64s(0, 2 * j, 38, Basis::Rt2);
        let x_mid = &one + &y;
        ok &= case3(&x_mid, &y) == case4(&x_mid, &y);
        let x_far = &lam - &y;
        ok &= case2(&x_far, &y) == case3(&x_far, &y);
    }
    CheckResult::new(
        "octagon branch continuity",
        ok,
        "20 boundary points, exact equality".into(),
    )
}

// ---------------------------------------------------------------------------
// Patch statistics.
// ---------------------------------------------------------------------------

/// Patch-based estimates against the exact values: the seven shortest
/// octagonal shells, two 1D shells, shrinking deviations with growing
/// patches, densities, and Monte Carlo reproducibility.
pub fn suite_empirical(cutoff: f64, seed: u64) -> Result<Vec<CheckResult>, Error> {
    let mut out = Vec::new();

    let patch = generate_patch(&System::AmmannBeenker, cutoff)?;
    let radii = enumerate_radii(&System::AmmannBeenker, 2.3)?;
    let mut max_dev = 0.0f64;
    for rsq in &radii {
        let report = empirical_averaged(&patch, rsq, default_margin(rsq))?;
        max_dev = max_dev.max(report.deviation.expect("reference is known"));
    }
    out.push(CheckResult::new(
        "octagonal patch estimates",
        max_dev <= 0.05,
        format!(
            "cutoff {cutoff}, {} points, 7 shells, max |dev| = {max_dev:.4}",
            patch.len()
        ),
    ));

    let density = patch.density();
    let target = (1.0 + 2.0f64.sqrt()) / 2.0;
    let density_dev = (density - target).abs() / target;
    out.push(CheckResult::new(
        "octagonal patch density",
        density_dev <= 0.01,
        format!("{density:.5} vs (1+sqrt2)/2, relative dev {density_dev:.4}"),
    ));

    // Per-shell deviations are not monotone (a small patch can land a
    // fluke), so the sharpening claim is on the worst case over the table.
    let mut worst = Vec::new();
    for scale in [0.5, 1.0, 2.0] {
        let p = if scale == 1.0 {
            None
        } else {
            Some(generate_patch(&System::AmmannBeenker, cutoff * scale)?)
        };
        let p = p.as_ref().unwrap_or(&patch);
        let mut max_dev = 0.0f64;
        for rsq in &radii {
            let report = empirical_averaged(p, rsq, default_margin(rsq))?;
            max_dev = max_dev.max(report.deviation.unwrap());
        }
        worst.push(max_dev);
    }
    let seq_ok = worst[0] > worst[1] && worst[1] > worst[2];
    let shown: Vec<String> = worst.iter().map(|d| format!("{d:.1e}")).collect();
    out.push(CheckResult::new(
        "estimates sharpen with patch size",
        seq_ok,
        format!("worst of 7 shells at half, full, double cutoff: {}", shown.join(" > ")),
    ));

    let fib_cutoff = 20.0 * cutoff;
    let fib = generate_patch(&System::Fibonacci, fib_cutoff)?;
    let mut max_dev = 0.0f64;
    for rsq in [
        QuadInt::from_i64s(1, 0, Basis::Tau),
        QuadInt::from_i64s(1, 1, Basis::Tau),
    ] {
        let report = empirical_averaged(&fib, &rsq, default_margin(&rsq))?;
        max_dev = max_dev.max(report.deviation.unwrap());
    }
    out.push(CheckResult::new(
        "chain patch estimates",
        max_dev <= 0.01,
        format!(
            "cutoff {fib_cutoff}, {} points, 2 shells, max |dev| = {max_dev:.4}",
            fib.len()
        ),
    ));

    let fib_density = fib.density();
    let fib_target = Basis::Tau.value_f64() / 5.0f64.sqrt();
    let fib_dev = (fib_density - fib_target).abs() / fib_target;
    out.push(CheckResult::new(
        "chain patch density",
        fib_dev <= 0.01,
        format!("{fib_density:.5} vs tau/sqrt5, relative dev {fib_dev:.4}"),
    ));

    let a = covariogram_monte_carlo(&Window::Octagon, &[0.6, 0.2], 200_000, seed)?;
    let b = covariogram_monte_carlo(&Window::Octagon, &[0.6, 0.2], 200_000, seed)?;
    out.push(CheckResult::new(
        "Monte Carlo reproducibility",
        a.estimate.to_bits() == b.estimate.to_bits(),
        format!("seed {seed}, identical bits"),
    ));

    Ok(out)
}

/// Every suite in order.
pub fn suite_all(bound: f64, cutoff: f64, seed: u64) -> Result<Vec<CheckResult>, Error> {
    let mut out = suite_table1()?;
    out.push(check_doubled_module(4.0)?);
    out.extend(suite_central(bound)?);
    out.extend(suite_central_invariance(1000, seed)?);
    out.extend(suite_covariogram(seed)?);
    out.extend(suite_empirical(cutoff, seed)?);
    Ok(out)
}
