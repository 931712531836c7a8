//! Statistical oracles: shell counts read off finite patches and seeded
//! Monte Carlo volume estimates. Everything here is an independent check on
//! the exact machinery: distance matching uses module arithmetic with no
//! float thresholds, and all sampling is reproducible bit for bit from the
//! recorded seed regardless of thread count.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::averaged::averaged_shelling;
use crate::central::enumerate_shell;
use crate::error::Error;
use crate::modelset::{ModuleElement, Patch, System};
use crate::quad::QuadInt;
use crate::window::Window;

/// Outcome of one estimation run.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    /// What was estimated, human-readable.
    pub target: String,
    pub estimate: f64,
    pub exact_reference: Option<f64>,
    pub sample_size: u64,
    /// Patch boundary margin for averaged counts; 0 for Monte Carlo runs.
    pub margin_radius: f64,
    /// |estimate − exact_reference| when a reference is present.
    pub deviation: Option<f64>,
    pub rng_seed: Option<u64>,
}

impl EstimateReport {
    /// Attach a reference value and recompute the deviation.
    pub fn with_reference(mut self, reference: f64) -> Self {
        self.deviation = Some((self.estimate - reference).abs());
        self.exact_reference = Some(reference);
        self
    }
}

/// The shell of the module around 0 at an exact squared distance, as
/// translation vectors. For the 1D module this is the pair of square roots.
fn module_shell(system: &System, rsq: &QuadInt) -> Result<Vec<ModuleElement>, Error> {
    match system {
        System::Fibonacci => {
            let rec = crate::averaged::averaged_fibonacci(rsq)?;
            Ok(rec
                .orbits
                .iter()
                .flat_map(|o| match &o.representative {
                    ModuleElement::Linear(y) if !y.is_zero() => {
                        vec![ModuleElement::Linear(y.clone()), ModuleElement::Linear(-y)]
                    }
                    other => vec![other.clone()],
                })
                .collect())
        }
        _ => {
            let n = system.cyclotomic_order().expect("planar system");
            Ok(enumerate_shell(rsq, n)?
                .points
                .into_iter()
                .map(ModuleElement::Planar)
                .collect())
        }
    }
}

/// Exact shell counts around one centre of a patch: for every other patch
/// point, the squared distance is computed in the module and compared by
/// equality, so no float tolerance enters. Keys are the squared distances
/// with positive count and real embedding at most rmax².
///
/// Counts near the patch boundary are truncated by the cutoff; keep
/// rmax well below `cutoff − |centre|` when reading them as shell numbers.
pub fn empirical_central(
    patch: &Patch,
    center: &ModuleElement,
    rmax: f64,
) -> Result<BTreeMap<QuadInt, u64>, Error> {
    if !patch.sites.iter().any(|s| &s.coords == center) {
        return Err(Error::InvalidArgument(format!(
            "centre {center} is not a point of the patch"
        )));
    }
    let rmax_sq = rmax * rmax;
    let mut counts = BTreeMap::new();
    for site in &patch.sites {
        if &site.coords == center {
            continue;
        }
        let rsq = site.coords.sub(center).norm_sq();
        if rsq.to_f64() <= rmax_sq {
            *counts.entry(rsq).or_insert(0u64) += 1;
        }
    }
    Ok(counts)
}

/// Patch-averaged shell count at one squared distance, compared against the
/// exact value.
///
/// Centres are restricted to |centre| ≤ cutoff − margin so that every
/// counted shell lies inside the patch; a margin below the shell radius
/// would bias the estimate and is rejected. Membership tests are exact set
/// lookups against the patch.
pub fn empirical_averaged(
    patch: &Patch,
    rsq: &QuadInt,
    margin: f64,
) -> Result<EstimateReport, Error> {
    let r = rsq.to_f64().max(0.0).sqrt();
    if margin < r {
        return Err(Error::MarginTooSmall {
            margin,
            needed: r,
        });
    }
    if patch.cutoff <= margin {
        return Err(Error::MarginTooSmall {
            margin,
            needed: patch.cutoff,
        });
    }
    let shell = module_shell(&patch.system, rsq)?;
    let members: HashSet<&ModuleElement> = patch.sites.iter().map(|s| &s.coords).collect();
    let keep_sq = (patch.cutoff - margin) * (patch.cutoff - margin);
    let centers: Vec<&ModuleElement> = patch
        .sites
        .iter()
        .filter(|s| s.phys[0] * s.phys[0] + s.phys[1] * s.phys[1] <= keep_sq)
        .map(|s| &s.coords)
        .collect();
    if centers.is_empty() {
        return Err(Error::InvalidArgument(
            "margin leaves no interior centres".into(),
        ));
    }
    let hits: u64 = centers
        .par_iter()
        .map(|center| {
            shell
                .iter()
                .filter(|z| members.contains(&center.add(z)))
                .count() as u64
        })
        .sum();
    let estimate = hits as f64 / centers.len() as f64;
    let exact = averaged_shelling(&patch.system, rsq)?.a_float;
    Ok(EstimateReport {
        target: format!("averaged shell count, {} system, r^2 = {}", patch.system, rsq),
        estimate,
        exact_reference: Some(exact),
        sample_size: centers.len() as u64,
        margin_radius: margin,
        deviation: Some((estimate - exact).abs()),
        rng_seed: None,
    })
}

/// Convenience margin guaranteeing full shells for every counted centre.
pub fn default_margin(rsq: &QuadInt) -> f64 {
    rsq.to_f64().max(0.0).sqrt() + 1.0
}

const CHUNK: u64 = 1 << 16;

fn bounding_box(w: &Window) -> Vec<(f64, f64)> {
    match w {
        Window::Interval { lo, hi } => vec![(lo.to_f64(), hi.to_f64())],
        Window::Ball { dim, radius } => vec![(-radius, *radius); *dim as usize],
        Window::Octagon => {
            let rc = crate::window::octagon_circumradius_sq().sqrt();
            vec![(-rc, rc); 2]
        }
    }
}

/// Monte Carlo covariogram of a window: the fraction of window points that
/// stay inside after translating by `offset`.
///
/// Rejection sampling over the bounding box with one ChaCha stream per
/// 2¹⁶-sample chunk, all keyed to the given seed; integer tallies are
/// reduced over chunks, so the result is independent of the thread count.
pub fn covariogram_monte_carlo(
    w: &Window,
    offset: &[f64],
    samples: u64,
    seed: u64,
) -> Result<EstimateReport, Error> {
    let dim = w.dimension() as usize;
    if offset.len() != dim {
        return Err(Error::BadDimension(offset.len() as u32));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let bounds = bounding_box(w);
    let chunks = samples.div_ceil(CHUNK);
    let (pair_hits, base_hits) = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let len = CHUNK.min(samples - chunk * CHUNK);
            let mut point = [0.0f64; 4];
            let mut shifted = [0.0f64; 4];
            let mut pair = 0u64;
            let mut base = 0u64;
            for _ in 0..len {
                for (i, (lo, hi)) in bounds.iter().enumerate() {
                    point[i] = rng.random_range(*lo..*hi);
                    shifted[i] = point[i] + offset[i];
                }
                if w.contains_f64(&point[..dim]) {
                    base += 1;
                    if w.contains_f64(&shifted[..dim]) {
                        pair += 1;
                    }
                }
            }
            (pair, base)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let estimate = if base_hits == 0 {
        0.0
    } else {
        pair_hits as f64 / base_hits as f64
    };
    Ok(EstimateReport {
        target: format!("covariogram Monte Carlo, window {w:?}, offset {offset:?}"),
        estimate,
        exact_reference: None,
        sample_size: samples,
        margin_radius: 0.0,
        deviation: None,
        rng_seed: Some(seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::central::central_count;
    use crate::modelset::generate_patch;
    use crate::quad::Basis;
    use crate::window::fibonacci_window;

    fn qi(a: i64, b: i64, basis: Basis) -> QuadInt {
        QuadInt::from_i64s(a, b, basis)
    }

    #[test]
    fn central_counts_at_the_origin() {
        let patch = generate_patch(&System::AmmannBeenker, 50.0).unwrap();
        let origin = ModuleElement::Planar(crate::cyclotomic::CycInt::zero(8));
        let counts = empirical_central(&patch, &origin, 3.0).unwrap();
        // All eight unit stars sit strictly inside the window.
        assert_eq!(counts[&qi(1, 0, Basis::Rt2)], 8);
        // An empty module shell stays empty in any patch.
        assert!(!counts.contains_key(&qi(7, 0, Basis::Rt2)));
        // Window filtering only removes points.
        for (rsq, count) in &counts {
            assert!(*count <= central_count(rsq, 8).unwrap(), "{rsq}");
        }
    }

    #[test]
    fn central_requires_a_patch_point() {
        let patch = generate_patch(&System::AmmannBeenker, 5.0).unwrap();
        let outside = ModuleElement::Planar(crate::cyclotomic::CycInt::from_i64s(
            [100, 0, 0, 0],
            8,
        ));
        assert!(empirical_central(&patch, &outside, 1.0).is_err());
    }

    #[test]
    fn fibonacci_neighbour_counts() {
        let patch = generate_patch(&System::Fibonacci, 30.0).unwrap();
        let one = qi(1, 0, Basis::Tau);
        for site in &patch.sites {
            let phys = site.phys[0];
            if phys.abs() > 25.0 {
                continue;
            }
            let counts = empirical_central(&patch, &site.coords, 1.1).unwrap();
            let at_one = counts.get(&one).copied().unwrap_or(0);
            assert!(at_one <= 2, "at most two neighbours at unit distance");
        }
    }

    #[test]
    fn averaged_estimates_converge() {
        let rsq = qi(2, -1, Basis::Rt2);
        let exact = 4.0 - 2.0 * 2.0f64.sqrt();
        let margin = default_margin(&rsq);
        let mut devs = Vec::new();
        for cutoff in [25.0, 50.0, 100.0] {
            let patch = generate_patch(&System::AmmannBeenker, cutoff).unwrap();
            let report = empirical_averaged(&patch, &rsq, margin).unwrap();
            assert_eq!(report.exact_reference, Some(exact));
            devs.push(report.deviation.unwrap());
        }
        assert!(devs[2] < 0.05, "{devs:?}");
        assert!(devs[0] > devs[2], "{devs:?}");
    }

    #[test]
    fn fibonacci_averaged_estimate() {
        let patch = generate_patch(&System::Fibonacci, 500.0).unwrap();
        let rsq = qi(1, 0, Basis::Tau);
        let report = empirical_averaged(&patch, &rsq, default_margin(&rsq)).unwrap();
        let exact = 4.0 - 2.0 * Basis::Tau.value_f64();
        assert!((report.estimate - exact).abs() < 0.02, "{}", report.estimate);
    }

    #[test]
    fn margin_is_enforced() {
        let patch = generate_patch(&System::AmmannBeenker, 10.0).unwrap();
        let rsq = qi(4, 0, Basis::Rt2);
        assert!(matches!(
            empirical_averaged(&patch, &rsq, 1.0),
            Err(Error::MarginTooSmall { .. })
        ));
        assert!(matches!(
            empirical_averaged(&patch, &rsq, 25.0),
            Err(Error::MarginTooSmall { .. })
        ));
    }

    #[test]
    fn monte_carlo_identity_offset() {
        let report =
            covariogram_monte_carlo(&Window::Octagon, &[0.0, 0.0], 100_000, 11).unwrap();
        assert!((report.estimate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_matches_interval_tent() {
        let w = fibonacci_window();
        let tau = Basis::Tau.value_f64();
        let report = covariogram_monte_carlo(&w, &[0.5], 400_000, 3).unwrap();
        let exact = 1.0 - 0.5 / tau;
        assert!((report.estimate - exact).abs() < 5e-3, "{}", report.estimate);
    }

    #[test]
    fn monte_carlo_matches_ball_closed_form() {
        let w = Window::Ball { dim: 3, radius: 1.0 };
        let report = covariogram_monte_carlo(&w, &[1.0, 0.0, 0.0], 1_000_000, 5).unwrap();
        assert!((report.estimate - 5.0 / 16.0).abs() < 5e-3, "{}", report.estimate);
    }

    #[test]
    fn monte_carlo_is_reproducible_and_thread_independent() {
        let run = || {
            covariogram_monte_carlo(&Window::Octagon, &[0.7, 0.3], 300_000, 42)
                .unwrap()
                .estimate
        };
        let a = run();
        let b = run();
        assert_eq!(a.to_bits(), b.to_bits());
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(run);
        assert_eq!(a.to_bits(), single.to_bits());
    }

    #[test]
    fn report_serialises_with_reference() {
        let report = covariogram_monte_carlo(&Window::Octagon, &[0.5, 0.0], 10_000, 1)
            .unwrap()
            .with_reference(0.5);
        assert!(report.deviation.is_some());
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains("\"rng_seed\":1"));
    }
}
