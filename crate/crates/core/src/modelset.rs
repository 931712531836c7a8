//! Cut-and-project machinery: windows, finite patches of the projected
//! point sets, and the admissible distances of the module.
//!
//! A patch is the part of Λ(Ω) = {x ∈ L : x* ∈ Ω} inside a physical cutoff
//! ball. Candidates come from short-vector enumeration of a positive
//! definite blend of the physical and internal quadratic forms on the
//! module basis; membership is then decided exactly wherever the window has
//! an exact description (interval, octagon) and in floats for disk windows.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::fmt;

use rayon::prelude::*;

use crate::cyclotomic::CycInt;
use crate::enumerate::enumerate_quadratic_form;
use crate::error::Error;
use crate::quad::{Basis, QuadInt, QuadRat};
use crate::splitting::subring_of;
use crate::window::{
    fibonacci_window, interval_contains, octagon_circumradius_sq, octagon_contains, Window,
};

/// The supported cut-and-project systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum System {
    /// 1D chain over Z[τ] with the interval window [−1, τ−1).
    Fibonacci,
    /// Octagonal vertex set over Z[ξ₈] with the regular octagon window.
    AmmannBeenker,
    /// Planar set over Z[ξ_n] with an open disk window of the given radius.
    /// Only feeds the circular-window cross checks; membership is float.
    DiskWindow { n: u32, radius: f64 },
}

impl System {
    /// Dimension of the physical (and internal) space.
    pub fn dimension(&self) -> u32 {
        match self {
            System::Fibonacci => 1,
            _ => 2,
        }
    }

    /// Cyclotomic order for planar systems.
    pub fn cyclotomic_order(&self) -> Option<u32> {
        match self {
            System::Fibonacci => None,
            System::AmmannBeenker => Some(8),
            System::DiskWindow { n, .. } => Some(*n),
        }
    }

    /// Ring of the squared distances (the real subring of the module).
    pub fn basis(&self) -> Result<Basis, Error> {
        match self {
            System::Fibonacci => Ok(Basis::Tau),
            System::AmmannBeenker => Ok(Basis::Rt2),
            System::DiskWindow { n, .. } => subring_of(*n),
        }
    }

    pub fn label(&self) -> String {
        match self {
            System::Fibonacci => "fibonacci".into(),
            System::AmmannBeenker => "ammann_beenker".into(),
            System::DiskWindow { n, radius } => format!("disk_window(n={n},R={radius})"),
        }
    }

    fn convention(&self) -> &'static str {
        match self {
            System::Fibonacci => "interval half-open: lower endpoint in, upper endpoint out",
            System::AmmannBeenker => {
                "octagon half-open: strict on the four half-planes with outward normals \
                 at angles 0, pi/4, pi/2, 3pi/4; closed on the opposite four"
            }
            System::DiskWindow { .. } => "open disk, strict float test",
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// The window of a system.
pub fn window_of(system: &System) -> Window {
    match system {
        System::Fibonacci => fibonacci_window(),
        System::AmmannBeenker => Window::Octagon,
        System::DiskWindow { radius, .. } => Window::Ball {
            dim: 2,
            radius: *radius,
        },
    }
}

/// An element of the underlying module, exact.
///
/// Derived `Ord` gives the canonical patch order: real-embedding order for
/// the 1D module, lexicographic coefficient order for the planar ones.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModuleElement {
    Linear(QuadInt),
    Planar(CycInt),
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleElement::Linear(q) => q.fmt(f),
            ModuleElement::Planar(z) => z.fmt(f),
        }
    }
}

impl ModuleElement {
    /// Squared physical distance to the origin, exact in the real subring.
    pub fn norm_sq(&self) -> QuadInt {
        match self {
            ModuleElement::Linear(q) => q * q,
            ModuleElement::Planar(z) => z.modulus_sq(),
        }
    }

    /// Exact difference; both operands must come from the same module.
    pub fn sub(&self, other: &ModuleElement) -> ModuleElement {
        match (self, other) {
            (ModuleElement::Linear(a), ModuleElement::Linear(b)) => ModuleElement::Linear(a - b),
            (ModuleElement::Planar(a), ModuleElement::Planar(b)) => ModuleElement::Planar(a - b),
            _ => panic!("mixed module elements"),
        }
    }

    /// Exact sum; both operands must come from the same module.
    pub fn add(&self, other: &ModuleElement) -> ModuleElement {
        match (self, other) {
            (ModuleElement::Linear(a), ModuleElement::Linear(b)) => ModuleElement::Linear(a + b),
            (ModuleElement::Planar(a), ModuleElement::Planar(b)) => ModuleElement::Planar(a + b),
            _ => panic!("mixed module elements"),
        }
    }
}

/// One point of a patch: exact coordinates plus cached float embeddings.
/// The second component of `phys`/`internal` is 0 for 1D systems.
#[derive(Debug, Clone)]
pub struct Site {
    pub coords: ModuleElement,
    pub phys: [f64; 2],
    pub internal: [f64; 2],
}

/// A finite piece of the model set: every module point with physical length
/// at most `cutoff` whose star image lies in the window. Immutable after
/// construction; points are sorted canonically and duplicate-free.
#[derive(Debug, Clone)]
pub struct Patch {
    pub system: System,
    pub window: Window,
    pub cutoff: f64,
    /// Power e with star = (ξ ↦ ξ^e) for planar systems; `None` means the
    /// star map is the Galois conjugation of the real quadratic module.
    pub star_exponent: Option<u32>,
    pub convention: &'static str,
    pub sites: Vec<Site>,
}

impl Patch {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Points per unit length (1D) or unit area (2D) of the cut region.
    pub fn density(&self) -> f64 {
        let measure = match self.system.dimension() {
            1 => 2.0 * self.cutoff,
            _ => PI * self.cutoff * self.cutoff,
        };
        self.sites.len() as f64 / measure
    }
}

/// Weighted Gram matrix of the module basis: physical form over rp² plus
/// internal form over ri². Any point with |phys| ≤ rp and |int| ≤ ri has
/// form value ≤ 2, so enumerating the form to 2 covers the search box.
fn planar_box_gram(n: u32, rp: f64, ri: f64) -> Vec<Vec<f64>> {
    let e = CycInt::star_exponent(n) as f64;
    let mut gram = vec![vec![0.0; 4]; 4];
    for (i, row) in gram.iter_mut().enumerate() {
        for (j, g) in row.iter_mut().enumerate() {
            let d = i as f64 - j as f64;
            *g = (TAU * d / n as f64).cos() / (rp * rp)
                + (TAU * e * d / n as f64).cos() / (ri * ri);
        }
    }
    gram
}

fn linear_box_gram(rp: f64, ri: f64) -> Vec<Vec<f64>> {
    let tau = Basis::Tau.value_f64();
    let phys = [1.0, tau];
    let int = [1.0, 1.0 - tau];
    let mut gram = vec![vec![0.0; 2]; 2];
    for (i, row) in gram.iter_mut().enumerate() {
        for (j, g) in row.iter_mut().enumerate() {
            *g = phys[i] * phys[j] / (rp * rp) + int[i] * int[j] / (ri * ri);
        }
    }
    gram
}

fn planar_candidates(n: u32, rp: f64, ri: f64) -> Result<Vec<[i64; 4]>, Error> {
    let gram = planar_box_gram(n, rp, ri);
    let mut out = Vec::new();
    enumerate_quadratic_form(&gram, 2.0, &mut |x| {
        out.push([x[0], x[1], x[2], x[3]]);
    })?;
    Ok(out)
}

fn linear_candidates(rp: f64, ri: f64) -> Result<Vec<[i64; 2]>, Error> {
    let gram = linear_box_gram(rp, ri);
    let mut out = Vec::new();
    enumerate_quadratic_form(&gram, 2.0, &mut |x| {
        out.push([x[0], x[1]]);
    })?;
    Ok(out)
}

/// Exact window test for a planar star image.
fn planar_star_in_window(system: &System, z: &CycInt, rsq: &QuadInt) -> bool {
    match system {
        System::AmmannBeenker => {
            let star = z.star().exact_embed().expect("octagonal module embeds exactly");
            octagon_contains(&star)
        }
        // |z*|² is the conjugate of |z|² in the real subring.
        System::DiskWindow { radius, .. } => rsq.conj_f64() < radius * radius,
        System::Fibonacci => unreachable!("planar test on a 1D system"),
    }
}

/// All module points with |phys| ≤ cutoff whose star image lies in the
/// window, sorted canonically.
pub fn generate_patch(system: &System, cutoff: f64) -> Result<Patch, Error> {
    if !(cutoff > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "cutoff must be positive, got {cutoff}"
        )));
    }
    let window = window_of(system);
    let ri = window.circumradius();
    let cutoff_sq = cutoff * cutoff;

    let mut sites: Vec<Site> = match system {
        System::Fibonacci => {
            let lo = QuadRat::from_i64s(-1, 0, 1, Basis::Tau);
            let hi = QuadRat::from_i64s(-1, 1, 1, Basis::Tau);
            linear_candidates(cutoff, ri)?
                .into_par_iter()
                .filter_map(|[a, b]| {
                    let y = QuadInt::from_i64s(a, b, Basis::Tau);
                    let phys = y.to_f64();
                    if phys * phys > cutoff_sq {
                        return None;
                    }
                    let star = QuadRat::new(y.conjugate(), 1.into());
                    if !interval_contains(&lo, &hi, &star) {
                        return None;
                    }
                    let internal = y.conj_f64();
                    Some(Site {
                        coords: ModuleElement::Linear(y),
                        phys: [phys, 0.0],
                        internal: [internal, 0.0],
                    })
                })
                .collect()
        }
        _ => {
            let n = system.cyclotomic_order().expect("planar system");
            planar_candidates(n, cutoff, ri)?
                .into_par_iter()
                .filter_map(|c| {
                    let z = CycInt::from_i64s(c, n);
                    let rsq = z.modulus_sq();
                    if rsq.to_f64() > cutoff_sq {
                        return None;
                    }
                    if !planar_star_in_window(system, &z, &rsq) {
                        return None;
                    }
                    let phys = z.embed();
                    let internal = z.embed_internal();
                    Some(Site {
                        coords: ModuleElement::Planar(z),
                        phys,
                        internal,
                    })
                })
                .collect()
        }
    };
    sites.par_sort_unstable_by(|a, b| a.coords.cmp(&b.coords));
    debug_assert!(sites.windows(2).all(|w| w[0].coords != w[1].coords));

    Ok(Patch {
        system: *system,
        window,
        cutoff,
        star_exponent: system.cyclotomic_order().map(CycInt::star_exponent),
        convention: system.convention(),
        sites,
    })
}

/// Radius of the smallest origin-centred ball containing the support of the
/// window covariogram: differences whose star image falls outside it have
/// zero overlap volume and define no admissible distance.
fn covariogram_support_radius(system: &System) -> f64 {
    match system {
        // Interval of length τ: support is |t| < τ.
        System::Fibonacci => Basis::Tau.value_f64(),
        // Support of the octagon covariogram is the open doubled octagon.
        System::AmmannBeenker => 2.0 * octagon_circumradius_sq().sqrt(),
        System::DiskWindow { radius, .. } => 2.0 * radius,
    }
}

/// Positive-overlap test for a difference vector, exact where possible.
fn admissible(system: &System, elt: &ModuleElement, rsq: &QuadInt) -> bool {
    match (system, elt) {
        (System::Fibonacci, ModuleElement::Linear(y)) => {
            // f > 0 ⟺ |y*| < τ, decided in Z[τ].
            let tau = QuadInt::from_i64s(0, 1, Basis::Tau);
            let c = y.conjugate();
            let abs_c = if c.sign_exact() < 0 { -c } else { c };
            abs_c < tau
        }
        (System::AmmannBeenker, ModuleElement::Planar(z)) => {
            let star = z.star().exact_embed().expect("octagonal module embeds exactly");
            crate::covariogram::octagon_covariogram_positive(&crate::covariogram::reduce_to_sector(
                &star,
            ))
        }
        (System::DiskWindow { radius, .. }, ModuleElement::Planar(_)) => {
            rsq.conj_f64() < 4.0 * radius * radius
        }
        _ => panic!("system/element mismatch"),
    }
}

/// All squared distances r² = |y|² realised by module elements y with
/// 0 < |y| ≤ rmax and positive window overlap at y*, sorted by real
/// embedding (strictly increasing, each totally positive).
pub fn enumerate_radii(system: &System, rmax: f64) -> Result<Vec<QuadInt>, Error> {
    if !(rmax > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "rmax must be positive, got {rmax}"
        )));
    }
    let ri = covariogram_support_radius(system);
    let rmax_sq = rmax * rmax;
    let mut radii: BTreeSet<QuadInt> = BTreeSet::new();

    match system {
        System::Fibonacci => {
            for [a, b] in linear_candidates(rmax, ri)? {
                if a == 0 && b == 0 {
                    continue;
                }
                let y = QuadInt::from_i64s(a, b, Basis::Tau);
                let rsq = &y * &y;
                if rsq.to_f64() > rmax_sq {
                    continue;
                }
                if admissible(system, &ModuleElement::Linear(y), &rsq) {
                    radii.insert(rsq);
                }
            }
        }
        _ => {
            let n = system.cyclotomic_order().expect("planar system");
            for c in planar_candidates(n, rmax, ri)? {
                if c == [0; 4] {
                    continue;
                }
                let z = CycInt::from_i64s(c, n);
                let rsq = z.modulus_sq();
                if rsq.is_zero() || rsq.to_f64() > rmax_sq {
                    continue;
                }
                if admissible(system, &ModuleElement::Planar(z), &rsq) {
                    radii.insert(rsq);
                }
            }
        }
    }
    Ok(radii.into_iter().collect())
}

// ---------------------------------------------------------------------------
// Export.
// ---------------------------------------------------------------------------

fn window_label(w: &Window) -> String {
    match w {
        Window::Interval { lo, hi } => format!("interval [{lo}, {hi})"),
        Window::Ball { dim, radius } => format!("open ball, dim {dim}, radius {radius}"),
        Window::Octagon => "regular octagon, unit edge, edge midpoints on the axes".into(),
    }
}

fn star_label(p: &Patch) -> String {
    match p.star_exponent {
        Some(e) => format!("xi -> xi^{e}"),
        None => "galois conjugation".into(),
    }
}

/// CSV dump: exact coefficients first, float embeddings after.
pub fn patch_to_csv(p: &Patch) -> String {
    let mut out = String::new();
    match p.system.dimension() {
        1 => {
            out.push_str("a,b,phys,int\n");
            for s in &p.sites {
                let ModuleElement::Linear(q) = &s.coords else {
                    unreachable!("1D patch holds linear elements");
                };
                out.push_str(&format!("{},{},{},{}\n", q.a, q.b, s.phys[0], s.internal[0]));
            }
        }
        _ => {
            out.push_str("c0,c1,c2,c3,phys_x,phys_y,int_x,int_y\n");
            for s in &p.sites {
                let ModuleElement::Planar(z) = &s.coords else {
                    unreachable!("2D patch holds planar elements");
                };
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    z.coeffs[0],
                    z.coeffs[1],
                    z.coeffs[2],
                    z.coeffs[3],
                    s.phys[0],
                    s.phys[1],
                    s.internal[0],
                    s.internal[1]
                ));
            }
        }
    }
    out
}

/// JSON dump with a metadata header; exact coordinates as canonical text.
pub fn patch_to_json(p: &Patch) -> serde_json::Value {
    let points: Vec<serde_json::Value> = p
        .sites
        .iter()
        .map(|s| {
            serde_json::json!({
                "coords": s.coords.to_string(),
                "phys": &s.phys[..p.system.dimension() as usize],
                "int": &s.internal[..p.system.dimension() as usize],
            })
        })
        .collect();
    serde_json::json!({
        "schema_version": 1,
        "system": p.system.label(),
        "n": p.system.cyclotomic_order(),
        "window": window_label(&p.window),
        "star": star_label(p),
        "convention": p.convention,
        "cutoff": p.cutoff,
        "count": p.sites.len(),
        "points": points,
    })
}
