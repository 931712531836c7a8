//! Averaged shelling numbers: the per-shell covariogram sums for the
//! supported systems, shelling tables over a radius range, and the parity
//! check on the octagonal values.
//!
//! For a shell V(r²) of the module, the averaged count weights every
//! difference vector y by the overlap volume of the window with its
//! translate by y*. The octagonal and interval windows are evaluated
//! exactly; disk windows factor through the radial covariogram and stay in
//! floats. Exact values never depend on the half-open boundary convention
//! of the window, since positive overlap is an interior-volume notion.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;

use crate::central::{central_count, enumerate_shell};
use crate::covariogram::{
    ball_covariogram, interval_covariogram, octagon_covariogram, reduce_to_sector, SectorPoint,
};
use crate::error::Error;
use crate::modelset::{enumerate_radii, ModuleElement, System};
use crate::quad::{Basis, QuadInt, QuadRat};

/// One symmetry orbit of a shell with its covariogram weight.
#[derive(Debug, Clone)]
pub struct OrbitData {
    /// Canonical orbit member: least coefficient tuple (planar) or the
    /// positive root (linear).
    pub representative: ModuleElement,
    pub orbit_length: u64,
    /// Internal-space distance |y*|, the same for every member.
    pub s: f64,
    /// Sector fold of the representative's star image (octagonal only).
    pub sector: Option<SectorPoint>,
    pub f_exact: Option<QuadRat>,
    pub f_float: f64,
}

/// A shell of the module with its central count and averaged count.
#[derive(Debug, Clone)]
pub struct ShellRecord {
    pub rsq: QuadInt,
    pub r: f64,
    pub c: u64,
    pub orbits: Vec<OrbitData>,
    /// Exact averaged count where the window admits one (octagon, interval).
    pub a_exact: Option<QuadRat>,
    pub a_float: f64,
}

fn empty_record(rsq: &QuadInt) -> ShellRecord {
    ShellRecord {
        rsq: rsq.clone(),
        r: rsq.to_f64().max(0.0).sqrt(),
        c: 0,
        orbits: Vec::new(),
        a_exact: Some(QuadRat::zero(rsq.basis)),
        a_float: 0.0,
    }
}

fn check_record(rec: &ShellRecord) {
    let total: u64 = rec.orbits.iter().map(|o| o.orbit_length).sum();
    assert_eq!(total, rec.c, "orbit lengths must add up to the shell count");
    if let Some(a) = &rec.a_exact {
        let c = QuadRat::from_i64s(rec.c as i64, 0, 1, a.num.basis);
        assert!(a.sign_exact() >= 0 && (&c - a).sign_exact() >= 0, "0 ≤ a ≤ c");
    } else {
        assert!(rec.a_float >= 0.0 && rec.a_float <= rec.c as f64 + 1e-9);
    }
}

/// Partitions a shell into orbits of the point symmetry group, least
/// coefficient tuple first within and across orbits.
fn orbit_partition(points: &[crate::cyclotomic::CycInt]) -> Vec<(crate::cyclotomic::CycInt, u64)> {
    let mut remaining: BTreeSet<_> = points.iter().cloned().collect();
    assert_eq!(remaining.len(), points.len(), "shell points are distinct");
    let mut orbits = Vec::new();
    while let Some(rep) = remaining.iter().next().cloned() {
        let orbit = rep.dn_orbit();
        for w in &orbit {
            assert!(remaining.remove(w), "orbit member missing from its shell");
        }
        orbits.push((rep, orbit.len() as u64));
    }
    orbits
}

/// Averaged count for the octagonal system, exact over Q(√2).
///
/// Enumerates the shell, folds one representative per orbit into the
/// fundamental sector, and sums orbit length times covariogram value.
/// Non-totally-positive input yields the empty record rather than an error.
pub fn averaged_ab(rsq: &QuadInt) -> Result<ShellRecord, Error> {
    let shell = enumerate_shell(rsq, 8)?;
    let c = shell.count() as u64;
    debug_assert_eq!(c, central_count(rsq, 8)?);
    if c == 0 {
        return Ok(empty_record(rsq));
    }
    let s = rsq.conj_f64().max(0.0).sqrt();
    let mut a = QuadRat::zero(Basis::Rt2);
    let mut orbits = Vec::new();
    for (rep, len) in orbit_partition(&shell.points) {
        let star = rep.star().exact_embed().expect("octagonal module embeds exactly");
        let sector = reduce_to_sector(&star);
        let f = octagon_covariogram(&sector);
        a = &a + &(&QuadRat::from_i64s(len as i64, 0, 1, Basis::Rt2) * &f);
        orbits.push(OrbitData {
            representative: ModuleElement::Planar(rep),
            orbit_length: len,
            s,
            sector: Some(sector),
            f_float: f.to_f64(),
            f_exact: Some(f),
        });
    }
    let rec = ShellRecord {
        rsq: rsq.clone(),
        r: rsq.to_f64().max(0.0).sqrt(),
        c,
        orbits,
        a_float: a.to_f64(),
        a_exact: Some(a),
    };
    check_record(&rec);
    Ok(rec)
}

/// Square root in Z[τ] with positive embedding, if one exists: the two real
/// square roots fix the coefficients, which are then verified exactly.
fn sqrt_in_tau(rsq: &QuadInt) -> Option<QuadInt> {
    let v = rsq.to_f64();
    let w = rsq.conj_f64();
    if v <= 0.0 || w <= 0.0 {
        return None;
    }
    let r = v.sqrt();
    for cj in [w.sqrt(), -w.sqrt()] {
        let b = (r - cj) / 5.0f64.sqrt();
        let a = r - b * Basis::Tau.value_f64();
        let (ar, br) = (a.round(), b.round());
        if ar.abs() > 9e15 || br.abs() > 9e15 {
            continue;
        }
        let y = QuadInt::from_i64s(ar as i64, br as i64, Basis::Tau);
        if &(&y * &y) == rsq {
            return Some(if y.sign_exact() > 0 { y } else { -y });
        }
    }
    None
}

/// Averaged count for the 1D chain, exact over Q(τ).
///
/// A nonzero shell is a pair ±y; both members carry the tent covariogram of
/// the window interval evaluated at y*. Squared distances that are not
/// squares in Z[τ] yield the empty record.
pub fn averaged_fibonacci(rsq: &QuadInt) -> Result<ShellRecord, Error> {
    if rsq.basis != Basis::Tau {
        return Err(Error::UnsupportedRing(format!(
            "expected an element of Z[tau], got basis {:?}",
            rsq.basis
        )));
    }
    let tau_len = QuadRat::from_i64s(0, 1, 1, Basis::Tau);
    if rsq.is_zero() {
        let f = QuadRat::one(Basis::Tau);
        return Ok(ShellRecord {
            rsq: rsq.clone(),
            r: 0.0,
            c: 1,
            orbits: vec![OrbitData {
                representative: ModuleElement::Linear(QuadInt::zero(Basis::Tau)),
                orbit_length: 1,
                s: 0.0,
                sector: None,
                f_float: 1.0,
                f_exact: Some(f.clone()),
            }],
            a_exact: Some(f),
            a_float: 1.0,
        });
    }
    let Some(y) = sqrt_in_tau(rsq) else {
        return Ok(empty_record(rsq));
    };
    let star = QuadRat::from_int(y.conjugate());
    let f = interval_covariogram(&tau_len, &star);
    let a = &QuadRat::from_i64s(2, 0, 1, Basis::Tau) * &f;
    let rec = ShellRecord {
        rsq: rsq.clone(),
        r: rsq.to_f64().sqrt(),
        c: 2,
        orbits: vec![OrbitData {
            representative: ModuleElement::Linear(y),
            orbit_length: 2,
            s: star.to_f64().abs(),
            sector: None,
            f_float: f.to_f64(),
            f_exact: Some(f),
        }],
        a_float: a.to_f64(),
        a_exact: Some(a),
    };
    check_record(&rec);
    Ok(rec)
}

/// Averaged count for a disk window: the central count times the radial
/// covariogram at the single internal distance of the shell.
pub fn averaged_disk(n: u32, radius: f64, rsq: &QuadInt) -> Result<ShellRecord, Error> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "window radius must be positive, got {radius}"
        )));
    }
    let shell = enumerate_shell(rsq, n)?;
    let c = shell.count() as u64;
    debug_assert_eq!(c, central_count(rsq, n)?);
    if c == 0 {
        let mut rec = empty_record(rsq);
        rec.a_exact = None;
        return Ok(rec);
    }
    let s = rsq.conj_f64().max(0.0).sqrt();
    let f = ball_covariogram(2, radius, s)?;
    let orbits = orbit_partition(&shell.points)
        .into_iter()
        .map(|(rep, len)| OrbitData {
            representative: ModuleElement::Planar(rep),
            orbit_length: len,
            s,
            sector: None,
            f_exact: None,
            f_float: f,
        })
        .collect();
    let rec = ShellRecord {
        rsq: rsq.clone(),
        r: rsq.to_f64().max(0.0).sqrt(),
        c,
        orbits,
        a_exact: None,
        a_float: c as f64 * f,
    };
    check_record(&rec);
    Ok(rec)
}

/// Independent route to the disk-window value: per-point covariogram sum
/// with each internal distance taken from the point's own star embedding.
pub fn averaged_disk_direct(n: u32, radius: f64, rsq: &QuadInt) -> Result<f64, Error> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "window radius must be positive, got {radius}"
        )));
    }
    let shell = enumerate_shell(rsq, n)?;
    let mut sum = 0.0;
    for z in &shell.points {
        let y = z.embed_internal();
        let s = (y[0] * y[0] + y[1] * y[1]).sqrt();
        sum += ball_covariogram(2, radius, s)?;
    }
    Ok(sum)
}

/// Dispatch on the system.
pub fn averaged_shelling(system: &System, rsq: &QuadInt) -> Result<ShellRecord, Error> {
    match system {
        System::Fibonacci => averaged_fibonacci(rsq),
        System::AmmannBeenker => averaged_ab(rsq),
        System::DiskWindow { n, radius } => averaged_disk(*n, *radius, rsq),
    }
}

/// Coefficient table of the shelling generating series: one record per
/// admissible distance up to rmax, preceded by the origin record a(0) = 1.
pub fn shelling_table(system: &System, rmax: f64) -> Result<Vec<ShellRecord>, Error> {
    let radii = enumerate_radii(system, rmax)?;
    let zero = QuadInt::zero(system.basis()?);
    let mut records = vec![averaged_shelling(system, &zero)?];
    let rest: Result<Vec<_>, Error> = radii
        .par_iter()
        .map(|rsq| averaged_shelling(system, rsq))
        .collect();
    records.extend(rest?);
    Ok(records)
}

/// Membership in the doubled coefficient module 2Z[√2]: denominator one and
/// both coefficients even.
pub fn frequency_module_member(v: &QuadRat) -> bool {
    assert_eq!(v.num.basis, Basis::Rt2, "parity check lives over Z[sqrt 2]");
    let two = BigInt::from(2);
    v.den.is_one() && v.num.a.is_multiple_of(&two) && v.num.b.is_multiple_of(&two)
}

// ---------------------------------------------------------------------------
// Export.
// ---------------------------------------------------------------------------

fn freq_column(rec: &ShellRecord) -> Option<bool> {
    match &rec.a_exact {
        Some(a) if a.num.basis == Basis::Rt2 && !rec.rsq.is_zero() => {
            Some(frequency_module_member(a))
        }
        _ => None,
    }
}

fn orbit_lengths(rec: &ShellRecord) -> String {
    rec.orbits
        .iter()
        .map(|o| o.orbit_length.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn shell_s(rec: &ShellRecord) -> f64 {
    rec.orbits.first().map_or(0.0, |o| o.s)
}

/// CSV rows in table order; exact values as canonical re-parsable text.
pub fn table_to_csv(records: &[ShellRecord]) -> String {
    let mut out = String::from("r_sq,r,s,c,orbit_lengths,a_exact,a_float,freq_module_member\n");
    for rec in records {
        let a_exact = rec.a_exact.as_ref().map_or(String::new(), |a| a.to_string());
        let freq = freq_column(rec).map_or(String::new(), |b| b.to_string());
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            rec.rsq,
            rec.r,
            shell_s(rec),
            rec.c,
            orbit_lengths(rec),
            a_exact,
            rec.a_float,
            freq,
        ));
    }
    out
}

/// JSON mirror of the table with per-orbit detail.
pub fn table_to_json(system: &System, rmax: Option<f64>, records: &[ShellRecord]) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = records
        .iter()
        .map(|rec| {
            let orbits: Vec<serde_json::Value> = rec
                .orbits
                .iter()
                .map(|o| {
                    serde_json::json!({
                        "representative": o.representative.to_string(),
                        "orbit_length": o.orbit_length,
                        "s": o.s,
                        "f_exact": o.f_exact.as_ref().map(|f| f.to_string()),
                        "f_float": o.f_float,
                    })
                })
                .collect();
            serde_json::json!({
                "r_sq": rec.rsq.to_string(),
                "r": rec.r,
                "s": shell_s(rec),
                "c": rec.c,
                "orbits": orbits,
                "a_exact": rec.a_exact.as_ref().map(|a| a.to_string()),
                "a_float": rec.a_float,
                "freq_module_member": freq_column(rec),
            })
        })
        .collect();
    serde_json::json!({
        "schema_version": 1,
        "system": system.to_string(),
        "rmax": rmax,
        "records": rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(a: i64, b: i64, basis: Basis) -> QuadInt {
        QuadInt::from_i64s(a, b, basis)
    }

    fn qr(a: i64, b: i64, den: i64, basis: Basis) -> QuadRat {
        QuadRat::from_i64s(a, b, den, basis)
    }

    #[test]
    fn octagonal_table_matches_hand_values() {
        let records = shelling_table(&System::AmmannBeenker, 2.3).unwrap();
        assert_eq!(records.len(), 8);
        assert_eq!(records[0].rsq, qi(0, 0, Basis::Rt2));
        assert_eq!(records[0].c, 1);
        assert_eq!(records[0].a_exact, Some(qr(1, 0, 1, Basis::Rt2)));

        // (r², orbit lengths, a) for the seven shortest distances.
        let expected: [(QuadInt, Vec<u64>, QuadRat); 7] = [
            (qi(2, -1, Basis::Rt2), vec![8], qr(4, -2, 1, Basis::Rt2)),
            (qi(1, 0, Basis::Rt2), vec![8], qr(4, 0, 1, Basis::Rt2)),
            (qi(2, 0, Basis::Rt2), vec![8], qr(-6, 6, 1, Basis::Rt2)),
            (qi(3, 0, Basis::Rt2), vec![16], qr(20, -12, 1, Basis::Rt2)),
            (qi(2, 1, Basis::Rt2), vec![8], qr(36, -22, 1, Basis::Rt2)),
            (qi(4, 0, Basis::Rt2), vec![8], qr(-2, 2, 1, Basis::Rt2)),
            (qi(5, 0, Basis::Rt2), vec![16], qr(-56, 40, 1, Basis::Rt2)),
        ];
        for (rec, (rsq, lens, a)) in records[1..].iter().zip(&expected) {
            assert_eq!(&rec.rsq, rsq);
            let got: Vec<u64> = rec.orbits.iter().map(|o| o.orbit_length).collect();
            assert_eq!(&got, lens, "{rsq}");
            assert_eq!(rec.a_exact.as_ref(), Some(a), "{rsq}");
            let s_expected = rsq.conj_f64().sqrt();
            assert!((shell_s(rec) - s_expected).abs() < 1e-14);
        }

        // Anchored covariogram values behind rows 1 and 2.
        assert_eq!(
            records[1].orbits[0].f_exact,
            Some(qr(2, -1, 4, Basis::Rt2))
        );
        assert_eq!(records[2].orbits[0].f_exact, Some(qr(1, 0, 2, Basis::Rt2)));
    }

    #[test]
    fn octagonal_empty_and_invalid_shells() {
        let rec = averaged_ab(&qi(7, 0, Basis::Rt2)).unwrap();
        assert_eq!(rec.c, 0);
        assert_eq!(rec.a_exact, Some(QuadRat::zero(Basis::Rt2)));
        assert!(rec.orbits.is_empty());

        let rec = averaged_ab(&qi(1, -1, Basis::Rt2)).unwrap();
        assert_eq!((rec.c, rec.a_float), (0, 0.0));
    }

    #[test]
    fn orbit_length_eight_exactly_on_mirror_lines() {
        for rsq in enumerate_radii(&System::AmmannBeenker, 3.0).unwrap() {
            let rec = averaged_ab(&rsq).unwrap();
            for orbit in &rec.orbits {
                assert!(orbit.orbit_length == 8 || orbit.orbit_length == 16);
                let sector = orbit.sector.as_ref().unwrap();
                let tan_pi8 = qr(-1, 1, 1, Basis::Rt2);
                let on_mirror = sector.y().is_zero()
                    || sector.y() == &(sector.x() * &tan_pi8);
                assert_eq!(orbit.orbit_length == 8, on_mirror, "{rsq}");
            }
        }
    }

    #[test]
    fn fibonacci_values() {
        let one = averaged_fibonacci(&qi(1, 0, Basis::Tau)).unwrap();
        assert_eq!(one.a_exact, Some(qr(4, -2, 1, Basis::Tau)));
        assert_eq!(one.c, 2);
        assert_eq!(
            one.orbits[0].representative,
            ModuleElement::Linear(qi(1, 0, Basis::Tau))
        );

        let golden_sq = averaged_fibonacci(&qi(1, 1, Basis::Tau)).unwrap();
        assert_eq!(golden_sq.a_exact, Some(qr(-2, 2, 1, Basis::Tau)));

        let four = averaged_fibonacci(&qi(4, 0, Basis::Tau)).unwrap();
        assert_eq!(four.a_exact, Some(QuadRat::zero(Basis::Tau)));
        assert_eq!(four.c, 2);

        let zero = averaged_fibonacci(&qi(0, 0, Basis::Tau)).unwrap();
        assert_eq!((zero.c, zero.a_float), (1, 1.0));

        // 2 is not a square in Z[τ]: no points at that squared distance.
        let two = averaged_fibonacci(&qi(2, 0, Basis::Tau)).unwrap();
        assert_eq!((two.c, two.a_float), (0, 0.0));
    }

    #[test]
    fn fibonacci_table() {
        let records = shelling_table(&System::Fibonacci, 1.7).unwrap();
        let rsqs: Vec<_> = records.iter().map(|r| r.rsq.clone()).collect();
        assert_eq!(
            rsqs,
            vec![qi(0, 0, Basis::Tau), qi(1, 0, Basis::Tau), qi(1, 1, Basis::Tau)]
        );
        assert_eq!(records[1].a_exact, Some(qr(4, -2, 1, Basis::Tau)));
        assert_eq!(records[2].a_exact, Some(qr(-2, 2, 1, Basis::Tau)));
    }

    #[test]
    fn disk_window_factorisation() {
        let rec = averaged_disk(8, 1.0, &qi(1, 0, Basis::Rt2)).unwrap();
        assert_eq!(rec.c, 8);
        // 8·f₂(1) = 16/3 − 4√3/π from the lens area of two unit disks.
        let expected = 16.0 / 3.0 - 4.0 * 3.0f64.sqrt() / std::f64::consts::PI;
        assert!((rec.a_float - expected).abs() < 1e-12, "{}", rec.a_float);

        let empty = averaged_disk(8, 1.0, &qi(7, 0, Basis::Rt2)).unwrap();
        assert_eq!((empty.c, empty.a_float), (0, 0.0));

        // Conjugate embedding beyond the doubled radius kills the value.
        let far = averaged_disk(8, 1.0, &qi(5, -2, Basis::Rt2)).unwrap();
        assert_eq!(far.c, 16);
        assert_eq!(far.a_float, 0.0);
    }

    #[test]
    fn disk_window_agrees_with_per_point_sum() {
        let system = System::DiskWindow { n: 8, radius: 1.0 };
        let radii = enumerate_radii(&system, 4.0).unwrap();
        assert!(radii.len() >= 10);
        for rsq in radii.iter().take(10) {
            let product = averaged_disk(8, 1.0, rsq).unwrap().a_float;
            let direct = averaged_disk_direct(8, 1.0, rsq).unwrap();
            assert!((product - direct).abs() <= 1e-12, "{rsq}: {product} vs {direct}");
        }
    }

    #[test]
    fn averaged_is_bounded_by_central() {
        for rsq in enumerate_radii(&System::AmmannBeenker, 3.5).unwrap() {
            let rec = averaged_ab(&rsq).unwrap();
            let a = rec.a_exact.unwrap();
            let c = qr(rec.c as i64, 0, 1, Basis::Rt2);
            assert!(a.sign_exact() >= 0);
            assert!((&c - &a).sign_exact() >= 0, "{rsq}");
        }
    }

    #[test]
    fn parity_of_octagonal_values() {
        assert!(frequency_module_member(&qr(4, -2, 1, Basis::Rt2)));
        assert!(frequency_module_member(&qr(-56, 40, 1, Basis::Rt2)));
        assert!(!frequency_module_member(&qr(1, 1, 1, Basis::Rt2)));
        assert!(!frequency_module_member(&qr(4, -2, 3, Basis::Rt2)));

        for rsq in enumerate_radii(&System::AmmannBeenker, 4.0).unwrap() {
            let rec = averaged_ab(&rsq).unwrap();
            assert!(
                frequency_module_member(rec.a_exact.as_ref().unwrap()),
                "{rsq}"
            );
        }
    }

    #[test]
    fn csv_and_json_shapes() {
        let records = shelling_table(&System::AmmannBeenker, 2.3).unwrap();
        let csv = table_to_csv(&records);
        assert_eq!(csv.lines().count(), 9);
        let header = csv.lines().next().unwrap();
        assert_eq!(
            header,
            "r_sq,r,s,c,orbit_lengths,a_exact,a_float,freq_module_member"
        );
        let row = csv.lines().nth(3).unwrap();
        assert!(row.starts_with("1+0*rt2,1,1,8,8,4+0*rt2,4,true"), "{row}");

        let json = table_to_json(&System::AmmannBeenker, Some(2.3), &records);
        assert_eq!(json["schema_version"], 1);
        assert_eq!(json["records"].as_array().unwrap().len(), 8);

        // Emitted exact values re-parse to equal values.
        for row in json["records"].as_array().unwrap() {
            let rsq = crate::quad::parse_quadint(row["r_sq"].as_str().unwrap()).unwrap();
            let a = crate::quad::parse_quadrat(row["a_exact"].as_str().unwrap()).unwrap();
            let rec = records
                .iter()
                .find(|r| r.rsq == rsq)
                .expect("row matches a record");
            assert_eq!(rec.a_exact.as_ref(), Some(&a));
        }
    }
}
