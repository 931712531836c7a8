//! Enumeration of integer vectors in ellipsoids of a positive definite
//! quadratic form (Fincke-Pohst recursion).
//!
//! The recursion runs on a floating-point decomposition of the Gram matrix
//! with padded layer bounds, so it can overshoot slightly but never misses a
//! vector; callers re-check candidates with exact integer arithmetic. The
//! two exact wrappers here do that filtering for integer Gram matrices.

use crate::error::Error;

/// Relative padding applied to every layer bound. Large enough to swallow
/// f64 roundoff in the decomposition of small integer matrices, small enough
/// to add at most a candidate or two per layer (removed by exact filters).
const PAD: f64 = 1e-9;

/// Decomposition Q(x) = Σ_i q_ii (x_i + Σ_{j>i} q_ij x_j)² of a symmetric
/// positive definite matrix. Fails if a pivot is not strictly positive.
fn completion_of_squares(gram: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, Error> {
    let n = gram.len();
    let mut q: Vec<Vec<f64>> = gram.to_vec();
    for (i, row) in gram.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidArgument("gram matrix must be square".into()));
        }
        for j in 0..n {
            if (gram[i][j] - gram[j][i]).abs() > 1e-12 * (1.0 + gram[i][j].abs()) {
                return Err(Error::InvalidArgument("gram matrix must be symmetric".into()));
            }
        }
    }
    for i in 0..n {
        if !(q[i][i] > 0.0) {
            return Err(Error::NotPositiveDefinite);
        }
        for j in (i + 1)..n {
            q[j][i] = q[i][j]; // keep the unscaled column for the update step
            q[i][j] /= q[i][i];
        }
        for k in (i + 1)..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    Ok(q)
}

/// Calls `visit` on every integer vector x (including 0 and both signs) with
/// Q(x) ≤ bound + padding, where Q is the form of the given Gram matrix.
///
/// Candidates can exceed the bound by a small relative margin; callers that
/// need sharp membership must re-test exactly.
pub fn enumerate_quadratic_form(
    gram: &[Vec<f64>],
    bound: f64,
    visit: &mut dyn FnMut(&[i64]),
) -> Result<(), Error> {
    let n = gram.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty gram matrix".into()));
    }
    let q = completion_of_squares(gram)?;
    if bound < 0.0 {
        return Ok(());
    }
    let pad = PAD * (1.0 + bound.abs());
    let mut x = vec![0i64; n];
    // t[i]: bound left for layers 0..=i; u[i]: offset Σ_{j>i} q_ij x_j.
    recurse(&q, n - 1, bound + pad, &mut x, visit, pad);
    return Ok(());

    fn recurse(
        q: &[Vec<f64>],
        i: usize,
        t: f64,
        x: &mut [i64],
        visit: &mut dyn FnMut(&[i64]),
        pad: f64,
    ) {
        let u: f64 = (i + 1..x.len()).map(|j| q[i][j] * x[j] as f64).sum();
        let radius = (t.max(0.0) / q[i][i]).sqrt();
        let lo = (-radius - u).ceil() as i64;
        let hi = (radius - u).floor() as i64;
        for xi in lo..=hi {
            x[i] = xi;
            let step = q[i][i] * (xi as f64 + u) * (xi as f64 + u);
            let rem = t - step;
            if rem < -pad {
                continue;
            }
            if i == 0 {
                visit(x);
            } else {
                recurse(q, i - 1, rem, x, visit, pad);
            }
        }
        x[i] = 0;
    }
}

/// Exact form value xᵀGx for an integer matrix, evaluated in i128.
pub fn form_value(gram: &[Vec<i64>], x: &[i64]) -> i128 {
    let mut acc: i128 = 0;
    for (i, &xi) in x.iter().enumerate() {
        for (j, &xj) in x.iter().enumerate() {
            acc += gram[i][j] as i128 * xi as i128 * xj as i128;
        }
    }
    acc
}

/// All integer vectors with xᵀGx exactly equal to `target`, in lexicographic
/// order. G must be positive definite.
pub fn integer_form_shell(gram: &[Vec<i64>], target: i64) -> Result<Vec<Vec<i64>>, Error> {
    let gram_f: Vec<Vec<f64>> = gram.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    let mut out = Vec::new();
    if target < 0 {
        completion_of_squares(&gram_f)?; // still validate the matrix
        return Ok(out);
    }
    enumerate_quadratic_form(&gram_f, target as f64, &mut |x| {
        if form_value(gram, x) == target as i128 {
            out.push(x.to_vec());
        }
    })?;
    out.sort();
    Ok(out)
}

/// Representation counts N(k) = #{x : xᵀGx = k} for k = 0..=kmax (the theta
/// series coefficients of the lattice). Includes N(0) = 1.
pub fn lattice_theta(gram: &[Vec<i64>], kmax: i64) -> Result<Vec<(i64, u64)>, Error> {
    if kmax < 0 {
        return Err(Error::InvalidArgument("kmax must be nonnegative".into()));
    }
    let gram_f: Vec<Vec<f64>> = gram.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    let mut counts = vec![0u64; (kmax + 1) as usize];
    enumerate_quadratic_form(&gram_f, kmax as f64, &mut |x| {
        let k = form_value(gram, x);
        if k >= 0 && k <= kmax as i128 {
            counts[k as usize] += 1;
        }
    })?;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, c)| (k as i64, c))
        .collect())
}

/// Form value of an f64 matrix, for exact-in-f64 small integer inputs.
pub fn form_value_f64(gram: &[Vec<f64>], x: &[i64]) -> f64 {
    let mut acc = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        for (j, &xj) in x.iter().enumerate() {
            acc += gram[i][j] * xi as f64 * xj as f64;
        }
    }
    acc
}
