//! Small dense float linear algebra: LU solves, symmetric eigenvalues,
//! singular values, and the matrix logarithm needed by the transport check.
//!
//! Everything here is deterministic (fixed sweep orders, no pivoting on
//! ties beyond first-max) so certificates are reproducible bit for bit.

use thiserror::Error;

pub const DIM: usize = 7;

/// 7×7 float matrix, row major.
pub type Mat7 = [[f64; DIM]; DIM];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumError {
    #[error("singular matrix in LU factorization")]
    Singular,
    #[error("matrix too far from identity for logarithm (‖P − I‖ = {0:.3e})")]
    LogDomain(f64),
    #[error("condition number {0:.3e} exceeds limit")]
    IllConditioned(f64),
}

pub fn mat_zero() -> Mat7 {
    [[0.0; DIM]; DIM]
}

pub fn mat_identity() -> Mat7 {
    let mut m = mat_zero();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn mat_mul(a: &Mat7, b: &Mat7) -> Mat7 {
    let mut c = mat_zero();
    for i in 0..DIM {
        for k in 0..DIM {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..DIM {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

pub fn mat_add(a: &Mat7, b: &Mat7) -> Mat7 {
    let mut c = *a;
    for i in 0..DIM {
        for j in 0..DIM {
            c[i][j] += b[i][j];
        }
    }
    c
}

pub fn mat_sub(a: &Mat7, b: &Mat7) -> Mat7 {
    let mut c = *a;
    for i in 0..DIM {
        for j in 0..DIM {
            c[i][j] -= b[i][j];
        }
    }
    c
}

pub fn mat_scale(a: &Mat7, s: f64) -> Mat7 {
    let mut c = *a;
    for row in c.iter_mut() {
        for x in row.iter_mut() {
            *x *= s;
        }
    }
    c
}

pub fn mat_transpose(a: &Mat7) -> Mat7 {
    let mut c = mat_zero();
    for i in 0..DIM {
        for j in 0..DIM {
            c[j][i] = a[i][j];
        }
    }
    c
}

pub fn mat_frobenius(a: &Mat7) -> f64 {
    a.iter()
        .flatten()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
}

pub fn mat_max_abs(a: &Mat7) -> f64 {
    a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()))
}

pub fn mat_apply(a: &Mat7, v: &[f64; DIM]) -> [f64; DIM] {
    let mut out = [0.0; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            out[i] += a[i][j] * v[j];
        }
    }
    out
}

struct Lu {
    lu: Mat7,
    perm: [usize; DIM],
}

fn lu_factor(a: &Mat7) -> Result<Lu, NumError> {
    let mut lu = *a;
    let mut perm = [0usize; DIM];
    for (i, p) in perm.iter_mut().enumerate() {
        *p = i;
    }
    for k in 0..DIM {
        let mut pivot = k;
        let mut best = lu[k][k].abs();
        for i in (k + 1)..DIM {
            if lu[i][k].abs() > best {
                best = lu[i][k].abs();
                pivot = i;
            }
        }
        if best == 0.0 {
            return Err(NumError::Singular);
        }
        if pivot != k {
            lu.swap(pivot, k);
            perm.swap(pivot, k);
        }
        for i in (k + 1)..DIM {
            let f = lu[i][k] / lu[k][k];
            lu[i][k] = f;
            for j in (k + 1)..DIM {
                lu[i][j] -= f * lu[k][j];
            }
        }
    }
    Ok(Lu { lu, perm })
}

impl Lu {
    fn solve(&self, b: &[f64; DIM]) -> [f64; DIM] {
        let mut y = [0.0; DIM];
        for i in 0..DIM {
            let mut s = b[self.perm[i]];
            for j in 0..i {
                s -= self.lu[i][j] * y[j];
            }
            y[i] = s;
        }
        let mut x = [0.0; DIM];
        for i in (0..DIM).rev() {
            let mut s = y[i];
            for j in (i + 1)..DIM {
                s -= self.lu[i][j] * x[j];
            }
            x[i] = s / self.lu[i][i];
        }
        x
    }
}

pub fn mat_inverse(a: &Mat7) -> Result<Mat7, NumError> {
    let lu = lu_factor(a)?;
    let mut inv = mat_zero();
    for j in 0..DIM {
        let mut e = [0.0; DIM];
        e[j] = 1.0;
        let col = lu.solve(&e);
        for i in 0..DIM {
            inv[i][j] = col[i];
        }
    }
    Ok(inv)
}

/// Rough 1-norm condition estimate ‖A‖₁·‖A⁻¹‖₁.
pub fn condition_estimate(a: &Mat7) -> Result<f64, NumError> {
    let inv = mat_inverse(a)?;
    Ok(one_norm(a) * one_norm(&inv))
}

fn one_norm(a: &Mat7) -> f64 {
    (0..DIM)
        .map(|j| (0..DIM).map(|i| a[i][j].abs()).sum::<f64>())
        .fold(0.0f64, f64::max)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(a: &Mat7) -> [f64; DIM] {
    let mut m = *a;
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..DIM {
            for j in (i + 1)..DIM {
                off += m[i][j] * m[i][j];
            }
        }
        if off.sqrt() < 1e-14 * (1.0 + mat_frobenius(&m)) {
            break;
        }
        for p in 0..DIM {
            for q in (p + 1)..DIM {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..DIM {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..DIM {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev = [0.0; DIM];
    for i in 0..DIM {
        ev[i] = m[i][i];
    }
    ev
}

/// Counts of (positive, negative) eigenvalues of a symmetric matrix.
pub fn signature(a: &Mat7) -> (usize, usize) {
    let ev = symmetric_eigenvalues(a);
    let scale = ev.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let tol = 1e-9 * (1.0 + scale);
    let pos = ev.iter().filter(|&&x| x > tol).count();
    let neg = ev.iter().filter(|&&x| x < -tol).count();
    (pos, neg)
}

/// Singular values of a rows×cols matrix (row-major, rows.len() ≥ 1),
/// descending, via one-sided Jacobi orthogonalization of the columns.
pub fn singular_values(rows: &[Vec<f64>]) -> Vec<f64> {
    if rows.is_empty() {
        return Vec::new();
    }
    let n = rows[0].len();
    let m = rows.len();
    // column-major working copy
    let mut col: Vec<Vec<f64>> = (0..n).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let app = dot(&col[p], &col[p]);
                let aqq = dot(&col[q], &col[q]);
                let apq = dot(&col[p], &col[q]);
                if apq.abs() <= 1e-30 + 1e-17 * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..m {
                    let (xp, xq) = (col[p][k], col[q][k]);
                    col[p][k] = c * xp - s * xq;
                    col[q][k] = s * xp + c * xq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = col.iter().map(|c| dot(c, c).sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Singular values of a tall stack via the Gram matrix AᵀA and a symmetric
/// Jacobi eigensolve on its (small) column dimension. Adequate whenever rank
/// decisions use a relative threshold well above √ε ≈ 1e-8.
pub fn singular_values_gram(rows: &[Vec<f64>]) -> Vec<f64> {
    if rows.is_empty() {
        return Vec::new();
    }
    let n = rows[0].len();
    let mut gram = vec![vec![0.0f64; n]; n];
    for r in rows {
        for i in 0..n {
            if r[i] == 0.0 {
                continue;
            }
            for j in i..n {
                gram[i][j] += r[i] * r[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            gram[i][j] = gram[j][i];
        }
    }
    let mut ev = jacobi_eigenvalues_general(&mut gram);
    for x in ev.iter_mut() {
        *x = x.max(0.0).sqrt();
    }
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev
}

fn jacobi_eigenvalues_general(m: &mut [Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    for _sweep in 0..100 {
        let mut off = 0.0;
        let mut scale = 0.0;
        for i in 0..n {
            scale += m[i][i].abs();
            for j in (i + 1)..n {
                off += m[i][j] * m[i][j];
            }
        }
        if off.sqrt() < 1e-15 * (1.0 + scale) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).collect()
}

/// Numerical rank: σ > rel_tol·σ_max, together with the gap
/// σ_r / σ_{r+1} between the last retained and first discarded value
/// (infinite when nothing is discarded or everything is zero).
pub fn rank_from_singular_values(sv: &[f64], rel_tol: f64) -> (usize, f64) {
    if sv.is_empty() || sv[0] == 0.0 {
        return (0, f64::INFINITY);
    }
    let cut = rel_tol * sv[0];
    let rank = sv.iter().filter(|&&s| s > cut).count();
    let gap = if rank == 0 {
        f64::INFINITY
    } else if rank < sv.len() && sv[rank] > 0.0 {
        sv[rank - 1] / sv[rank]
    } else {
        f64::INFINITY
    };
    (rank, gap)
}

/// Principal matrix logarithm for matrices near the identity, by inverse
/// scaling and squaring: repeated square roots then the log series.
pub fn mat_log(p: &Mat7) -> Result<Mat7, NumError> {
    let dist = mat_frobenius(&mat_sub(p, &mat_identity()));
    if dist > 0.5 {
        return Err(NumError::LogDomain(dist));
    }
    let mut a = *p;
    let mut k = 0u32;
    while mat_frobenius(&mat_sub(&a, &mat_identity())) > 0.25 && k < 30 {
        a = mat_sqrt_newton(&a)?;
        k += 1;
    }
    let e = mat_sub(&a, &mat_identity());
    // log(I + E) = Σ (−1)^{k+1} E^k / k
    let mut term = e;
    let mut log = mat_zero();
    for j in 1..=40 {
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        log = mat_add(&log, &mat_scale(&term, sign / j as f64));
        term = mat_mul(&term, &e);
        if mat_frobenius(&term) < 1e-300 {
            break;
        }
    }
    Ok(mat_scale(&log, f64::powi(2.0, k as i32)))
}

/// Square root of a near-identity matrix by Denman–Beavers iteration.
fn mat_sqrt_newton(a: &Mat7) -> Result<Mat7, NumError> {
    let mut y = *a;
    let mut z = mat_identity();
    for _ in 0..60 {
        let yi = mat_inverse(&y)?;
        let zi = mat_inverse(&z)?;
        let y_next = mat_scale(&mat_add(&y, &zi), 0.5);
        let z_next = mat_scale(&mat_add(&z, &yi), 0.5);
        let delta = mat_frobenius(&mat_sub(&y_next, &y));
        y = y_next;
        z = z_next;
        if delta < 1e-15 * (1.0 + mat_frobenius(&y)) {
            break;
        }
    }
    Ok(y)
}

/// Matrix exponential by scaling and squaring with the Taylor series.
pub fn mat_exp(a: &Mat7) -> Mat7 {
    let norm = mat_frobenius(a);
    let k = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let b = mat_scale(a, f64::powi(2.0, -k));
    let mut term = mat_identity();
    let mut sum = mat_identity();
    for j in 1..=24 {
        term = mat_scale(&mat_mul(&term, &b), 1.0 / j as f64);
        sum = mat_add(&sum, &term);
    }
    let mut r = sum;
    for _ in 0..k {
        r = mat_mul(&r, &r);
    }
    r
}

/// Least squares c minimizing ‖m − Σ c_i basis_i‖_F over flattened matrices,
/// plus the Frobenius residual of the best fit.
pub fn least_squares_membership(basis: &[Vec<f64>], target: &[f64]) -> (Vec<f64>, f64) {
    let k = basis.len();
    if k == 0 {
        let res = target.iter().map(|x| x * x).sum::<f64>().sqrt();
        return (Vec::new(), res);
    }
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    // normal equations with a tiny general Gauss solver
    let mut g = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            g[i][j] = dot(&basis[i], &basis[j]);
        }
        g[i][k] = dot(&basis[i], target);
    }
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&a, &b| g[a][col].abs().partial_cmp(&g[b][col].abs()).unwrap())
            .unwrap();
        g.swap(col, piv);
        let p = g[col][col];
        if p.abs() < 1e-300 {
            continue;
        }
        for r in 0..k {
            if r == col {
                continue;
            }
            let f = g[r][col] / p;
            for c in col..=k {
                g[r][c] -= f * g[col][c];
            }
        }
    }
    let coeffs: Vec<f64> = (0..k)
        .map(|i| {
            if g[i][i].abs() < 1e-300 {
                0.0
            } else {
                g[i][k] / g[i][i]
            }
        })
        .collect();
    let mut resid2 = 0.0;
    for (idx, &t) in target.iter().enumerate() {
        let fit: f64 = (0..k).map(|i| coeffs[i] * basis[i][idx]).sum();
        resid2 += (t - fit) * (t - fit);
    }
    (coeffs, resid2.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let mut a = mat_identity();
        a[0][4] = 2.5;
        a[2][1] = -0.75;
        a[5][6] = 1.25;
        a[4][4] = 3.0;
        let inv = mat_inverse(&a).unwrap();
        let prod = mat_mul(&a, &inv);
        assert!(mat_frobenius(&mat_sub(&prod, &mat_identity())) < 1e-12);
    }

    #[test]
    fn eigen_signature_of_split_metric() {
        // the canonical inner product: three hyperbolic planes and one −1
        let mut g = mat_zero();
        g[0][4] = 1.0;
        g[4][0] = 1.0;
        g[1][5] = 1.0;
        g[5][1] = 1.0;
        g[2][6] = 1.0;
        g[6][2] = 1.0;
        g[3][3] = -1.0;
        assert_eq!(signature(&g), (3, 4));
    }

    #[test]
    fn singular_values_of_known_matrix() {
        let rows = vec![vec![3.0, 0.0], vec![0.0, 4.0], vec![0.0, 0.0]];
        let sv = singular_values(&rows);
        assert!((sv[0] - 4.0).abs() < 1e-12);
        assert!((sv[1] - 3.0).abs() < 1e-12);
        let (rank, gap) = rank_from_singular_values(&sv, 1e-6);
        assert_eq!(rank, 2);
        assert!(gap.is_infinite());
    }

    #[test]
    fn rank_detects_dependence() {
        let rows = vec![
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![0.0, 1.0, 0.0],
        ];
        let sv = singular_values(&rows);
        let (rank, gap) = rank_from_singular_values(&sv, 1e-6);
        assert_eq!(rank, 2);
        assert!(gap > 1e6);
    }

    #[test]
    fn log_of_exp() {
        let mut a = mat_zero();
        a[0][1] = 0.02;
        a[1][0] = -0.015;
        a[3][4] = 0.01;
        let e = mat_exp(&a);
        let l = mat_log(&e).unwrap();
        assert!(mat_frobenius(&mat_sub(&l, &a)) < 1e-12);
    }

    #[test]
    fn log_rejects_far_matrices() {
        let mut p = mat_identity();
        p[0][0] = 2.0;
        assert!(matches!(mat_log(&p), Err(NumError::LogDomain(_))));
    }

    #[test]
    fn membership_least_squares() {
        let b1 = vec![1.0, 0.0, 0.0];
        let b2 = vec![0.0, 1.0, 0.0];
        let (c, r) = least_squares_membership(&[b1, b2], &[2.0, -3.0, 0.0]);
        assert!((c[0] - 2.0).abs() < 1e-12);
        assert!((c[1] + 3.0).abs() < 1e-12);
        assert!(r < 1e-12);
        let (_, r2) = least_squares_membership(&[vec![1.0, 0.0, 0.0]], &[0.0, 0.0, 5.0]);
        assert!((r2 - 5.0).abs() < 1e-12);
    }
}
