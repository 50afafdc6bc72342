//! From metric jets to Christoffel symbols, Riemann curvature, one covariant
//! derivative of curvature, and the frame connection form.
//!
//! Conventions, fixed crate-wide:
//!   R(X,Y) = ∇_X ∇_Y − ∇_Y ∇_X − ∇_{[X,Y]}
//!   R^l_{kij} = ∂_i Γ^l_{jk} − ∂_j Γ^l_{ik} + Γ^l_{im} Γ^m_{jk} − Γ^l_{jm} Γ^m_{ik}
//! so the endomorphism R(∂_i, ∂_j) has matrix [R^l_{kij}]_{l,k}. Endomorphisms
//! are moved to the coframe basis by E ↦ B·E·B⁻¹.

use thiserror::Error;

use crate::coframe::CoframeCase;
use crate::expr::EvalError;
use crate::jet::Jet;
use crate::numeric::{self, Mat7};

pub const DIM: usize = 7;

/// Condition-number guard for the per-point coframe and metric inversions.
const COND_LIMIT: f64 = 1e8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurvError {
    #[error("expression evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("numeric failure: {0}")]
    Num(#[from] numeric::NumError),
    #[error("singular or ill-conditioned coframe at the sample point")]
    SingularCoframe,
    #[error("singular metric at the sample point")]
    SingularMetric,
    #[error("metric jets must have order ≥ {0}")]
    OrderTooLow(usize),
}

fn idx3(k: usize, i: usize, j: usize) -> usize {
    (k * DIM + i) * DIM + j
}

fn idx4(l: usize, k: usize, i: usize, j: usize) -> usize {
    ((l * DIM + k) * DIM + i) * DIM + j
}

/// Jet-valued inverse of a jet matrix: split M = M₀(I + N) with N nilpotent
/// in jet degree, then M⁻¹ = (Σ (−N)^k)·M₀⁻¹.
pub fn invert_jet_matrix(m: &[Vec<Jet>]) -> Result<Vec<Vec<Jet>>, CurvError> {
    let order = m[0][0].order();
    let mut m0 = numeric::mat_zero();
    for i in 0..DIM {
        for j in 0..DIM {
            m0[i][j] = m[i][j].value();
        }
    }
    let cond = numeric::condition_estimate(&m0).map_err(|_| CurvError::SingularCoframe)?;
    if !cond.is_finite() || cond > COND_LIMIT {
        return Err(CurvError::SingularCoframe);
    }
    let m0_inv = numeric::mat_inverse(&m0).map_err(|_| CurvError::SingularCoframe)?;

    // N = M₀⁻¹·M − I has zero constant part
    let n: Vec<Vec<Jet>> = (0..DIM)
        .map(|i| {
            (0..DIM)
                .map(|j| {
                    let mut acc = Jet::zero(order);
                    for k in 0..DIM {
                        if m0_inv[i][k] != 0.0 {
                            acc = acc.add(&m[k][j].scale(m0_inv[i][k]));
                        }
                    }
                    if i == j {
                        acc.sub(&Jet::constant(1.0, order))
                    } else {
                        acc
                    }
                })
                .collect()
        })
        .collect();

    // Σ_{k=0..order} (−N)^k
    let mut series: Vec<Vec<Jet>> = (0..DIM)
        .map(|i| {
            (0..DIM)
                .map(|j| Jet::constant(if i == j { 1.0 } else { 0.0 }, order))
                .collect()
        })
        .collect();
    let mut power: Vec<Vec<Jet>> = series.clone();
    for _ in 1..=order {
        // power ← −power·N
        let mut next: Vec<Vec<Jet>> = (0..DIM)
            .map(|i| {
                (0..DIM)
                    .map(|j| {
                        let mut acc = Jet::zero(order);
                        for k in 0..DIM {
                            acc = acc.add(&power[i][k].mul(&n[k][j]));
                        }
                        acc.neg()
                    })
                    .collect()
            })
            .collect();
        for i in 0..DIM {
            for j in 0..DIM {
                series[i][j] = series[i][j].add(&next[i][j]);
            }
        }
        std::mem::swap(&mut power, &mut next);
    }
    drop(n);

    // result = series · M₀⁻¹
    Ok((0..DIM)
        .map(|i| {
            (0..DIM)
                .map(|j| {
                    let mut acc = Jet::zero(order);
                    for k in 0..DIM {
                        if m0_inv[k][j] != 0.0 {
                            acc = acc.add(&series[i][k].scale(m0_inv[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect())
}

/// Christoffel symbols of the Levi-Civita connection as jets, one order
/// below the metric jets.
pub struct ChristoffelField {
    order: usize,
    gamma: Vec<Jet>,
}

impl ChristoffelField {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn gamma(&self, k: usize, i: usize, j: usize) -> &Jet {
        &self.gamma[idx3(k, i, j)]
    }

    pub fn value(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[idx3(k, i, j)].value()
    }

    /// Γ(∂_dir) as the matrix [Γ^m_{dir,n}]_{m,n} of values.
    pub fn direction_matrix(&self, dir: usize) -> Mat7 {
        let mut out = numeric::mat_zero();
        for m in 0..DIM {
            for n in 0..DIM {
                out[m][n] = self.value(m, dir, n);
            }
        }
        out
    }
}

/// Γ^k_{ij} = ½ g^{kl} (∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij}).
pub fn christoffel(g: &[Vec<Jet>]) -> Result<ChristoffelField, CurvError> {
    let g_order = g[0][0].order();
    if g_order < 1 {
        return Err(CurvError::OrderTooLow(1));
    }
    let order = g_order - 1;
    let ginv = invert_jet_matrix(g).map_err(|e| match e {
        CurvError::SingularCoframe => CurvError::SingularMetric,
        other => other,
    })?;

    let dg: Vec<Jet> = {
        let mut v = Vec::with_capacity(DIM * DIM * DIM);
        for i in 0..DIM {
            for j in 0..DIM {
                for l in 0..DIM {
                    v.push(g[j][l].derivative(i + 1));
                }
            }
        }
        v
    };
    let dgat = |i: usize, j: usize, l: usize| &dg[(i * DIM + j) * DIM + l];

    let mut gamma = Vec::with_capacity(DIM * DIM * DIM);
    for k in 0..DIM {
        for i in 0..DIM {
            for j in 0..DIM {
                let mut acc = Jet::zero(order);
                for l in 0..DIM {
                    let sum = dgat(i, j, l)
                        .add(dgat(j, i, l))
                        .sub(dgat(l, i, j));
                    acc = acc.add(&ginv[k][l].truncate(order).mul(&sum));
                }
                gamma.push(acc.scale(0.5));
            }
        }
    }
    Ok(ChristoffelField { order, gamma })
}

/// Riemann tensor R^l_{kij} as jets, one order below Γ.
pub struct CurvatureAtPoint {
    r: Vec<Jet>,
}

impl CurvatureAtPoint {
    pub fn component(&self, l: usize, k: usize, i: usize, j: usize) -> &Jet {
        &self.r[idx4(l, k, i, j)]
    }

    /// The endomorphism R(∂_i, ∂_j) as a value matrix [l][k].
    pub fn endo_coord(&self, i: usize, j: usize) -> Mat7 {
        let mut out = numeric::mat_zero();
        for l in 0..DIM {
            for k in 0..DIM {
                out[l][k] = self.component(l, k, i, j).value();
            }
        }
        out
    }

    /// ∂_m of the endomorphism R(∂_i, ∂_j).
    pub fn d_endo_coord(&self, m: usize, i: usize, j: usize) -> Mat7 {
        let mut out = numeric::mat_zero();
        for l in 0..DIM {
            for k in 0..DIM {
                out[l][k] = self.component(l, k, i, j).d1(m + 1);
            }
        }
        out
    }

    /// Max |R(∂i,∂j)∂k + R(∂j,∂k)∂i + R(∂k,∂i)∂j| over all triples.
    pub fn first_bianchi_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..DIM {
            for j in (i + 1)..DIM {
                for k in (j + 1)..DIM {
                    for l in 0..DIM {
                        let s = self.component(l, k, i, j).value()
                            + self.component(l, i, j, k).value()
                            + self.component(l, j, k, i).value();
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// Max |R_{abij} + R_{baij}| with the first index lowered by g.
    pub fn lowered_antisymmetry_residual(&self, g0: &Mat7) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..DIM {
            for j in 0..DIM {
                for a in 0..DIM {
                    for b in a..DIM {
                        let mut rab = 0.0;
                        let mut rba = 0.0;
                        for l in 0..DIM {
                            rab += g0[a][l] * self.component(l, b, i, j).value();
                            rba += g0[b][l] * self.component(l, a, i, j).value();
                        }
                        worst = worst.max((rab + rba).abs());
                    }
                }
            }
        }
        worst
    }
}

pub fn riemann(gamma: &ChristoffelField) -> Result<CurvatureAtPoint, CurvError> {
    if gamma.order() < 1 {
        return Err(CurvError::OrderTooLow(2));
    }
    let order = gamma.order() - 1;
    let mut r = Vec::with_capacity(DIM * DIM * DIM * DIM);
    for l in 0..DIM {
        for k in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    let mut acc = gamma
                        .gamma(l, j, k)
                        .derivative(i + 1)
                        .sub(&gamma.gamma(l, i, k).derivative(j + 1));
                    for m in 0..DIM {
                        acc = acc.add(
                            &gamma
                                .gamma(l, i, m)
                                .truncate(order)
                                .mul(&gamma.gamma(m, j, k).truncate(order)),
                        );
                        acc = acc.sub(
                            &gamma
                                .gamma(l, j, m)
                                .truncate(order)
                                .mul(&gamma.gamma(m, i, k).truncate(order)),
                        );
                    }
                    r.push(acc);
                }
            }
        }
    }
    Ok(CurvatureAtPoint { r })
}

/// Values (∇_m R)^l_{kij} at the base point:
/// ∂_m R + Γ^l_{mp} R^p_{kij} − Γ^p_{mk} R^l_{pij} − Γ^p_{mi} R^l_{kpj} − Γ^p_{mj} R^l_{kip}.
pub struct NablaRiemann {
    v: Vec<f64>,
}

impl NablaRiemann {
    pub fn component(&self, m: usize, l: usize, k: usize, i: usize, j: usize) -> f64 {
        self.v[idx4(l, k, i, j) * DIM + m]
    }

    /// The endomorphism (∇_m R)(∂_i, ∂_j).
    pub fn endo_coord(&self, m: usize, i: usize, j: usize) -> Mat7 {
        let mut out = numeric::mat_zero();
        for l in 0..DIM {
            for k in 0..DIM {
                out[l][k] = self.component(m, l, k, i, j);
            }
        }
        out
    }

    /// Max residual of the second Bianchi identity
    /// (∇_m R)^l_{kij} + (∇_i R)^l_{kjm} + (∇_j R)^l_{kmi} over all indices.
    pub fn second_bianchi_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for m in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    for l in 0..DIM {
                        for k in 0..DIM {
                            let s = self.component(m, l, k, i, j)
                                + self.component(i, l, k, j, m)
                                + self.component(j, l, k, m, i);
                            worst = worst.max(s.abs());
                        }
                    }
                }
            }
        }
        worst
    }
}

pub fn nabla_riemann(
    gamma: &ChristoffelField,
    r: &CurvatureAtPoint,
) -> Result<NablaRiemann, CurvError> {
    let rv = |l: usize, k: usize, i: usize, j: usize| r.component(l, k, i, j).value();
    let gv = |k: usize, i: usize, j: usize| gamma.value(k, i, j);
    let mut v = vec![0.0; DIM * DIM * DIM * DIM * DIM];
    for l in 0..DIM {
        for k in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    for m in 0..DIM {
                        let mut acc = r.component(l, k, i, j).d1(m + 1);
                        for p in 0..DIM {
                            acc += gv(l, m, p) * rv(p, k, i, j);
                            acc -= gv(p, m, k) * rv(l, p, i, j);
                            acc -= gv(p, m, i) * rv(l, k, p, j);
                            acc -= gv(p, m, j) * rv(l, k, i, p);
                        }
                        v[idx4(l, k, i, j) * DIM + m] = acc;
                    }
                }
            }
        }
    }
    Ok(NablaRiemann { v })
}

/// Everything the holonomy certificates need at one sample point.
pub struct FramePoint {
    pub p: [f64; DIM],
    /// Coframe value matrix B(p) and its inverse.
    pub b0: Mat7,
    pub b0_inv: Mat7,
    /// Metric values g(p).
    pub g0: Mat7,
    pub gamma: ChristoffelField,
    pub curvature: CurvatureAtPoint,
    pub nabla: NablaRiemann,
    /// Frame endomorphisms R(b_i, b_j), pairs (i < j) 1-based.
    pub r_frame: Vec<((u8, u8), Mat7)>,
    /// Frame endomorphisms (∇_{b_m} R)(b_i, b_j).
    pub nabla_r_frame: Vec<((u8, u8, u8), Mat7)>,
    /// Connection form θ(b_k) in the frame, k = 1..=7.
    pub theta_frame: Vec<Mat7>,
}

impl FramePoint {
    pub fn compute(case: &CoframeCase, p: &[f64; DIM]) -> Result<FramePoint, CurvError> {
        let b_jets = case.b_jets(p, 3)?;
        let g_jets = case.metric_jets(p, 3)?;
        let binv_jets = invert_jet_matrix(&b_jets)?;

        let mut b0 = numeric::mat_zero();
        let mut b0_inv = numeric::mat_zero();
        let mut g0 = numeric::mat_zero();
        for i in 0..DIM {
            for j in 0..DIM {
                b0[i][j] = b_jets[i][j].value();
                b0_inv[i][j] = binv_jets[i][j].value();
                g0[i][j] = g_jets[i][j].value();
            }
        }

        let gamma = christoffel(&g_jets)?;
        let curvature = riemann(&gamma)?;
        let nabla = nabla_riemann(&gamma, &curvature)?;

        // R(b_i, b_j) = Σ_{k<l} [Binv^k_i Binv^l_j − Binv^l_i Binv^k_j] · B·R(∂_k,∂_l)·B⁻¹
        let coord_frame: Vec<Mat7> = {
            let mut v = Vec::with_capacity(DIM * DIM);
            for k in 0..DIM {
                for l in 0..DIM {
                    let e = if k < l {
                        numeric::mat_mul(&numeric::mat_mul(&b0, &curvature.endo_coord(k, l)), &b0_inv)
                    } else {
                        numeric::mat_zero()
                    };
                    v.push(e);
                }
            }
            v
        };
        let mut r_frame = Vec::with_capacity(21);
        for i in 0..DIM {
            for j in (i + 1)..DIM {
                let mut acc = numeric::mat_zero();
                for k in 0..DIM {
                    for l in (k + 1)..DIM {
                        let w = b0_inv[k][i] * b0_inv[l][j] - b0_inv[l][i] * b0_inv[k][j];
                        if w != 0.0 {
                            acc = numeric::mat_add(&acc, &numeric::mat_scale(&coord_frame[k * DIM + l], w));
                        }
                    }
                }
                r_frame.push(((i as u8 + 1, j as u8 + 1), acc));
            }
        }

        let mut nabla_r_frame = Vec::with_capacity(DIM * 21);
        // precompute conjugated (∇_m R)(∂_k,∂_l) for k < l
        let mut nabla_conj = vec![numeric::mat_zero(); DIM * DIM * DIM];
        for m in 0..DIM {
            for k in 0..DIM {
                for l in (k + 1)..DIM {
                    nabla_conj[(m * DIM + k) * DIM + l] = numeric::mat_mul(
                        &numeric::mat_mul(&b0, &nabla.endo_coord(m, k, l)),
                        &b0_inv,
                    );
                }
            }
        }
        for fm in 0..DIM {
            for i in 0..DIM {
                for j in (i + 1)..DIM {
                    let mut acc = numeric::mat_zero();
                    for m in 0..DIM {
                        let wm = b0_inv[m][fm];
                        if wm == 0.0 {
                            continue;
                        }
                        for k in 0..DIM {
                            for l in (k + 1)..DIM {
                                let w = wm * (b0_inv[k][i] * b0_inv[l][j] - b0_inv[l][i] * b0_inv[k][j]);
                                if w != 0.0 {
                                    acc = numeric::mat_add(
                                        &acc,
                                        &numeric::mat_scale(&nabla_conj[(m * DIM + k) * DIM + l], w),
                                    );
                                }
                            }
                        }
                    }
                    nabla_r_frame.push(((fm as u8 + 1, i as u8 + 1, j as u8 + 1), acc));
                }
            }
        }

        // θ^i_j(b_k) = Σ_m B^i_m [ b_k((B⁻¹)^m_j) + Γ^m_{pn} (b_k)^p (B⁻¹)^n_j ]
        let mut theta_frame = Vec::with_capacity(DIM);
        for fk in 0..DIM {
            let mut theta = numeric::mat_zero();
            for i in 0..DIM {
                for j in 0..DIM {
                    let mut acc = 0.0;
                    for m in 0..DIM {
                        if b0[i][m] == 0.0 {
                            continue;
                        }
                        // directional derivative along b_k
                        let mut dir = 0.0;
                        for p in 0..DIM {
                            let xp = b0_inv[p][fk];
                            if xp != 0.0 {
                                dir += xp * binv_jets[m][j].d1(p + 1);
                            }
                        }
                        let mut conn = 0.0;
                        for pp in 0..DIM {
                            let xp = b0_inv[pp][fk];
                            if xp == 0.0 {
                                continue;
                            }
                            for n in 0..DIM {
                                if b0_inv[n][j] != 0.0 {
                                    conn += gamma.value(m, pp, n) * xp * b0_inv[n][j];
                                }
                            }
                        }
                        acc += b0[i][m] * (dir + conn);
                    }
                    theta[i][j] = acc;
                }
            }
            theta_frame.push(theta);
        }

        Ok(FramePoint {
            p: *p,
            b0,
            b0_inv,
            g0,
            gamma,
            curvature,
            nabla,
            r_frame,
            nabla_r_frame,
            theta_frame,
        })
    }

    /// Max |EᵀG + GE| over all frame curvature and connection values, with
    /// G the canonical inner product (the frame is G-orthonormal in the
    /// split sense, so frame endomorphisms must be G-antisymmetric).
    pub fn so43_residual(&self) -> f64 {
        let g = crate::algebra::metric_f64();
        let resid = |e: &Mat7| -> f64 {
            let s = numeric::mat_add(
                &numeric::mat_mul(&numeric::mat_transpose(e), &g),
                &numeric::mat_mul(&g, e),
            );
            numeric::mat_max_abs(&s)
        };
        let mut worst = 0.0f64;
        for (_, e) in &self.r_frame {
            worst = worst.max(resid(e));
        }
        for (_, e) in &self.nabla_r_frame {
            worst = worst.max(resid(e));
        }
        for e in &self.theta_frame {
            worst = worst.max(resid(e));
        }
        worst
    }
}

/// Connection form θ(b_k), k = 1..=7, at a point: θ^i_j(X) = b^i(∇_X b_j).
pub fn connection_form(case: &CoframeCase, p: &[f64; DIM]) -> Result<Vec<Mat7>, CurvError> {
    Ok(FramePoint::compute(case, p)?.theta_frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coframe::{flat_case, builtin_example, CaseId};
    use crate::expr;

    fn diag_metric_jets(p: &[f64; DIM], order: usize) -> Vec<Vec<Jet>> {
        // g = diag(1, x1², 1, 1, 1, 1, 1): a 2-plane fixture inside 7 dims
        let x1 = Jet::variable(p[0], 1, order);
        (0..DIM)
            .map(|i| {
                (0..DIM)
                    .map(|j| {
                        if i != j {
                            Jet::zero(order)
                        } else if i == 1 {
                            x1.mul(&x1)
                        } else {
                            Jet::constant(1.0, order)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn flat_christoffel_vanishes() {
        let c = flat_case(CaseId::C2d);
        let p = [0.5; DIM];
        let g = c.metric_jets(&p, 2).unwrap();
        let gamma = christoffel(&g).unwrap();
        for k in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    assert_eq!(gamma.value(k, i, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn two_plane_fixture() {
        // Γ²₁₂ = 1/x1 for g = diag(1, x1²)
        let p = [2.0, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3];
        let g = diag_metric_jets(&p, 2);
        let gamma = christoffel(&g).unwrap();
        assert!((gamma.value(1, 0, 1) - 0.5).abs() < 1e-12);
        assert!((gamma.value(1, 1, 0) - 0.5).abs() < 1e-12);
        // symmetry of lower indices everywhere
        for k in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    assert!((gamma.value(k, i, j) - gamma.value(k, j, i)).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn christoffel_matches_finite_differences() {
        let case = builtin_example(CaseId::C2d);
        let p = [0.4, 0.5, 0.6, 0.7, 0.45, 0.55, 0.65];
        let g = case.metric_jets(&p, 2).unwrap();
        let gamma = christoffel(&g).unwrap();

        // independent oracle: central differences of the metric values
        let h = 1e-5;
        let g_at = |q: &[f64; DIM]| case.metric_at(q).unwrap();
        let g0 = g_at(&p);
        let ginv = numeric::mat_inverse(&g0).unwrap();
        let mut dg = vec![numeric::mat_zero(); DIM];
        for m in 0..DIM {
            let mut pp = p;
            let mut pm = p;
            pp[m] += h;
            pm[m] -= h;
            let (gp, gm) = (g_at(&pp), g_at(&pm));
            for i in 0..DIM {
                for j in 0..DIM {
                    dg[m][i][j] = (gp[i][j] - gm[i][j]) / (2.0 * h);
                }
            }
        }
        for k in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    let mut fd = 0.0;
                    for l in 0..DIM {
                        fd += 0.5 * ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                    }
                    let jet = gamma.value(k, i, j);
                    assert!(
                        (fd - jet).abs() < 1e-5 * (1.0 + jet.abs()),
                        "Γ^{k}_{i}{j}: fd {fd} vs jet {jet}"
                    );
                }
            }
        }
    }

    #[test]
    fn flat_curvature_vanishes() {
        let c = flat_case(CaseId::C1b);
        let p = [0.5; DIM];
        let fp = FramePoint::compute(&c, &p).unwrap();
        for (_, e) in &fp.r_frame {
            assert_eq!(numeric::mat_max_abs(e), 0.0);
        }
        for e in &fp.theta_frame {
            assert_eq!(numeric::mat_max_abs(e), 0.0);
        }
    }

    #[test]
    fn case_2d_curvature_in_m12() {
        let reg = crate::algebra::registry();
        let m12 = reg.get("m12").unwrap();
        let case = builtin_example(CaseId::C2d);
        let p = [0.3, 0.8, 0.2, 0.6, 0.5, 0.7, 0.4];
        let fp = FramePoint::compute(&case, &p).unwrap();
        for ((i, j), e) in &fp.r_frame {
            let (_, resid) = m12.membership(e);
            assert!(resid < 1e-8, "R(b{i},b{j}) residual {resid:e}");
        }
        for e in &fp.theta_frame {
            let (_, resid) = m12.membership(e);
            assert!(resid < 1e-8, "theta residual {resid:e}");
        }
        assert!(fp.curvature.first_bianchi_residual() < 1e-10);
        assert!(fp.curvature.lowered_antisymmetry_residual(&fp.g0) < 1e-10);
        assert!(fp.so43_residual() < 1e-10);
    }

    #[test]
    fn second_bianchi_on_case_1a() {
        let case = builtin_example(CaseId::C1a);
        let p = [0.35, 0.45, 0.55, 0.65, 0.4, 0.5, 0.6];
        let fp = FramePoint::compute(&case, &p).unwrap();
        let r = fp.nabla.second_bianchi_residual();
        assert!(r < 1e-8, "second Bianchi residual {r:e}");
    }

    #[test]
    fn case_1c_nabla_r_in_co2_m12() {
        let reg = crate::algebra::registry();
        let alg = reg.get("co2_m12").unwrap();
        let case = builtin_example(CaseId::C1c);
        let p = [0.25, 0.35, 0.45, 0.55, 0.3, 0.4, 0.5];
        let fp = FramePoint::compute(&case, &p).unwrap();
        for ((m, i, j), e) in &fp.nabla_r_frame {
            let (_, resid) = alg.membership(e);
            assert!(resid < 1e-8, "(∇_b{m} R)(b{i},b{j}) residual {resid:e}");
        }
    }

    #[test]
    fn case_1a_theta_21_vanishes() {
        // the b²(∇b₁) component of the connection form is identically zero
        let case = builtin_example(CaseId::C1a);
        let p = [0.42, 0.31, 0.27, 0.66, 0.38, 0.52, 0.61];
        let fp = FramePoint::compute(&case, &p).unwrap();
        for k in 0..DIM {
            assert!(
                fp.theta_frame[k][1][0].abs() < 1e-10,
                "θ²₁(b_{}) = {}",
                k + 1,
                fp.theta_frame[k][1][0]
            );
        }
    }

    #[test]
    fn riemann_matches_finite_difference_of_gamma() {
        let case = builtin_example(CaseId::C2b);
        let p = [0.5, 0.45, 0.62, 0.33, 0.41, 0.58, 0.72];
        let g = case.metric_jets(&p, 3).unwrap();
        let gamma = christoffel(&g).unwrap();
        let r = riemann(&gamma).unwrap();

        let h = 1e-5;
        let gamma_at = |q: &[f64; DIM]| {
            let gj = case.metric_jets(q, 1).unwrap();
            christoffel(&gj).unwrap()
        };
        // spot-check a batch of components against the FD oracle
        for (l, k, i, j) in [
            (0usize, 3usize, 4usize, 5usize),
            (0, 4, 4, 6),
            (1, 4, 4, 5),
            (0, 5, 5, 6),
            (2, 4, 4, 6),
        ] {
            let mut pp = p;
            let mut pm = p;
            pp[i] += h;
            pm[i] -= h;
            let di = (gamma_at(&pp).value(l, j, k) - gamma_at(&pm).value(l, j, k)) / (2.0 * h);
            let mut pp = p;
            let mut pm = p;
            pp[j] += h;
            pm[j] -= h;
            let dj = (gamma_at(&pp).value(l, i, k) - gamma_at(&pm).value(l, i, k)) / (2.0 * h);
            let mut quad = 0.0;
            for m in 0..DIM {
                quad += gamma.value(l, i, m) * gamma.value(m, j, k)
                    - gamma.value(l, j, m) * gamma.value(m, i, k);
            }
            let fd = di - dj + quad;
            let jet = r.component(l, k, i, j).value();
            assert!(
                (fd - jet).abs() < 1e-5 * (1.0 + jet.abs()),
                "R^{l}_{k}{i}{j}: fd {fd} vs jet {jet}"
            );
        }
    }

    #[test]
    fn singular_coframe_rejected() {
        // b¹ row scaled to zero makes the coframe singular
        let mut case = builtin_example(CaseId::C2d);
        for j in 0..DIM {
            case.b[0][j] = expr::parse("0").unwrap();
        }
        let p = [0.5; DIM];
        assert!(matches!(
            FramePoint::compute(&case, &p),
            Err(CurvError::SingularCoframe)
        ));
    }
}
