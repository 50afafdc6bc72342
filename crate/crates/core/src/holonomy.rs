//! Holonomy certificates: curvature spans against the expected algebra and
//! an independent parallel-transport verification around small loops.
//!
//! The span side stacks the frame endomorphisms R(b_i,b_j) and
//! (∇_{b_m} R)(b_i,b_j) over several sample points and reads the dimension
//! off the singular values. The transport side integrates V' = −Γ(γ')V
//! around small coordinate rectangles and checks that the logarithm of the
//! resulting frame transformation lies in the expected algebra; for a loop
//! in the plane (i,j) with side ε the log equals −ε²·R(∂_i,∂_j) + O(ε³).

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{registry, Subalgebra};
use crate::coframe::{build_case, BuildError, CaseId, CoframeCase, DomainBox};
use crate::curvature::{christoffel, CurvError, FramePoint};
use crate::expr::EvalError;
use crate::numeric::{self, Mat7};
use crate::rng;

pub const DIM: usize = 7;

#[derive(Debug, Error)]
pub enum HolError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Curv(#[from] CurvError),
    #[error("expression evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("transport result too far from identity for a logarithm (‖P−I‖ = {0:.3e}); shrink the loop")]
    LogDomain(f64),
    #[error("numeric failure: {0}")]
    Num(#[from] numeric::NumError),
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
}

/// Tolerance ladder for the certificate checks.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Tolerances {
    /// Constraint residuals (exact identities of the family).
    pub pde: f64,
    /// Connection-form membership.
    pub theta: f64,
    /// Curvature and ∇-curvature membership.
    pub membership: f64,
    /// Relative singular-value cutoff for span dimensions.
    pub span_rel: f64,
    /// Required ratio between retained and discarded singular values.
    pub gap_min: f64,
    /// Transport-log membership.
    pub transport: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pde: 1e-10,
            theta: 1e-8,
            membership: 1e-8,
            span_rel: 1e-6,
            gap_min: 10.0,
            transport: 1e-4,
        }
    }
}

/// Reproducible certification run configuration.
#[derive(Clone, Copy, Debug)]
pub struct CertifyConfig {
    pub domain: DomainBox,
    /// Points for constraint and signature checks.
    pub points: usize,
    /// Points entering the curvature span (≤ points is typical).
    pub span_points: usize,
    pub seed: u64,
    pub loop_eps: f64,
    pub loop_steps: usize,
    pub tol: Tolerances,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            domain: DomainBox::default(),
            points: 20,
            span_points: 10,
            seed: 42,
            loop_eps: 1e-2,
            loop_steps: 16,
            tol: Tolerances::default(),
        }
    }
}

/// A small rectangular loop in a coordinate plane.
#[derive(Clone, Copy, Debug)]
pub struct LoopSpec {
    pub base: [f64; DIM],
    /// 1-based coordinate plane (i, j), i ≠ j.
    pub plane: (u8, u8),
    pub eps: f64,
    /// RK4 steps per side.
    pub steps: usize,
}

/// Parallel transport around the rectangle base → +ε e_i → +ε e_j → back,
/// returning log(P) conjugated into the coframe basis at the base point.
pub fn transport_loop(case: &CoframeCase, spec: &LoopSpec) -> Result<Mat7, HolError> {
    assert!(spec.eps > 0.0 && spec.steps >= 1);
    let (pi, pj) = (spec.plane.0 as usize - 1, spec.plane.1 as usize - 1);
    assert!(pi != pj && pi < DIM && pj < DIM);

    // Γ(∂_dir) value matrix at a point
    let gamma_dir = |q: &[f64; DIM], dir: usize| -> Result<Mat7, HolError> {
        let g = case.metric_jets(q, 1)?;
        let gamma = christoffel(&g)?;
        Ok(gamma.direction_matrix(dir))
    };

    let mut p_mat = numeric::mat_identity();
    // legs: (start offset in units of ε along (e_i, e_j), direction, sign)
    let legs: [([f64; 2], usize, f64); 4] = [
        ([0.0, 0.0], pi, 1.0),
        ([1.0, 0.0], pj, 1.0),
        ([1.0, 1.0], pi, -1.0),
        ([0.0, 1.0], pj, -1.0),
    ];
    let h = 1.0 / spec.steps as f64;
    for (offset, dir, sign) in legs {
        let start = {
            let mut q = spec.base;
            q[pi] += spec.eps * offset[0];
            q[pj] += spec.eps * offset[1];
            q
        };
        let at = |t: f64| -> [f64; DIM] {
            let mut q = start;
            q[dir] += sign * spec.eps * t;
            q
        };
        // dP/dt = −ε·(±1)·Γ(∂_dir)(γ(t))·P
        let rhs = |t: f64, p: &Mat7| -> Result<Mat7, HolError> {
            let a = gamma_dir(&at(t), dir)?;
            Ok(numeric::mat_scale(&numeric::mat_mul(&a, p), -sign * spec.eps))
        };
        for step in 0..spec.steps {
            let t0 = step as f64 * h;
            let k1 = rhs(t0, &p_mat)?;
            let k2 = rhs(
                t0 + 0.5 * h,
                &numeric::mat_add(&p_mat, &numeric::mat_scale(&k1, 0.5 * h)),
            )?;
            let k3 = rhs(
                t0 + 0.5 * h,
                &numeric::mat_add(&p_mat, &numeric::mat_scale(&k2, 0.5 * h)),
            )?;
            let k4 = rhs(t0 + h, &numeric::mat_add(&p_mat, &numeric::mat_scale(&k3, h)))?;
            let mut incr = numeric::mat_add(&k1, &numeric::mat_scale(&k2, 2.0));
            incr = numeric::mat_add(&incr, &numeric::mat_scale(&k3, 2.0));
            incr = numeric::mat_add(&incr, &k4);
            p_mat = numeric::mat_add(&p_mat, &numeric::mat_scale(&incr, h / 6.0));
        }
    }

    let dist = numeric::mat_frobenius(&numeric::mat_sub(&p_mat, &numeric::mat_identity()));
    if dist > 0.5 {
        return Err(HolError::LogDomain(dist));
    }
    let log = numeric::mat_log(&p_mat)?;
    let b0 = case.b_at(&spec.base)?;
    let b0_inv = numeric::mat_inverse(&b0)?;
    Ok(numeric::mat_mul(&numeric::mat_mul(&b0, &log), &b0_inv))
}

/// Per-check outcomes backing the overall verdict.
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct Checks {
    pub pde: bool,
    pub signature: bool,
    pub theta: bool,
    pub membership: bool,
    pub span: bool,
    pub transport: bool,
}

impl Checks {
    pub fn pass(&self) -> bool {
        self.pde && self.signature && self.theta && self.membership && self.span && self.transport
    }
}

/// The certificate emitted for one case run.
#[derive(Clone, Debug, Serialize)]
pub struct HolonomyCertificate {
    pub case: String,
    pub expected_algebra: String,
    pub expected_dim: usize,
    pub seed: u64,
    pub points: usize,
    pub pde_residual: f64,
    pub theta_residual: f64,
    pub curvature_residual: f64,
    #[serde(rename = "span_dim_R")]
    pub span_dim_r: usize,
    pub span_dim_total: usize,
    pub transport_residual: f64,
    pub gap: f64,
    pub checks: Checks,
    pub verdict: String,
}

/// Span data for a set of frame points: dimensions, spectral gap, and the
/// worst membership residual of any vector entering the span.
pub struct SpanResult {
    pub span_dim_r: usize,
    pub span_dim_total: usize,
    pub gap: f64,
    pub membership_residual: f64,
    pub theta_residual: f64,
}

pub fn span_certificate(
    frame_points: &[FramePoint],
    algebra: &Subalgebra,
    tol: &Tolerances,
) -> SpanResult {
    let flatten = |m: &Mat7| -> Vec<f64> { m.iter().flatten().copied().collect() };
    let mut rows_r: Vec<Vec<f64>> = Vec::new();
    let mut rows_total: Vec<Vec<f64>> = Vec::new();
    let mut membership_residual = 0.0f64;
    let mut theta_residual = 0.0f64;
    for fp in frame_points {
        for (_, e) in &fp.r_frame {
            let (_, resid) = algebra.membership(e);
            membership_residual = membership_residual.max(resid);
            rows_r.push(flatten(e));
            rows_total.push(flatten(e));
        }
        for (_, e) in &fp.nabla_r_frame {
            let (_, resid) = algebra.membership(e);
            membership_residual = membership_residual.max(resid);
            rows_total.push(flatten(e));
        }
        for e in &fp.theta_frame {
            let (_, resid) = algebra.membership(e);
            theta_residual = theta_residual.max(resid);
        }
    }
    let sv_r = numeric::singular_values_gram(&rows_r);
    let sv_total = numeric::singular_values_gram(&rows_total);
    let (span_dim_r, _) = numeric::rank_from_singular_values(&sv_r, tol.span_rel);
    let (span_dim_total, gap) = numeric::rank_from_singular_values(&sv_total, tol.span_rel);
    SpanResult {
        span_dim_r,
        span_dim_total,
        gap,
        membership_residual,
        theta_residual,
    }
}

/// Runs the full certification battery for an assembled case.
pub fn certify_built(case: &CoframeCase, config: &CertifyConfig) -> Result<HolonomyCertificate, HolError> {
    let algebra = registry()
        .get(case.expected_algebra())
        .map_err(|e| HolError::UnknownAlgebra(e.to_string()))?;
    let expected_dim = algebra.dim();
    let tol = &config.tol;

    let points = rng::sample_points(config.seed, config.points, config.domain.lo, config.domain.hi);

    // constraint residuals and metric signature
    let pde_residual = case.max_constraint_residual(&points)?;
    let mut signature_ok = true;
    for p in &points {
        if case.signature_at(p)? != (3, 4) {
            signature_ok = false;
        }
    }

    // curvature spans over the leading sample points
    let span_points = config.span_points.min(points.len()).max(1);
    let mut frames = Vec::with_capacity(span_points);
    for p in points.iter().take(span_points) {
        frames.push(FramePoint::compute(case, p)?);
    }
    let span = span_certificate(&frames, &algebra, tol);

    // transport logs around all coordinate-plane loops at the box midpoint
    let mid = 0.5 * (config.domain.lo + config.domain.hi);
    let base = [mid; DIM];
    let mut transport_residual = 0.0f64;
    for i in 1..=DIM as u8 {
        for j in (i + 1)..=DIM as u8 {
            let spec = LoopSpec {
                base,
                plane: (i, j),
                eps: config.loop_eps,
                steps: config.loop_steps,
            };
            let log = transport_loop(case, &spec)?;
            let (_, resid) = algebra.membership(&log);
            transport_residual = transport_residual.max(resid);
        }
    }

    let checks = Checks {
        pde: pde_residual < tol.pde,
        signature: signature_ok,
        theta: span.theta_residual < tol.theta,
        membership: span.membership_residual < tol.membership,
        span: span.span_dim_total == expected_dim && span.gap >= tol.gap_min,
        transport: transport_residual < tol.transport,
    };

    Ok(HolonomyCertificate {
        case: case.case.as_str().to_string(),
        expected_algebra: case.expected_algebra().to_string(),
        expected_dim,
        seed: config.seed,
        points: config.points,
        pde_residual,
        theta_residual: span.theta_residual,
        curvature_residual: span.membership_residual,
        span_dim_r: span.span_dim_r,
        span_dim_total: span.span_dim_total,
        transport_residual,
        gap: span.gap,
        checks,
        verdict: if checks.pass() { "pass" } else { "fail" }.to_string(),
    })
}

/// Builds the case from slot sources and certifies it.
pub fn certify(
    case_id: CaseId,
    slots: &std::collections::BTreeMap<String, String>,
    config: &CertifyConfig,
) -> Result<HolonomyCertificate, HolError> {
    let case = build_case(case_id, slots)?;
    certify_built(&case, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coframe::{flat_case, builtin_example};

    #[test]
    fn flat_loop_log_is_zero() {
        let case = flat_case(CaseId::C2d);
        let spec = LoopSpec {
            base: [0.5; DIM],
            plane: (5, 6),
            eps: 1e-2,
            steps: 8,
        };
        let log = transport_loop(&case, &spec).unwrap();
        assert!(numeric::mat_max_abs(&log) < 1e-14);
    }

    /// ‖log(P)/ε² − (−B·R(∂i,∂j)·B⁻¹)‖ for one loop.
    fn loop_error(case: &CoframeCase, base: [f64; DIM], plane: (u8, u8), eps: f64) -> f64 {
        let fp = FramePoint::compute(case, &base).unwrap();
        let e = fp
            .curvature
            .endo_coord(plane.0 as usize - 1, plane.1 as usize - 1);
        let target = numeric::mat_scale(
            &numeric::mat_mul(&numeric::mat_mul(&fp.b0, &e), &fp.b0_inv),
            -1.0,
        );
        let spec = LoopSpec {
            base,
            plane,
            eps,
            steps: 16,
        };
        let log = transport_loop(case, &spec).unwrap();
        let scaled = numeric::mat_scale(&log, 1.0 / (eps * eps));
        numeric::mat_frobenius(&numeric::mat_sub(&scaled, &target))
    }

    #[test]
    fn loop_log_matches_curvature_2d() {
        // log(P)/ε² → −R(∂₅,∂₆) (frame transformed). For this family the
        // expansion terminates at ε², so the error sits at the roundoff
        // floor for every ε; the scaling clause accepts either a halving
        // error or an error already below the floor.
        let case = builtin_example(CaseId::C2d);
        let base = [0.5; DIM];
        let e1 = loop_error(&case, base, (5, 6), 1e-2);
        let e2 = loop_error(&case, base, (5, 6), 5e-3);
        assert!(e1 < 1e-3, "error {e1:e}");
        let floor = 1e-9;
        assert!(
            e2 <= (0.75 * e1).max(floor),
            "expected first-order convergence or floor: e1 {e1:e}, e2 {e2:e}"
        );
    }

    #[test]
    fn loop_log_first_order_rate_1a() {
        // a family with a genuine ε³ term shows the first-order rate
        let case = builtin_example(CaseId::C1a);
        let base = [0.5; DIM];
        let e1 = loop_error(&case, base, (5, 6), 1e-2);
        let e2 = loop_error(&case, base, (5, 6), 5e-3);
        let ratio = e2 / e1;
        assert!(
            (0.25..0.75).contains(&ratio),
            "expected halving, e1 {e1:e}, e2 {e2:e}, ratio {ratio}"
        );
    }

    #[test]
    fn loop_log_in_algebra_2a() {
        let case = builtin_example(CaseId::C2a);
        let alg = registry().get("rdiag10_m11").unwrap();
        let spec = LoopSpec {
            base: [0.5; DIM],
            plane: (5, 6),
            eps: 1e-2,
            steps: 16,
        };
        let log = transport_loop(&case, &spec).unwrap();
        let (_, resid) = alg.membership(&log);
        assert!(resid < 1e-4, "membership residual {resid:e}");
        assert!(numeric::mat_max_abs(&log) > 1e-7, "loop log unexpectedly zero");
    }

    #[test]
    fn certify_case_2d_passes() {
        let cert = certify_built(&builtin_example(CaseId::C2d), &CertifyConfig::default()).unwrap();
        assert_eq!(cert.verdict, "pass", "{cert:?}");
        assert_eq!(cert.span_dim_total, 3);
        assert!(cert.gap >= 10.0);
    }

    #[test]
    fn certify_flat_fails_with_span_zero() {
        let cert = certify_built(&flat_case(CaseId::C2d), &CertifyConfig::default()).unwrap();
        assert_eq!(cert.verdict, "fail");
        assert_eq!(cert.span_dim_total, 0);
        assert!(cert.checks.pde, "flat slots satisfy the constraints");
        assert!(!cert.checks.span);
    }

    #[test]
    fn span_monotone_in_points() {
        let case = builtin_example(CaseId::C2b);
        let alg = registry().get("rdiag10_m12").unwrap();
        let pts = rng::sample_points(7, 4, 0.1, 0.9);
        let frames: Vec<FramePoint> = pts
            .iter()
            .map(|p| FramePoint::compute(&case, p).unwrap())
            .collect();
        let tol = Tolerances::default();
        let mut prev = 0usize;
        for n in 1..=frames.len() {
            let s = span_certificate(&frames[..n], &alg, &tol);
            assert!(s.span_dim_total >= prev);
            prev = s.span_dim_total;
        }
    }

    #[test]
    fn dropping_a_slot_shrinks_the_span() {
        // the 1a example with F6 = 0 still satisfies every constraint but
        // realizes a smaller holonomy algebra; the certificate must fail on
        // the span dimension alone
        let mut slots = crate::coframe::builtin_examples()
            .into_iter()
            .find(|(c, _)| *c == CaseId::C1a)
            .unwrap()
            .1;
        slots.insert("F6".into(), "0".into());
        let built = build_case(CaseId::C1a, &slots).unwrap();
        let cert = certify_built(&built, &CertifyConfig::default()).unwrap();
        assert_eq!(cert.verdict, "fail");
        assert_eq!(cert.span_dim_total, 6);
        assert!(cert.checks.pde && cert.checks.theta && cert.checks.membership);
        assert!(!cert.checks.span);
    }

    #[test]
    fn oversized_loop_rejected() {
        let case = builtin_example(CaseId::C1a);
        let spec = LoopSpec {
            base: [0.3; DIM],
            plane: (5, 6),
            eps: 0.5,
            steps: 32,
        };
        match transport_loop(&case, &spec) {
            Err(HolError::LogDomain(d)) => assert!(d > 0.5),
            other => panic!("expected a log-domain rejection, got {other:?}"),
        }
    }

    #[test]
    fn certificate_deterministic() {
        let case = builtin_example(CaseId::C2c);
        let cfg = CertifyConfig::default();
        let a = serde_json::to_string(&certify_built(&case, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&certify_built(&case, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
