//! The eight coframe metric families on a coordinate box in R⁷.
//!
//! Each case fixes a pattern for the coframe b¹..b⁷ against the coordinate
//! differentials, a set of free function slots with prescribed variable
//! dependence, derived coefficients built symbolically from the slots, and
//! residual constraint equations that the slots must satisfy identically.
//! The metric is always g = BᵀGB with G the canonical split inner product,
//! so every case has signature (4,3) wherever the coframe is regular.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{self, diff, eval_jet, Expr, ParseError};
use crate::jet::Jet;
use crate::numeric::{self, Mat7};
use crate::rng;

pub const DIM: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    C1a,
    C1b,
    C1c,
    C1d,
    C2a,
    C2b,
    C2c,
    C2d,
}

impl CaseId {
    pub fn all() -> [CaseId; 8] {
        use CaseId::*;
        [C1a, C1b, C1c, C1d, C2a, C2b, C2c, C2d]
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseId::C1a => "1a",
            CaseId::C1b => "1b",
            CaseId::C1c => "1c",
            CaseId::C1d => "1d",
            CaseId::C2a => "2a",
            CaseId::C2b => "2b",
            CaseId::C2c => "2c",
            CaseId::C2d => "2d",
        }
    }

    pub fn parse(s: &str) -> Option<CaseId> {
        CaseId::all().into_iter().find(|c| c.as_str() == s)
    }

    /// Name of the holonomy algebra this family realizes.
    pub fn expected_algebra(&self) -> &'static str {
        match self {
            CaseId::C1a => "gl2_m12",
            CaseId::C1b => "sl2_m12",
            CaseId::C1c => "co2_m12",
            CaseId::C1d => "d_m12",
            CaseId::C2a => "rdiag10_m11",
            CaseId::C2b => "rdiag10_m12",
            CaseId::C2c => "m11",
            CaseId::C2d => "m12",
        }
    }

    pub fn expected_dim(&self) -> usize {
        match self {
            CaseId::C1a => 7,
            CaseId::C1b => 6,
            CaseId::C1c => 5,
            CaseId::C1d => 5,
            CaseId::C2a => 3,
            CaseId::C2b => 4,
            CaseId::C2c => 2,
            CaseId::C2d => 3,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A function slot: name plus the coordinates it may depend on.
#[derive(Clone, Copy, Debug)]
pub struct SlotSpec {
    pub name: &'static str,
    pub allowed_vars: &'static [u8],
}

const V567: &[u8] = &[5, 6, 7];
const V23567: &[u8] = &[2, 3, 5, 6, 7];
const V56: &[u8] = &[5, 6];
const V57: &[u8] = &[5, 7];
const V67: &[u8] = &[6, 7];

pub fn slot_specs(case: CaseId) -> &'static [SlotSpec] {
    macro_rules! slots {
        ($(($n:literal, $v:expr)),* $(,)?) => {
            &[$(SlotSpec { name: $n, allowed_vars: $v }),*]
        };
    }
    match case {
        CaseId::C1a => slots![
            ("u", V567),
            ("s6", V23567),
            ("t6", V23567),
            ("t7", V23567),
            ("F4", V567),
            ("F5", V567),
            ("F6", V567),
            ("F7", V567),
        ],
        CaseId::C1b => slots![
            ("r6", V567),
            ("r7", V567),
            ("s6", V23567),
            ("t6", V23567),
            ("t7", V23567),
            ("F4", V567),
            ("F5", V567),
        ],
        CaseId::C1c => slots![
            ("u", V567),
            ("v", V67),
            ("F1", V567),
            ("F2", V567),
            ("F3", V567),
            ("F4", V567),
            ("F5", V567),
            ("F6", V567),
            ("F7", V567),
        ],
        CaseId::C1d => slots![
            ("u", V567),
            ("F1", V56),
            ("F2", V57),
            ("F5", V567),
            ("F6", V567),
            ("F7", V567),
        ],
        CaseId::C2a => slots![("v", V56), ("t5", V56), ("F5", V56), ("F6", V57)],
        CaseId::C2b => slots![("v", V56), ("F5", V567), ("F6", V567)],
        CaseId::C2c => slots![("t5", V56), ("F5", V567), ("F7", V57)],
        CaseId::C2d => slots![("r6", V567), ("F", V567)],
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("missing slot `{0}`")]
    MissingSlot(String),
    #[error("unexpected slot `{0}` for this case")]
    UnexpectedSlot(String),
    #[error("slot `{slot}`: {err}")]
    Parse { slot: String, err: ParseError },
    #[error("slot `{slot}` depends on forbidden variable x{var}")]
    ForbiddenVariable { slot: String, var: u8 },
    #[error("slot `{slot}`: domain error while checking dependence: {msg}")]
    GuardDomain { slot: String, msg: String },
}

/// One fully assembled coframe family instance.
#[derive(Clone, Debug)]
pub struct CoframeCase {
    pub case: CaseId,
    pub slots: BTreeMap<String, Expr>,
    /// b^i = Σ_j b[i][j]·dx_j (0-based storage of the 1-based pattern).
    pub b: Vec<Vec<Expr>>,
    /// Residuals that must vanish identically for the family's holonomy claim.
    pub constraints: Vec<Expr>,
}

impl CoframeCase {
    pub fn expected_algebra(&self) -> &'static str {
        self.case.expected_algebra()
    }

    /// Jets of all coframe entries at a point.
    pub fn b_jets(&self, p: &[f64; DIM], order: usize) -> Result<Vec<Vec<Jet>>, expr::EvalError> {
        self.b
            .iter()
            .map(|row| row.iter().map(|e| eval_jet(e, p, order)).collect())
            .collect()
    }

    /// Coframe value matrix B(p).
    pub fn b_at(&self, p: &[f64; DIM]) -> Result<Mat7, expr::EvalError> {
        let mut out = numeric::mat_zero();
        for i in 0..DIM {
            for j in 0..DIM {
                out[i][j] = expr::eval(&self.b[i][j], p)?;
            }
        }
        Ok(out)
    }

    /// Metric jets g = BᵀGB at a point; symmetric by construction.
    pub fn metric_jets(
        &self,
        p: &[f64; DIM],
        order: usize,
    ) -> Result<Vec<Vec<Jet>>, expr::EvalError> {
        let b = self.b_jets(p, order)?;
        // hyperbolic pairs (1,5), (2,6), (3,7) and the −(b⁴)² term
        let pairs = [(0usize, 4usize), (1, 5), (2, 6)];
        let mut g: Vec<Vec<Jet>> = (0..DIM)
            .map(|_| (0..DIM).map(|_| Jet::zero(order)).collect())
            .collect();
        for m in 0..DIM {
            for n in m..DIM {
                let mut acc = Jet::zero(order);
                for &(i, j) in &pairs {
                    acc = acc.add(&b[i][m].mul(&b[j][n]));
                    acc = acc.add(&b[j][m].mul(&b[i][n]));
                }
                acc = acc.sub(&b[3][m].mul(&b[3][n]));
                g[m][n] = acc.clone();
                if n != m {
                    g[n][m] = acc;
                }
            }
        }
        Ok(g)
    }

    /// Metric value matrix at a point.
    pub fn metric_at(&self, p: &[f64; DIM]) -> Result<Mat7, expr::EvalError> {
        let g = self.metric_jets(p, 0)?;
        let mut out = numeric::mat_zero();
        for i in 0..DIM {
            for j in 0..DIM {
                out[i][j] = g[i][j].value();
            }
        }
        Ok(out)
    }

    /// (positive, negative) eigenvalue counts of g at a point.
    pub fn signature_at(&self, p: &[f64; DIM]) -> Result<(usize, usize), expr::EvalError> {
        Ok(numeric::signature(&self.metric_at(p)?))
    }

    /// Max |residual| of each constraint over the given points.
    pub fn constraint_residuals(
        &self,
        points: &[[f64; DIM]],
    ) -> Result<Vec<f64>, expr::EvalError> {
        let mut out = vec![0.0; self.constraints.len()];
        for p in points {
            for (k, c) in self.constraints.iter().enumerate() {
                let v = expr::eval(c, p)?.abs();
                if v > out[k] {
                    out[k] = v;
                }
            }
        }
        Ok(out)
    }

    pub fn max_constraint_residual(&self, points: &[[f64; DIM]]) -> Result<f64, expr::EvalError> {
        Ok(self
            .constraint_residuals(points)?
            .into_iter()
            .fold(0.0, f64::max))
    }
}

/// Builds a case from textual slot functions, enforcing the slot list and
/// each slot's permitted variable dependence.
pub fn build_case(case: CaseId, slots: &BTreeMap<String, String>) -> Result<CoframeCase, BuildError> {
    let specs = slot_specs(case);
    for name in slots.keys() {
        if !specs.iter().any(|s| s.name == name) {
            return Err(BuildError::UnexpectedSlot(name.clone()));
        }
    }
    let mut parsed: BTreeMap<String, Expr> = BTreeMap::new();
    for spec in specs {
        let src = slots
            .get(spec.name)
            .ok_or_else(|| BuildError::MissingSlot(spec.name.to_string()))?;
        let e = expr::parse(src).map_err(|err| BuildError::Parse {
            slot: spec.name.to_string(),
            err,
        })?;
        guard_dependence(spec, &e)?;
        parsed.insert(spec.name.to_string(), e);
    }
    Ok(assemble(case, parsed))
}

/// The dependence guard: the numeric derivative of the slot with respect to
/// every forbidden coordinate must vanish at the sample points.
fn guard_dependence(spec: &SlotSpec, e: &Expr) -> Result<(), BuildError> {
    let points = rng::sample_points(0x9A2D_5EED, 5, 0.15, 0.85);
    for var in 1..=DIM as u8 {
        if spec.allowed_vars.contains(&var) {
            continue;
        }
        if !e.mentions(var) {
            continue;
        }
        let d = diff(e, var);
        for p in &points {
            let v = expr::eval(&d, p).map_err(|err| BuildError::GuardDomain {
                slot: spec.name.to_string(),
                msg: err.to_string(),
            })?;
            if v.abs() > 1e-12 {
                return Err(BuildError::ForbiddenVariable {
                    slot: spec.name.to_string(),
                    var,
                });
            }
        }
    }
    Ok(())
}

fn assemble(case: CaseId, slots: BTreeMap<String, Expr>) -> CoframeCase {
    use expr::{add, div, exp, mul, neg, sub};
    let s = |name: &str| slots.get(name).cloned().unwrap_or_else(Expr::zero);
    let x = |i: u8| Expr::var(i);
    let int = Expr::int;
    let inv_sqrt2 = Expr::constant(crate::exact::Scalar::inv_sqrt2());
    let sqrt2 = Expr::constant(crate::exact::Scalar::sqrt2());
    let half = |e: Expr| div(e, int(2));
    let d = |e: &Expr, i: u8| diff(e, i);

    // identity pattern
    let mut b: Vec<Vec<Expr>> = (0..DIM)
        .map(|i| {
            (0..DIM)
                .map(|j| if i == j { Expr::one() } else { Expr::zero() })
                .collect()
        })
        .collect();
    let mut constraints: Vec<Expr> = Vec::new();

    // the shared pair of quadratic compatibility residuals, used by 1a/1b/1c:
    // ds₇/dx₆ + t₇·ds₆/dx₃ + s₇·ds₆/dx₂ − ds₆/dx₇ − t₆·ds₇/dx₃ − s₆·ds₇/dx₂
    // and the analogous one with (s₆,s₇) ↔ (t₆,t₇).
    let torsion_pair = |s6: &Expr, s7: &Expr, t6: &Expr, t7: &Expr| -> (Expr, Expr) {
        let c3 = sub(
            add(
                add(d(s7, 6), mul(t7.clone(), d(s6, 3))),
                mul(s7.clone(), d(s6, 2)),
            ),
            add(
                add(d(s6, 7), mul(t6.clone(), d(s7, 3))),
                mul(s6.clone(), d(s7, 2)),
            ),
        );
        let c4 = sub(
            add(
                add(d(t7, 6), mul(t7.clone(), d(t6, 3))),
                mul(s7.clone(), d(t6, 2)),
            ),
            add(
                add(d(t6, 7), mul(t6.clone(), d(t7, 3))),
                mul(s6.clone(), d(t7, 2)),
            ),
        );
        (c3, c4)
    };

    match case {
        CaseId::C1a => {
            let (u, s6, t6, t7) = (s("u"), s("s6"), s("t6"), s("t7"));
            let (f4, f5, f6, f7) = (s("F4"), s("F5"), s("F6"), s("F7"));
            let eu = exp(u.clone());
            let s7 = add(t6.clone(), f4.clone());
            let bracket = sub(
                sub(
                    d(&mul(eu.clone(), f6.clone()), 7),
                    d(&mul(eu.clone(), f7.clone()), 6),
                ),
                d(&f4, 5),
            );
            let r5 = add(mul(mul(x(4), inv_sqrt2.clone()), bracket), f5);
            let r6 = add(mul(x(1), d(&u, 6)), f6);
            let r7 = add(mul(x(1), d(&u, 7)), f7);
            b[0][4] = r5;
            b[0][5] = r6;
            b[0][6] = r7;
            b[1][5] = s6.clone();
            b[1][6] = s7.clone();
            b[2][5] = t6.clone();
            b[2][6] = t7.clone();
            b[4][4] = eu;
            constraints.push(sub(d(&u, 6), add(d(&s6, 2), d(&t6, 3))));
            constraints.push(sub(d(&u, 7), add(d(&t7, 3), d(&t6, 2))));
            let (c3, c4) = torsion_pair(&s6, &s7, &t6, &t7);
            constraints.push(c3);
            constraints.push(c4);
        }
        CaseId::C1b => {
            let (r6, r7) = (s("r6"), s("r7"));
            let (s6, t6, t7) = (s("s6"), s("t6"), s("t7"));
            let (f4, f5) = (s("F4"), s("F5"));
            let s7 = add(t6.clone(), f4.clone());
            let bracket = sub(sub(d(&r6, 7), d(&r7, 6)), d(&f4, 5));
            let r5 = add(mul(mul(x(4), inv_sqrt2.clone()), bracket), f5);
            b[0][4] = r5;
            b[0][5] = r6;
            b[0][6] = r7;
            b[1][5] = s6.clone();
            b[1][6] = s7.clone();
            b[2][5] = t6.clone();
            b[2][6] = t7.clone();
            constraints.push(add(d(&s6, 2), d(&t6, 3)));
            constraints.push(add(d(&t7, 3), d(&t6, 2)));
            let (c3, c4) = torsion_pair(&s6, &s7, &t6, &t7);
            constraints.push(c3);
            constraints.push(c4);
        }
        CaseId::C1c => {
            let (u, v) = (s("u"), s("v"));
            let (f1, f2, f3, f4) = (s("F1"), s("F2"), s("F3"), s("F4"));
            let (f5, f6, f7) = (s("F5"), s("F6"), s("F7"));
            let eu = exp(u.clone());
            let bracket = sub(
                sub(
                    d(&mul(eu.clone(), f6.clone()), 7),
                    d(&mul(eu.clone(), f7.clone()), 6),
                ),
                d(&f4, 5),
            );
            let r5 = add(mul(mul(x(4), inv_sqrt2.clone()), bracket), f5);
            let r6 = add(mul(x(1), d(&u, 6)), f6);
            let r7 = add(mul(x(1), d(&u, 7)), f7);
            // w = u_{x7} − v·u_{x6} + 2·v_{x6}
            let w = add(
                sub(d(&u, 7), mul(v.clone(), d(&u, 6))),
                mul(int(2), d(&v, 6)),
            );
            let s6 = add(
                add(neg(half(mul(x(3), w.clone()))), half(mul(x(2), d(&u, 6)))),
                f1,
            );
            let t6 = add(
                add(half(mul(x(2), w)), half(mul(x(3), d(&u, 6)))),
                f2,
            );
            let s7 = add(
                sub(
                    add(t6.clone(), mul(v.clone(), s6.clone())),
                    mul(x(2), d(&v, 6)),
                ),
                f3,
            );
            let t7 = add(
                add(
                    sub(half(mul(x(3), d(&u, 7))), half(mul(x(2), d(&u, 6)))),
                    mul(v.clone(), t6.clone()),
                ),
                f4,
            );
            b[0][4] = r5;
            b[0][5] = r6;
            b[0][6] = r7;
            b[1][5] = s6.clone();
            b[1][6] = s7.clone();
            b[2][5] = t6.clone();
            b[2][6] = t7.clone();
            b[4][4] = eu;
            b[5][6] = v;
            let (c3, c4) = torsion_pair(&s6, &s7, &t6, &t7);
            constraints.push(c3);
            constraints.push(c4);
        }
        CaseId::C1d => {
            let u = s("u");
            let (f1, f2) = (s("F1"), s("F2"));
            let (f5, f6, f7) = (s("F5"), s("F6"), s("F7"));
            let eu = exp(u.clone());
            let bracket = sub(
                d(&mul(eu.clone(), f6.clone()), 7),
                d(&mul(eu.clone(), f7.clone()), 6),
            );
            let r5 = add(mul(mul(x(4), inv_sqrt2.clone()), bracket), f5);
            let r6 = add(mul(x(1), d(&u, 6)), f6);
            let r7 = add(mul(x(1), d(&u, 7)), f7);
            let s6 = add(mul(x(2), d(&u, 6)), f1);
            let t7 = add(mul(x(3), d(&u, 7)), f2);
            b[0][4] = r5;
            b[0][5] = r6;
            b[0][6] = r7;
            b[1][5] = s6;
            b[2][6] = t7;
            b[4][4] = eu;
            // u_{x6} must not see x7 and u_{x7} must not see x6
            constraints.push(d(&d(&u, 6), 7));
            constraints.push(d(&d(&u, 7), 6));
        }
        CaseId::C2a => {
            let (v, t5) = (s("v"), s("t5"));
            let (f5, f6) = (s("F5"), s("F6"));
            let r5 = add(
                sub(
                    sub(
                        sub(neg(mul(x(1), d(&v, 6))), mul(mul(x(2), v.clone()), d(&v, 6))),
                        mul(mul(sqrt2.clone(), x(4)), d(&t5, 6)),
                    ),
                    mul(mul(x(7), v.clone()), d(&t5, 6)),
                ),
                f5,
            );
            let r6 = add(sub(neg(mul(x(2), d(&v, 6))), mul(x(7), d(&t5, 6))), f6);
            b[0][4] = r5;
            b[0][5] = r6;
            b[2][4] = t5;
            b[5][4] = v;
        }
        CaseId::C2b => {
            let v = s("v");
            let (f5, f6) = (s("F5"), s("F6"));
            let r5 = add(
                sub(
                    sub(
                        mul(mul(x(4), inv_sqrt2.clone()), d(&f6, 7)),
                        mul(mul(x(2), v.clone()), d(&v, 6)),
                    ),
                    mul(x(1), d(&v, 6)),
                ),
                f5,
            );
            let r6 = add(neg(mul(x(2), d(&v, 6))), f6);
            b[0][4] = r5;
            b[0][5] = r6;
            b[5][4] = v;
        }
        CaseId::C2c => {
            let t5 = s("t5");
            let (f5, f7) = (s("F5"), s("F7"));
            let r5 = add(neg(mul(mul(sqrt2.clone(), x(4)), d(&t5, 6))), f5.clone());
            let r7 = add(t5.clone(), f7.clone());
            b[0][4] = r5;
            b[0][6] = r7;
            b[2][4] = t5.clone();
            constraints.push(sub(d(&f5, 7), add(d(&t5, 5), d(&f7, 5))));
        }
        CaseId::C2d => {
            let (r6, f) = (s("r6"), s("F"));
            let r5 = add(mul(mul(x(4), inv_sqrt2.clone()), d(&r6, 7)), f);
            b[0][4] = r5;
            b[0][5] = r6;
        }
    }

    CoframeCase {
        case,
        slots,
        b,
        constraints,
    }
}

/// The built-in example registry: one instance per case, each known to
/// satisfy its constraints and realize the expected holonomy algebra.
pub fn builtin_examples() -> Vec<(CaseId, BTreeMap<String, String>)> {
    let m = |pairs: &[(&str, &str)]| -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    };
    vec![
        (
            CaseId::C1a,
            m(&[
                ("u", "4/3*x6 + 4*x7/(1+exp(x5))"),
                ("s6", "(x2 + x3*(1+exp(x5)))/3"),
                ("t6", "(x2 + x3*(1+exp(x5)))/(1+exp(x5))"),
                ("t7", "3*(x2 + x3*(1+exp(x5)))/(1+exp(x5))^2"),
                ("F4", "0"),
                ("F5", "0"),
                ("F6", "x6*x7"),
                ("F7", "0"),
            ]),
        ),
        (
            CaseId::C1b,
            m(&[
                ("r6", "x6*x7"),
                ("r7", "0"),
                ("s6", "-(x2 + x3*(1+exp(x5)))"),
                ("t6", "(x2 + x3*(1+exp(x5)))/(1+exp(x5))"),
                ("t7", "-(x2 + x3*(1+exp(x5)))/(1+exp(x5))^2"),
                ("F4", "0"),
                ("F5", "0"),
            ]),
        ),
        (
            CaseId::C1c,
            m(&[
                ("u", "x5*x6"),
                ("v", "0"),
                ("F1", "0"),
                ("F2", "0"),
                ("F3", "0"),
                ("F4", "0"),
                ("F5", "0"),
                ("F6", "x5*x6*x7"),
                ("F7", "0"),
            ]),
        ),
        (
            CaseId::C1d,
            m(&[
                ("u", "x5*(x6+x7)"),
                ("F1", "0"),
                ("F2", "0"),
                ("F5", "0"),
                ("F6", "x5*x6*x7"),
                ("F7", "0"),
            ]),
        ),
        (
            CaseId::C2a,
            m(&[
                ("v", "x6^2/2"),
                ("t5", "x6^3/6"),
                ("F5", "0"),
                ("F6", "0"),
            ]),
        ),
        (
            CaseId::C2b,
            m(&[("v", "x6^2/2"), ("F5", "0"), ("F6", "-x7^2")]),
        ),
        (
            CaseId::C2c,
            m(&[("t5", "x6^2/2"), ("F5", "0"), ("F7", "0")]),
        ),
        (
            CaseId::C2d,
            m(&[("r6", "-2*x6*x7"), ("F", "x7^2/2")]),
        ),
    ]
}

pub fn builtin_example(case: CaseId) -> CoframeCase {
    let (_, slots) = builtin_examples()
        .into_iter()
        .find(|(c, _)| *c == case)
        .expect("every case has a built-in example");
    build_case(case, &slots).expect("built-in example must build")
}

/// Flat instance: all slots zero.
pub fn flat_case(case: CaseId) -> CoframeCase {
    let slots: BTreeMap<String, String> = slot_specs(case)
        .iter()
        .map(|s| (s.name.to_string(), "0".to_string()))
        .collect();
    build_case(case, &slots).expect("flat slots always build")
}

/// JSON case configuration consumed by the CLI `verify` subcommand.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseConfig {
    pub case: String,
    pub slots: BTreeMap<String, String>,
    #[serde(default)]
    pub domain: Option<DomainBox>,
    #[serde(default)]
    pub points: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DomainBox {
    pub lo: f64,
    pub hi: f64,
}

impl Default for DomainBox {
    fn default() -> Self {
        DomainBox { lo: 0.1, hi: 0.9 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x4: f64, x6: f64, x7: f64) -> [f64; 7] {
        [0.3, 0.4, 0.5, x4, 0.6, x6, x7]
    }

    #[test]
    fn case_2d_derived_entries() {
        let c = builtin_example(CaseId::C2d);
        // r5 = x4/√2·(r6)_{x7} + F = −√2·x4·x6 + x7²/2
        let p = pt(1.0, 1.0, 0.0);
        let r5 = expr::eval(&c.b[0][4], &p).unwrap();
        assert!((r5 - (-std::f64::consts::SQRT_2)).abs() < 1e-14);
        let r6 = expr::eval(&c.b[0][5], &p).unwrap();
        assert!((r6 - (-2.0 * 1.0 * 0.0)).abs() < 1e-14);
        let p2 = pt(0.5, 0.25, 2.0);
        let r5 = expr::eval(&c.b[0][4], &p2).unwrap();
        let expect = -std::f64::consts::SQRT_2 * 0.5 * 0.25 + 2.0f64 * 2.0 / 2.0;
        assert!((r5 - expect).abs() < 1e-13);
    }

    #[test]
    fn case_2d_flat_is_identity() {
        let c = flat_case(CaseId::C2d);
        let p = pt(0.7, 0.2, 0.9);
        let b = c.b_at(&p).unwrap();
        assert!(numeric::mat_frobenius(&numeric::mat_sub(&b, &numeric::mat_identity())) == 0.0);
    }

    #[test]
    fn case_2c_derived_entries() {
        let c = builtin_example(CaseId::C2c);
        let p = pt(0.8, 0.5, 0.1);
        // B[3][5] = t5 = x6²/2
        assert!((expr::eval(&c.b[2][4], &p).unwrap() - 0.125).abs() < 1e-15);
        // B[1][7] = r7 = t5 + F7 = x6²/2
        assert!((expr::eval(&c.b[0][6], &p).unwrap() - 0.125).abs() < 1e-15);
        // B[1][5] = r5 = −√2·x4·x6
        let expect = -std::f64::consts::SQRT_2 * 0.8 * 0.5;
        assert!((expr::eval(&c.b[0][4], &p).unwrap() - expect).abs() < 1e-14);
        // example satisfies the single constraint identically
        let pts = rng::sample_points(3, 10, 0.1, 0.9);
        assert!(c.max_constraint_residual(&pts).unwrap() < 1e-15);
    }

    #[test]
    fn all_examples_satisfy_constraints() {
        let pts = rng::sample_points(41, 20, 0.1, 0.9);
        for (case, slots) in builtin_examples() {
            let c = build_case(case, &slots).unwrap();
            let r = c.max_constraint_residual(&pts).unwrap();
            assert!(r < 1e-12, "case {case}: residual {r:e}");
        }
    }

    #[test]
    fn all_examples_have_split_signature() {
        let pts = rng::sample_points(99, 20, 0.1, 0.9);
        for case in CaseId::all() {
            let c = builtin_example(case);
            for p in &pts {
                assert_eq!(c.signature_at(p).unwrap(), (3, 4), "case {case}");
            }
        }
    }

    #[test]
    fn metric_is_symmetric() {
        let c = builtin_example(CaseId::C1a);
        let p = pt(0.5, 0.3, 0.7);
        let g = c.metric_at(&p).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(g[i][j], g[j][i]);
            }
        }
    }

    #[test]
    fn perturbed_slot_breaks_first_constraint() {
        let (_, mut slots) = builtin_examples().remove(0);
        slots.insert(
            "s6".into(),
            "(x2 + x3*(1+exp(x5)))/3 + x2".into(),
        );
        let c = build_case(CaseId::C1a, &slots).unwrap();
        let pts = rng::sample_points(5, 10, 0.1, 0.9);
        let r = c.constraint_residuals(&pts).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn forbidden_variable_rejected() {
        let mut slots: BTreeMap<String, String> = builtin_examples()
            .into_iter()
            .find(|(c, _)| *c == CaseId::C2a)
            .unwrap()
            .1;
        slots.insert("t5".into(), "x1*x6".into());
        let err = build_case(CaseId::C2a, &slots).unwrap_err();
        assert_eq!(
            err,
            BuildError::ForbiddenVariable {
                slot: "t5".into(),
                var: 1
            }
        );
    }

    #[test]
    fn cancelling_dependence_allowed() {
        let mut slots = builtin_examples()
            .into_iter()
            .find(|(c, _)| *c == CaseId::C2d)
            .unwrap()
            .1;
        // mentions x1 but does not depend on it
        slots.insert("F".into(), "x7^2/2 + x1 - x1".into());
        assert!(build_case(CaseId::C2d, &slots).is_ok());
    }

    #[test]
    fn missing_and_unexpected_slots() {
        let mut slots = BTreeMap::new();
        slots.insert("r6".to_string(), "0".to_string());
        assert_eq!(
            build_case(CaseId::C2d, &slots).unwrap_err(),
            BuildError::MissingSlot("F".into())
        );
        slots.insert("F".to_string(), "0".to_string());
        slots.insert("bogus".to_string(), "0".to_string());
        assert_eq!(
            build_case(CaseId::C2d, &slots).unwrap_err(),
            BuildError::UnexpectedSlot("bogus".into())
        );
    }

    #[test]
    fn case_1a_example_entries() {
        // r6 = x1·u_{x6} + F6 = (4/3)x1 + x6·x7
        let c = builtin_example(CaseId::C1a);
        let p = [0.9, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
        let r6 = expr::eval(&c.b[0][5], &p).unwrap();
        assert!((r6 - (4.0 / 3.0 * 0.9 + 0.5 * 0.6)).abs() < 1e-14);
        // r7 = x1·u_{x7} = 4·x1/(1+e^{x5})
        let r7 = expr::eval(&c.b[0][6], &p).unwrap();
        assert!((r7 - 4.0 * 0.9 / (1.0 + 0.4f64.exp())).abs() < 1e-14);
        // b⁵ factor e^u
        let b55 = expr::eval(&c.b[4][4], &p).unwrap();
        let u = 4.0 / 3.0 * 0.5 + 4.0 * 0.6 / (1.0 + 0.4f64.exp());
        assert!((b55 - u.exp()).abs() < 1e-12);
    }
}
