//! The split-G2 algebra inside so(4,3): the defining 3-form, the induced
//! inner product, the 14-parameter matrix basis, the h(A,v,y) family with
//! its bracket and adjoint actions, and a registry of named subalgebras.
//!
//! All constructions are exact over Q(√2). Float shadows of the bases feed
//! the numerical membership checks used by the curvature pipeline.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::exact::{ExactMat, Scalar};
use crate::numeric;

pub const DIM: usize = 7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("unknown algebra name `{0}`")]
    UnknownAlgebra(String),
    #[error("matrix does not extract to an h(A,v,y) element (residual {0})")]
    NotHShaped(String),
}

// ---------------------------------------------------------------------------
// Exterior forms over Q(√2)

/// Alternating form of fixed degree; keys are strictly increasing 1-based
/// index tuples, values exact scalars (zeros dropped).
#[derive(Clone, Debug, PartialEq)]
pub struct ExtForm {
    degree: usize,
    terms: BTreeMap<Vec<u8>, Scalar>,
}

impl ExtForm {
    pub fn zero(degree: usize) -> Self {
        ExtForm {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c · b^{indices}` where `indices` need not be sorted; repeated
    /// indices contribute nothing.
    pub fn add_term(&mut self, indices: &[u8], c: Scalar) {
        assert_eq!(indices.len(), self.degree);
        if c.is_zero() {
            return;
        }
        let Some((sorted, sign)) = sort_with_sign(indices) else {
            return;
        };
        let signed = if sign < 0 { -&c } else { c };
        let entry = self.terms.entry(sorted).or_insert_with(Scalar::zero);
        *entry = &*entry + &signed;
        if entry.is_zero() {
            self.terms.remove(&sort_with_sign(indices).unwrap().0);
        }
    }

    /// Coefficient at an arbitrary (possibly unsorted) index tuple.
    pub fn component(&self, indices: &[u8]) -> Scalar {
        let Some((sorted, sign)) = sort_with_sign(indices) else {
            return Scalar::zero();
        };
        match self.terms.get(&sorted) {
            None => Scalar::zero(),
            Some(c) => {
                if sign < 0 {
                    -c
                } else {
                    c.clone()
                }
            }
        }
    }

    pub fn wedge(&self, rhs: &ExtForm) -> ExtForm {
        let mut out = ExtForm::zero(self.degree + rhs.degree);
        for (t1, c1) in &self.terms {
            for (t2, c2) in &rhs.terms {
                let mut idx = Vec::with_capacity(t1.len() + t2.len());
                idx.extend_from_slice(t1);
                idx.extend_from_slice(t2);
                out.add_term(&idx, c1 * c2);
            }
        }
        out
    }

    /// Interior product with an exact vector.
    pub fn interior(&self, x: &[Scalar; DIM]) -> ExtForm {
        assert!(self.degree >= 1);
        let mut out = ExtForm::zero(self.degree - 1);
        for (t, c) in &self.terms {
            for (slot, &i) in t.iter().enumerate() {
                let xi = &x[i as usize - 1];
                if xi.is_zero() {
                    continue;
                }
                let rest: Vec<u8> = t
                    .iter()
                    .enumerate()
                    .filter(|&(s, _)| s != slot)
                    .map(|(_, &v)| v)
                    .collect();
                let mut coeff = xi * c;
                if slot % 2 == 1 {
                    coeff = -coeff;
                }
                out.add_term(&rest, coeff);
            }
        }
        out
    }

    /// The coefficient of the top form b^{1..7} (Λ⁷ ≅ R).
    pub fn top_coefficient(&self) -> Scalar {
        assert_eq!(self.degree, DIM);
        self.component(&[1, 2, 3, 4, 5, 6, 7])
    }

    pub fn max_abs(&self) -> Scalar {
        let mut m = Scalar::zero();
        for c in self.terms.values() {
            let a = c.abs();
            if a > m {
                m = a;
            }
        }
        m
    }
}

fn sort_with_sign(indices: &[u8]) -> Option<(Vec<u8>, i32)> {
    let mut v = indices.to_vec();
    let mut sign = 1i32;
    // insertion sort counting swaps; duplicates kill the term
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

/// Degree-3 alternating form; the canonical instance defines split G2.
pub type ThreeForm = ExtForm;

/// The defining 3-form: √2(b^167 + b^235) + b^145 − b^246 − b^347.
///
/// The two negative coefficients are forced by requiring that the
/// 14-parameter matrix family annihilates the form and that the interior
/// product formula reproduces the inner product G below; both facts are
/// certified exactly in the test suite.
pub fn canonical_three_form() -> ThreeForm {
    let mut w = ExtForm::zero(3);
    w.add_term(&[1, 6, 7], Scalar::sqrt2());
    w.add_term(&[2, 3, 5], Scalar::sqrt2());
    w.add_term(&[1, 4, 5], Scalar::one());
    w.add_term(&[2, 4, 6], -Scalar::one());
    w.add_term(&[3, 4, 7], -Scalar::one());
    w
}

/// Canonical inner product: 2(b¹·b⁵ + b²·b⁶ + b³·b⁷) − (b⁴)², signature (4,3).
pub fn metric_matrix() -> ExactMat {
    let mut g = ExactMat::zeros(DIM, DIM);
    for (i, j) in [(0usize, 4usize), (1, 5), (2, 6)] {
        g.set(i, j, Scalar::one());
        g.set(j, i, Scalar::one());
    }
    g.set(3, 3, -Scalar::one());
    g
}

pub fn metric_f64() -> numeric::Mat7 {
    let g = metric_matrix();
    let mut out = numeric::mat_zero();
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = g.get(i, j).to_f64();
        }
    }
    out
}

/// ⟨X,Y⟩ = (ι_X ω) ∧ (ι_Y ω) ∧ ω / 6 under Λ⁷ ≅ R, b^{1..7} ↦ 1.
pub fn inner_product_from_form(omega: &ThreeForm, x: &[Scalar; DIM], y: &[Scalar; DIM]) -> Scalar {
    let ix = omega.interior(x);
    let iy = omega.interior(y);
    let top = ix.wedge(&iy).wedge(omega);
    top.top_coefficient() / Scalar::from_int(6)
}

/// Infinitesimal action of a matrix on the 3-form:
/// (M·ω)_{ijk} = −Σ_m (ω_{mjk} M^m_i + ω_{imk} M^m_j + ω_{ijm} M^m_k).
/// Vanishes exactly iff M lies in the stabilizer algebra of ω.
pub fn stabilizer_residual(m: &ExactMat, omega: &ThreeForm) -> ThreeForm {
    let mut out = ExtForm::zero(3);
    for i in 1..=DIM as u8 {
        for j in (i + 1)..=DIM as u8 {
            for k in (j + 1)..=DIM as u8 {
                let mut acc = Scalar::zero();
                for mm in 1..=DIM as u8 {
                    let col = |row: u8, c: u8| m.get(row as usize - 1, c as usize - 1).clone();
                    let t1 = omega.component(&[mm, j, k]) * col(mm, i);
                    let t2 = omega.component(&[i, mm, k]) * col(mm, j);
                    let t3 = omega.component(&[i, j, mm]) * col(mm, k);
                    acc = acc + t1 + t2 + t3;
                }
                out.add_term(&[i, j, k], -acc);
            }
        }
    }
    out
}

/// Residual of the so(4,3) condition MᵀG + GM = 0.
pub fn so43_residual(m: &ExactMat) -> ExactMat {
    let g = metric_matrix();
    m.transpose().matmul(&g).add(&g.matmul(m))
}

// ---------------------------------------------------------------------------
// The 14-parameter matrix basis

/// Entry pattern of the matrix family: (parameter index 1..=14, row, col,
/// coefficient), rows/cols 1-based.
const S_PATTERN: &[(u8, u8, u8, i8, bool)] = &[
    // (s, row, col, sign, with_sqrt2)
    (1, 1, 1, 1, false),
    (4, 1, 1, 1, false),
    (10, 1, 2, -1, false),
    (9, 1, 3, 1, false),
    (6, 1, 4, 1, true),
    (11, 1, 6, -1, false),
    (12, 1, 7, -1, false),
    (8, 2, 1, -1, false),
    (1, 2, 2, 1, false),
    (2, 2, 3, 1, false),
    (9, 2, 4, 1, true),
    (11, 2, 5, 1, false),
    (6, 2, 7, 1, false),
    (7, 3, 1, 1, false),
    (3, 3, 2, 1, false),
    (4, 3, 3, 1, false),
    (10, 3, 4, 1, true),
    (12, 3, 5, 1, false),
    (6, 3, 6, -1, false),
    (5, 4, 1, 1, true),
    (7, 4, 2, 1, true),
    (8, 4, 3, 1, true),
    (6, 4, 5, 1, true),
    (9, 4, 6, 1, true),
    (10, 4, 7, 1, true),
    (13, 5, 2, 1, false),
    (14, 5, 3, 1, false),
    (5, 5, 4, 1, true),
    (1, 5, 5, -1, false),
    (4, 5, 5, -1, false),
    (8, 5, 6, 1, false),
    (7, 5, 7, -1, false),
    (13, 6, 1, -1, false),
    (5, 6, 3, -1, false),
    (7, 6, 4, 1, true),
    (10, 6, 5, 1, false),
    (1, 6, 6, -1, false),
    (3, 6, 7, -1, false),
    (14, 7, 1, -1, false),
    (5, 7, 2, 1, false),
    (8, 7, 4, 1, true),
    (9, 7, 5, -1, false),
    (2, 7, 6, -1, false),
    (4, 7, 7, -1, false),
];

/// The matrix with parameters s_1..s_14.
pub fn g2star_matrix(s: &[Scalar; 14]) -> ExactMat {
    let mut m = ExactMat::zeros(DIM, DIM);
    for &(k, r, c, sign, sq) in S_PATTERN {
        let mut v = s[k as usize - 1].clone();
        if v.is_zero() {
            continue;
        }
        if sq {
            v = v * Scalar::sqrt2();
        }
        if sign < 0 {
            v = -v;
        }
        let cur = m.get(r as usize - 1, c as usize - 1).clone();
        m.set(r as usize - 1, c as usize - 1, cur + v);
    }
    m
}

/// The 14 basis matrices (s_k = 1, rest 0).
pub fn g2star_basis() -> Vec<ExactMat> {
    (0..14)
        .map(|k| {
            let mut s: [Scalar; 14] = std::array::from_fn(|_| Scalar::zero());
            s[k] = Scalar::one();
            g2star_matrix(&s)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// The h(A, v, y) family

/// Element h(A, v, y) with A a 2×2 block, v a scalar, y a 2-vector.
#[derive(Clone, Debug, PartialEq)]
pub struct HElem {
    pub a: [[Scalar; 2]; 2],
    pub v: Scalar,
    pub y: [Scalar; 2],
}

impl HElem {
    pub fn zero() -> Self {
        HElem {
            a: std::array::from_fn(|_| std::array::from_fn(|_| Scalar::zero())),
            v: Scalar::zero(),
            y: [Scalar::zero(), Scalar::zero()],
        }
    }

    pub fn from_parts(a: [[i64; 2]; 2], v: i64, y: [i64; 2]) -> Self {
        HElem {
            a: [
                [Scalar::from_int(a[0][0]), Scalar::from_int(a[0][1])],
                [Scalar::from_int(a[1][0]), Scalar::from_int(a[1][1])],
            ],
            v: Scalar::from_int(v),
            y: [Scalar::from_int(y[0]), Scalar::from_int(y[1])],
        }
    }

    pub fn trace_a(&self) -> Scalar {
        &self.a[0][0] + &self.a[1][1]
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().flatten().all(Scalar::is_zero) && self.v.is_zero() && self.y.iter().all(Scalar::is_zero)
    }

    /// The 7×7 matrix realization.
    pub fn embed(&self) -> ExactMat {
        let mut m = ExactMat::zeros(DIM, DIM);
        let tr = self.trace_a();
        m.set(0, 0, tr.clone());
        m.set(0, 3, Scalar::sqrt2() * &self.v);
        m.set(0, 5, -&self.y[0]);
        m.set(0, 6, -&self.y[1]);
        m.set(1, 1, self.a[0][0].clone());
        m.set(1, 2, self.a[0][1].clone());
        m.set(1, 4, self.y[0].clone());
        m.set(1, 6, self.v.clone());
        m.set(2, 1, self.a[1][0].clone());
        m.set(2, 2, self.a[1][1].clone());
        m.set(2, 4, self.y[1].clone());
        m.set(2, 5, -&self.v);
        m.set(3, 4, Scalar::sqrt2() * &self.v);
        m.set(4, 4, -tr);
        m.set(5, 5, -&self.a[0][0]);
        m.set(5, 6, -&self.a[1][0]);
        m.set(6, 5, -&self.a[0][1]);
        m.set(6, 6, -&self.a[1][1]);
        m
    }

    /// Reads the h-shape back off a matrix; the residual must be zero for
    /// elements of the family.
    pub fn extract(m: &ExactMat) -> Result<HElem, AlgebraError> {
        let h = HElem {
            a: [
                [m.get(1, 1).clone(), m.get(1, 2).clone()],
                [m.get(2, 1).clone(), m.get(2, 2).clone()],
            ],
            v: m.get(1, 6).clone(),
            y: [m.get(1, 4).clone(), m.get(2, 4).clone()],
        };
        let resid = m.sub(&h.embed());
        if resid.is_zero() {
            Ok(h)
        } else {
            Err(AlgebraError::NotHShaped(resid.max_abs().to_string()))
        }
    }

    pub fn add(&self, rhs: &HElem) -> HElem {
        HElem {
            a: [
                [&self.a[0][0] + &rhs.a[0][0], &self.a[0][1] + &rhs.a[0][1]],
                [&self.a[1][0] + &rhs.a[1][0], &self.a[1][1] + &rhs.a[1][1]],
            ],
            v: &self.v + &rhs.v,
            y: [&self.y[0] + &rhs.y[0], &self.y[1] + &rhs.y[1]],
        }
    }

    pub fn sub(&self, rhs: &HElem) -> HElem {
        HElem {
            a: [
                [&self.a[0][0] - &rhs.a[0][0], &self.a[0][1] - &rhs.a[0][1]],
                [&self.a[1][0] - &rhs.a[1][0], &self.a[1][1] - &rhs.a[1][1]],
            ],
            v: &self.v - &rhs.v,
            y: [&self.y[0] - &rhs.y[0], &self.y[1] - &rhs.y[1]],
        }
    }

    pub fn scale(&self, s: &Scalar) -> HElem {
        HElem {
            a: [
                [&self.a[0][0] * s, &self.a[0][1] * s],
                [&self.a[1][0] * s, &self.a[1][1] * s],
            ],
            v: &self.v * s,
            y: [&self.y[0] * s, &self.y[1] * s],
        }
    }

    /// Closed-form commutator:
    /// [h(A,v_A,y_A), h(B,v_B,y_B)] =
    ///   h([A,B], tr(A)·v_B − v_A·tr(B), (A + tr A)·y_B − (B + tr B)·y_A).
    pub fn bracket(&self, rhs: &HElem) -> HElem {
        let ab = mat2_mul(&self.a, &rhs.a);
        let ba = mat2_mul(&rhs.a, &self.a);
        let comm = [
            [&ab[0][0] - &ba[0][0], &ab[0][1] - &ba[0][1]],
            [&ab[1][0] - &ba[1][0], &ab[1][1] - &ba[1][1]],
        ];
        let tr_a = self.trace_a();
        let tr_b = rhs.trace_a();
        let v = &tr_a * &rhs.v - &self.v * &tr_b;
        let ya = apply_shifted(&rhs.a, &tr_b, &self.y);
        let yb = apply_shifted(&self.a, &tr_a, &rhs.y);
        HElem {
            a: comm,
            v,
            y: [&yb[0] - &ya[0], &yb[1] - &ya[1]],
        }
    }

    /// Matrix-commutator oracle for `bracket`.
    pub fn bracket_oracle(&self, rhs: &HElem) -> Result<HElem, AlgebraError> {
        let x = self.embed();
        let y = rhs.embed();
        let comm = x.matmul(&y).sub(&y.matmul(&x));
        HElem::extract(&comm)
    }

    /// Conjugation by exp(h(0,v̄,0)) then exp(h(0,0,ȳ)):
    /// h(A, v − tr(A)·v̄, y − (A + tr A)·ȳ).
    pub fn adjoint_exp(&self, vbar: &Scalar, ybar: &[Scalar; 2]) -> HElem {
        let tr = self.trace_a();
        let shift = apply_shifted(&self.a, &tr, ybar);
        HElem {
            a: self.a.clone(),
            v: &self.v - &(&tr * vbar),
            y: [&self.y[0] - &shift[0], &self.y[1] - &shift[1]],
        }
    }

    /// Oracle for `adjoint_exp` via exact exponentials of the nilpotent
    /// conjugators: exp(N_y)·exp(N_v)·M·exp(−N_v)·exp(−N_y).
    pub fn adjoint_exp_oracle(
        &self,
        vbar: &Scalar,
        ybar: &[Scalar; 2],
    ) -> Result<HElem, AlgebraError> {
        let mut nv = HElem::zero();
        nv.v = vbar.clone();
        let mut ny = HElem::zero();
        ny.y = ybar.clone();
        let pv = exp_nilpotent(&nv.embed());
        let pv_inv = exp_nilpotent(&nv.scale(&-Scalar::one()).embed());
        let py = exp_nilpotent(&ny.embed());
        let py_inv = exp_nilpotent(&ny.scale(&-Scalar::one()).embed());
        let m = self.embed();
        let conj = py
            .matmul(&pv)
            .matmul(&m)
            .matmul(&pv_inv)
            .matmul(&py_inv);
        HElem::extract(&conj)
    }
}

fn mat2_mul(a: &[[Scalar; 2]; 2], b: &[[Scalar; 2]; 2]) -> [[Scalar; 2]; 2] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]))
    })
}

/// (A + tr·I)·y
fn apply_shifted(a: &[[Scalar; 2]; 2], tr: &Scalar, y: &[Scalar; 2]) -> [Scalar; 2] {
    [
        &(&a[0][0] + tr) * &y[0] + &a[0][1] * &y[1],
        &a[1][0] * &y[0] + &(&a[1][1] + tr) * &y[1],
    ]
}

/// exp of a nilpotent exact matrix by its (finite) power series.
pub fn exp_nilpotent(n: &ExactMat) -> ExactMat {
    let mut sum = ExactMat::identity(DIM);
    let mut term = ExactMat::identity(DIM);
    for k in 1..=(DIM as i64 + 1) {
        term = term.matmul(n).scale(&Scalar::ratio(1, k));
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
    }
    sum
}

// ---------------------------------------------------------------------------
// Subalgebra registry

/// Named subalgebra with an explicit ordered basis.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub name: String,
    pub basis: Vec<ExactMat>,
    basis_f64: Vec<Vec<f64>>,
}

impl Subalgebra {
    pub fn from_basis(name: &str, basis: Vec<ExactMat>) -> Self {
        Self::new(name, basis)
    }

    fn new(name: &str, basis: Vec<ExactMat>) -> Self {
        let basis_f64 = basis
            .iter()
            .map(|m| m.to_f64().into_iter().flatten().collect())
            .collect();
        Subalgebra {
            name: name.to_string(),
            basis,
            basis_f64,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Float basis, each matrix flattened row major (for least squares).
    pub fn basis_f64(&self) -> &[Vec<f64>] {
        &self.basis_f64
    }

    /// Least-squares membership: coefficients and Frobenius residual of the
    /// projection of `m` onto the span of the basis.
    pub fn membership(&self, m: &numeric::Mat7) -> (Vec<f64>, f64) {
        let target: Vec<f64> = m.iter().flatten().copied().collect();
        numeric::least_squares_membership(&self.basis_f64, &target)
    }

    /// Exact span membership.
    pub fn contains_exact(&self, m: &ExactMat) -> bool {
        let rows: Vec<Vec<Scalar>> = self.basis.iter().map(|b| b.vectorize()).collect();
        ExactMat::from_rows(rows).contains_in_row_span(&m.vectorize())
    }

    /// Exact linear independence of the basis.
    pub fn is_independent(&self) -> bool {
        let rows: Vec<Vec<Scalar>> = self.basis.iter().map(|b| b.vectorize()).collect();
        ExactMat::from_rows(rows).rank() == self.basis.len()
    }

    /// Exact closure under the matrix commutator.
    pub fn is_bracket_closed(&self) -> bool {
        for (i, x) in self.basis.iter().enumerate() {
            for y in &self.basis[i + 1..] {
                let c = x.matmul(y).sub(&y.matmul(x));
                if !self.contains_exact(&c) {
                    return false;
                }
            }
        }
        true
    }
}

fn h_basis_elem(a: [[i64; 2]; 2], v: i64, y: [i64; 2]) -> ExactMat {
    HElem::from_parts(a, v, y).embed()
}

fn m12_basis() -> Vec<ExactMat> {
    vec![
        h_basis_elem([[0, 0], [0, 0]], 1, [0, 0]),
        h_basis_elem([[0, 0], [0, 0]], 0, [1, 0]),
        h_basis_elem([[0, 0], [0, 0]], 0, [0, 1]),
    ]
}

fn m11_basis() -> Vec<ExactMat> {
    vec![
        h_basis_elem([[0, 0], [0, 0]], 1, [0, 0]),
        h_basis_elem([[0, 0], [0, 0]], 0, [1, 0]),
    ]
}

fn with_m12(a_parts: Vec<ExactMat>) -> Vec<ExactMat> {
    let mut v = a_parts;
    v.extend(m12_basis());
    v
}

/// so(4,3) = all M with MᵀG + GM = 0, constructed as an exact nullspace.
fn so43_basis() -> Vec<ExactMat> {
    let g = metric_matrix();
    // unknowns: the 49 entries of M, row major
    let mut rows = Vec::new();
    for i in 0..DIM {
        for j in i..DIM {
            // (MᵀG + GM)_{ij} = Σ_k M_{ki} G_{kj} + G_{ik} M_{kj}
            let mut row = vec![Scalar::zero(); DIM * DIM];
            for k in 0..DIM {
                let gkj = g.get(k, j);
                if !gkj.is_zero() {
                    row[k * DIM + i] = &row[k * DIM + i] + gkj;
                }
                let gik = g.get(i, k);
                if !gik.is_zero() {
                    row[k * DIM + j] = &row[k * DIM + j] + gik;
                }
            }
            rows.push(row);
        }
    }
    let ns = ExactMat::from_rows(rows).nullspace();
    ns.into_iter()
        .map(|v| ExactMat::from_fn(DIM, DIM, |i, j| v[i * DIM + j].clone()))
        .collect()
}

/// Registry of the named subalgebras used by the certificates and the CLI.
pub struct Registry {
    entries: Vec<Subalgebra>,
}

impl Registry {
    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn entries(&self) -> &[Subalgebra] {
        &self.entries
    }

    /// Looks up by name; `r_Ca(a)` and `rdiag1mu(mu)` accept a rational
    /// parameter, e.g. `r_Ca(1)`, `r_Ca(-3/2)`, `rdiag1mu(2)`.
    pub fn get(&self, name: &str) -> Result<Subalgebra, AlgebraError> {
        if let Some(s) = self.entries.iter().find(|s| s.name == name) {
            return Ok(s.clone());
        }
        if let Some(param) = parse_param(name, "r_Ca") {
            return Ok(r_ca_algebra(&param?));
        }
        if let Some(param) = parse_param(name, "rdiag1mu") {
            return Ok(rdiag1mu_algebra(&param?));
        }
        Err(AlgebraError::UnknownAlgebra(name.to_string()))
    }
}

fn parse_param(name: &str, prefix: &str) -> Option<Result<Scalar, AlgebraError>> {
    let rest = name.strip_prefix(prefix)?;
    let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
    let parse_rational = |s: &str| -> Option<Scalar> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Scalar::ratio(n, d))
        } else {
            let n: i64 = s.parse().ok()?;
            Some(Scalar::from_int(n))
        }
    };
    Some(parse_rational(inner).ok_or_else(|| AlgebraError::UnknownAlgebra(name.to_string())))
}

/// R·C_a ⋉ m(1,2) with C_a = [[a, −1], [1, a]].
pub fn r_ca_algebra(a: &Scalar) -> Subalgebra {
    let ca = HElem {
        a: [
            [a.clone(), -Scalar::one()],
            [Scalar::one(), a.clone()],
        ],
        v: Scalar::zero(),
        y: [Scalar::zero(), Scalar::zero()],
    };
    Subalgebra::new(
        &format!("r_Ca({})", a),
        with_m12(vec![ca.embed()]),
    )
}

/// R·diag(1,μ) ⋉ m(1,2); only μ = 0 occurs among the certified algebras,
/// other values are for exploratory Berger runs.
pub fn rdiag1mu_algebra(mu: &Scalar) -> Subalgebra {
    let d = HElem {
        a: [
            [Scalar::one(), Scalar::zero()],
            [Scalar::zero(), mu.clone()],
        ],
        v: Scalar::zero(),
        y: [Scalar::zero(), Scalar::zero()],
    };
    Subalgebra::new(
        &format!("rdiag1mu({})", mu),
        with_m12(vec![d.embed()]),
    )
}

pub fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| {
        let e11 = [[1, 0], [0, 0]];
        let e12 = [[0, 1], [0, 0]];
        let e21 = [[0, 0], [1, 0]];
        let e22 = [[0, 0], [0, 1]];
        let gl2_parts = vec![
            h_basis_elem(e11, 0, [0, 0]),
            h_basis_elem(e12, 0, [0, 0]),
            h_basis_elem(e21, 0, [0, 0]),
            h_basis_elem(e22, 0, [0, 0]),
        ];
        let sl2_parts = vec![
            h_basis_elem([[1, 0], [0, -1]], 0, [0, 0]),
            h_basis_elem(e12, 0, [0, 0]),
            h_basis_elem(e21, 0, [0, 0]),
        ];
        let co2_parts = vec![
            h_basis_elem([[1, 0], [0, 1]], 0, [0, 0]),
            h_basis_elem([[0, -1], [1, 0]], 0, [0, 0]),
        ];
        let d_parts = vec![
            h_basis_elem(e11, 0, [0, 0]),
            h_basis_elem(e22, 0, [0, 0]),
        ];
        let rdiag10 = h_basis_elem(e11, 0, [0, 0]);

        let s = g2star_basis();
        let p1 = vec![
            s[0].clone(),
            s[1].clone(),
            s[2].clone(),
            s[3].clone(),
            s[5].clone(),
            s[8].clone(),
            s[9].clone(),
            s[10].clone(),
            s[11].clone(),
        ];

        let mut rdiag10_m11 = vec![rdiag10.clone()];
        rdiag10_m11.extend(m11_basis());

        let entries = vec![
            Subalgebra::new("gl2_m12", with_m12(gl2_parts.clone())),
            Subalgebra::new("sl2_m12", with_m12(sl2_parts)),
            Subalgebra::new("co2_m12", with_m12(co2_parts)),
            Subalgebra::new("d_m12", with_m12(d_parts)),
            Subalgebra::new("rdiag10_m11", rdiag10_m11),
            Subalgebra::new("rdiag10_m12", with_m12(vec![rdiag10])),
            Subalgebra::new("m11", m11_basis()),
            Subalgebra::new("m12", m12_basis()),
            Subalgebra::new("h_III", with_m12(gl2_parts)),
            Subalgebra::new("g2star", s),
            Subalgebra::new("so43", so43_basis()),
            Subalgebra::new("p1", p1),
        ];
        Registry { entries }
    })
}

/// Expected dimensions of the certified algebras.
pub fn expected_dims() -> &'static [(&'static str, usize)] {
    &[
        ("gl2_m12", 7),
        ("sl2_m12", 6),
        ("co2_m12", 5),
        ("d_m12", 5),
        ("rdiag10_m11", 3),
        ("rdiag10_m12", 4),
        ("m11", 2),
        ("m12", 3),
        ("h_III", 7),
        ("g2star", 14),
    ]
}
