//! Exact arithmetic over the field Q(√2) and dense exact linear algebra.
//!
//! Every algebraic certificate in this crate (basis independence, bracket
//! closure, curvature-space dimensions) is computed here with no floating
//! point and no tolerances.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Element of Q(√2), stored as `a + b·√2` with `a`, `b` rational in lowest terms.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Scalar { a, b }
    }

    pub fn zero() -> Self {
        Scalar {
            a: BigRational::zero(),
            b: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            a: BigRational::one(),
            b: BigRational::zero(),
        }
    }

    pub fn sqrt2() -> Self {
        Scalar {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }

    /// 1/√2 = √2/2.
    pub fn inv_sqrt2() -> Self {
        Scalar {
            a: BigRational::zero(),
            b: BigRational::new(BigInt::from(1), BigInt::from(2)),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar {
            a: BigRational::from_integer(BigInt::from(n)),
            b: BigRational::zero(),
        }
    }

    /// The rational `num/den`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar {
            a: BigRational::new(BigInt::from(num), BigInt::from(den)),
            b: BigRational::zero(),
        }
    }

    /// `(num/den)·√2`.
    pub fn ratio_sqrt2(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar {
            a: BigRational::zero(),
            b: BigRational::new(BigInt::from(num), BigInt::from(den)),
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt2_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a − b·√2`.
    pub fn conj(&self) -> Self {
        Scalar {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a² − 2b²`; zero iff the element is zero.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(BigInt::from(2)) * &self.b * &self.b
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Scalar {
            a: &self.a / &n,
            b: -&self.b / &n,
        })
    }

    /// Exact sign of the real number `a + b·√2`.
    pub fn signum(&self) -> i32 {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        match (sa, sb) {
            (0, s) | (s, 0) => s,
            (x, y) if x == y => x,
            _ => {
                // a and b have opposite signs; compare a² against 2b².
                let a2 = &self.a * &self.a;
                let b2 = BigRational::from_integer(BigInt::from(2)) * &self.b * &self.b;
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => 0, // impossible for nonzero rationals
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }
}

fn rational_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self - other;
        match d.signum() {
            x if x < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}
forward_binop!(Add, add);

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}
forward_binop!(Sub, sub);

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
        let two = BigRational::from_integer(BigInt::from(2));
        Scalar {
            a: &self.a * &rhs.a + two * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}
forward_binop!(Mul, mul);

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)] // division by multiplying with the field inverse
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inverse().expect("division by zero in Q(sqrt2)");
        self * &inv
    }
}
forward_binop!(Div, div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*sqrt(2)", self.b);
        }
        write!(f, "{} + {}*sqrt(2)", self.a, self.b)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Element of Z[√2], used internally by the fraction-free elimination.
#[derive(Clone, PartialEq, Eq)]
struct IntS {
    a: BigInt,
    b: BigInt,
}

impl IntS {
    fn zero() -> Self {
        IntS {
            a: BigInt::zero(),
            b: BigInt::zero(),
        }
    }

    fn one() -> Self {
        IntS {
            a: BigInt::one(),
            b: BigInt::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn mul(&self, rhs: &IntS) -> IntS {
        IntS {
            a: &self.a * &rhs.a + BigInt::from(2) * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }

    fn sub(&self, rhs: &IntS) -> IntS {
        IntS {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }

    /// Exact division in Z[√2]; panics if the quotient leaves the ring.
    /// The Bareiss recurrence only produces exact divisions.
    fn div_exact(&self, rhs: &IntS) -> IntS {
        let n: BigInt = &rhs.a * &rhs.a - BigInt::from(2) * &rhs.b * &rhs.b;
        debug_assert!(!n.is_zero());
        // self * conj(rhs) = (a·c − 2b·d·(−1)...) with conj(rhs) = c − d√2
        let num_a: BigInt = &self.a * &rhs.a - BigInt::from(2) * &self.b * &rhs.b;
        let num_b: BigInt = &self.b * &rhs.a - &self.a * &rhs.b;
        let (qa, ra) = num_a.div_rem(&n);
        let (qb, rb) = num_b.div_rem(&n);
        assert!(ra.is_zero() && rb.is_zero(), "inexact division in Z[sqrt2]");
        IntS { a: qa, b: qb }
    }

    fn to_scalar(&self) -> Scalar {
        Scalar {
            a: BigRational::from_integer(self.a.clone()),
            b: BigRational::from_integer(self.b.clone()),
        }
    }
}

/// Dense matrix over Q(√2).
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMat {
    rows: usize,
    cols: usize,
    a: Vec<Scalar>,
}

impl ExactMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMat {
            rows,
            cols,
            a: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut a = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                a.push(f(i, j));
            }
        }
        ExactMat { rows, cols, a }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        ExactMat {
            rows: r,
            cols: c,
            a: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.a[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> ExactMat {
        ExactMat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn matmul(&self, rhs: &ExactMat) -> ExactMat {
        assert_eq!(self.cols, rhs.rows);
        ExactMat::from_fn(self.rows, rhs.cols, |i, j| {
            let mut s = Scalar::zero();
            for k in 0..self.cols {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                s = s + x * rhs.get(k, j);
            }
            s
        })
    }

    pub fn add(&self, rhs: &ExactMat) -> ExactMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + rhs.get(i, j))
    }

    pub fn sub(&self, rhs: &ExactMat) -> ExactMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j))
    }

    pub fn neg(&self) -> ExactMat {
        ExactMat::from_fn(self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn scale(&self, s: &Scalar) -> ExactMat {
        ExactMat::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Scalar::zero();
                for j in 0..self.cols {
                    let x = self.get(i, j);
                    if !x.is_zero() && !v[j].is_zero() {
                        s = s + x * &v[j];
                    }
                }
                s
            })
            .collect()
    }

    /// Row-major flattening, used for span computations on stacked matrices.
    pub fn vectorize(&self) -> Vec<Scalar> {
        self.a.clone()
    }

    pub fn max_abs(&self) -> Scalar {
        let mut m = Scalar::zero();
        for x in &self.a {
            let ax = x.abs();
            if ax > m {
                m = ax;
            }
        }
        m
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_f64()).collect())
            .collect()
    }

    /// Exact rank over Q(√2) via fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right nullspace `{x : Mx = 0}`; each vector satisfies
    /// `M·v = 0` exactly.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let ech = self.echelon();
        let pivots = &ech.pivots;
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let free_cols: Vec<usize> = (0..self.cols)
            .filter(|c| !pivot_cols.contains(c))
            .collect();
        let mut basis = Vec::with_capacity(free_cols.len());
        for &fc in &free_cols {
            let mut v = vec![Scalar::zero(); self.cols];
            v[fc] = Scalar::one();
            // Back-substitute pivot rows bottom-up over the field.
            for &(r, c) in pivots.iter().rev() {
                let mut s = Scalar::zero();
                for j in (c + 1)..self.cols {
                    let e = &ech.m[r][j];
                    if !e.is_zero() && !v[j].is_zero() {
                        s = s + &e.to_scalar() * &v[j];
                    }
                }
                if !s.is_zero() {
                    v[c] = -s / ech.m[r][c].to_scalar();
                }
            }
            debug_assert!(self.apply(&v).iter().all(Scalar::is_zero));
            basis.push(v);
        }
        basis
    }

    /// `m` lies in the row span of `self`.
    pub fn contains_in_row_span(&self, v: &[Scalar]) -> bool {
        assert_eq!(self.cols, v.len());
        let r0 = self.rank();
        let mut stacked = self.clone();
        stacked.rows += 1;
        stacked.a.extend_from_slice(v);
        stacked.rank() == r0
    }

    fn echelon(&self) -> Echelon {
        // Clear denominators row by row, then run Bareiss on Z[√2].
        let mut m: Vec<Vec<IntS>> = (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..self.cols {
                    let s = self.get(i, j);
                    lcm = lcm.lcm(s.a.denom());
                    lcm = lcm.lcm(s.b.denom());
                }
                (0..self.cols)
                    .map(|j| {
                        let s = self.get(i, j);
                        IntS {
                            a: (&s.a * BigRational::from_integer(lcm.clone())).to_integer(),
                            b: (&s.b * BigRational::from_integer(lcm.clone())).to_integer(),
                        }
                    })
                    .collect()
            })
            .collect();

        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut prev = IntS::one();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            for i in (r + 1)..self.rows {
                for j in (c + 1)..self.cols {
                    let t = m[r][c].mul(&m[i][j]).sub(&m[i][c].mul(&m[r][j]));
                    m[i][j] = t.div_exact(&prev);
                }
                m[i][c] = IntS::zero();
            }
            prev = m[r][c].clone();
            pivots.push((r, c));
            r += 1;
            if r == self.rows {
                break;
            }
        }
        Echelon { m, pivots }
    }
}

struct Echelon {
    m: Vec<Vec<IntS>>,
    pivots: Vec<(usize, usize)>,
}

impl fmt::Debug for ExactMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}, ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Rank of a list of equal-length exact vectors.
pub fn span_rank(vectors: &[Vec<Scalar>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    ExactMat::from_rows(vectors.to_vec()).rank()
}
