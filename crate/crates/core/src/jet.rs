//! Truncated multivariate Taylor expansions ("jets") in seven variables.
//!
//! A jet of order K at a point stores the coefficients f_α = ∂^α f / α! for
//! all multi-indices |α| ≤ K. Arithmetic is truncated convolution, so every
//! partial derivative up to order K comes out exact to rounding for the
//! elementary operations used by the coframe pipeline.

use std::sync::OnceLock;

use thiserror::Error;

pub const NVARS: usize = 7;
pub const MAX_ORDER: usize = 4;

/// Numbers of multi-indices with |α| ≤ K for K = 0..=4 in 7 variables.
const COUNTS: [usize; MAX_ORDER + 1] = [1, 8, 36, 120, 330];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JetError {
    #[error("division by a jet whose value at the base point is ~0")]
    DivisionByZero,
    #[error("square root of a non-positive value at the base point")]
    SqrtDomain,
}

struct Tables {
    /// Multi-indices sorted by total degree, then lexicographically.
    alphas: Vec<[u8; NVARS]>,
    /// Product table: coeff k receives a_i * b_j for every (i, j, k).
    mul_triples: Vec<(u32, u32, u32)>,
    /// Per-variable derivative extraction: (dst, src, factor) with
    /// dst = position of α, src = position of α + e_v, factor = α_v + 1.
    diff_moves: [Vec<(u32, u32, f64)>; NVARS],
    /// Position lookup keyed by base-(MAX_ORDER+1) packing.
    pos: Vec<u32>,
    /// Position of the degree-one index e_v for v = 0..NVARS.
    var_pos: [usize; NVARS],
}

fn pack(alpha: &[u8; NVARS]) -> usize {
    let mut k = 0usize;
    for &e in alpha {
        k = k * (MAX_ORDER + 1) + e as usize;
    }
    k
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let mut alphas: Vec<[u8; NVARS]> = Vec::new();
        // enumerate all α with |α| ≤ MAX_ORDER
        fn rec(alpha: &mut [u8; NVARS], var: usize, left: usize, out: &mut Vec<[u8; NVARS]>) {
            if var == NVARS {
                out.push(*alpha);
                return;
            }
            for e in 0..=left {
                alpha[var] = e as u8;
                rec(alpha, var + 1, left - e, out);
            }
            alpha[var] = 0;
        }
        let mut start = [0u8; NVARS];
        rec(&mut start, 0, MAX_ORDER, &mut alphas);
        alphas.sort_by_key(|a| (a.iter().map(|&x| x as usize).sum::<usize>(), *a));
        for (k, &n) in COUNTS.iter().enumerate() {
            debug_assert_eq!(
                alphas
                    .iter()
                    .filter(|a| a.iter().map(|&x| x as usize).sum::<usize>() <= k)
                    .count(),
                n
            );
        }

        let mut pos = vec![u32::MAX; (MAX_ORDER + 1).pow(NVARS as u32)];
        for (i, a) in alphas.iter().enumerate() {
            pos[pack(a)] = i as u32;
        }

        let mut mul_triples = Vec::new();
        for (i, ai) in alphas.iter().enumerate() {
            let di: usize = ai.iter().map(|&x| x as usize).sum();
            for (j, aj) in alphas.iter().enumerate() {
                let dj: usize = aj.iter().map(|&x| x as usize).sum();
                if di + dj > MAX_ORDER {
                    continue;
                }
                let mut sum = [0u8; NVARS];
                for v in 0..NVARS {
                    sum[v] = ai[v] + aj[v];
                }
                mul_triples.push((i as u32, j as u32, pos[pack(&sum)]));
            }
        }
        // group by target for cache friendliness
        mul_triples.sort_by_key(|&(_, _, k)| k);

        let diff_moves = std::array::from_fn(|v| {
            let mut moves = Vec::new();
            for (dst, a) in alphas.iter().enumerate() {
                let deg: usize = a.iter().map(|&x| x as usize).sum();
                if deg >= MAX_ORDER {
                    continue;
                }
                let mut src_alpha = *a;
                src_alpha[v] += 1;
                let src = pos[pack(&src_alpha)];
                moves.push((dst as u32, src, (a[v] + 1) as f64));
            }
            moves
        });

        let var_pos = std::array::from_fn(|v| {
            let mut e = [0u8; NVARS];
            e[v] = 1;
            pos[pack(&e)] as usize
        });

        Tables {
            alphas,
            mul_triples,
            diff_moves,
            pos,
            var_pos,
        }
    })
}

/// All multi-indices of the order-K coefficient vector, in storage order.
pub fn multi_indices(order: usize) -> &'static [[u8; NVARS]] {
    &tables().alphas[..COUNTS[order]]
}

/// Truncated Taylor expansion of a function at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    order: usize,
    c: Vec<f64>,
}

impl Jet {
    pub fn zero(order: usize) -> Self {
        assert!(order <= MAX_ORDER);
        Jet {
            order,
            c: vec![0.0; COUNTS[order]],
        }
    }

    pub fn constant(x: f64, order: usize) -> Self {
        let mut j = Jet::zero(order);
        j.c[0] = x;
        j
    }

    /// The coordinate function x_var (1-based) expanded at value `x`.
    pub fn variable(x: f64, var: usize, order: usize) -> Self {
        assert!((1..=NVARS).contains(&var));
        let mut j = Jet::zero(order);
        j.c[0] = x;
        if order >= 1 {
            j.c[tables().var_pos[var - 1]] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    /// Taylor coefficient for multi-index α (|α| ≤ order).
    pub fn coeff(&self, alpha: &[u8; NVARS]) -> f64 {
        let p = tables().pos[pack(alpha)];
        self.c[p as usize]
    }

    /// The partial derivative ∂^α f = α! · coeff(α).
    pub fn partial(&self, alpha: &[u8; NVARS]) -> f64 {
        let mut fact = 1.0;
        for &e in alpha {
            for k in 2..=e as u64 {
                fact *= k as f64;
            }
        }
        self.coeff(alpha) * fact
    }

    /// First partial ∂f/∂x_var at the base point (1-based var).
    pub fn d1(&self, var: usize) -> f64 {
        assert!(self.order >= 1 && (1..=NVARS).contains(&var));
        self.c[tables().var_pos[var - 1]]
    }

    /// The jet of ∂f/∂x_var, one order lower.
    pub fn derivative(&self, var: usize) -> Jet {
        assert!(self.order >= 1 && (1..=NVARS).contains(&var));
        let t = tables();
        let mut out = Jet::zero(self.order - 1);
        let limit = COUNTS[self.order - 1] as u32;
        for &(dst, src, factor) in &t.diff_moves[var - 1] {
            if dst < limit && (src as usize) < self.c.len() {
                out.c[dst as usize] = self.c[src as usize] * factor;
            }
        }
        out
    }

    /// Lossy truncation to a lower order.
    pub fn truncate(&self, order: usize) -> Jet {
        assert!(order <= self.order);
        Jet {
            order,
            c: self.c[..COUNTS[order]].to_vec(),
        }
    }

    pub fn add(&self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let n = COUNTS[order];
        let mut c = vec![0.0; n];
        for i in 0..n {
            c[i] = self.c[i] + rhs.c[i];
        }
        Jet { order, c }
    }

    pub fn sub(&self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let n = COUNTS[order];
        let mut c = vec![0.0; n];
        for i in 0..n {
            c[i] = self.c[i] - rhs.c[i];
        }
        Jet { order, c }
    }

    pub fn neg(&self) -> Jet {
        Jet {
            order: self.order,
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            order: self.order,
            c: self.c.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul(&self, rhs: &Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let n = COUNTS[order] as u32;
        let mut out = Jet::zero(order);
        // triples are sorted by target index, so the relevant ones are a prefix
        let triples = &tables().mul_triples;
        let end = triples.partition_point(|&(_, _, k)| k < n);
        for &(i, j, k) in &triples[..end] {
            out.c[k as usize] += self.c[i as usize] * rhs.c[j as usize];
        }
        out
    }

    /// Nonconstant part (constant coefficient zeroed).
    fn nilpotent_part(&self) -> Jet {
        let mut z = self.clone();
        z.c[0] = 0.0;
        z
    }

    /// Evaluates Σ series[k]·z^k for the nilpotent z = self − value.
    fn compose_series(&self, series: &[f64]) -> Jet {
        let z = self.nilpotent_part();
        // Horner over jets; z^(order+1) vanishes.
        let mut acc = Jet::constant(series[self.order], self.order);
        for k in (0..self.order).rev() {
            acc = acc.mul(&z);
            acc.c[0] += series[k];
        }
        acc
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        let c = self.c[0];
        if c.abs() <= 1e-300 {
            return Err(JetError::DivisionByZero);
        }
        // 1/(c + z) = (1/c) Σ (−z/c)^k
        let mut series = vec![0.0; self.order + 1];
        let mut t = 1.0 / c;
        for s in series.iter_mut() {
            *s = t;
            t *= -1.0 / c;
        }
        Ok(self.compose_series(&series))
    }

    pub fn div(&self, rhs: &Jet) -> Result<Jet, JetError> {
        Ok(self.mul(&rhs.recip()?))
    }

    pub fn exp(&self) -> Jet {
        let e = self.c[0].exp();
        let mut series = vec![0.0; self.order + 1];
        let mut fact = 1.0;
        for (k, s) in series.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            *s = e / fact;
        }
        self.compose_series(&series)
    }

    pub fn sqrt(&self) -> Result<Jet, JetError> {
        let c = self.c[0];
        if c < 0.0 || (self.order >= 1 && c <= 1e-300) {
            return Err(JetError::SqrtDomain);
        }
        if self.order == 0 {
            return Ok(Jet::constant(c.sqrt(), 0));
        }
        // √(c + z) = √c Σ binom(1/2, k) (z/c)^k
        let r = c.sqrt();
        let mut series = vec![0.0; self.order + 1];
        let mut coef = 1.0;
        for (k, s) in series.iter_mut().enumerate() {
            if k > 0 {
                coef *= (0.5 - (k as f64 - 1.0)) / k as f64;
            }
            *s = r * coef / c.powi(k as i32);
        }
        Ok(self.compose_series(&series))
    }

    pub fn powi(&self, n: i32) -> Result<Jet, JetError> {
        if n == 0 {
            return Ok(Jet::constant(1.0, self.order));
        }
        let mut base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Jet::constant(1.0, self.order);
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Ok(acc)
    }
}
