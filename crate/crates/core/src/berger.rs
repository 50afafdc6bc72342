//! Algebraic curvature spaces and the first Berger criterion, all exact.
//!
//! For a subalgebra S ⊂ so(4,3) the space K(S) consists of the algebraic
//! curvature tensors R ∈ Λ²V*⊗S with vanishing cyclic (first Bianchi) sum.
//! The span of all values R(b_i, b_j) over K(S) is written underline(S);
//! a holonomy algebra must satisfy underline(S) = S. K(S) is computed from
//! scratch as an exact nullspace; the 16-parameter table of curvature
//! endomorphisms is kept as independent cross-check data, not as the source
//! of truth.

use std::collections::BTreeMap;

use crate::algebra::{HElem, Subalgebra, DIM};
use crate::exact::{ExactMat, Scalar};

/// Curvature tensor with values in a fixed subalgebra: R(b_i, b_j) for
/// 1 ≤ i < j ≤ 7, extended antisymmetrically.
#[derive(Clone, Debug)]
pub struct CurvatureTensor {
    r: BTreeMap<(u8, u8), ExactMat>,
}

impl CurvatureTensor {
    pub fn zero() -> Self {
        CurvatureTensor { r: BTreeMap::new() }
    }

    pub fn set(&mut self, i: u8, j: u8, m: ExactMat) {
        assert!(1 <= i && i < j && j <= DIM as u8);
        if m.is_zero() {
            self.r.remove(&(i, j));
        } else {
            self.r.insert((i, j), m);
        }
    }

    /// R(b_i, b_j) for arbitrary order of the arguments.
    pub fn at(&self, i: u8, j: u8) -> ExactMat {
        if i == j {
            return ExactMat::zeros(DIM, DIM);
        }
        let (key, flip) = if i < j { ((i, j), false) } else { ((j, i), true) };
        match self.r.get(&key) {
            None => ExactMat::zeros(DIM, DIM),
            Some(m) => {
                if flip {
                    m.neg()
                } else {
                    m.clone()
                }
            }
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&(u8, u8), &ExactMat)> {
        self.r.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_empty()
    }

    /// Flattening over all 21 pairs (each 7×7 block row-major), for exact
    /// span comparisons between curvature spaces.
    pub fn vectorize(&self) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(21 * DIM * DIM);
        for i in 1..=DIM as u8 {
            for j in (i + 1)..=DIM as u8 {
                out.extend(self.at(i, j).vectorize());
            }
        }
        out
    }

    /// Max-norm of the cyclic sums R(b_i,b_j)b_k + R(b_j,b_k)b_i + R(b_k,b_i)b_j
    /// over all index triples; exactly zero iff R satisfies the first Bianchi
    /// identity.
    pub fn bianchi_residual(&self) -> Scalar {
        let mut worst = Scalar::zero();
        let e = |k: u8| -> Vec<Scalar> {
            (0..DIM)
                .map(|t| {
                    if t == k as usize - 1 {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        };
        for i in 1..=DIM as u8 {
            for j in (i + 1)..=DIM as u8 {
                for k in (j + 1)..=DIM as u8 {
                    let s1 = self.at(i, j).apply(&e(k));
                    let s2 = self.at(j, k).apply(&e(i));
                    let s3 = self.at(k, i).apply(&e(j));
                    for t in 0..DIM {
                        let v = (&s1[t] + &s2[t] + &s3[t]).abs();
                        if v > worst {
                            worst = v;
                        }
                    }
                }
            }
        }
        worst
    }
}

/// The 16 parameters of the curvature-endomorphism table for the family
/// h(A, v, y); `build` materializes the table row by row.
#[derive(Clone, Debug, Default)]
pub struct Table1Params {
    pub a1: Scalar,
    pub a2: Scalar,
    pub a3: Scalar,
    pub d1: Scalar,
    pub d2: Scalar,
    pub c1: Scalar,
    pub c2: Scalar,
    pub c3: Scalar,
    pub c4: Scalar,
    pub j1: Scalar,
    pub j2: Scalar,
    pub j3: Scalar,
    pub j4: Scalar,
    pub v1: Scalar,
    pub v2: Scalar,
    pub t: Scalar,
}

impl Table1Params {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The parameter vector in canonical order.
    pub fn names() -> [&'static str; 16] {
        [
            "a1", "a2", "a3", "d1", "d2", "c1", "c2", "c3", "c4", "j1", "j2", "j3", "j4", "v1",
            "v2", "t",
        ]
    }

    pub fn unit(name: &str) -> Self {
        let mut p = Self::zero();
        let slot = match name {
            "a1" => &mut p.a1,
            "a2" => &mut p.a2,
            "a3" => &mut p.a3,
            "d1" => &mut p.d1,
            "d2" => &mut p.d2,
            "c1" => &mut p.c1,
            "c2" => &mut p.c2,
            "c3" => &mut p.c3,
            "c4" => &mut p.c4,
            "j1" => &mut p.j1,
            "j2" => &mut p.j2,
            "j3" => &mut p.j3,
            "j4" => &mut p.j4,
            "v1" => &mut p.v1,
            "v2" => &mut p.v2,
            "t" => &mut p.t,
            _ => panic!("unknown parameter {name}"),
        };
        *slot = Scalar::one();
        p
    }

    pub fn build(&self) -> CurvatureTensor {
        let h = |a: [[&Scalar; 2]; 2], v: &Scalar, y: [&Scalar; 2]| -> ExactMat {
            HElem {
                a: [
                    [a[0][0].clone(), a[0][1].clone()],
                    [a[1][0].clone(), a[1][1].clone()],
                ],
                v: v.clone(),
                y: [y[0].clone(), y[1].clone()],
            }
            .embed()
        };
        let zero = Scalar::zero();
        let mut r = CurvatureTensor::zero();

        // R15: A = 0, v = 0, y = (d1+c2, c1+c4)
        let y15 = [&self.d1 + &self.c2, &self.c1 + &self.c4];
        let r15 = h(
            [[&zero, &zero], [&zero, &zero]],
            &zero,
            [&y15[0], &y15[1]],
        );
        r.set(1, 5, r15.clone());

        // R26: A = [[−a1, −a2], [−a3, a1]], y = (d1, c1)
        let na1 = -&self.a1;
        let na2 = -&self.a2;
        let na3 = -&self.a3;
        let r26 = h(
            [[&na1, &na2], [&na3, &self.a1]],
            &zero,
            [&self.d1, &self.c1],
        );
        r.set(2, 6, r26.clone());

        // R27: A = [[−a3, a1], [j1, a3]], y = (c1, c3)
        r.set(
            2,
            7,
            h(
                [[&na3, &self.a1], [&self.j1, &self.a3]],
                &zero,
                [&self.c1, &self.c3],
            ),
        );

        // R36: A = [[−a2, j2], [a1, a2]], y = (d2, c2)
        r.set(
            3,
            6,
            h(
                [[&na2, &self.j2], [&self.a1, &self.a2]],
                &zero,
                [&self.d2, &self.c2],
            ),
        );

        // −R67 = (1/√2)·R45 = h(0, 0, (v1, v2))
        let hv = h(
            [[&zero, &zero], [&zero, &zero]],
            &zero,
            [&self.v1, &self.v2],
        );
        r.set(4, 5, hv.scale(&Scalar::sqrt2()));
        r.set(6, 7, hv.neg());

        // R56: A = [[d1, d2], [c1, c2]], v = v1, y = (j3, t)
        r.set(
            5,
            6,
            h(
                [[&self.d1, &self.d2], [&self.c1, &self.c2]],
                &self.v1,
                [&self.j3, &self.t],
            ),
        );

        // R57: A = [[c1, c2], [c3, c4]], v = v2, y = (t, j4)
        r.set(
            5,
            7,
            h(
                [[&self.c1, &self.c2], [&self.c3, &self.c4]],
                &self.v2,
                [&self.t, &self.j4],
            ),
        );

        // R37 = R15 − R26; all remaining pairs vanish.
        r.set(3, 7, r15.sub(&r26));
        r
    }
}

/// Exact basis of K(S): nullspace of the linear Bianchi system on Λ²V*⊗S.
pub fn solve_k(s: &Subalgebra) -> Vec<CurvatureTensor> {
    let dim = s.dim();
    let pairs: Vec<(u8, u8)> = (1..=DIM as u8)
        .flat_map(|i| ((i + 1)..=DIM as u8).map(move |j| (i, j)))
        .collect();
    let n_unknowns = pairs.len() * dim;
    let pair_index = |i: u8, j: u8| pairs.iter().position(|&p| p == (i, j)).unwrap();

    // Precompute the columns S_m e_k.
    let basis_cols: Vec<Vec<Vec<Scalar>>> = s
        .basis
        .iter()
        .map(|m| {
            (0..DIM)
                .map(|k| (0..DIM).map(|row| m.get(row, k).clone()).collect())
                .collect()
        })
        .collect();

    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for i in 1..=DIM as u8 {
        for j in (i + 1)..=DIM as u8 {
            for k in (j + 1)..=DIM as u8 {
                // R(b_i,b_j)b_k + R(b_j,b_k)b_i − R(b_i,b_k)b_j = 0
                let contributions = [
                    (pair_index(i, j), k, false),
                    (pair_index(j, k), i, false),
                    (pair_index(i, k), j, true),
                ];
                for comp in 0..DIM {
                    let mut row = vec![Scalar::zero(); n_unknowns];
                    for &(p, col_of, negate) in &contributions {
                        for m in 0..dim {
                            let val = &basis_cols[m][col_of as usize - 1][comp];
                            if val.is_zero() {
                                continue;
                            }
                            let idx = p * dim + m;
                            let add = if negate { -val } else { val.clone() };
                            row[idx] = &row[idx] + &add;
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
    }

    let nullspace = if rows.is_empty() {
        // no constraints: all of Λ²V*⊗S
        (0..n_unknowns)
            .map(|i| {
                let mut v = vec![Scalar::zero(); n_unknowns];
                v[i] = Scalar::one();
                v
            })
            .collect()
    } else {
        ExactMat::from_rows(rows).nullspace()
    };

    nullspace
        .into_iter()
        .map(|x| {
            let mut r = CurvatureTensor::zero();
            for (p, &(i, j)) in pairs.iter().enumerate() {
                let mut m = ExactMat::zeros(DIM, DIM);
                for (bm, b) in s.basis.iter().enumerate() {
                    let c = &x[p * dim + bm];
                    if !c.is_zero() {
                        m = m.add(&b.scale(c));
                    }
                }
                if !m.is_zero() {
                    r.set(i, j, m);
                }
            }
            r
        })
        .collect()
}

/// Span of the values {R(b_i, b_j)} over a basis of K(S), returned as its
/// dimension and a basis of matrices inside S.
pub fn underline(s: &Subalgebra) -> (usize, Vec<ExactMat>) {
    underline_of(&solve_k(s))
}

pub fn underline_of(k_basis: &[CurvatureTensor]) -> (usize, Vec<ExactMat>) {
    let mut vectors: Vec<Vec<Scalar>> = Vec::new();
    let mut mats: Vec<ExactMat> = Vec::new();
    let mut rank = 0usize;
    for r in k_basis {
        for (_, m) in r.pairs() {
            let v = m.vectorize();
            let mut candidate = vectors.clone();
            candidate.push(v.clone());
            let new_rank = crate::exact::span_rank(&candidate);
            if new_rank > rank {
                rank = new_rank;
                vectors.push(v);
                mats.push(m.clone());
            }
        }
    }
    (rank, mats)
}

/// Berger verdict for a named subalgebra.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BergerVerdict {
    pub algebra: String,
    pub dim: usize,
    #[serde(rename = "dimK")]
    pub dim_k: usize,
    pub dim_underline: usize,
    pub berger_ok: bool,
}

pub fn berger_verdict(s: &Subalgebra) -> BergerVerdict {
    let k = solve_k(s);
    let (du, _) = underline_of(&k);
    BergerVerdict {
        algebra: s.name.clone(),
        dim: s.dim(),
        dim_k: k.len(),
        dim_underline: du,
        berger_ok: du == s.dim(),
    }
}

/// Result of checking the 16-parameter table against the brute-force K.
#[derive(Clone, Debug)]
pub struct Table1Report {
    pub dim_table: usize,
    pub dim_solver: usize,
    pub table_in_solver: bool,
    pub solver_in_table: bool,
    pub bianchi_ok: bool,
}

impl Table1Report {
    pub fn ok(&self) -> bool {
        self.dim_table == self.dim_solver
            && self.table_in_solver
            && self.solver_in_table
            && self.bianchi_ok
    }
}

/// Verifies span(table parametrization) = K(h_III), both directions, exactly.
pub fn table1_crosscheck(h3: &Subalgebra) -> Table1Report {
    let table: Vec<CurvatureTensor> = Table1Params::names()
        .iter()
        .map(|n| Table1Params::unit(n).build())
        .collect();
    let solver = solve_k(h3);

    let bianchi_ok = table.iter().all(|r| r.bianchi_residual().is_zero());

    let tv: Vec<Vec<Scalar>> = table.iter().map(|r| r.vectorize()).collect();
    let sv: Vec<Vec<Scalar>> = solver.iter().map(|r| r.vectorize()).collect();
    let dim_table = crate::exact::span_rank(&tv);
    let dim_solver = crate::exact::span_rank(&sv);

    let table_in_solver = {
        let m = ExactMat::from_rows(sv.clone());
        tv.iter().all(|v| m.contains_in_row_span(v))
    };
    let solver_in_table = {
        let m = ExactMat::from_rows(tv);
        sv.iter().all(|v| m.contains_in_row_span(v))
    };

    Table1Report {
        dim_table,
        dim_solver,
        table_in_solver,
        solver_in_table,
        bianchi_ok,
    }
}

/// The linear system that excludes R·C_a from the Berger algebras: in the
/// unknowns (d1, d2, c1, c2, c3, c4),
///   d1 = c2 = −c3,   −d2 = c1 = c4,   d1 = α·c1,   c1 = α·c3.
pub fn c_a_exclusion_system(alpha: &Scalar) -> ExactMat {
    let z = Scalar::zero;
    let one = Scalar::one;
    let rows = vec![
        // d1 − c2 = 0
        vec![one(), z(), z(), -one(), z(), z()],
        // c2 + c3 = 0
        vec![z(), z(), z(), one(), one(), z()],
        // d2 + c1 = 0
        vec![z(), one(), one(), z(), z(), z()],
        // c1 − c4 = 0
        vec![z(), z(), one(), z(), z(), -one()],
        // d1 − α·c1 = 0
        vec![one(), z(), -alpha, z(), z(), z()],
        // c1 − α·c3 = 0
        vec![z(), z(), one(), z(), -alpha, z()],
    ];
    ExactMat::from_rows(rows)
}

/// True iff the exclusion system has only the trivial solution for this α.
pub fn c_a_exclusion_is_trivial(alpha: &Scalar) -> bool {
    c_a_exclusion_system(alpha).nullspace().is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::registry;

    #[test]
    fn bianchi_zero_tensor() {
        assert!(CurvatureTensor::zero().bianchi_residual().is_zero());
    }

    #[test]
    fn bianchi_of_v1_row() {
        let r = Table1Params::unit("v1").build();
        assert!(r.bianchi_residual().is_zero());
    }

    #[test]
    fn bianchi_detects_violation() {
        let mut r = CurvatureTensor::zero();
        r.set(1, 2, HElem::from_parts([[0, 0], [0, 0]], 1, [0, 0]).embed());
        assert!(!r.bianchi_residual().is_zero());
    }

    #[test]
    fn all_table_rows_satisfy_bianchi() {
        for name in Table1Params::names() {
            let r = Table1Params::unit(name).build();
            assert!(
                r.bianchi_residual().is_zero(),
                "table row {name} violates the first Bianchi identity"
            );
        }
    }

    #[test]
    fn k_of_full_family_has_dim_16() {
        let h3 = registry().get("h_III").unwrap();
        let k = solve_k(&h3);
        assert_eq!(k.len(), 16);
        for r in &k {
            assert!(r.bianchi_residual().is_zero());
        }
    }

    #[test]
    fn k_of_trivial_algebra_empty() {
        let trivial = Subalgebra::from_basis("trivial", vec![]);
        assert_eq!(solve_k(&trivial).len(), 0);
    }

    #[test]
    fn table_crosscheck() {
        let h3 = registry().get("h_III").unwrap();
        let rep = table1_crosscheck(&h3);
        assert!(rep.ok(), "{rep:?}");
        assert_eq!(rep.dim_table, 16);
    }

    #[test]
    fn single_param_t_rows() {
        let r = Table1Params::unit("t").build();
        // R56 has y = (0, 1), R57 has y = (1, 0), everything else zero
        let r56 = HElem::extract(&r.at(5, 6)).unwrap();
        assert_eq!(r56.y[1], Scalar::one());
        assert!(r56.y[0].is_zero() && r56.v.is_zero());
        let r57 = HElem::extract(&r.at(5, 7)).unwrap();
        assert_eq!(r57.y[0], Scalar::one());
        assert!(r57.v.is_zero());
        assert!(r.at(1, 5).is_zero());
        assert!(r.at(2, 6).is_zero());
        // contained in the brute-force space
        let h3 = registry().get("h_III").unwrap();
        let sv: Vec<Vec<Scalar>> = solve_k(&h3).iter().map(|x| x.vectorize()).collect();
        assert!(ExactMat::from_rows(sv).contains_in_row_span(&r.vectorize()));
    }

    #[test]
    fn berger_holds_on_certified_algebras() {
        let reg = registry();
        for (name, dim) in [
            ("m11", 2usize),
            ("m12", 3),
            ("rdiag10_m11", 3),
            ("rdiag10_m12", 4),
        ] {
            let s = reg.get(name).unwrap();
            let v = berger_verdict(&s);
            assert!(v.berger_ok, "{name}: {v:?}");
            assert_eq!(v.dim_underline, dim);
        }
    }

    #[test]
    fn k_of_subalgebras_inside_k_of_full_family() {
        let reg = registry();
        let h3 = reg.get("h_III").unwrap();
        let big: Vec<Vec<Scalar>> = solve_k(&h3).iter().map(|r| r.vectorize()).collect();
        let big = ExactMat::from_rows(big);
        for name in [
            "gl2_m12",
            "sl2_m12",
            "co2_m12",
            "d_m12",
            "rdiag10_m11",
            "rdiag10_m12",
            "m11",
            "m12",
        ] {
            let s = reg.get(name).unwrap();
            for r in solve_k(&s) {
                assert!(
                    big.contains_in_row_span(&r.vectorize()),
                    "K({name}) escapes K of the full family"
                );
            }
        }
    }

    #[test]
    fn k_of_m12_matches_constrained_table() {
        // forcing every A-entry of the table to zero leaves j3, j4, t, v1, v2
        let m12 = registry().get("m12").unwrap();
        let k = solve_k(&m12);
        let table: Vec<Vec<Scalar>> = ["j3", "j4", "t", "v1", "v2"]
            .iter()
            .map(|n| Table1Params::unit(n).build().vectorize())
            .collect();
        let table_rank = crate::exact::span_rank(&table);
        assert_eq!(k.len(), table_rank);
        assert_eq!(k.len(), 5);
        let table_mat = ExactMat::from_rows(table);
        for r in &k {
            assert!(table_mat.contains_in_row_span(&r.vectorize()));
        }
    }

    #[test]
    fn c_a_exclusion() {
        for a in [-2i64, -1, 0, 1, 5] {
            assert!(c_a_exclusion_is_trivial(&Scalar::from_int(a)));
        }
        let s = registry().get("r_Ca(1)").unwrap();
        let v = berger_verdict(&s);
        assert!(!v.berger_ok, "{v:?}");
        assert!(v.dim_underline < s.dim());
    }
}
