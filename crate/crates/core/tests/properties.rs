//! Property tests for the arithmetic layers: field axioms over Q(√2),
//! rank/nullity, jet ring laws, polynomial-exactness of jets, and the
//! parser round trip. Derivatives of every registry slot function are also
//! checked against central finite differences.
#![allow(clippy::needless_range_loop)]


use proptest::prelude::*;

use g2hol::coframe::builtin_examples;
use g2hol::exact::{ExactMat, Scalar};
use g2hol::expr::{self, diff, eval_jet};
use g2hol::jet::{multi_indices, Jet};

fn rational() -> impl Strategy<Value = Scalar> {
    (-40i64..40, 1i64..12).prop_map(|(p, q)| Scalar::ratio(p, q))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (rational(), rational()).prop_map(|(a, b)| a + b * Scalar::sqrt2())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!((&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!((&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        if !x.is_zero() {
            let inv = x.inverse().unwrap();
            prop_assert_eq!(&x * &inv, Scalar::one());
            // inversion via conjugate over the norm is exact
            let conj_over_norm = {
                let n = x.norm();
                let c = x.conj();
                Scalar::new(c.rational_part() / &n, c.sqrt2_part() / &n)
            };
            prop_assert_eq!(inv, conj_over_norm);
        }
    }

    #[test]
    fn rank_plus_nullity_is_cols(entries in proptest::collection::vec(scalar(), 24), zeros in proptest::collection::vec(0usize..24, 0..12)) {
        let mut e = entries;
        for z in zeros {
            e[z] = Scalar::zero();
        }
        let m = ExactMat::from_fn(4, 6, |i, j| e[i * 6 + j].clone());
        let rank = m.rank();
        let nullity = m.nullspace().len();
        prop_assert_eq!(rank + nullity, 6);
        for v in m.nullspace() {
            prop_assert!(m.apply(&v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn jet_ring_distributivity(
        a in proptest::collection::vec(-2.0f64..2.0, 36),
        b in proptest::collection::vec(-2.0f64..2.0, 36),
        c in proptest::collection::vec(-2.0f64..2.0, 36),
    ) {
        // random order-2 jets out of constants, scaled variables and their
        // pairwise products
        let from = |v: &[f64]| {
            let mut j = Jet::constant(v[0], 2);
            for var in 1..=7usize {
                j = j.add(&Jet::variable(0.0, var, 2).scale(v[var]));
            }
            let mut k = 8;
            for a in 1..=7usize {
                for b in a..=7usize {
                    if k >= v.len() {
                        return j;
                    }
                    let m = Jet::variable(0.0, a, 2).mul(&Jet::variable(0.0, b, 2));
                    j = j.add(&m.scale(v[k]));
                    k += 1;
                }
            }
            j
        };
        let (ja, jb, jc) = (from(&a), from(&b), from(&c));
        let lhs = ja.add(&jb).mul(&jc);
        let rhs = ja.mul(&jc).add(&jb.mul(&jc));
        for (x, y) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs())));
        }
        let ab = ja.mul(&jb);
        let ba = jb.mul(&ja);
        for (x, y) in ab.coeffs().iter().zip(ba.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs())));
        }
    }

    #[test]
    fn polynomial_jets_are_exact(
        monomials in proptest::collection::vec(
            ((-4i64..5), proptest::collection::vec(0u8..3, 7)),
            1..6
        ),
        point in proptest::collection::vec(0.25f64..0.75, 7),
    ) {
        // keep total degree ≤ 4 per monomial
        let monomials: Vec<(i64, Vec<u8>)> = monomials
            .into_iter()
            .map(|(c, mut e)| {
                while e.iter().map(|&x| x as usize).sum::<usize>() > 4 {
                    let i = e.iter().position(|&x| x > 0).unwrap();
                    e[i] -= 1;
                }
                (c, e)
            })
            .collect();
        let p: [f64; 7] = point.try_into().unwrap();

        // the expression Σ c·Π x_i^{e_i}
        let mut ex = expr::Expr::int(0);
        for (c, e) in &monomials {
            let mut term = expr::Expr::int(*c);
            for (i, &pow) in e.iter().enumerate() {
                if pow > 0 {
                    term = expr::mul(term, expr::powi(expr::Expr::var(i as u8 + 1), pow as i32));
                }
            }
            ex = expr::add(ex, term);
        }
        let jet = eval_jet(&ex, &p, 4).unwrap();

        // independent oracle: multinomial expansion around p,
        // coeff(α) = Σ_monomials c·Π binom(e_i, α_i)·p_i^(e_i−α_i)
        fn binom(n: u8, k: u8) -> f64 {
            if k > n {
                return 0.0;
            }
            let mut r = 1.0;
            for t in 0..k {
                r = r * (n - t) as f64 / (t + 1) as f64;
            }
            r
        }
        for alpha in multi_indices(4) {
            let mut expect = 0.0;
            for (c, e) in &monomials {
                let mut term = *c as f64;
                for i in 0..7 {
                    let (ei, ai) = (e[i], alpha[i]);
                    if ai > ei {
                        term = 0.0;
                        break;
                    }
                    term *= binom(ei, ai) * p[i].powi((ei - ai) as i32);
                }
                expect += term;
            }
            let got = jet.coeff(alpha);
            prop_assert!(
                (got - expect).abs() <= 1e-12 * (1.0 + expect.abs()),
                "alpha {:?}: got {} want {}", alpha, got, expect
            );
        }
    }

    #[test]
    fn parse_print_roundtrip_evaluates_identically(
        monomials in proptest::collection::vec(
            ((-9i64..10, 1i64..5), proptest::collection::vec(0u8..2, 7)),
            1..5
        ),
    ) {
        let mut ex = expr::Expr::int(0);
        for ((n, d), e) in &monomials {
            let mut term = expr::Expr::constant(Scalar::ratio(*n, *d));
            for (i, &pow) in e.iter().enumerate() {
                if pow > 0 {
                    term = expr::mul(term, expr::powi(expr::Expr::var(i as u8 + 1), pow as i32));
                }
            }
            ex = expr::sub(ex, term);
        }
        let printed = ex.to_string();
        let reparsed = expr::parse(&printed).unwrap();
        prop_assert_eq!(&printed, &reparsed.to_string());
        let p = [0.3, 0.7, 0.45, 0.55, 0.2, 0.85, 0.6];
        let a = eval_jet(&ex, &p, 2).unwrap();
        let b = eval_jet(&reparsed, &p, 2).unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }
}

/// Symbolic derivatives of every built-in slot function agree with central
/// finite differences of the plain evaluation.
#[test]
fn registry_slot_derivatives_match_finite_differences() {
    let h = 1e-5;
    let pts = g2hol::rng::sample_points(0xFD, 3, 0.2, 0.8);
    for (case, slots) in builtin_examples() {
        for (name, src) in &slots {
            let e = expr::parse(src).unwrap();
            for var in 1..=7u8 {
                let d = diff(&e, var);
                for p in &pts {
                    let sym = expr::eval(&d, p).unwrap();
                    let mut pp = *p;
                    let mut pm = *p;
                    pp[var as usize - 1] += h;
                    pm[var as usize - 1] -= h;
                    let fd =
                        (expr::eval(&e, &pp).unwrap() - expr::eval(&e, &pm).unwrap()) / (2.0 * h);
                    assert!(
                        (sym - fd).abs() <= 1e-6 * (1.0 + sym.abs()),
                        "case {case} slot {name} var {var}: sym {sym} fd {fd}"
                    );
                }
            }
        }
    }
}
