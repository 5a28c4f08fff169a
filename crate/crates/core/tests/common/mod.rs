#![allow(dead_code)]

use chiral_core::catalog::{bc, beta_gamma, kac_moody_example, sl2, SL2_NAMES};
use chiral_core::datum::{GeneratorSpec, Parity, QuadraticDatum, RelationRow};
use chiral_core::laurent::{LaurentMatrix, LaurentPoly};
use chiral_core::scalar::{int, rat};
use chiral_core::vertex::{ModeAlgebra, Monomial, State};
use rand::Rng;

/// One engine of each family, with a generous cutoff.
pub fn engines() -> Vec<(&'static str, ModeAlgebra)> {
    let km = kac_moody_example(&sl2(int(1)).unwrap(), Some(&SL2_NAMES)).unwrap();
    let km = km.engines.unwrap();
    let bg = beta_gamma().unwrap().engines.unwrap();
    let bc = bc().unwrap().engines.unwrap();
    let fermion = ModeAlgebra::weyl_clifford(
        vec![GeneratorSpec::new("psi", 0, Parity::Odd, rat(1, 2))],
        vec![vec![int(1)]],
    )
    .unwrap();
    vec![
        ("kac-moody", km.primal.with_cutoff(6)),
        ("ce", km.dual.with_cutoff(6)),
        ("beta-gamma", bg.primal.with_cutoff(6)),
        ("bc", bc.primal.with_cutoff(6)),
        ("fermion", fermion.with_cutoff(6)),
    ]
}

/// A random basis monomial of weight at most `max_weight`, as a state with a
/// small nonzero coefficient.
pub fn random_monomial<R: Rng>(rng: &mut R, basis: &[Monomial]) -> State {
    let m = basis[rng.gen_range(0..basis.len())].clone();
    let c = loop {
        let c = rng.gen_range(-3i64..=3);
        if c != 0 {
            break c;
        }
    };
    State::single(m, int(c))
}


pub fn nonzero<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    loop {
        let c = rng.gen_range(-bound..=bound);
        if c != 0 {
            return c;
        }
    }
}

/// `c t^k` with `k` in `[lo, hi]`.
pub fn random_monomial_poly<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> LaurentPoly {
    LaurentPoly::monomial(int(nonzero(rng, 2)), rng.gen_range(lo..=hi))
}

pub fn random_poly<R: Rng>(rng: &mut R, lo: i64, hi: i64, terms: usize) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for _ in 0..terms {
        p.add_term(rng.gen_range(lo..=hi), int(rng.gen_range(-3..=3)));
    }
    p
}

/// Unit-determinant `n x n` matrix: monomial diagonal followed by a few row
/// operations with monomial multipliers.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> LaurentMatrix {
    let mut m = LaurentMatrix::zeros(n, n);
    for i in 0..n {
        m.set(i, i, random_monomial_poly(rng, -3, 3));
    }
    if n > 1 {
        for _ in 0..n {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let factor = random_monomial_poly(rng, -3, 3);
            for c in 0..n {
                let v = m.get(i, c) + &(&factor * m.get(j, c));
                m.set(i, c, v);
            }
        }
    }
    m
}

pub fn random_generators<R: Rng>(rng: &mut R, r: usize) -> Vec<GeneratorSpec> {
    (0..r)
        .map(|i| {
            let parity = if rng.gen_bool(0.5) { Parity::Odd } else { Parity::Even };
            GeneratorSpec::new(format!("g{i}"), rng.gen_range(-2..=2), parity, rat(rng.gen_range(0..=4), 2))
        })
        .collect()
}

/// Random dualizable datum of rank at most 3.
pub fn random_dualizable<R: Rng>(rng: &mut R) -> QuadraticDatum {
    let r = rng.gen_range(1..=3);
    let m = random_unimodular(rng, r * r);
    let rows: Vec<RelationRow> = m.to_rows();
    QuadraticDatum::new(random_generators(rng, r), rows).unwrap()
}

/// Cofactor expansion along the first row.
pub fn cofactor_det(m: &LaurentMatrix) -> LaurentPoly {
    let n = m.nrows();
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut acc = LaurentPoly::zero();
    for j in 0..n {
        if m.get(0, j).is_zero() {
            continue;
        }
        let minor_rows: Vec<Vec<LaurentPoly>> = (1..n)
            .map(|i| (0..n).filter(|&c| c != j).map(|c| m.get(i, c).clone()).collect())
            .collect();
        let minor = LaurentMatrix::from_rows(minor_rows, n - 1).unwrap();
        let term = m.get(0, j) * &cofactor_det(&minor);
        if j % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    acc
}
