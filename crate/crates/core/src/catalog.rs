//! Ready-made data: commutative, a four-generator pure quadratic datum,
//! affine Kac-Moody and βγ-bc systems, with their engines and closed-form
//! expectations.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::datum::{row_from_terms, DatumError, GeneratorSpec, Parity, QuadraticDatum, RelationRow};
use crate::qls::{QlsDatum, QlsError};
use crate::scalar::{int, rat, Scalar};
use crate::vertex::lie::{invert, solve_row, ScalarMatrix};
use crate::vertex::{
    ce_differential, curving_affine, curving_symplectic, Derivation, EngineError, LieData, ModeAlgebra, State,
    TensorEngine, TensorState,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("invalid Lie data: {0}")]
    InvalidLieData(String),
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error(transparent)]
    Qls(#[from] QlsError),
    #[error(transparent)]
    Engine(EngineError),
}

impl From<EngineError> for CatalogError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::InvalidLieData(m) => CatalogError::InvalidLieData(m),
            EngineError::InvalidPairing(m) => CatalogError::InvalidPairing(m),
            other => CatalogError::Engine(other),
        }
    }
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// Typed in from a published closed form.
    ClosedForm,
    /// Computed here by an independent route.
    Computed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExampleDatum {
    Quadratic(QuadraticDatum),
    Qls(QlsDatum),
}

impl ExampleDatum {
    pub fn datum(&self) -> &QuadraticDatum {
        match self {
            ExampleDatum::Quadratic(d) => d,
            ExampleDatum::Qls(q) => q.datum(),
        }
    }
}

/// Primal engine, dual (commutative) engine, and the dual's differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnginePair {
    pub primal: ModeAlgebra,
    pub dual: ModeAlgebra,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleBundle {
    pub name: String,
    pub datum: ExampleDatum,
    /// Expected dual relations, over the dual generators in the same order.
    pub expected_dual: Option<Vec<RelationRow>>,
    pub engines: Option<EnginePair>,
    /// `d` on the dual engine's generators.
    pub expected_d: Option<Derivation>,
    pub expected_iota: Option<State>,
    /// `I(0)I` for the canonical element `I` in primal ⊗ dual.
    pub expected_i0i: Option<TensorState>,
    pub sources: BTreeMap<&'static str, Source>,
}

/// `(N, N⊠N)` on even generators `x1, x2, ...` of weight 1.
pub fn commutative_example(degrees: &[i64]) -> Result<ExampleBundle, CatalogError> {
    let r = degrees.len();
    if r == 0 {
        return Err(DatumError::DimensionMismatch("need at least one generator".into()).into());
    }
    let gens: Vec<GeneratorSpec> = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| GeneratorSpec::new(format!("x{}", i + 1), d, Parity::Even, int(1)))
        .collect();
    let rows = crate::laurent::LaurentMatrix::identity(r * r).to_rows();
    Ok(ExampleBundle {
        name: format!("commutative-rank{r}"),
        datum: ExampleDatum::Quadratic(QuadraticDatum::new(gens, rows.clone())?),
        expected_dual: Some(rows),
        engines: None,
        expected_d: None,
        expected_iota: None,
        expected_i0i: None,
        sources: BTreeMap::from([("expected_dual", Source::ClosedForm)]),
    })
}

/// Four even generators `phi1..phi4` with `phi_i⊠phi_j` for `{i,j} != {1,2}`,
/// `phi1⊠phi2 - t^{-1} phi3⊠phi4` and `phi2⊠phi1 + t^{-1} phi4⊠phi3`.
pub fn four_generator_example() -> Result<ExampleBundle, CatalogError> {
    let gens: Vec<GeneratorSpec> = (1..=4).map(|i| GeneratorSpec::even(format!("phi{i}"), int(1))).collect();
    let one = int(1);
    let mut rows = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let row = match (i, j) {
                (0, 1) => row_from_terms(4, &[(one.clone(), 0, 0, 1), (int(-1), -1, 2, 3)]),
                (1, 0) => row_from_terms(4, &[(one.clone(), 0, 1, 0), (int(1), -1, 3, 2)]),
                _ => row_from_terms(4, &[(one.clone(), 0, i, j)]),
            };
            rows.push(row);
        }
    }
    let mut dual = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let row = match (i, j) {
                (2, 3) => row_from_terms(4, &[(one.clone(), 0, 2, 3), (int(1), -1, 0, 1)]),
                (3, 2) => row_from_terms(4, &[(one.clone(), 0, 3, 2), (int(-1), -1, 1, 0)]),
                _ => row_from_terms(4, &[(one.clone(), 0, i, j)]),
            };
            dual.push(row);
        }
    }
    Ok(ExampleBundle {
        name: "four-generator".into(),
        datum: ExampleDatum::Quadratic(QuadraticDatum::new(gens, rows)?),
        expected_dual: Some(dual),
        engines: None,
        expected_d: None,
        expected_iota: None,
        expected_i0i: None,
        sources: BTreeMap::from([("expected_dual", Source::ClosedForm)]),
    })
}

/// 2x2 matrices `e, h, f`.
fn sl2_matrices() -> [[[Scalar; 2]; 2]; 3] {
    let z = || int(0);
    [
        [[z(), int(1)], [z(), z()]],
        [[int(1), z()], [z(), int(-1)]],
        [[z(), z()], [int(1), z()]],
    ]
}

fn matmul(a: &[[Scalar; 2]; 2], b: &[[Scalar; 2]; 2]) -> [[Scalar; 2]; 2] {
    let entry = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

/// Structure constants of `sl2` in the basis `(e, h, f)`, obtained by
/// expanding matrix commutators in that basis.
pub fn sl2_structure_constants() -> Vec<Vec<Vec<Scalar>>> {
    let m = sl2_matrices();
    // coordinates read from entries (0,0), (0,1), (1,0)
    let coords = |x: &[[Scalar; 2]; 2]| vec![x[0][0].clone(), x[0][1].clone(), x[1][0].clone()];
    let basis: ScalarMatrix = m.iter().map(coords).collect();
    let mut f = vec![vec![vec![Scalar::zero(); 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let ab = matmul(&m[a], &m[b]);
            let ba = matmul(&m[b], &m[a]);
            let comm = [
                [&ab[0][0] - &ba[0][0], &ab[0][1] - &ba[0][1]],
                [&ab[1][0] - &ba[1][0], &ab[1][1] - &ba[1][1]],
            ];
            let x = solve_row(&basis, &coords(&comm)).expect("e, h, f are independent");
            debug_assert_eq!(comm[1][1], -comm[0][0].clone());
            f[a][b] = x;
        }
    }
    f
}

/// `tr(ad x_a ad x_b)`.
pub fn killing_form(f: &[Vec<Vec<Scalar>>]) -> ScalarMatrix {
    let n = f.len();
    let mut k = vec![vec![Scalar::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    // (ad x_a ad x_b)_{dc}: x_c -> [x_b, x_c] -> [x_a, .]
                    k[a][b] += &f[b][c][d] * &f[a][d][c];
                }
            }
        }
    }
    k
}

/// `sl2` with `κ = level · Killing / (2 h^∨)`, `h^∨ = 2`.
pub fn sl2(level: Scalar) -> Result<LieData, CatalogError> {
    let f = sl2_structure_constants();
    let scale = level * rat(1, 4);
    let kappa = killing_form(&f)
        .into_iter()
        .map(|row| row.into_iter().map(|v| v * &scale).collect())
        .collect();
    Ok(LieData::new(f, kappa)?)
}

/// Rank one abelian algebra with `κ = (k)`.
pub fn heisenberg(k: Scalar) -> Result<LieData, CatalogError> {
    Ok(LieData::abelian(vec![vec![k]])?)
}

pub const SL2_NAMES: [&str; 3] = ["e", "h", "f"];

fn lie_names(lie: &LieData, names: Option<&[&str]>) -> Vec<String> {
    match names {
        Some(ns) if ns.len() == lie.dim() => ns.iter().map(|s| format!("x_{s}")).collect(),
        _ => (1..=lie.dim()).map(|i| format!("x{i}")).collect(),
    }
}

/// Affine Kac-Moody QLS datum on `1° ⊕ g`: rows `1°⊠1°`, `1°⊠x_a`, `x_a⊠1°`
/// and `x_a⊠x_b - 1/2 sum_c f^c_{ab} t^{-1} (1°⊠x_c + x_c⊠1°) - κ_{ab} t^{-2} 1°⊠1°`.
pub fn kac_moody_example(lie: &LieData, names: Option<&[&str]>) -> Result<ExampleBundle, CatalogError> {
    // revalidate: callers may hold data built without checks
    let lie = LieData::new(lie.structure_constants().clone(), lie.kappa_matrix().clone())?;
    let n = lie.dim();
    let r = n + 1;
    let names = lie_names(&lie, names);
    let mut gens = vec![GeneratorSpec::unit()];
    gens.extend(names.iter().map(|s| GeneratorSpec::even(s.clone(), int(1))));
    let x = |a: usize| a + 1;
    let half = rat(1, 2);
    let mut rows = vec![row_from_terms(r, &[(int(1), 0, 0, 0)])];
    for a in 0..n {
        rows.push(row_from_terms(r, &[(int(1), 0, 0, x(a))]));
        rows.push(row_from_terms(r, &[(int(1), 0, x(a), 0)]));
    }
    let mut dual = vec![{
        let mut terms = vec![(int(1), 0, 0, 0)];
        for a in 0..n {
            for b in 0..n {
                terms.push((lie.kappa(a, b).clone(), -2, x(a), x(b)));
            }
        }
        row_from_terms(r, &terms)
    }];
    for c in 0..n {
        for anchor in [(0, x(c)), (x(c), 0)] {
            let mut terms = vec![(int(1), 0, anchor.0, anchor.1)];
            for a in 0..n {
                for b in 0..n {
                    terms.push((lie.f(a, b, c) * &half, -1, x(a), x(b)));
                }
            }
            dual.push(row_from_terms(r, &terms));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let mut terms = vec![(int(1), 0, x(a), x(b)), (-lie.kappa(a, b).clone(), -2, 0, 0)];
            for c in 0..n {
                let coeff = -(lie.f(a, b, c) * &half);
                terms.push((coeff.clone(), -1, 0, x(c)));
                terms.push((coeff, -1, x(c), 0));
            }
            rows.push(row_from_terms(r, &terms));
            dual.push(row_from_terms(r, &[(int(1), 0, x(a), x(b))]));
        }
    }
    let datum = QlsDatum::new(QuadraticDatum::new(gens, rows)?)?;

    let primal = ModeAlgebra::affine(
        names.iter().map(|s| GeneratorSpec::even(s.clone(), int(1))).collect(),
        lie.clone(),
    )?;
    let dual_engine = ModeAlgebra::abelian_ce(
        names
            .iter()
            .map(|s| GeneratorSpec::even(s.clone(), int(1)).dual().0)
            .collect(),
        lie.clone(),
    )?;
    let d = ce_differential(&dual_engine)?;
    let iota = curving_affine(&dual_engine)?;
    let mut i0i = TensorState::zero();
    for a in 0..n {
        for b in 0..n {
            let cc = dual_engine.normal_order(&[(a, -1), (b, -1)])?;
            for c in 0..n {
                let f = lie.f(a, b, c);
                if !f.is_zero() {
                    i0i.add_scaled(&TensorEngine::tensor(&primal.generator(c), &cc), f);
                }
            }
            let k = lie.kappa(a, b);
            if !k.is_zero() {
                let dcc = dual_engine.normal_order(&[(a, -2), (b, -1)])?;
                i0i.add_scaled(&TensorEngine::tensor(&State::vacuum(), &dcc), k);
            }
        }
    }
    Ok(ExampleBundle {
        name: "kac-moody".into(),
        datum: ExampleDatum::Qls(datum),
        expected_dual: Some(dual),
        engines: Some(EnginePair {
            primal,
            dual: dual_engine,
        }),
        expected_d: Some(d),
        expected_iota: Some(iota),
        expected_i0i: Some(i0i),
        sources: BTreeMap::from([
            ("expected_dual", Source::ClosedForm),
            ("expected_d", Source::ClosedForm),
            ("expected_iota", Source::ClosedForm),
            ("expected_i0i", Source::ClosedForm),
        ]),
    })
}

/// Chiral Weyl algebra of a pairing `Ω` on generators `x1, x2, ...` with the
/// given weights and parities: rows `1°⊠1°`, `1°⊠x_a`, `x_a⊠1°` and
/// `x_a⊠x_b - Ω_{ab} t^{-1} 1°⊠1°`. `Ω` must be graded antisymmetric, of
/// weight `-1` and nondegenerate.
pub fn beta_gamma_bc_example(
    omega: &ScalarMatrix,
    weights: &[Scalar],
    parities: &[Parity],
) -> Result<ExampleBundle, CatalogError> {
    let n = omega.len();
    if weights.len() != n || parities.len() != n {
        return Err(CatalogError::InvalidPairing(format!(
            "{n}x{n} pairing with {} weights and {} parities",
            weights.len(),
            parities.len()
        )));
    }
    if invert(omega).is_none() {
        return Err(CatalogError::InvalidPairing("pairing is degenerate".into()));
    }
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let primal_gens: Vec<GeneratorSpec> = names
        .iter()
        .zip(weights.iter().zip(parities))
        .map(|(s, (w, p))| GeneratorSpec::new(s.clone(), 0, *p, w.clone()))
        .collect();
    // validates graded antisymmetry and weights
    let primal = ModeAlgebra::weyl_clifford(primal_gens.clone(), omega.clone())?;
    let r = n + 1;
    let x = |a: usize| a + 1;
    let mut gens = vec![GeneratorSpec::unit()];
    gens.extend(primal_gens.iter().cloned());
    let mut rows = vec![row_from_terms(r, &[(int(1), 0, 0, 0)])];
    let mut dual = vec![{
        let mut terms = vec![(int(1), 0, 0, 0)];
        for a in 0..n {
            for b in 0..n {
                terms.push((omega[a][b].clone(), -1, x(a), x(b)));
            }
        }
        row_from_terms(r, &terms)
    }];
    for a in 0..n {
        for (i, j) in [(0, x(a)), (x(a), 0)] {
            rows.push(row_from_terms(r, &[(int(1), 0, i, j)]));
            dual.push(row_from_terms(r, &[(int(1), 0, i, j)]));
        }
    }
    for a in 0..n {
        for b in 0..n {
            rows.push(row_from_terms(
                r,
                &[(int(1), 0, x(a), x(b)), (-omega[a][b].clone(), -1, 0, 0)],
            ));
            dual.push(row_from_terms(r, &[(int(1), 0, x(a), x(b))]));
        }
    }
    let datum = QlsDatum::new(QuadraticDatum::new(gens, rows)?)?;
    let zero_lie = LieData::abelian(vec![vec![Scalar::zero(); n]; n])?;
    let dual_engine = ModeAlgebra::abelian_ce(primal_gens.iter().map(|g| g.dual().0).collect(), zero_lie)?;
    let iota = curving_symplectic(&dual_engine, omega)?;
    let d = Derivation::zero(&dual_engine)?;
    let mut i0i = TensorState::zero();
    for a in 0..n {
        for b in 0..n {
            if omega[a][b].is_zero() {
                continue;
            }
            // (x_a ⊗ ψ_a)(0)(x_b ⊗ ψ_b) picks x_a(0)x_b ⊗ ψ_a ψ_b with sign (-1)^{p(ψ_a)p(x_b)}
            let psis = dual_engine.normal_order(&[(a, -1), (b, -1)])?;
            let odd = dual_engine.is_odd(a) && primal.is_odd(b);
            let c = if odd { -omega[a][b].clone() } else { omega[a][b].clone() };
            i0i.add_scaled(&TensorEngine::tensor(&State::vacuum(), &psis), &c);
        }
    }
    let name = if parities.iter().all(|p| *p == Parity::Even) {
        "beta-gamma"
    } else if parities.iter().all(|p| *p == Parity::Odd) {
        "bc"
    } else {
        "beta-gamma-bc"
    };
    Ok(ExampleBundle {
        name: name.into(),
        datum: ExampleDatum::Qls(datum),
        expected_dual: Some(dual),
        engines: Some(EnginePair {
            primal,
            dual: dual_engine,
        }),
        expected_d: Some(d),
        expected_iota: Some(iota),
        expected_i0i: Some(i0i),
        sources: BTreeMap::from([
            ("expected_dual", Source::ClosedForm),
            ("expected_d", Source::ClosedForm),
            ("expected_iota", Source::ClosedForm),
            ("expected_i0i", Source::Computed),
        ]),
    })
}

/// βγ system: one even pair of weight 1/2, `Ω_{12} = 1 = -Ω_{21}`.
pub fn beta_gamma() -> Result<ExampleBundle, CatalogError> {
    let omega = vec![vec![int(0), int(1)], vec![int(-1), int(0)]];
    beta_gamma_bc_example(&omega, &[rat(1, 2), rat(1, 2)], &[Parity::Even, Parity::Even])
}

/// bc system: one odd pair of weights 1 and 0, `Ω_{12} = Ω_{21} = 1`.
pub fn bc() -> Result<ExampleBundle, CatalogError> {
    let omega = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
    beta_gamma_bc_example(&omega, &[int(1), int(0)], &[Parity::Odd, Parity::Odd])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_brackets_from_matrices() {
        let f = sl2_structure_constants();
        // [e, f] = h, [h, e] = 2e, [h, f] = -2f
        assert_eq!(f[0][2], vec![int(0), int(1), int(0)]);
        assert_eq!(f[1][0], vec![int(2), int(0), int(0)]);
        assert_eq!(f[1][2], vec![int(0), int(0), int(-2)]);
        assert_eq!(f[2][0], vec![int(0), int(-1), int(0)]);
    }

    #[test]
    fn sl2_normalized_form_is_trace_form() {
        let lie = sl2(int(1)).unwrap();
        assert_eq!(lie.kappa(0, 2), &int(1));
        assert_eq!(lie.kappa(1, 1), &int(2));
        assert_eq!(lie.kappa(0, 0), &int(0));
        assert_eq!(killing_form(lie.structure_constants())[1][1], int(8));
    }

    #[test]
    fn perturbed_form_is_rejected() {
        let lie = sl2(int(1)).unwrap();
        let mut k = lie.kappa_matrix().clone();
        k[1][1] += int(1);
        let broken = LieData::new_unchecked(lie.structure_constants().clone(), k).unwrap();
        assert!(matches!(
            kac_moody_example(&broken, None),
            Err(CatalogError::InvalidLieData(_))
        ));
    }

    #[test]
    fn degenerate_pairing_rejected() {
        let zero = vec![vec![int(0); 2]; 2];
        assert!(matches!(
            beta_gamma_bc_example(&zero, &[rat(1, 2), rat(1, 2)], &[Parity::Even; 2]),
            Err(CatalogError::InvalidPairing(_))
        ));
    }

    #[test]
    fn wrong_weight_pairing_rejected() {
        let omega = vec![vec![int(0), int(1)], vec![int(-1), int(0)]];
        assert!(matches!(
            beta_gamma_bc_example(&omega, &[int(1), int(1)], &[Parity::Even; 2]),
            Err(CatalogError::InvalidPairing(_))
        ));
    }

    #[test]
    fn symmetric_even_pairing_rejected() {
        let omega = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert!(matches!(
            beta_gamma_bc_example(&omega, &[rat(1, 2), rat(1, 2)], &[Parity::Even; 2]),
            Err(CatalogError::InvalidPairing(_))
        ));
    }

    #[test]
    fn commutative_dual_degrees() {
        let b = commutative_example(&[2]).unwrap();
        let dual = crate::datum::dual_datum(b.datum.datum()).unwrap();
        assert_eq!(dual.generators()[0].degree, -3);
        assert_eq!(commutative_example(&[0, 0, 0]).unwrap().datum.datum().relations().len(), 9);
    }
}
