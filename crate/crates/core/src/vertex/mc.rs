//! Maurer-Cartan, homomorphism and CDG identity checks.

use std::fmt;

use num_traits::{One, Zero};

use super::derivation::{Derivation, Side};
use super::engine::{Monomial, State};
use super::tensor::{TensorEngine, TensorState};
use super::{EngineError, LieData, ModeAlgebra};
use crate::scalar::{int, rat, Scalar};

/// A defining relation `y_a(n) y_b = ...` of the affine algebra, with the
/// generator pair taken unordered (`a <= b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationWitness {
    pub n: i64,
    pub a: usize,
    pub b: usize,
}

impl RelationWitness {
    pub fn new(n: i64, a: usize, b: usize) -> Self {
        Self {
            n,
            a: a.min(b),
            b: a.max(b),
        }
    }
}

impl fmt::Display for RelationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y_{}({}) y_{}", self.a, self.n, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MCReport {
    /// `dα + 1/2 α(0)α + 1/2 ι`.
    pub residual_e1: TensorState,
    /// `α(m)α` for `m = 1..=m_max`.
    pub residuals_em: Vec<TensorState>,
    pub passed: bool,
    /// Smallest relation read off the nonzero residuals, when they have the
    /// shape `c^a(-k-1) c^b(-1)` on the dual side.
    pub witness: Option<RelationWitness>,
}

/// Which factor of the tensor product carries the dual (commutative) engine.
#[derive(Debug, Clone)]
pub struct McSetup<'a> {
    pub pair: TensorEngine<'a>,
    pub dual_side: Side,
    pub d: &'a Derivation,
    pub curving: &'a State,
}

impl McSetup<'_> {
    fn curving_tensor(&self) -> TensorState {
        match self.dual_side {
            Side::Left => TensorEngine::tensor(self.curving, &State::vacuum()),
            Side::Right => TensorEngine::tensor(&State::vacuum(), self.curving),
        }
    }

    fn dual_monomial<'b>(&self, key: &'b (Monomial, Monomial)) -> &'b Monomial {
        match self.dual_side {
            Side::Left => &key.0,
            Side::Right => &key.1,
        }
    }
}

fn check_degree(pair: &TensorEngine, alpha: &TensorState) -> Result<(), EngineError> {
    if let Some((key, _)) = alpha.terms().find(|(k, _)| pair.term_degree(k) != -1) {
        return Err(EngineError::Mismatch(format!(
            "element has a term of degree {}, expected -1",
            pair.term_degree(key)
        )));
    }
    Ok(())
}

/// Locality bound: `u(n)v = 0` for `n > bound`.
fn tensor_bound(pair: &TensorEngine, alpha: &TensorState) -> i64 {
    let w = alpha
        .terms()
        .map(|(k, _)| pair.term_weight(k))
        .max()
        .unwrap_or_else(Scalar::zero);
    let two_w: Scalar = w * int(2);
    let b = two_w.ceil().to_integer();
    i64::try_from(b).expect("weight fits in i64") - 1
}

/// Twisted Maurer-Cartan check for `α` in `B ⊗ V` (or `V ⊗ B`).
/// `m_max` defaults to the locality bound.
pub fn mc_check(setup: &McSetup, alpha: &TensorState, m_max: Option<i64>) -> Result<MCReport, EngineError> {
    let pair = &setup.pair;
    check_degree(pair, alpha)?;
    let m_max = m_max.unwrap_or_else(|| tensor_bound(pair, alpha).max(1));
    let half = rat(1, 2);
    let mut e1 = setup.d.apply_tensor(pair, setup.dual_side, alpha)?;
    e1.add_scaled(&pair.nth_product(alpha, 0, alpha)?, &half);
    e1.add_scaled(&setup.curving_tensor(), &half);
    let mut ems = Vec::new();
    for m in 1..=m_max {
        ems.push(pair.nth_product(alpha, m, alpha)?);
    }
    let passed = e1.is_zero() && ems.iter().all(TensorState::is_zero);
    let witness = std::iter::once((0, &e1))
        .chain(ems.iter().enumerate().map(|(i, e)| (i as i64 + 1, e)))
        .flat_map(|(m, e)| {
            e.terms()
                .filter_map(move |(key, _)| decode_witness(setup.dual_monomial(key), m))
                .collect::<Vec<_>>()
        })
        .min();
    Ok(MCReport {
        residual_e1: e1,
        residuals_em: ems,
        passed,
        witness,
    })
}

/// `c^a(-k-1) c^b(-1)` in residual `m` comes from `y_a(m+k) y_b`.
fn decode_witness(mono: &Monomial, m: i64) -> Option<RelationWitness> {
    match mono.as_slice() {
        [(a, p), (b, -1)] if *p <= -1 => Some(RelationWitness::new(m + (-p - 1), *a, *b)),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McMode {
    /// `v(n)v = 0` for all `n >= 0`.
    Full,
    /// `v(0)v = 0` only.
    Weak,
}

fn state_bound(engine: &ModeAlgebra, v: &State) -> i64 {
    let w = engine.max_weight(v).unwrap_or_else(Scalar::zero) * int(2);
    i64::try_from(w.ceil().to_integer()).expect("weight fits in i64") - 1
}

/// Plain Maurer-Cartan equation for a degree `-1` state.
pub fn mc_plain(engine: &ModeAlgebra, v: &State, mode: McMode) -> Result<bool, EngineError> {
    if let Some((m, _)) = v.terms().find(|(m, _)| engine.monomial_degree(m) != -1) {
        return Err(EngineError::Mismatch(format!(
            "state has a term of degree {}, expected -1",
            engine.monomial_degree(m)
        )));
    }
    let top = match mode {
        McMode::Weak => 0,
        McMode::Full => state_bound(engine, v),
    };
    for n in 0..=top {
        if !engine.nth_product(v, n, v)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Plain Maurer-Cartan equation for a degree `-1` tensor.
pub fn mc_plain_tensor(pair: &TensorEngine, v: &TensorState, mode: McMode) -> Result<bool, EngineError> {
    check_degree(pair, v)?;
    let top = match mode {
        McMode::Weak => 0,
        McMode::Full => tensor_bound(pair, v),
    };
    for n in 0..=top {
        if !pair.nth_product(v, n, v)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationFailure {
    pub witness: RelationWitness,
    /// `y_a(n) y_b` minus its required value, for the ordered pair.
    pub defect: State,
    pub ordered: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomReport {
    pub passed: bool,
    pub failures: Vec<RelationFailure>,
    pub witness: Option<RelationWitness>,
    /// Mode commutators verified on test vectors (only run when the
    /// relations hold).
    pub commutators_checked: usize,
    pub commutator_failures: Vec<(usize, usize, i64, i64)>,
}

/// Checks that `J_a -> y_a` respects the affine relations
/// `y_a(0)y_b = sum_c f^c_{ab} y_c`, `y_a(1)y_b = κ_{ab}|0>`, `y_a(n)y_b = 0`
/// for `n >= 2`.
pub fn hom_check(lie: &LieData, target: &ModeAlgebra, images: &[State]) -> Result<HomReport, EngineError> {
    let n = lie.dim();
    if images.len() != n {
        return Err(EngineError::Mismatch(format!("{} images for {n} generators", images.len())));
    }
    for y in images {
        target.check_cutoff(y)?;
        if y.terms().any(|(m, _)| target.monomial_degree(m) != 0) {
            return Err(EngineError::Mismatch("images must have degree 0".into()));
        }
    }
    let mut failures = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let top = (state_bound(target, &images[a]).max(0) + state_bound(target, &images[b]).max(0)).max(1);
            for k in 0..=top {
                let mut defect = target.nth_product(&images[a], k, &images[b])?;
                match k {
                    0 => {
                        for c in 0..n {
                            defect.add_scaled(&images[c], &-lie.f(a, b, c).clone());
                        }
                    }
                    1 => defect.add_scaled(&State::vacuum(), &-lie.kappa(a, b).clone()),
                    _ => {}
                }
                if !defect.is_zero() {
                    failures.push(RelationFailure {
                        witness: RelationWitness::new(k, a, b),
                        defect,
                        ordered: (a, b),
                    });
                }
            }
        }
    }
    let witness = failures.iter().map(|f| f.witness).min();
    let mut report = HomReport {
        passed: failures.is_empty(),
        failures,
        witness,
        commutators_checked: 0,
        commutator_failures: Vec::new(),
    };
    if report.passed {
        check_commutators(lie, target, images, &mut report)?;
        report.passed = report.commutator_failures.is_empty();
    }
    Ok(report)
}

/// `[y_a(l), y_b(m)] w = sum_c f^c_{ab} y_c(l+m) w + l κ_{ab} δ_{l+m,0} w` on a
/// fixed grid of modes and test vectors; cases that leave the cutoff are
/// skipped.
fn check_commutators(
    lie: &LieData,
    target: &ModeAlgebra,
    images: &[State],
    report: &mut HomReport,
) -> Result<(), EngineError> {
    let mut vectors = vec![State::vacuum()];
    vectors.extend((0..target.rank()).map(|g| target.generator(g)));
    let n = lie.dim();
    for a in 0..n {
        for b in 0..n {
            let sign_odd = target.state_odd(&images[a]).unwrap_or(false) && target.state_odd(&images[b]).unwrap_or(false);
            for l in -2..=2 {
                for m in -2..=2 {
                    for w in &vectors {
                        let attempt = || -> Result<bool, EngineError> {
                            let ybw = target.nth_product(&images[b], m, w)?;
                            let yaw = target.nth_product(&images[a], l, w)?;
                            let mut lhs = target.nth_product(&images[a], l, &ybw)?;
                            let swapped = target.nth_product(&images[b], m, &yaw)?;
                            lhs.add_scaled(&swapped, &if sign_odd { Scalar::one() } else { -Scalar::one() });
                            let mut rhs = State::zero();
                            for c in 0..n {
                                let f = lie.f(a, b, c);
                                if !f.is_zero() {
                                    rhs.add_scaled(&target.nth_product(&images[c], l + m, w)?, f);
                                }
                            }
                            if l + m == 0 {
                                rhs.add_scaled(w, &(int(l) * lie.kappa(a, b)));
                            }
                            Ok(lhs == rhs)
                        };
                        match attempt() {
                            Ok(true) => report.commutators_checked += 1,
                            Ok(false) => {
                                report.commutators_checked += 1;
                                report.commutator_failures.push((a, b, l, m));
                            }
                            Err(EngineError::CutoffExceeded { .. }) => {}
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdgReport {
    pub passed: bool,
    pub states_checked: usize,
    /// First basis monomial where `d²u != ι(0)u`.
    pub first_failure: Option<Monomial>,
    /// `d(ι)` vanishes modulo total derivatives: the curving is only defined
    /// in `B / T B`.
    pub d_iota_exact: bool,
}

/// `d(d(u)) = ι(0) u` on every basis state of weight at most `max_weight`,
/// and `d(ι) = 0` in `B / T B`.
pub fn cdg_identity_check(
    engine: &ModeAlgebra,
    d: &Derivation,
    curving: &State,
    max_weight: i64,
) -> Result<CdgReport, EngineError> {
    let basis = engine.basis(max_weight)?;
    let mut first_failure = None;
    for mono in &basis {
        let u = State::single(mono.clone(), Scalar::one());
        let dd = d.apply(engine, &d.apply(engine, &u)?)?;
        let iu = engine.nth_product_unchecked(curving, 0, &u);
        if dd != iu {
            first_failure = Some(mono.clone());
            break;
        }
    }
    let d_iota_exact = engine.translation_preimage(&d.apply(engine, curving)?)?.is_some();
    Ok(CdgReport {
        passed: first_failure.is_none() && d_iota_exact,
        states_checked: basis.len(),
        first_failure,
        d_iota_exact,
    })
}
