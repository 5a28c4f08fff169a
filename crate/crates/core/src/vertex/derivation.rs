//! Odd derivations of supercommutative engines, the Chevalley-Eilenberg
//! differential and curving elements.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::engine::{Letter, Monomial, State};
use super::tensor::{TensorEngine, TensorState};
use super::{EngineError, ModeAlgebra, ModeKind};
use crate::scalar::{rat, Scalar};

/// A derivation commuting with `T`, determined by its values on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    images: Vec<State>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Derivation {
    pub fn new(engine: &ModeAlgebra, images: Vec<State>) -> Result<Self, EngineError> {
        if !engine.is_commutative() {
            return Err(EngineError::Mismatch("derivations are only extended on commutative engines".into()));
        }
        if images.len() != engine.rank() {
            return Err(EngineError::Mismatch(format!(
                "{} images for {} generators",
                images.len(),
                engine.rank()
            )));
        }
        Ok(Self { images })
    }

    pub fn zero(engine: &ModeAlgebra) -> Result<Self, EngineError> {
        Self::new(engine, vec![State::zero(); engine.rank()])
    }

    pub fn image(&self, gen: usize) -> &State {
        &self.images[gen]
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(State::is_zero)
    }

    /// Leibniz extension: `d(x(-n) w) = (T^{n-1} dx / (n-1)!) w + (-1)^{p(x)} x(-n) dw`.
    pub fn apply(&self, engine: &ModeAlgebra, u: &State) -> Result<State, EngineError> {
        let mut cache = HashMap::new();
        let mut out = State::zero();
        for (mono, c) in u.terms() {
            let d = self.apply_mono(engine, mono, &mut cache)?;
            out.add_scaled(&d, c);
        }
        engine.check_cutoff(&out)?;
        Ok(out)
    }

    fn letter_image(
        &self,
        engine: &ModeAlgebra,
        (g, m): Letter,
        cache: &mut HashMap<Letter, State>,
    ) -> Result<State, EngineError> {
        if let Some(s) = cache.get(&(g, m)) {
            return Ok(s.clone());
        }
        let s = engine.divided_translation(&self.images[g], (-m - 1) as u32)?;
        cache.insert((g, m), s.clone());
        Ok(s)
    }

    fn apply_mono(
        &self,
        engine: &ModeAlgebra,
        mono: &[Letter],
        cache: &mut HashMap<Letter, State>,
    ) -> Result<State, EngineError> {
        let Some(&first) = mono.first() else {
            return Ok(State::zero());
        };
        let rest = State::single(mono[1..].to_vec(), Scalar::one());
        let mut out = multiply(engine, &self.letter_image(engine, first, cache)?, &rest);
        let d_rest = self.apply_mono(engine, &mono[1..], cache)?;
        let tail = engine.apply_mode(first, &d_rest);
        if engine.is_odd(first.0) {
            out.sub_assign(&tail);
        } else {
            out.add_assign(&tail);
        }
        Ok(out)
    }

    /// `d` on the `side` factor of a tensor, with the Koszul sign of passing
    /// the other factor when acting on the right.
    pub fn apply_tensor(&self, pair: &TensorEngine, side: Side, t: &TensorState) -> Result<TensorState, EngineError> {
        let mut out = TensorState::zero();
        for ((a, b), c) in t.terms() {
            let piece = match side {
                Side::Left => {
                    let da = self.apply(pair.left, &State::single(a.clone(), Scalar::one()))?;
                    TensorEngine::tensor(&da, &State::single(b.clone(), Scalar::one()))
                }
                Side::Right => {
                    let db = self.apply(pair.right, &State::single(b.clone(), Scalar::one()))?;
                    let piece = TensorEngine::tensor(&State::single(a.clone(), Scalar::one()), &db);
                    if pair.left.monomial_odd(a) {
                        piece.scaled(&-Scalar::one())
                    } else {
                        piece
                    }
                }
            };
            out.add_scaled(&piece, c);
        }
        Ok(out)
    }
}

/// Product in a supercommutative engine: the letters of `a` act on `b`.
pub fn multiply(engine: &ModeAlgebra, a: &State, b: &State) -> State {
    let mut out = State::zero();
    for (mono, c) in a.terms() {
        let mut s = b.clone();
        for &l in mono.iter().rev() {
            s = engine.apply_mode(l, &s);
        }
        out.add_scaled(&s, c);
    }
    out
}

fn lie_of(engine: &ModeAlgebra) -> Result<&super::LieData, EngineError> {
    match engine.kind() {
        ModeKind::AbelianCe(lie) => Ok(lie),
        _ => Err(EngineError::Mismatch("expected a Chevalley-Eilenberg engine".into())),
    }
}

fn quadratic(engine: &ModeAlgebra, a: Letter, b: Letter) -> State {
    let mono: Monomial = vec![b];
    engine.apply_mode_mono(a, &mono)
}

/// `d(c^a) = -1/2 sum_{bc} f^a_{bc} c^b c^c`, extended as a derivation.
pub fn ce_differential(engine: &ModeAlgebra) -> Result<Derivation, EngineError> {
    let lie = lie_of(engine)?;
    let n = lie.dim();
    let half = rat(-1, 2);
    let images = (0..n)
        .map(|a| {
            let mut s = State::zero();
            for b in 0..n {
                for c in 0..n {
                    let f = lie.f(b, c, a);
                    if !f.is_zero() {
                        s.add_scaled(&quadratic(engine, (b, -1), (c, -1)), &(f * &half));
                    }
                }
            }
            s
        })
        .collect();
    Derivation::new(engine, images)
}

/// `ι = -sum_{ab} κ_{ab} (∂c^a) c^b`.
pub fn curving_affine(engine: &ModeAlgebra) -> Result<State, EngineError> {
    let lie = lie_of(engine)?;
    let mut s = State::zero();
    for a in 0..lie.dim() {
        for b in 0..lie.dim() {
            let k = lie.kappa(a, b);
            if !k.is_zero() {
                s.add_scaled(&quadratic(engine, (a, -2), (b, -1)), &-k.clone());
            }
        }
    }
    Ok(s)
}

/// `ι = -sum_{ab} Ω_{ab} ψ_a ψ_b`.
pub fn curving_symplectic(engine: &ModeAlgebra, omega: &[Vec<Scalar>]) -> Result<State, EngineError> {
    if !engine.is_commutative() || omega.len() != engine.rank() {
        return Err(EngineError::Mismatch("pairing does not match the commutative engine".into()));
    }
    let mut s = State::zero();
    for (a, row) in omega.iter().enumerate() {
        for (b, w) in row.iter().enumerate() {
            if !w.is_zero() {
                s.add_scaled(&quadratic(engine, (a, -1), (b, -1)), &-w.clone());
            }
        }
    }
    Ok(s)
}

/// Sum of `c * (∂^k x_a / k!) x_b` terms, i.e. `c * x_a(-k-1) x_b(-1)|0>`.
pub fn bilinear_state(engine: &ModeAlgebra, terms: &[(Scalar, usize, u32, usize)]) -> State {
    let mut s = State::zero();
    for (c, a, k, b) in terms {
        s.add_scaled(&quadratic(engine, (*a, -(*k as i64) - 1), (*b, -1)), c);
    }
    s
}
